//! Built-in groups and homomorphisms.

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::gmodule::SearchBounds;
use crate::group::{load_group, quotient_named, subgroup_named, Group, GroupDescription, GroupHom};
use crate::lattice::enumerate_normal_subgroups;

/// Catalog names in corpus order.
pub const GROUP_NAMES: &[&str] = &[
    "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12", "Z13", "Z14", "Z15", "Z16", "V4",
    "Q8", "Z2xZ4", "S3", "D4", "D5", "A4", "S4", "D6", "A5", "S5", "A5xA5",
];

fn cyclic(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

/// `0=1 1=-1 2=i 3=-i 4=j 5=-j 6=k 7=-k`
fn quaternion() -> Vec<Vec<usize>> {
    const UNITS: [[(i8, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    let split = |x: usize| (if x.is_multiple_of(2) { 1 } else { -1 }, x / 2);
    (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (sa, ua) = split(a);
                    let (sb, ub) = split(b);
                    let (s, u) = UNITS[ua][ub];
                    2 * u + usize::from(sa * sb * s < 0)
                })
                .collect()
        })
        .collect()
}

fn shifted(p: &[usize], by: usize, degree: usize) -> Vec<usize> {
    (0..degree)
        .map(|x| if x >= by && x < by + p.len() { p[x - by] + by } else { x })
        .collect()
}

fn build(name: &str, caps: &Caps) -> Result<Group> {
    let perm = |degree: usize, gens: &[&[usize]]| {
        let gens: Vec<Vec<usize>> = gens.iter().map(|g| g.to_vec()).collect();
        Group::from_permutations(name, degree, &gens, caps)
    };
    let three_cycle = [1, 2, 0, 3, 4];
    let five_cycle = [1, 2, 3, 4, 0];
    match name {
        "V4" => Group::from_table(name, (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect(), caps),
        "Q8" => Group::from_table(name, quaternion(), caps),
        "Z2xZ4" => {
            let rows = (0..8)
                .map(|x| {
                    (0..8)
                        .map(|y| ((x / 4 + y / 4) % 2) * 4 + (x % 4 + y % 4) % 4)
                        .collect()
                })
                .collect();
            Group::from_table(name, rows, caps)
        }
        "S3" => perm(3, &[&[1, 0, 2], &[1, 2, 0]]),
        "D4" => perm(4, &[&[1, 2, 3, 0], &[3, 2, 1, 0]]),
        "D5" => perm(5, &[&[1, 2, 3, 4, 0], &[0, 4, 3, 2, 1]]),
        "A4" => perm(4, &[&[1, 2, 0, 3], &[1, 0, 3, 2]]),
        "S4" => perm(4, &[&[1, 0, 2, 3], &[1, 2, 3, 0]]),
        "D6" => perm(6, &[&[1, 2, 3, 4, 5, 0], &[0, 5, 4, 3, 2, 1]]),
        "A5" => perm(5, &[&three_cycle, &five_cycle]),
        "S5" => perm(5, &[&[1, 0, 2, 3, 4], &five_cycle]),
        "A5xA5" => perm(
            10,
            &[
                &shifted(&three_cycle, 0, 10),
                &shifted(&five_cycle, 0, 10),
                &shifted(&three_cycle, 5, 10),
                &shifted(&five_cycle, 5, 10),
            ],
        ),
        _ => {
            let n: usize = name
                .strip_prefix('Z')
                .and_then(|k| k.parse().ok())
                .filter(|&k| k >= 1)
                .ok_or_else(|| Error::Invalid(format!("no catalog group named `{name}`")))?;
            Group::from_table(name, cyclic(n), caps)
        }
    }
}

fn cache() -> &'static Mutex<HashMap<String, Arc<Group>>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<Group>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// A catalog group by name; repeated calls share one instance.
pub fn group(name: &str) -> Option<Arc<Group>> {
    if !GROUP_NAMES.contains(&name) {
        return None;
    }
    if let Some(g) = cache().lock().expect("catalog cache").get(name) {
        return Some(g.clone());
    }
    let g = Arc::new(build(name, &Caps::default()).expect("catalog groups are valid"));
    let mut map = cache().lock().expect("catalog cache");
    Some(map.entry(name.to_string()).or_insert(g).clone())
}

/// Index of the element acting as `perm`, if any.
pub fn find_permutation(g: &Group, perm: &[usize]) -> Option<usize> {
    (0..g.order()).find(|&a| {
        g.permutation(a)
            .is_some_and(|p| p.len() == perm.len() && p.iter().zip(perm).all(|(&x, &y)| x as usize == y))
    })
}

fn permutation_hom(source: &Arc<Group>, target: &Arc<Group>, f: impl Fn(&[u16]) -> Vec<usize>) -> Result<GroupHom> {
    let images = (0..source.order())
        .map(|a| {
            let p = source.permutation(a).ok_or(Error::Invalid("source is not a permutation group".into()))?;
            find_permutation(target, &f(p)).ok_or_else(|| Error::NotHomomorphism("image outside target".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    GroupHom::new(source.clone(), target.clone(), images)
}

#[derive(Clone, Debug)]
pub struct NamedHom {
    pub name: String,
    pub hom: GroupHom,
}

/// Groups, homomorphisms and the module search box for a suite run.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub name: String,
    pub groups: Vec<Arc<Group>>,
    pub homs: Vec<NamedHom>,
    pub bounds: SearchBounds,
}

impl Corpus {
    /// A corpus over `groups` whose homomorphisms are all quotient maps.
    pub fn from_groups(name: &str, groups: Vec<Arc<Group>>) -> Result<Corpus> {
        let mut homs = Vec::new();
        for g in &groups {
            homs.extend(quotient_maps(g)?);
        }
        Ok(Corpus {
            name: name.to_string(),
            groups,
            homs,
            bounds: SearchBounds::default(),
        })
    }

    pub fn group(&self, name: &str) -> Option<&Arc<Group>> {
        self.groups.iter().find(|g| g.name() == name)
    }
}

/// `G -> G/N` for every normal subgroup `N`, in lattice order.
pub fn quotient_maps(g: &Arc<Group>) -> Result<Vec<NamedHom>> {
    let l = enumerate_normal_subgroups(g.clone());
    l.ids()
        .map(|i| {
            let name = format!("{}/{}", g.name(), l.label(i));
            let (_, hom) = quotient_named(g, l.member(i), &name)?;
            Ok(NamedHom {
                name: format!("{} -> {}", g.name(), name),
                hom,
            })
        })
        .collect()
}

fn named(name: &str, hom: GroupHom) -> NamedHom {
    NamedHom {
        name: name.to_string(),
        hom,
    }
}

/// Projections, inclusions and a diagonal map between catalog groups.
pub fn extra_homs() -> Result<Vec<NamedHom>> {
    let get = |n: &str| group(n).expect("catalog name");
    let (a5, aa, s3, s4, a4) = (get("A5"), get("A5xA5"), get("S3"), get("S4"), get("A4"));
    let mut out = Vec::new();
    for (label, offset) in [("first", 0), ("second", 5)] {
        let hom = permutation_hom(&aa, &a5, |p| (0..5).map(|x| p[x + offset] as usize - offset).collect())?;
        out.push(named(&format!("A5xA5 -> A5 ({label} projection)"), hom));
    }
    let diagonal = permutation_hom(&a5, &aa, |p| {
        (0..10).map(|x| if x < 5 { p[x] as usize } else { p[x - 5] as usize + 5 }).collect()
    })?;
    out.push(named("A5 -> A5xA5 (diagonal)", diagonal));

    let l = enumerate_normal_subgroups(s3.clone());
    let a3_set = l.members().iter().find(|m| m.len() == 3).expect("A3").clone();
    let (_, incl) = subgroup_named(&s3, &a3_set, "A3")?;
    out.push(named("A3 -> S3 (inclusion)", incl));

    let z3_to_s3 = GroupHom::from_generator_images(get("Z3"), s3.clone(), &[find_permutation(&s3, &[1, 2, 0]).expect("3-cycle")])?;
    out.push(named("Z3 -> S3", z3_to_s3));
    out.push(named("Z2 -> Z4", GroupHom::from_generator_images(get("Z2"), get("Z4"), &[2])?));

    let v4 = get("V4");
    let images: Vec<usize> = v4
        .generators()
        .iter()
        .map(|&g| {
            // V4 elements are bit pairs; bit 0 and bit 1 go to two double transpositions.
            let perm: &[usize] = if g == 1 { &[1, 0, 3, 2] } else { &[2, 3, 0, 1] };
            find_permutation(&a4, perm).expect("double transposition")
        })
        .collect();
    out.push(named("V4 -> A4", GroupHom::from_generator_images(v4, a4.clone(), &images)?));
    out.push(named("A4 -> S4 (inclusion)", permutation_hom(&a4, &s4, |p| p.iter().map(|&x| x as usize).collect())?));
    Ok(out)
}

/// Every catalog group, all quotient maps, and [`extra_homs`].
pub fn builtin_catalog() -> Result<Corpus> {
    let groups = GROUP_NAMES.iter().map(|n| group(n).expect("catalog name")).collect();
    let mut corpus = Corpus::from_groups("builtin", groups)?;
    corpus.homs.extend(extra_homs()?);
    Ok(corpus)
}

/// Every `*.json` file in `dir`, sorted by file name, as one corpus.
pub fn load_corpus_dir(dir: &Path, caps: &Caps) -> Result<Corpus> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut groups = Vec::new();
    for path in paths {
        let text = std::fs::read_to_string(&path)?;
        let loaded = serde_json::from_str::<GroupDescription>(&text)
            .map_err(Error::from)
            .and_then(|d| load_group(&d, caps))
            .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        groups.push(Arc::new(loaded));
    }
    Corpus::from_groups(&dir.display().to_string(), groups)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders() {
        let expected = [
            ("Z12", 12),
            ("V4", 4),
            ("Q8", 8),
            ("Z2xZ4", 8),
            ("D4", 8),
            ("D5", 10),
            ("A4", 12),
            ("S4", 24),
            ("D6", 12),
            ("A5", 60),
            ("S5", 120),
            ("A5xA5", 3600),
        ];
        for (name, order) in expected {
            assert_eq!(group(name).unwrap().order(), order, "{name}");
        }
        assert!(group("Z17").is_none());
        assert!(Arc::ptr_eq(&group("S3").unwrap(), &group("S3").unwrap()));
    }

    #[test]
    fn q8_and_z2xz4_differ() {
        let q8 = group("Q8").unwrap();
        let z = group("Z2xZ4").unwrap();
        assert!(!q8.is_abelian());
        assert!(z.is_abelian());
        assert_eq!((0..8).filter(|&a| q8.element_order(a) == 4).count(), 6);
        assert_eq!((0..8).filter(|&a| z.element_order(a) == 4).count(), 4);
    }

    #[test]
    fn extra_homs_are_valid() {
        let homs = extra_homs().unwrap();
        assert_eq!(homs.len(), 8);
        let first = &homs[0].hom;
        assert!(first.is_surjective());
        assert_eq!(first.kernel().len(), 60);
        assert!(homs[2].hom.is_injective());
        assert!(homs.iter().skip(3).all(|h| h.hom.is_injective()));
    }
}
