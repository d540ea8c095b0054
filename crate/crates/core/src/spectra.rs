//! Classes of normal subgroups ("spectra") and their membership predicates.
//!
//! Universal conditions quantify over every member of the lattice,
//! including the whole group. Strong irreducibility is read as
//! `a ∩ b ⊆ n ⇒ a ⊆ n or b ⊆ n`; the other direction holds for every
//! subgroup and would make the class meaningless.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::gmodule::{self, SearchBounds};
use crate::group::GroupHom;
use crate::lattice::{radical, MemberId, NormalLattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpectrumKind {
    /// Proper normal subgroups.
    Prp,
    /// Prime normal subgroups.
    Spec,
    /// Minimal primes (over the trivial subgroup).
    MinSpec,
    Max,
    Min,
    /// Primary normal subgroups.
    Prim,
    Rad,
    #[serde(rename = "Irr+")]
    IrrPlus,
    /// Meet-irreducible normal subgroups.
    Irr,
    /// Normal closures of single elements.
    Prin,
    Fgen,
    Reg,
    /// Kernels of simple modules.
    Pmtv,
}

impl SpectrumKind {
    pub const ALL: [SpectrumKind; 13] = [
        SpectrumKind::Prp,
        SpectrumKind::Spec,
        SpectrumKind::MinSpec,
        SpectrumKind::Max,
        SpectrumKind::Min,
        SpectrumKind::Prim,
        SpectrumKind::Rad,
        SpectrumKind::IrrPlus,
        SpectrumKind::Irr,
        SpectrumKind::Prin,
        SpectrumKind::Fgen,
        SpectrumKind::Reg,
        SpectrumKind::Pmtv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpectrumKind::Prp => "Prp",
            SpectrumKind::Spec => "Spec",
            SpectrumKind::MinSpec => "MinSpec",
            SpectrumKind::Max => "Max",
            SpectrumKind::Min => "Min",
            SpectrumKind::Prim => "Prim",
            SpectrumKind::Rad => "Rad",
            SpectrumKind::IrrPlus => "Irr+",
            SpectrumKind::Irr => "Irr",
            SpectrumKind::Prin => "Prin",
            SpectrumKind::Fgen => "Fgen",
            SpectrumKind::Reg => "Reg",
            SpectrumKind::Pmtv => "Pmtv",
        }
    }
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpectrumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let key = if lower == "irrplus" { "irr+" } else { lower.as_str() };
        SpectrumKind::ALL
            .into_iter()
            .find(|k| k.name().to_ascii_lowercase() == key)
            .ok_or_else(|| Error::Invalid(format!("unknown spectrum kind `{s}`")))
    }
}

/// A set of proper lattice members, tagged with the class it realizes.
#[derive(Clone, Debug)]
pub struct Spectrum {
    lattice: Arc<NormalLattice>,
    kind: SpectrumKind,
    members: Vec<MemberId>,
    provenance: Vec<String>,
}

impl Spectrum {
    /// Members are sorted; the whole group is rejected.
    pub fn new(lattice: Arc<NormalLattice>, kind: SpectrumKind, mut members: Vec<MemberId>) -> Result<Spectrum> {
        members.sort_unstable();
        members.dedup();
        if let Some(&top) = members.iter().find(|&&m| m == lattice.top()) {
            return Err(Error::NotProper(top));
        }
        if members.iter().any(|&m| m >= lattice.len()) {
            return Err(Error::Invalid("spectrum member out of range".into()));
        }
        Ok(Spectrum {
            lattice,
            kind,
            members,
            provenance: Vec::new(),
        })
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Spectrum {
        self.provenance.push(note.into());
        self
    }

    pub fn lattice(&self) -> &Arc<NormalLattice> {
        &self.lattice
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn members(&self) -> &[MemberId] {
        &self.members
    }

    pub fn contains(&self, m: MemberId) -> bool {
        self.members.binary_search(&m).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    /// Member set as a bitmask over lattice indices.
    pub fn mask(&self) -> BitSet {
        BitSet::from_indices(self.lattice.len(), self.members.iter().copied())
    }
}

#[derive(Clone, Debug, Default)]
pub struct SpectrumOptions {
    pub pmtv_bounds: Option<SearchBounds>,
    pub caps: Caps,
}

fn ensure_proper(l: &NormalLattice, n: MemberId) -> Result<()> {
    if n == l.top() {
        Err(Error::NotProper(n))
    } else {
        Ok(())
    }
}

/// A pair `(a, b)` with `[a, b] ⊆ p` but neither inside `p`.
pub fn prime_violation(l: &NormalLattice, p: MemberId) -> Result<Option<(MemberId, MemberId)>> {
    ensure_proper(l, p)?;
    for a in l.ids() {
        if l.leq(a, p) {
            continue;
        }
        for b in a..l.len() {
            if !l.leq(b, p) && l.leq(l.commutator_product(a, b), p) {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

pub fn is_prime(l: &NormalLattice, p: MemberId) -> Result<bool> {
    Ok(prime_violation(l, p)?.is_none())
}

/// The element-wise criterion: `[<a>, <b>] ⊆ p` forces `<a> ⊆ p` or
/// `<b> ⊆ p`, where `<a>` is the normal closure of `a`. Normal closures are
/// constant on conjugacy classes, so one representative per class is checked.
pub fn is_prime_elementwise(l: &NormalLattice, p: MemberId) -> Result<bool> {
    ensure_proper(l, p)?;
    let g = l.group();
    let reps: Vec<usize> = g.conjugacy_classes().iter().map(|c| c[0]).collect();
    for &a in &reps {
        let na = l.principal(a);
        if l.leq(na, p) {
            continue;
        }
        for &b in &reps {
            let nb = l.principal(b);
            if !l.leq(nb, p) && l.leq(l.commutator_product(na, nb), p) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_primary(l: &NormalLattice, q: MemberId, primes: &Spectrum) -> Result<bool> {
    ensure_proper(l, q)?;
    let root = radical(l, q, primes);
    for a in l.ids() {
        if l.leq(a, q) {
            continue;
        }
        for b in l.ids() {
            if l.leq(l.commutator_product(a, b), q) && !l.leq(b, root) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_radical(l: &NormalLattice, n: MemberId, primes: &Spectrum) -> Result<bool> {
    ensure_proper(l, n)?;
    Ok(radical(l, n, primes) == n)
}

/// Meet-irreducible: `n = a ∩ b` forces `n = a` or `n = b`.
pub fn is_irreducible(l: &NormalLattice, n: MemberId) -> Result<bool> {
    ensure_proper(l, n)?;
    for a in l.ids() {
        for b in a..l.len() {
            if l.meet(a, b) == n && a != n && b != n {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A pair `(a, b)` with `a ∩ b ⊆ n` but neither inside `n`.
pub fn strong_irreducibility_violation(l: &NormalLattice, n: MemberId) -> Option<(MemberId, MemberId)> {
    for a in (0..l.len()).rev() {
        if l.leq(a, n) {
            continue;
        }
        for b in (0..=a).rev() {
            if !l.leq(b, n) && l.leq(l.meet(a, b), n) {
                return Some((a, b));
            }
        }
    }
    None
}

pub fn is_strongly_irreducible(l: &NormalLattice, n: MemberId) -> Result<bool> {
    ensure_proper(l, n)?;
    Ok(strong_irreducibility_violation(l, n).is_none())
}

/// Primes containing `n` that contain no smaller prime containing `n`.
pub fn minimal_primes_over(primes: &Spectrum, n: MemberId) -> Vec<MemberId> {
    let l = primes.lattice();
    let over: Vec<MemberId> = primes.members().iter().copied().filter(|&p| l.leq(n, p)).collect();
    over.iter()
        .copied()
        .filter(|&p| !over.iter().any(|&q| q != p && l.leq(q, p)))
        .collect()
}

/// The trivial subgroup is prime iff the lattice is uniform and no
/// nontrivial normal subgroup is abelian. This evaluates the right-hand
/// side directly from elements, without commutator products.
pub fn uniform_without_abelian(l: &NormalLattice) -> bool {
    let g = l.group();
    let nontrivial: Vec<MemberId> = l.ids().filter(|&i| i != l.trivial()).collect();
    let uniform = nontrivial.iter().all(|&a| {
        nontrivial
            .iter()
            .all(|&b| l.member(a).intersection(l.member(b)).len() > 1)
    });
    let abelian_member = nontrivial.iter().any(|&n| {
        let gens = l.generators(n);
        gens.iter()
            .all(|&x| gens.iter().all(|&y| g.mul(x, y) == g.mul(y, x)))
    });
    uniform && !abelian_member
}

pub fn compute_spectrum(l: &Arc<NormalLattice>, kind: SpectrumKind, opts: &SpectrumOptions) -> Result<Spectrum> {
    let proper: Vec<MemberId> = l.proper_ids().collect();
    let filter = |pred: &dyn Fn(MemberId) -> Result<bool>| -> Result<Vec<MemberId>> {
        let mut out = Vec::new();
        for &m in &proper {
            if pred(m)? {
                out.push(m);
            }
        }
        Ok(out)
    };
    let primes = || -> Result<Spectrum> {
        Spectrum::new(l.clone(), SpectrumKind::Spec, filter(&|m| is_prime(l, m))?)
    };
    let spectrum = match kind {
        SpectrumKind::Prp => Spectrum::new(l.clone(), kind, proper.clone())?,
        SpectrumKind::Spec => primes()?,
        SpectrumKind::MinSpec => {
            let spec = primes()?;
            Spectrum::new(l.clone(), kind, minimal_primes_over(&spec, l.trivial()))?
                .with_note("minimal primes belonging to the trivial subgroup")
        }
        SpectrumKind::Max => Spectrum::new(
            l.clone(),
            kind,
            filter(&|m| Ok(!proper.iter().any(|&o| o != m && l.leq(m, o))))?,
        )?,
        SpectrumKind::Min => Spectrum::new(
            l.clone(),
            kind,
            filter(&|m| {
                Ok(m != l.trivial()
                    && !l.ids().any(|o| o != m && o != l.trivial() && l.leq(o, m)))
            })?,
        )?,
        SpectrumKind::Prim => {
            let spec = primes()?;
            Spectrum::new(l.clone(), kind, filter(&|m| is_primary(l, m, &spec))?)?
        }
        SpectrumKind::Rad => {
            let spec = primes()?;
            Spectrum::new(l.clone(), kind, filter(&|m| is_radical(l, m, &spec))?)?
        }
        SpectrumKind::IrrPlus => Spectrum::new(l.clone(), kind, filter(&|m| is_strongly_irreducible(l, m))?)?,
        SpectrumKind::Irr => Spectrum::new(l.clone(), kind, filter(&|m| is_irreducible(l, m))?)?,
        SpectrumKind::Prin => {
            let top = l.top();
            let members = (0..l.group().order())
                .map(|a| l.principal(a))
                .filter(|&m| m != top)
                .collect();
            Spectrum::new(l.clone(), kind, members)?
        }
        SpectrumKind::Fgen => Spectrum::new(l.clone(), kind, proper.clone())?
            .with_note("every subgroup of a finite group is finitely generated"),
        SpectrumKind::Reg => {
            let g = l.group();
            let degree = g.degree().ok_or(Error::RegRequiresPermGroup)?;
            let members = filter(&|m| {
                let n = l.member(m);
                if n.len() != degree {
                    return Ok(false);
                }
                let mut orbit = BitSet::empty(degree);
                for h in n.iter() {
                    orbit.insert(g.permutation(h).expect("permutation group")[0] as usize);
                }
                Ok(orbit.is_full())
            })?;
            Spectrum::new(l.clone(), kind, members)?.with_note(format!("natural action on {degree} points"))
        }
        SpectrumKind::Pmtv => {
            let bounds = opts.pmtv_bounds.ok_or(Error::PmtvBoundsMissing)?;
            gmodule::enumerate_primitive(l, bounds, &opts.caps)?.spectrum
        }
    };
    Ok(spectrum)
}

/// Outcome of a universal check, with the first counterexample found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check<W> {
    pub holds: bool,
    pub witness: Option<W>,
}

impl<W> Check<W> {
    pub fn from_witness(witness: Option<W>) -> Self {
        Check {
            holds: witness.is_none(),
            witness,
        }
    }
}

/// `n ∩ n' ⊆ s ⇒ n ⊆ s or n' ⊆ s` for every pair of lattice members and
/// every point `s`. The witness is `(n, n', s)`; the search runs from the
/// largest members down.
pub fn mip_holds(s: &Spectrum) -> Check<(MemberId, MemberId, MemberId)> {
    let l = s.lattice();
    for &point in s.members().iter().rev() {
        if let Some((a, b)) = strong_irreducibility_violation(l, point) {
            return Check::from_witness(Some((a, b, point)));
        }
    }
    Check::from_witness(None)
}

/// Whether preimages of the target's spectrum stay inside the source's
/// spectrum. The witness is the offending target member.
pub fn contraction_closed(hom: &GroupHom, source: &Spectrum, target: &Spectrum) -> Result<Check<MemberId>> {
    if source.kind() != target.kind() {
        return Err(Error::Invalid("contraction compares spectra of one kind".into()));
    }
    if !Arc::ptr_eq(source.lattice().group(), hom.source()) || !Arc::ptr_eq(target.lattice().group(), hom.target()) {
        return Err(Error::Invalid("spectra do not belong to the homomorphism's groups".into()));
    }
    for &n in target.members() {
        let pre = hom.preimage(target.lattice().member(n))?;
        let id = source.lattice().lookup(&pre).expect("preimage of a normal subgroup is normal");
        if !source.contains(id) {
            return Ok(Check::from_witness(Some(n)));
        }
    }
    Ok(Check::from_witness(None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lattice::enumerate_normal_subgroups;

    fn lattice(name: &str) -> Arc<NormalLattice> {
        Arc::new(enumerate_normal_subgroups(catalog::group(name).unwrap()))
    }

    fn spectrum(l: &Arc<NormalLattice>, kind: SpectrumKind) -> Vec<usize> {
        let opts = SpectrumOptions {
            pmtv_bounds: Some(SearchBounds { max_p: 3, max_d: 2 }),
            ..Default::default()
        };
        let s = compute_spectrum(l, kind, &opts).unwrap();
        s.members().iter().map(|&m| l.member(m).len()).collect()
    }

    fn by_order(l: &NormalLattice, order: usize) -> MemberId {
        l.ids().find(|&i| l.member(i).len() == order).unwrap()
    }

    #[test]
    fn kind_names_round_trip() {
        for k in SpectrumKind::ALL {
            assert_eq!(k.name().parse::<SpectrumKind>().unwrap(), k);
        }
        assert_eq!("irrplus".parse::<SpectrumKind>().unwrap(), SpectrumKind::IrrPlus);
        assert!("Foo".parse::<SpectrumKind>().is_err());
    }

    #[test]
    fn primes_of_small_groups() {
        let a5 = lattice("A5");
        assert!(is_prime(&a5, a5.trivial()).unwrap());
        let s3 = lattice("S3");
        let a3 = by_order(&s3, 3);
        assert!(!is_prime(&s3, a3).unwrap());
        assert_eq!(prime_violation(&s3, a3).unwrap(), Some((s3.top(), s3.top())));
        assert!(matches!(is_prime(&s3, s3.top()), Err(Error::NotProper(_))));
        for name in ["Z12", "V4", "Z2xZ4"] {
            let l = lattice(name);
            assert!(l.proper_ids().all(|p| !is_prime(&l, p).unwrap()), "{name}");
        }
    }

    #[test]
    fn primary_members() {
        let z12 = lattice("Z12");
        let spec = compute_spectrum(&z12, SpectrumKind::Spec, &Default::default()).unwrap();
        assert!(spec.is_empty());
        assert!(z12.proper_ids().all(|q| is_primary(&z12, q, &spec).unwrap()));
        let s5 = lattice("S5");
        let spec = compute_spectrum(&s5, SpectrumKind::Spec, &Default::default()).unwrap();
        assert!(is_primary(&s5, by_order(&s5, 60), &spec).unwrap());
    }

    #[test]
    fn irreducibility() {
        let s3 = lattice("S3");
        assert!(s3.proper_ids().all(|n| is_strongly_irreducible(&s3, n).unwrap()));
        let z12 = lattice("Z12");
        let six = by_order(&z12, 2);
        assert_eq!(
            strong_irreducibility_violation(&z12, six),
            Some((by_order(&z12, 6), by_order(&z12, 4)))
        );
        let aa = lattice("A5xA5");
        assert!(!is_irreducible(&aa, aa.trivial()).unwrap());
        let spec = compute_spectrum(&aa, SpectrumKind::Spec, &Default::default()).unwrap();
        assert!(is_radical(&aa, aa.trivial(), &spec).unwrap());
        assert!(!is_prime(&aa, aa.trivial()).unwrap());
    }

    #[test]
    fn named_spectra() {
        let s3 = lattice("S3");
        assert_eq!(spectrum(&s3, SpectrumKind::Max), vec![3]);
        assert_eq!(spectrum(&s3, SpectrumKind::Min), vec![3]);
        assert_eq!(spectrum(&s3, SpectrumKind::Reg), vec![3]);
        assert_eq!(spectrum(&s3, SpectrumKind::Prin), vec![1, 3]);
        assert!(spectrum(&s3, SpectrumKind::Spec).is_empty());

        let aa = lattice("A5xA5");
        for k in [SpectrumKind::Spec, SpectrumKind::MinSpec, SpectrumKind::Max] {
            assert_eq!(spectrum(&aa, k), vec![60, 60], "{k}");
        }
        let z12 = lattice("Z12");
        assert_eq!(spectrum(&z12, SpectrumKind::IrrPlus), vec![3, 4, 6]);
        assert_eq!(spectrum(&z12, SpectrumKind::Fgen), spectrum(&z12, SpectrumKind::Prp));
        assert!(matches!(
            compute_spectrum(&z12, SpectrumKind::Reg, &Default::default()),
            Err(Error::RegRequiresPermGroup)
        ));
        assert!(matches!(
            compute_spectrum(&z12, SpectrumKind::Pmtv, &Default::default()),
            Err(Error::PmtvBoundsMissing)
        ));
    }

    #[test]
    fn mip() {
        let z12 = lattice("Z12");
        let empty = Spectrum::new(z12.clone(), SpectrumKind::Spec, vec![]).unwrap();
        assert!(mip_holds(&empty).holds);
        let prp = compute_spectrum(&z12, SpectrumKind::Prp, &Default::default()).unwrap();
        let check = mip_holds(&prp);
        assert!(!check.holds);
        assert_eq!(
            check.witness,
            Some((by_order(&z12, 6), by_order(&z12, 4), by_order(&z12, 2)))
        );
        let irr = compute_spectrum(&z12, SpectrumKind::IrrPlus, &Default::default()).unwrap();
        assert!(mip_holds(&irr).holds);
    }

    #[test]
    fn contraction() {
        let s3g = catalog::group("S3").unwrap();
        let s3 = Arc::new(enumerate_normal_subgroups(s3g.clone()));
        let a3_set = s3.member(by_order(&s3, 3)).clone();
        let (a3g, incl) = crate::group::subgroup_named(&s3g, &a3_set, "A3").unwrap();
        let a3 = Arc::new(enumerate_normal_subgroups(a3g));
        let opts = SpectrumOptions::default();
        let max_src = compute_spectrum(&a3, SpectrumKind::Max, &opts).unwrap();
        let max_tgt = compute_spectrum(&s3, SpectrumKind::Max, &opts).unwrap();
        let check = contraction_closed(&incl, &max_src, &max_tgt).unwrap();
        assert!(!check.holds);
        assert_eq!(check.witness, Some(by_order(&s3, 3)));

        let id = GroupHom::identity(s3g.clone());
        for kind in [SpectrumKind::Spec, SpectrumKind::Max, SpectrumKind::IrrPlus] {
            let sp = compute_spectrum(&s3, kind, &opts).unwrap();
            assert!(contraction_closed(&id, &sp, &sp).unwrap().holds);
        }
    }

    #[test]
    fn trivial_prime_characterization() {
        for name in ["A5", "S5", "A5xA5", "S3", "Q8", "S4"] {
            let l = lattice(name);
            assert_eq!(is_prime(&l, l.trivial()).unwrap(), uniform_without_abelian(&l), "{name}");
        }
    }
}
