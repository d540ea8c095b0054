//! The coarse lower topology on a spectrum.
//!
//! Closed sets are generated by the subbasis `V(x) = {n in σ : x ⊆ n}` over
//! every lattice member `x`. Small spaces materialize the whole closed
//! family; larger ones answer queries from point closures, using that in a
//! finite space every closed set is the union of the closures of its points.

use std::collections::HashSet;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::lattice::MemberId;
use crate::spectra::{Check, Spectrum};

#[derive(Clone, Debug)]
pub struct FiniteSpace {
    spectrum: Spectrum,
    points: Vec<MemberId>,
    /// Point index of each lattice member, if it is a point.
    position: Vec<Option<usize>>,
    subbasis: Vec<BitSet>,
    /// Sorted closed family when materialized.
    closed: Option<Vec<BitSet>>,
}

/// Two subbasic sets whose union is not subbasic. `hull` is the member
/// whose `V` is the smallest subbasic set containing the union; `extra`
/// lists the points of `V(hull)` outside the union.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnionWitness {
    pub a: MemberId,
    pub b: MemberId,
    pub hull: MemberId,
    pub extra: Vec<MemberId>,
}

/// Verdicts of the standard properties, without witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopologySummary {
    pub points: usize,
    pub materialized: bool,
    pub closed_sets: Option<usize>,
    pub irreducible_closed_sets: usize,
    pub t0: bool,
    pub t1: bool,
    pub sober: bool,
    pub spectral: bool,
    pub connected: bool,
    pub hull_kernel: bool,
    pub partition_of_unity: bool,
}

pub fn build_space(s: &Spectrum, caps: &Caps) -> FiniteSpace {
    let l = s.lattice();
    let points = s.members().to_vec();
    let k = points.len();
    let mut position = vec![None; l.len()];
    for (i, &m) in points.iter().enumerate() {
        position[m] = Some(i);
    }
    let subbasis: Vec<BitSet> = l
        .ids()
        .map(|x| BitSet::from_indices(k, (0..k).filter(|&i| l.leq(x, points[i]))))
        .collect();
    let mut space = FiniteSpace {
        spectrum: s.clone(),
        points,
        position,
        subbasis,
        closed: None,
    };
    if k <= caps.materialize_points {
        space.closed = Some(space.generate_family());
    }
    space
}

impl FiniteSpace {
    /// Least family containing the subbasis, `∅` and the whole space that
    /// is stable under pairwise union and intersection.
    fn generate_family(&self) -> Vec<BitSet> {
        let k = self.len();
        let mut seen: HashSet<BitSet> = HashSet::new();
        let mut family: Vec<BitSet> = Vec::new();
        for s in self
            .subbasis
            .iter()
            .cloned()
            .chain([BitSet::empty(k), BitSet::full(k)])
        {
            if seen.insert(s.clone()) {
                family.push(s);
            }
        }
        let mut i = 0;
        while i < family.len() {
            for j in 0..i {
                for s in [family[i].union(&family[j]), family[i].intersection(&family[j])] {
                    if seen.insert(s.clone()) {
                        family.push(s);
                    }
                }
            }
            i += 1;
        }
        family.sort();
        family
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn points(&self) -> &[MemberId] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point_of(&self, member: MemberId) -> Option<usize> {
        self.position.get(member).copied().flatten()
    }

    /// `V(x)` as a set of point indices.
    pub fn subbasic(&self, x: MemberId) -> &BitSet {
        &self.subbasis[x]
    }

    pub fn subbasis(&self) -> &[BitSet] {
        &self.subbasis
    }

    pub fn closed_family(&self) -> Option<&[BitSet]> {
        self.closed.as_deref()
    }

    pub fn is_materialized(&self) -> bool {
        self.closed.is_some()
    }

    pub fn full(&self) -> BitSet {
        BitSet::full(self.len())
    }

    /// Point set of the given members; members that are not points are
    /// ignored.
    pub fn point_set<I: IntoIterator<Item = MemberId>>(&self, members: I) -> BitSet {
        BitSet::from_indices(self.len(), members.into_iter().filter_map(|m| self.point_of(m)))
    }

    pub fn members_of(&self, set: &BitSet) -> Vec<MemberId> {
        set.iter().map(|i| self.points[i]).collect()
    }

    /// Smallest closed set containing the point: the intersection of every
    /// subbasic set containing it.
    pub fn point_closure(&self, i: usize) -> BitSet {
        let mut c = self.full();
        for v in self.subbasis.iter().filter(|v| v.contains(i)) {
            c.intersect_with(v);
        }
        c
    }

    /// Topological closure: the union of the point closures.
    pub fn closure(&self, set: &BitSet) -> BitSet {
        let mut c = BitSet::empty(self.len());
        for i in set.iter() {
            c.union_with(&self.point_closure(i));
        }
        c
    }

    /// `{n in σ : ∩X ⊆ n}`, with `∩∅ = G`.
    pub fn algebraic_closure(&self, set: &BitSet) -> BitSet {
        let l = self.spectrum.lattice();
        let kernel = l.meet_all(set.iter().map(|i| self.points[i]));
        self.subbasis[kernel].clone()
    }

    pub fn is_closed(&self, set: &BitSet) -> bool {
        match &self.closed {
            Some(family) => family.binary_search(set).is_ok(),
            None => self.closure(set) == *set,
        }
    }

    /// Two distinct points with equal closures.
    pub fn t0(&self) -> Check<(usize, usize)> {
        let closures: Vec<BitSet> = (0..self.len()).map(|i| self.point_closure(i)).collect();
        for i in 0..self.len() {
            for j in 0..i {
                if closures[i] == closures[j] {
                    return Check::from_witness(Some((j, i)));
                }
            }
        }
        Check::from_witness(None)
    }

    /// A point whose singleton is not closed.
    pub fn t1(&self) -> Check<usize> {
        Check::from_witness((0..self.len()).find(|&i| !self.is_closed(&BitSet::from_indices(self.len(), [i]))))
    }

    fn require_closed(&self, set: &BitSet) -> Result<()> {
        if set.universe() != self.len() || !self.is_closed(set) {
            return Err(Error::NotClosed);
        }
        Ok(())
    }

    /// A nonempty closed set is irreducible when it is not the union of two
    /// closed proper subsets.
    pub fn is_irreducible(&self, set: &BitSet) -> Result<bool> {
        self.require_closed(set)?;
        if set.is_empty() {
            return Ok(false);
        }
        Ok(match &self.closed {
            Some(family) => {
                let proper: Vec<&BitSet> = family.iter().filter(|c| c.is_subset(set) && *c != set).collect();
                !proper
                    .iter()
                    .any(|a| proper.iter().any(|b| a.union(b) == *set))
            }
            None => {
                // The closed proper subsets of a closed set cover it iff two
                // of them do.
                let mut cover = BitSet::empty(self.len());
                for i in set.iter() {
                    let c = self.point_closure(i);
                    if c != *set {
                        cover.union_with(&c);
                    }
                }
                cover != *set
            }
        })
    }

    /// Irreducible closed sets in ascending order.
    pub fn irreducible_closed_sets(&self) -> Vec<BitSet> {
        let mut out: Vec<BitSet> = match &self.closed {
            Some(family) => family
                .iter()
                .filter(|c| self.is_irreducible(c).expect("family members are closed"))
                .cloned()
                .collect(),
            None => {
                // Every closed set is the union of its point closures, so an
                // irreducible one is a point closure, and point closures are
                // irreducible.
                (0..self.len()).map(|i| self.point_closure(i)).collect()
            }
        };
        out.sort();
        out.dedup();
        out
    }

    pub fn generic_points(&self, set: &BitSet) -> Result<Vec<usize>> {
        self.require_closed(set)?;
        Ok(set.iter().filter(|&i| self.point_closure(i) == *set).collect())
    }

    /// An irreducible closed set without exactly one generic point.
    pub fn sober(&self) -> Check<BitSet> {
        Check::from_witness(
            self.irreducible_closed_sets()
                .into_iter()
                .find(|c| self.generic_points(c).expect("closed").len() != 1),
        )
    }

    /// Finite spaces are compact with a basis of compact opens, so being
    /// spectral reduces to T0 and sober.
    pub fn is_spectral(&self) -> bool {
        self.t0().holds && self.sober().holds
    }

    /// Two nonempty disjoint closed sets covering the space.
    pub fn separation(&self) -> Option<(BitSet, BitSet)> {
        let full = self.full();
        match &self.closed {
            Some(family) => family.iter().find_map(|c| {
                let rest = full.difference(c);
                (!c.is_empty() && !rest.is_empty() && self.is_closed(&rest)).then(|| (c.clone(), rest))
            }),
            None => {
                if self.is_empty() {
                    return None;
                }
                // Components of the specialization graph.
                let mut component = BitSet::from_indices(self.len(), [0]);
                let mut frontier = vec![0];
                while let Some(x) = frontier.pop() {
                    for y in 0..self.len() {
                        let linked = self.point_closure(x).contains(y) || self.point_closure(y).contains(x);
                        if linked && component.insert(y) {
                            frontier.push(y);
                        }
                    }
                }
                (component != full).then(|| {
                    let rest = full.difference(&component);
                    (component, rest)
                })
            }
        }
    }

    /// The empty space is not connected.
    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.separation().is_none()
    }

    pub fn summary(&self) -> TopologySummary {
        TopologySummary {
            points: self.len(),
            materialized: self.is_materialized(),
            closed_sets: self.closed.as_ref().map(Vec::len),
            irreducible_closed_sets: self.irreducible_closed_sets().len(),
            t0: self.t0().holds,
            t1: self.t1().holds,
            sober: self.sober().holds,
            spectral: self.is_spectral(),
            connected: self.is_connected(),
            hull_kernel: self.hull_kernel().holds,
            partition_of_unity: self.partition_of_unity().holds,
        }
    }

    /// Pairs `(x, y)` of distinct points with `y` in the closure of `x`.
    pub fn specialization_order(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in self.point_closure(x).iter() {
                if y != x {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Whether `{V(x)}` is closed under pairwise union, so that the
    /// subbasic sets are already all the closed sets.
    pub fn hull_kernel(&self) -> Check<UnionWitness> {
        let l = self.spectrum.lattice();
        let subbasic: HashSet<&BitSet> = self.subbasis.iter().collect();
        for a in (0..l.len()).rev() {
            for b in (0..a).rev() {
                let u = self.subbasis[a].union(&self.subbasis[b]);
                if !subbasic.contains(&u) {
                    let hull = l.meet_all(u.iter().map(|i| self.points[i]));
                    let extra = self.members_of(&self.subbasis[hull].difference(&u));
                    return Check::from_witness(Some(UnionWitness { a, b, hull, extra }));
                }
            }
        }
        Check::from_witness(None)
    }

    /// A member other than `G` with `V(n) = ∅`.
    pub fn partition_of_unity(&self) -> Check<MemberId> {
        let l = self.spectrum.lattice();
        Check::from_witness(l.ids().find(|&n| n != l.top() && self.subbasis[n].is_empty()))
    }

    /// `⋂ V(n_λ) = V(Σ n_λ)`; the empty family gives the whole space on
    /// both sides.
    pub fn compactness_identity(&self, family: &[MemberId]) -> bool {
        let l = self.spectrum.lattice();
        let mut lhs = self.full();
        for &n in family {
            lhs.intersect_with(&self.subbasis[n]);
        }
        lhs == self.subbasis[l.join(family.iter().copied())]
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catalog;
    use crate::lattice::{enumerate_normal_subgroups, NormalLattice};
    use crate::spectra::{compute_spectrum, SpectrumKind};

    fn lattice(name: &str) -> Arc<NormalLattice> {
        Arc::new(enumerate_normal_subgroups(catalog::group(name).unwrap()))
    }

    fn space(l: &Arc<NormalLattice>, kind: SpectrumKind, caps: &Caps) -> FiniteSpace {
        build_space(&compute_spectrum(l, kind, &Default::default()).unwrap(), caps)
    }

    fn by_order(l: &NormalLattice, order: usize) -> MemberId {
        l.ids().find(|&i| l.member(i).len() == order).unwrap()
    }

    /// Z12 members by generator: <2> has order 6, <3> order 4, <4> order 3,
    /// <6> order 2.
    fn z12() -> (Arc<NormalLattice>, [MemberId; 4]) {
        let l = lattice("Z12");
        let ids = [by_order(&l, 6), by_order(&l, 4), by_order(&l, 3), by_order(&l, 2)];
        (l, ids)
    }

    #[test]
    fn empty_space() {
        let l = lattice("S3");
        let sp = space(&l, SpectrumKind::Spec, &Caps::default());
        assert_eq!(sp.closed_family().unwrap(), &[BitSet::empty(0)]);
        assert!(sp.t0().holds && sp.t1().holds && sp.sober().holds && sp.is_spectral());
        assert!(!sp.is_connected());
    }

    #[test]
    fn irr_plus_of_z12() {
        let (l, [two, three, four, _six]) = z12();
        let sp = space(&l, SpectrumKind::IrrPlus, &Caps::default());
        let set = |ms: &[MemberId]| sp.point_set(ms.iter().copied());
        let mut expected = vec![
            set(&[]),
            set(&[two]),
            set(&[three]),
            set(&[two, three]),
            set(&[two, four]),
            set(&[two, three, four]),
        ];
        expected.sort();
        assert_eq!(sp.closed_family().unwrap(), expected.as_slice());

        let p4 = sp.point_of(four).unwrap();
        assert_eq!(sp.point_closure(p4), set(&[two, four]));
        assert_eq!(sp.algebraic_closure(&set(&[two, three])), set(&[two, three]));
        assert!(!sp.t1().holds);
        assert!(sp.t0().holds);
        assert!(!sp.is_irreducible(&set(&[two, three])).unwrap());
        assert!(sp.is_irreducible(&set(&[two, four])).unwrap());
        assert_eq!(sp.generic_points(&set(&[two, four])).unwrap(), vec![p4]);
        assert!(matches!(sp.generic_points(&set(&[four])), Err(Error::NotClosed)));
        assert_eq!(sp.separation(), Some((set(&[three]), set(&[two, four]))));
        assert!(sp.sober().holds);
        assert!(sp.hull_kernel().holds);
        assert_eq!(sp.specialization_order(), vec![(p4, sp.point_of(two).unwrap())]);
    }

    #[test]
    fn prp_of_z12_is_not_hull_kernel() {
        let (l, [two, three, _, six]) = z12();
        let sp = space(&l, SpectrumKind::Prp, &Caps::default());
        let w = sp.hull_kernel().witness.unwrap();
        assert_eq!((w.a, w.b, w.hull), (two, three, six));
        assert_eq!(w.extra, vec![six]);
        assert!(sp.partition_of_unity().holds);
        assert!(sp.is_connected());
    }

    #[test]
    fn spec_of_a5xa5_is_discrete() {
        let l = lattice("A5xA5");
        let sp = space(&l, SpectrumKind::Spec, &Caps::default());
        assert_eq!(sp.closed_family().unwrap().len(), 4);
        assert!(sp.t1().holds);
        assert!(!sp.is_connected());
    }

    #[test]
    fn family_is_generated_not_padded() {
        for name in ["Z12", "D4", "Z2xZ4", "D6", "Q8"] {
            let l = lattice(name);
            for kind in [SpectrumKind::Prp, SpectrumKind::Irr, SpectrumKind::Prin] {
                let sp = space(&l, kind, &Caps::default());
                let family = sp.closed_family().unwrap();
                let basics: HashSet<&BitSet> = sp.subbasis().iter().collect();
                for c in family.iter().filter(|c| !basics.contains(c) && !c.is_empty() && !c.is_full()) {
                    let rest: Vec<&BitSet> = family.iter().filter(|d| *d != c).collect();
                    let produced = rest
                        .iter()
                        .any(|a| rest.iter().any(|b| a.union(b) == *c || a.intersection(b) == *c));
                    assert!(produced, "{name} {kind}");
                }
            }
        }
    }

    #[test]
    fn lazy_mode_agrees_with_materialized() {
        let lazy_caps = Caps {
            materialize_points: 0,
            ..Caps::default()
        };
        for name in ["Z12", "Z16", "D4", "Z2xZ4", "D6", "Q8", "A5xA5", "S4"] {
            let l = lattice(name);
            for kind in [SpectrumKind::Prp, SpectrumKind::IrrPlus, SpectrumKind::Irr, SpectrumKind::Min] {
                let eager = space(&l, kind, &Caps::default());
                let lazy = space(&l, kind, &lazy_caps);
                assert_eq!(lazy.is_materialized(), lazy.is_empty());
                assert_eq!(eager.irreducible_closed_sets(), lazy.irreducible_closed_sets(), "{name} {kind}");
                assert_eq!(eager.is_connected(), lazy.is_connected(), "{name} {kind}");
                assert_eq!(eager.t1().holds, lazy.t1().holds);
                assert_eq!(eager.sober().holds, lazy.sober().holds);
                for c in eager.closed_family().unwrap() {
                    assert!(lazy.is_closed(c));
                }
            }
        }
    }
}
