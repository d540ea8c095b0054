//! The lattice of normal subgroups with meet, join and commutator product.
//!
//! Members are generated as joins of normal closures of conjugacy classes:
//! every normal subgroup is the union of the classes it contains, hence the
//! join of their normal closures. All binary operations are tabulated at
//! construction, so lattice queries after that are index lookups.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::group::{Closure, ElementSet, Group};
use crate::spectra::Spectrum;

/// Index of a member in a [`NormalLattice`].
pub type MemberId = usize;

#[derive(Debug)]
pub struct NormalLattice {
    group: Arc<Group>,
    members: Vec<ElementSet>,
    /// Subgroup generators of each member.
    generators: Vec<Vec<usize>>,
    index: HashMap<BitSet, MemberId>,
    meet: Vec<MemberId>,
    join: Vec<MemberId>,
    commutator: Vec<MemberId>,
    /// `below[i]` holds every `j` with member `j ⊆` member `i`.
    below: Vec<BitSet>,
    /// Normal closure of each element.
    principal: Vec<MemberId>,
    trivial: MemberId,
    top: MemberId,
}

impl NormalLattice {
    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, i: MemberId) -> &ElementSet {
        &self.members[i]
    }

    pub fn members(&self) -> &[ElementSet] {
        &self.members
    }

    pub fn ids(&self) -> std::ops::Range<MemberId> {
        0..self.members.len()
    }

    /// Members other than the whole group.
    pub fn proper_ids(&self) -> impl Iterator<Item = MemberId> + '_ {
        let top = self.top;
        self.ids().filter(move |&i| i != top)
    }

    pub fn trivial(&self) -> MemberId {
        self.trivial
    }

    pub fn top(&self) -> MemberId {
        self.top
    }

    pub fn lookup(&self, s: &ElementSet) -> Option<MemberId> {
        self.index.get(s.bits()).copied()
    }

    #[inline]
    pub fn leq(&self, a: MemberId, b: MemberId) -> bool {
        self.below[b].contains(a)
    }

    #[inline]
    pub fn meet(&self, a: MemberId, b: MemberId) -> MemberId {
        self.meet[a * self.len() + b]
    }

    #[inline]
    pub fn join_pair(&self, a: MemberId, b: MemberId) -> MemberId {
        self.join[a * self.len() + b]
    }

    /// Smallest member containing every input; the empty family gives the
    /// trivial subgroup.
    pub fn join<I: IntoIterator<Item = MemberId>>(&self, family: I) -> MemberId {
        family
            .into_iter()
            .fold(self.trivial, |acc, m| self.join_pair(acc, m))
    }

    /// Largest member inside every input; the empty family gives the whole
    /// group.
    pub fn meet_all<I: IntoIterator<Item = MemberId>>(&self, family: I) -> MemberId {
        family.into_iter().fold(self.top, |acc, m| self.meet(acc, m))
    }

    /// `[a, b]`, generated by `x y x^-1 y^-1` with `x ∈ a`, `y ∈ b`.
    #[inline]
    pub fn commutator_product(&self, a: MemberId, b: MemberId) -> MemberId {
        self.commutator[a * self.len() + b]
    }

    /// Normal closure of a single element.
    pub fn principal(&self, element: usize) -> MemberId {
        self.principal[element]
    }

    pub fn generators(&self, i: MemberId) -> &[usize] {
        &self.generators[i]
    }

    /// Members covered by `i` (Hasse diagram edges point from the smaller
    /// member to the larger one).
    pub fn hasse_edges(&self) -> Vec<(MemberId, MemberId)> {
        let mut edges = Vec::new();
        for hi in self.ids() {
            for lo in self.below[hi].iter() {
                if lo == hi {
                    continue;
                }
                let covered = !self.below[hi]
                    .iter()
                    .any(|mid| mid != lo && mid != hi && self.leq(lo, mid));
                if covered {
                    edges.push((lo, hi));
                }
            }
        }
        edges.sort_unstable();
        edges
    }

    /// Short display label such as `N3[4]` (index and order).
    pub fn label(&self, i: MemberId) -> String {
        format!("N{}[{}]", i, self.members[i].len())
    }
}

/// Intersection of the prime members containing `n`; the whole group when
/// no prime contains it.
pub fn radical(l: &NormalLattice, n: MemberId, primes: &Spectrum) -> MemberId {
    debug_assert_eq!(primes.kind(), crate::spectra::SpectrumKind::Spec);
    l.meet_all(primes.members().iter().copied().filter(|&p| l.leq(n, p)))
}

/// Intersection of the spectrum members containing `x` (the kernel of the
/// hull of `x`); the whole group when none does.
pub fn omega_radical(s: &Spectrum, x: MemberId) -> MemberId {
    let l = s.lattice();
    l.meet_all(s.members().iter().copied().filter(|&m| l.leq(x, m)))
}

/// Computes every normal subgroup of `g`.
pub fn enumerate_normal_subgroups(g: Arc<Group>) -> NormalLattice {
    let group = g.as_ref();
    let classes = group.conjugacy_classes();
    let mut sets: Vec<ElementSet> = Vec::new();
    let mut gens: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<BitSet, usize> = HashMap::new();
    let mut push = |set: ElementSet, gen: Vec<usize>, sets: &mut Vec<ElementSet>, gens: &mut Vec<Vec<usize>>| {
        if let std::collections::hash_map::Entry::Vacant(e) = index.entry(set.bits().clone()) {
            e.insert(sets.len());
            sets.push(set);
            gens.push(gen);
            true
        } else {
            false
        }
    };

    let mut class_closure = Vec::with_capacity(classes.len());
    push(group.trivial_set(), Vec::new(), &mut sets, &mut gens);
    for class in &classes {
        let (set, gen) = group.normal_closure_of([class[0]]).into_parts();
        class_closure.push(set.clone());
        push(set, gen, &mut sets, &mut gens);
    }

    // Join-closure. Joins of normal subgroups are normal, so a subgroup
    // closure of the union suffices.
    let mut i = 0;
    while i < sets.len() {
        for j in 0..i {
            if sets[j].is_subset(&sets[i]) || sets[i].is_subset(&sets[j]) {
                continue;
            }
            let mut c = Closure::from_subgroup(group, &sets[i], &gens[i]);
            for &x in &gens[j] {
                c.add(x);
            }
            let (set, gen) = c.into_parts();
            push(set, gen, &mut sets, &mut gens);
        }
        i += 1;
    }

    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by(|&a, &b| sets[a].cmp(&sets[b]));
    let members: Vec<ElementSet> = order.iter().map(|&i| sets[i].clone()).collect();
    let generators: Vec<Vec<usize>> = order.iter().map(|&i| gens[i].clone()).collect();
    let index: HashMap<BitSet, MemberId> = members
        .iter()
        .enumerate()
        .map(|(i, m)| (m.bits().clone(), i))
        .collect();

    let k = members.len();
    let find = |s: &ElementSet| -> MemberId {
        *index
            .get(s.bits())
            .expect("lattice operation produced a non-member")
    };

    let mut below = vec![BitSet::empty(k); k];
    for b in 0..k {
        for a in 0..k {
            if members[a].is_subset(&members[b]) {
                below[b].insert(a);
            }
        }
    }

    let mut meet = vec![0; k * k];
    let mut join = vec![0; k * k];
    let mut commutator = vec![0; k * k];
    for a in 0..k {
        for b in a..k {
            let m = find(&members[a].intersection(&members[b]));
            meet[a * k + b] = m;
            meet[b * k + a] = m;

            let j = if members[a].is_subset(&members[b]) {
                b
            } else if members[b].is_subset(&members[a]) {
                a
            } else {
                let mut c = Closure::from_subgroup(group, &members[a], &generators[a]);
                for &x in &generators[b] {
                    c.add(x);
                }
                find(&c.into_set())
            };
            join[a * k + b] = j;
            join[b * k + a] = j;

            // For normal a, b the commutator subgroup is normal and equals the
            // normal closure of commutators of generators.
            let seeds = generators[a]
                .iter()
                .flat_map(|&x| generators[b].iter().map(move |&y| (x, y)))
                .map(|(x, y)| group.commutator(x, y));
            let c = find(&group.normal_closure_of(seeds).into_set());
            commutator[a * k + b] = c;
            commutator[b * k + a] = c;
        }
    }

    let mut principal = vec![0; group.order()];
    for (class, set) in classes.iter().zip(&class_closure) {
        let id = find(set);
        for &x in class {
            principal[x] = id;
        }
    }

    let trivial = find(&group.trivial_set());
    let top = find(&group.full_set());
    NormalLattice {
        group: g,
        members,
        generators,
        index,
        meet,
        join,
        commutator,
        below,
        principal,
        trivial,
        top,
    }
}
