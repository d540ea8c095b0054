//! Finite groups as multiplication tables.
//!
//! Every group is materialized to a full table over element indices
//! `0..order` with the identity pinned to index 0. Permutation inputs are
//! closed under their generators first, so downstream code never needs to
//! know which representation a group came from (apart from [`Group::permutation`],
//! which regular-action checks use).

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::config::Caps;
use crate::error::{Error, Result};

/// A set of group elements with a cached cardinality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    bits: BitSet,
    count: usize,
}

impl ElementSet {
    pub fn from_bits(bits: BitSet) -> Self {
        let count = bits.count();
        ElementSet { bits, count }
    }

    pub fn empty(order: usize) -> Self {
        Self::from_bits(BitSet::empty(order))
    }

    pub fn trivial(order: usize) -> Self {
        Self::from_bits(BitSet::from_indices(order, [0]))
    }

    pub fn full(order: usize) -> Self {
        Self::from_bits(BitSet::full(order))
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(order: usize, elements: I) -> Self {
        Self::from_bits(BitSet::from_indices(order, elements))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.count
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    #[inline]
    pub fn contains(&self, a: usize) -> bool {
        self.bits.contains(a)
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.count <= other.count && self.bits.is_subset(&other.bits)
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        Self::from_bits(self.bits.intersection(&other.bits))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.bits.to_vec()
    }
}

/// Ordered by cardinality first, then by mask.
impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.count
            .cmp(&other.count)
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.bits)
    }
}

#[derive(Clone, Debug)]
enum Representation {
    Table,
    Permutation {
        degree: usize,
        /// Image arrays, one per element index.
        perms: Vec<Vec<u16>>,
    },
}

/// A finite group on element indices `0..order`; index 0 is the identity.
#[derive(Clone)]
pub struct Group {
    name: String,
    order: usize,
    table: Vec<u16>,
    inverse: Vec<u16>,
    generators: Vec<usize>,
    repr: Representation,
    element_names: Option<Vec<String>>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("name", &self.name)
            .field("order", &self.order)
            .field("generators", &self.generators)
            .finish()
    }
}

/// External description of a group, one JSON document per group.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupDescription {
    Cayley {
        name: String,
        order: usize,
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        element_names: Option<Vec<String>>,
    },
    Perm {
        name: String,
        degree: usize,
        order: usize,
        generators: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        element_names: Option<Vec<String>>,
    },
}

/// Validates a description and materializes the group.
pub fn load_group(description: &GroupDescription, caps: &Caps) -> Result<Group> {
    match description {
        GroupDescription::Cayley {
            name,
            order,
            table,
            element_names,
        } => {
            if table.len() != *order {
                return Err(Error::OrderMismatch {
                    declared: *order,
                    actual: table.len(),
                });
            }
            let mut g = Group::from_table(name, table.clone(), caps)?;
            if let Some(names) = element_names {
                g = g.with_element_names(names.clone())?;
            }
            Ok(g)
        }
        GroupDescription::Perm {
            name,
            degree,
            order,
            generators,
            element_names,
        } => {
            let mut g = Group::from_permutations(name, *degree, generators, caps)?;
            if g.order() != *order {
                return Err(Error::OrderMismatch {
                    declared: *order,
                    actual: g.order(),
                });
            }
            if let Some(names) = element_names {
                g = g.with_element_names(names.clone())?;
            }
            Ok(g)
        }
    }
}

impl Group {
    /// Builds a group from a Cayley table, moving the identity to index 0 if
    /// it sits elsewhere.
    pub fn from_table(name: &str, rows: Vec<Vec<usize>>, caps: &Caps) -> Result<Group> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Invalid("empty multiplication table".into()));
        }
        if n > caps.max_order {
            return Err(Error::OrderCapExceeded(caps.max_order));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotLatinSquare(format!("row {i} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::NotLatinSquare(format!("entry {bad} out of range in row {i}")));
            }
        }
        let mut seen = vec![false; n];
        for (i, row) in rows.iter().enumerate() {
            seen.iter_mut().for_each(|s| *s = false);
            for &x in row {
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::NotLatinSquare(format!("row {i} repeats {x}")));
                }
            }
        }
        for j in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for row in &rows {
                if std::mem::replace(&mut seen[row[j]], true) {
                    return Err(Error::NotLatinSquare(format!("column {j} repeats {}", row[j])));
                }
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|a| rows[e][a] == a && rows[a][e] == a))
            .ok_or(Error::NoIdentity)?;
        // Swap labels e <-> 0.
        let relabel = |x: usize| {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut table = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                table[relabel(a) * n + relabel(b)] = relabel(rows[a][b]) as u16;
            }
        }
        let g = Group::from_raw_table(name, n, table);
        g.check_associative()?;
        Ok(g)
    }

    /// Closes a set of permutations of `0..degree`; `(a*b)(x) = a(b(x))`.
    pub fn from_permutations(
        name: &str,
        degree: usize,
        generators: &[Vec<usize>],
        caps: &Caps,
    ) -> Result<Group> {
        if degree == 0 || degree > u16::MAX as usize {
            return Err(Error::Invalid(format!("unsupported degree {degree}")));
        }
        let mut gens: Vec<Vec<u16>> = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            let mut hit = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut hit[x], true)) {
                return Err(Error::GeneratorNotBijective(i, degree));
            }
            gens.push(g.iter().map(|&x| x as u16).collect());
        }
        let identity: Vec<u16> = (0..degree as u16).collect();
        let mut perms = vec![identity.clone()];
        let mut index: HashMap<Vec<u16>, usize> = HashMap::new();
        index.insert(identity, 0);
        // parent[b] = (a, i) with b = a * gens[i]; right[a][i] = index of a * gens[i].
        let mut parent: Vec<(usize, usize)> = vec![(0, 0)];
        let mut right: Vec<Vec<u32>> = Vec::new();
        let mut x = 0;
        while x < perms.len() {
            let mut row = Vec::with_capacity(gens.len());
            for (i, g) in gens.iter().enumerate() {
                let p: Vec<u16> = g.iter().map(|&y| perms[x][y as usize]).collect();
                let next = perms.len();
                let idx = *index.entry(p.clone()).or_insert(next);
                if idx == next {
                    if next >= caps.max_order {
                        return Err(Error::OrderCapExceeded(caps.max_order));
                    }
                    perms.push(p);
                    parent.push((x, i));
                }
                row.push(idx as u32);
            }
            right.push(row);
            x += 1;
        }
        let n = perms.len();
        let mut table = vec![0u16; n * n];
        for a in 0..n {
            let base = a * n;
            table[base] = a as u16;
            for b in 1..n {
                let (pb, gi) = parent[b];
                let ab = table[base + pb] as usize;
                table[base + b] = right[ab][gi] as u16;
            }
        }
        let mut g = Group::from_raw_table(name, n, table);
        let mut gen_idx: Vec<usize> = right
            .first()
            .map(|r| r.iter().map(|&i| i as usize).filter(|&i| i != 0).collect())
            .unwrap_or_default();
        gen_idx.dedup();
        let mut uniq = Vec::new();
        for i in gen_idx {
            if !uniq.contains(&i) {
                uniq.push(i);
            }
        }
        g.generators = uniq;
        g.repr = Representation::Permutation { degree, perms };
        Ok(g)
    }

    /// Table must already be a group table with identity 0.
    pub(crate) fn from_raw_table(name: &str, n: usize, table: Vec<u16>) -> Group {
        debug_assert_eq!(table.len(), n * n);
        let mut inverse = vec![0u16; n];
        for a in 0..n {
            let row = &table[a * n..(a + 1) * n];
            inverse[a] = row.iter().position(|&x| x == 0).unwrap_or(0) as u16;
        }
        let mut g = Group {
            name: name.to_string(),
            order: n,
            table,
            inverse,
            generators: Vec::new(),
            repr: Representation::Table,
            element_names: None,
        };
        g.generators = g.greedy_generators();
        g
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut closure = Closure::new(self);
        let mut gens = Vec::new();
        for x in 1..self.order {
            if closure.add(x) {
                gens.push(x);
            }
        }
        gens
    }

    /// Light's test: associativity holds iff every generator associates in
    /// the middle position.
    fn check_associative(&self) -> Result<()> {
        let n = self.order;
        for &g in &self.generators {
            for x in 0..n {
                let xg = self.mul(x, g);
                for y in 0..n {
                    if self.mul(xg, y) != self.mul(x, self.mul(g, y)) {
                        return Err(Error::NonAssociative(x, g, y));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn with_element_names(mut self, names: Vec<String>) -> Result<Group> {
        if names.len() != self.order {
            return Err(Error::Invalid(format!(
                "{} element names for a group of order {}",
                names.len(),
                self.order
            )));
        }
        self.element_names = Some(names);
        Ok(self)
    }

    pub fn with_name(mut self, name: &str) -> Group {
        self.name = name.to_string();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `g a g^-1`
    #[inline]
    pub fn conj(&self, g: usize, a: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    /// `x y x^-1 y^-1`
    #[inline]
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))
    }

    /// A generating set (input generators for permutation groups).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|&a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn degree(&self) -> Option<usize> {
        match &self.repr {
            Representation::Permutation { degree, .. } => Some(*degree),
            Representation::Table => None,
        }
    }

    /// Image array of element `a` in the permutation representation.
    pub fn permutation(&self, a: usize) -> Option<&[u16]> {
        match &self.repr {
            Representation::Permutation { perms, .. } => Some(&perms[a]),
            Representation::Table => None,
        }
    }

    pub fn element_name(&self, a: usize) -> String {
        if let Some(names) = &self.element_names {
            return names[a].clone();
        }
        match &self.repr {
            Representation::Permutation { perms, .. } => cycle_notation(&perms[a]),
            Representation::Table => a.to_string(),
        }
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.order)
    }

    pub fn trivial_set(&self) -> ElementSet {
        ElementSet::trivial(self.order)
    }

    /// Classes of elements under conjugation, ordered by smallest member; the
    /// identity's singleton class comes first.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes = Vec::new();
        for a in 0..self.order {
            if class_of[a] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut class = vec![a];
            class_of[a] = id;
            let mut i = 0;
            while i < class.len() {
                let x = class[i];
                for &g in &self.generators {
                    let y = self.conj(g, x);
                    if class_of[y] == usize::MAX {
                        class_of[y] = id;
                        class.push(y);
                    }
                }
                i += 1;
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    /// Smallest subgroup containing `elements`.
    pub fn subgroup_generated<I: IntoIterator<Item = usize>>(&self, elements: I) -> ElementSet {
        let mut c = Closure::new(self);
        for x in elements {
            c.add(x);
        }
        c.into_set()
    }

    /// Smallest normal subgroup containing `seed`.
    pub fn normal_closure(&self, seed: &ElementSet) -> ElementSet {
        self.normal_closure_of(seed.iter()).into_set()
    }

    pub(crate) fn normal_closure_of<I: IntoIterator<Item = usize>>(&self, seed: I) -> Closure<'_> {
        let mut c = Closure::new(self);
        for x in seed {
            c.add(x);
        }
        c.close_under_conjugation();
        c
    }

    pub fn is_subgroup(&self, s: &ElementSet) -> bool {
        s.bits().universe() == self.order && s.contains(0) && self.subgroup_generated(s.iter()) == *s
    }

    pub fn is_normal(&self, s: &ElementSet) -> bool {
        self.is_subgroup(s)
            && s
                .iter()
                .all(|h| self.generators.iter().all(|&g| s.contains(self.conj(g, h))))
    }

    pub fn to_description(&self) -> GroupDescription {
        match &self.repr {
            Representation::Permutation { degree, perms } => GroupDescription::Perm {
                name: self.name.clone(),
                degree: *degree,
                order: self.order,
                generators: self
                    .generators
                    .iter()
                    .map(|&g| perms[g].iter().map(|&x| x as usize).collect())
                    .collect(),
                element_names: None,
            },
            Representation::Table => GroupDescription::Cayley {
                name: self.name.clone(),
                order: self.order,
                table: (0..self.order)
                    .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
                    .collect(),
                element_names: self.element_names.clone(),
            },
        }
    }
}

fn cycle_notation(p: &[u16]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = p[start] as usize;
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = p[x] as usize;
        }
        out.push('(');
        out.push_str(&cycle.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Incremental subgroup closure: the set is kept closed under right
/// multiplication by every generator added so far.
pub(crate) struct Closure<'g> {
    group: &'g Group,
    set: BitSet,
    elements: Vec<usize>,
    gens: Vec<usize>,
}

impl<'g> Closure<'g> {
    pub(crate) fn new(group: &'g Group) -> Self {
        Closure {
            group,
            set: BitSet::from_indices(group.order, [0]),
            elements: vec![0],
            gens: Vec::new(),
        }
    }

    /// Starts from a known subgroup and its generators.
    pub(crate) fn from_subgroup(group: &'g Group, set: &ElementSet, gens: &[usize]) -> Self {
        Closure {
            group,
            set: set.bits().clone(),
            elements: set.to_vec(),
            gens: gens.to_vec(),
        }
    }

    /// Adds `x` as a generator; returns `false` if it was already inside.
    pub(crate) fn add(&mut self, x: usize) -> bool {
        if self.set.contains(x) {
            return false;
        }
        self.gens.push(x);
        let old = self.elements.len();
        for i in 0..old {
            let y = self.group.mul(self.elements[i], x);
            if self.set.insert(y) {
                self.elements.push(y);
            }
        }
        let mut j = old;
        while j < self.elements.len() {
            let e = self.elements[j];
            for k in 0..self.gens.len() {
                let y = self.group.mul(e, self.gens[k]);
                if self.set.insert(y) {
                    self.elements.push(y);
                }
            }
            j += 1;
        }
        true
    }

    /// Grows the subgroup until conjugates of its generators by the group's
    /// generators all lie inside.
    pub(crate) fn close_under_conjugation(&mut self) {
        let mut i = 0;
        while i < self.gens.len() {
            let h = self.gens[i];
            for k in 0..self.group.generators.len() {
                let g = self.group.generators[k];
                let c = self.group.conj(g, h);
                self.add(c);
            }
            i += 1;
        }
    }


    pub(crate) fn into_set(self) -> ElementSet {
        ElementSet {
            count: self.elements.len(),
            bits: self.set,
        }
    }

    pub(crate) fn into_parts(self) -> (ElementSet, Vec<usize>) {
        (
            ElementSet {
                count: self.elements.len(),
                bits: self.set,
            },
            self.gens,
        )
    }
}

/// A homomorphism between finite groups, stored as its full element map.
#[derive(Clone)]
pub struct GroupHom {
    source: Arc<Group>,
    target: Arc<Group>,
    image_of: Vec<usize>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHom({} -> {})", self.source.name(), self.target.name())
    }
}

impl GroupHom {
    pub fn new(source: Arc<Group>, target: Arc<Group>, image_of: Vec<usize>) -> Result<GroupHom> {
        if image_of.len() != source.order() {
            return Err(Error::NotHomomorphism(format!(
                "map has {} entries for a source of order {}",
                image_of.len(),
                source.order()
            )));
        }
        if image_of.iter().any(|&y| y >= target.order()) {
            return Err(Error::NotHomomorphism("image out of range".into()));
        }
        if image_of[0] != 0 {
            return Err(Error::NotHomomorphism("identity not preserved".into()));
        }
        // f(a g) = f(a) f(g) for generators g extends to all pairs.
        for a in 0..source.order() {
            for &g in source.generators() {
                if image_of[source.mul(a, g)] != target.mul(image_of[a], image_of[g]) {
                    return Err(Error::NotHomomorphism(format!(
                        "f({a}*{g}) != f({a})*f({g})"
                    )));
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            image_of,
        })
    }

    /// Extends images of the source's generators (in [`Group::generators`]
    /// order) to the whole group.
    pub fn from_generator_images(
        source: Arc<Group>,
        target: Arc<Group>,
        images: &[usize],
    ) -> Result<GroupHom> {
        let gens = source.generators().to_vec();
        if images.len() != gens.len() {
            return Err(Error::NotHomomorphism(format!(
                "{} generator images for {} generators",
                images.len(),
                gens.len()
            )));
        }
        let mut map = vec![usize::MAX; source.order()];
        map[0] = 0;
        let mut queue = vec![0];
        let mut i = 0;
        while i < queue.len() {
            let a = queue[i];
            for (k, &g) in gens.iter().enumerate() {
                let b = source.mul(a, g);
                if map[b] == usize::MAX {
                    map[b] = target.mul(map[a], images[k]);
                    queue.push(b);
                }
            }
            i += 1;
        }
        GroupHom::new(source, target, map)
    }

    pub fn identity(g: Arc<Group>) -> GroupHom {
        let map = (0..g.order()).collect();
        GroupHom {
            source: g.clone(),
            target: g,
            image_of: map,
        }
    }

    pub fn source(&self) -> &Arc<Group> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Group> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.image_of[a]
    }

    pub fn image_map(&self) -> &[usize] {
        &self.image_of
    }

    /// `next ∘ self`
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        if !Arc::ptr_eq(&self.target, &next.source) {
            return Err(Error::Invalid("homomorphisms are not composable".into()));
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: next.target.clone(),
            image_of: self.image_of.iter().map(|&y| next.image_of[y]).collect(),
        })
    }

    pub fn image(&self, s: &ElementSet) -> ElementSet {
        ElementSet::from_elements(self.target.order(), s.iter().map(|a| self.image_of[a]))
    }

    pub fn preimage(&self, s: &ElementSet) -> Result<ElementSet> {
        if !self.target.is_subgroup(s) {
            return Err(Error::NotSubgroup);
        }
        Ok(ElementSet::from_elements(
            self.source.order(),
            (0..self.source.order()).filter(|&a| s.contains(self.image_of[a])),
        ))
    }

    pub fn kernel(&self) -> ElementSet {
        ElementSet::from_elements(
            self.source.order(),
            (0..self.source.order()).filter(|&a| self.image_of[a] == 0),
        )
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = BitSet::empty(self.target.order());
        for &y in &self.image_of {
            hit.insert(y);
        }
        hit.is_full()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().len() == 1
    }
}

/// `g / n` with its canonical surjection.
pub fn quotient(g: &Arc<Group>, n: &ElementSet) -> Result<(Arc<Group>, GroupHom)> {
    let name = format!("{}/N{}", g.name(), n.len());
    quotient_named(g, n, &name)
}

/// Cosets are numbered by their smallest element, so the identity coset is 0.
pub fn quotient_named(g: &Arc<Group>, n: &ElementSet, name: &str) -> Result<(Arc<Group>, GroupHom)> {
    if !g.is_normal(n) {
        return Err(Error::NotNormal);
    }
    let mut coset = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    let members = n.to_vec();
    for x in 0..g.order() {
        if coset[x] == usize::MAX {
            let id = reps.len();
            reps.push(x);
            for &h in &members {
                coset[g.mul(x, h)] = id;
            }
        }
    }
    let k = reps.len();
    let mut table = vec![0u16; k * k];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            table[i * k + j] = coset[g.mul(a, b)] as u16;
        }
    }
    let q = Arc::new(Group::from_raw_table(name, k, table));
    let hom = GroupHom {
        source: g.clone(),
        target: q.clone(),
        image_of: coset,
    };
    Ok((q, hom))
}

/// The subgroup `h` as a group in its own right, with its inclusion into `g`.
/// Subgroups of permutation groups keep their permutation representation.
pub fn subgroup_named(g: &Arc<Group>, h: &ElementSet, name: &str) -> Result<(Arc<Group>, GroupHom)> {
    if !g.is_subgroup(h) {
        return Err(Error::NotSubgroup);
    }
    let elems = h.to_vec();
    let mut local = vec![usize::MAX; g.order()];
    for (i, &x) in elems.iter().enumerate() {
        local[x] = i;
    }
    let k = elems.len();
    let mut table = vec![0u16; k * k];
    for (i, &a) in elems.iter().enumerate() {
        for (j, &b) in elems.iter().enumerate() {
            table[i * k + j] = local[g.mul(a, b)] as u16;
        }
    }
    let mut sub = Group::from_raw_table(name, k, table);
    if let Representation::Permutation { degree, perms } = &g.repr {
        sub.repr = Representation::Permutation {
            degree: *degree,
            perms: elems.iter().map(|&x| perms[x].clone()).collect(),
        };
    }
    let sub = Arc::new(sub);
    let hom = GroupHom {
        source: sub.clone(),
        target: g.clone(),
        image_of: elems,
    };
    Ok((sub, hom))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    fn s3() -> Group {
        Group::from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]], &caps()).unwrap()
    }

    fn q8() -> Group {
        // 0=1 1=-1 2=i 3=-i 4=j 5=-j 6=k 7=-k
        let unit = |x: usize| -> (i8, usize) { (if x.is_multiple_of(2) { 1 } else { -1 }, x / 2) };
        let basis = [[(1, 0), (1, 1), (1, 2), (1, 3)],
            [(1, 1), (-1, 0), (1, 3), (-1, 2)],
            [(1, 2), (-1, 3), (-1, 0), (1, 1)],
            [(1, 3), (1, 2), (-1, 1), (-1, 0)]];
        let rows = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (sa, ua) = unit(a);
                        let (sb, ub) = unit(b);
                        let (s, u) = basis[ua][ub];
                        let sign = sa * sb * s;
                        2 * u + usize::from(sign < 0)
                    })
                    .collect()
            })
            .collect();
        Group::from_table("Q8", rows, &caps()).unwrap()
    }

    #[test]
    fn z2_from_table() {
        let g = Group::from_table("Z2", vec![vec![0, 1], vec![1, 0]], &caps()).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn table_errors() {
        assert!(matches!(
            Group::from_table("bad", vec![vec![0, 1], vec![1, 1]], &caps()),
            Err(Error::NotLatinSquare(_))
        ));
        let no_identity = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]]
            .into_iter()
            .map(|r: Vec<usize>| r.into_iter().rev().collect())
            .collect();
        assert!(matches!(
            Group::from_table("bad", no_identity, &caps()),
            Err(Error::NoIdentity)
        ));
        // A loop of order 5 that is not a group.
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            Group::from_table("loop", loop5, &caps()),
            Err(Error::NonAssociative(..))
        ));
    }

    #[test]
    fn identity_is_reindexed() {
        // Z3 with identity labelled 2.
        let rows = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = Group::from_table("Z3", rows, &caps()).unwrap();
        for a in 0..3 {
            assert_eq!(g.mul(0, a), a);
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
    }

    #[test]
    fn permutation_closure() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.degree(), Some(3));
        assert!(matches!(
            Group::from_permutations("bad", 3, &[vec![0, 0, 1]], &caps()),
            Err(Error::GeneratorNotBijective(0, 3))
        ));
        let small = Caps { max_order: 5, ..Caps::default() };
        assert!(matches!(
            Group::from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]], &small),
            Err(Error::OrderCapExceeded(5))
        ));
    }

    #[test]
    fn load_checks_declared_order() {
        let d = GroupDescription::Perm {
            name: "S3".into(),
            degree: 3,
            order: 5,
            generators: vec![vec![1, 0, 2], vec![1, 2, 0]],
            element_names: None,
        };
        assert!(matches!(
            load_group(&d, &caps()),
            Err(Error::OrderMismatch { declared: 5, actual: 6 })
        ));
        let json = r#"{"name":"Z2","kind":"cayley","order":2,"table":[[0,1],[1,0]]}"#;
        let d: GroupDescription = serde_json::from_str(json).unwrap();
        assert_eq!(load_group(&d, &caps()).unwrap().order(), 2);
    }

    #[test]
    fn class_sizes() {
        let mut sizes: Vec<usize> = s3().conjugacy_classes().iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        let mut sizes: Vec<usize> = q8().conjugacy_classes().iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
        let z12 = Group::from_table(
            "Z12",
            (0..12).map(|a| (0..12).map(|b| (a + b) % 12).collect()).collect(),
            &caps(),
        )
        .unwrap();
        assert_eq!(z12.conjugacy_classes().len(), 12);
        assert_eq!(s3().conjugacy_classes()[0], vec![0]);
    }

    #[test]
    fn normal_closures_in_s3() {
        let g = s3();
        let three_cycle = (0..6).find(|&a| g.element_order(a) == 3).unwrap();
        let transposition = (0..6).find(|&a| g.element_order(a) == 2).unwrap();
        assert_eq!(g.normal_closure(&g.trivial_set()).len(), 1);
        let a3 = g.normal_closure(&ElementSet::from_elements(6, [three_cycle]));
        assert_eq!(a3.len(), 3);
        assert!(g.is_normal(&a3));
        assert_eq!(g.normal_closure(&ElementSet::from_elements(6, [transposition])).len(), 6);
        let t = g.subgroup_generated([transposition]);
        assert!(g.is_subgroup(&t) && !g.is_normal(&t));
    }

    #[test]
    fn quotients() {
        let g = Arc::new(s3());
        let (q, h) = quotient(&g, &g.trivial_set()).unwrap();
        assert_eq!(q.order(), 6);
        assert!(h.is_injective() && h.is_surjective());

        let three_cycle = (0..6).find(|&a| g.element_order(a) == 3).unwrap();
        let a3 = g.normal_closure(&ElementSet::from_elements(6, [three_cycle]));
        let (q, h) = quotient(&g, &a3).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(h.kernel(), a3);
        assert_eq!(h.preimage(&q.trivial_set()).unwrap(), a3);

        let t = g.subgroup_generated([(0..6).find(|&a| g.element_order(a) == 2).unwrap()]);
        assert!(matches!(quotient(&g, &t), Err(Error::NotNormal)));

        let q8 = Arc::new(q8());
        let center = ElementSet::from_elements(8, [0, 1]);
        let (q, h) = quotient(&q8, &center).unwrap();
        assert_eq!(q.order(), 4);
        assert!((1..4).all(|a| q.element_order(a) == 2));
        assert_eq!(h.kernel(), center);
    }

    #[test]
    fn preimages_and_inclusions() {
        let g = Arc::new(s3());
        let id = GroupHom::identity(g.clone());
        let three_cycle = (0..6).find(|&a| g.element_order(a) == 3).unwrap();
        let a3 = g.normal_closure(&ElementSet::from_elements(6, [three_cycle]));
        assert_eq!(id.preimage(&a3).unwrap(), a3);

        let (sub, incl) = subgroup_named(&g, &a3, "A3").unwrap();
        assert_eq!(sub.order(), 3);
        assert_eq!(sub.degree(), Some(3));
        assert_eq!(incl.preimage(&a3).unwrap(), sub.full_set());

        let not_sub = ElementSet::from_elements(6, [0, three_cycle]);
        assert!(matches!(id.preimage(&not_sub), Err(Error::NotSubgroup)));
    }

    #[test]
    fn hom_validation() {
        let g = Arc::new(s3());
        let (z2, sign) = {
            let three_cycle = (0..6).find(|&a| g.element_order(a) == 3).unwrap();
            let a3 = g.normal_closure(&ElementSet::from_elements(6, [three_cycle]));
            quotient(&g, &a3).unwrap()
        };
        let rebuilt = GroupHom::from_generator_images(
            g.clone(),
            z2.clone(),
            &g.generators().iter().map(|&x| sign.apply(x)).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(rebuilt.image_map(), sign.image_map());
        // Sending a 3-cycle generator to the non-identity is inconsistent.
        let bad: Vec<usize> = g.generators().iter().map(|_| 1).collect();
        assert!(GroupHom::from_generator_images(g.clone(), z2, &bad).is_err());
    }

    #[test]
    fn description_round_trip() {
        let g = s3();
        let d = g.to_description();
        let back = load_group(&d, &caps()).unwrap();
        assert_eq!(back.order(), 6);
        let text = serde_json::to_string(&d).unwrap();
        assert!(text.contains("\"kind\":\"perm\""));
    }
}
