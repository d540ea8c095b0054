//! Modules over prime fields with a group acting by invertible matrices,
//! and the search for kernels of simple modules.
//!
//! A module is recorded as a homomorphism `G -> GL(d, p)`. Its kernel is
//! `{g : gm = m for all m}`; the literal annihilator `{g : gm = 0}` is
//! empty for any nonzero module because every `g` acts invertibly.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::group::{ElementSet, Group};
use crate::lattice::{MemberId, NormalLattice};
use crate::spectra::{Spectrum, SpectrumKind};

/// Search box for [`enumerate_primitive`]: primes `p <= max_p`,
/// dimensions `1 <= d <= max_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_p: u32,
    pub max_d: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_p: 3, max_d: 2 }
    }
}

pub fn is_prime_number(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k))
}

/// A `d x d` matrix over `F_p`, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    p: u32,
    d: usize,
    entries: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl Matrix {
    pub fn identity(p: u32, d: usize) -> Matrix {
        let mut entries = vec![0; d * d];
        for i in 0..d {
            entries[i * d + i] = 1;
        }
        Matrix { p, d, entries }
    }

    /// Entries are reduced mod `p`; negative values are allowed.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Result<Matrix> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::Invalid("module matrices must be square and nonempty".into()));
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|&x| x.rem_euclid(p as i64) as u32)
            .collect();
        Ok(Matrix { p, d, entries })
    }

    /// Decodes the base-`p` digits of `code`, least significant first.
    pub fn from_code(p: u32, d: usize, mut code: u64) -> Matrix {
        let mut entries = vec![0; d * d];
        for e in entries.iter_mut() {
            *e = (code % p as u64) as u32;
            code /= p as u64;
        }
        Matrix { p, d, entries }
    }

    pub fn code(&self) -> u64 {
        self.entries
            .iter()
            .rev()
            .fold(0u64, |acc, &e| acc * self.p as u64 + e as u64)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.d + j]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.d).map(<[u32]>::to_vec).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let d = self.d;
        let p = self.p;
        let mut entries = vec![0; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] = (entries[i * d + j] + a * other.entries[k * d + j]) % p;
                }
            }
        }
        Matrix { p, d, entries }
    }

    /// `M v` for a column vector `v`.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        (0..self.d)
            .map(|i| {
                (0..self.d)
                    .map(|j| self.entries[i * self.d + j] * v[j])
                    .sum::<u32>()
                    % self.p
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.d).all(|i| (0..self.d).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows();
        echelon_rank(&mut rows, self.p)
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.d
    }

    /// Multiplicative order; the matrix must be invertible.
    pub fn order(&self) -> usize {
        let mut x = self.clone();
        let mut k = 1;
        while !x.is_identity() {
            x = x.mul(self);
            k += 1;
        }
        k
    }

    pub fn inverse(&self) -> Option<Matrix> {
        let d = self.d;
        let p = self.p;
        let mut aug: Vec<Vec<u32>> = (0..d)
            .map(|i| {
                let mut row: Vec<u32> = self.entries[i * d..(i + 1) * d].to_vec();
                row.extend((0..d).map(|j| u32::from(i == j)));
                row
            })
            .collect();
        for col in 0..d {
            let pivot = (col..d).find(|&r| aug[r][col] != 0)?;
            aug.swap(col, pivot);
            let s = inv_mod(aug[col][col], p);
            for x in aug[col].iter_mut() {
                *x = *x * s % p;
            }
            let pivot_row = aug[col].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                let f = row[col];
                if r != col && f != 0 {
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x = (*x + (p - f) * y) % p;
                    }
                }
            }
        }
        let entries = aug.into_iter().flat_map(|r| r[d..].to_vec()).collect();
        Some(Matrix { p, d, entries })
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Row-reduces in place and returns the rank.
fn echelon_rank(rows: &mut [Vec<u32>], p: u32) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let s = inv_mod(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = *x * s % p;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            let f = row[col];
            if r != rank && f != 0 {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Incrementally maintained reduced echelon basis of a subspace of `F_p^d`.
struct Span {
    p: u32,
    basis: Vec<(usize, Vec<u32>)>,
}

impl Span {
    fn new(p: u32) -> Span {
        Span { p, basis: Vec::new() }
    }

    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut v = v.to_vec();
        for (pivot, b) in &self.basis {
            let f = v[*pivot];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        v
    }

    /// Adds `v` if it is outside the span; returns whether it was added.
    fn insert(&mut self, v: &[u32]) -> bool {
        let p = self.p;
        let mut r = self.reduce(v);
        let Some(pivot) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = inv_mod(r[pivot], p);
        for x in r.iter_mut() {
            *x = *x * s % p;
        }
        for (_, b) in self.basis.iter_mut() {
            let f = b[pivot];
            if f != 0 {
                for (x, y) in b.iter_mut().zip(&r) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        self.basis.push((pivot, r));
        true
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Vector with base-`p` digits of `code`, least significant first.
pub fn vector_from_code(p: u32, d: usize, mut code: u64) -> Vec<u32> {
    (0..d)
        .map(|_| {
            let x = (code % p as u64) as u32;
            code /= p as u64;
            x
        })
        .collect()
}

/// User-facing module description: one matrix per group generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub p: u32,
    pub d: usize,
    pub generators: Vec<Vec<Vec<i64>>>,
}

/// `F_p^d` with a group acting through invertible matrices.
#[derive(Clone)]
pub struct FpModule {
    group: Arc<Group>,
    p: u32,
    d: usize,
    generator_images: Vec<Matrix>,
    images: Vec<Matrix>,
}

impl fmt::Debug for FpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FpModule")
            .field("group", &self.group.name())
            .field("p", &self.p)
            .field("d", &self.d)
            .field("generators", &self.generator_images)
            .finish()
    }
}

/// Images along a breadth-first spanning tree, or the first edge where the
/// assignment is not multiplicative.
fn extend_images(group: &Group, gens: &[usize], images: &[Matrix]) -> std::result::Result<Vec<Matrix>, (usize, usize)> {
    let n = group.order();
    let d = images.first().map_or(1, Matrix::dim);
    let p = images.first().map_or(2, Matrix::p);
    let mut out: Vec<Option<Matrix>> = vec![None; n];
    out[0] = Some(Matrix::identity(p, d));
    let mut queue = vec![0];
    let mut i = 0;
    while i < queue.len() {
        let a = queue[i];
        for (k, &g) in gens.iter().enumerate() {
            let b = group.mul(a, g);
            let m = out[a].as_ref().expect("visited").mul(&images[k]);
            match &out[b] {
                Some(existing) if *existing != m => return Err((a, g)),
                Some(_) => {}
                None => {
                    out[b] = Some(m);
                    queue.push(b);
                }
            }
        }
        i += 1;
    }
    Ok(out.into_iter().map(|m| m.expect("generators generate")).collect())
}

impl FpModule {
    /// Builds the module from images of [`Group::generators`], or from one
    /// matrix per element.
    pub fn new(group: Arc<Group>, p: u32, matrices: Vec<Matrix>) -> Result<FpModule> {
        if !is_prime_number(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        let d = matrices.first().map_or(1, Matrix::dim);
        if matrices.iter().any(|m| m.dim() != d || m.p() != p) {
            return Err(Error::Invalid("module matrices differ in size or field".into()));
        }
        for (i, m) in matrices.iter().enumerate() {
            if !m.is_invertible() {
                return Err(Error::NotInvertible(i));
            }
        }
        let gens = group.generators().to_vec();
        let images = if matrices.len() == gens.len() {
            extend_images(&group, &gens, &matrices).map_err(|(a, g)| {
                Error::NotHomomorphism(format!("two words for {a}*{g} act differently"))
            })?
        } else if matrices.len() == group.order() {
            for a in 0..group.order() {
                for b in 0..group.order() {
                    if matrices[group.mul(a, b)] != matrices[a].mul(&matrices[b]) {
                        return Err(Error::NotHomomorphism(format!("({a}*{b})m != {a}({b}m)")));
                    }
                }
            }
            matrices
        } else {
            return Err(Error::Invalid(format!(
                "{} matrices for {} generators and {} elements",
                matrices.len(),
                gens.len(),
                group.order()
            )));
        };
        if !images[0].is_identity() {
            return Err(Error::NotHomomorphism("identity does not act trivially".into()));
        }
        let generator_images = gens.iter().map(|&g| images[g].clone()).collect();
        Ok(FpModule {
            group,
            p,
            d,
            generator_images,
            images,
        })
    }

    pub fn trivial(group: Arc<Group>, p: u32, d: usize) -> Result<FpModule> {
        let k = group.generators().len();
        FpModule::new(group, p, vec![Matrix::identity(p, d); k])
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn generator_images(&self) -> &[Matrix] {
        &self.generator_images
    }

    pub fn action(&self, g: usize) -> &Matrix {
        &self.images[g]
    }

    /// Number of vectors, `p^d`, saturating.
    pub fn vector_count(&self) -> u64 {
        (self.p as u64).saturating_pow(self.d as u32)
    }

    pub fn to_spec(&self) -> ModuleSpec {
        ModuleSpec {
            p: self.p,
            d: self.d,
            generators: self
                .generator_images
                .iter()
                .map(|m| m.rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect())
                .collect(),
        }
    }

    /// Whether the submodule generated by `v` is the whole space.
    pub fn spins_to_whole(&self, v: &[u32]) -> bool {
        let mut span = Span::new(self.p);
        let mut queue = Vec::new();
        if span.insert(v) {
            queue.push(v.to_vec());
        }
        while let Some(w) = queue.pop() {
            for m in &self.generator_images {
                let x = m.apply(&w);
                if span.insert(&x) {
                    if span.dim() == self.d {
                        return true;
                    }
                    queue.push(x);
                }
            }
        }
        span.dim() == self.d
    }

    /// Spins every nonzero vector; the module is simple iff each one
    /// generates the whole space.
    pub fn is_simple(&self, caps: &Caps) -> Result<bool> {
        let count = self.vector_count();
        if count > caps.max_module_vectors as u64 {
            return Err(Error::SearchTooLarge(format!(
                "{count} vectors exceed the cap of {}",
                caps.max_module_vectors
            )));
        }
        Ok((1..count).all(|c| self.spins_to_whole(&vector_from_code(self.p, self.d, c))))
    }

    /// Elements acting as the identity matrix.
    pub fn action_kernel(&self) -> ElementSet {
        ElementSet::from_elements(
            self.group.order(),
            (0..self.group.order()).filter(|&g| self.images[g].is_identity()),
        )
    }
}

/// Parses a module fragment against a loaded group.
pub fn validate_module(group: Arc<Group>, spec: &ModuleSpec) -> Result<FpModule> {
    if !is_prime_number(spec.p) {
        return Err(Error::Invalid(format!("{} is not prime", spec.p)));
    }
    let matrices = spec
        .generators
        .iter()
        .map(|rows| Matrix::from_rows(spec.p, rows))
        .collect::<Result<Vec<_>>>()?;
    if matrices.iter().any(|m| m.dim() != spec.d) {
        return Err(Error::Invalid(format!("matrices are not {0}x{0}", spec.d)));
    }
    if matrices.is_empty() {
        return FpModule::trivial(group, spec.p, spec.d);
    }
    FpModule::new(group, spec.p, matrices)
}

fn conjugation_generators(p: u32, d: usize) -> Vec<(Matrix, Matrix)> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                let mut t = Matrix::identity(p, d);
                t.entries[i * d + j] = 1;
                let inv = t.inverse().expect("transvection");
                out.push((t, inv));
            }
        }
    }
    if p > 2 {
        let root = (2..p)
            .find(|&a| (1..p - 1).all(|k| (a as u64).pow(k) % p as u64 != 1))
            .expect("F_p has a primitive root");
        let mut s = Matrix::identity(p, d);
        s.entries[0] = root;
        let inv = s.inverse().expect("diagonal");
        out.push((s, inv));
    }
    out
}

/// Invertible matrices in code order, with their multiplicative orders.
fn general_linear(p: u32, d: usize, caps: &Caps) -> Result<Vec<(Matrix, usize)>> {
    let space = (p as u64).checked_pow((d * d) as u32).unwrap_or(u64::MAX);
    if space > caps.max_matrix_space as u64 {
        return Err(Error::SearchTooLarge(format!(
            "{space} matrices of size {d} over F_{p} exceed the cap of {}",
            caps.max_matrix_space
        )));
    }
    Ok((0..space)
        .into_par_iter()
        .filter_map(|c| {
            let m = Matrix::from_code(p, d, c);
            m.is_invertible().then(|| {
                let o = m.order();
                (m, o)
            })
        })
        .collect())
}

/// Breadth-first layout of the subgroup generated by the first `j`
/// generators: tree edges assign images, other edges are relations.
struct Layer {
    order: Vec<usize>,
    edges: Vec<(usize, usize, usize)>,
}

fn layers(group: &Group, gens: &[usize]) -> Vec<Layer> {
    (1..=gens.len())
        .map(|j| {
            let mut seen = vec![false; group.order()];
            seen[0] = true;
            let mut order = vec![0];
            let mut edges = Vec::new();
            let mut i = 0;
            while i < order.len() {
                let a = order[i];
                for (k, &g) in gens[..j].iter().enumerate() {
                    let b = group.mul(a, g);
                    edges.push((a, k, b));
                    if !seen[b] {
                        seen[b] = true;
                        order.push(b);
                    }
                }
                i += 1;
            }
            Layer { order, edges }
        })
        .collect()
}

fn consistent(layer: &Layer, images: &[&Matrix], p: u32, d: usize, n: usize) -> bool {
    let mut rho: Vec<Option<Matrix>> = vec![None; n];
    rho[0] = Some(Matrix::identity(p, d));
    for &(a, k, b) in &layer.edges {
        let m = rho[a].as_ref().expect("breadth-first").mul(images[k]);
        match &rho[b] {
            Some(existing) => {
                if *existing != m {
                    return false;
                }
            }
            None => rho[b] = Some(m),
        }
    }
    debug_assert!(layer.order.iter().all(|&x| rho[x].is_some()));
    true
}

/// Every homomorphism `G -> GL(d, p)` up to simultaneous conjugation of the
/// first generator's image, which preserves kernels and simplicity.
///
/// Candidates for each generator are restricted to matrices whose order
/// divides the generator's order; partial assignments are rejected as soon
/// as the subgroup generated so far violates a relation.
pub fn representations(group: &Arc<Group>, p: u32, d: usize, caps: &Caps) -> Result<Vec<FpModule>> {
    if !is_prime_number(p) || d == 0 {
        return Err(Error::Invalid(format!("no field F_{p} of dimension {d}")));
    }
    let gens = group.generators().to_vec();
    if gens.is_empty() {
        return Ok(vec![FpModule::trivial(group.clone(), p, d)?]);
    }
    let gl = general_linear(p, d, caps)?;
    let candidates: Vec<Vec<&Matrix>> = gens
        .iter()
        .map(|&g| {
            let o = group.element_order(g);
            gl.iter().filter(|(_, k)| o.is_multiple_of(*k)).map(|(m, _)| m).collect()
        })
        .collect();
    let first: Vec<&Matrix> = class_representatives(&candidates[0], p, d);
    let layers = layers(group, &gens);
    let n = group.order();

    let found: Vec<Vec<Vec<Matrix>>> = first
        .par_iter()
        .map(|&m0| {
            let mut out = Vec::new();
            let mut chosen: Vec<&Matrix> = vec![m0];
            if consistent(&layers[0], &chosen, p, d, n) {
                backtrack(&layers, &candidates, &mut chosen, p, d, n, &mut out);
            }
            out
        })
        .collect();
    found
        .into_iter()
        .flatten()
        .map(|images| FpModule::new(group.clone(), p, images))
        .collect()
}

fn backtrack<'a>(
    layers: &[Layer],
    candidates: &[Vec<&'a Matrix>],
    chosen: &mut Vec<&'a Matrix>,
    p: u32,
    d: usize,
    n: usize,
    out: &mut Vec<Vec<Matrix>>,
) {
    let j = chosen.len();
    if j == candidates.len() {
        out.push(chosen.iter().map(|&m| m.clone()).collect());
        return;
    }
    for &m in &candidates[j] {
        chosen.push(m);
        if consistent(&layers[j], chosen, p, d, n) {
            backtrack(layers, candidates, chosen, p, d, n, out);
        }
        chosen.pop();
    }
}

/// Smallest-code member of each conjugacy orbit meeting `candidates`.
/// Candidate sets are unions of conjugacy classes (closed under element
/// order), so orbits stay inside them.
fn class_representatives<'a>(candidates: &[&'a Matrix], p: u32, d: usize) -> Vec<&'a Matrix> {
    let conj = conjugation_generators(p, d);
    let mut by_code: BTreeMap<u64, &'a Matrix> = candidates.iter().map(|&m| (m.code(), m)).collect();
    let mut reps = Vec::new();
    while let Some((&code, &m)) = by_code.iter().next() {
        reps.push(m);
        by_code.remove(&code);
        let mut stack = vec![m.clone()];
        while let Some(x) = stack.pop() {
            for (s, s_inv) in &conj {
                let y = s.mul(&x).mul(s_inv);
                if by_code.remove(&y.code()).is_some() {
                    stack.push(y);
                }
            }
        }
    }
    reps
}

/// One module realizing a primitive kernel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimitiveWitness {
    pub kernel: MemberId,
    pub p: u32,
    pub d: usize,
    pub generator_images: Vec<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug)]
pub struct PrimitiveSearch {
    pub spectrum: Spectrum,
    pub bounds: SearchBounds,
    /// One witness per member, in member order.
    pub witnesses: Vec<PrimitiveWitness>,
    pub modules_examined: usize,
}

/// Kernels of simple modules over `F_p^d` for all primes `p <= max_p` and
/// `d <= max_d`, excluding the whole group.
pub fn enumerate_primitive(l: &Arc<NormalLattice>, bounds: SearchBounds, caps: &Caps) -> Result<PrimitiveSearch> {
    let group = l.group();
    let mut found: BTreeMap<MemberId, PrimitiveWitness> = BTreeMap::new();
    let mut examined = 0;
    for p in (2..=bounds.max_p).filter(|&p| is_prime_number(p)) {
        for d in 1..=bounds.max_d {
            for module in representations(group, p, d, caps)? {
                examined += 1;
                let kernel = l
                    .lookup(&module.action_kernel())
                    .expect("kernels are normal subgroups");
                if kernel == l.top() || found.contains_key(&kernel) {
                    continue;
                }
                if module.is_simple(caps)? {
                    found.insert(
                        kernel,
                        PrimitiveWitness {
                            kernel,
                            p,
                            d,
                            generator_images: module.generator_images().iter().map(Matrix::rows).collect(),
                        },
                    );
                }
            }
        }
    }
    let spectrum = Spectrum::new(l.clone(), SpectrumKind::Pmtv, found.keys().copied().collect())?
        .with_note(format!(
            "simple modules over F_p^d with p <= {}, d <= {}",
            bounds.max_p, bounds.max_d
        ))
        .with_note("kernel read as {g : gm = m for all m}");
    Ok(PrimitiveSearch {
        spectrum,
        bounds,
        witnesses: found.into_values().collect(),
        modules_examined: examined,
    })
}
