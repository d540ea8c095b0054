//! Slow, direct oracles. Nothing here calls into the lattice, spectra or
//! module code of the library; only raw group multiplication is shared.

#![allow(dead_code)]

use std::collections::BTreeSet;

use normspec::group::Group;

/// A subgroup as its sorted element list.
pub type Sub = Vec<usize>;

fn is_closed(g: &Group, set: &[bool]) -> bool {
    let elems: Vec<usize> = (0..g.order()).filter(|&x| set[x]).collect();
    set[0] && elems.iter().all(|&a| elems.iter().all(|&b| set[g.mul(a, b)]))
}

fn is_conj_invariant(g: &Group, set: &[bool]) -> bool {
    (0..g.order()).filter(|&x| set[x]).all(|a| (0..g.order()).all(|h| set[g.mul(g.mul(h, a), g.inv(h))]))
}

/// Every subset containing the identity, kept when closed and conjugation
/// invariant. Orders up to 16 only.
pub fn normal_subgroups_by_subsets(g: &Group) -> BTreeSet<Sub> {
    let n = g.order();
    assert!(n <= 16, "subset oracle is exponential");
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << (n - 1)) {
        let mut set = vec![false; n];
        set[0] = true;
        for (i, slot) in set.iter_mut().enumerate().skip(1) {
            *slot = mask >> (i - 1) & 1 == 1;
        }
        if is_closed(g, &set) && is_conj_invariant(g, &set) {
            out.insert((0..n).filter(|&x| set[x]).collect());
        }
    }
    out
}

/// Subgroup generated by `seed`, by repeated multiplication.
pub fn generate(g: &Group, seed: &[usize]) -> Sub {
    let n = g.order();
    let mut set = vec![false; n];
    set[0] = true;
    let mut elems = vec![0];
    for &s in seed {
        if !set[s] {
            set[s] = true;
            elems.push(s);
        }
    }
    let gens: Vec<usize> = elems.clone();
    let mut i = 0;
    while i < elems.len() {
        let a = elems[i];
        for &s in &gens {
            let b = g.mul(a, s);
            if !set[b] {
                set[b] = true;
                elems.push(b);
            }
        }
        i += 1;
    }
    (0..n).filter(|&x| set[x]).collect()
}

/// Conjugacy classes by direct conjugation.
pub fn classes(g: &Group) -> Vec<Vec<usize>> {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for a in 0..n {
        if seen[a] {
            continue;
        }
        let mut class: Vec<usize> = (0..n).map(|h| g.mul(g.mul(h, a), g.inv(h))).collect();
        class.sort_unstable();
        class.dedup();
        for &c in &class {
            seen[c] = true;
        }
        out.push(class);
    }
    out
}

/// Normal subgroups as all joins of class closures. Works for any order.
pub fn normal_subgroups_by_classes(g: &Group) -> BTreeSet<Sub> {
    let atoms: BTreeSet<Sub> = classes(g).iter().map(|c| generate(g, c)).collect();
    let mut all: BTreeSet<Sub> = atoms.clone();
    loop {
        let mut grew = false;
        let current: Vec<Sub> = all.iter().cloned().collect();
        for a in &current {
            for b in &atoms {
                let mut seed = a.clone();
                seed.extend(b);
                let j = generate(g, &seed);
                grew |= all.insert(j);
            }
        }
        if !grew {
            return all;
        }
    }
}

pub fn subset(a: &[usize], b: &[usize]) -> bool {
    let b: BTreeSet<usize> = b.iter().copied().collect();
    a.iter().all(|x| b.contains(x))
}

pub fn intersect(a: &[usize], b: &[usize]) -> Sub {
    let b: BTreeSet<usize> = b.iter().copied().collect();
    a.iter().copied().filter(|x| b.contains(x)).collect()
}

/// `[a, b]` from the set of all commutators.
pub fn commutator(g: &Group, a: &[usize], b: &[usize]) -> Sub {
    let mut seen = vec![false; g.order()];
    let mut comms = Vec::new();
    for &x in a {
        for &y in b {
            let c = g.mul(g.mul(x, y), g.mul(g.inv(x), g.inv(y)));
            if !seen[c] {
                seen[c] = true;
                comms.push(c);
            }
        }
    }
    generate(g, &comms)
}

/// Proper members `p` with `[a,b] ⊆ p ⇒ a ⊆ p ∨ b ⊆ p` for all pairs.
pub fn primes(g: &Group, normals: &BTreeSet<Sub>) -> BTreeSet<Sub> {
    let list: Vec<&Sub> = normals.iter().collect();
    let mut comm = vec![vec![Vec::new(); list.len()]; list.len()];
    for i in 0..list.len() {
        for j in i..list.len() {
            comm[i][j] = commutator(g, list[i], list[j]);
            comm[j][i] = comm[i][j].clone();
        }
    }
    list.iter()
        .filter(|p| p.len() < g.order())
        .filter(|p| {
            (0..list.len()).all(|i| {
                (0..list.len()).all(|j| !subset(&comm[i][j], p) || subset(list[i], p) || subset(list[j], p))
            })
        })
        .map(|p| (*p).clone())
        .collect()
}

/// Proper members with `a ∩ b ⊆ n ⇒ a ⊆ n ∨ b ⊆ n`.
pub fn strongly_irreducible(g: &Group, normals: &BTreeSet<Sub>) -> BTreeSet<Sub> {
    normals
        .iter()
        .filter(|n| n.len() < g.order())
        .filter(|n| {
            normals
                .iter()
                .all(|a| normals.iter().all(|b| !subset(&intersect(a, b), n) || subset(a, n) || subset(b, n)))
        })
        .cloned()
        .collect()
}

pub fn maximal(g: &Group, normals: &BTreeSet<Sub>) -> BTreeSet<Sub> {
    normals
        .iter()
        .filter(|m| m.len() < g.order())
        .filter(|m| !normals.iter().any(|k| k.len() > m.len() && k.len() < g.order() && subset(m, k)))
        .cloned()
        .collect()
}

// ---- matrices over F_p as plain row vectors ----

pub type Mat = Vec<Vec<u32>>;

pub fn mat_mul(p: u32, a: &Mat, b: &Mat) -> Mat {
    let d = a.len();
    (0..d)
        .map(|i| (0..d).map(|j| (0..d).map(|k| a[i][k] * b[k][j]).sum::<u32>() % p).collect())
        .collect()
}

pub fn mat_identity(d: usize) -> Mat {
    (0..d).map(|i| (0..d).map(|j| u32::from(i == j)).collect()).collect()
}

pub fn mat_apply(p: u32, a: &Mat, v: &[u32]) -> Vec<u32> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum::<u32>() % p).collect()
}

/// All `d x d` matrices over `F_p` (invertible or not).
pub fn all_matrices(p: u32, d: usize) -> Vec<Mat> {
    let cells = d * d;
    let total = (p as usize).pow(cells as u32);
    (0..total)
        .map(|mut code| {
            let mut flat = Vec::with_capacity(cells);
            for _ in 0..cells {
                flat.push((code % p as usize) as u32);
                code /= p as usize;
            }
            flat.chunks(d).map(<[u32]>::to_vec).collect()
        })
        .collect()
}

pub fn all_vectors(p: u32, d: usize) -> Vec<Vec<u32>> {
    let total = (p as usize).pow(d as u32);
    (0..total)
        .map(|mut code| {
            (0..d)
                .map(|_| {
                    let x = (code % p as usize) as u32;
                    code /= p as usize;
                    x
                })
                .collect()
        })
        .collect()
}

/// Every subspace of `F_p^d`, grown one vector at a time from zero.
pub fn subspaces(p: u32, d: usize) -> Vec<BTreeSet<Vec<u32>>> {
    let vectors = all_vectors(p, d);
    let zero = vec![0; d];
    let mut found: BTreeSet<BTreeSet<Vec<u32>>> = BTreeSet::new();
    let mut frontier = vec![BTreeSet::from([zero])];
    while let Some(s) = frontier.pop() {
        if !found.insert(s.clone()) {
            continue;
        }
        for v in &vectors {
            if s.contains(v) {
                continue;
            }
            let mut t = s.clone();
            for w in &s {
                for c in 1..p {
                    t.insert(w.iter().zip(v).map(|(x, y)| (x + c * y) % p).collect());
                }
            }
            if !found.contains(&t) {
                frontier.push(t);
            }
        }
    }
    found.into_iter().collect()
}

/// No subspace strictly between zero and the whole space is stable under
/// every matrix in `action`.
pub fn simple_by_subspaces(p: u32, d: usize, action: &[Mat], spaces: &[BTreeSet<Vec<u32>>]) -> bool {
    let whole = (p as usize).pow(d as u32);
    !spaces.iter().any(|s| {
        s.len() > 1 && s.len() < whole && action.iter().all(|m| s.iter().all(|v| s.contains(&mat_apply(p, m, v))))
    })
}

/// Kernels of all simple modules of dimension `d` over `F_p`, found by
/// trying every assignment of matrices to the group's generators.
pub fn simple_module_kernels(g: &Group, p: u32, d: usize) -> BTreeSet<Sub> {
    let gens = g.generators().to_vec();
    let mats: Vec<Mat> = all_matrices(p, d);
    let spaces = subspaces(p, d);
    let mut out = BTreeSet::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let images: Vec<&Mat> = choice.iter().map(|&c| &mats[c]).collect();
        if let Some(rho) = extend(g, &gens, &images, p, d) {
            let action: Vec<Mat> = images.iter().map(|m| (*m).clone()).collect();
            if simple_by_subspaces(p, d, &action, &spaces) {
                let id = mat_identity(d);
                out.insert((0..g.order()).filter(|&x| rho[x] == id).collect());
            }
        }
        let mut k = 0;
        while k < choice.len() {
            choice[k] += 1;
            if choice[k] < mats.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == choice.len() {
            return out;
        }
    }
}

/// Extends generator images to all elements and checks every product.
fn extend(g: &Group, gens: &[usize], images: &[&Mat], p: u32, d: usize) -> Option<Vec<Mat>> {
    let n = g.order();
    let mut rho: Vec<Option<Mat>> = vec![None; n];
    rho[0] = Some(mat_identity(d));
    let mut queue = vec![0];
    let mut i = 0;
    while i < queue.len() {
        let a = queue[i];
        for (k, &s) in gens.iter().enumerate() {
            let b = g.mul(a, s);
            if rho[b].is_none() {
                rho[b] = Some(mat_mul(p, rho[a].as_ref()?, images[k]));
                queue.push(b);
            }
        }
        i += 1;
    }
    let rho: Vec<Mat> = rho.into_iter().collect::<Option<_>>()?;
    for a in 0..n {
        for b in 0..n {
            if rho[g.mul(a, b)] != mat_mul(p, &rho[a], &rho[b]) {
                return None;
            }
        }
    }
    Some(rho)
}
