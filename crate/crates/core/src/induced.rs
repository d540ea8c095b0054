//! Maps between structure spaces induced by group homomorphisms.
//!
//! A homomorphism `φ: G -> G'` pulls normal subgroups back, so it induces
//! `φ_*: σ(G') -> σ(G)`. The map's domain space lives over the target group
//! and its codomain space over the source group.

use std::sync::Arc;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::group::GroupHom;
use crate::lattice::MemberId;
use crate::spectra::{contraction_closed, Check, Spectrum, SpectrumKind};
use crate::topology::{build_space, FiniteSpace};

#[derive(Clone, Debug)]
pub struct SpectralMap {
    hom: GroupHom,
    kind: SpectrumKind,
    /// Space over the spectrum of the homomorphism's target.
    domain: FiniteSpace,
    /// Space over the spectrum of the homomorphism's source.
    codomain: FiniteSpace,
    point_map: Vec<usize>,
}

/// `φ_*` for spectra `on_source` (of `G`) and `on_target` (of `G'`).
pub fn induced_map(hom: &GroupHom, on_source: &Spectrum, on_target: &Spectrum, caps: &Caps) -> Result<SpectralMap> {
    let check = contraction_closed(hom, on_source, on_target)?;
    if let Some(n) = check.witness {
        return Err(Error::ContractionFails(n));
    }
    let domain = build_space(on_target, caps);
    let codomain = build_space(on_source, caps);
    let src = on_source.lattice();
    let point_map = domain
        .points()
        .iter()
        .map(|&n| {
            let pre = hom.preimage(on_target.lattice().member(n))?;
            let id = src.lookup(&pre).expect("preimages of normal subgroups are normal");
            Ok(codomain.point_of(id).expect("contraction-closed"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralMap {
        hom: hom.clone(),
        kind: on_source.kind(),
        domain,
        codomain,
        point_map,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContinuityWitness {
    /// A closed set of the codomain (as source-lattice members) whose
    /// preimage is not closed.
    PreimageNotClosed { closed: Vec<MemberId>, preimage: Vec<MemberId> },
    /// A source member `x` with `φ_*^{-1}(V(x)) != V(<φ(x)>)`.
    SubbasicMismatch { x: MemberId, normal_closure_of_image: MemberId },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EmbeddingWitness {
    NotInjective { a: MemberId, b: MemberId },
    ImageIsNotHullOfKernel { image: Vec<MemberId>, expected: Vec<MemberId> },
    ImageNotClosed { closed: Vec<MemberId>, image: Vec<MemberId> },
}

/// Both sides of the density criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Density {
    /// The image is dense in the codomain.
    pub dense: bool,
    /// `Ker φ` lies in every member of the codomain's spectrum.
    pub kernel_below_meet: bool,
    /// `Ker φ` equals the meet of the codomain's spectrum.
    pub kernel_equals_meet: bool,
}

impl Density {
    pub fn agrees(&self) -> bool {
        self.dense == self.kernel_below_meet
    }
}

impl SpectralMap {
    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn domain(&self) -> &FiniteSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteSpace {
        &self.codomain
    }

    /// Domain point index to codomain point index.
    pub fn point_map(&self) -> &[usize] {
        &self.point_map
    }

    /// `(n', φ^{-1}(n'))` as lattice members.
    pub fn member_map(&self) -> Vec<(MemberId, MemberId)> {
        self.point_map
            .iter()
            .enumerate()
            .map(|(i, &j)| (self.domain.points()[i], self.codomain.points()[j]))
            .collect()
    }

    pub fn image(&self) -> BitSet {
        BitSet::from_indices(self.codomain.len(), self.point_map.iter().copied())
    }

    pub fn preimage(&self, set: &BitSet) -> BitSet {
        BitSet::from_indices(
            self.domain.len(),
            (0..self.domain.len()).filter(|&i| set.contains(self.point_map[i])),
        )
    }

    pub fn image_of(&self, set: &BitSet) -> BitSet {
        BitSet::from_indices(self.codomain.len(), set.iter().map(|i| self.point_map[i]))
    }

    /// Closed sets to test: the whole family when materialized, otherwise
    /// the subbasic sets, whose unions give every closed set.
    fn test_sets(space: &FiniteSpace) -> Vec<BitSet> {
        match space.closed_family() {
            Some(f) => f.to_vec(),
            None => space.subbasis().to_vec(),
        }
    }

    pub fn continuity(&self) -> Check<ContinuityWitness> {
        for c in Self::test_sets(&self.codomain) {
            let pre = self.preimage(&c);
            if !self.domain.is_closed(&pre) {
                return Check::from_witness(Some(ContinuityWitness::PreimageNotClosed {
                    closed: self.codomain.members_of(&c),
                    preimage: self.domain.members_of(&pre),
                }));
            }
        }
        let source = self.hom.source();
        let target = self.hom.target();
        let src_lattice = self.codomain.spectrum().lattice();
        let tgt_lattice = self.domain.spectrum().lattice();
        for x in src_lattice.ids() {
            let image = self.hom.image(src_lattice.member(x));
            let ncl = tgt_lattice
                .lookup(&target.normal_closure(&image))
                .expect("normal closures are normal");
            if self.preimage(self.codomain.subbasic(x)) != *self.domain.subbasic(ncl) {
                return Check::from_witness(Some(ContinuityWitness::SubbasicMismatch {
                    x,
                    normal_closure_of_image: ncl,
                }));
            }
        }
        debug_assert!(Arc::ptr_eq(source, src_lattice.group()));
        Check::from_witness(None)
    }

    /// For a surjective homomorphism: `φ_*` is injective with image
    /// `V(Ker φ)` and sends closed sets to closed sets.
    pub fn closed_embedding(&self) -> Result<Check<EmbeddingWitness>> {
        if !self.hom.is_surjective() {
            return Err(Error::HomNotSurjective);
        }
        let dom = &self.domain;
        for i in 0..dom.len() {
            for j in 0..i {
                if self.point_map[i] == self.point_map[j] {
                    return Ok(Check::from_witness(Some(EmbeddingWitness::NotInjective {
                        a: dom.points()[j],
                        b: dom.points()[i],
                    })));
                }
            }
        }
        let src_lattice = self.codomain.spectrum().lattice();
        let kernel = src_lattice.lookup(&self.hom.kernel()).expect("kernels are normal");
        let image = self.image();
        let expected = self.codomain.subbasic(kernel);
        if image != *expected {
            return Ok(Check::from_witness(Some(EmbeddingWitness::ImageIsNotHullOfKernel {
                image: self.codomain.members_of(&image),
                expected: self.codomain.members_of(expected),
            })));
        }
        // V(Ker) is closed, so closedness in the subspace is closedness in
        // the whole space.
        for c in Self::test_sets(dom) {
            let img = self.image_of(&c);
            if !self.codomain.is_closed(&img) {
                return Ok(Check::from_witness(Some(EmbeddingWitness::ImageNotClosed {
                    closed: dom.members_of(&c),
                    image: self.codomain.members_of(&img),
                })));
            }
        }
        Ok(Check::from_witness(None))
    }

    pub fn density(&self) -> Density {
        let cod = &self.codomain;
        let l = cod.spectrum().lattice();
        let dense = cod.closure(&self.image()) == cod.full();
        let kernel = l.lookup(&self.hom.kernel()).expect("kernels are normal");
        let meet = l.meet_all(cod.points().iter().copied());
        Density {
            dense,
            kernel_below_meet: l.leq(kernel, meet),
            kernel_equals_meet: kernel == meet,
        }
    }
}

/// `(ψ∘φ)_* = φ_* ∘ ψ_*` on every point of the outer domain. The witness is
/// a point (as a member of the last group's lattice) where they differ.
pub fn functoriality(phi: &SpectralMap, psi: &SpectralMap) -> Result<Check<MemberId>> {
    if phi.kind() != psi.kind() {
        return Err(Error::Invalid("maps of different kinds".into()));
    }
    let composite = phi.hom().then(psi.hom())?;
    if !Arc::ptr_eq(phi.domain.spectrum().lattice(), psi.codomain.spectrum().lattice()) {
        return Err(Error::Invalid("maps do not share a middle space".into()));
    }
    let last = psi.domain();
    let first_lattice = phi.codomain.spectrum().lattice();
    for (i, &n) in last.points().iter().enumerate() {
        let pre = composite.preimage(last.spectrum().lattice().member(n))?;
        let direct = first_lattice.lookup(&pre).expect("normal");
        let via = phi.codomain.points()[phi.point_map[psi.point_map[i]]];
        if direct != via {
            return Ok(Check::from_witness(Some(n)));
        }
    }
    Ok(Check::from_witness(None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lattice::{enumerate_normal_subgroups, NormalLattice};
    use crate::spectra::{compute_spectrum, SpectrumOptions};

    fn spec(l: &Arc<NormalLattice>, kind: SpectrumKind) -> Spectrum {
        compute_spectrum(l, kind, &SpectrumOptions::default()).unwrap()
    }

    fn by_order(l: &NormalLattice, order: usize) -> Vec<MemberId> {
        l.ids().filter(|&i| l.member(i).len() == order).collect()
    }

    #[test]
    fn identity_map() {
        let g = catalog::group("D4").unwrap();
        let l = Arc::new(enumerate_normal_subgroups(g.clone()));
        let s = spec(&l, SpectrumKind::Prp);
        let m = induced_map(&GroupHom::identity(g), &s, &s, &Caps::default()).unwrap();
        assert!(m.point_map().iter().enumerate().all(|(i, &j)| i == j));
        assert!(m.continuity().holds);
        assert!(m.closed_embedding().unwrap().holds);
        let d = m.density();
        assert!(d.dense && d.kernel_below_meet);
    }

    #[test]
    fn projection_of_a5xa5() {
        let homs = catalog::extra_homs().unwrap();
        let proj = &homs[0].hom;
        let src = Arc::new(enumerate_normal_subgroups(proj.source().clone()));
        let tgt = Arc::new(enumerate_normal_subgroups(proj.target().clone()));
        let m = induced_map(proj, &spec(&src, SpectrumKind::Spec), &spec(&tgt, SpectrumKind::Spec), &Caps::default()).unwrap();
        let kernel = src.lookup(&proj.kernel()).unwrap();
        assert_eq!(m.member_map(), vec![(tgt.trivial(), kernel)]);
        assert!(m.continuity().holds);
        assert!(m.closed_embedding().unwrap().holds);
        let d = m.density();
        assert!(!d.dense && !d.kernel_below_meet && d.agrees());
    }

    #[test]
    fn quotient_of_s5_by_a5_has_empty_spec() {
        let s5 = catalog::group("S5").unwrap();
        let l = Arc::new(enumerate_normal_subgroups(s5.clone()));
        let a5 = by_order(&l, 60)[0];
        let (q, hom) = crate::group::quotient(&s5, l.member(a5)).unwrap();
        let lq = Arc::new(enumerate_normal_subgroups(q));
        let m = induced_map(&hom, &spec(&l, SpectrumKind::Spec), &spec(&lq, SpectrumKind::Spec), &Caps::default()).unwrap();
        assert!(m.point_map().is_empty());
        assert!(m.closed_embedding().unwrap().holds);
    }

    #[test]
    fn max_fails_contraction_for_a3_in_s3() {
        let homs = catalog::extra_homs().unwrap();
        let incl = &homs[3].hom;
        let src = Arc::new(enumerate_normal_subgroups(incl.source().clone()));
        let tgt = Arc::new(enumerate_normal_subgroups(incl.target().clone()));
        let err = induced_map(incl, &spec(&src, SpectrumKind::Max), &spec(&tgt, SpectrumKind::Max), &Caps::default());
        assert!(matches!(err, Err(Error::ContractionFails(_))));
        let m = induced_map(incl, &spec(&src, SpectrumKind::Prp), &spec(&tgt, SpectrumKind::Prp), &Caps::default());
        assert!(matches!(m, Err(Error::ContractionFails(_))));
        let m = induced_map(incl, &spec(&src, SpectrumKind::Spec), &spec(&tgt, SpectrumKind::Spec), &Caps::default()).unwrap();
        assert!(matches!(m.closed_embedding(), Err(Error::HomNotSurjective)));
    }

    #[test]
    fn composition() {
        let g = catalog::group("S4").unwrap();
        let l = Arc::new(enumerate_normal_subgroups(g.clone()));
        let v4 = by_order(&l, 4)[0];
        let a4 = by_order(&l, 12)[0];
        let (q1, phi) = crate::group::quotient(&g, l.member(v4)).unwrap();
        let l1 = Arc::new(enumerate_normal_subgroups(q1.clone()));
        let image = phi.image(l.member(a4));
        let (_, psi) = crate::group::quotient(&q1, &image).unwrap();
        let l2 = Arc::new(enumerate_normal_subgroups(psi.target().clone()));
        let caps = Caps::default();
        let kind = SpectrumKind::Prp;
        let m_phi = induced_map(&phi, &spec(&l, kind), &spec(&l1, kind), &caps).unwrap();
        let m_psi = induced_map(&psi, &spec(&l1, kind), &spec(&l2, kind), &caps).unwrap();
        assert!(functoriality(&m_phi, &m_psi).unwrap().holds);
    }
}
