//! Executable checks of the structure-space theorems over a corpus.
//!
//! Every check reports `pass`, `fail`, `vacuous` (hypothesis not met) or
//! `skipped` (the spectrum could not be computed). Failures always carry a
//! witness.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{builtin_catalog, Corpus, NamedHom};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::gmodule::{enumerate_primitive, PrimitiveWitness};
use crate::group::Group;
use crate::induced::{functoriality, induced_map, SpectralMap};
use crate::lattice::{enumerate_normal_subgroups, omega_radical, radical, MemberId, NormalLattice};
use crate::spectra::{
    compute_spectrum, contraction_closed, is_irreducible, is_primary, is_prime, is_prime_elementwise, is_radical,
    mip_holds, uniform_without_abelian, Spectrum, SpectrumKind, SpectrumOptions,
};
use crate::topology::{build_space, FiniteSpace, TopologySummary};

/// Stable theorem identifiers, in report order.
pub const THEOREM_IDS: &[&str] = &[
    "commutator-inclusion",
    "radical-identities",
    "prime-criteria-agree",
    "prime-iff-radical-irreducible",
    "radical-prime-primary-irreducible",
    "trivial-prime-characterization",
    "spec-in-irr-plus",
    "irr-plus-largest-mip",
    "T0",
    "T1-iff-Max",
    "T1-iff-antichain",
    "subbasic-irreducible",
    "prp-subbasic-irreducible",
    "connected-if-trivial",
    "hull-kernel-iff-mip",
    "hull-kernel-iff-mip-kernels",
    "omega-radical-lemma",
    "generic-point",
    "irr-plus-sober",
    "spec-spectral",
    "partition-of-unity-max",
    "compactness-identity",
    "spec-contraction",
    "induced-continuity",
    "quotient-homeomorphism",
    "density-biconditional",
    "functoriality",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremVerdict {
    pub theorem: &'static str,
    pub group: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hom: Option<String>,
    pub verdict: Verdict,
    /// Counterexample on failure; supporting evidence otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

/// Which theorem ids to run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Selection(Option<BTreeSet<&'static str>>);

impl Selection {
    pub fn all() -> Selection {
        Selection(None)
    }

    /// `all`, or a comma-separated list of theorem ids.
    pub fn parse(text: &str) -> Result<Selection> {
        if text.trim() == "all" {
            return Ok(Selection::all());
        }
        let mut ids = BTreeSet::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let id = THEOREM_IDS
                .iter()
                .find(|&&t| t == part)
                .ok_or_else(|| Error::Invalid(format!("unknown theorem id `{part}`")))?;
            ids.insert(*id);
        }
        if ids.is_empty() {
            return Err(Error::Invalid("empty theorem selection".into()));
        }
        Ok(Selection(Some(ids)))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.0.as_ref().is_none_or(|s| s.contains(id))
    }

    pub fn describe(&self) -> String {
        match &self.0 {
            None => "all".into(),
            Some(s) => s.iter().copied().collect::<Vec<_>>().join(","),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub selection: Selection,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub caps: Caps,
    /// Random families per (group, kind) for the compactness identity.
    pub families: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            selection: Selection::all(),
            jobs: None,
            caps: Caps::default(),
            families: 1000,
        }
    }
}

/// One spectrum of a group with its space, or the reason it is missing.
#[derive(Clone, Debug)]
pub struct KindAnalysis {
    pub kind: SpectrumKind,
    pub outcome: std::result::Result<(Spectrum, FiniteSpace), String>,
    pub primitive_witnesses: Vec<PrimitiveWitness>,
}

#[derive(Clone, Debug)]
pub struct GroupAnalysis {
    pub lattice: Arc<NormalLattice>,
    pub kinds: Vec<KindAnalysis>,
}

impl GroupAnalysis {
    pub fn group(&self) -> &Arc<Group> {
        self.lattice.group()
    }

    pub fn spectrum(&self, kind: SpectrumKind) -> Option<&Spectrum> {
        self.kinds
            .iter()
            .find(|k| k.kind == kind)
            .and_then(|k| k.outcome.as_ref().ok().map(|(s, _)| s))
    }

    pub fn space(&self, kind: SpectrumKind) -> Option<&FiniteSpace> {
        self.kinds
            .iter()
            .find(|k| k.kind == kind)
            .and_then(|k| k.outcome.as_ref().ok().map(|(_, sp)| sp))
    }
}

/// Lattice, every spectrum and every space of one group.
pub fn analyze_group(group: Arc<Group>, corpus_bounds: crate::gmodule::SearchBounds, caps: &Caps) -> GroupAnalysis {
    let lattice = Arc::new(enumerate_normal_subgroups(group));
    let opts = SpectrumOptions {
        pmtv_bounds: Some(corpus_bounds),
        caps: *caps,
    };
    let kinds = SpectrumKind::ALL
        .iter()
        .map(|&kind| {
            let mut primitive_witnesses = Vec::new();
            let spectrum = if kind == SpectrumKind::Pmtv {
                enumerate_primitive(&lattice, corpus_bounds, caps).map(|search| {
                    primitive_witnesses = search.witnesses;
                    search.spectrum
                })
            } else {
                compute_spectrum(&lattice, kind, &opts)
            };
            let outcome = spectrum
                .map(|s| {
                    let space = build_space(&s, caps);
                    (s, space)
                })
                .map_err(|e| e.to_string());
            KindAnalysis {
                kind,
                outcome,
                primitive_witnesses,
            }
        })
        .collect();
    GroupAnalysis { lattice, kinds }
}

#[derive(Clone, Debug)]
pub struct SuiteRun {
    pub corpus: String,
    pub selection: Selection,
    pub bounds: crate::gmodule::SearchBounds,
    pub groups: Vec<GroupAnalysis>,
    /// Group-level and (group, kind) verdicts, grouped per corpus group.
    pub group_verdicts: Vec<Vec<TheoremVerdict>>,
    /// Verdicts about homomorphisms, in corpus order.
    pub hom_verdicts: Vec<TheoremVerdict>,
    /// Per kind, the first corpus map violating the contraction property.
    pub contraction: Vec<(SpectrumKind, Option<Value>)>,
}

impl SuiteRun {
    pub fn verdicts(&self) -> impl Iterator<Item = &TheoremVerdict> {
        self.group_verdicts.iter().flatten().chain(&self.hom_verdicts)
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.verdicts().filter(|t| t.verdict == v).count()
    }

    pub fn failed(&self) -> bool {
        self.count(Verdict::Fail) > 0
    }
}

pub fn run_suite(corpus: &Corpus, opts: &SuiteOptions) -> Result<SuiteRun> {
    match opts.jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Invalid(e.to_string()))?;
            pool.install(|| run_suite_inner(corpus, opts))
        }
        None => run_suite_inner(corpus, opts),
    }
}

fn run_suite_inner(corpus: &Corpus, opts: &SuiteOptions) -> Result<SuiteRun> {
    let groups: Vec<GroupAnalysis> = corpus
        .groups
        .par_iter()
        .map(|g| analyze_group(g.clone(), corpus.bounds, &opts.caps))
        .collect();

    // Hom endpoints outside the corpus (quotients, subgroups).
    let mut extra: Vec<Arc<Group>> = Vec::new();
    for h in &corpus.homs {
        for g in [h.hom.source(), h.hom.target()] {
            let known = groups.iter().any(|a| Arc::ptr_eq(a.group(), g)) || extra.iter().any(|e| Arc::ptr_eq(e, g));
            if !known {
                extra.push(g.clone());
            }
        }
    }
    let extra: Vec<GroupAnalysis> = extra
        .par_iter()
        .map(|g| analyze_group(g.clone(), corpus.bounds, &opts.caps))
        .collect();
    let lookup = |g: &Arc<Group>| -> &GroupAnalysis {
        groups
            .iter()
            .chain(&extra)
            .find(|a| Arc::ptr_eq(a.group(), g))
            .expect("every endpoint analyzed")
    };

    let group_verdicts: Vec<Vec<TheoremVerdict>> = groups
        .par_iter()
        .map(|a| {
            let mut out = group_level(a);
            for k in &a.kinds {
                out.extend(kind_level(a, k, opts));
            }
            out.retain(|v| opts.selection.contains(v.theorem));
            out
        })
        .collect();

    let mut global = contraction_failures(&corpus.homs, &lookup);
    if corpus.name != "builtin" {
        for ((_, mine), (_, reference)) in global.iter_mut().zip(reference_contraction()) {
            if mine.is_none() {
                *mine = reference.clone();
            }
        }
    }
    let mut hom_verdicts: Vec<TheoremVerdict> = corpus
        .homs
        .par_iter()
        .map(|h| hom_level(h, lookup(h.hom.source()), lookup(h.hom.target()), &global, &opts.caps))
        .flatten()
        .collect();
    hom_verdicts.extend(functoriality_checks(&corpus.homs, &lookup, &opts.caps));
    hom_verdicts.retain(|v| opts.selection.contains(v.theorem));

    Ok(SuiteRun {
        corpus: corpus.name.clone(),
        selection: opts.selection.clone(),
        bounds: corpus.bounds,
        groups,
        group_verdicts,
        hom_verdicts,
        contraction: global,
    })
}

struct Emitter<'a> {
    group: &'a str,
    kind: Option<SpectrumKind>,
    hom: Option<&'a str>,
    out: Vec<TheoremVerdict>,
}

impl<'a> Emitter<'a> {
    fn new(group: &'a str, kind: Option<SpectrumKind>, hom: Option<&'a str>) -> Self {
        Emitter {
            group,
            kind,
            hom,
            out: Vec::new(),
        }
    }

    fn emit(&mut self, theorem: &'static str, verdict: Verdict, witness: Option<Value>) {
        debug_assert!(THEOREM_IDS.contains(&theorem));
        debug_assert!(verdict != Verdict::Fail || witness.is_some());
        self.out.push(TheoremVerdict {
            theorem,
            group: self.group.to_string(),
            kind: self.kind.map(SpectrumKind::name),
            hom: self.hom.map(str::to_string),
            verdict,
            witness,
        });
    }

    /// Pass when `failure` is `None`.
    fn check(&mut self, theorem: &'static str, failure: Option<Value>) {
        match failure {
            None => self.emit(theorem, Verdict::Pass, None),
            Some(w) => self.emit(theorem, Verdict::Fail, Some(w)),
        }
    }

    fn with_evidence(&mut self, theorem: &'static str, holds: bool, evidence: Value) {
        let v = if holds { Verdict::Pass } else { Verdict::Fail };
        self.emit(theorem, v, Some(evidence));
    }
}

fn labels(l: &NormalLattice, ids: impl IntoIterator<Item = MemberId>) -> Vec<String> {
    ids.into_iter().map(|i| l.label(i)).collect()
}

fn group_level(a: &GroupAnalysis) -> Vec<TheoremVerdict> {
    let l = &a.lattice;
    let mut e = Emitter::new(a.group().name(), None, None);
    let lab = |i: MemberId| l.label(i);

    e.check(
        "commutator-inclusion",
        l.ids().find_map(|x| {
            l.ids().find_map(|y| {
                let c = l.commutator_product(x, y);
                (!l.leq(c, l.meet(x, y))).then(|| json!({"a": lab(x), "b": lab(y), "commutator": lab(c)}))
            })
        }),
    );

    let spec = a.spectrum(SpectrumKind::Spec).expect("Spec is always computable");
    let rad = |n: MemberId| radical(l, n, spec);
    let radical_failure = l.ids().find_map(|x| {
        let rx = rad(x);
        if !l.leq(x, rx) {
            return Some(json!({"identity": "n ⊆ √n", "n": lab(x)}));
        }
        if rad(rx) != rx {
            return Some(json!({"identity": "√√n = √n", "n": lab(x)}));
        }
        l.ids().find_map(|y| {
            let ry = rad(y);
            if l.leq(y, x) && !l.leq(ry, rx) {
                return Some(json!({"identity": "n' ⊆ n ⇒ √n' ⊆ √n", "n": lab(x), "n'": lab(y)}));
            }
            let (c, m, both) = (rad(l.commutator_product(x, y)), rad(l.meet(x, y)), l.meet(rx, ry));
            (c != m || m != both).then(|| {
                json!({"identity": "√[n,n'] = √(n∩n') = √n ∩ √n'", "n": lab(x), "n'": lab(y),
                       "values": [lab(c), lab(m), lab(both)]})
            })
        })
    });
    e.check("radical-identities", radical_failure);

    let proper: Vec<MemberId> = l.proper_ids().collect();
    let prime = |n| is_prime(l, n).expect("proper");
    e.check(
        "prime-criteria-agree",
        proper.iter().find_map(|&n| {
            let (p, q) = (prime(n), is_prime_elementwise(l, n).expect("proper"));
            (p != q).then(|| json!({"member": lab(n), "pairwise": p, "elementwise": q}))
        }),
    );
    e.check(
        "prime-iff-radical-irreducible",
        proper.iter().find_map(|&n| {
            let p = prime(n);
            let r = is_radical(l, n, spec).expect("proper");
            let i = is_irreducible(l, n).expect("proper");
            (p != (r && i)).then(|| json!({"member": lab(n), "prime": p, "radical": r, "irreducible": i}))
        }),
    );
    let radicals: Vec<MemberId> = proper
        .iter()
        .copied()
        .filter(|&n| is_radical(l, n, spec).expect("proper"))
        .collect();
    if radicals.is_empty() {
        e.emit(
            "radical-prime-primary-irreducible",
            Verdict::Vacuous,
            Some(json!({"reason": "no proper radical member"})),
        );
    } else {
        e.check(
            "radical-prime-primary-irreducible",
            radicals.iter().find_map(|&n| {
                let p = prime(n);
                let q = is_primary(l, n, spec).expect("proper");
                let i = is_irreducible(l, n).expect("proper");
                (!(p == q && q == i)).then(|| json!({"member": lab(n), "prime": p, "primary": q, "irreducible": i}))
            }),
        );
    }
    if l.trivial() == l.top() {
        e.emit(
            "trivial-prime-characterization",
            Verdict::Vacuous,
            Some(json!({"reason": "trivial group: the trivial subgroup is not proper"})),
        );
    } else {
        let lhs = prime(l.trivial());
        let rhs = uniform_without_abelian(l);
        e.with_evidence(
            "trivial-prime-characterization",
            lhs == rhs,
            json!({"trivial_is_prime": lhs, "uniform_without_abelian": rhs}),
        );
    }

    let irr_plus = a.spectrum(SpectrumKind::IrrPlus).expect("Irr+ is always computable");
    let min_spec = a.spectrum(SpectrumKind::MinSpec).expect("MinSpec is always computable");
    e.check(
        "spec-in-irr-plus",
        spec.members()
            .iter()
            .find(|&&p| !irr_plus.contains(p))
            .map(|&p| json!({"prime_not_strongly_irreducible": lab(p)}))
            .or_else(|| {
                min_spec
                    .members()
                    .iter()
                    .find(|&&p| !spec.contains(p))
                    .map(|&p| json!({"minimal_prime_not_prime": lab(p)}))
            }),
    );

    let mut failure = mip_holds(irr_plus)
        .witness
        .map(|(x, y, s)| json!({"irr_plus_violates_mip": labels(l, [x, y, s])}));
    if failure.is_none() {
        for k in &a.kinds {
            if let Ok((s, _)) = &k.outcome {
                if mip_holds(s).holds {
                    if let Some(&p) = s.members().iter().find(|&&p| !irr_plus.contains(p)) {
                        failure = Some(json!({"kind": k.kind.name(), "member_outside_irr_plus": lab(p)}));
                        break;
                    }
                }
            }
        }
    }
    e.check("irr-plus-largest-mip", failure);
    e.out
}

fn fnv(text: &str) -> u64 {
    text.bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn kind_level(a: &GroupAnalysis, k: &KindAnalysis, opts: &SuiteOptions) -> Vec<TheoremVerdict> {
    let l = &a.lattice;
    let mut e = Emitter::new(a.group().name(), Some(k.kind), None);
    let ids: &[&'static str] = &[
        "T0",
        "T1-iff-Max",
        "T1-iff-antichain",
        "subbasic-irreducible",
        "connected-if-trivial",
        "hull-kernel-iff-mip",
        "hull-kernel-iff-mip-kernels",
        "omega-radical-lemma",
        "generic-point",
        "partition-of-unity-max",
        "compactness-identity",
    ];
    let (s, sp) = match &k.outcome {
        Ok(pair) => pair,
        Err(reason) => {
            for &id in ids {
                e.emit(id, Verdict::Skipped, Some(json!({"reason": reason})));
            }
            return e.out;
        }
    };
    let lab = |i: MemberId| l.label(i);
    let pt = |i: usize| l.label(sp.points()[i]);
    let set = |b: &crate::bitset::BitSet| labels(l, sp.members_of(b));

    e.check(
        "T0",
        sp.t0().witness.map(|(i, j)| json!({"same_closure": [pt(i), pt(j)]})),
    );

    let max = a.spectrum(SpectrumKind::Max).expect("Max is always computable");
    let t1 = sp.t1();
    let outside_max = s.members().iter().copied().find(|&p| !max.contains(p));
    let evidence = json!({
        "t1": t1.holds,
        "points_in_max": outside_max.is_none(),
        "non_closed_point": t1.witness.map(pt),
        "point_outside_max": outside_max.map(lab),
    });
    e.with_evidence("T1-iff-Max", t1.holds == outside_max.is_none(), evidence);

    let nested = s
        .members()
        .iter()
        .find_map(|&x| s.members().iter().find(|&&y| x != y && l.leq(x, y)).map(|&y| (x, y)));
    e.with_evidence(
        "T1-iff-antichain",
        t1.holds == nested.is_none(),
        json!({"t1": t1.holds, "antichain": nested.is_none(), "nested_points": nested.map(|(x, y)| [lab(x), lab(y)])}),
    );

    e.check(
        "subbasic-irreducible",
        (0..sp.len()).find_map(|i| {
            let v = sp.subbasic(sp.points()[i]);
            let closure = sp.point_closure(i);
            let algebraic = sp.algebraic_closure(&crate::bitset::BitSet::from_indices(sp.len(), [i]));
            let irreducible = sp.is_irreducible(v).unwrap_or(false);
            (closure != *v || algebraic != *v || !irreducible).then(|| {
                json!({"point": pt(i), "V": set(v), "closure": set(&closure),
                       "algebraic_closure": set(&algebraic), "irreducible": irreducible})
            })
        }),
    );

    if k.kind == SpectrumKind::Prp {
        e.check(
            "prp-subbasic-irreducible",
            l.ids().find_map(|x| {
                let v = sp.subbasic(x);
                (!v.is_empty() && !sp.is_irreducible(v).unwrap_or(false)).then(|| json!({"x": lab(x), "V": set(v)}))
            }),
        );
    }

    if s.contains(l.trivial()) {
        e.check(
            "connected-if-trivial",
            sp.separation().map(|(c, d)| json!({"separation": [set(&c), set(&d)]})),
        );
    } else {
        e.emit(
            "connected-if-trivial",
            Verdict::Vacuous,
            Some(json!({"reason": "trivial subgroup is not a point", "connected": sp.is_connected()})),
        );
    }

    let hk = sp.hull_kernel();
    let mip = mip_holds(s);
    let hk_json = hk
        .witness
        .as_ref()
        .map(|w| json!({"V_a": lab(w.a), "V_b": lab(w.b), "hull": lab(w.hull), "extra": labels(l, w.extra.iter().copied())}));
    let mip_json = mip.witness.map(|(x, y, p)| json!({"n": lab(x), "n'": lab(y), "s": lab(p)}));
    e.with_evidence(
        "hull-kernel-iff-mip",
        hk.holds == mip.holds,
        json!({"hull_kernel": hk.holds, "mip": mip.holds, "union_witness": hk_json, "mip_witness": mip_json}),
    );

    let omega_closed: Vec<MemberId> = l.ids().filter(|&x| omega_radical(s, x) == x).collect();
    let kernel_mip = s.members().iter().rev().find_map(|&p| {
        omega_closed.iter().rev().find_map(|&x| {
            omega_closed
                .iter()
                .rev()
                .find(|&&y| !l.leq(x, p) && !l.leq(y, p) && l.leq(l.meet(x, y), p))
                .map(|&y| (x, y, p))
        })
    });
    e.with_evidence(
        "hull-kernel-iff-mip-kernels",
        hk.holds == kernel_mip.is_none(),
        json!({"hull_kernel": hk.holds, "mip_on_hull_kernels": kernel_mip.is_none(),
               "union_witness": hk_json, "mip_witness": kernel_mip.map(|(x, y, p)| labels(l, [x, y, p]))}),
    );

    let w = |x: MemberId| omega_radical(s, x);
    let lemma = l.ids().find_map(|x| {
        if !l.leq(x, w(x)) {
            return Some(json!({"part": "x ⊆ √x^ω", "x": lab(x)}));
        }
        if s.contains(x) && w(x) != x {
            return Some(json!({"part": "n ∈ σ ⇒ √n^ω = n", "x": lab(x)}));
        }
        if sp.subbasic(x) != sp.subbasic(w(x)) {
            return Some(json!({"part": "V(x) = V(√x^ω)", "x": lab(x)}));
        }
        l.ids().find_map(|y| {
            (sp.subbasic(x).is_subset(sp.subbasic(y)) != l.leq(w(y), w(x)))
                .then(|| json!({"part": "V(x) ⊆ V(y) ⇔ √y^ω ⊆ √x^ω", "x": lab(x), "y": lab(y)}))
        })
    });
    e.check("omega-radical-lemma", lemma);

    let generic = sp
        .irreducible_closed_sets()
        .into_iter()
        .find_map(|c| {
            let t = l.join(l.ids().filter(|&x| c.is_subset(sp.subbasic(x))));
            let unique = sp.generic_points(&c).expect("closed").len() == 1;
            let member = s.contains(w(t));
            (unique != member).then(|| {
                json!({"reading": "irreducible closed set", "set": set(&c), "t": lab(t),
                       "unique_generic_point": unique, "omega_radical_is_point": member})
            })
        })
        .or_else(|| {
            l.ids().find_map(|x| {
                let v = sp.subbasic(x);
                if v.is_empty() || !sp.is_irreducible(v).expect("subbasic sets are closed") {
                    return None;
                }
                let unique = sp.generic_points(v).expect("closed").len() == 1;
                let member = s.contains(w(x));
                (unique != member).then(|| {
                    json!({"reading": "subbasic V(x)", "x": lab(x), "unique_generic_point": unique,
                           "omega_radical_is_point": member})
                })
            })
        });
    e.check("generic-point", generic);

    let nontrivial = l.trivial() != l.top();
    match k.kind {
        SpectrumKind::IrrPlus if nontrivial => e.check(
            "irr-plus-sober",
            sp.sober().witness.map(|c| json!({"irreducible_without_unique_generic_point": set(&c)})),
        ),
        SpectrumKind::Spec if nontrivial => e.check(
            "spec-spectral",
            (!sp.is_spectral()).then(|| json!({"t0": sp.t0().holds, "sober": sp.sober().holds})),
        ),
        SpectrumKind::IrrPlus => e.emit("irr-plus-sober", Verdict::Vacuous, Some(json!({"reason": "no maximal normal subgroup"}))),
        SpectrumKind::Spec => e.emit("spec-spectral", Verdict::Vacuous, Some(json!({"reason": "no maximal normal subgroup"}))),
        _ => {}
    }

    let pou = sp.partition_of_unity();
    if let Some(n) = pou.witness {
        e.emit(
            "partition-of-unity-max",
            Verdict::Vacuous,
            Some(json!({"reason": "partition of unity fails", "empty_hull": lab(n)})),
        );
    } else {
        e.check(
            "partition-of-unity-max",
            max.members()
                .iter()
                .find(|&&m| !s.contains(m))
                .map(|&m| json!({"maximal_not_in_spectrum": lab(m)})),
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(fnv(&format!("{}/{}", a.group().name(), k.kind.name())));
    let mut failure = (!sp.compactness_identity(&[])).then(|| json!({"family": []}));
    for _ in 0..opts.families {
        if failure.is_some() {
            break;
        }
        let size = rng.gen_range(0..=l.len() + 1);
        let family: Vec<MemberId> = (0..size).map(|_| rng.gen_range(0..l.len())).collect();
        if !sp.compactness_identity(&family) {
            failure = Some(json!({"family": labels(l, family.iter().copied())}));
        }
    }
    e.check("compactness-identity", failure);
    e.out
}

/// First corpus map, per kind, whose target spectrum pulls back outside
/// the source spectrum. The contraction property quantifies over every
/// homomorphism, so a single failure removes the kind.
fn contraction_failures<'a>(
    homs: &[NamedHom],
    lookup: &(dyn Fn(&Arc<Group>) -> &'a GroupAnalysis + Sync),
) -> Vec<(SpectrumKind, Option<Value>)> {
    SpectrumKind::ALL
        .iter()
        .map(|&kind| {
            let failure = homs.iter().find_map(|h| {
                let (src, tgt) = (lookup(h.hom.source()), lookup(h.hom.target()));
                let (Some(a), Some(b)) = (src.spectrum(kind), tgt.spectrum(kind)) else {
                    return Some(json!({"hom": h.name, "reason": "spectrum unavailable for an endpoint"}));
                };
                let check = contraction_closed(&h.hom, a, b).expect("matching spectra");
                check
                    .witness
                    .map(|n| json!({"hom": h.name, "target_member": b.lattice().label(n)}))
            });
            (kind, failure)
        })
        .collect()
}

/// Contraction counterexamples among the builtin maps, found once. They
/// disqualify a kind for every corpus, since the property is universal.
fn reference_contraction() -> &'static [(SpectrumKind, Option<Value>)] {
    static REFERENCE: OnceLock<Vec<(SpectrumKind, Option<Value>)>> = OnceLock::new();
    REFERENCE.get_or_init(|| {
        let corpus = builtin_catalog().expect("builtin catalog loads");
        let mut groups: Vec<Arc<Group>> = corpus.groups.clone();
        for h in &corpus.homs {
            for g in [h.hom.source(), h.hom.target()] {
                if !groups.iter().any(|e| Arc::ptr_eq(e, g)) {
                    groups.push(g.clone());
                }
            }
        }
        let caps = Caps::default();
        let analyses: Vec<GroupAnalysis> = groups
            .par_iter()
            .map(|g| analyze_group(g.clone(), corpus.bounds, &caps))
            .collect();
        let lookup = |g: &Arc<Group>| -> &GroupAnalysis {
            analyses.iter().find(|a| Arc::ptr_eq(a.group(), g)).expect("analyzed")
        };
        contraction_failures(&corpus.homs, &lookup)
            .into_iter()
            .map(|(kind, w)| {
                // Only genuine counterexamples carry over.
                let w = w.filter(|w| w.get("target_member").is_some()).map(|mut w| {
                    w["corpus"] = json!("builtin");
                    w
                });
                (kind, w)
            })
            .collect()
    })
}

fn hom_level(
    h: &NamedHom,
    src: &GroupAnalysis,
    tgt: &GroupAnalysis,
    global: &[(SpectrumKind, Option<Value>)],
    caps: &Caps,
) -> Vec<TheoremVerdict> {
    let mut out = Vec::new();
    let surjective = h.hom.is_surjective();
    for &(kind, ref global_failure) in global {
        let mut e = Emitter::new(src.group().name(), Some(kind), Some(&h.name));
        let (Some(on_source), Some(on_target)) = (src.spectrum(kind), tgt.spectrum(kind)) else {
            for id in ["induced-continuity", "quotient-homeomorphism", "density-biconditional"] {
                e.emit(id, Verdict::Skipped, Some(json!({"reason": "spectrum unavailable for an endpoint"})));
            }
            out.extend(e.out);
            continue;
        };
        let contraction = contraction_closed(&h.hom, on_source, on_target).expect("matching spectra");
        let tl = on_target.lattice();
        if kind == SpectrumKind::Spec {
            e.check(
                "spec-contraction",
                contraction.witness.map(|n| json!({"target_member_with_non_prime_preimage": tl.label(n)})),
            );
        }
        if let Some(n) = contraction.witness {
            let why = json!({"reason": "kind lacks the contraction property for this map", "target_member": tl.label(n)});
            for id in ["induced-continuity", "quotient-homeomorphism", "density-biconditional"] {
                e.emit(id, Verdict::Vacuous, Some(why.clone()));
            }
            out.extend(e.out);
            continue;
        }
        // Continuity only needs preimages of this map to stay in the spectrum.
        let m = induced_map(&h.hom, on_source, on_target, caps).expect("contraction-closed");
        e.check(
            "induced-continuity",
            m.continuity().witness.map(|w| serde_json::to_value(w).expect("serializable")),
        );
        let embedding = surjective.then(|| {
            m.closed_embedding()
                .expect("surjective")
                .witness
                .map(|w| serde_json::to_value(w).expect("serializable"))
        });
        let d = m.density();
        let density = serde_json::to_value(d).expect("serializable");
        if let Some(failure) = global_failure {
            // The hypothesis is the contraction property of the kind, not of
            // one map. Record what this map alone gives without a verdict.
            let why = |local: Value| {
                json!({"reason": "kind lacks the contraction property on the corpus",
                       "counterexample": failure, "this_map_only": local})
            };
            let local = match &embedding {
                None => json!({"reason": "homomorphism is not surjective"}),
                Some(w) => json!({"holds": w.is_none(), "witness": w}),
            };
            e.emit("quotient-homeomorphism", Verdict::Vacuous, Some(why(local)));
            e.emit(
                "density-biconditional",
                Verdict::Vacuous,
                Some(why(json!({"holds": d.agrees(), "sides": density}))),
            );
        } else {
            match embedding {
                Some(w) => e.check("quotient-homeomorphism", w),
                None => e.emit(
                    "quotient-homeomorphism",
                    Verdict::Vacuous,
                    Some(json!({"reason": "homomorphism is not surjective"})),
                ),
            }
            e.with_evidence("density-biconditional", d.agrees(), density);
        }
        out.extend(e.out);
    }
    out
}

fn functoriality_checks<'a>(
    homs: &[NamedHom],
    lookup: &(dyn Fn(&Arc<Group>) -> &'a GroupAnalysis + Sync),
    caps: &Caps,
) -> Vec<TheoremVerdict> {
    let pairs: Vec<(&NamedHom, &NamedHom)> = homs
        .iter()
        .flat_map(|phi| {
            homs.iter()
                .filter(move |psi| Arc::ptr_eq(phi.hom.target(), psi.hom.source()))
                .map(move |psi| (phi, psi))
        })
        .collect();
    pairs
        .par_iter()
        .flat_map_iter(|&(phi, psi)| {
            let (a, b, c) = (lookup(phi.hom.source()), lookup(phi.hom.target()), lookup(psi.hom.target()));
            let name = format!("{} ; {}", phi.name, psi.name);
            SpectrumKind::ALL
                .iter()
                .filter_map(|&kind| {
                    let maps = (|| -> Option<(SpectralMap, SpectralMap)> {
                        let (sa, sb, sc) = (a.spectrum(kind)?, b.spectrum(kind)?, c.spectrum(kind)?);
                        let m1 = induced_map(&phi.hom, sa, sb, caps).ok()?;
                        let m2 = induced_map(&psi.hom, sb, sc, caps).ok()?;
                        Some((m1, m2))
                    })()?;
                    let mut e = Emitter::new(a.group().name(), Some(kind), Some(&name));
                    let check = functoriality(&maps.0, &maps.1).expect("composable");
                    let lc = &c.lattice;
                    e.check(
                        "functoriality",
                        check.witness.map(|n| json!({"point": lc.label(n)})),
                    );
                    e.out.pop()
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Serializable summary of a group's analysis.
#[derive(Clone, Debug, Serialize)]
pub struct KindSummary {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub topology: Option<TopologySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl KindAnalysis {
    pub fn summary(&self, l: &NormalLattice) -> KindSummary {
        match &self.outcome {
            Ok((s, sp)) => KindSummary {
                kind: self.kind.name(),
                members: Some(labels(l, s.members().iter().copied())),
                topology: Some(sp.summary()),
                error: None,
            },
            Err(reason) => KindSummary {
                kind: self.kind.name(),
                members: None,
                topology: None,
                error: Some(reason.clone()),
            },
        }
    }
}
