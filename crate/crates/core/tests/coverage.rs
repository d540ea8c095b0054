use std::collections::BTreeSet;

use normspec::catalog;
use normspec::suite::{run_suite, SuiteOptions, THEOREM_IDS};

/// In-scope results and the verdict ids that check them.
const RESULT_MAP: &[(&str, &[&str])] = &[
    ("commutator inclusion [a,b] <= a meet b", &["commutator-inclusion"]),
    ("radical identities", &["radical-identities"]),
    ("pairwise and element-wise prime criteria", &["prime-criteria-agree"]),
    ("prime iff radical and irreducible", &["prime-iff-radical-irreducible"]),
    ("radical members: prime, primary, irreducible agree", &["radical-prime-primary-irreducible"]),
    ("trivial subgroup primality", &["trivial-prime-characterization"]),
    ("primes are strongly irreducible", &["spec-in-irr-plus"]),
    ("hull-kernel topology and condition mip", &["hull-kernel-iff-mip", "hull-kernel-iff-mip-kernels", "irr-plus-largest-mip"]),
    ("subbasic closed sets are irreducible", &["subbasic-irreducible", "prp-subbasic-irreducible"]),
    ("T0 separation", &["T0"]),
    ("T1 and maximal members", &["T1-iff-Max", "T1-iff-antichain"]),
    ("connectedness when the trivial subgroup is a point", &["connected-if-trivial"]),
    ("omega radical lemma", &["omega-radical-lemma"]),
    ("generic points", &["generic-point"]),
    ("sobriety of Irr+", &["irr-plus-sober"]),
    ("partition of unity and compactness", &["partition-of-unity-max", "compactness-identity"]),
    ("Spec is spectral", &["spec-spectral"]),
    ("contraction property", &["spec-contraction"]),
    ("induced maps: continuity", &["induced-continuity", "functoriality"]),
    ("induced maps: closed embedding", &["quotient-homeomorphism"]),
    ("induced maps: density", &["density-biconditional"]),
];

/// Ids that external consumers key on.
const STABLE_IDS: &[&str] = &[
    "T0",
    "T1-iff-Max",
    "hull-kernel-iff-mip",
    "generic-point",
    "irr-plus-sober",
    "radical-identities",
    "prime-iff-radical-irreducible",
    "trivial-prime-characterization",
    "induced-continuity",
    "quotient-homeomorphism",
    "density-biconditional",
    "compactness-identity",
    "partition-of-unity-max",
    "spec-spectral",
];

#[test]
fn id_set_matches_result_map() {
    let mapped: BTreeSet<&str> = RESULT_MAP.iter().flat_map(|(_, ids)| ids.iter().copied()).collect();
    let declared: BTreeSet<&str> = THEOREM_IDS.iter().copied().collect();
    assert_eq!(mapped, declared);
    assert_eq!(declared.len(), THEOREM_IDS.len(), "duplicate ids");
    for id in STABLE_IDS {
        assert!(declared.contains(id), "{id}");
    }
}

#[test]
fn every_id_produces_verdicts() {
    let corpus = catalog::builtin_catalog().unwrap();
    let opts = SuiteOptions {
        families: 20,
        ..Default::default()
    };
    let run = run_suite(&corpus, &opts).unwrap();
    let seen: BTreeSet<&str> = run.verdicts().map(|v| v.theorem).collect();
    for id in THEOREM_IDS {
        assert!(seen.contains(id), "no verdict for {id}");
    }
}
