//! JSON documents, plain-text summaries and DOT graphs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gmodule::PrimitiveSearch;
use crate::lattice::NormalLattice;
use crate::spectra::{mip_holds, Spectrum};
use crate::suite::{SuiteRun, TheoremVerdict, Verdict};
use crate::topology::FiniteSpace;

/// Identifies the producer in report metadata.
pub const TOOL: &str = concat!("normspec ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
    Dot,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "text" | "txt" => Ok(Format::Text),
            "dot" | "gv" => Ok(Format::Dot),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

impl Format {
    /// Guesses from a file extension, defaulting to JSON.
    pub fn for_path(path: &std::path::Path) -> Result<Format> {
        match path.extension().and_then(|e| e.to_str()) {
            None => Ok(Format::Json),
            Some(ext) => ext.parse(),
        }
    }
}

pub fn lattice_json(l: &NormalLattice) -> Value {
    let g = l.group();
    let members: Vec<Value> = l
        .ids()
        .map(|i| {
            let m = l.member(i);
            json!({
                "id": i,
                "label": l.label(i),
                "order": m.len(),
                "mask": m.bits().to_hex(),
                "elements": m.to_vec(),
                "generators": l.generators(i).iter().map(|&x| g.element_name(x)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "group": g.name(),
        "order": g.order(),
        "members": members,
        "trivial": l.trivial(),
        "top": l.top(),
        "hasse": l.hasse_edges(),
    })
}

/// Order and mask of each member; element lists are left to [`lattice_json`].
pub fn lattice_summary(l: &NormalLattice) -> Value {
    json!({
        "members": l.len(),
        "orders": l.ids().map(|i| l.member(i).len()).collect::<Vec<_>>(),
        "hasse": l.hasse_edges(),
    })
}

pub fn spectrum_json(s: &Spectrum) -> Value {
    let l = s.lattice();
    let mip = mip_holds(s);
    json!({
        "kind": s.kind().name(),
        "members": s.members().iter().map(|&m| json!({
            "id": m,
            "label": l.label(m),
            "order": l.member(m).len(),
            "mask": l.member(m).bits().to_hex(),
        })).collect::<Vec<_>>(),
        "provenance": s.provenance(),
        "mip": {
            "holds": mip.holds,
            "witness": mip.witness.map(|(a, b, p)| [l.label(a), l.label(b), l.label(p)]),
        },
    })
}

fn point_labels(sp: &FiniteSpace, set: &crate::bitset::BitSet) -> Vec<String> {
    let l = sp.spectrum().lattice();
    sp.members_of(set).into_iter().map(|m| l.label(m)).collect()
}

pub fn topology_json(sp: &FiniteSpace) -> Value {
    let l = sp.spectrum().lattice();
    let pt = |i: usize| l.label(sp.points()[i]);
    let subbasis: BTreeMap<String, Vec<String>> = l
        .ids()
        .map(|x| (l.label(x), point_labels(sp, sp.subbasic(x))))
        .collect();
    let t0 = sp.t0();
    let t1 = sp.t1();
    let sober = sp.sober();
    let hk = sp.hull_kernel();
    let pou = sp.partition_of_unity();
    json!({
        "points": sp.points().iter().map(|&m| l.label(m)).collect::<Vec<_>>(),
        "subbasis": subbasis,
        "materialized": sp.is_materialized(),
        "closed_sets": sp.closed_family().map(<[_]>::len),
        "irreducible_closed_sets": sp.irreducible_closed_sets().iter().map(|c| point_labels(sp, c)).collect::<Vec<_>>(),
        "specialization": sp.specialization_order().into_iter().map(|(x, y)| [pt(x), pt(y)]).collect::<Vec<_>>(),
        "properties": {
            "t0": {"holds": t0.holds, "witness": t0.witness.map(|(a, b)| [pt(a), pt(b)])},
            "t1": {"holds": t1.holds, "witness": t1.witness.map(pt)},
            "sober": {"holds": sober.holds, "witness": sober.witness.map(|c| point_labels(sp, &c))},
            "spectral": {"holds": sp.is_spectral(), "note": "finite spaces are compact with a basis of compact opens"},
            "connected": {"holds": sp.is_connected(),
                          "separation": sp.separation().map(|(a, b)| [point_labels(sp, &a), point_labels(sp, &b)])},
            "hull_kernel": {"holds": hk.holds, "witness": hk.witness.map(|w| json!({
                "V_a": l.label(w.a), "V_b": l.label(w.b), "hull": l.label(w.hull),
                "extra": w.extra.iter().map(|&m| l.label(m)).collect::<Vec<_>>(),
            }))},
            "partition_of_unity": {"holds": pou.holds, "witness": pou.witness.map(|n| l.label(n))},
        },
        "conventions": "empty space: T0, T1, sober and spectral hold; it is not connected",
    })
}

pub fn primitive_json(search: &PrimitiveSearch) -> Value {
    let l = search.spectrum.lattice();
    json!({
        "bounds": search.bounds,
        "modules_examined": search.modules_examined,
        "kernel_reading": "{g : gm = m for all m}",
        "kernels": search.witnesses.iter().map(|w| json!({
            "member": l.label(w.kernel),
            "p": w.p,
            "d": w.d,
            "generator_images": w.generator_images,
        })).collect::<Vec<_>>(),
    })
}

fn verdict_json(v: &TheoremVerdict) -> Value {
    serde_json::to_value(v).expect("verdicts serialize")
}

/// The structured suite report. Contains nothing run-dependent beyond the
/// corpus and selection, so equal inputs give equal documents.
pub fn suite_json(run: &SuiteRun) -> Value {
    let groups: Vec<Value> = run
        .groups
        .iter()
        .zip(&run.group_verdicts)
        .map(|(a, verdicts)| {
            let l = &a.lattice;
            let kinds: Vec<Value> = a
                .kinds
                .iter()
                .map(|k| {
                    let mut entry = serde_json::to_value(k.summary(l)).expect("summary serializes");
                    let theorems: Vec<Value> = verdicts
                        .iter()
                        .filter(|v| v.kind == Some(k.kind.name()))
                        .map(verdict_json)
                        .collect();
                    entry["theorems"] = Value::from(theorems);
                    entry
                })
                .collect();
            json!({
                "name": a.group().name(),
                "order": a.group().order(),
                "lattice": lattice_summary(l),
                "theorems": verdicts.iter().filter(|v| v.kind.is_none()).map(verdict_json).collect::<Vec<_>>(),
                "kinds": kinds,
            })
        })
        .collect();
    let mut counts = BTreeMap::new();
    for (name, v) in [
        ("pass", Verdict::Pass),
        ("fail", Verdict::Fail),
        ("vacuous", Verdict::Vacuous),
        ("skipped", Verdict::Skipped),
    ] {
        counts.insert(name, run.count(v));
    }
    let contraction: BTreeMap<&str, Value> = run
        .contraction
        .iter()
        .map(|(k, w)| (k.name(), json!({"holds": w.is_none(), "witness": w})))
        .collect();
    json!({
        "metadata": {
            "tool": TOOL,
            "corpus": run.corpus,
            "suite": run.selection.describe(),
            "pmtv_bounds": run.bounds,
            "counts": counts,
            "contraction_property": contraction,
        },
        "groups": groups,
        "homs": run.hom_verdicts.iter().map(verdict_json).collect::<Vec<_>>(),
    })
}

pub fn suite_text(run: &SuiteRun) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{TOOL}: corpus {}, suite {}", run.corpus, run.selection.describe());
    let mut table: BTreeMap<&str, [usize; 4]> = BTreeMap::new();
    for v in run.verdicts() {
        let slot = match v.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Vacuous => 2,
            Verdict::Skipped => 3,
        };
        table.entry(v.theorem).or_default()[slot] += 1;
    }
    let _ = writeln!(out, "{:<36} {:>6} {:>6} {:>8} {:>8}", "theorem", "pass", "fail", "vacuous", "skipped");
    for id in crate::suite::THEOREM_IDS {
        if let Some(c) = table.get(id) {
            let _ = writeln!(out, "{:<36} {:>6} {:>6} {:>8} {:>8}", id, c[0], c[1], c[2], c[3]);
        }
    }
    let failures: Vec<&TheoremVerdict> = run.verdicts().filter(|v| v.verdict == Verdict::Fail).collect();
    let _ = writeln!(out, "failures: {}", failures.len());
    for v in failures {
        let _ = writeln!(
            out,
            "  {} {}{}{}: {}",
            v.theorem,
            v.group,
            v.kind.map(|k| format!(" {k}")).unwrap_or_default(),
            v.hom.as_deref().map(|h| format!(" [{h}]")).unwrap_or_default(),
            v.witness.as_ref().map(Value::to_string).unwrap_or_default(),
        );
    }
    out
}

fn dot_id(text: &str) -> String {
    format!("\"{}\"", text.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram, smaller members below.
pub fn lattice_dot(l: &NormalLattice) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=BT;\n", dot_id(&format!("{} normal subgroups", l.group().name())));
    write_lattice_body(&mut out, l, "");
    out.push_str("}\n");
    out
}

fn write_lattice_body(out: &mut String, l: &NormalLattice, prefix: &str) {
    for i in l.ids() {
        let _ = writeln!(out, "  {} [label={}];", dot_id(&format!("{prefix}{i}")), dot_id(&l.label(i)));
    }
    for (lo, hi) in l.hasse_edges() {
        let _ = writeln!(out, "  {} -> {};", dot_id(&format!("{prefix}{lo}")), dot_id(&format!("{prefix}{hi}")));
    }
}

/// Specialization order: an edge `x -> y` when `y` lies in the closure of
/// `x`, reduced to covering pairs.
pub fn specialization_dot(sp: &FiniteSpace) -> String {
    let name = format!(
        "{} {}",
        sp.spectrum().lattice().group().name(),
        sp.spectrum().kind().name()
    );
    let mut out = format!("digraph {} {{\n", dot_id(&name));
    write_specialization_body(&mut out, sp, "");
    out.push_str("}\n");
    out
}

fn write_specialization_body(out: &mut String, sp: &FiniteSpace, prefix: &str) {
    let l = sp.spectrum().lattice();
    for &m in sp.points() {
        let _ = writeln!(out, "  {} [label={}];", dot_id(&format!("{prefix}{m}")), dot_id(&l.label(m)));
    }
    let order = sp.specialization_order();
    for &(x, y) in &order {
        let covered = !order.iter().any(|&(a, b)| a == x && b != y && order.contains(&(b, y)));
        if covered {
            let (mx, my) = (sp.points()[x], sp.points()[y]);
            let _ = writeln!(out, "  {} -> {};", dot_id(&format!("{prefix}{mx}")), dot_id(&format!("{prefix}{my}")));
        }
    }
}

/// Every lattice and every specialization order of a run, as clusters.
pub fn suite_dot(run: &SuiteRun) -> String {
    let mut out = String::from("digraph normspec {\n  compound=true;\n");
    for (gi, a) in run.groups.iter().enumerate() {
        let name = a.group().name();
        let _ = writeln!(out, "  subgraph {} {{\n  label={};", dot_id(&format!("cluster_{gi}_lattice")), dot_id(&format!("{name} lattice")));
        write_lattice_body(&mut out, &a.lattice, &format!("g{gi}_n"));
        out.push_str("  }\n");
        for (ki, k) in a.kinds.iter().enumerate() {
            if let Ok((_, sp)) = &k.outcome {
                let _ = writeln!(
                    out,
                    "  subgraph {} {{\n  label={};",
                    dot_id(&format!("cluster_{gi}_{ki}")),
                    dot_id(&format!("{name} {}", k.kind.name()))
                );
                write_specialization_body(&mut out, sp, &format!("g{gi}_k{ki}_p"));
                out.push_str("  }\n");
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn emit_report(run: &SuiteRun, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&suite_json(run)).expect("json");
            s.push('\n');
            s
        }
        Format::Text => suite_text(run),
        Format::Dot => suite_dot(run),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catalog::{self, Corpus};
    use crate::config::Caps;
    use crate::lattice::enumerate_normal_subgroups;
    use crate::spectra::{compute_spectrum, SpectrumKind};
    use crate::suite::{run_suite, SuiteOptions};
    use crate::topology::build_space;

    #[test]
    fn format_names() {
        assert_eq!("JSON".parse::<Format>().unwrap(), Format::Json);
        assert!(matches!("yaml".parse::<Format>(), Err(Error::UnknownFormat(_))));
        assert_eq!(Format::for_path("r.dot".as_ref()).unwrap(), Format::Dot);
    }

    #[test]
    fn empty_run_gives_empty_report() {
        let corpus = Corpus::from_groups("empty", vec![]).unwrap();
        let run = run_suite(&corpus, &SuiteOptions::default()).unwrap();
        let doc = suite_json(&run);
        assert_eq!(doc["groups"], json!([]));
        assert_eq!(doc["homs"], json!([]));
        assert_eq!(doc["metadata"]["counts"]["fail"], 0);
    }

    #[test]
    fn irr_plus_specialization_graph() {
        let l = Arc::new(enumerate_normal_subgroups(catalog::group("Z12").unwrap()));
        let s = compute_spectrum(&l, SpectrumKind::IrrPlus, &Default::default()).unwrap();
        let sp = build_space(&s, &Caps::default());
        let dot = specialization_dot(&sp);
        assert_eq!(dot.matches("[label=").count(), 3);
        let edges: Vec<&str> = dot.lines().filter(|l| l.contains("->")).collect();
        // <4> has order 3 (member 2), <2> has order 6 (member 4).
        assert_eq!(edges, vec!["  \"2\" -> \"4\";"]);
    }

    #[test]
    fn text_summary_lists_failures() {
        let corpus = Corpus::from_groups("s5", vec![catalog::group("S5").unwrap()]).unwrap();
        let opts = SuiteOptions {
            families: 10,
            ..Default::default()
        };
        let run = run_suite(&corpus, &opts).unwrap();
        let text = suite_text(&run);
        assert!(text.contains("T1-iff-Max"));
        assert!(text.contains(&format!("failures: {}", run.count(Verdict::Fail))));
    }
}
