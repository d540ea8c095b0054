use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use normspec::catalog::{builtin_catalog, load_corpus_dir};
use normspec::config::{Caps, CAPS_ENV};
use normspec::gmodule::{enumerate_primitive, validate_module, ModuleSpec, SearchBounds};
use normspec::group::{load_group, Group, GroupDescription};
use normspec::lattice::enumerate_normal_subgroups;
use normspec::report::{self, Format};
use normspec::spectra::{compute_spectrum, SpectrumKind, SpectrumOptions};
use normspec::suite::{run_suite, Selection, SuiteOptions, Verdict};
use normspec::topology::build_space;

#[derive(Parser)]
#[command(name = "normspec", version, about = "Normal-subgroup spectra and their topologies")]
#[command(after_help = "Feasibility caps are read from NORMSPEC_CAPS, e.g. `order=5000,points=24`.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one spectrum of a group, optionally with its topology.
    Analyze {
        group: PathBuf,
        #[arg(long)]
        spectrum: SpectrumKind,
        #[arg(long)]
        topology: bool,
        /// Write a JSON document here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Module search bounds, used by Pmtv.
        #[arg(long, default_value_t = 3)]
        max_p: u32,
        #[arg(long, default_value_t = 2)]
        max_d: usize,
    },
    /// Run the theorem suite over a corpus.
    Verify {
        /// `builtin` or a directory of group files.
        #[arg(long, default_value = "builtin")]
        corpus: String,
        /// `all` or a comma-separated list of theorem ids.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Report path; `.json`, `.txt` or `.dot` picks the format.
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
        /// Random families per space for the compactness identity.
        #[arg(long, default_value_t = 1000)]
        families: usize,
    },
    /// Enumerate normal subgroups and write the Hasse diagram.
    Lattice {
        group: PathBuf,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Search simple modules within bounds and list their kernels.
    Pmtv {
        group: PathBuf,
        #[arg(long)]
        max_p: u32,
        #[arg(long)]
        max_d: usize,
        /// Also check this module file against the group.
        #[arg(long)]
        module: Option<PathBuf>,
    },
}

fn read_group(path: &Path, caps: &Caps) -> Result<Arc<Group>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let description: GroupDescription =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Arc::new(load_group(&description, caps)?))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let caps = Caps::from_env().with_context(|| format!("reading {CAPS_ENV}"))?;
    match cli.command {
        Command::Analyze {
            group,
            spectrum,
            topology,
            report,
            max_p,
            max_d,
        } => {
            let g = read_group(&group, &caps)?;
            let l = Arc::new(enumerate_normal_subgroups(g));
            let opts = SpectrumOptions {
                pmtv_bounds: Some(SearchBounds { max_p, max_d }),
                caps,
            };
            let s = compute_spectrum(&l, spectrum, &opts)?;
            let labels: Vec<String> = s.members().iter().map(|&m| l.label(m)).collect();
            println!("{} {}: {{{}}}", l.group().name(), spectrum, labels.join(", "));
            let mut doc = json!({
                "metadata": {"tool": report::TOOL},
                "group": l.group().name(),
                "lattice": report::lattice_json(&l),
                "spectrum": report::spectrum_json(&s),
            });
            if topology {
                let sp = build_space(&s, &caps);
                let t = sp.summary();
                println!(
                    "points {} | T0 {} | T1 {} | sober {} | spectral {} | connected {} | hull-kernel {}",
                    t.points, t.t0, t.t1, t.sober, t.spectral, t.connected, t.hull_kernel
                );
                doc["topology"] = report::topology_json(&sp);
            }
            if let Some(path) = report {
                write(&path, &(serde_json::to_string_pretty(&doc)? + "\n"))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            corpus,
            suite,
            report: path,
            jobs,
            families,
        } => {
            let corpus = if corpus == "builtin" {
                builtin_catalog()?
            } else {
                load_corpus_dir(Path::new(&corpus), &caps)?
            };
            let opts = SuiteOptions {
                selection: Selection::parse(&suite)?,
                jobs,
                caps,
                families,
            };
            let format = Format::for_path(&path)?;
            let run = run_suite(&corpus, &opts)?;
            write(&path, &report::emit_report(&run, format))?;
            print!("{}", report::suite_text(&run));
            let failed = run.count(Verdict::Fail);
            Ok(if failed > 0 { ExitCode::FAILURE } else { ExitCode::SUCCESS })
        }
        Command::Lattice { group, graph } => {
            let g = read_group(&group, &caps)?;
            let l = enumerate_normal_subgroups(g);
            for i in l.ids() {
                println!("{i}: {} (order {})", l.label(i), l.member(i).len());
            }
            write(&graph, &report::lattice_dot(&l))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Pmtv {
            group,
            max_p,
            max_d,
            module,
        } => {
            if max_p < 2 || max_d == 0 {
                bail!("bounds must satisfy max-p >= 2 and max-d >= 1");
            }
            let g = read_group(&group, &caps)?;
            let l = Arc::new(enumerate_normal_subgroups(g.clone()));
            if let Some(path) = module {
                let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                let spec: ModuleSpec = serde_json::from_str(&text)?;
                let m = validate_module(g, &spec)?;
                let kernel = l.lookup(&m.action_kernel()).expect("kernels are normal");
                println!(
                    "module F_{}^{}: simple {}, kernel {}",
                    m.p(),
                    m.dim(),
                    m.is_simple(&caps)?,
                    l.label(kernel)
                );
            }
            let search = enumerate_primitive(&l, SearchBounds { max_p, max_d }, &caps)?;
            println!("{}", serde_json::to_string_pretty(&report::primitive_json(&search))?);
            Ok(ExitCode::SUCCESS)
        }
    }
}
