//! Command-line surface. Thin by design: parse flags, read files, call the
//! library, print a report. The one piece of policy that lives here is the
//! exit-code contract — 0 accept, 1 reject, 2 usage or I/O, 3 internal bug —
//! and the rule that every `build` re-verifies the file it just wrote before
//! claiming success.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use rrtw::cnf::{build_graph, ClauseId, Cnf, GraphFlavor};
use rrtw::decomp::format::{parse_decomposition, serialize_decomposition};
use rrtw::decomp::{binarize_and_root, heuristic_td, primal_to_one_sided, validate};
use rrtw::longclauses::BuildError as LongBuildError;
use rrtw::longclauses::{build_longclauses_rr, LongClauseSpec};
use rrtw::onesided::{build_onesided_rr, BuildError as OnesidedBuildError};
use rrtw::oracle::{
    dpll_unsat, gen_instances, GenError, InstanceRecipe, OracleVerdict, UnsatOracle,
};
use rrtw::proof::check::check_proof;
use rrtw::proof::{parse_proof, serialize_proof, stats, ProofStats};

#[derive(Parser)]
#[command(
    name = "rrtw",
    version,
    about = "Regular resolution proofs from tree decompositions"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify that a proof file is a regular resolution refutation of a CNF.
    Check {
        #[arg(long, value_name = "FILE")]
        cnf: PathBuf,
        #[arg(long, value_name = "FILE")]
        proof: PathBuf,
    },
    /// Construct a refutation and write it out (re-verified before exit 0).
    #[command(subcommand)]
    Build(BuildCmd),
    /// Inspect and transform tree decompositions.
    #[command(subcommand)]
    Td(TdCmd),
    /// Brute-force ground truth.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Sample a random unsatisfiable instance with bounded-width structure.
    Gen(GenArgs),
    /// Print size statistics of a proof file.
    Stats {
        #[arg(long, value_name = "FILE")]
        proof: PathBuf,
    },
}

#[derive(Subcommand)]
enum BuildCmd {
    /// From a one-sided incidence decomposition.
    OneSided {
        #[arg(long, value_name = "FILE")]
        cnf: PathBuf,
        #[arg(long, value_name = "FILE")]
        td: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// From a primal decomposition of the short clauses plus designated
    /// long clauses.
    LongClauses {
        #[arg(long, value_name = "FILE")]
        cnf: PathBuf,
        /// Primal decomposition of the formula without the long clauses.
        #[arg(long, value_name = "FILE")]
        td: PathBuf,
        /// Long clause ids: comma-separated list, or @FILE with
        /// whitespace-separated ids. May be empty.
        #[arg(long, value_name = "IDS", allow_hyphen_values = false)]
        long: String,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum TdCmd {
    /// Check the decomposition rules; add --one-sided for the vertical-path
    /// condition on clause bags.
    Validate {
        #[arg(long, value_name = "FILE")]
        cnf: PathBuf,
        #[arg(long, value_name = "FILE")]
        td: PathBuf,
        #[arg(long)]
        one_sided: bool,
    },
    /// Turn a primal decomposition into a one-sided incidence one.
    Convert {
        #[arg(long, value_name = "FILE")]
        cnf: PathBuf,
        #[arg(long, value_name = "FILE")]
        td: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Compute a primal decomposition with the min-fill heuristic.
    Heuristic {
        #[arg(long, value_name = "FILE")]
        cnf: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Decide satisfiability by complete search.
    Unsat {
        #[arg(long, value_name = "FILE")]
        cnf: PathBuf,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    vars: u32,
    /// Primal width target for the short part.
    #[arg(long)]
    width: u32,
    /// How many long clauses to add.
    #[arg(long, default_value_t = 0)]
    long_clauses: u32,
    /// Short clauses per variable.
    #[arg(long, default_value_t = 2.0)]
    density: f64,
    /// Writes PREFIX.cnf, PREFIX.td, and PREFIX.long.
    #[arg(long, value_name = "PREFIX")]
    out_prefix: PathBuf,
}

/// A terminal outcome: the process exit code plus a stderr diagnostic.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn reject(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
    fn io(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
    fn bug(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

pub fn dispatch(cli: Cli) -> i32 {
    match run(cli.command) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("{}", f.message);
            f.code
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Check { cnf, proof } => {
            let cnf = read_cnf(&cnf)?;
            let dag = read_proof(&proof)?;
            let stats = check_or_reject(&cnf, &dag)?;
            print_stats(&stats);
            Ok(())
        }
        Command::Build(BuildCmd::OneSided { cnf, td, out }) => {
            let cnf = read_cnf(&cnf)?;
            let td = read_td(&td, &cnf)?;
            let mut oracle = UnsatOracle::new();
            let (dag, report) = build_onesided_rr(&cnf, &td, &mut oracle).map_err(|e| match e {
                OnesidedBuildError::InternalBug(_) => Failure::bug(e.to_string()),
                _ => Failure::reject(e.to_string()),
            })?;
            write_and_recheck(&cnf, &dag, &out)?;
            println!("{report}");
            Ok(())
        }
        Command::Build(BuildCmd::LongClauses { cnf, td, long, out }) => {
            let cnf = read_cnf(&cnf)?;
            let td = read_td(&td, &cnf)?;
            let long_ids = parse_long_ids(&long)?;
            let spec = LongClauseSpec {
                long_ids,
                short_td: binarize_and_root(&td),
            };
            let mut oracle = UnsatOracle::new();
            let (dag, report) =
                build_longclauses_rr(&cnf, &spec, &mut oracle).map_err(|e| match e {
                    LongBuildError::InternalBug(_) => Failure::bug(e.to_string()),
                    _ => Failure::reject(e.to_string()),
                })?;
            write_and_recheck(&cnf, &dag, &out)?;
            println!("{report}");
            Ok(())
        }
        Command::Td(TdCmd::Validate { cnf, td, one_sided }) => {
            let cnf = read_cnf(&cnf)?;
            let td = read_td(&td, &cnf)?;
            match validate(&cnf, &td, one_sided) {
                Ok(report) => {
                    println!("width={}", report.width);
                    println!("max_bag_size={}", report.max_bag_size);
                    println!("num_nodes={}", report.num_nodes);
                    Ok(())
                }
                Err(violations) => Err(Failure::reject(
                    violations
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join("\n"),
                )),
            }
        }
        Command::Td(TdCmd::Convert { cnf, td, out }) => {
            let cnf = read_cnf(&cnf)?;
            let td = read_td(&td, &cnf)?;
            let converted =
                primal_to_one_sided(&td, &cnf).map_err(|e| Failure::reject(e.to_string()))?;
            let report = validate(&cnf, &converted, true).map_err(|v| {
                Failure::bug(format!("converted decomposition fails validation: {:?}", v))
            })?;
            write_file(&out, &serialize_decomposition(&converted, &cnf))?;
            println!("width={}", report.width);
            println!("num_nodes={}", report.num_nodes);
            Ok(())
        }
        Command::Td(TdCmd::Heuristic { cnf, out }) => {
            let cnf = read_cnf(&cnf)?;
            let td = heuristic_td(&build_graph(&cnf, GraphFlavor::Primal));
            let report = validate(&cnf, &td, false).map_err(|v| {
                Failure::bug(format!("heuristic decomposition fails validation: {:?}", v))
            })?;
            write_file(&out, &serialize_decomposition(&td, &cnf))?;
            println!("width={}", report.width);
            println!("num_nodes={}", report.num_nodes);
            Ok(())
        }
        Command::Oracle(OracleCmd::Unsat { cnf }) => {
            let cnf = read_cnf(&cnf)?;
            match dpll_unsat(&cnf) {
                OracleVerdict::Unsat => {
                    println!("verdict=unsat");
                    Ok(())
                }
                OracleVerdict::Sat(witness) => {
                    println!("verdict=sat");
                    println!("witness={witness}");
                    Err(Failure::reject("formula is satisfiable"))
                }
            }
        }
        Command::Gen(args) => {
            let recipe = InstanceRecipe {
                seed: args.seed,
                num_vars: args.vars,
                width: args.width,
                long_clauses: args.long_clauses,
                density: args.density,
            };
            let (cnf, spec) = gen_instances(&recipe).map_err(|e| match e {
                GenError::BadRecipe(_) => Failure::io(e.to_string()),
                GenError::ResamplingExhausted(_) => Failure::reject(e.to_string()),
            })?;
            let prefix = args.out_prefix.as_os_str().to_string_lossy();
            let cnf_path = PathBuf::from(format!("{prefix}.cnf"));
            let td_path = PathBuf::from(format!("{prefix}.td"));
            let long_path = PathBuf::from(format!("{prefix}.long"));
            write_file(&cnf_path, &rrtw::cnf::serialize_dimacs(&cnf))?;
            write_file(&td_path, &serialize_decomposition(&spec.short_td, &cnf))?;
            let ids: Vec<String> = spec.long_ids.iter().map(|id| id.0.to_string()).collect();
            write_file(&long_path, &format!("{}\n", ids.join(" ")))?;
            println!("cnf={}", cnf_path.display());
            println!("td={}", td_path.display());
            println!("long={}", long_path.display());
            println!("vars={}", cnf.num_vars);
            println!("clauses={}", cnf.clauses.len());
            Ok(())
        }
        Command::Stats { proof } => {
            let dag = read_proof(&proof)?;
            let s = stats(&dag).map_err(|e| Failure::reject(e.to_string()))?;
            print_stats(&s);
            Ok(())
        }
    }
}

fn read_cnf(path: &Path) -> Result<Cnf, Failure> {
    let text = read_file(path)?;
    rrtw::cnf::parse_dimacs(&text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn read_td(path: &Path, cnf: &Cnf) -> Result<rrtw::decomp::TreeDecomposition, Failure> {
    let text = read_file(path)?;
    parse_decomposition(&text, cnf).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn read_proof(path: &Path) -> Result<rrtw::proof::RrDag, Failure> {
    let text = read_file(path)?;
    parse_proof(&text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

/// Comma-separated ids, or `@FILE` holding whitespace/comma-separated ids.
fn parse_long_ids(arg: &str) -> Result<std::collections::BTreeSet<ClauseId>, Failure> {
    let text;
    let body = if let Some(path) = arg.strip_prefix('@') {
        text = read_file(Path::new(path))?;
        text.as_str()
    } else {
        arg
    };
    body.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u32>()
                .map(ClauseId)
                .map_err(|_| Failure::io(format!("bad clause id in --long: {t:?}")))
        })
        .collect()
}

fn check_or_reject(cnf: &Cnf, dag: &rrtw::proof::RrDag) -> Result<ProofStats, Failure> {
    check_proof(cnf, dag).map_err(|violations| {
        Failure::reject(
            violations
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("\n"),
        )
    })
}

/// The self-check behind every `build`: serialize, write, read the bytes
/// back, re-parse, re-verify. Any failure past this point means we produced
/// a bad artifact, which is a bug, not a rejection.
fn write_and_recheck(cnf: &Cnf, dag: &rrtw::proof::RrDag, out: &Path) -> Result<(), Failure> {
    write_file(out, &serialize_proof(dag))?;
    let reread = read_file(out)?;
    let reparsed =
        parse_proof(&reread).map_err(|e| Failure::bug(format!("written proof unreadable: {e}")))?;
    check_proof(cnf, &reparsed).map_err(|violations| {
        Failure::bug(format!(
            "written proof fails verification: {}",
            violations
                .first()
                .map(ToString::to_string)
                .unwrap_or_default()
        ))
    })?;
    Ok(())
}

fn print_stats(s: &ProofStats) {
    println!("nodes={}", s.num_nodes);
    println!("edges={}", s.num_edges);
    println!("decisions={}", s.num_decisions);
    println!("sinks={}", s.num_sinks);
    println!("depth={}", s.depth);
    println!("distinct_vars={}", s.distinct_vars);
}
