mod formats;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Result};
use batsp_core::constructions::{
    build_counterexample, build_extreme_point, gen_random_metric, verify_counterexample,
    verify_extreme_point, MetricStyle,
};
use batsp_core::instance::ValidationMode;
use batsp_core::oracle::{exact_bottleneck, DEFAULT_ORACLE_CAP};
use batsp_core::solver::{bottleneck_lower_bound, solve_batsp, verify_solution, SolverConfig};
use batsp_core::thintree::{
    default_beta_target, derive_z, find_certified_thin_tree, thinness, ThinnessMode,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use formats::{instance_to_json, parse_instance, ReportDoc, Timings};

// Exit codes: 0 success, 2 infeasible or invalid input, 3 internal
// invariant violation, 4 size limits.
const EXIT_INPUT: u8 = 2;
const EXIT_INVARIANT: u8 = 3;
const EXIT_SIZE: u8 = 4;

const DEFAULT_MAX_N: usize = 64;

#[derive(Parser)]
#[command(name = "batsp", about = "Bottleneck asymmetric TSP approximation pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SolveArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Thinness target; defaults to the 4 ln n / ln ln n formula.
    #[arg(long)]
    beta_target: Option<f64>,
    #[arg(long, default_value_t = 64)]
    tree_attempts: usize,
    /// Compute the exact optimum alongside when n is at most this.
    #[arg(long, default_value_t = 12)]
    oracle_cap: usize,
    /// Repair triangle violations by metric closure instead of rejecting.
    #[arg(long)]
    closure: bool,
    /// Include the threshold search trace in the report.
    #[arg(long)]
    trace: bool,
    /// Omit timings for byte-identical reports across runs.
    #[arg(long)]
    no_timings: bool,
    /// Emit a single TSV line: n, tau_star, beta, k, bottleneck, ratio.
    #[arg(long)]
    summary: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum StyleArg {
    Closure,
    EuclideanIsh,
}

impl From<StyleArg> for MetricStyle {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::Closure => MetricStyle::Closure,
            StyleArg::EuclideanIsh => MetricStyle::EuclideanIsh,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum ThinnessModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full approximation pipeline and emit a report.
    Solve(SolveArgs),
    /// Print the threshold lower bound tau_star.
    LowerBound {
        input: PathBuf,
        #[arg(long)]
        closure: bool,
    },
    /// Exact bottleneck optimum by subset DP (small instances).
    Oracle {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
        #[arg(long)]
        closure: bool,
    },
    /// Generate a seeded random metric instance as JSON.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = StyleArg::Closure)]
        style: StyleArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a report against its instance.
    Verify {
        instance: PathBuf,
        report: PathBuf,
        #[arg(long)]
        closure: bool,
    },
    /// Build and verify the worst-case constructions.
    VerifyConstruction {
        #[command(subcommand)]
        which: ConstructionCmd,
    },
    /// Sample a thin tree and report its certified thinness.
    Thinness {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        beta_target: Option<f64>,
        #[arg(long, default_value_t = 64)]
        tree_attempts: usize,
        #[arg(long, value_enum)]
        thinness_mode: Option<ThinnessModeArg>,
        #[arg(long)]
        closure: bool,
    },
    /// Solve a batch of generated instances in parallel; TSV per run.
    Bench {
        /// Comma-separated instance sizes.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[arg(long, value_enum, default_value_t = StyleArg::Closure)]
        style: StyleArg,
    },
}

#[derive(Subcommand)]
enum ConstructionCmd {
    /// Extreme point with a degree-k support vertex on 2k+5 vertices.
    ExtremePoint {
        #[arg(long)]
        k: usize,
    },
    /// Layered graph whose p-th power is non-Hamiltonian despite feasibility.
    Counterexample {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: usize,
    },
}

/// Error carrying its process exit code.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(e: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
    fn invariant(e: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_INVARIANT,
            message: e.to_string(),
        }
    }
    fn size(e: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_SIZE,
            message: e.to_string(),
        }
    }
}

fn max_n() -> usize {
    std::env::var("BATSP_MAX_N")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

fn check_size(n: usize) -> Result<(), CliError> {
    let cap = max_n();
    if n > cap {
        return Err(CliError::size(format!(
            "instance size {n} exceeds limit {cap} (BATSP_MAX_N overrides)"
        )));
    }
    Ok(())
}

fn mode(closure: bool) -> ValidationMode {
    if closure {
        ValidationMode::Closure
    } else {
        ValidationMode::Reject
    }
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(CliError::input),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    let inst = parse_instance(&args.input, mode(args.closure)).map_err(CliError::input)?;
    check_size(inst.n)?;
    let config = SolverConfig {
        beta_target: args.beta_target,
        tree_attempts: args.tree_attempts,
        rng_seed: args.seed,
    };
    let started = Instant::now();
    let report = solve_batsp(&inst, &config).map_err(CliError::input)?;
    let elapsed = started.elapsed();
    let failures = verify_solution(&inst, &report);
    if !failures.is_empty() {
        return Err(CliError::invariant(format!(
            "solution failed re-verification: {failures:?}"
        )));
    }
    let opt = if inst.n <= args.oracle_cap {
        exact_bottleneck(&inst, args.oracle_cap)
            .ok()
            .map(|r| r.opt_bottleneck)
    } else {
        None
    };
    if let Some(opt) = opt {
        if report.tau_star > opt + 1e-9 || report.tour.bottleneck + 1e-9 < opt {
            return Err(CliError::invariant(format!(
                "oracle sandwich violated: tau {} opt {opt} bottleneck {}",
                report.tau_star, report.tour.bottleneck
            )));
        }
    }
    let timings = (!args.no_timings).then(|| Timings {
        total_ms: elapsed.as_secs_f64() * 1e3,
    });
    let doc = ReportDoc::from_report(&inst.name, &report, opt, args.trace, timings);
    let text = if args.summary {
        doc.summary_tsv()
    } else {
        doc.to_canonical_json().map_err(CliError::invariant)?
    };
    write_out(&args.out, &text)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::LowerBound { input, closure } => {
            let inst = parse_instance(&input, mode(closure)).map_err(CliError::input)?;
            check_size(inst.n)?;
            let tau = bottleneck_lower_bound(&inst).map_err(|e| CliError::input(format!("{e:?}")))?;
            println!("{tau}");
            Ok(())
        }
        Command::Oracle {
            input,
            oracle_cap,
            closure,
        } => {
            let inst = parse_instance(&input, mode(closure)).map_err(CliError::input)?;
            let r = exact_bottleneck(&inst, oracle_cap).map_err(CliError::size)?;
            println!("{}", r.opt_bottleneck);
            println!("{:?}", r.opt_tour);
            Ok(())
        }
        Command::Gen { n, seed, style, out } => {
            if n < 2 {
                return Err(CliError::input("gen needs n >= 2"));
            }
            check_size(n)?;
            let inst = gen_random_metric(n, seed, style.into());
            let text = instance_to_json(&inst).map_err(CliError::invariant)?;
            write_out(&out, &text)
        }
        Command::Verify {
            instance,
            report,
            closure,
        } => {
            let inst = parse_instance(&instance, mode(closure)).map_err(CliError::input)?;
            let text = std::fs::read_to_string(&report).map_err(CliError::input)?;
            let doc: ReportDoc = serde_json::from_str(&text).map_err(CliError::input)?;
            if doc.schema != formats::REPORT_SCHEMA {
                return Err(CliError::input(format!("unknown schema '{}'", doc.schema)));
            }
            let failures = verify_solution(&inst, &doc.to_report());
            if failures.is_empty() {
                println!("pass");
                Ok(())
            } else {
                Err(CliError::invariant(format!("fail: {failures:?}")))
            }
        }
        Command::VerifyConstruction { which } => match which {
            ConstructionCmd::ExtremePoint { k } => {
                let cert = build_extreme_point(k).map_err(CliError::input)?;
                if cert.n > 20 {
                    return Err(CliError::size(format!(
                        "exhaustive cut scan infeasible for n = {}",
                        cert.n
                    )));
                }
                let verdict = verify_extreme_point(&cert);
                println!(
                    "k={k} n={} support={} min_cut={} rank={} extreme={}",
                    cert.n,
                    verdict.support_size,
                    verdict.min_cut,
                    verdict.rank,
                    verdict.extreme
                );
                if verdict.pass() {
                    Ok(())
                } else {
                    Err(CliError::invariant(format!("{:?}", verdict.failures)))
                }
            }
            ConstructionCmd::Counterexample { k, p } => {
                if k < 1 || p < 1 {
                    return Err(CliError::input("counterexample needs k >= 1 and p >= 1"));
                }
                let g = build_counterexample(k, p);
                check_size(g.n)?;
                let verdict = verify_counterexample(&g);
                println!(
                    "k={k} p={p} n={} counting={} neighborhood={} disjoint_paths={}",
                    g.n, verdict.counting_ok, verdict.neighborhood_ok, verdict.disjoint_paths_ok
                );
                if verdict.pass() {
                    Ok(())
                } else {
                    Err(CliError::invariant(format!("{:?}", verdict.failures)))
                }
            }
        },
        Command::Thinness {
            input,
            seed,
            beta_target,
            tree_attempts,
            thinness_mode,
            closure,
        } => {
            let inst = parse_instance(&input, mode(closure)).map_err(CliError::input)?;
            check_size(inst.n)?;
            let tau = batsp_core::heldkarp::find_tau_star(&inst)
                .map_err(|e| CliError::input(format!("{e:?}")))?;
            let z = derive_z(&tau.solution);
            let target = beta_target.unwrap_or_else(|| default_beta_target(inst.n));
            let tree = find_certified_thin_tree(&z, target, tree_attempts, seed)
                .map_err(|e| CliError::input(format!("{e}")))?;
            // Optional override of the certification mode for the report.
            let (beta, certified) = match thinness_mode {
                None => (tree.beta, tree.certified),
                Some(m) => {
                    let m = match m {
                        ThinnessModeArg::Exhaustive => ThinnessMode::Exhaustive,
                        ThinnessModeArg::Sampled => ThinnessMode::Sampled,
                    };
                    let rep = thinness(&tree.edges, &z, m)
                        .map_err(|e| CliError::size(format!("{e}")))?;
                    (rep.beta, rep.certified)
                }
            };
            println!("tau_star={}\nbeta={beta}\ncertified={certified}\ntarget={target}", tau.tau_star);
            Ok(())
        }
        Command::Bench { n, seeds, style } => {
            if n.is_empty() {
                return Err(CliError::input("bench needs at least one size via --n"));
            }
            for &size in &n {
                check_size(size)?;
            }
            let jobs: Vec<(usize, u64)> = n
                .iter()
                .flat_map(|&size| (0..seeds).map(move |s| (size, s)))
                .collect();
            let mut rows: Vec<(usize, u64, Result<String>)> = jobs
                .into_par_iter()
                .map(|(size, seed)| {
                    let inst = gen_random_metric(size, seed, style.into());
                    let started = Instant::now();
                    let row = solve_batsp(&inst, &SolverConfig { rng_seed: seed, ..Default::default() })
                        .map_err(|e| anyhow!("{e}"))
                        .map(|r| {
                            format!(
                                "{size}\t{seed}\t{}\t{}\t{}\t{}\t{:.1}",
                                r.tau_star,
                                r.beta,
                                r.k,
                                r.tour.bottleneck,
                                started.elapsed().as_secs_f64() * 1e3
                            )
                        });
                    (size, seed, row)
                })
                .collect();
            rows.sort_by_key(|&(size, seed, _)| (size, seed));
            println!("n\tseed\ttau_star\tbeta\tk\tbottleneck\tms");
            for (size, seed, row) in rows {
                match row {
                    Ok(r) => println!("{r}"),
                    Err(e) => return Err(CliError::input(format!("n={size} seed={seed}: {e}"))),
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
