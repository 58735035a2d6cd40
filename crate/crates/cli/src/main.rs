//! `lustab`: analyze the local-unitary stabilizer of multi-qubit pure
//! states from the command line.
//!
//! Subcommands:
//! - `analyze` a state given as a ket expression, a JSON file, or a named
//!   catalog state, printing the kernel, block decomposition, and bound
//!   classification;
//! - `catalog` lists the built-in reference states;
//! - `table` reproduces the reference dimension table;
//! - `verify` runs the seeded randomized verification suites;
//! - `scan` searches random families for nonproduct states of maximal
//!   stabilizer dimension.
//!
//! Exit codes: 0 on success, 1 when a verified property fails (or the
//! analysis detects an internal structure violation), 2 on input errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use lustab::catalog::{self, NamedParams};
use lustab::state::json::parse_state_json;
use lustab::state::parse::{ket_string, parse_state};
use lustab::{
    scan_nonproduct_max, stabilizer_report, table_rows, verify_suite, AnyState, Error,
    StabilizerReport, SuiteConfig, SuiteReport, DEFAULT_TOL,
};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const TOL_MIN: f64 = 1e-13;
const TOL_MAX: f64 = 1e-4;

#[derive(Parser)]
#[command(name = "lustab", version, about = "Local-unitary stabilizer analysis for multi-qubit pure states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Keep the arithmetic the input parses to.
    Auto,
    /// Require exact rational arithmetic; fails on float-only inputs.
    Exact,
    /// Convert the state to floating point.
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one state: kernel, su(2) blocks, bounds.
    Analyze(AnalyzeArgs),
    /// List the built-in reference states and their known dimensions.
    Catalog {
        /// Largest qubit count to include.
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long)]
        json: bool,
        /// Write output to FILE instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce the reference dimension table.
    Table {
        /// Largest qubit count.
        #[arg(long, default_value_t = 7)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the randomized verification suites.
    Verify {
        /// Largest qubit count exercised.
        #[arg(long, default_value_t = 7)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Base trial count (the reference suite corresponds to 100).
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan random families for nonproduct states with stabilizer
    /// dimension n - 1.
    Scan {
        /// Scan only this qubit count (default: 3 through 6).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Read the state from FILE: a ket expression like "|01> - |10>" or a
    /// JSON object; "-" reads stdin.
    #[arg(long, conflicts_with = "state")]
    input: Option<PathBuf>,
    /// A named state: ghz, singlet, singlet_product, m4, block4, w, basis,
    /// random_haar, or random_product.
    #[arg(long)]
    state: Option<String>,
    /// Qubit count for named families that need one.
    #[arg(long)]
    n: Option<usize>,
    /// ghz coefficient of |0...0> (rational, e.g. "1" or "2/3").
    #[arg(long)]
    alpha: Option<String>,
    /// ghz coefficient of |1...1>.
    #[arg(long)]
    beta: Option<String>,
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    /// Kernel tolerance (relative to the largest singular value).
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Seed for the random_* families.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::StructureViolation { .. } => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn check_tol(tol: f64) -> Result<(), Error> {
    if tol.is_finite() && (TOL_MIN..=TOL_MAX).contains(&tol) {
        Ok(())
    } else {
        Err(Error::ToleranceRange {
            tol,
            min: TOL_MIN,
            max: TOL_MAX,
        })
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::param(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{}", text.trim_end_matches('\n'));
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Analyze(args) => analyze(args),
        Command::Catalog { n, json, out } => {
            let entries = catalog::catalog(n)?;
            let text = if json {
                let items: Vec<serde_json::Value> = entries
                    .iter()
                    .map(|e| {
                        serde_json::json!({
                            "name": e.name,
                            "n": e.state.n(),
                            "kernel_dim": e.expected_dim,
                            "blocks": e.expected_blocks,
                            "state": ket_string(&e.state),
                        })
                    })
                    .collect();
                serde_json::to_string_pretty(&items)?
            } else {
                let mut t = format!("{:<20} {:>2} {:>10}  blocks\n", "name", "n", "kernel_dim");
                for e in &entries {
                    writeln!(
                        t,
                        "{:<20} {:>2} {:>10}  {}",
                        e.name,
                        e.state.n(),
                        e.expected_dim,
                        blocks_str(&e.expected_blocks)
                    )
                    .expect("write to string");
                }
                t
            };
            emit(&text, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Table { n, seed, tol, json, out } => {
            check_tol(tol)?;
            let rows = table_rows(n, seed, tol, 20)?;
            let all_agree = rows.iter().all(|r| r.agree);
            let text = if json {
                serde_json::to_string_pretty(&rows)?
            } else {
                let mut t = format!(
                    "{:<16} {:>2} {:>8} {:>8} {:>6}  status\n",
                    "family", "n", "expected", "computed", "trials"
                );
                for r in &rows {
                    writeln!(
                        t,
                        "{:<16} {:>2} {:>8} {:>8} {:>6}  {}",
                        r.family,
                        r.n,
                        r.expected_dim,
                        r.computed_dim,
                        r.trials,
                        if r.agree { "ok" } else { "MISMATCH" }
                    )
                    .expect("write to string");
                }
                t
            };
            emit(&text, out.as_deref())?;
            Ok(if all_agree {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Verify { n, seed, tol, trials, json, out } => {
            check_tol(tol)?;
            if trials == 0 {
                return Err(Error::param("--trials must be at least 1"));
            }
            let config = SuiteConfig {
                seed,
                n_max: n,
                tol,
                ..SuiteConfig::default().with_trials(trials)
            };
            let report = verify_suite(&config)?;
            let text = if json {
                serde_json::to_string_pretty(&report)?
            } else {
                verify_text(&report)
            };
            emit(&text, out.as_deref())?;
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Scan { n, trials, seed, tol, json, out } => {
            check_tol(tol)?;
            let (lo, hi) = match n {
                Some(n) => (n, n),
                None => (3, 6),
            };
            let hits = scan_nonproduct_max(lo, hi, trials, seed, tol)?;
            let text = if json {
                serde_json::to_string_pretty(&hits)?
            } else {
                let mut t = String::new();
                for h in &hits {
                    writeln!(
                        t,
                        "hit: family={} n={} index={} kernel_dim={} block_sizes={:?}",
                        h.family, h.n, h.index, h.kernel_dim, h.block_sizes
                    )
                    .expect("write to string");
                }
                writeln!(t, "total hits: {}", hits.len()).expect("write to string");
                t
            };
            emit(&text, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_state(args: &AnalyzeArgs) -> Result<AnyState, Error> {
    if let Some(path) = &args.input {
        let text = if path.as_os_str() == "-" {
            std::io::read_to_string(std::io::stdin())
                .map_err(|e| Error::param(format!("cannot read stdin: {e}")))?
        } else {
            std::fs::read_to_string(path)
                .map_err(|e| Error::param(format!("cannot read {}: {e}", path.display())))?
        };
        return if text.trim_start().starts_with('{') {
            parse_state_json(&text)
        } else {
            parse_state(&text)
        };
    }
    if let Some(name) = &args.state {
        let mut params = NamedParams {
            n: args.n,
            seed: args.seed,
            ..NamedParams::default()
        };
        if let Some(a) = &args.alpha {
            params.alpha = Some(NamedParams::parse_coeff(a)?);
        }
        if let Some(b) = &args.beta {
            params.beta = Some(NamedParams::parse_coeff(b)?);
        }
        return catalog::make_named(name, &params);
    }
    Err(Error::param(
        "no state given: pass --input FILE or --state NAME",
    ))
}

fn coerce_mode(state: AnyState, mode: Mode) -> Result<AnyState, Error> {
    match (mode, state) {
        (Mode::Auto, s) => Ok(s),
        (Mode::Float, s) => Ok(AnyState::Float(s.to_float_state())),
        (Mode::Exact, AnyState::Exact(s)) => Ok(AnyState::Exact(s)),
        (Mode::Exact, AnyState::Float(_)) => Err(Error::param(
            "state has no exact rational representation; use --mode float or auto",
        )),
    }
}

fn analyze(args: AnalyzeArgs) -> Result<ExitCode, Error> {
    check_tol(args.tol)?;
    let state = coerce_mode(load_state(&args)?, args.mode)?;
    let report = stabilizer_report(&state, args.tol)?;
    if !report.tol_stable {
        eprintln!(
            "warning: the kernel dimension changes between loose and tight \
             thresholds around tol={:e}; treat it as unstable",
            report.tol
        );
    }
    let text = if args.json {
        serde_json::to_string_pretty(&report)?
    } else {
        analyze_text(&report)
    };
    emit(&text, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn blocks_str(blocks: &[Vec<usize>]) -> String {
    if blocks.is_empty() {
        "none".to_string()
    } else {
        blocks
            .iter()
            .map(|b| {
                let inner: Vec<String> = b.iter().map(usize::to_string).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn analyze_text(r: &StabilizerReport) -> String {
    let mut t = String::new();
    let c = &r.classification;
    writeln!(t, "n: {}", r.n).unwrap();
    writeln!(t, "mode: {}", r.mode).unwrap();
    writeln!(t, "tolerance: {:e}", r.tol).unwrap();
    writeln!(t, "kernel dimension: {}", r.kernel_dim).unwrap();
    writeln!(t, "su(2) blocks: {} (p = {})", blocks_str(&r.blocks), r.p).unwrap();
    writeln!(t, "residual dimension: {}", r.residual_dim).unwrap();
    let dims: Vec<String> = r
        .per_qubit_projection_dims
        .iter()
        .map(usize::to_string)
        .collect();
    writeln!(t, "per-qubit projection dimensions: [{}]", dims.join(", ")).unwrap();
    writeln!(
        t,
        "dimension formula (dim = 3p + residual): {}",
        if r.formula_holds { "holds" } else { "VIOLATED" }
    )
    .unwrap();
    writeln!(t, "bracket closure residual: {:.3e}", r.closure_residual).unwrap();
    if c.is_product {
        let parts: Vec<String> = c
            .parts
            .iter()
            .map(|p| {
                let inner: Vec<String> = p.iter().map(usize::to_string).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        writeln!(t, "factorization: product {}", parts.join(" x ")).unwrap();
    } else {
        writeln!(t, "factorization: nonproduct").unwrap();
    }
    if c.singlet_pairs.is_empty() {
        writeln!(t, "singlet pairs: none").unwrap();
    } else {
        let pairs: Vec<String> = c
            .singlet_pairs
            .iter()
            .map(|(a, b)| format!("({a},{b})"))
            .collect();
        writeln!(t, "singlet pairs: {}", pairs.join(" ")).unwrap();
    }
    writeln!(
        t,
        "bound: {} (dimension {} <= {}{})",
        c.bound_name,
        c.kernel_dim,
        c.bound_value,
        if c.saturated { ", saturated" } else { "" }
    )
    .unwrap();
    writeln!(t, "kernel basis (phase, then a,b,c per qubit):").unwrap();
    for row in &r.kernel_basis {
        let coords: Vec<String> = row.iter().map(|v| format!("{v:+.6}")).collect();
        writeln!(t, "  [{}]", coords.join(" ")).unwrap();
    }
    t
}

fn verify_text(r: &SuiteReport) -> String {
    let mut t = String::new();
    writeln!(t, "seed: {}", r.seed).unwrap();
    writeln!(t, "tolerance: {:e}", r.tol).unwrap();
    writeln!(t, "largest n: {}", r.n_max).unwrap();
    writeln!(t, "{:<28} {:>7} {:>9}", "property", "trials", "failures").unwrap();
    for p in &r.properties {
        writeln!(t, "{:<28} {:>7} {:>9}", p.name, p.trials, p.failures).unwrap();
        for c in &p.counterexamples {
            writeln!(t, "    counterexample: {c}").unwrap();
        }
    }
    writeln!(t, "suite: {}", if r.passed { "PASS" } else { "FAIL" }).unwrap();
    t
}
