use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use perrin_core::bounds::{absolute_bounds, AbsoluteBounds, BoundChain};
use perrin_core::contfrac::{cf_expand, convergents};
use perrin_core::highprec::{plastic_root, RealContext, RootMode, DEFAULT_PRECISION_DIGITS};
use perrin_core::reduction::{parse_big_m, run_stage, stage_combos, Stage, StageResult, TauTable};
use perrin_core::repdigit::search_low_range;
use perrin_core::report::{default_big_m, prove, render_text, ProveConfig, LOW_RANGE_THRESHOLD, PUBLISHED_Q};
use rug::Integer;

/// Exit status for command-line usage errors (BSD `EX_USAGE`); 2 is taken by
/// "pipeline ran but closure failed".
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "perrin-proof",
    version,
    about = "Verify that 22 is the only Perrin number that is a palindromic concatenation of two repdigits"
)]
struct Cli {
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Corrected,
    PaperReplication,
}

impl From<ModeArg> for RootMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Corrected => RootMode::Corrected,
            ModeArg::PaperReplication => RootMode::PaperReplication,
        }
    }
}

#[derive(Args, Clone)]
struct Numeric {
    /// Which constant stands in for the dominant root
    #[arg(long, value_enum, default_value = "corrected")]
    mode: ModeArg,
    /// Working precision in decimal digits
    #[arg(long, default_value_t = DEFAULT_PRECISION_DIGITS, value_parser = clap::value_parser!(u32).range(50..))]
    precision: u32,
    /// Bound M on the coefficient of tau, e.g. 2.8e48 (default depends on mode)
    #[arg(long, value_parser = parse_m)]
    big_m: Option<Integer>,
}

fn parse_m(s: &str) -> Result<Integer, String> {
    parse_big_m(s).map_err(|e| e.to_string())
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    L,
    M,
    N,
}

#[derive(Subcommand)]
enum Command {
    /// Search P_3..=P_{n-max} for palindromic concatenations of two repdigits
    Search {
        #[arg(long, default_value_t = LOW_RANGE_THRESHOLD, value_parser = clap::value_parser!(u64).range(2..))]
        n_max: u64,
        /// Require a nonempty middle block (m >= 1)
        #[arg(long)]
        strict: bool,
        /// Write the hits as JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the whole pipeline and write a proof report
    Prove {
        #[command(flatten)]
        numeric: Numeric,
        /// Upper end of the exhaustive search
        #[arg(long, default_value_t = LOW_RANGE_THRESHOLD, value_parser = clap::value_parser!(u64).range(2..))]
        n_max: u64,
        /// Write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the JSON report instead of the text summary
        #[arg(long)]
        json: bool,
    },
    /// Run one reduction stage and print the per-combo table
    Reduce {
        #[arg(value_enum)]
        stage: StageArg,
        #[command(flatten)]
        numeric: Numeric,
        #[arg(long, default_value_t = 54, value_parser = clap::value_parser!(u32).range(1..))]
        l_max: u32,
        #[arg(long, default_value_t = 57, value_parser = clap::value_parser!(u32).range(1..))]
        m_max: u32,
        /// Write the stage summary as JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print partial quotients and convergents of tau = log 10 / log alpha
    Cf {
        #[command(flatten)]
        numeric: Numeric,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Print the absolute-bound chain and its checks
    Bounds {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn write_json(path: &PathBuf, json: &str) -> Result<()> {
    fs::write(path, json).with_context(|| format!("writing {}", path.display()))
}

fn resolve_m(numeric: &Numeric) -> Result<Integer> {
    if let Some(m) = &numeric.big_m {
        return Ok(m.clone());
    }
    let recomputed = absolute_bounds(BoundChain::Recomputed)?;
    Ok(default_big_m(numeric.mode.into(), &recomputed))
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Search { n_max, strict, out } => {
            let hits = search_low_range(n_max, strict)?;
            println!("n\tP_n\td1\td2\tl\tm");
            for h in &hits {
                let p = h.pattern;
                let d2 = p.d2().map_or_else(|| "-".into(), |d| d.to_string());
                println!("{}\t{}\t{}\t{}\t{}\t{}", h.index, h.value, p.d1(), d2, p.ell(), p.m());
            }
            if let Some(out) = out {
                write_json(&out, &serde_json::to_string_pretty(&hits)?)?;
            }
            Ok(0)
        }
        Command::Prove {
            numeric,
            n_max,
            out,
            json,
        } => {
            let config = ProveConfig {
                mode: numeric.mode.into(),
                precision_digits: numeric.precision,
                low_range: n_max,
                big_m: numeric.big_m,
            };
            let report = prove(&config)?;
            let body = report.to_json();
            if let Some(out) = out {
                write_json(&out, &body)?;
            }
            if json {
                println!("{body}");
            } else {
                print!("{}", render_text(&report));
            }
            Ok(report.exit_code() as u8)
        }
        Command::Reduce {
            stage,
            numeric,
            l_max,
            m_max,
            out,
        } => {
            let stage = match stage {
                StageArg::L => Stage::L,
                StageArg::M => Stage::M,
                StageArg::N => Stage::N,
            };
            let ctx = RealContext::new(numeric.precision)?;
            let roots = plastic_root(ctx, numeric.mode.into())?;
            let big_m = resolve_m(&numeric)?;
            let result = run_stage(stage, ctx, &roots, &big_m, &stage_combos(stage, l_max, m_max))?;
            print_stage(&result);
            if let Some(out) = out {
                write_json(&out, &serde_json::to_string_pretty(&result)?)?;
            }
            if result.is_complete() {
                Ok(0)
            } else {
                eprintln!(
                    "warning: {} combo(s) failed; the aggregate covers the successful combos only",
                    result.failures.len()
                );
                Ok(1)
            }
        }
        Command::Cf { numeric, count } => {
            let ctx = RealContext::new(numeric.precision)?;
            let roots = plastic_root(ctx, numeric.mode.into())?;
            let tau = &ctx.int(10).ln()? / &roots.alpha().ln()?;
            println!("tau = {}", tau.to_decimal_string(40));
            let cf = cf_expand(&tau, count)?;
            let quotients: Vec<String> = cf.quotients.iter().map(|a| a.to_string()).collect();
            println!(
                "quotients: [{}]{}",
                quotients.join(", "),
                if cf.truncated { " (truncated)" } else { "" }
            );
            for c in convergents(&tau)?.take(count) {
                println!("p_{0}/q_{0} = {1}/{2}", c.index, c.p, c.q);
            }
            let big_m = resolve_m(&numeric)?;
            let table = TauTable::new(&tau, &big_m)?;
            let first = table.first_convergent();
            let tag = if first.q.to_string() == PUBLISHED_Q {
                " (matches published)"
            } else {
                ""
            };
            println!(
                "first q > 6M (M = {big_m}): index {}, q = {}{tag}",
                first.index, first.q
            );
            Ok(0)
        }
        Command::Bounds { out } => {
            let published = absolute_bounds(BoundChain::Published)?;
            let recomputed = absolute_bounds(BoundChain::Recomputed)?;
            print_bounds("published", &published);
            print_bounds("recomputed", &recomputed);
            if let Some(out) = out {
                write_json(&out, &serde_json::to_string_pretty(&[published, recomputed])?)?;
            }
            Ok(0)
        }
    }
}

fn print_bounds(name: &str, b: &AbsoluteBounds) {
    println!(
        "{name}: T = {:.4e}, n < {:.4e}, l < {:.4e}, m < {:.4e}",
        b.t_coeff, b.n_max, b.l_max, b.m_max
    );
    for c in &b.checks {
        let mark = if c.holds { "ok  " } else { "FAIL" };
        println!("  {mark} {}: {:.4e} vs {:.4e}", c.step, c.lhs, c.rhs);
    }
}

fn opt(x: Option<u64>) -> String {
    x.map_or_else(|| "-".into(), |x| x.to_string())
}

fn print_stage(r: &StageResult) {
    println!("combo\tconvergent\tepsilon\tk_bound");
    for row in &r.per_combo {
        println!(
            "{}\t{}\t{}\t{}",
            row.combo,
            row.value.convergent.index,
            row.value.epsilon.to_decimal_string(12),
            row.value.k_bound
        );
    }
    for row in &r.homogeneous {
        println!(
            "{}\thomogeneous (a = {})\t-\t{}",
            row.combo, row.value.max_quotient, row.value.k_bound
        );
    }
    for row in &r.failures {
        println!("{}\tfailed: {}\t-\t-", row.combo, row.value.error);
    }
    let eps = |e: &Option<perrin_core::HpReal>| e.as_ref().map_or_else(|| "-".into(), |e| e.to_decimal_string(12));
    println!(
        "stage {}: {} combos, {} reduced, {} homogeneous, {} failed",
        r.stage,
        r.combos,
        r.per_combo.len(),
        r.homogeneous.len(),
        r.failures.len()
    );
    println!(
        "first convergent with q > 6M: index {}, q = {}",
        r.convergent.index, r.convergent.q
    );
    println!("epsilon: min {}, max {}", eps(&r.min_epsilon), eps(&r.max_epsilon));
    if let (Some(c), Some(k)) = (r.max_epsilon_combo, r.max_epsilon_k_bound) {
        println!("largest epsilon at {c} with k_bound {k}");
    }
    println!(
        "aggregate {}, homogeneous {}, bound {} <= {}",
        opt(r.aggregate_bound),
        opt(r.homogeneous_bound),
        r.stage,
        opt(r.effective_bound)
    );
}
