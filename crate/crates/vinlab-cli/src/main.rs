//! Command-line front end for the mean-value laboratory.
//!
//! Exit codes: 0 success, 1 assertion failure, 2 configuration or
//! execution error.

mod commands;
mod config;
mod output;
mod sweep;
mod verify;

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use vinlab::{Budget, Interval};

use output::Outcome;

#[derive(Parser)]
#[command(
    name = "vinlab",
    about = "Exact counting, exponential sums, and exponent bounds for power-sum systems",
    version
)]
struct Cli {
    /// Worker threads for parallel reductions (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Memory budget for counting tables, in bytes.
    #[arg(long, global = true)]
    budget_bytes: Option<u64>,
    /// Write the artifact to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count solutions of the paired power-sum system (the mean value).
    Count {
        /// Exponent set, e.g. "1,2".
        #[arg(long, short = 'e', default_value = "1,2")]
        exponents: String,
        #[arg(long, short = 's')]
        s: u32,
        /// Shorthand for the interval [1, X].
        #[arg(long, short = 'x', value_name = "X")]
        x: Option<u64>,
        #[arg(long, default_value_t = 1)]
        start: i64,
        #[arg(long)]
        length: Option<u64>,
    },
    /// Mass statistics of the one-sided representation table.
    Moment {
        #[arg(long, short = 'e', default_value = "1,2")]
        exponents: String,
        #[arg(long, short = 's')]
        s: u32,
        #[arg(long, short = 'x', value_name = "X")]
        x: Option<u64>,
        #[arg(long, default_value_t = 1)]
        start: i64,
        #[arg(long)]
        length: Option<u64>,
    },
    /// Compare the counting engine against the orthogonality oracle.
    DftCheck {
        #[arg(long, short = 'e', default_value = "1,2")]
        exponents: String,
        #[arg(long, short = 's')]
        s: u32,
        #[arg(long, short = 'x')]
        x: u64,
    },
    /// Evaluate an exponential sum at a real or rational point.
    Expsum {
        #[arg(long, short = 'e', default_value = "1,2")]
        exponents: String,
        /// Comma list of coordinates; each "p/q" or a decimal.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, short = 'x', default_value_t = 0)]
        x: u64,
        /// Denominator for a complete rational sum.
        #[arg(long)]
        q: Option<u64>,
        /// Numerators for the complete sum, comma list.
        #[arg(long)]
        a: Option<String>,
    },
    /// Congruence-conditioning experiments.
    Congruence {
        #[command(subcommand)]
        op: CongruenceOp,
    },
    /// Truncated singular series (and optional singular integral).
    Singular {
        #[arg(long, short = 's')]
        s: u32,
        #[arg(long, short = 'k')]
        k: u32,
        #[arg(long, short = 'q', default_value_t = 50)]
        q_cutoff: u64,
        /// Half-width of the integration box; enables the integral.
        #[arg(long = "box")]
        box_size: Option<f64>,
        /// Initial panels per half-axis for the integral.
        #[arg(long, default_value_t = 8)]
        grid: usize,
    },
    /// Exact representation count vs the heuristic main term.
    Waring {
        #[arg(long, short = 's')]
        s: u32,
        #[arg(long, short = 'k')]
        k: u32,
        #[arg(long, short = 'n')]
        n: u64,
        #[arg(long, short = 'q', default_value_t = 50)]
        q_cutoff: u64,
    },
    /// Equal-power-sum witness search and counting criterion.
    Tarry {
        #[command(subcommand)]
        op: TarryOp,
    },
    /// Exponent bounds and headline constants.
    Bounds {
        #[command(subcommand)]
        op: BoundsOp,
    },
    /// Run the invariant verification suite.
    Verify {
        /// quick | full
        #[arg(long, default_value = "quick")]
        level: String,
        /// Directory for long-run artifacts (full level).
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Sweep one variable, emitting a CSV (with a slope footer for counts).
    Sweep {
        /// count | singular
        #[arg(long)]
        target: String,
        #[arg(long, short = 'e', default_value = "1,2")]
        exponents: String,
        #[arg(long, short = 's')]
        s: u32,
        #[arg(long, short = 'k')]
        k: Option<u32>,
        /// Comma list of values for the swept variable (X or Q).
        #[arg(long)]
        values: String,
    },
    /// Execute an experiment described by a JSON config file.
    RunConfig {
        #[arg(long)]
        path: PathBuf,
    },
}

#[derive(Subcommand)]
enum CongruenceOp {
    /// Pairwise-incongruent lift patterns above a residue class.
    Tuples {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        c: u32,
        #[arg(long, default_value_t = 1)]
        xi: u64,
        #[arg(long)]
        k: u32,
    },
    /// Max conditioned-system solution count vs the factorial bound.
    Lemma41 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        a: u32,
        #[arg(long, default_value_t = 1)]
        b: u32,
    },
    /// Distinct-residue endpoint system vs the k! bound.
    D3 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        a: u32,
        #[arg(long, default_value_t = 1)]
        b: u32,
    },
    /// Per-target solution counts at fixed shifts and signs.
    Census {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        a: u32,
        #[arg(long, default_value_t = 1)]
        b: u32,
        #[arg(long, default_value_t = 1)]
        xi: u64,
        #[arg(long, default_value_t = 1)]
        eta: u64,
        /// Comma list of +-1 signs, one per variable.
        #[arg(long)]
        sigma: String,
    },
    /// Unique-lifting verification above a distinct-residue base.
    Lift {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        /// Comma list, pairwise distinct mod p.
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 0)]
        xi: u64,
    },
}

#[derive(Subcommand)]
enum TarryOp {
    /// Find tuple families with equal power sums, distinct at the top degree.
    Search {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 2)]
        h: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, short = 'x')]
        x: u64,
        /// Emit every qualifying class, not just the first.
        #[arg(long)]
        all: bool,
    },
    /// Compare J at consecutive degrees against the witness criterion.
    Criterion {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        t: u64,
        #[arg(long)]
        s: u32,
        #[arg(long, short = 'x')]
        x: u64,
    },
}

#[derive(Subcommand)]
enum BoundsOp {
    /// The seven headline constants at degree k.
    Table {
        #[arg(long)]
        k: u64,
    },
    /// The best available permissible exponent, exact.
    Exponent {
        #[arg(long, short = 's')]
        s: u32,
        #[arg(long, short = 'k')]
        k: u32,
    },
    /// Comparison of new vs prior variable counts, k = 7..20.
    GtildeTable,
}

fn interval_of(x: Option<u64>, start: i64, length: Option<u64>) -> Result<Interval> {
    match (x, length) {
        (Some(x), None) => Ok(Interval::new(1, x)),
        (None, Some(len)) => Ok(Interval::new(start, len)),
        _ => bail!("give exactly one of --x or --start/--length"),
    }
}

fn dispatch(cli: Cli, budget: Budget, out: &mut dyn Write) -> Result<Outcome> {
    match cli.command {
        Command::Count {
            exponents,
            s,
            x,
            start,
            length,
        } => commands::cmd_count(
            &commands::parse_exponents(&exponents)?,
            s,
            interval_of(x, start, length)?,
            budget,
            out,
        ),
        Command::Moment {
            exponents,
            s,
            x,
            start,
            length,
        } => commands::cmd_moment(
            &commands::parse_exponents(&exponents)?,
            s,
            interval_of(x, start, length)?,
            budget,
            out,
        ),
        Command::DftCheck { exponents, s, x } => {
            commands::cmd_dft_check(&commands::parse_exponents(&exponents)?, s, x, budget, out)
        }
        Command::Expsum {
            exponents,
            alpha,
            x,
            q,
            a,
        } => {
            let e_set = commands::parse_exponents(&exponents)?;
            let rational = match (q, a) {
                (Some(q), Some(a)) => Some((q, commands::parse_u64_list(&a)?)),
                (None, None) => None,
                _ => bail!("rational points need both --q and --a"),
            };
            let alpha: Vec<f64> = match alpha {
                Some(text) => text
                    .split(',')
                    .map(commands::parse_alpha)
                    .collect::<Result<_>>()?,
                None if rational.is_some() => vec![0.0; e_set.len()],
                None => bail!("give --alpha or a rational --q/--a point"),
            };
            commands::cmd_expsum(&e_set, &alpha, x, rational, out)
        }
        Command::Congruence { op } => match op {
            CongruenceOp::Tuples { p, c, xi, k } => {
                commands::cmd_congruence_tuples(p, c, xi, k, out)
            }
            CongruenceOp::Lemma41 { p, k, a, b } => {
                commands::cmd_congruence_lemma41(p, k, a, b, out)
            }
            CongruenceOp::D3 { p, k, a, b } => commands::cmd_congruence_d3(p, k, a, b, out),
            CongruenceOp::Census {
                p,
                k,
                a,
                b,
                xi,
                eta,
                sigma,
            } => {
                let params = vinlab::PrimeParams::new(
                    p,
                    k,
                    a,
                    b,
                    xi,
                    eta,
                    commands::parse_i8_list(&sigma)?,
                )?;
                commands::cmd_congruence_census(&params, out)
            }
            CongruenceOp::Lift { p, k, base, xi } => {
                commands::cmd_congruence_lift(p, k, &commands::parse_u64_list(&base)?, xi, out)
            }
        },
        Command::Singular {
            s,
            k,
            q_cutoff,
            box_size,
            grid,
        } => commands::cmd_singular(s, k, q_cutoff, box_size.map(|b| (b, grid)), out),
        Command::Waring { s, k, n, q_cutoff } => commands::cmd_waring(s, k, n, q_cutoff, out),
        Command::Tarry { op } => match op {
            TarryOp::Search { k, h, s, x, all } => {
                commands::cmd_tarry_search(k, h, s, x, all, out)
            }
            TarryOp::Criterion { k, t, s, x } => {
                commands::cmd_tarry_criterion(k, t, s, x, budget, out)
            }
        },
        Command::Bounds { op } => match op {
            BoundsOp::Table { k } => commands::cmd_bounds_table(k, out),
            BoundsOp::Exponent { s, k } => commands::cmd_bounds_exponent(s, k, out),
            BoundsOp::GtildeTable => commands::cmd_bounds_gtilde(out),
        },
        Command::Verify { level, out_dir } => {
            let level = match level.as_str() {
                "quick" => verify::Level::Quick,
                "full" => verify::Level::Full,
                other => bail!("unknown level '{other}' (quick | full)"),
            };
            verify::run(level, &out_dir, budget, out)
        }
        Command::Sweep {
            target,
            exponents,
            s,
            k,
            values,
        } => {
            let values = commands::parse_u64_list(&values)?;
            match target.as_str() {
                "count" => sweep::sweep_count(
                    &commands::parse_exponents(&exponents)?,
                    s,
                    &values,
                    budget,
                    out,
                ),
                "singular" => {
                    let k = k.ok_or_else(|| anyhow::anyhow!("singular sweep needs --k"))?;
                    sweep::sweep_singular(s, k, &values, out)
                }
                other => bail!("unknown sweep target '{other}' (count | singular)"),
            }
        }
        Command::RunConfig { path } => {
            let config = config::ExperimentConfig::load(&path)?;
            config::run(&config, budget, out)
        }
    }
}

fn main() {
    let cli = Cli::parse();

    // Thread count: the command line wins; a config file may also set it.
    let mut threads = cli.threads;
    if threads.is_none() {
        if let Command::RunConfig { path } = &cli.command {
            if let Ok(config) = config::ExperimentConfig::load(path) {
                threads = config.threads;
            }
        }
    }
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: thread pool already initialized: {e}");
        }
    }

    let budget = cli
        .budget_bytes
        .map(Budget::from_bytes)
        .unwrap_or_default();

    let mut file_out;
    let mut stdout = std::io::stdout();
    let code = {
        let out: &mut dyn Write = match &cli.out {
            Some(path) => match std::fs::File::create(path) {
                Ok(f) => {
                    file_out = f;
                    &mut file_out
                }
                Err(e) => {
                    eprintln!("error: cannot create {}: {e}", path.display());
                    std::process::exit(2);
                }
            },
            None => &mut stdout,
        };
        match dispatch(cli, budget, out) {
            Ok(Outcome::Pass) => 0,
            Ok(Outcome::AssertionFailed) => 1,
            Err(e) => {
                eprintln!("error: {e:#}");
                2
            }
        }
    };
    std::process::exit(code);
}
