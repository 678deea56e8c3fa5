//! `bgg-lab <command> [--flag value]*`

mod commands;
mod config;
mod error;
mod verify;

use bgg_core::principal::SplitCartan;
use bgg_core::report::Format;
use clap::{Parser, Subcommand};
use commands::{Method, Precision, TridiagArgs};
use config::RunConfig;
use error::CliError;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "bgg-lab", version, about = "SU(3) Gelfand-Tsetlin, principal series and BGG checks")]
struct Cli {
    /// Directory for cached irreps.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Largest irrep span `m1 - m3` to build.
    #[arg(long, global = true, default_value_t = 6)]
    span: i64,
    /// Tolerance for floating point checks.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_double: f64,
    #[arg(long, global = true, default_value = "csv", value_parser = parse_format)]
    format: Format,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: bgg_core::Error| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension, weights and s1-strings of one irrep.
    Rep {
        /// `m1,m2,m3`
        #[arg(allow_hyphen_values = true)]
        label: String,
        #[arg(long)]
        weights: bool,
    },
    /// Overlap table `a_(m,j,k)` next to its Legendre approximation.
    Overlap {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        kmax: i64,
        #[arg(long)]
        check_oracle: bool,
        #[arg(long, value_enum, default_value = "double")]
        recurrence: Precision,
    },
    /// Phase pairings against their large-m limits.
    Limit {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
        k: Vec<i64>,
        #[arg(long, value_delimiter = ',', default_value = "100,500,2000")]
        m: Vec<i64>,
        #[arg(long, value_enum, default_value = "sum")]
        method: Method,
    },
    /// Band norms of `U_mu(A)` in s_i-types.
    Tridiag {
        /// `mu(H1),mu(H2)`; default is the box |mu(H_i)| <= 3.
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long, default_value_t = 1)]
        i: usize,
        /// Traceless diagonal `a1,a2,a3`; default is H1.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Report the reflection intertwiner residual instead.
        #[arg(long)]
        intertwiner: bool,
    },
    /// Alternating multiplicity sums over the Weyl group.
    Index {
        #[arg(long, default_value_t = 4)]
        lambda_max: i64,
        #[arg(long, default_value_t = 8)]
        pi_span: i64,
    },
    /// Support of `B' B - 1` on the simple BGG edges.
    Defect {
        /// Dominant `lambda(H1),lambda(H2)`.
        #[arg(long, default_value = "0,0")]
        lambda: String,
    },
    /// Run a check battery and print a JSON summary.
    Verify {
        #[arg(value_enum, default_value = "all")]
        suite: verify::Suite,
    },
}

fn parse_split(s: &str) -> Result<SplitCartan, CliError> {
    let v: Result<Vec<f64>, _> = s.split(',').map(|x| x.trim().parse::<f64>()).collect();
    match v {
        Ok(v) if v.len() == 3 => Ok(SplitCartan::from_diag([v[0], v[1], v[2]])?),
        _ => Err(CliError::Usage(format!("--a must be three comma-separated numbers, got {s:?}"))),
    }
}

fn run(cli: &Cli, cfg: &RunConfig, out: &mut Vec<u8>) -> Result<(), CliError> {
    match &cli.command {
        Command::Rep { label, weights } => commands::rep(cfg, out, label, *weights),
        Command::Overlap { m, kmax, check_oracle, recurrence } => {
            commands::overlap(cfg, out, *m, *kmax, *check_oracle, *recurrence)
        }
        Command::Limit { k, m, method } => commands::limit(cfg, out, k, m, *method),
        Command::Tridiag { mu, i, a, intertwiner } => {
            let args = TridiagArgs {
                mu: mu.as_deref().map(commands::parse_mu).transpose()?,
                i: *i,
                a: a.as_deref().map(parse_split).transpose()?.unwrap_or_else(SplitCartan::h1),
                intertwiner: *intertwiner,
            };
            commands::tridiag(cfg, out, &args)
        }
        Command::Index { lambda_max, pi_span } => commands::index(cfg, out, *lambda_max, *pi_span),
        Command::Defect { lambda } => {
            let v = commands::parse_ints(lambda, 2, "--lambda")?;
            commands::defect(cfg, out, (v[0], v[1]))
        }
        Command::Verify { suite } => verify::run(cfg, out, *suite),
    }
}

fn flush(cli: &Cli, bytes: &[u8]) -> Result<(), CliError> {
    match &cli.out {
        Some(p) => std::fs::write(p, bytes)?,
        None => {
            let mut o = std::io::stdout().lock();
            o.write_all(bytes)?;
            o.flush()?;
        }
    }
    Ok(())
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.record());
    ExitCode::from(e.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            eprint!("{e}");
            return fail(&CliError::Usage(e.kind().to_string()));
        }
    };
    let cfg = match RunConfig::new(cli.cache_dir.clone(), cli.span, cli.tol_double, cli.format, cli.threads) {
        Ok(c) => c,
        Err(m) => return fail(&CliError::Usage(m)),
    };
    #[cfg(feature = "parallel")]
    if cfg.threads > 1 {
        // Only fails if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global();
    }
    let mut out = Vec::new();
    let result = run(&cli, &cfg, &mut out);
    if let Err(e) = flush(&cli, &out) {
        return fail(&e);
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
