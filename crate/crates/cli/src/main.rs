use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use polyprog_cli::commands::{self, SignalKind};
use polyprog_cli::config::{Config, Format};
use polyprog_cli::report::{num, Report, Table};
use polyprog_cli::verify::{run_all, VerifyOptions};

#[derive(Parser)]
#[command(name = "polyprog", version, about = "Algebraic complexity of polynomial progressions")]
struct Cli {
    #[command(flatten)]
    global: Overrides,
    #[command(subcommand)]
    command: Command,
}

/// Settings that override the config file.
#[derive(Args)]
struct Overrides {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Relation degree cap.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Modulus schedule, e.g. `--N 101,809`; for `weyl`, the sampling range.
    #[arg(long = "N", global = true, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Density of seeded random subsets.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Worker thread cap.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write reports into this directory instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Homogeneity, graded spaces, complexities and eligibility.
    Analyze { progression: String },
    /// A basis of the relation space.
    Relations { progression: String },
    /// Polynomial count against its linear model across the N schedule.
    Count {
        progression: String,
        /// Subset file, one residue per line.
        #[arg(long)]
        subset: Option<PathBuf>,
    },
    /// Gowers norm table.
    Gowers {
        #[arg(long, value_enum, default_value = "random")]
        signal: SignalKind,
        #[arg(long)]
        subset: Option<PathBuf>,
    },
    /// Popular common differences.
    Popdiff {
        progression: String,
        #[arg(long)]
        subset: Option<PathBuf>,
    },
    /// Orbit closure and character table for a Weyl scenario file.
    Weyl { scenario: PathBuf },
    /// The acceptance suite.
    Verify {
        /// Criteria to run, e.g. `--only 1,7`.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
        /// Directory with the section-8 scenario files.
        #[arg(long)]
        scenarios: Option<PathBuf>,
    },
}

fn resolve(o: &Overrides) -> Result<Config> {
    let mut cfg = match &o.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    cfg.cap = o.cap.or(cfg.cap);
    if let Some(n) = &o.n {
        cfg.n = n.clone();
    }
    cfg.seed = o.seed.unwrap_or(cfg.seed);
    cfg.epsilon = o.epsilon.unwrap_or(cfg.epsilon);
    cfg.alpha = o.alpha.unwrap_or(cfg.alpha);
    cfg.threads = o.threads.or(cfg.threads);
    cfg.out = o.out.clone().or(cfg.out);
    cfg.format = o.format.unwrap_or(cfg.format);
    cfg.validate()?;
    Ok(cfg)
}

fn verify(cfg: &Config, only: Vec<usize>, scenarios: Option<PathBuf>) -> Result<Report> {
    let opts = VerifyOptions { seed: cfg.seed, scenarios: scenarios.or(cfg.scenarios.clone()), only };
    let results = run_all(&opts, |r| eprintln!("{}", r.line()))?;
    let passed = results.iter().all(|r| r.passed);
    let mut table = Table::new("criteria", &["id", "name", "passed", "limit_secs", "detail"]);
    for r in &results {
        table.push(vec![r.id.to_string(), r.name.into(), r.passed.to_string(), num(r.limit_secs), r.detail.clone()]);
    }
    eprintln!("{} of {} criteria passed", results.iter().filter(|r| r.passed).count(), results.len());
    Ok(Report::new("verify", &results)?.with_table(table).with_verdict(passed))
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = resolve(&cli.global)?;
    if let Some(t) = cfg.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let report = match cli.command {
        Command::Analyze { progression } => commands::analyze(&progression, &cfg)?,
        Command::Relations { progression } => commands::relations(&progression, &cfg)?,
        Command::Count { progression, subset } => commands::count(&progression, &cfg, subset.as_deref())?,
        Command::Gowers { signal, subset } => commands::gowers(&cfg, signal, subset.as_deref())?,
        Command::Popdiff { progression, subset } => commands::popdiff(&progression, &cfg, subset.as_deref())?,
        Command::Weyl { scenario } => {
            let n = cli.global.n.as_ref().and_then(|v| v.first().copied());
            commands::weyl(&scenario, n)?
        }
        Command::Verify { only, scenarios } => verify(&cfg, only, scenarios)?,
    };
    report.emit(cfg.format, cfg.out.as_deref(), &mut std::io::stdout().lock())?;
    Ok(report.passed.unwrap_or(true))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}
