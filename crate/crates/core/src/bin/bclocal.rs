use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bclocal::cli::{self, parse_betas, parse_levels, OutputFormat, RunConfig, Session};
use bclocal::Error;

const EXIT_FAIL: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "bclocal", version, about = "Finite-level verification runs for local Bost-Connes systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orbit decomposition, balancing and dimension identity.
    Levels(Opts),
    /// Partition function, KMS residuals, Gibbs limits and Galois orbits.
    Kms(Opts),
    /// K_0 quotient and the window K_1 check.
    Ktheory(Opts),
    /// Quasi-orbit labels and the specialization table.
    Prim(Opts),
    /// Zeta partial sums, induced masses and the induction round trip.
    Induce(Opts),
    /// Every command above.
    All(Opts),
}

#[derive(clap::Args, Default)]
struct Opts {
    /// TOML config with top-level keys and per-command sections.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Local field, e.g. Q2, Q3[x^2-3], Q2u2:x^2+x+1.
    #[arg(long)]
    field: Option<String>,
    /// Levels n:m[,n:m...].
    #[arg(long)]
    levels: Option<String>,
    /// Inverse temperatures, comma separated, or "inf".
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Matrix-model truncation.
    #[arg(long = "N")]
    truncation: Option<usize>,
    /// Dirichlet series bound.
    #[arg(long = "B")]
    bound: Option<u64>,
    #[arg(long)]
    window: Option<u32>,
    /// Global field: Q, Q(i), Q(sqrt:d).
    #[arg(long)]
    global: Option<String>,
    #[arg(long)]
    p: Option<u64>,
    /// Divergence target for beta <= 1.
    #[arg(long, allow_hyphen_values = true)]
    target: Option<f64>,
    /// json, csv or markdown.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    max_n: Option<u32>,
    #[arg(long)]
    max_m: Option<u32>,
    #[arg(long)]
    max_q: Option<u64>,
    #[arg(long)]
    max_carrier: Option<u64>,
}

fn build_config(name: &str, o: &Opts) -> Result<RunConfig, Error> {
    let mut cfg = match &o.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::from_toml(&text, name)?
        }
        None => RunConfig::default(),
    };
    if let Some(v) = &o.field {
        cfg.field = v.clone();
    }
    if let Some(v) = &o.levels {
        cfg.levels = parse_levels(v)?;
    }
    if let Some(v) = &o.beta {
        cfg.betas = parse_betas(v)?;
    }
    if let Some(v) = o.truncation {
        cfg.truncation = v;
    }
    if let Some(v) = o.bound {
        cfg.bound = v;
    }
    if let Some(v) = o.window {
        cfg.window = Some(v);
    }
    if let Some(v) = &o.global {
        cfg.global = v.clone();
    }
    if let Some(v) = o.p {
        cfg.prime = v;
    }
    if let Some(v) = o.target {
        cfg.target = v;
    }
    if let Some(v) = &o.format {
        cfg.format = v.parse::<OutputFormat>()?;
    }
    if let Some(v) = &o.out {
        cfg.out = Some(v.clone());
    }
    if let Some(v) = o.max_n {
        cfg.guard.max_n = v;
    }
    if let Some(v) = o.max_m {
        cfg.guard.max_m = v;
    }
    if let Some(v) = o.max_q {
        cfg.guard.max_q = v;
    }
    if let Some(v) = o.max_carrier {
        cfg.guard.max_carrier = v;
    }
    Ok(cfg)
}

fn run(name: &str, session: &Session) -> Result<(String, bool), Error> {
    let format = session.config.format;
    let (text, pass) = match name {
        "levels" => cli::cmd_levels(session).map(|r| (r.render(format), r.pass))?,
        "kms" => cli::cmd_kms(session).map(|r| (r.render(format), r.pass))?,
        "ktheory" => cli::cmd_ktheory(session).map(|r| (r.render(format), r.pass))?,
        "prim" => cli::cmd_prim(session).map(|r| (r.render(format), r.pass))?,
        "induce" => cli::cmd_induce(session).map(|r| (r.render(format), r.pass))?,
        _ => cli::cmd_all(session).map(|r| (r.render(format), r.pass))?,
    };
    Ok((text, pass))
}

fn main() -> ExitCode {
    let parsed = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let (name, opts) = match &parsed.command {
        Command::Levels(o) => ("levels", o),
        Command::Kms(o) => ("kms", o),
        Command::Ktheory(o) => ("ktheory", o),
        Command::Prim(o) => ("prim", o),
        Command::Induce(o) => ("induce", o),
        Command::All(o) => ("all", o),
    };
    let session = match build_config(name, opts).and_then(Session::new) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let (text, pass) = match run(name, &session) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAIL);
        }
    };
    match &session.config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_FAIL);
            }
        }
        None => print!("{text}"),
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: {name} checks failed");
        ExitCode::from(EXIT_FAIL)
    }
}
