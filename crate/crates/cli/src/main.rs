mod commands;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use serde_json::json;
use x0p2::arakelov::GreenMode;
use x0p2::quadforms::default_class_bound;

use output::{emit, Format, Report, Table};
use verify::{Settings, Status, Suite};

/// Reports on X_0(p^2): level data, special fibers, scattering and quadratic-form
/// checks, and the asymptotic assembly of omega^2.
#[derive(Parser)]
#[command(name = "x0p2", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Genus, cusps, volume, index, c and s_p.
    Info {
        #[arg(long)]
        prime: u64,
    },
    /// Edixhoven's special fiber at p, optionally contracted to the minimal model.
    Fiber {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        minimal: bool,
    },
    /// omega^2 for one prime against 3 g log(p^2).
    Omega {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value = "main_term")]
        mode: GreenMode,
    },
    /// Run invariant checks; exits non-zero if any fails.
    Verify {
        #[arg(long)]
        prime: u64,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Truncation bound: lattice box for the Eisenstein identity and search box
        /// for quadratic-form classes.
        #[arg(long)]
        bound: Option<u64>,
        /// Tolerance for the Eisenstein lattice identity.
        #[arg(long, env = "X0P2_PRECISION", default_value_t = 1e-6)]
        precision: f64,
    },
    /// omega^2 over all primes in [pmin, pmax].
    Scan {
        #[arg(long)]
        pmin: u64,
        #[arg(long)]
        pmax: u64,
        #[arg(long, default_value = "main_term")]
        mode: GreenMode,
    },
}

const LATTICE_BOUND: u64 = 300;

fn run(cli: &Cli) -> Result<bool> {
    let report = match &cli.command {
        Command::Info { prime } => commands::info(*prime)?,
        Command::Fiber { prime, minimal } => commands::fiber(*prime, *minimal)?,
        Command::Omega { prime, mode } => commands::omega(*prime, *mode)?,
        Command::Scan { pmin, pmax, mode } => commands::scan_range(*pmin, *pmax, *mode)?,
        Command::Verify {
            prime,
            suite,
            bound,
            precision,
        } => {
            let settings = Settings {
                prime: *prime,
                lattice_bound: bound.unwrap_or(LATTICE_BOUND),
                class_bound: bound.unwrap_or_else(|| default_class_bound(*prime)),
                precision: *precision,
            };
            let checks = verify::run(*suite, &settings)?;
            let failures: Vec<String> = checks
                .iter()
                .filter(|c| c.status == Status::Fail)
                .map(|c| format!("[{}] {}", c.suite, c.name))
                .collect();
            let mut table = Table::new(["suite", "check", "status", "residual", "tolerance", "detail"]);
            for c in &checks {
                let opt = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
                table.push([
                    c.suite.to_string(),
                    c.name.clone(),
                    format!("{:?}", c.status).to_lowercase(),
                    opt(c.residual),
                    opt(c.tolerance),
                    c.detail.clone(),
                ]);
            }
            let mut rep = Report::new(
                "verify",
                json!({ "suite": suite, "settings": settings }),
                json!({ "passed": failures.is_empty(), "checks": checks }),
            )?;
            rep.text = verify::summary(&checks);
            rep.table = table;
            emit(&rep.render(cli.format)?, cli.out.as_deref())?;
            if !failures.is_empty() {
                eprintln!("failed checks:");
                for f in &failures {
                    eprintln!("  {f}");
                }
            }
            return Ok(failures.is_empty());
        }
    };
    emit(&report.render(cli.format)?, cli.out.as_deref())?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
