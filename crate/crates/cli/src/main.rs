use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{Map, Value};

use inls_core::config::{RunConfig, SweepConfig};
use inls_core::exponents::{appendix_feasible, lemma31_feasible, FeasibilityReport};
use inls_core::groundstate::GroundStateCache;
use inls_core::runner::{self, CheckOptions};
use inls_core::{classify_regime, critical_exponents, PhysParams, RadialGrid, Sign};

#[derive(Parser)]
#[command(name = "inls", version, about = "Radial inhomogeneous NLS laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Critical exponents and feasibility reports as flat JSON.
    Exponents {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        alpha: f64,
    },
    /// Solve for the ground state and print it as CSV (r, Q).
    Groundstate {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 4096)]
        points: usize,
        #[arg(long = "r-max", default_value_t = 20.0)]
        r_max: f64,
        /// Write the CSV here and the JSON sidecar next to it instead of
        /// printing the CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evolve one configuration.
    Run { config: PathBuf },
    /// Evolve the Cartesian product of the sweep axes.
    Sweep { config: PathBuf },
    /// Reduced-resolution self-check.
    Check {
        #[arg(long, hide = true)]
        tamper_phi: bool,
    },
}

fn flatten(prefix: &str, v: Value, out: &mut Map<String, Value>) {
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                let key = if prefix.is_empty() {
                    k
                } else {
                    format!("{prefix}_{k}")
                };
                flatten(&key, v, out);
            }
        }
        other => {
            out.insert(prefix.to_string(), other);
        }
    }
}

fn feasibility_json(
    prefix: &str,
    r: inls_core::Result<FeasibilityReport>,
    out: &mut Map<String, Value>,
) {
    match r {
        Ok(rep) => flatten(
            prefix,
            serde_json::to_value(rep).unwrap_or(Value::Null),
            out,
        ),
        Err(e) => {
            out.insert(format!("{prefix}_feasible"), Value::Bool(false));
            out.insert(format!("{prefix}_error"), Value::String(e.to_string()));
        }
    }
}

fn exponents(n: u32, b: f64, alpha: f64) -> inls_core::Result<Value> {
    let params = PhysParams::new(n, b, alpha, Sign::Focusing)?;
    let mut out = Map::new();
    flatten(
        "",
        serde_json::to_value(critical_exponents(&params)?)?,
        &mut out,
    );
    out.insert(
        "regime".into(),
        Value::String(classify_regime(&params)?.as_str().into()),
    );
    let lemma = if n == 2 {
        lemma31_feasible(b, alpha)
    } else {
        Err(inls_core::Error::OutOfScope(
            "two-dimensional estimate needs N = 2".into(),
        ))
    };
    feasibility_json("lemma31", lemma, &mut out);
    feasibility_json("appendix", appendix_feasible(&params), &mut out);
    Ok(Value::Object(out))
}

fn groundstate(
    n: u32,
    b: f64,
    alpha: f64,
    tol: f64,
    points: usize,
    r_max: f64,
    out: Option<PathBuf>,
) -> inls_core::Result<()> {
    let params = PhysParams::new(n, b, alpha, Sign::Focusing)?;
    let grid = RadialGrid::new(n, points, r_max)?;
    let profile = GroundStateCache::from_env().load_or_solve(&params, &grid, tol)?;
    match out {
        Some(path) => {
            let mut csv = Vec::new();
            profile.write_csv(&mut csv)?;
            fs::write(&path, csv)?;
            let sidecar = serde_json::to_string_pretty(&profile.summary())? + "\n";
            fs::write(path.with_extension("json"), &sidecar)?;
            print!("{sidecar}");
        }
        None => profile.write_csv(std::io::stdout().lock())?,
    }
    Ok(())
}

fn read(path: &PathBuf) -> inls_core::Result<String> {
    fs::read_to_string(path)
        .map_err(|e| inls_core::Error::Config(format!("cannot read {}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = GroundStateCache::from_env();
    let result: inls_core::Result<u8> = match cli.command {
        Command::Exponents { n, b, alpha } => exponents(n, b, alpha).map(|v| {
            println!("{v}");
            0
        }),
        Command::Groundstate {
            n,
            b,
            alpha,
            tol,
            points,
            r_max,
            out,
        } => groundstate(n, b, alpha, tol, points, r_max, out).map(|_| 0),
        Command::Run { config } => read(&config)
            .and_then(|t| RunConfig::parse(&t))
            .and_then(|cfg| runner::run(&cfg, &cache).map(|rep| (cfg, rep)))
            .map(|(cfg, rep)| {
                println!(
                    "outcome {} verdict {} ({})",
                    rep.outcome().as_str(),
                    rep.verdict.as_str(),
                    cfg.output_dir.display()
                );
                rep.exit_code() as u8
            }),
        Command::Sweep { config } => read(&config)
            .and_then(|t| SweepConfig::parse(&t))
            .and_then(|cfg| runner::sweep(&cfg, &cache))
            .map(|rows| {
                println!("{} points", rows.len());
                0
            }),
        Command::Check { tamper_phi } => {
            runner::check(&CheckOptions { tamper_phi }, &cache).map(|rep| {
                print!("{}", rep.table());
                if rep.all_passed() {
                    0
                } else {
                    1
                }
            })
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
