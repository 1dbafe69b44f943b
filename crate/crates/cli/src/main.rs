use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cqed::config::Config;
use cqed::error::Result;
use cqed::runs::{self, OracleCompareConfig, PulseConfig, ScanConfig, SingleConfig};
use cqed::table::{num, write_sidecar};

#[derive(Parser)]
#[command(name = "cqed", version, about = "Two-photon scattering off a cavity-coupled two-level atom")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Key-value parameter file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV file for `scan`/`norms`, output directory for the other verbs.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for scan points (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Override the `tolerance` key.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Verb {
    /// |β−1| over a sweep of g²d/κ or κd.
    Scan,
    /// Output norms over a sweep, norm columns first.
    Norms,
    /// Eigenfrequencies, β, norms and wavefunctions at one point.
    Single,
    /// Analytic pipeline against the discretized-mode simulation.
    OracleCompare,
    /// Optimum pulse shape and Gaussian overlaps.
    Pulse,
}

enum Outcome {
    Ok,
    Flagged,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Flagged) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn load(cli: &Cli) -> Result<Config> {
    let mut c = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(t) = cli.tolerance {
        c.set("tolerance", &num(t));
    }
    Ok(c)
}

fn stem(cli: &Cli, c: &Config, verb: &str) -> String {
    c.raw("name")
        .map(str::to_string)
        .or_else(|| cli.config.as_ref().and_then(|p| p.file_stem()).map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_else(|| verb.to_string())
}

fn out_path(cli: &Cli, c: &Config, default: String) -> PathBuf {
    cli.out.clone().or_else(|| c.raw("output").map(PathBuf::from)).unwrap_or_else(|| PathBuf::from(default))
}

fn meta(cli: &Cli, verb: &str) -> Vec<(&'static str, String)> {
    vec![
        ("verb", verb.to_string()),
        ("version", env!("CARGO_PKG_VERSION").to_string()),
        ("config", cli.config.as_deref().map_or("-".into(), |p| p.display().to_string())),
        (
            "started_unix",
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_secs()).to_string(),
        ),
    ]
}

fn run(cli: &Cli) -> Result<Outcome> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| cqed::error::Error::Io(e.to_string()))?;
    }
    let c = load(cli)?;
    match cli.verb {
        Verb::Scan | Verb::Norms => {
            let norms = matches!(cli.verb, Verb::Norms);
            let verb = if norms { "norms" } else { "scan" };
            let cfg = ScanConfig::from_config(&c)?;
            let path = out_path(cli, &c, format!("{}.csv", stem(cli, &c, verb)));
            let result = if norms { runs::run_norms(&cfg) } else { runs::run_scan(&cfg) };
            result.table(norms).write(&path)?;
            let mut m = meta(cli, verb);
            m.push(("rows", result.rows.len().to_string()));
            m.push(("flagged", result.flagged().to_string()));
            write_sidecar(&path, &m)?;
            if cfg.plot {
                let column = if norms { "norm_out" } else { "abs_beta_minus_1" };
                let script = path.with_extension("gp");
                std::fs::write(&script, runs::gnuplot_script(&result, &path, column))?;
            }
            println!("{} rows -> {} ({} flagged)", result.rows.len(), path.display(), result.flagged());
            Ok(if result.flagged() > 0 { Outcome::Flagged } else { Outcome::Ok })
        }
        Verb::Single => {
            let cfg = SingleConfig::from_config(&c)?;
            let dir = out_path(cli, &c, stem(cli, &c, "single"));
            let r = runs::run_single(&cfg)?;
            println!("{r}");
            write_tables(cli, &dir, "single", &[("one_photon", &r.one_photon), ("two_photon", &r.two_photon)])?;
            Ok(if r.within_tolerance() { Outcome::Ok } else { Outcome::Flagged })
        }
        Verb::OracleCompare => {
            let cfg = OracleCompareConfig::from_config(&c)?;
            let dir = out_path(cli, &c, stem(cli, &c, "oracle-compare"));
            let r = runs::run_oracle_compare(&cfg)?;
            println!("one-photon relative L2 = {:e}", r.one.relative_l2);
            println!("two-photon relative L2 = {:e}", r.two_photon_l2);
            println!("beta analytic = {}  beta oracle = {}", r.beta_analytic, r.beta_oracle);
            println!("nonlinearity gap = {:e} (limit {:e})", r.nonlinearity_gap(), r.nonlinearity_limit());
            println!(
                "modes = {}  residual = {:e}  norm drift = {:e}",
                r.two_photon_modes, r.two_photon_residual, r.two_photon_drift
            );
            let tables = runs::comparison_tables(&r);
            let refs: Vec<_> = tables.iter().map(|(n, t)| (*n, t)).collect();
            write_tables(cli, &dir, "oracle-compare", &refs)?;
            Ok(if r.passes() { Outcome::Ok } else { Outcome::Flagged })
        }
        Verb::Pulse => {
            let cfg = PulseConfig::from_config(&c)?;
            let dir = out_path(cli, &c, stem(cli, &c, "pulse"));
            let r = runs::run_pulse(&cfg)?;
            println!("{r}");
            write_tables(cli, &dir, "pulse", &[("phi", &r.phi), ("overlap", &r.overlaps)])?;
            Ok(Outcome::Ok)
        }
    }
}

fn write_tables(cli: &Cli, dir: &Path, verb: &str, tables: &[(&str, &cqed::table::Table)]) -> Result<()> {
    for (name, t) in tables {
        let path = dir.join(format!("{name}.csv"));
        t.write(&path)?;
        write_sidecar(&path, &meta(cli, verb))?;
    }
    println!("wrote {} files to {}", tables.len(), dir.display());
    Ok(())
}
