//! The experiment drivers behind the command-line verbs.

use std::fmt;
use std::path::{Path, PathBuf};

use cqed_core::params::{PulseParams, SystemParams};
use cqed_core::propagators::TwoPhotonKernel;
use cqed_core::pulse::{overlap_scan, GaussianPulse, OptimumPulse, OverlapOptimum};
use cqed_core::scattering::{
    analyze, window_rate, BetaReport, Grid1D, GridOptions, OnePhotonOutput, TwoPhotonScattering, Wavefunction2D,
};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::oracle::compare::{compare, ComparisonReport};
use crate::oracle::{Integrator, OracleSettings};
use crate::table::{num, wavefunction_1d, wavefunction_2d, Table};

/// Speed of light in m/s, for converting pulse lengths to metres.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// `|β| ≤ 1` up to this slack.
pub const SCHWARZ_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    /// `g²d/κ`
    G2dOverKappa,
    /// `κd`
    KappaD,
}

impl Sweep {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "g2d_over_kappa" => Ok(Self::G2dOverKappa),
            "kappa_d" => Ok(Self::KappaD),
            _ => Err(Error::Config { line: 0, message: format!("unknown sweep `{s}`") }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::G2dOverKappa => "g2d_over_kappa",
            Self::KappaD => "kappa_d",
        }
    }

    /// Pulse length for sweep value `s`.
    pub fn length(self, s: f64, g: f64, kappa: f64) -> f64 {
        match self {
            Self::G2dOverKappa => s * kappa / (g * g),
            Self::KappaD => s / kappa,
        }
    }
}

/// Dimensionless point `(κ/g, q/g, γ/g)` at coupling `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curve {
    pub kappa_over_g: f64,
    pub q_over_g: f64,
    pub gamma_over_g: f64,
}

impl Curve {
    pub fn system(&self, g: f64) -> Result<SystemParams> {
        Ok(SystemParams::resonant(g, self.kappa_over_g * g, self.gamma_over_g * g)?)
    }
}

const GRID_KEYS: [&str; 4] = ["points_per_scale", "tail_factor", "sigmas", "truncation_tolerance"];

fn grid_options(c: &Config) -> Result<GridOptions> {
    let d = GridOptions::default();
    Ok(GridOptions {
        points_per_scale: c.get_or("points_per_scale", d.points_per_scale)?,
        tail_factor: c.get_or("tail_factor", d.tail_factor)?,
        sigmas: c.get_or("sigmas", d.sigmas)?,
        truncation_tolerance: c.get_or("truncation_tolerance", d.truncation_tolerance)?,
    })
}

fn list_or(c: &Config, key: &str, default: f64) -> Result<Vec<f64>> {
    Ok(c.list(key)?.unwrap_or_else(|| vec![default]))
}

/// Parameter scan over one sweep variable.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub g: f64,
    pub curves: Vec<Curve>,
    pub sweep: Sweep,
    pub sweep_min: f64,
    pub sweep_max: f64,
    pub points: usize,
    pub log_spacing: bool,
    pub grid: GridOptions,
    /// Largest accepted `β` error estimate.
    pub tolerance: f64,
    pub output: Option<PathBuf>,
    pub plot: bool,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-4;

impl ScanConfig {
    pub fn from_config(c: &Config) -> Result<Self> {
        let mut known =
            vec!["g", "kappa_over_g", "q_over_g", "gamma_over_g", "sweep", "sweep_min", "sweep_max", "points"];
        known.extend(["spacing", "tolerance", "output", "plot", "name"]);
        known.extend(GRID_KEYS);
        c.check_keys(&known)?;
        let sweep = Sweep::parse(c.raw("sweep").ok_or(Error::Config { line: 0, message: "missing `sweep`".into() })?)?;
        let mut curves = Vec::new();
        for k in list_or(c, "kappa_over_g", 5.0)? {
            for q in list_or(c, "q_over_g", 0.0)? {
                for gm in list_or(c, "gamma_over_g", 0.0)? {
                    curves.push(Curve { kappa_over_g: k, q_over_g: q, gamma_over_g: gm });
                }
            }
        }
        let spacing = c.raw("spacing").unwrap_or("log");
        let cfg = Self {
            g: c.get_or("g", 1.0)?,
            curves,
            sweep,
            sweep_min: c.require("sweep_min")?,
            sweep_max: c.require("sweep_max")?,
            points: c.require("points")?,
            log_spacing: match spacing {
                "log" => true,
                "linear" => false,
                s => return Err(Error::Config { line: 0, message: format!("unknown spacing `{s}`") }),
            },
            grid: grid_options(c)?,
            tolerance: c.get_or("tolerance", DEFAULT_TOLERANCE)?,
            output: c.raw("output").map(PathBuf::from),
            plot: c.get_or("plot", false)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config { line: 0, message: m });
        if !(self.g > 0.0) {
            return bad(format!("g must be positive, got {}", self.g));
        }
        if self.points < 1 || !(self.sweep_min > 0.0) || !(self.sweep_max >= self.sweep_min) {
            return bad(format!("bad sweep range [{}, {}] × {}", self.sweep_min, self.sweep_max, self.points));
        }
        for c in &self.curves {
            c.system(self.g)?;
        }
        Ok(())
    }

    /// Sweep values in ascending order.
    pub fn sweep_values(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.sweep_min];
        }
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if self.log_spacing {
                    (self.sweep_min.ln() + t * (self.sweep_max / self.sweep_min).ln()).exp()
                } else {
                    self.sweep_min + t * (self.sweep_max - self.sweep_min)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    /// The point ran but missed a tolerance.
    Flagged(String),
    Failed(String),
}

impl RowStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, RowStatus::Ok)
    }

    fn label(&self) -> String {
        let clean = |s: &str| s.replace([',', '\n'], ";");
        match self {
            RowStatus::Ok => "ok".into(),
            RowStatus::Flagged(m) => format!("flagged: {}", clean(m)),
            RowStatus::Failed(m) => format!("error: {}", clean(m)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub curve: Curve,
    pub g2d_over_kappa: f64,
    pub kappa_d: f64,
    pub report: Option<BetaReport>,
    pub status: RowStatus,
}

impl ScanRow {
    pub fn nonlinearity(&self) -> f64 {
        self.report.map_or(f64::NAN, |r| r.nonlinearity())
    }

    pub fn beta(&self) -> C64 {
        self.report.map_or(C64::new(f64::NAN, f64::NAN), |r| r.beta)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub config: ScanConfig,
    pub rows: Vec<ScanRow>,
}

impl ScanResult {
    pub fn flagged(&self) -> usize {
        self.rows.iter().filter(|r| !r.status.is_ok()).count()
    }

    /// Rows of one curve, in sweep order.
    pub fn curve(&self, c: &Curve) -> Vec<&ScanRow> {
        self.rows.iter().filter(|r| r.curve == *c).collect()
    }

    pub fn sweep_value(&self, r: &ScanRow) -> f64 {
        match self.config.sweep {
            Sweep::G2dOverKappa => r.g2d_over_kappa,
            Sweep::KappaD => r.kappa_d,
        }
    }

    /// With `norms_first` the norm columns follow the parameters directly.
    pub fn table(&self, norms_first: bool) -> Table {
        let params = ["kappa_over_g", "q_over_g", "gamma_over_g", "g2d_over_kappa", "kappa_d"];
        let beta = ["re_beta", "im_beta", "abs_beta_minus_1", "abs_beta", "beta_error"];
        let norms = ["norm_out", "norm_linear", "norm_one_photon"];
        let mut header: Vec<&str> = params.to_vec();
        let (first, second) = if norms_first { (&norms[..], &beta[..]) } else { (&beta[..], &norms[..]) };
        header.extend(first);
        header.extend(second);
        header.push("status");
        let mut t = Table::new(&header);
        for r in &self.rows {
            let nan = f64::NAN;
            let rep = r.report;
            let b = rep.map_or([nan; 5], |x| [x.beta.re, x.beta.im, x.nonlinearity(), x.beta.norm(), x.beta_error]);
            let n = rep.map_or([nan; 3], |x| [x.norm_out, x.norm_linear, x.norm_one_photon]);
            let mut cells: Vec<String> =
                [r.curve.kappa_over_g, r.curve.q_over_g, r.curve.gamma_over_g, r.g2d_over_kappa, r.kappa_d]
                    .iter()
                    .map(|&x| num(x))
                    .collect();
            let (f, s): (&[f64], &[f64]) = if norms_first { (&n, &b) } else { (&b, &n) };
            cells.extend(f.iter().chain(s).map(|&x| num(x)));
            cells.push(r.status.label());
            t.push(cells);
        }
        t
    }
}

fn scan_point(cfg: &ScanConfig, curve: Curve, s: f64) -> ScanRow {
    let g = cfg.g;
    let kappa = curve.kappa_over_g * g;
    let d = cfg.sweep.length(s, g, kappa);
    let mut row =
        ScanRow { curve, g2d_over_kappa: g * g * d / kappa, kappa_d: kappa * d, report: None, status: RowStatus::Ok };
    let run = || -> Result<BetaReport> {
        let p = curve.system(g)?;
        let pulse = PulseParams::at_default_position(curve.q_over_g * g, d)?;
        Ok(analyze(&p, &pulse, &cfg.grid)?)
    };
    match run() {
        Ok(rep) => {
            let finite =
                [rep.beta.re, rep.beta.im, rep.beta_error, rep.norm_out, rep.norm_linear].iter().all(|x| x.is_finite());
            row.status = if !finite {
                RowStatus::Flagged("non-finite result".into())
            } else if rep.beta.norm() > 1.0 + SCHWARZ_SLACK {
                RowStatus::Flagged(format!("|beta| = {} exceeds 1", rep.beta.norm()))
            } else if rep.beta_error > cfg.tolerance {
                RowStatus::Flagged(format!("beta error {:e} above {:e}", rep.beta_error, cfg.tolerance))
            } else {
                RowStatus::Ok
            };
            row.report = Some(rep);
        }
        Err(e) => row.status = RowStatus::Failed(e.to_string()),
    }
    row
}

/// `β` over the sweep for every curve. Points run in parallel; rows come
/// out ordered by sweep value, then by curve in configuration order.
pub fn run_scan(cfg: &ScanConfig) -> ScanResult {
    let jobs: Vec<(f64, Curve)> =
        cfg.sweep_values().into_iter().flat_map(|s| cfg.curves.iter().map(move |c| (s, *c))).collect();
    let rows = jobs.into_par_iter().map(|(s, c)| scan_point(cfg, c, s)).collect();
    ScanResult { config: cfg.clone(), rows }
}

/// Same computation as [`run_scan`]; the norm columns lead in the CSV.
pub fn run_norms(cfg: &ScanConfig) -> ScanResult {
    run_scan(cfg)
}

/// Gnuplot script plotting one column against the sweep variable, one line
/// per curve.
pub fn gnuplot_script(result: &ScanResult, csv: &Path, column: &str) -> String {
    let t = result.table(false);
    let col = |name: &str| t.header.iter().position(|h| h == name).map_or(1, |i| i + 1);
    let x = col(result.config.sweep.name());
    let y = col(column);
    let mut s = String::new();
    s.push_str("set datafile separator ','\nset key autotitle columnhead\n");
    if result.config.log_spacing {
        s.push_str("set logscale x\n");
    }
    s.push_str(&format!("set xlabel '{}'\nset ylabel '{}'\nplot \\\n", result.config.sweep.name(), column));
    let (kc, qc, gc) = (col("kappa_over_g"), col("q_over_g"), col("gamma_over_g"));
    let lines: Vec<String> = result
        .config
        .curves
        .iter()
        .map(|c| {
            format!(
                "  '{}' using (abs(${kc}-{k})<1e-12 && abs(${qc}-{q})<1e-12 && abs(${gc}-{gm})<1e-12 ? ${x} : 1/0):{y} with linespoints title 'kappa/g={k} q/g={q} gamma/g={gm}'",
                csv.display(),
                k = c.kappa_over_g,
                q = c.q_over_g,
                gm = c.gamma_over_g
            )
        })
        .collect();
    s.push_str(&lines.join(", \\\n"));
    s.push('\n');
    s
}

/// How a single-point configuration fixes the pulse length.
fn pulse_length(c: &Config, g: f64, kappa: f64) -> Result<f64> {
    let given: Vec<&str> = ["g2d_over_kappa", "kappa_d", "d"].into_iter().filter(|k| c.contains(k)).collect();
    if given.len() != 1 {
        return Err(Error::Config {
            line: 0,
            message: "exactly one of `g2d_over_kappa`, `kappa_d`, `d` is required".into(),
        });
    }
    let v: f64 = c.require(given[0])?;
    Ok(match given[0] {
        "g2d_over_kappa" => Sweep::G2dOverKappa.length(v, g, kappa),
        "kappa_d" => Sweep::KappaD.length(v, g, kappa),
        _ => v,
    })
}

/// Physical rates in s⁻¹ for unit conversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalUnits {
    pub g_hz: f64,
    pub kappa_hz: f64,
}

impl PhysicalUnits {
    /// Length in metres of a pulse `d` measured in units of `1/g`.
    pub fn metres(&self, d_over_inverse_g: f64) -> f64 {
        d_over_inverse_g * SPEED_OF_LIGHT / self.g_hz
    }
}

/// One parameter point: system, pulse and optional physical units.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleConfig {
    pub system: SystemParams,
    /// Carrier detuning.
    pub q: f64,
    pub d: f64,
    pub units: Option<PhysicalUnits>,
    pub grid: GridOptions,
    pub tolerance: f64,
    /// Largest grid size per axis in the exported two-photon CSV.
    pub export_points: usize,
}

const POINT_KEYS: [&str; 8] =
    ["g", "kappa_over_g", "q_over_g", "gamma_over_g", "g2d_over_kappa", "kappa_d", "d", "name"];

/// Absolute rates, for points where ratios to `g` are undefined (`g = 0`).
const ABSOLUTE_KEYS: [&str; 3] = ["kappa", "gamma", "q"];

impl SingleConfig {
    pub fn from_config(c: &Config) -> Result<Self> {
        let mut known = POINT_KEYS.to_vec();
        known.extend(ABSOLUTE_KEYS);
        known.extend(["g_hz", "kappa_hz", "tolerance", "export_points", "output"]);
        known.extend(GRID_KEYS);
        c.check_keys(&known)?;
        let units = match (c.get::<f64>("g_hz")?, c.get::<f64>("kappa_hz")?) {
            (Some(g_hz), Some(kappa_hz)) => Some(PhysicalUnits { g_hz, kappa_hz }),
            (None, None) => None,
            _ => return Err(Error::Config { line: 0, message: "`g_hz` and `kappa_hz` go together".into() }),
        };
        let g = c.get_or("g", 1.0)?;
        let ratio_keys = ["kappa_over_g", "q_over_g", "gamma_over_g"];
        let absolute = ABSOLUTE_KEYS.iter().any(|k| c.contains(k));
        if absolute && ratio_keys.iter().any(|k| c.contains(k)) {
            return Err(Error::Config { line: 0, message: "mix of absolute and ratio rate keys".into() });
        }
        let (kappa, gamma, q) = if absolute {
            (c.require("kappa")?, c.get_or("gamma", 0.0)?, c.get_or("q", 0.0)?)
        } else {
            let kappa_over_g = match units {
                Some(u) if !c.contains("kappa_over_g") => u.kappa_hz / u.g_hz,
                _ => c.require("kappa_over_g")?,
            };
            (kappa_over_g * g, c.get_or::<f64>("gamma_over_g", 0.0)? * g, c.get_or::<f64>("q_over_g", 0.0)? * g)
        };
        Ok(Self {
            system: SystemParams::resonant(g, kappa, gamma)?,
            q,
            d: pulse_length(c, g, kappa)?,
            units,
            grid: grid_options(c)?,
            tolerance: c.get_or("tolerance", DEFAULT_TOLERANCE)?,
            export_points: c.get_or("export_points", 121)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleReport {
    pub config: SingleConfig,
    pub omega_1: C64,
    pub omega_2: C64,
    pub nu: [C64; 3],
    pub report: BetaReport,
    /// Pulse length in metres when physical units were given.
    pub d_metres: Option<f64>,
    pub one_photon: Table,
    pub two_photon: Table,
}

impl SingleReport {
    pub fn within_tolerance(&self) -> bool {
        self.report.beta_error <= self.config.tolerance && self.report.beta.norm() <= 1.0 + SCHWARZ_SLACK
    }
}

impl fmt::Display for SingleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        let p = &c.system;
        writeln!(f, "g = {}  kappa = {}  gamma = {}  q = {}", p.g, p.kappa, p.gamma, c.q)?;
        if p.g > 0.0 {
            writeln!(f, "kappa/g = {}  q/g = {}  gamma/g = {}", p.kappa / p.g, c.q / p.g, p.gamma / p.g)?;
        }
        writeln!(f, "d = {}  g^2 d/kappa = {}  kappa d = {}", c.d, p.g * p.g * c.d / p.kappa, p.kappa * c.d)?;
        if let (Some(m), Some(u)) = (self.d_metres, c.units) {
            writeln!(f, "pulse length = {m:.4} m  (g = {:e} s^-1, kappa = {:e} s^-1)", u.g_hz, u.kappa_hz)?;
        }
        writeln!(f, "omega_1 = {}  omega_2 = {}", self.omega_1, self.omega_2)?;
        writeln!(f, "nu = {}, {}, {}", self.nu[0], self.nu[1], self.nu[2])?;
        let r = &self.report;
        writeln!(f, "beta = {}  |beta - 1| = {}  error = {:e}", r.beta, r.nonlinearity(), r.beta_error)?;
        write!(f, "norm(psi_out) = {}  norm(psi_L) = {}  norm(phi) = {}", r.norm_out, r.norm_linear, r.norm_one_photon)
    }
}

/// `β`, norms and output wavefunctions at one point.
pub fn run_single(c: &SingleConfig) -> Result<SingleReport> {
    let p = c.system;
    let es = p.eigensystem();
    let pulse = PulseParams::at_default_position(c.q, c.d)?;
    let report = analyze(&p, &pulse, &c.grid)?;
    let f = GaussianPulse::new(&pulse);
    let one = OnePhotonOutput::new(&es, &f)?.sample(report.grid);

    let kernel = TwoPhotonKernel::new(&es)?;
    let fine = Grid1D::for_pulse(window_rate(&kernel), &f, &c.grid)?;
    let scat = TwoPhotonScattering::new(&kernel, &f, fine)?;
    let stride = fine.n.div_ceil(c.export_points.max(2)).max(1);
    let coarse = Grid1D::new(fine.r_min, fine.h * stride as f64, (fine.n - 1) / stride + 1)?;
    let two = Wavefunction2D::sample(coarse, |r1, r2| {
        let i = ((r1 - fine.r_min) / fine.h).round() as usize;
        let j = ((r2 - fine.r_min) / fine.h).round() as usize;
        scat.nonlinear_at(i, j) + scat.phi[i] * scat.phi[j]
    });
    Ok(SingleReport {
        config: c.clone(),
        omega_1: es.omega_1,
        omega_2: es.omega_2,
        nu: es.nu,
        report,
        d_metres: c.units.map(|u| u.metres(c.d * p.g)),
        one_photon: wavefunction_1d(&one),
        two_photon: wavefunction_2d(&two),
    })
}

/// Oracle comparison at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCompareConfig {
    pub g: f64,
    pub curve: Curve,
    pub d: f64,
    pub oracle: OracleSettings,
}

impl OracleCompareConfig {
    pub fn from_config(c: &Config) -> Result<Self> {
        let mut known = POINT_KEYS.to_vec();
        known.extend(["band_factor", "oversample", "modes", "input_sigmas", "settle", "integrator", "courant"]);
        known.extend(["residual_limit", "output"]);
        c.check_keys(&known)?;
        let g = c.get_or("g", 1.0)?;
        let curve = Curve {
            kappa_over_g: c.require("kappa_over_g")?,
            q_over_g: c.get_or("q_over_g", 0.0)?,
            gamma_over_g: c.get_or("gamma_over_g", 0.0)?,
        };
        let def = OracleSettings::default();
        let integrator = match c.raw("integrator").unwrap_or("chebyshev") {
            "chebyshev" => Integrator::Chebyshev,
            "rk4" => Integrator::Rk4 { courant: c.get_or("courant", 0.05)? },
            s => return Err(Error::Config { line: 0, message: format!("unknown integrator `{s}`") }),
        };
        let oracle = OracleSettings {
            band_factor: c.get_or("band_factor", def.band_factor)?,
            oversample: c.get_or("oversample", def.oversample)?,
            modes: c.get("modes")?,
            input_sigmas: c.get_or("input_sigmas", def.input_sigmas)?,
            settle: c.get_or("settle", def.settle)?,
            residual_limit: c.get_or("residual_limit", def.residual_limit)?,
            integrator,
            ..def
        };
        Ok(Self { g, curve, d: pulse_length(c, g, curve.kappa_over_g * g)?, oracle })
    }
}

pub fn run_oracle_compare(c: &OracleCompareConfig) -> Result<ComparisonReport> {
    let p = c.curve.system(c.g)?;
    Ok(compare(&p, c.curve.q_over_g * c.g, c.d, &c.oracle)?)
}

/// Optimum-pulse analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseConfig {
    pub g: f64,
    pub kappa_over_g: f64,
    pub gamma_over_g: f64,
    /// Duration of `φ` in units of `1/g`; defaults to 30 slowest decay times.
    pub t: Option<f64>,
    pub q_range: (f64, f64),
    /// Range of `d` in units of `1/g`.
    pub d_range: (f64, f64),
    pub grid_points: usize,
    pub zooms: usize,
    pub samples: usize,
}

impl PulseConfig {
    pub fn from_config(c: &Config) -> Result<Self> {
        c.check_keys(&[
            "g",
            "kappa_over_g",
            "gamma_over_g",
            "t",
            "q_min",
            "q_max",
            "d_min",
            "d_max",
            "grid_points",
            "zooms",
            "samples",
            "output",
            "name",
        ])?;
        Ok(Self {
            g: c.get_or("g", 1.0)?,
            kappa_over_g: c.require("kappa_over_g")?,
            gamma_over_g: c.get_or("gamma_over_g", 0.0)?,
            t: c.get("t")?,
            q_range: (c.get_or("q_min", -2.0)?, c.get_or("q_max", 2.0)?),
            d_range: (c.get_or("d_min", 0.1)?, c.get_or("d_max", 50.0)?),
            grid_points: c.get_or("grid_points", 21)?,
            zooms: c.get_or("zooms", 4)?,
            samples: c.get_or("samples", 400)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseReport {
    pub config: PulseConfig,
    pub t: f64,
    pub phi_norm: f64,
    pub best: OverlapOptimum,
    /// Overlap of the Gaussian at the predicted optimum.
    pub predicted: (f64, f64),
    pub predicted_overlap: f64,
    pub phi: Table,
    pub overlaps: Table,
}

impl fmt::Display for PulseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "kappa/g = {}  gamma/g = {}  t = {}  |phi|^2 = {}",
            c.kappa_over_g, c.gamma_over_g, self.t, self.phi_norm
        )?;
        writeln!(
            f,
            "best overlap {} at q = {}  d = {}  a = {}",
            self.best.overlap, self.best.q, self.best.d, self.best.a
        )?;
        write!(
            f,
            "prediction q = {}  d = {}  overlap there {}",
            self.predicted.0, self.predicted.1, self.predicted_overlap
        )
    }
}

/// Predicted overlap-maximizing `(q, d)`: `(0, κ/2g²)` below the
/// strong-coupling threshold `κ = 4g`, `(g, 4/κ)` above it.
pub fn predicted_optimum(g: f64, kappa: f64) -> (f64, f64) {
    if kappa >= 4.0 * g {
        (0.0, kappa / (2.0 * g * g))
    } else {
        (g, 4.0 / kappa)
    }
}

pub fn run_pulse(c: &PulseConfig) -> Result<PulseReport> {
    let p = SystemParams::resonant(c.g, c.kappa_over_g * c.g, c.gamma_over_g * c.g)?;
    let es = p.eigensystem();
    let t = c.t.unwrap_or(30.0 / (-es.omega_1.im).min(-es.omega_2.im));
    let phi = OptimumPulse::new(&es, t)?;
    let (qs, ds) = ((c.q_range.0 * c.g, c.q_range.1 * c.g), (c.d_range.0 / c.g, c.d_range.1 / c.g));
    let best = overlap_scan(&phi, qs, ds, c.grid_points, c.zooms);

    let mut phi_t = Table::new(&["r", "re", "im"]);
    for (r, v) in phi.samples(c.samples) {
        phi_t.push_numbers(&[r, v.re, v.im]);
    }
    let n = c.grid_points.max(2);
    let mut ov = Table::new(&["q", "d", "a", "overlap"]);
    for i in 0..n {
        let q = qs.0 + (qs.1 - qs.0) * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let d = (ds.0.ln() + (ds.1 / ds.0).ln() * j as f64 / (n - 1) as f64).exp();
            let (a, v) = cqed_core::pulse::best_position(&phi, q, d);
            ov.push_numbers(&[q, d, a, v]);
        }
    }
    let predicted = predicted_optimum(c.g, c.kappa_over_g * c.g);
    let predicted_overlap = cqed_core::pulse::best_position(&phi, predicted.0, predicted.1).1;
    Ok(PulseReport {
        config: c.clone(),
        t,
        phi_norm: phi.norm2(),
        best,
        predicted,
        predicted_overlap,
        phi: phi_t,
        overlaps: ov,
    })
}

/// Tables written by `oracle-compare`, keyed by file stem.
pub fn comparison_tables(r: &ComparisonReport) -> Vec<(&'static str, Table)> {
    vec![
        ("oracle_one", wavefunction_1d(&r.one.oracle)),
        ("analytic_one", wavefunction_1d(&r.one.analytic)),
        ("oracle_two", wavefunction_2d(&r.oracle_two)),
        ("analytic_two", wavefunction_2d(&r.analytic_two)),
    ]
}
