use cqed_core::params::SystemParams;
use cqed_core::propagators::TwoPhotonKernel;
use cqed_core::pulse::GaussianPulse;
use cqed_core::scattering::{
    beta, window_rate, Grid1D, GridOptions, OnePhotonOutput, TwoPhotonScattering, Wavefunction1D, Wavefunction2D,
};
use cqed_core::Result;
use num_complex::Complex64 as C64;

use super::{run, OracleOutput, OracleSettings, OracleSetup, Sector};

/// Agreement limits between the oracle and the analytic pipeline.
pub const ONE_PHOTON_TOLERANCE: f64 = 0.02;
pub const TWO_PHOTON_TOLERANCE: f64 = 0.05;
pub const BETA_TOLERANCE: f64 = 0.05;

/// Comparison grid points per `min(d, 1/λ)`.
const COMPARE_POINTS: f64 = 8.0;

#[derive(Debug, Clone, PartialEq)]
pub struct OnePhotonComparison {
    pub relative_l2: f64,
    pub oracle_norm: f64,
    pub analytic_norm: f64,
    pub oracle: Wavefunction1D,
    pub analytic: Wavefunction1D,
    pub run: OracleOutput,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub one: OnePhotonComparison,
    pub two_photon_l2: f64,
    pub oracle_two_norm: f64,
    pub analytic_two_norm: f64,
    pub beta_analytic: C64,
    pub beta_oracle: C64,
    pub two_photon_modes: usize,
    pub two_photon_residual: f64,
    pub two_photon_drift: f64,
    pub oracle_two: Wavefunction2D,
    pub analytic_two: Wavefunction2D,
}

impl ComparisonReport {
    /// `| |β_oracle − 1| − |β_analytic − 1| |`
    pub fn nonlinearity_gap(&self) -> f64 {
        ((self.beta_oracle - 1.0).norm() - (self.beta_analytic - 1.0).norm()).abs()
    }

    pub fn nonlinearity_limit(&self) -> f64 {
        BETA_TOLERANCE * (1.0 + (self.beta_analytic - 1.0).norm())
    }

    pub fn passes(&self) -> bool {
        self.one.relative_l2 <= ONE_PHOTON_TOLERANCE
            && self.two_photon_l2 <= TWO_PHOTON_TOLERANCE
            && self.nonlinearity_gap() <= self.nonlinearity_limit()
    }
}

fn output_grid(p: &SystemParams, pulse: &GaussianPulse) -> Result<(Grid1D, usize, TwoPhotonKernel)> {
    let kernel = TwoPhotonKernel::new(&p.eigensystem())?;
    let lam = window_rate(&kernel);
    let fine = Grid1D::for_pulse(lam, pulse, &GridOptions::default())?;
    let target = pulse.d.min(1.0 / lam) / COMPARE_POINTS;
    let stride = ((target / fine.h).round() as usize).max(1);
    Ok((fine, stride, kernel))
}

fn strided(fine: &Grid1D, stride: usize) -> Result<Grid1D> {
    Grid1D::new(fine.r_min, fine.h * stride as f64, (fine.n - 1) / stride + 1)
}

/// One-photon oracle run against the closed-form output.
pub fn compare_one_photon(p: &SystemParams, q: f64, d: f64, s: &OracleSettings) -> Result<OnePhotonComparison> {
    let setup = OracleSetup::new(p, q, d, Sector::One, s)?;
    let pulse = setup.pulse;
    let (fine, stride, _) = output_grid(p, &pulse)?;
    let grid = strided(&fine, stride)?;
    let out = run(setup, s)?;
    let oracle = out.one_photon_field(grid)?;
    let analytic = OnePhotonOutput::new(&p.eigensystem(), &pulse)?.sample(grid);
    Ok(OnePhotonComparison {
        relative_l2: oracle.relative_l2(&analytic)?,
        oracle_norm: out.external_probability(),
        analytic_norm: analytic.norm2(),
        oracle,
        analytic,
        run: out,
    })
}

/// Full one- and two-photon comparison at one parameter point.
pub fn compare(p: &SystemParams, q: f64, d: f64, s: &OracleSettings) -> Result<ComparisonReport> {
    let one = compare_one_photon(p, q, d, s)?;
    let setup = OracleSetup::new(p, q, d, Sector::Two, s)?;
    let pulse = setup.pulse;
    let (fine, stride, kernel) = output_grid(p, &pulse)?;
    let grid = strided(&fine, stride)?;
    let scat = TwoPhotonScattering::new(&kernel, &pulse, fine)?;
    let analytic = Wavefunction2D::sample(grid, |r1, r2| {
        let i = ((r1 - fine.r_min) / fine.h).round() as usize;
        let j = ((r2 - fine.r_min) / fine.h).round() as usize;
        scat.nonlinear_at(i, j) + scat.phi[i] * scat.phi[j]
    });
    let modes = setup.basis.n_b();
    let out = run(setup, s)?;
    let oracle = out.two_photon_field(grid)?;

    // The linear reference built only from oracle data: φ_oracle ⊗ φ_oracle.
    let phi = &one.oracle;
    let grid1 = phi.grid;
    grid1.check_same(&grid)?;
    let n = grid.n;
    let linear = Wavefunction2D {
        grid,
        values: (0..n).flat_map(|i| (0..n).map(move |j| phi.values[i] * phi.values[j])).collect(),
    };
    Ok(ComparisonReport {
        two_photon_l2: oracle.relative_l2(&analytic)?,
        oracle_two_norm: out.external_probability(),
        analytic_two_norm: scat.norms.output(),
        beta_analytic: scat.norms.beta()?,
        beta_oracle: beta(&oracle, &linear)?,
        two_photon_modes: modes,
        two_photon_residual: out.residual,
        two_photon_drift: out.norm_drift,
        oracle_two: oracle,
        analytic_two: analytic,
        one,
    })
}
