//! Brute-force reference: discretize the photon continua into modes, evolve
//! the Schrödinger equation in the one- or two-excitation sector and read the
//! reflected wavepacket off the external modes.

pub mod basis;
pub mod compare;
pub mod evolve;
pub mod hamiltonian;
pub mod integrals;

use std::f64::consts::PI;

use cqed_core::params::SystemParams;
use cqed_core::pulse::GaussianPulse;
use cqed_core::scattering::{Grid1D, Wavefunction1D, Wavefunction2D};
use cqed_core::{Error, Result};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

pub use basis::ModeBasis;
pub use evolve::{evolve, Evolution, Integrator};
pub use hamiltonian::{build_hamiltonian, Layout, Sector, SparseSymmetric};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    /// Band half-width in units of `max(κ, g, |q|)`.
    pub band_factor: f64,
    /// `T_total · Δk / 2π` is at most `1/oversample`.
    pub oversample: f64,
    /// Fixed external mode count; derived from the band and time when `None`.
    pub modes: Option<usize>,
    /// Lateral modes per external mode, one- and two-excitation runs.
    pub lateral_ratio: [f64; 2],
    /// The input pulse starts this many widths `d` before the cavity.
    pub input_sigmas: f64,
    /// Extra evolution time after the pulse has passed, in units of the
    /// slowest decay time.
    pub settle: f64,
    /// Largest atom + cavity probability tolerated at the end.
    pub residual_limit: f64,
    pub integrator: Integrator,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            band_factor: 12.0,
            oversample: 4.0,
            modes: None,
            lateral_ratio: [1.0, 0.5],
            input_sigmas: 3.5,
            settle: 5.0,
            residual_limit: 1e-4,
            integrator: Integrator::Chebyshev,
        }
    }
}

/// Slowest amplitude decay that can leave excitation behind in the sector.
fn settle_rate(p: &SystemParams, sector: Sector) -> f64 {
    let es = p.eigensystem();
    if p.g == 0.0 {
        return 0.5 * p.kappa;
    }
    match sector {
        Sector::One => (-es.omega_1.im).min(-es.omega_2.im).min(0.5 * p.kappa),
        Sector::Two => es.slowest_decay(),
    }
}

/// Pulse placement, duration and mode basis of one oracle run.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSetup {
    pub params: SystemParams,
    pub sector: Sector,
    pub pulse: GaussianPulse,
    pub t_total: f64,
    pub basis: ModeBasis,
}

impl OracleSetup {
    pub fn new(p: &SystemParams, q: f64, d: f64, sector: Sector, s: &OracleSettings) -> Result<Self> {
        p.validate()?;
        if !(d > 0.0) || !q.is_finite() {
            return Err(Error::InvalidParameter(format!("pulse q = {q}, d = {d}")));
        }
        let lam = settle_rate(p, sector);
        if !(lam > 0.0) {
            return Err(Error::InvalidParameter("a mode never decays; the oracle cannot settle".into()));
        }
        let a = -s.input_sigmas * d;
        let t_total = 2.0 * s.input_sigmas * d + s.settle / lam;
        let half_width = s.band_factor * p.kappa.max(p.g).max(q.abs());
        let n_b = match s.modes {
            Some(n) => n,
            None => (2.0 * half_width * t_total * s.oversample / (2.0 * PI)).ceil() as usize,
        };
        let ratio = s.lateral_ratio[(sector == Sector::Two) as usize];
        let n_d = (ratio * n_b as f64).round() as usize;
        let basis = ModeBasis::uniform(p, q, half_width, n_b, n_d)?;
        basis.check(p, q, t_total, s.oversample)?;
        Ok(Self { params: *p, sector, pulse: GaussianPulse::from_parts(q, d, a), t_total, basis })
    }

    pub fn layout(&self) -> Layout {
        Layout::new(self.sector, &self.basis)
    }

    /// `ψ̂(k) = (2π)^{−1/2} ∫ f(r) e^{−ikr} dr` sampled as `√Δk ψ̂(k_n)`.
    fn input_amplitudes(&self) -> Vec<C64> {
        let s = (self.basis.dk / (2.0 * PI)).sqrt();
        self.basis.external.iter().map(|&k| s * self.pulse.fourier(k)).collect()
    }

    /// Photons in the input pulse, atom and cavity empty.
    pub fn initial_state(&self) -> Vec<C64> {
        let lay = self.layout();
        let mut psi = vec![C64::new(0.0, 0.0); lay.dim()];
        let f = self.input_amplitudes();
        match self.sector {
            Sector::One => {
                for (n, v) in f.iter().enumerate() {
                    psi[lay.b(n)] = *v;
                }
            }
            Sector::Two => {
                let nb = f.len();
                for n in 0..nb {
                    psi[lay.bb(n, n)] = f[n] * f[n];
                    for m in (n + 1)..nb {
                        psi[lay.bb(n, m)] = std::f64::consts::SQRT_2 * f[n] * f[m];
                    }
                }
            }
        }
        psi
    }
}

/// Final state of an oracle run.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutput {
    pub setup: OracleSetup,
    pub state: Vec<C64>,
    pub input_norm: f64,
    pub residual: f64,
    pub norm_drift: f64,
    pub matvecs: usize,
}

/// Builds, evolves and checks one run.
pub fn run(setup: OracleSetup, s: &OracleSettings) -> Result<OracleOutput> {
    let h = build_hamiltonian(&setup.params, &setup.basis, setup.sector)?;
    let psi0 = setup.initial_state();
    let input_norm: f64 = psi0.iter().map(|c| c.norm_sqr()).sum();
    if (input_norm - 1.0).abs() > 1e-6 {
        return Err(Error::BasisTooSmall(format!("input pulse norm {input_norm} on the mode grid")));
    }
    let ev = evolve(&h, &psi0, setup.t_total, s.integrator)?;
    let lay = setup.layout();
    let residual = lay.matter_states().into_iter().map(|i| ev.state[i].norm_sqr()).sum::<f64>();
    if residual > s.residual_limit {
        return Err(Error::ResidualExcitation { residual, limit: s.residual_limit });
    }
    Ok(OracleOutput { setup, state: ev.state, input_norm, residual, norm_drift: ev.norm_drift, matvecs: ev.matvecs })
}

impl OracleOutput {
    /// Probability left in photons of the external continuum.
    pub fn external_probability(&self) -> f64 {
        let lay = self.setup.layout();
        let nb = lay.nb;
        match self.setup.sector {
            Sector::One => (0..nb).map(|n| self.state[lay.b(n)].norm_sqr()).sum(),
            Sector::Two => (0..nb)
                .flat_map(|n| (n..nb).map(move |m| (n, m)))
                .map(|(n, m)| self.state[lay.bb(n, m)].norm_sqr())
                .sum(),
        }
    }

    pub fn total_probability(&self) -> f64 {
        self.state.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `e^{ik_n(r + T)}` for every mode and grid point, mode-major.
    fn phases(&self, grid: &Grid1D) -> Result<Vec<C64>> {
        let span = grid.r_max() - grid.r_min;
        if span >= self.setup.basis.period() {
            return Err(Error::BasisTooSmall(format!(
                "output window {span} exceeds the field period {}",
                self.setup.basis.period()
            )));
        }
        let t = self.setup.t_total;
        let pts = grid.points();
        Ok(self
            .setup
            .basis
            .external
            .iter()
            .flat_map(|&k| pts.iter().map(move |&r| C64::new(0.0, k * (r + t)).exp()))
            .collect())
    }

    /// One-photon output `ψ_out(r)` in the frame moving with the light.
    pub fn one_photon_field(&self, grid: Grid1D) -> Result<Wavefunction1D> {
        if self.setup.sector != Sector::One {
            return Err(Error::InvalidParameter("not a one-photon run".into()));
        }
        let lay = self.setup.layout();
        let e = self.phases(&grid)?;
        let g = grid.n;
        let s = (self.setup.basis.dk / (2.0 * PI)).sqrt();
        let mut values = vec![C64::new(0.0, 0.0); g];
        for n in 0..lay.nb {
            let c = s * self.state[lay.b(n)];
            for (v, ph) in values.iter_mut().zip(&e[n * g..(n + 1) * g]) {
                *v += c * ph;
            }
        }
        Ok(Wavefunction1D { grid, values })
    }

    /// Two-photon output `ψ_out(r1, r2)` on the full square. The pair
    /// amplitudes `C_nm` map to `ψ(k_n, k_m)Δk = C_nm/√2` off the diagonal
    /// and `C_nn` on it.
    pub fn two_photon_field(&self, grid: Grid1D) -> Result<Wavefunction2D> {
        if self.setup.sector != Sector::Two {
            return Err(Error::InvalidParameter("not a two-photon run".into()));
        }
        let lay = self.setup.layout();
        let nb = lay.nb;
        let e = self.phases(&grid)?;
        let g = grid.n;
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let m_at = |n: usize, m: usize| -> C64 {
            let c = self.state[lay.bb(n, m)];
            if n == m {
                c
            } else {
                c * inv
            }
        };
        // a[n][j] = Σ_m M_nm e_m(r_j)
        let a: Vec<C64> = (0..nb)
            .into_par_iter()
            .flat_map_iter(|n| {
                let mut row = vec![C64::new(0.0, 0.0); g];
                for m in 0..nb {
                    let c = m_at(n, m);
                    for (v, ph) in row.iter_mut().zip(&e[m * g..(m + 1) * g]) {
                        *v += c * ph;
                    }
                }
                row
            })
            .collect();
        let norm = self.setup.basis.dk / (2.0 * PI);
        let values: Vec<C64> = (0..g)
            .into_par_iter()
            .flat_map_iter(|i| {
                let mut row = vec![C64::new(0.0, 0.0); g];
                for n in 0..nb {
                    let c = norm * e[n * g + i];
                    for (v, x) in row.iter_mut().zip(&a[n * g..(n + 1) * g]) {
                        *v += c * x;
                    }
                }
                row
            })
            .collect();
        Ok(Wavefunction2D { grid, values })
    }
}
