use std::f64::consts::PI;

use cqed_core::params::SystemParams;
use cqed_core::{Error, Result};

/// Uniform discretization of the external (`b_k`) and lateral (`d_μ`)
/// continua with flat-band couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBasis {
    pub external: Vec<f64>,
    pub dk: f64,
    /// Empty when the atom has no lateral decay.
    pub lateral: Vec<f64>,
    pub dmu: f64,
    /// `√(κΔk/2π)`
    pub kappa_coupling: f64,
    /// `√(γΔμ/2π)`
    pub gamma_coupling: f64,
}

impl ModeBasis {
    /// `n_b` external modes on the midpoints of `[center−W, center+W]` and
    /// `n_d` lateral modes on `[ω_a−W, ω_a+W]` (dropped when `γ = 0`).
    pub fn uniform(p: &SystemParams, center: f64, half_width: f64, n_b: usize, n_d: usize) -> Result<Self> {
        if n_b < 2 || !(half_width > 0.0) {
            return Err(Error::BasisTooSmall(format!("{n_b} external modes over half-width {half_width}")));
        }
        let dk = 2.0 * half_width / n_b as f64;
        let external = (0..n_b).map(|n| center - half_width + (n as f64 + 0.5) * dk).collect();
        let n_d = if p.gamma > 0.0 { n_d } else { 0 };
        if p.gamma > 0.0 && n_d < 2 {
            return Err(Error::BasisTooSmall("lossy system needs lateral modes".into()));
        }
        let dmu = if n_d > 0 { 2.0 * half_width / n_d as f64 } else { 0.0 };
        let lateral = (0..n_d).map(|m| p.omega_a - half_width + (m as f64 + 0.5) * dmu).collect();
        Ok(Self {
            external,
            dk,
            lateral,
            dmu,
            kappa_coupling: (p.kappa * dk / (2.0 * PI)).sqrt(),
            gamma_coupling: (p.gamma * dmu / (2.0 * PI)).sqrt(),
        })
    }

    pub fn n_b(&self) -> usize {
        self.external.len()
    }

    pub fn n_d(&self) -> usize {
        self.lateral.len()
    }

    pub fn half_width(&self) -> f64 {
        0.5 * self.dk * self.n_b() as f64
    }

    /// Period of the real-space field represented by the external modes.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.dk
    }

    /// Band wide enough for every rate in play, and modes dense enough that
    /// nothing recurs before `t_total`.
    pub fn check(&self, p: &SystemParams, q: f64, t_total: f64, oversample: f64) -> Result<()> {
        let scale = p.kappa.max(p.g).max(q.abs());
        if self.half_width() < 10.0 * scale {
            return Err(Error::BasisTooSmall(format!(
                "band half-width {} below 10·max(κ, g, |q|) = {}",
                self.half_width(),
                10.0 * scale
            )));
        }
        if oversample < 4.0 {
            return Err(Error::BasisTooSmall(format!("oversample {oversample} below 4")));
        }
        if self.dk > 2.0 * PI / (t_total * oversample) {
            return Err(Error::BasisTooSmall(format!(
                "mode spacing {:e} too coarse for evolution time {t_total} (needs ≤ {:e})",
                self.dk,
                2.0 * PI / (t_total * oversample)
            )));
        }
        if self.n_d() > 0 && self.dmu > PI / t_total {
            return Err(Error::BasisTooSmall(format!(
                "lateral spacing {:e} recurs within evolution time {t_total}",
                self.dmu
            )));
        }
        Ok(())
    }
}
