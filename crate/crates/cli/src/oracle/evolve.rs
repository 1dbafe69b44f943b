use cqed_core::{Error, Result};
use num_complex::Complex64 as C64;

use super::hamiltonian::SparseSymmetric;

/// Norm drift tolerated over a full evolution.
pub const NORM_DRIFT_LIMIT: f64 = 1e-8;

/// Largest `a·Δt` handled by one Chebyshev expansion; longer times are
/// split into chunks so the norm can be monitored along the way.
const CHUNK_PHASE: f64 = 1500.0;

const LANCZOS_STEPS: usize = 120;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integrator {
    /// Chebyshev expansion of `e^{−iHΔt}`, accurate to machine precision.
    Chebyshev,
    /// Classical fixed-step RK4 with `step · max|E| = courant`.
    Rk4 { courant: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    pub state: Vec<C64>,
    /// Largest relative norm change seen at a checkpoint.
    pub norm_drift: f64,
    pub matvecs: usize,
}

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

/// `J_0(x) … J_{n_max}(x)` by Miller's backward recurrence, normalized with
/// `J_0 + 2 Σ J_{2k} = 1`.
pub fn bessel_j_sequence(x: f64, n_max: usize) -> Vec<f64> {
    if x == 0.0 {
        let mut v = vec![0.0; n_max + 1];
        v[0] = 1.0;
        return v;
    }
    let start = n_max.max(x as usize) + 32 + (12.0 * x.cbrt()) as usize;
    let mut j = vec![0.0; start + 2];
    j[start] = 1e-300;
    for n in (1..=start).rev() {
        j[n - 1] = 2.0 * n as f64 / x * j[n] - j[n + 1];
        if j[n - 1].abs() > 1e250 {
            for v in j[n - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let sum = j[0] + 2.0 * j.iter().skip(2).step_by(2).sum::<f64>();
    j.truncate(n_max + 1);
    for v in &mut j {
        *v /= sum;
    }
    j
}

fn chebyshev_chunk(h: &SparseSymmetric, psi: &mut Vec<C64>, dt: f64, shift: f64, scale: f64) -> usize {
    let x = scale * dt;
    let n_max = (x + 14.0 * x.cbrt() + 16.0).ceil() as usize;
    let j = bessel_j_sequence(x, n_max);
    let last = j.iter().rposition(|v| v.abs() > 1e-18).unwrap_or(0).max(1);
    let mi = C64::new(0.0, -1.0);
    let coeff = |n: usize| -> C64 {
        if n == 0 {
            C64::new(j[0], 0.0)
        } else {
            2.0 * j[n] * mi.powu(n as u32)
        }
    };

    let dim = psi.len();
    let mut acc: Vec<C64> = psi.iter().map(|v| coeff(0) * v).collect();
    let mut prev = psi.clone();
    let mut cur = vec![C64::new(0.0, 0.0); dim];
    // T_1 = H_s ψ
    h.apply(psi, &mut cur);
    let c1 = coeff(1);
    for ((c, p), a) in cur.iter_mut().zip(&prev).zip(acc.iter_mut()) {
        *c = (*c - shift * p) / scale;
        *a += c1 * *c;
    }
    for n in 2..=last {
        h.chebyshev_step(&cur, &mut prev, &mut acc, shift, scale, coeff(n));
        std::mem::swap(&mut cur, &mut prev);
    }
    let phase = C64::new(0.0, -shift * dt).exp();
    for (p, a) in psi.iter_mut().zip(acc) {
        *p = phase * a;
    }
    last
}

fn rk4(h: &SparseSymmetric, psi: &mut [C64], t: f64, courant: f64, bound: f64) -> usize {
    let steps = (t * bound / courant).ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let dim = psi.len();
    let mi = C64::new(0.0, -1.0);
    let (mut k, mut tmp, mut acc) = (vec![C64::default(); dim], vec![C64::default(); dim], vec![C64::default(); dim]);
    for _ in 0..steps {
        acc.copy_from_slice(psi);
        tmp.copy_from_slice(psi);
        for (stage, w) in [(0.5, 1.0 / 6.0), (0.5, 1.0 / 3.0), (1.0, 1.0 / 3.0), (0.0, 1.0 / 6.0)] {
            h.apply(&tmp, &mut k);
            for i in 0..dim {
                let ki = mi * k[i] * dt;
                acc[i] += w * ki;
                tmp[i] = psi[i] + stage * ki;
            }
        }
        psi.copy_from_slice(&acc);
    }
    4 * steps
}

/// Spectral interval used by the integrators: Lanczos extremes widened by 2%
/// of the range, never wider than the Gershgorin enclosure.
pub fn spectrum_enclosure(h: &SparseSymmetric) -> (f64, f64) {
    let (glo, ghi) = h.spectral_bounds();
    let (llo, lhi) = h.lanczos_extremes(LANCZOS_STEPS);
    let margin = 0.02 * (lhi - llo) + 1e-9 * (1.0 + llo.abs().max(lhi.abs()));
    ((llo - margin).max(glo), (lhi + margin).min(ghi))
}

/// `ψ(t) = e^{−iHt} ψ(0)`.
pub fn evolve(h: &SparseSymmetric, initial: &[C64], t: f64, integrator: Integrator) -> Result<Evolution> {
    if initial.len() != h.dim {
        return Err(Error::Integration(format!("state length {} vs operator {}", initial.len(), h.dim)));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Integration(format!("invalid time {t}")));
    }
    let mut psi = initial.to_vec();
    let n0 = norm2(&psi);
    if t == 0.0 || n0 == 0.0 {
        return Ok(Evolution { state: psi, norm_drift: 0.0, matvecs: 0 });
    }
    let (lo, hi) = spectrum_enclosure(h);
    let shift = 0.5 * (hi + lo);
    let scale = (0.5 * (hi - lo)).max(1e-12);
    let mut drift: f64 = 0.0;
    let mut matvecs = 0;
    match integrator {
        Integrator::Chebyshev => {
            let chunks = (scale * t / CHUNK_PHASE).ceil().max(1.0) as usize;
            let dt = t / chunks as f64;
            for c in 0..chunks {
                matvecs += chebyshev_chunk(h, &mut psi, dt, shift, scale);
                let d = (norm2(&psi) / n0 - 1.0).abs();
                drift = drift.max(d);
                if !(d < NORM_DRIFT_LIMIT) {
                    return Err(Error::Integration(format!(
                        "norm drift {d:e} after chunk {}/{chunks} (Δt = {dt}, spectral half-width {scale})",
                        c + 1
                    )));
                }
            }
        }
        Integrator::Rk4 { courant } => {
            let bound = lo.abs().max(hi.abs());
            matvecs = rk4(h, &mut psi, t, courant, bound);
            drift = (norm2(&psi) / n0 - 1.0).abs();
            if !(drift < NORM_DRIFT_LIMIT) {
                return Err(Error::Integration(format!("RK4 norm drift {drift:e} at courant number {courant}")));
            }
        }
    }
    Ok(Evolution { state: psi, norm_drift: drift, matvecs })
}
