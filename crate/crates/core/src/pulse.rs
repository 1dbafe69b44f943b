//! Input pulses: the Gaussian wavepacket and the atom-absorbing optimum pulse.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64 as C64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::faddeeva::faddeeva;
use crate::params::{EigenSystem, PulseParams};

/// `f(x) = (2/πd²)^{1/4} exp(−(x−a)²/d² + iq(x−a))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPulse {
    pub q: f64,
    pub d: f64,
    pub a: f64,
    norm: f64,
}

impl GaussianPulse {
    pub fn new(p: &PulseParams) -> Self {
        Self::from_parts(p.q, p.d, p.a)
    }

    pub fn from_parts(q: f64, d: f64, a: f64) -> Self {
        Self { q, d, a, norm: Float::powf(2.0 / (PI * d * d), 0.25) }
    }

    pub fn value(&self, x: f64) -> C64 {
        let u = x - self.a;
        self.norm * C64::new(-u * u / (self.d * self.d), self.q * u).exp()
    }

    /// `∫ f(x) e^{−ikx} dx`.
    pub fn fourier(&self, k: f64) -> C64 {
        let s = (k - self.q) * self.d;
        self.norm * self.d * PI.sqrt() * C64::new(-0.25 * s * s, -k * self.a).exp()
    }

    /// `S_b[f](x) = ∫_x^∞ e^{b(s−x)} f(s) ds` for `Re b ≤ 0`.
    pub fn tail(&self, b: C64, x: f64) -> C64 {
        let u = x - self.a;
        let beta = b + C64::new(0.0, self.q);
        let zeta = C64::new(u / self.d, 0.0) - beta * (0.5 * self.d);
        let half = 0.5 * self.d * PI.sqrt();
        if zeta.re >= 0.0 {
            // erfcx(ζ) = w(iζ)
            self.value(x) * half * faddeeva(C64::i() * zeta)
        } else {
            let lead = (-b * u + beta * beta * (0.25 * self.d * self.d)).exp() * 2.0;
            self.norm
                * half
                * (lead - C64::new(-u * u / (self.d * self.d), self.q * u).exp() * faddeeva(-C64::i() * zeta))
        }
    }

    /// Half-width of the window holding all but `e^{−2σ²}` of the norm.
    pub fn reach(&self, sigmas: f64) -> f64 {
        sigmas * self.d
    }
}

/// Single-photon pulse absorbed completely by the atom after time `t`.
///
/// `φ(r) = c (e^{iω̃_1*(r+t)} − e^{iω̃_2*(r+t)})` on `−t < r < 0`, with
/// `c = ig√κ/(ω̃_1* − ω̃_2*)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimumPulse {
    pub t: f64,
    pub omega: [C64; 2],
    pub prefactor: C64,
}

impl OptimumPulse {
    pub fn new(es: &EigenSystem, t: f64) -> Result<Self> {
        es.require_distinct_modes()?;
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!("absorption time t = {t} must be positive")));
        }
        let (w1, w2) = (es.omega_1.conj(), es.omega_2.conj());
        let prefactor = C64::new(0.0, es.g * es.kappa.sqrt()) / (w1 - w2);
        Ok(Self { t, omega: [w1, w2], prefactor })
    }

    pub fn value(&self, r: f64) -> C64 {
        if !(r > -self.t && r < 0.0) {
            return C64::new(0.0, 0.0);
        }
        let i = C64::i();
        self.prefactor * ((i * self.omega[0] * (r + self.t)).exp() - (i * self.omega[1] * (r + self.t)).exp())
    }

    /// `∫|φ|²`, in closed form.
    pub fn norm2(&self) -> f64 {
        let i = C64::i();
        let mut acc = C64::new(0.0, 0.0);
        for (j, wj) in self.omega.iter().enumerate() {
            for (k, wk) in self.omega.iter().enumerate() {
                let sign = if j == k { 1.0 } else { -1.0 };
                // ∫_0^t e^{i(w_j − w_k*)s} ds
                let rate = i * (wj - wk.conj());
                acc += sign * ((rate * self.t).exp() - 1.0) / rate;
            }
        }
        self.prefactor.norm_sqr() * acc.re
    }

    /// `⟨φ|f⟩` for a Gaussian `f`, in closed form.
    pub fn overlap(&self, f: &GaussianPulse) -> C64 {
        // ∫_{−t}^0 e^{−iw(r+t)} f(r) dr = S_b[f](−t) − e^{bt} S_b[f](0), b = −iw
        let mut acc = C64::new(0.0, 0.0);
        for (j, w) in self.omega.iter().enumerate() {
            let wc = w.conj();
            let b = -C64::i() * wc;
            let piece = f.tail(b, -self.t) - (b * self.t).exp() * f.tail(b, 0.0);
            acc += if j == 0 { piece } else { -piece };
        }
        self.prefactor.conj() * acc
    }

    /// Samples of `φ` on `n` points spanning `[−t, 0]`.
    pub fn samples(&self, n: usize) -> Vec<(f64, C64)> {
        let h = self.t / (n.max(2) - 1) as f64;
        (0..n)
            .map(|i| {
                let r = -self.t + i as f64 * h;
                (r, self.value(r))
            })
            .collect()
    }
}

/// Best Gaussian match to an [`OptimumPulse`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapOptimum {
    pub q: f64,
    pub d: f64,
    pub a: f64,
    pub overlap: f64,
}

/// `max_a |⟨φ|f_{q,d,a}⟩|²`, returning the maximizing position too.
pub fn best_position(phi: &OptimumPulse, q: f64, d: f64) -> (f64, f64) {
    let ov = |a: f64| phi.overlap(&GaussianPulse::from_parts(q, d, a)).norm_sqr();
    let (lo, hi) = (-phi.t - 2.0 * d, 2.0 * d);
    let n = 64;
    let step = (hi - lo) / n as f64;
    let mut best = (lo, ov(lo));
    for i in 1..=n {
        let a = lo + i as f64 * step;
        let v = ov(a);
        if v > best.1 {
            best = (a, v);
        }
    }
    let a = golden_max(ov, best.0 - step, best.0 + step, 1e-10 * (1.0 + d));
    let v = ov(a);
    if v > best.1 {
        (a, v)
    } else {
        best
    }
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let r = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Grid search over `(q, d)` (each point maximized over position), refined
/// by successive zooms around the best cell.
pub fn overlap_scan(
    phi: &OptimumPulse,
    q_range: (f64, f64),
    d_range: (f64, f64),
    n: usize,
    zooms: usize,
) -> OverlapOptimum {
    let n = n.max(3);
    let (mut qlo, mut qhi) = q_range;
    let (mut dlo, mut dhi) = (d_range.0.ln(), d_range.1.ln());
    let mut best = OverlapOptimum { q: qlo, d: d_range.0, a: 0.0, overlap: -1.0 };
    for _ in 0..=zooms {
        let dq = (qhi - qlo) / (n - 1) as f64;
        let dd = (dhi - dlo) / (n - 1) as f64;
        for i in 0..n {
            let q = qlo + i as f64 * dq;
            for j in 0..n {
                let d = (dlo + j as f64 * dd).exp();
                let (a, v) = best_position(phi, q, d);
                if v > best.overlap {
                    best = OverlapOptimum { q, d, a, overlap: v };
                }
            }
        }
        qlo = best.q - dq;
        qhi = best.q + dq;
        dlo = best.d.ln() - dd;
        dhi = best.d.ln() + dd;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SystemParams;
    use crate::quadrature::{trapezoid, GaussLegendre};

    #[test]
    fn gaussian_is_normalized() {
        let f = GaussianPulse::from_parts(0.7, 1.3, -2.0);
        let h = 0.01;
        let v: Vec<C64> = (0..2001).map(|i| C64::new(f.value(-12.0 + i as f64 * h).norm_sqr(), 0.0)).collect();
        assert!((trapezoid(h, &v).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tail_matches_quadrature_both_branches() {
        let f = GaussianPulse::from_parts(0.4, 1.1, 0.5);
        let rule = GaussLegendre::new(20);
        for &b in &[C64::new(-0.3, 1.0), C64::new(-5.0, -2.0), C64::new(-0.05, 0.2)] {
            for &x in &[-6.0, -1.0, 0.5, 2.0, 4.0] {
                let mut acc = C64::new(0.0, 0.0);
                let mut lo = x;
                while lo < 12.0 {
                    acc += rule.integrate(lo, lo + 0.25, |s| (b * (s - x)).exp() * f.value(s));
                    lo += 0.25;
                }
                let t = f.tail(b, x);
                assert!((t - acc).norm() < 1e-12 * (1.0 + acc.norm()), "b={b} x={x}: {t} vs {acc}");
            }
        }
    }

    #[test]
    fn fourier_transform_matches_quadrature() {
        let f = GaussianPulse::from_parts(-0.8, 0.9, 1.5);
        for &k in &[-2.0, -0.8, 0.0, 1.0] {
            let h = 0.005;
            let v: Vec<C64> = (0..3001)
                .map(|i| {
                    let x = -6.0 + i as f64 * h;
                    f.value(x) * C64::new(0.0, -k * x).exp()
                })
                .collect();
            assert!((trapezoid(h, &v) - f.fourier(k)).norm() < 1e-12);
        }
    }

    #[test]
    fn optimum_pulse_is_normalized_when_lossless() {
        for &(g, kappa) in &[(1.0, 10.0), (1.0, 0.5), (1.0, 2.0)] {
            let es = SystemParams::resonant(g, kappa, 0.0).unwrap().eigensystem();
            let phi = OptimumPulse::new(&es, 400.0).unwrap();
            assert!((phi.norm2() - 1.0).abs() < 1e-9, "κ/g={kappa}: {}", phi.norm2());
        }
        let es = SystemParams::resonant(1.0, 5.0, 0.3).unwrap().eigensystem();
        assert!(OptimumPulse::new(&es, 400.0).unwrap().norm2() < 1.0);
    }

    #[test]
    fn overlap_matches_quadrature() {
        let es = SystemParams::resonant(1.0, 3.0, 0.0).unwrap().eigensystem();
        let phi = OptimumPulse::new(&es, 30.0).unwrap();
        let f = GaussianPulse::from_parts(0.3, 2.0, -4.0);
        let rule = GaussLegendre::new(20);
        let mut acc = C64::new(0.0, 0.0);
        let mut lo = -30.0;
        while lo < 0.0 {
            acc += rule.integrate(lo, lo + 0.5, |r| phi.value(r).conj() * f.value(r));
            lo += 0.5;
        }
        assert!((phi.overlap(&f) - acc).norm() < 1e-12);
    }
}
