//! Direct numerical evaluation of the triple integrals `I4`, `I6`, `I8`.
//!
//! Every ω-pole sits in the lower half-plane for real `k`, `q` (the `iδ` of
//! `I4` included), so the ω line is shifted to `Im ω = η > 0`. That is
//! Cauchy's theorem, not an approximation, and the `δ → 0` limit can be
//! taken exactly: `1/(ω − k − q)` stays finite on the shifted line.

use cqed_core::params::EigenSystem;
use cqed_core::propagators::Integral;
use cqed_core::quadrature::GaussLegendre;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub panels: usize,
    pub nodes: usize,
    /// Height of the shifted ω line.
    pub eta: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self { panels: 160, nodes: 8, eta: 1.0 }
    }
}

/// Half-width of the truncated lines, in units of the scale. The integrands
/// fall off at least like `k⁻⁴`, so the cut tails are negligible.
const REACH: f64 = 1000.0;

/// Nodes and weights for `∫_ℝ` via `x = c + s·sinh t`, composite
/// Gauss–Legendre in `t`. Node spacing grows only linearly in `|x|`, which
/// keeps the oscillating tails resolved.
fn real_line(center: f64, scale: f64, s: &QuadratureSettings) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(s.nodes);
    let reach = REACH.asinh();
    let w = 2.0 * reach / s.panels as f64;
    let mut out = Vec::with_capacity(s.panels * s.nodes);
    for p in 0..s.panels {
        let t0 = -reach + p as f64 * w;
        for (t, wt) in rule.nodes.iter().zip(&rule.weights) {
            let t = t0 + w * t;
            out.push((center + scale * t.sinh(), scale * w * wt * t.cosh()));
        }
    }
    out
}

/// `I_n(x, y, z)` by brute-force quadrature over `k`, `q` and `ω`.
pub fn integral_by_quadrature(
    which: Integral,
    x: f64,
    y: f64,
    z: f64,
    es: &EigenSystem,
    s: &QuadratureSettings,
) -> C64 {
    let (wc, w1, w2) = (es.omega_c_t, es.omega_1, es.omega_2);
    let nu = es.nu;
    let scale = es.kappa.max(es.g).max(1e-3);
    let ks = real_line(0.0, scale, s);
    let ws = real_line(0.0, 2.0 * scale, s);
    let i = C64::i();
    let ex: Vec<C64> = ks.iter().map(|&(k, wt)| wt * (i * k * x).exp()).collect();
    let ey: Vec<C64> = ks.iter().map(|&(k, wt)| wt * (i * k * y).exp()).collect();

    let sum: C64 = ws
        .par_iter()
        .map(|&(u, wu)| {
            let w = C64::new(u, s.eta);
            // Single-variable factor of J: 1/((k−ω̃c)(ω−k−ω̃1)(ω−k−ω̃2)).
            let a: Vec<C64> = ks.iter().map(|&(k, _)| 1.0 / ((k - wc) * (w - k - w1) * (w - k - w2))).collect();
            let inner = match which {
                Integral::I4 => {
                    let mut acc = C64::new(0.0, 0.0);
                    for (kk, (&(k, _), ak)) in ks.iter().zip(&a).enumerate() {
                        let fk = ex[kk] * ak;
                        let mut row = C64::new(0.0, 0.0);
                        for (qq, (&(q, _), aq)) in ks.iter().zip(&a).enumerate() {
                            row += ey[qq] * aq / (w - k - q);
                        }
                        acc += fk * row;
                    }
                    acc
                }
                Integral::I6 | Integral::I8 => {
                    let b: Vec<C64> = ks.iter().zip(&a).map(|(&(k, _), ak)| ak / (w - k - wc)).collect();
                    let fx: C64 = b.iter().zip(&ex).map(|(b, e)| b * e).sum();
                    let fy: C64 = b.iter().zip(&ey).map(|(b, e)| b * e).sum();
                    let mut v = fx * fy / ((w - nu[0]) * (w - nu[1]) * (w - nu[2]));
                    if which == Integral::I6 {
                        v *= (w - wc - w1) * (w - wc - w2);
                    }
                    v
                }
            };
            wu * (i * w * z).exp() * inner
        })
        .sum();
    sum
}
