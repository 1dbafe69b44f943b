//! Gauss–Legendre rules and cumulative exponential-weight integrals on
//! uniform grids.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64 as C64;
use num_traits::Float;

/// Gauss–Legendre nodes and weights on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            // Newton on P_n starting from the Chebyshev-like guess.
            let mut x = Float::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes.push(0.5 * (1.0 - x));
            weights.push(1.0 / ((1.0 - x * x) * dp * dp));
        }
        Self { nodes, weights }
    }

    /// `∫_lo^hi f`.
    pub fn integrate<F: FnMut(f64) -> C64>(&self, lo: f64, hi: f64, mut f: F) -> C64 {
        let w = hi - lo;
        self.nodes.iter().zip(&self.weights).map(|(&t, &wt)| f(lo + w * t) * (wt * w)).sum()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Panel rule used by the cumulative integrals.
pub const PANEL_NODES: usize = 10;

/// Quadrature nodes of every panel `[x_i, x_i + h]`, `i < n − 1`, panel-major.
pub fn panel_nodes(x0: f64, h: f64, n: usize, rule: &GaussLegendre) -> Vec<f64> {
    let mut out = Vec::with_capacity(n.saturating_sub(1) * rule.nodes.len());
    for i in 0..n.saturating_sub(1) {
        let xi = x0 + i as f64 * h;
        out.extend(rule.nodes.iter().map(|t| xi + h * t));
    }
    out
}

/// `R(x_i) = ∫_{x_i}^{x_end} e^{b(s−x_i)} g(s) ds` at every grid point
/// `x_i = x0 + i·h`, `i < n`, from integrand values at [`panel_nodes`]. The
/// integrand is taken as zero beyond the last point; `Re b ≤ 0` keeps the
/// backward recursion stable.
pub fn right_tail_from_nodes(h: f64, n: usize, b: C64, rule: &GaussLegendre, g: &[C64]) -> Vec<C64> {
    let m = rule.nodes.len();
    let kernel: Vec<C64> = rule.nodes.iter().zip(&rule.weights).map(|(&t, &w)| (b * h * t).exp() * (w * h)).collect();
    let step = (b * h).exp();
    let mut out = alloc::vec![C64::new(0.0, 0.0); n];
    for i in (0..n.saturating_sub(1)).rev() {
        let panel: C64 = kernel.iter().zip(&g[i * m..(i + 1) * m]).map(|(k, v)| k * v).sum();
        out[i] = panel + step * out[i + 1];
    }
    out
}

/// `L(x_i) = ∫_{x_0}^{x_i} e^{a(x_i−s)} g(s) ds`, the forward counterpart of
/// [`right_tail_from_nodes`].
pub fn left_tail_from_nodes(h: f64, n: usize, a: C64, rule: &GaussLegendre, g: &[C64]) -> Vec<C64> {
    let m = rule.nodes.len();
    let kernel: Vec<C64> =
        rule.nodes.iter().zip(&rule.weights).map(|(&t, &w)| (a * h * (1.0 - t)).exp() * (w * h)).collect();
    let step = (a * h).exp();
    let mut out = alloc::vec![C64::new(0.0, 0.0); n];
    for i in 1..n {
        let panel: C64 = kernel.iter().zip(&g[(i - 1) * m..i * m]).map(|(k, v)| k * v).sum();
        out[i] = panel + step * out[i - 1];
    }
    out
}

/// [`right_tail_from_nodes`] with the integrand given as a function.
pub fn right_tail_integrals<F: FnMut(f64) -> C64>(
    x0: f64,
    h: f64,
    n: usize,
    b: C64,
    rule: &GaussLegendre,
    g: F,
) -> Vec<C64> {
    let vals: Vec<C64> = panel_nodes(x0, h, n, rule).into_iter().map(g).collect();
    right_tail_from_nodes(h, n, b, rule, &vals)
}

/// [`left_tail_from_nodes`] with the integrand given as a function.
pub fn left_tail_integrals<F: FnMut(f64) -> C64>(
    x0: f64,
    h: f64,
    n: usize,
    a: C64,
    rule: &GaussLegendre,
    g: F,
) -> Vec<C64> {
    let vals: Vec<C64> = panel_nodes(x0, h, n, rule).into_iter().map(g).collect();
    left_tail_from_nodes(h, n, a, rule, &vals)
}

/// Composite trapezoid sum `h·Σ' v_i`.
pub fn trapezoid(h: f64, v: &[C64]) -> C64 {
    match v.len() {
        0 => C64::new(0.0, 0.0),
        1 => C64::new(0.0, 0.0),
        n => h * (v.iter().sum::<C64>() - 0.5 * (v[0] + v[n - 1])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_exact_for_high_degree() {
        let r = GaussLegendre::new(PANEL_NODES);
        assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        for p in 0..(2 * PANEL_NODES) as i32 {
            let v = r.integrate(0.0, 2.0, |x| C64::new(Float::powi(x, p), 0.0));
            let exact = Float::powi(2.0, p + 1) / (p + 1) as f64;
            assert!((v.re - exact).abs() < 1e-13 * exact, "degree {p}");
        }
    }

    #[test]
    fn cumulative_integrals_of_exponential() {
        // ∫_x^X e^{b(s−x)} e^{cs} ds = (e^{(b+c)X − bx} − e^{cx})/(b+c)
        let rule = GaussLegendre::new(PANEL_NODES);
        let (b, c) = (C64::new(-0.7, 2.0), C64::new(-0.2, -0.5));
        let (x0, h, n) = (-3.0, 0.05, 121);
        let xe = x0 + (n - 1) as f64 * h;
        let r = right_tail_integrals(x0, h, n, b, &rule, |s| (c * s).exp());
        for i in [0, 40, 119] {
            let x = x0 + i as f64 * h;
            let exact = (((b + c) * xe - b * x).exp() - (c * x).exp()) / (b + c);
            assert!((r[i] - exact).norm() < 1e-13);
        }
        let l = left_tail_integrals(x0, h, n, b, &rule, |s| (c * s).exp());
        for i in [1, 60, 120] {
            let x = x0 + i as f64 * h;
            // ∫_{x0}^x e^{b(x−s)} e^{cs} ds
            let exact = ((c * x).exp() - (b * x + (c - b) * x0).exp()) / (c - b);
            assert!((l[i] - exact).norm() < 1e-13);
        }
    }
}
