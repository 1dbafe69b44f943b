//! Propagation of one- and two-photon wavepackets and the nonlinearity
//! measure `β`.
//!
//! The two-photon path works on product inputs `f ⊗ f`. On each ordering
//! sector the nonlinear kernel is `Σ C e^{a g1 + b g2 + c g3}` in the gaps of
//! the sorted coordinates, so the inner integrals collapse to nested
//! one-sided exponential transforms of `f`:
//!
//! `ψ_NL(p1, p2) = Σ_a e^{a(p2−p1)} K_a(p2)`, `K_a = Σ C · S_b[f · S_c[f]]`,
//!
//! with `S_b[g](x) = ∫_x^∞ e^{b(s−x)} g(s) ds`. Norms and overlaps then reduce
//! to one-dimensional integrals.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::kernel::KernelSum;
use crate::params::{EigenSystem, PulseParams, SystemParams};
use crate::propagators::TwoPhotonKernel;
use crate::pulse::GaussianPulse;
use crate::quadrature::{
    left_tail_from_nodes, panel_nodes, right_tail_from_nodes, trapezoid, GaussLegendre, PANEL_NODES,
};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Grid construction knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    /// Points per `min(d, 1/λ_min)`.
    pub points_per_scale: f64,
    /// Output tail length in units of `1/λ_min`.
    pub tail_factor: f64,
    /// Input half-width in units of `d`.
    pub sigmas: f64,
    /// Largest tolerated norm fraction lost to the window edges.
    pub truncation_tolerance: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self { points_per_scale: 24.0, tail_factor: 20.0, sigmas: 8.0, truncation_tolerance: 1e-8 }
    }
}

/// Uniform grid `r_min + i·h`, `i < n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub r_min: f64,
    pub h: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(r_min: f64, h: f64, n: usize) -> Result<Self> {
        if !(h > 0.0 && h.is_finite() && r_min.is_finite()) || n < 2 {
            return Err(Error::InvalidParameter(alloc::format!("grid r_min={r_min} h={h} n={n}")));
        }
        Ok(Self { r_min, h, n })
    }

    /// Grid spanning `[lo, hi]` with spacing at most `h`.
    pub fn spanning(lo: f64, hi: f64, h: f64) -> Result<Self> {
        let n = Float::ceil((hi - lo) / h) as usize + 1;
        Self::new(lo, (hi - lo) / (n - 1) as f64, n)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.h
    }

    pub fn r_max(&self) -> f64 {
        self.x(self.n - 1)
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Same window at half the spacing.
    pub fn refined(&self) -> Self {
        Self { r_min: self.r_min, h: 0.5 * self.h, n: 2 * self.n - 1 }
    }

    /// Default window for a Gaussian input: `[a − σd − C/λ, a + σd]` with
    /// `h = min(d, 1/λ)/24`, where `λ` is the slowest decay rate in play.
    pub fn for_pulse(lambda: f64, pulse: &GaussianPulse, opts: &GridOptions) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidParameter("decay rate must be positive".into()));
        }
        let estimate = Float::exp(-2.0 * opts.sigmas * opts.sigmas) + Float::exp(-2.0 * opts.tail_factor);
        if estimate > opts.truncation_tolerance {
            return Err(Error::WindowTruncation { estimate, tolerance: opts.truncation_tolerance });
        }
        let h = pulse.d.min(1.0 / lambda) / opts.points_per_scale;
        let lo = pulse.a - opts.sigmas * pulse.d - opts.tail_factor / lambda;
        let hi = pulse.a + opts.sigmas * pulse.d;
        Self::spanning(lo, hi, h)
    }

    pub fn check_same(&self, other: &Grid1D) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(alloc::format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }
}

fn trapezoid_real(h: f64, v: impl Iterator<Item = f64> + Clone) -> f64 {
    let n = v.clone().count();
    if n < 2 {
        return 0.0;
    }
    let first = v.clone().next().unwrap();
    let last = v.clone().last().unwrap();
    h * (v.sum::<f64>() - 0.5 * (first + last))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction1D {
    pub grid: Grid1D,
    pub values: Vec<C64>,
}

impl Wavefunction1D {
    pub fn sample<F: FnMut(f64) -> C64>(grid: Grid1D, mut f: F) -> Self {
        Self { grid, values: (0..grid.n).map(|i| f(grid.x(i))).collect() }
    }

    pub fn norm2(&self) -> f64 {
        trapezoid_real(self.grid.h, self.values.iter().map(|v| v.norm_sqr()))
    }

    /// `∫ conj(self) · other`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.grid.check_same(&other.grid)?;
        let v: Vec<C64> = self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).collect();
        Ok(trapezoid(self.grid.h, &v))
    }

    /// `‖self − other‖ / ‖other‖`.
    pub fn relative_l2(&self, other: &Self) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        let den = other.norm2();
        if den == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let diff =
            Self { grid: self.grid, values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect() };
        Ok((diff.norm2() / den).sqrt())
    }
}

/// Samples on the square `grid × grid`, row-major in the first coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction2D {
    pub grid: Grid1D,
    pub values: Vec<C64>,
}

impl Wavefunction2D {
    pub fn sample<F: FnMut(f64, f64) -> C64>(grid: Grid1D, mut f: F) -> Self {
        let mut values = Vec::with_capacity(grid.n * grid.n);
        for i in 0..grid.n {
            for j in 0..grid.n {
                values.push(f(grid.x(i), grid.x(j)));
            }
        }
        Self { grid, values }
    }

    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.values[i * self.grid.n + j]
    }

    fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.grid.n {
            0.5 * self.grid.h
        } else {
            self.grid.h
        }
    }

    pub fn norm2(&self) -> f64 {
        let n = self.grid.n;
        let mut acc = 0.0;
        for i in 0..n {
            let wi = self.weight(i);
            for j in 0..n {
                acc += wi * self.weight(j) * self.at(i, j).norm_sqr();
            }
        }
        acc
    }

    /// `∫∫ conj(self) · other`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.grid.check_same(&other.grid)?;
        let n = self.grid.n;
        let mut acc = ZERO;
        for i in 0..n {
            let wi = self.weight(i);
            for j in 0..n {
                acc += wi * self.weight(j) * self.at(i, j).conj() * other.at(i, j);
            }
        }
        Ok(acc)
    }

    /// `max |ψ(r1,r2) − ψ(r2,r1)| / max |ψ|`.
    pub fn symmetry_error(&self) -> f64 {
        let n = self.grid.n;
        let scale = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.at(i, j) - self.at(j, i)).norm());
            }
        }
        worst / scale
    }

    /// `sqrt(∫∫|self − other|²) / sqrt(∫∫|other|²)`.
    pub fn relative_l2(&self, other: &Self) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        let diff =
            Self { grid: self.grid, values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect() };
        let den = other.norm2();
        if den == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok((diff.norm2() / den).sqrt())
    }
}

/// `β = ⟨ψ_L|ψ_out⟩ / (‖ψ_out‖ ‖ψ_L‖)` from sampled wavefunctions.
pub fn beta(out: &Wavefunction2D, linear: &Wavefunction2D) -> Result<C64> {
    let (no, nl) = (out.norm2(), linear.norm2());
    if no == 0.0 || nl == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(linear.inner(out)? / (no * nl).sqrt())
}

/// Applies a one-photon kernel to a sampled input by trapezoid quadrature.
/// The identity part acts exactly; each causal term
/// `c e^{ρ(r−r')}θ(r'−r)` is summed by a backward recursion.
pub fn propagate_one(input: &Wavefunction1D, kernel: &KernelSum) -> Result<Wavefunction1D> {
    if kernel.arity != 2 {
        return Err(Error::InvalidParameter("one-photon kernel must have two coordinates".into()));
    }
    let (n, h) = (input.grid.n, input.grid.h);
    let f = &input.values;
    let mut out = if kernel.identity { f.clone() } else { alloc::vec![ZERO; n] };
    for t in &kernel.terms {
        let rho = t.rates[0];
        if (t.rates[0] + t.rates[1]).norm() > 1e-12 * rho.norm()
            || t.support.len() != 1
            || t.support[0].normal[0] <= 0.0
        {
            return Err(Error::InvalidParameter("kernel term is not a causal difference kernel".into()));
        }
        let step = (-rho * h).exp();
        // Σ_{j>i} h e^{ρ(x_i−x_j)} f_j, plus half weight at both ends.
        let mut b = ZERO;
        let mut last = 0.5 * h * f[n - 1];
        for i in (0..n).rev() {
            if i + 1 < n {
                b = step * (b + h * f[i + 1]);
                last *= step;
            }
            let sum = if i + 1 < n { b - last + 0.5 * h * f[i] } else { ZERO };
            out[i] += t.coeff * sum;
        }
    }
    Ok(Wavefunction1D { grid: input.grid, values: out })
}

/// Closed-form one-photon output for a Gaussian input:
/// `φ = f − κ Σ_j A_j S_{−iω̃_j}[f]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OnePhotonOutput {
    pub pulse: GaussianPulse,
    terms: Vec<(C64, C64)>,
}

impl OnePhotonOutput {
    pub fn new(es: &EigenSystem, pulse: &GaussianPulse) -> Result<Self> {
        es.require_distinct_modes()?;
        let [a1, a2] = es.response_weights();
        let terms = [(a1, es.omega_1), (a2, es.omega_2)]
            .into_iter()
            .filter(|(a, _)| *a != ZERO)
            .map(|(a, w)| (-es.kappa * a, -C64::i() * w))
            .collect();
        Ok(Self { pulse: *pulse, terms })
    }

    pub fn value(&self, x: f64) -> C64 {
        let mut v = self.pulse.value(x);
        for &(c, b) in &self.terms {
            v += c * self.pulse.tail(b, x);
        }
        v
    }

    pub fn sample(&self, grid: Grid1D) -> Wavefunction1D {
        Wavefunction1D::sample(grid, |x| self.value(x))
    }
}

/// Semi-analytic one-photon propagation of a Gaussian.
pub fn propagate_one_gaussian(es: &EigenSystem, pulse: &GaussianPulse, grid: Grid1D) -> Result<Wavefunction1D> {
    Ok(OnePhotonOutput::new(es, pulse)?.sample(grid))
}

/// One exponential branch `e^{a(p2−p1)} K_a(p2)` of the nonlinear output.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub rate: C64,
    pub amplitude: Vec<C64>,
}

/// Norm and overlap integrals of a two-photon scattering run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonNorms {
    /// `∫|φ|²` of the one-photon output.
    pub one_photon: f64,
    /// `‖ψ_L‖²`.
    pub linear: f64,
    /// `‖ψ_NL‖²`.
    pub nonlinear: f64,
    /// `⟨ψ_L|ψ_NL⟩`.
    pub cross: C64,
}

impl TwoPhotonNorms {
    /// `‖ψ_out‖²`.
    pub fn output(&self) -> f64 {
        self.linear + 2.0 * self.cross.re + self.nonlinear
    }

    pub fn beta(&self) -> Result<C64> {
        let out = self.output();
        if !(out > 0.0 && self.linear > 0.0) {
            return Err(Error::ZeroNorm);
        }
        if self.nonlinear == 0.0 && self.cross == ZERO {
            return Ok(C64::new(1.0, 0.0));
        }
        Ok((self.linear + self.cross) / (out * self.linear).sqrt())
    }
}

/// Two-photon scattering of `f ⊗ f` tabulated on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonScattering {
    pub grid: Grid1D,
    /// One-photon output `φ` on the grid.
    pub phi: Vec<C64>,
    /// Branches for `r1 < r2` (index 0) and `r2 < r1` (index 1).
    pub branches: [Vec<Branch>; 2],
    pub norms: TwoPhotonNorms,
}

fn find_or_insert<T>(list: &mut Vec<(C64, T)>, key: C64, tol: f64, make: impl FnOnce() -> T) -> usize {
    if let Some(i) = list.iter().position(|(k, _)| (k - key).norm() <= tol) {
        return i;
    }
    list.push((key, make()));
    list.len() - 1
}

impl TwoPhotonScattering {
    pub fn new(kernel: &TwoPhotonKernel, pulse: &GaussianPulse, grid: Grid1D) -> Result<Self> {
        let es = &kernel.es;
        let one = OnePhotonOutput::new(es, pulse)?;
        let (x0, h, n) = (grid.r_min, grid.h, grid.n);
        let rule = GaussLegendre::new(PANEL_NODES);
        let nodes = panel_nodes(x0, h, n, &rule);
        let f_nodes: Vec<C64> = nodes.iter().map(|&s| pulse.value(s)).collect();
        let phi: Vec<C64> = grid.points().into_iter().map(|x| one.value(x)).collect();
        let tol = 1e-9 * es.fastest_rate();

        let mut inner: Vec<(C64, Vec<C64>)> = Vec::new();
        let mut outer: Vec<(C64, Vec<(C64, Vec<C64>)>)> = Vec::new();
        let mut branches: [Vec<Branch>; 2] = Default::default();
        for (o, slot) in branches.iter_mut().enumerate() {
            for t in kernel.ordered.sectors[o].iter().flatten() {
                if t.powers != [0; 3] {
                    return Err(Error::NonCanonicalKernel(
                        "polynomial gap terms are not supported for product input".into(),
                    ));
                }
                let [a, b, c] = t.rates;
                let ci = find_or_insert(&mut inner, c, tol, || {
                    nodes.iter().zip(&f_nodes).map(|(&s, fv)| fv * pulse.tail(c, s)).collect()
                });
                let bi = find_or_insert(&mut outer, b, tol, Vec::new);
                let per_b = &mut outer[bi].1;
                let ri = find_or_insert(per_b, c, tol, || right_tail_from_nodes(h, n, b, &rule, &inner[ci].1));
                let r = &per_b[ri].1;
                let k = match slot.iter().position(|br: &Branch| (br.rate - a).norm() <= tol) {
                    Some(k) => k,
                    None => {
                        slot.push(Branch { rate: a, amplitude: alloc::vec![ZERO; n] });
                        slot.len() - 1
                    }
                };
                for (dst, v) in slot[k].amplitude.iter_mut().zip(r) {
                    *dst += t.coeff * v;
                }
            }
        }

        let one_photon = trapezoid_real(h, phi.iter().map(|v| v.norm_sqr()));
        let linear = one_photon * one_photon;
        let mut nonlinear = 0.0;
        let mut cross = ZERO;
        let phi_conj_nodes: Vec<C64> = if branches.iter().all(|b| b.is_empty()) {
            Vec::new()
        } else {
            nodes.iter().map(|&s| one.value(s).conj()).collect()
        };
        for slot in &branches {
            for ba in slot {
                for bb in slot {
                    let prod: Vec<C64> = ba.amplitude.iter().zip(&bb.amplitude).map(|(x, y)| x * y.conj()).collect();
                    nonlinear += (-trapezoid(h, &prod) / (ba.rate + bb.rate.conj())).re;
                }
                let m = left_tail_from_nodes(h, n, ba.rate, &rule, &phi_conj_nodes);
                let integrand: Vec<C64> = (0..n).map(|i| phi[i].conj() * ba.amplitude[i] * m[i]).collect();
                cross += trapezoid(h, &integrand);
            }
        }
        Ok(Self { grid, phi, branches, norms: TwoPhotonNorms { one_photon, linear, nonlinear, cross } })
    }

    /// `ψ_NL` at grid indices `(i, j)`.
    pub fn nonlinear_at(&self, i: usize, j: usize) -> C64 {
        let (o, p1, p2) = if i <= j { (0, i, j) } else { (1, j, i) };
        let gap = (p2 - p1) as f64 * self.grid.h;
        self.branches[o].iter().map(|b| (b.rate * gap).exp() * b.amplitude[p2]).sum()
    }

    pub fn linear_wavefunction(&self) -> Wavefunction2D {
        let n = self.grid.n;
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(self.phi[i] * self.phi[j]);
            }
        }
        Wavefunction2D { grid: self.grid, values }
    }

    pub fn nonlinear_wavefunction(&self) -> Wavefunction2D {
        let n = self.grid.n;
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(self.nonlinear_at(i, j));
            }
        }
        Wavefunction2D { grid: self.grid, values }
    }

    pub fn output_wavefunction(&self) -> Wavefunction2D {
        let mut w = self.nonlinear_wavefunction();
        let n = self.grid.n;
        for i in 0..n {
            for j in 0..n {
                w.values[i * n + j] += self.phi[i] * self.phi[j];
            }
        }
        w
    }
}

/// Full two-photon output `ψ_out` for the product input `f ⊗ f`.
pub fn propagate_two(kernel: &TwoPhotonKernel, pulse: &GaussianPulse, grid: Grid1D) -> Result<Wavefunction2D> {
    Ok(TwoPhotonScattering::new(kernel, pulse, grid)?.output_wavefunction())
}

/// Linear reference output `ψ_L = φ ⊗ φ`.
pub fn propagate_linear(es: &EigenSystem, pulse: &GaussianPulse, grid: Grid1D) -> Result<Wavefunction2D> {
    let phi = propagate_one_gaussian(es, pulse, grid)?;
    Ok(Wavefunction2D::sample(grid, |_, _| ZERO)).map(|mut w| {
        let n = grid.n;
        for i in 0..n {
            for j in 0..n {
                w.values[i * n + j] = phi.values[i] * phi.values[j];
            }
        }
        w
    })
}

/// Brute-force `ψ_NL(r1, r2) = ∫∫ G_NL f(s1) f(s2)` by nested composite
/// Gauss–Legendre quadrature over `s1, s2 ∈ (max(r1, r2), a + σd)`, split at
/// `s1 = s2`. Independent of the recursive path; used to cross-check it.
pub fn nonlinear_direct(
    kernel: &TwoPhotonKernel,
    pulse: &GaussianPulse,
    output: Grid1D,
    panel_width: f64,
    sigmas: f64,
) -> Wavefunction2D {
    let rule = GaussLegendre::new(8);
    let hi = pulse.a + sigmas * pulse.d;
    let nodes = |lo: f64, hi: f64| -> Vec<(f64, f64)> {
        let mut v = Vec::new();
        if hi <= lo {
            return v;
        }
        let panels = Float::ceil((hi - lo) / panel_width).max(1.0) as usize;
        let w = (hi - lo) / panels as f64;
        for p in 0..panels {
            let x0 = lo + p as f64 * w;
            for (t, wt) in rule.nodes.iter().zip(&rule.weights) {
                v.push((x0 + w * t, w * wt));
            }
        }
        v
    };
    Wavefunction2D::sample(output, |r1, r2| {
        let m = r1.max(r2).max(pulse.a - sigmas * pulse.d);
        let mut acc = ZERO;
        for (s1, w1) in nodes(m, hi) {
            let f1 = pulse.value(s1) * w1;
            for (s2, w2) in nodes(m, s1).into_iter().chain(nodes(s1, hi)) {
                acc += kernel.ordered.eval(&[r1, r2, s1, s2]) * f1 * pulse.value(s2) * w2;
            }
        }
        acc
    })
}

/// `β` with its grid-halving error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaReport {
    pub beta: C64,
    pub beta_error: f64,
    pub norm_out: f64,
    pub norm_linear: f64,
    pub norm_one_photon: f64,
    pub grid: Grid1D,
}

impl BetaReport {
    pub fn nonlinearity(&self) -> f64 {
        (self.beta - 1.0).norm()
    }
}

/// Slowest decay among the one-photon modes and the nonlinear kernel's gap
/// rates; sets the output tail length.
pub fn window_rate(kernel: &TwoPhotonKernel) -> f64 {
    // A decoupled atom never shows up in the output.
    let mut lam = if kernel.es.g == 0.0 { 0.5 * kernel.es.kappa } else { kernel.es.slowest_decay() };
    for t in kernel.ordered.sectors.iter().flatten().flatten() {
        for r in &t.rates {
            lam = lam.min(-r.re);
        }
    }
    lam
}

/// Computes `β` for a Gaussian product input, estimating the error by
/// repeating the run at half the grid spacing.
pub fn analyze(p: &SystemParams, pulse: &PulseParams, opts: &GridOptions) -> Result<BetaReport> {
    let es = p.eigensystem();
    let kernel = TwoPhotonKernel::new(&es)?;
    analyze_with_kernel(&kernel, pulse, opts)
}

pub fn analyze_with_kernel(kernel: &TwoPhotonKernel, pulse: &PulseParams, opts: &GridOptions) -> Result<BetaReport> {
    pulse.validate(crate::params::DEFAULT_MARGIN)?;
    let f = GaussianPulse::new(pulse);
    let grid = Grid1D::for_pulse(window_rate(kernel), &f, opts)?;
    let coarse = TwoPhotonScattering::new(kernel, &f, grid)?;
    let fine = TwoPhotonScattering::new(kernel, &f, grid.refined())?;
    let b_coarse = coarse.norms.beta()?;
    let beta = fine.norms.beta()?;
    Ok(BetaReport {
        beta,
        beta_error: (beta - b_coarse).norm(),
        norm_out: fine.norms.output(),
        norm_linear: fine.norms.linear,
        norm_one_photon: fine.norms.one_photon,
        grid: fine.grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagators::one_photon_kernel;

    fn setup(g: f64, kappa: f64, gamma: f64) -> EigenSystem {
        SystemParams::resonant(g, kappa, gamma).unwrap().eigensystem()
    }

    #[test]
    fn unit_gaussian_norm() {
        let f = GaussianPulse::from_parts(0.3, 1.0, 0.0);
        let grid = Grid1D::spanning(-10.0, 10.0, 0.05).unwrap();
        let w = Wavefunction1D::sample(grid, |x| f.value(x));
        assert!((w.norm2() - 1.0).abs() < 1e-10);
        let scaled = Wavefunction1D { grid, values: w.values.iter().map(|v| v * C64::new(2.0, -1.0)).collect() };
        assert!((scaled.norm2() - 5.0 * w.norm2()).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_path_matches_closed_form() {
        let es = setup(1.0, 5.0, 0.0);
        let f = GaussianPulse::from_parts(0.0, 2.5, 0.0);
        let grid = Grid1D::spanning(-60.0, 20.0, 0.01).unwrap();
        let input = Wavefunction1D::sample(grid, |x| f.value(x));
        let k = one_photon_kernel(&es).unwrap();
        let numeric = propagate_one(&input, &k).unwrap();
        let exact = propagate_one_gaussian(&es, &f, grid).unwrap();
        let err = numeric.values.iter().zip(&exact.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-4, "max error {err}");
    }

    #[test]
    fn empty_cavity_reflects_resonant_pulse_with_minus_sign() {
        let es = setup(0.0, 2.0, 0.0);
        let f = GaussianPulse::from_parts(0.0, 40.0, 0.0);
        let grid = Grid1D::spanning(-400.0, 400.0, 0.5).unwrap();
        let out = propagate_one_gaussian(&es, &f, grid).unwrap();
        let input = Wavefunction1D::sample(grid, |x| f.value(x));
        let ov = input.inner(&out).unwrap();
        assert!((ov + 1.0).norm() < 2e-3, "overlap {ov}");
    }

    #[test]
    fn one_photon_norms() {
        for &(g, k, ga, d) in &[(1.0, 5.0, 0.0, 2.5), (1.0, 0.5, 0.0, 8.0), (1.0, 10.0, 0.0, 1.0)] {
            let es = setup(g, k, ga);
            let f = GaussianPulse::from_parts(0.3, d, 0.0);
            let lam = es.slowest_decay();
            let grid = Grid1D::for_pulse(lam, &f, &GridOptions::default()).unwrap();
            let n = propagate_one_gaussian(&es, &f, grid).unwrap().norm2();
            assert!((n - 1.0).abs() < 1e-8, "κ/g={k}: {n}");
        }
        let es = setup(1.0, 5.0, 0.2);
        let f = GaussianPulse::from_parts(0.0, 2.5, 0.0);
        let grid = Grid1D::for_pulse(es.slowest_decay(), &f, &GridOptions::default()).unwrap();
        assert!(propagate_one_gaussian(&es, &f, grid).unwrap().norm2() < 1.0);
    }
}
