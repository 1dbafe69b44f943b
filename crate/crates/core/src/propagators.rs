//! One- and two-photon propagators in the co-moving frame.
//!
//! Coordinates are moving-frame positions: `(r, r')` for one photon and
//! `(r1, r2, r1', r2')` for two, unprimed = output, primed = input. A kernel
//! supported on `r < r'` is causal.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64 as C64;
use num_traits::Float;
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::kernel::{ExpTerm, HalfSpace, KernelSum, MAX_ARITY};
use crate::params::EigenSystem;
use crate::residue::{integrate_rational_exp, LinearForm, RationalExp};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

fn causal(delta: f64) -> bool {
    delta < 0.0
}

/// Smooth part of `G_0(Δ) = δ(Δ) − κθ(−Δ)e^{iω̃_cΔ}`.
pub fn one_photon_g0(delta: f64, es: &EigenSystem) -> C64 {
    if !causal(delta) {
        return ZERO;
    }
    -es.kappa * (C64::i() * es.omega_c_t * delta).exp()
}

/// `G_2(Δ)`, the atom-induced correction to the empty-cavity response.
pub fn one_photon_g2(delta: f64, es: &EigenSystem) -> Result<C64> {
    es.require_distinct_modes()?;
    if !causal(delta) {
        return Ok(ZERO);
    }
    let [a1, a2] = es.response_weights();
    let e = |w: C64| (C64::i() * w * delta).exp();
    Ok(es.kappa * (e(es.omega_c_t) - a1 * e(es.omega_1) - a2 * e(es.omega_2)))
}

/// Smooth part of the full one-photon propagator `G_0 + G_2`.
pub fn one_photon_smooth(delta: f64, es: &EigenSystem) -> Result<C64> {
    Ok(one_photon_g0(delta, es) + one_photon_g2(delta, es)?)
}

fn two_coord_term(coeff: C64, rate: C64) -> ExpTerm {
    // coeff · e^{rate (r − r')} on r − r' < 0
    let mut rates = [ZERO; MAX_ARITY];
    rates[0] = rate;
    rates[1] = -rate;
    ExpTerm { coeff, powers: [0; MAX_ARITY], rates, support: vec![HalfSpace::new([1.0, -1.0, 0.0, 0.0])] }
}

/// `G_0 + G_2` as a kernel in `(r, r')`, identity part flagged.
pub fn one_photon_kernel(es: &EigenSystem) -> Result<KernelSum> {
    es.require_distinct_modes()?;
    let [a1, a2] = es.response_weights();
    let i = C64::i();
    let terms = [(a1, es.omega_1), (a2, es.omega_2)]
        .into_iter()
        .filter(|(a, _)| *a != ZERO)
        .map(|(a, w)| two_coord_term(-es.kappa * a, i * w))
        .collect();
    Ok(KernelSum { arity: 2, terms, identity: true })
}

/// `G_2` alone as a kernel in `(r, r')`.
pub fn g2_kernel(es: &EigenSystem) -> Result<KernelSum> {
    es.require_distinct_modes()?;
    if es.g == 0.0 {
        return Ok(KernelSum::empty(2));
    }
    let [a1, a2] = es.response_weights();
    let i = C64::i();
    let k = es.kappa;
    let terms = vec![
        two_coord_term(C64::new(k, 0.0), i * es.omega_c_t),
        two_coord_term(-k * a1, i * es.omega_1),
        two_coord_term(-k * a2, i * es.omega_2),
    ];
    Ok(KernelSum { arity: 2, terms, identity: false })
}

/// The three triple integrals entering the two-photon kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integral {
    I4,
    I6,
    I8,
}

impl Integral {
    pub const ALL: [Integral; 3] = [Integral::I4, Integral::I6, Integral::I8];

    pub fn name(self) -> &'static str {
        match self {
            Integral::I4 => "I4",
            Integral::I6 => "I6",
            Integral::I8 => "I8",
        }
    }

    /// Power of `g` in the prefactor of the matching kernel piece.
    fn g_power(self) -> i32 {
        match self {
            Integral::I4 => 4,
            Integral::I6 => 6,
            Integral::I8 => 8,
        }
    }
}

/// Integration variables in the order `(k, q, ω)`.
pub const VAR_K: usize = 0;
pub const VAR_Q: usize = 1;
pub const VAR_W: usize = 2;

/// Default integration order: `k`, then `q`, then `ω`.
pub const DEFAULT_ORDER: [usize; 3] = [VAR_K, VAR_Q, VAR_W];

fn lf(k: f64, q: f64, w: f64, c: C64) -> LinearForm {
    LinearForm::new([k, q, w], c)
}

/// Rational integrand of `I_n(x, y, z)` with exponent `e^{ikx + iqy + iωz}`.
pub fn integrand(which: Integral, es: &EigenSystem) -> RationalExp {
    let (wc, w1, w2) = (es.omega_c_t, es.omega_1, es.omega_2);
    // J(ω, q, k)
    let mut den = vec![
        lf(1.0, 0.0, 0.0, -wc),
        lf(-1.0, 0.0, 1.0, -w1),
        lf(-1.0, 0.0, 1.0, -w2),
        lf(0.0, 1.0, 0.0, -wc),
        lf(0.0, -1.0, 1.0, -w1),
        lf(0.0, -1.0, 1.0, -w2),
    ];
    let mut num = Vec::new();
    match which {
        Integral::I4 => {
            // ω − k − q + iδ
            den.push(lf(-1.0, -1.0, 1.0, ZERO).with_delta(1.0));
        }
        Integral::I6 | Integral::I8 => {
            den.push(lf(-1.0, 0.0, 1.0, -wc));
            den.push(lf(0.0, -1.0, 1.0, -wc));
            for &n in &es.nu {
                den.push(lf(0.0, 0.0, 1.0, -n));
            }
            if which == Integral::I6 {
                num.push(lf(0.0, 0.0, 1.0, -wc - w1));
                num.push(lf(0.0, 0.0, 1.0, -wc - w2));
            }
        }
    }
    let mut r = RationalExp::diagonal(3, den);
    r.numerator = num;
    r
}

/// `I_n` reduced to pole-sum form in `(x, y, z)`.
pub fn integral_kernel(which: Integral, es: &EigenSystem, order: &[usize]) -> Result<KernelSum> {
    es.require_nondegenerate()?;
    integrate_rational_exp(&integrand(which, es), order)
}

/// Pointwise `I_n(x, y, z)`; builds the kernel on each call.
pub fn eval_integral(which: Integral, x: f64, y: f64, z: f64, es: &EigenSystem) -> Result<C64> {
    Ok(integral_kernel(which, es, &DEFAULT_ORDER)?.eval(&[x, y, z]))
}

// Rows map (x, y, z) onto (r1, r2, r1', r2').
type ArgMap = [[f64; MAX_ARITY]; 3];

fn argument_maps(which: Integral) -> [ArgMap; 2] {
    const R1: [f64; 4] = [1.0, 0.0, 0.0, 0.0];
    const R2: [f64; 4] = [0.0, 1.0, 0.0, 0.0];
    const S1: [f64; 4] = [0.0, 0.0, 1.0, 0.0];
    const S2: [f64; 4] = [0.0, 0.0, 0.0, 1.0];
    let d = |a: [f64; 4], b: [f64; 4]| [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]];
    match which {
        // I(r1−r2, r1'−r2', r2−r1') + I(r2−r1, r2'−r1', r1−r2')
        Integral::I4 | Integral::I8 => [[d(R1, R2), d(S1, S2), d(R2, S1)], [d(R2, R1), d(S2, S1), d(R1, S2)]],
        // I(r2−r1, r1'−r2', r1−r1') + I(r1−r2, r2'−r1', r2−r2')
        Integral::I6 => [[d(R2, R1), d(S1, S2), d(R1, S1)], [d(R1, R2), d(S2, S1), d(R2, S2)]],
    }
}

/// `G_j` for `j = 4, 6, 8` as a four-coordinate kernel.
pub fn g_piece(which: Integral, es: &EigenSystem, order: &[usize]) -> Result<KernelSum> {
    let base = integral_kernel(which, es, order)?;
    let pref = C64::new(0.0, -Float::powi(es.g, which.g_power()) * es.kappa * es.kappa / (8.0 * PI * PI * PI));
    let [m1, m2] = argument_maps(which);
    let mut out = base.pullback(&m1, 4);
    out.extend(base.pullback(&m2, 4));
    Ok(out.scaled(pref))
}

/// `a(r1, r1') · b(r2, r2')` as a four-coordinate kernel.
fn tensor(a: &KernelSum, b: &KernelSum) -> KernelSum {
    let lift_a = a.pullback(&[[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]], 4);
    let lift_b = b.pullback(&[[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]], 4);
    let mut terms = Vec::with_capacity(a.len() * b.len());
    for ta in &lift_a.terms {
        for tb in &lift_b.terms {
            let mut rates = ta.rates;
            for (r, s) in rates.iter_mut().zip(&tb.rates) {
                *r += s;
            }
            let mut powers = ta.powers;
            for (p, q) in powers.iter_mut().zip(&tb.powers) {
                *p += q;
            }
            let mut support = ta.support.clone();
            support.extend(tb.support.iter().copied());
            terms.push(ExpTerm { coeff: ta.coeff * tb.coeff, powers, rates, support });
        }
    }
    KernelSum { arity: 4, terms, identity: false }
}

/// `G_NL = −G_2⊗G_2 + G_4 + G_6 + G_8`.
pub fn nonlinear_kernel(es: &EigenSystem, order: &[usize]) -> Result<KernelSum> {
    if es.g == 0.0 {
        es.require_distinct_modes()?;
        return Ok(KernelSum::empty(4));
    }
    es.require_nondegenerate()?;
    let g2 = g2_kernel(es)?;
    let mut nl = tensor(&g2, &g2).scaled(C64::new(-1.0, 0.0));
    for which in Integral::ALL {
        nl.extend(g_piece(which, es, order)?);
    }
    Ok(nl)
}

/// `coeff · Π gaps^powers · exp(rates · gaps)` where the gaps are the
/// successive spacings of the sorted coordinates `p1 < p2 < p3 < p4` (two
/// outputs, then two inputs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapTerm {
    pub coeff: C64,
    pub powers: [u8; 3],
    pub rates: [C64; 3],
}

impl GapTerm {
    pub fn eval(&self, g: &[f64; 3]) -> C64 {
        let mut m = self.coeff;
        for k in 0..3 {
            if self.powers[k] > 0 {
                m *= Float::powi(g[k], i32::from(self.powers[k]));
            }
        }
        m * (self.rates[0] * g[0] + self.rates[1] * g[1] + self.rates[2] * g[2]).exp()
    }
}

/// The nonlinear kernel restricted to its support, written per ordering
/// sector as a plain exponential sum in the coordinate gaps.
///
/// `sectors[o][i]`: `o = 0` for `r1 < r2`, `o = 1` for `r2 < r1`; `i = 0` for
/// `r1' < r2'`, `i = 1` for `r2' < r1'`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedKernel {
    pub sectors: [[Vec<GapTerm>; 2]; 2],
}

fn sector_order(out: usize, inp: usize) -> [usize; 4] {
    let (lo_o, hi_o) = if out == 0 { (0, 1) } else { (1, 0) };
    let (lo_i, hi_i) = if inp == 0 { (2, 3) } else { (3, 2) };
    [lo_o, hi_o, lo_i, hi_i]
}

fn gap_vectors(perm: [usize; 4]) -> [[f64; 4]; 3] {
    let mut u = [[0.0; 4]; 3];
    for (k, row) in u.iter_mut().enumerate() {
        for &p in &perm[k + 1..] {
            row[p] = 1.0;
        }
    }
    u
}

const CANONICAL_SAMPLES: usize = 256;

impl OrderedKernel {
    /// Collapses a four-coordinate kernel onto the ordered sectors of
    /// `max(r1, r2) < min(r1', r2')`. Terms whose wedges split a sector are
    /// merged by rate; the merge must give one coefficient per rate across
    /// the whole sector.
    pub fn from_kernel(nl: &KernelSum, rate_scale: f64) -> Result<Self> {
        let rate_tol = 1e-9 * rate_scale;
        let mut rng = SmallRng::seed_from_u64(0x5eed_cafe);
        let samples: Vec<[f64; 3]> = (0..CANONICAL_SAMPLES)
            .map(|_| [rng.gen::<f64>() + 1e-3, rng.gen::<f64>() + 1e-3, rng.gen::<f64>() + 1e-3])
            .collect();

        let mut sectors: [[Vec<GapTerm>; 2]; 2] = Default::default();
        for (out, row) in sectors.iter_mut().enumerate() {
            for (inp, slot) in row.iter_mut().enumerate() {
                let perm = sector_order(out, inp);
                let u = gap_vectors(perm);
                *slot = collapse_sector(nl, perm, &u, &samples, rate_tol).map_err(|e| tag_sector(e, out, inp))?;
            }
        }
        Ok(Self { sectors })
    }

    pub fn term_count(&self) -> usize {
        self.sectors.iter().flatten().map(Vec::len).sum()
    }

    /// Evaluates the kernel; zero outside `max(r1, r2) < min(r1', r2')`.
    pub fn eval(&self, coords: &[f64; 4]) -> C64 {
        let out = usize::from(coords[1] < coords[0]);
        let inp = usize::from(coords[3] < coords[2]);
        let p = sector_order(out, inp);
        let g = [coords[p[1]] - coords[p[0]], coords[p[2]] - coords[p[1]], coords[p[3]] - coords[p[2]]];
        if g[1] <= 0.0 {
            return ZERO;
        }
        self.sectors[out][inp].iter().map(|t| t.eval(&g)).sum()
    }
}

fn tag_sector(e: Error, out: usize, inp: usize) -> Error {
    match e {
        Error::NonCanonicalKernel(m) => Error::NonCanonicalKernel(format!("sector ({out},{inp}): {m}")),
        Error::GrowingTerm(m) => Error::GrowingTerm(format!("sector ({out},{inp}): {m}")),
        other => other,
    }
}

enum Activity {
    Never,
    Always,
    Split(Vec<[f64; 3]>),
}

fn classify(term: &ExpTerm, u: &[[f64; 4]; 3]) -> Result<Activity> {
    let mut split = Vec::new();
    for h in &term.support {
        let total: f64 = h.normal.iter().sum();
        let gn = [dot4(&h.normal, &u[0]), dot4(&h.normal, &u[1]), dot4(&h.normal, &u[2])];
        let scale = h.normal.iter().map(|x| x.abs()).sum::<f64>();
        if total.abs() > 1e-12 * scale {
            return Err(Error::NonCanonicalKernel("support is not translation invariant".into()));
        }
        // gn · g < 0 on the open positive octant
        if gn.iter().all(|&c| c >= 0.0) {
            return Ok(Activity::Never);
        }
        if gn.iter().all(|&c| c <= 0.0) {
            continue;
        }
        split.push(gn);
    }
    Ok(if split.is_empty() { Activity::Always } else { Activity::Split(split) })
}

fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

type GapPoly = Vec<(C64, [u8; 3])>;

fn gap_poly_add(poly: &mut GapPoly, c: C64, p: [u8; 3]) {
    match poly.iter_mut().find(|(_, q)| *q == p) {
        Some(slot) => slot.0 += c,
        None => poly.push((c, p)),
    }
}

/// Monomial of a term rewritten in gaps, anchoring the lowest coordinate at 0.
fn monomial_in_gaps(t: &ExpTerm, perm: [usize; 4]) -> GapPoly {
    let mut poly: GapPoly = vec![(t.coeff, [0; 3])];
    for (j, &p) in t.powers.iter().enumerate() {
        if p == 0 {
            continue;
        }
        let pos = perm.iter().position(|&x| x == j).unwrap();
        if pos == 0 {
            return Vec::new();
        }
        for _ in 0..p {
            let mut next = Vec::new();
            for (c, q) in &poly {
                for k in 0..pos {
                    let mut q2 = *q;
                    q2[k] += 1;
                    gap_poly_add(&mut next, *c, q2);
                }
            }
            poly = next;
        }
    }
    poly
}

struct Group {
    rates: [C64; 3],
    always: GapPoly,
    split: Vec<(GapPoly, Vec<[f64; 3]>)>,
    magnitude: f64,
}

fn collapse_sector(
    nl: &KernelSum,
    perm: [usize; 4],
    u: &[[f64; 4]; 3],
    samples: &[[f64; 3]],
    rate_tol: f64,
) -> Result<Vec<GapTerm>> {
    let mut groups: Vec<Group> = Vec::new();
    for t in &nl.terms {
        let activity = classify(t, u)?;
        if let Activity::Never = activity {
            continue;
        }
        let sum: C64 = t.rates.iter().sum();
        if sum.norm() > rate_tol {
            return Err(Error::NonCanonicalKernel("term is not translation invariant".into()));
        }
        let rates = [
            (0..4).map(|j| t.rates[j] * u[0][j]).sum::<C64>(),
            (0..4).map(|j| t.rates[j] * u[1][j]).sum::<C64>(),
            (0..4).map(|j| t.rates[j] * u[2][j]).sum::<C64>(),
        ];
        let poly = monomial_in_gaps(t, perm);
        let idx = match groups.iter().position(|g| (0..3).all(|k| (g.rates[k] - rates[k]).norm() <= rate_tol)) {
            Some(i) => i,
            None => {
                groups.push(Group { rates, always: Vec::new(), split: Vec::new(), magnitude: 0.0 });
                groups.len() - 1
            }
        };
        let g = &mut groups[idx];
        g.magnitude += poly.iter().map(|(c, _)| c.norm()).sum::<f64>();
        match activity {
            Activity::Always => {
                for (c, p) in poly {
                    gap_poly_add(&mut g.always, c, p);
                }
            }
            Activity::Split(conds) => g.split.push((poly, conds)),
            Activity::Never => unreachable!(),
        }
    }

    let mut out = Vec::new();
    for g in groups {
        let mut total = g.always.clone();
        if !g.split.is_empty() {
            let active = |s: &[f64; 3]| {
                let mut acc = g.always.clone();
                for (poly, conds) in &g.split {
                    if conds.iter().all(|n| n[0] * s[0] + n[1] * s[1] + n[2] * s[2] < 0.0) {
                        for (c, p) in poly {
                            gap_poly_add(&mut acc, *c, *p);
                        }
                    }
                }
                acc
            };
            let mut keys: Vec<[u8; 3]> = g.always.iter().map(|(_, p)| *p).collect();
            for (poly, _) in &g.split {
                for (_, p) in poly {
                    if !keys.contains(p) {
                        keys.push(*p);
                    }
                }
            }
            let coeff_of = |poly: &GapPoly, p: &[u8; 3]| poly.iter().find(|(_, q)| q == p).map_or(ZERO, |(c, _)| *c);
            total = active(&samples[0]);
            for s in &samples[1..] {
                let other = active(s);
                for k in &keys {
                    let spread = (coeff_of(&other, k) - coeff_of(&total, k)).norm();
                    if spread > 1e-8 * g.magnitude {
                        return Err(Error::NonCanonicalKernel(format!(
                            "rates {:?}: coefficient of {k:?} varies by {spread:e} (scale {:e})",
                            g.rates, g.magnitude
                        )));
                    }
                }
            }
        }
        for (coeff, powers) in total {
            if coeff.norm() <= 1e-12 * g.magnitude {
                continue;
            }
            if g.rates.iter().any(|r| r.re >= 0.0) {
                return Err(Error::GrowingTerm(format!("gap rates {:?} with coefficient {coeff}", g.rates)));
            }
            out.push(GapTerm { coeff, powers, rates: g.rates });
        }
    }
    Ok(out)
}

/// Two-photon propagator: linear part `G⊗G` plus the nonlinear correction.
#[derive(Debug, Clone)]
pub struct TwoPhotonKernel {
    pub es: EigenSystem,
    pub one_photon: KernelSum,
    pub nonlinear: KernelSum,
    pub ordered: OrderedKernel,
}

impl TwoPhotonKernel {
    pub fn new(es: &EigenSystem) -> Result<Self> {
        Self::with_order(es, &DEFAULT_ORDER)
    }

    pub fn with_order(es: &EigenSystem, order: &[usize]) -> Result<Self> {
        let one_photon = one_photon_kernel(es)?;
        let nonlinear = nonlinear_kernel(es, order)?;
        let ordered = OrderedKernel::from_kernel(&nonlinear, es.fastest_rate())?;
        Ok(Self { es: *es, one_photon, nonlinear, ordered })
    }

    /// `G_NL(r1, r2, r1', r2')` from the raw term list.
    pub fn nonlinear_at(&self, r1: f64, r2: f64, s1: f64, s2: f64) -> C64 {
        self.nonlinear.eval(&[r1, r2, s1, s2])
    }

    /// Smooth part of `G(r1−r1')G(r2−r2')`; the delta-carrying cross terms are
    /// applied analytically by the scattering layer.
    pub fn linear_smooth_at(&self, r1: f64, r2: f64, s1: f64, s2: f64) -> C64 {
        self.one_photon.eval(&[r1, s1]) * self.one_photon.eval(&[r2, s2])
    }

    /// Smooth part of the full two-photon kernel.
    pub fn smooth_at(&self, r1: f64, r2: f64, s1: f64, s2: f64) -> C64 {
        self.linear_smooth_at(r1, r2, s1, s2) + self.nonlinear_at(r1, r2, s1, s2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SystemParams;

    fn es(g: f64, kappa: f64, gamma: f64) -> EigenSystem {
        SystemParams::resonant(g, kappa, gamma).unwrap().eigensystem()
    }

    #[test]
    fn g0_examples() {
        let e = es(1.0, 2.0, 0.7);
        assert_eq!(one_photon_g0(0.5, &e), ZERO);
        let v = one_photon_g0(-1.0, &e);
        assert!((v - C64::new(-2.0 * (-1.0f64).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn g2_vanishes_without_coupling_and_acausally() {
        let e = es(0.0, 2.0, 0.0);
        for &d in &[-3.0, -0.4, -1e-3] {
            assert!(one_photon_g2(d, &e).unwrap().norm() < 1e-15);
        }
        let e = es(1.0, 5.0, 0.1);
        assert_eq!(one_photon_g2(0.2, &e).unwrap(), ZERO);
        assert!(one_photon_g2(-0.2, &e).unwrap().norm() > 0.0);
        assert!(one_photon_g2(-0.2, &es(1.0, 4.0, 0.0)).is_err());
    }

    #[test]
    fn kernel_matches_pointwise_forms() {
        let e = es(1.0, 5.0, 0.2);
        let k = one_photon_kernel(&e).unwrap();
        for &d in &[-2.0, -0.3, 0.4] {
            let direct = one_photon_smooth(d, &e).unwrap();
            assert!((k.eval(&[d, 0.0]) - direct).norm() < 1e-13);
        }
    }

    /// Frequency response `1 + ∫ G_smooth(Δ) e^{−iωΔ} dΔ` from the kernel terms.
    fn response(e: &EigenSystem, w: f64) -> C64 {
        let k = one_photon_kernel(e).unwrap();
        let mut r = C64::new(1.0, 0.0);
        for t in &k.terms {
            // ∫_{−∞}^0 c e^{(ρ − iω)Δ} dΔ = c/(ρ − iω)
            r += t.coeff / (t.rates[0] - C64::new(0.0, w));
        }
        r
    }

    #[test]
    fn empty_cavity_reflects_with_unit_modulus() {
        let e = es(0.0, 2.0, 0.0);
        for i in 0..41 {
            let w = -10.0 + 0.5 * i as f64;
            assert!((response(&e, w).norm() - 1.0).abs() < 1e-13);
        }
        assert!((response(&e, 0.0) + 1.0).norm() < 1e-13);
    }

    #[test]
    fn response_bounded_by_one() {
        for &(g, k, ga) in &[(1.0, 5.0, 0.0), (1.0, 0.5, 0.0), (1.0, 5.0, 0.3), (0.4, 1.0, 1.0)] {
            let e = es(g, k, ga);
            for i in 0..81 {
                let w = -8.0 + 0.2 * i as f64;
                let m = response(&e, w).norm();
                if ga == 0.0 {
                    assert!((m - 1.0).abs() < 1e-12);
                } else {
                    assert!(m <= 1.0 + 1e-12);
                }
            }
        }
    }
}
