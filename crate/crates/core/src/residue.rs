//! Iterated contour integration of rational functions times exponentials.
//!
//! An integrand is `scale · Π num / Π den · exp(i Σ_c coord_c · E_c(v))`
//! where every factor and every `E_c` is affine in the integration variables
//! `v`. Integrating one variable closes the contour in the half-plane where
//! its exponential decays, sums the enclosed residues, and records the sign
//! condition on the coordinates that selected that half-plane. Repeated
//! factors give higher-order poles, whose residues carry monomials in the
//! coordinates. After all variables are consumed each branch is an
//! [`ExpTerm`].

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::kernel::{ExpTerm, HalfSpace, KernelSum, MAX_ARITY};

pub const MAX_VARS: usize = 3;

/// `Σ vars_v · v + constant + i·delta·δ`, with `δ → 0⁺` after pole selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearForm {
    pub vars: [f64; MAX_VARS],
    pub constant: C64,
    pub delta: f64,
}

impl LinearForm {
    pub fn new(vars: [f64; MAX_VARS], constant: C64) -> Self {
        Self { vars, constant, delta: 0.0 }
    }

    /// Adds `+ i·sign·δ`.
    pub fn with_delta(mut self, sign: f64) -> Self {
        self.delta = sign;
        self
    }

    pub fn is_constant(&self) -> bool {
        self.vars.iter().all(|&c| c == 0.0)
    }

    /// Eliminates variable `var` using the zero of `pole` (which must depend on it).
    fn substitute(&self, var: usize, pole: &LinearForm) -> LinearForm {
        let l = self.vars[var];
        if l == 0.0 {
            return *self;
        }
        let ratio = l / pole.vars[var];
        let mut vars = [0.0; MAX_VARS];
        for (v, out) in vars.iter_mut().enumerate() {
            *out = self.vars[v] - ratio * pole.vars[v];
        }
        vars[var] = 0.0;
        LinearForm { vars, constant: self.constant - ratio * pole.constant, delta: self.delta - ratio * pole.delta }
    }
}

/// Integrand descriptor; `exponent[c]` multiplies coordinate `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalExp {
    pub coords: usize,
    pub exponent: [LinearForm; MAX_ARITY],
    pub numerator: Vec<LinearForm>,
    pub denominator: Vec<LinearForm>,
    pub scale: C64,
}

impl RationalExp {
    /// Integrand whose exponent is `i Σ_c coord_c · v_c` (coordinate `c`
    /// conjugate to variable `c`).
    pub fn diagonal(coords: usize, denominator: Vec<LinearForm>) -> Self {
        let mut exponent = [LinearForm::new([0.0; MAX_VARS], C64::new(0.0, 0.0)); MAX_ARITY];
        for (c, e) in exponent.iter_mut().enumerate().take(coords) {
            e.vars[c] = 1.0;
        }
        Self { coords, exponent, numerator: Vec::new(), denominator, scale: C64::new(1.0, 0.0) }
    }

    fn frequency_scale(&self) -> f64 {
        self.denominator.iter().chain(&self.numerator).map(|f| f.constant.norm()).fold(0.0, f64::max).max(1e-300)
    }
}

#[derive(Debug, Clone)]
struct Partial {
    coeff: C64,
    powers: [u8; MAX_ARITY],
    exponent: [LinearForm; MAX_ARITY],
    num: Vec<LinearForm>,
    den: Vec<LinearForm>,
    support: Vec<HalfSpace>,
}

/// Integrates `integrand` over each variable in `order` along the real line.
pub fn integrate_rational_exp(integrand: &RationalExp, order: &[usize]) -> Result<KernelSum> {
    let scale = integrand.frequency_scale();
    let mut partials = alloc::vec![Partial {
        coeff: integrand.scale,
        powers: [0; MAX_ARITY],
        exponent: integrand.exponent,
        num: integrand.numerator.clone(),
        den: integrand.denominator.clone(),
        support: Vec::new(),
    }];
    for &var in order {
        let mut next = Vec::new();
        for p in &partials {
            integrate_one(p, var, integrand.coords, scale, &mut next)?;
        }
        partials = next;
    }

    let mut terms = Vec::with_capacity(partials.len());
    for p in partials {
        if p.num.iter().chain(&p.den).any(|f| !f.is_constant())
            || p.exponent[..integrand.coords].iter().any(|e| !e.is_constant())
        {
            return Err(Error::InvalidParameter("integration order leaves free variables".into()));
        }
        let mut rates = [C64::new(0.0, 0.0); MAX_ARITY];
        for c in 0..integrand.coords {
            rates[c] = C64::i() * p.exponent[c].constant;
        }
        terms.push(ExpTerm { coeff: p.coeff, powers: p.powers, rates, support: p.support });
    }
    Ok(KernelSum { arity: integrand.coords, terms, identity: false })
}

fn integrate_one(p: &Partial, var: usize, coords: usize, scale: f64, out: &mut Vec<Partial>) -> Result<()> {
    let tol = 1e-10 * scale;
    let degree = p.num.iter().filter(|f| f.vars[var] != 0.0).count() as i64
        - p.den.iter().filter(|f| f.vars[var] != 0.0).count() as i64;

    let mut freq = [0.0; MAX_ARITY];
    for c in 0..coords {
        freq[c] = p.exponent[c].vars[var];
    }
    let oscillates = freq.iter().any(|&f| f != 0.0);
    if degree > -1 || (!oscillates && degree > -2) {
        return Err(Error::NonDecayingIntegrand { variable: var });
    }

    // Pole locations in the complex plane of `var`; the other variables are real.
    let mut poles: Vec<(usize, f64)> = Vec::new();
    for (j, f) in p.den.iter().enumerate() {
        let b = f.vars[var];
        if b == 0.0 {
            continue;
        }
        let mut im = -f.constant.im / b;
        if im.abs() <= tol {
            im = -f.delta / b;
        }
        if im == 0.0 {
            return Err(Error::RealAxisPole { variable: var });
        }
        poles.push((j, im));
    }

    // Upper closure needs freq·coords > 0, i.e. (−freq)·coords < 0.
    let branches: &[(bool, f64)] = if oscillates { &[(true, -1.0), (false, 1.0)] } else { &[(true, 0.0)] };
    for &(upper, nsign) in branches {
        let enclosed: Vec<usize> = poles.iter().filter(|&&(_, im)| (im > 0.0) == upper).map(|&(j, _)| j).collect();
        let orient = if upper { 1.0 } else { -1.0 };
        let mut support = p.support.clone();
        if oscillates {
            let mut n = [0.0; MAX_ARITY];
            for c in 0..coords {
                n[c] = nsign * freq[c];
            }
            support.push(HalfSpace::new(n));
        }
        for group in group_poles(&p.den, &enclosed, var, tol) {
            let pole = p.den[group[0]];
            let order = group.len();
            let leading: f64 = group.iter().map(|&k| p.den[k].vars[var]).product();
            let mut factor = C64::new(0.0, orient * 2.0 * PI) / leading;
            for n in 1..order {
                factor /= n as f64;
            }
            let rest = Partial {
                coeff: p.coeff * factor,
                powers: p.powers,
                exponent: p.exponent,
                num: p.num.clone(),
                den: p.den.iter().enumerate().filter(|(k, _)| !group.contains(k)).map(|(_, f)| *f).collect(),
                support: support.clone(),
            };
            let mut derived = alloc::vec![rest];
            for _ in 1..order {
                derived = derived.iter().flat_map(|t| differentiate(t, var, coords)).collect();
            }
            for t in derived {
                out.push(substitute_pole(t, var, &pole, coords, tol)?);
            }
        }
    }
    Ok(())
}

/// Product-rule derivative of a partial with respect to `var`.
fn differentiate(t: &Partial, var: usize, coords: usize) -> Vec<Partial> {
    let mut out = Vec::new();
    for (i, f) in t.num.iter().enumerate() {
        let l = f.vars[var];
        if l != 0.0 {
            let mut d = t.clone();
            d.num.remove(i);
            d.coeff *= l;
            out.push(d);
        }
    }
    for (j, f) in t.den.iter().enumerate() {
        let l = f.vars[var];
        if l != 0.0 {
            let mut d = t.clone();
            d.den.push(t.den[j]);
            d.coeff *= -l;
            out.push(d);
        }
    }
    for c in 0..coords {
        let e = t.exponent[c].vars[var];
        if e != 0.0 {
            let mut d = t.clone();
            d.powers[c] += 1;
            d.coeff *= C64::new(0.0, e);
            out.push(d);
        }
    }
    out
}

/// Evaluates a partial at the zero of `pole`, folding constant factors into
/// the coefficient.
fn substitute_pole(t: Partial, var: usize, pole: &LinearForm, coords: usize, tol: f64) -> Result<Partial> {
    let mut coeff = t.coeff;
    let mut den = Vec::with_capacity(t.den.len());
    for f in &t.den {
        let s = f.substitute(var, pole);
        if s.is_constant() {
            if s.constant.norm() <= tol {
                return Err(Error::PoleCollision { variable: var });
            }
            coeff /= s.constant;
        } else {
            den.push(s);
        }
    }
    let mut num = Vec::with_capacity(t.num.len());
    for f in &t.num {
        let s = f.substitute(var, pole);
        if s.is_constant() {
            coeff *= s.constant;
        } else {
            num.push(s);
        }
    }
    let mut exponent = t.exponent;
    for e in exponent.iter_mut().take(coords) {
        *e = e.substitute(var, pole);
        e.delta = 0.0;
    }
    Ok(Partial { coeff, powers: t.powers, exponent, num, den, support: t.support })
}

/// Groups enclosed denominator factors that vanish at the same point.
fn group_poles(den: &[LinearForm], enclosed: &[usize], var: usize, tol: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in enclosed {
        let fi = den[i];
        let bi = fi.vars[var];
        let found = groups.iter_mut().find(|g| {
            let fj = den[g[0]];
            let bj = fj.vars[var];
            (0..MAX_VARS).all(|v| (fi.vars[v] / bi - fj.vars[v] / bj).abs() < 1e-12)
                && (fi.constant / bi - fj.constant / bj).norm() <= tol
        });
        match found {
            Some(g) => g.push(i),
            None => groups.push(alloc::vec![i]),
        }
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn single(p: C64) -> KernelSum {
        let den = vec![LinearForm::new([1.0, 0.0, 0.0], -p)];
        integrate_rational_exp(&RationalExp::diagonal(1, den), &[0]).unwrap()
    }

    #[test]
    fn single_pole_lower_half_plane() {
        let p = c(0.7, -0.4);
        let k = single(p);
        for &x in &[-2.0, -0.5, -0.01] {
            let expect = c(0.0, -2.0 * PI) * (C64::i() * p * x).exp();
            assert!((k.eval(&[x]) - expect).norm() < 1e-14);
        }
        for &x in &[0.01, 1.0] {
            assert_eq!(k.eval(&[x]), c(0.0, 0.0));
        }
    }

    #[test]
    fn two_pole_partial_fractions() {
        let (p1, p2) = (c(0.3, -0.5), c(-1.1, -2.0));
        let den = vec![LinearForm::new([1.0, 0.0, 0.0], -p1), LinearForm::new([1.0, 0.0, 0.0], -p2)];
        let k = integrate_rational_exp(&RationalExp::diagonal(1, den), &[0]).unwrap();
        for &x in &[-3.0, -0.2] {
            let expect = c(0.0, -2.0 * PI) * ((C64::i() * p1 * x).exp() - (C64::i() * p2 * x).exp()) / (p1 - p2);
            assert!((k.eval(&[x]) - expect).norm() < 1e-13);
        }
        assert_eq!(k.eval(&[0.5]), c(0.0, 0.0));
    }

    #[test]
    fn delta_prescription_selects_half_plane() {
        // 1/(k − 1 + iδ): pole at 1 − iδ in the lower half-plane.
        let den = vec![LinearForm::new([1.0, 0.0, 0.0], c(-1.0, 0.0)).with_delta(1.0)];
        let k = integrate_rational_exp(&RationalExp::diagonal(1, den), &[0]).unwrap();
        assert!((k.eval(&[-1.0]) - c(0.0, -2.0 * PI) * C64::new(0.0, -1.0).exp()).norm() < 1e-14);
        assert_eq!(k.eval(&[1.0]), c(0.0, 0.0));
        let den = vec![LinearForm::new([1.0, 0.0, 0.0], c(-1.0, 0.0))];
        assert!(matches!(
            integrate_rational_exp(&RationalExp::diagonal(1, den), &[0]),
            Err(Error::RealAxisPole { .. })
        ));
    }

    #[test]
    fn double_pole_gives_linear_prefactor() {
        // ∫dk e^{ikx}/(k−p)² = 2πx e^{ipx} θ(−x)
        let p = c(0.4, -1.0);
        let den = vec![LinearForm::new([1.0, 0.0, 0.0], -p), LinearForm::new([1.0, 0.0, 0.0], -p)];
        let k = integrate_rational_exp(&RationalExp::diagonal(1, den), &[0]).unwrap();
        for &x in &[-2.0, -0.3] {
            let expect = 2.0 * PI * x * (C64::i() * p * x).exp();
            assert!((k.eval(&[x]) - expect).norm() < 1e-13);
        }
        assert_eq!(k.eval(&[0.7]), c(0.0, 0.0));
    }

    #[test]
    fn double_pole_from_factors_of_opposite_sign() {
        // 1/((k−p)(p−k)) = −1/(k−p)²
        let p = c(-0.3, -0.8);
        let den = vec![LinearForm::new([1.0, 0.0, 0.0], -p), LinearForm::new([-1.0, 0.0, 0.0], p)];
        let k = integrate_rational_exp(&RationalExp::diagonal(1, den), &[0]).unwrap();
        let x = -0.9;
        let expect = -2.0 * PI * x * (C64::i() * p * x).exp();
        assert!((k.eval(&[x]) - expect).norm() < 1e-13);
    }

    #[test]
    fn triple_pole_with_simple_neighbour() {
        // ∫dk e^{ikx}/((k−p)³(k−s)), both poles below, x<0:
        // −2πi[ e^{isx}/(s−p)³ + ½ d²/dk²( e^{ikx}/(k−s) )|_p ]
        let (p, s0) = (c(0.2, -0.6), c(-0.5, -1.3));
        let f = |z: C64| LinearForm::new([1.0, 0.0, 0.0], -z);
        let den = vec![f(p), f(p), f(p), f(s0)];
        let k = integrate_rational_exp(&RationalExp::diagonal(1, den), &[0]).unwrap();
        let i = C64::i();
        for &x in &[-1.5, -0.2] {
            let d = p - s0;
            let second = (i * p * x).exp() * ((i * x).powi(2) / d - 2.0 * i * x / (d * d) + 2.0 / (d * d * d));
            let expect = c(0.0, -2.0 * PI) * ((i * s0 * x).exp() / (s0 - p).powi(3) + 0.5 * second);
            assert!((k.eval(&[x]) - expect).norm() < 1e-12, "{} vs {}", k.eval(&[x]), expect);
        }
    }

    #[test]
    fn non_decaying_integrand_rejected() {
        let den = vec![LinearForm::new([1.0, 0.0, 0.0], c(0.0, 1.0))];
        let mut r = RationalExp::diagonal(1, den);
        r.numerator.push(LinearForm::new([1.0, 0.0, 0.0], c(0.0, 0.0)));
        assert!(matches!(integrate_rational_exp(&r, &[0]), Err(Error::NonDecayingIntegrand { .. })));
    }

    #[test]
    fn coupled_variables_match_nested_closed_form() {
        // ∫dk∫dq e^{ikx+iqy} / ((k−p1)(q−k−p2)): k- and q-poles interact.
        let (p1, p2) = (c(0.2, -0.7), c(-0.4, -0.3));
        let den = vec![LinearForm::new([1.0, 0.0, 0.0], -p1), LinearForm::new([-1.0, 1.0, 0.0], -p2)];
        let r = RationalExp::diagonal(2, den);
        let kq = integrate_rational_exp(&r, &[0, 1]).unwrap();
        let qk = integrate_rational_exp(&r, &[1, 0]).unwrap();
        // q first: −2πi e^{i(k+p2)y}θ(−y); then k: −2πi e^{i p1(x+y)}θ(−(x+y)).
        let m2pi = c(0.0, -2.0 * PI);
        for &(x, y) in &[(-0.3, -0.5), (0.2, -0.9), (-1.0, 0.4), (0.5, -0.1)] {
            let expect = if y < 0.0 && x + y < 0.0 {
                m2pi * m2pi * (C64::i() * (p2 * y + p1 * (x + y))).exp()
            } else {
                c(0.0, 0.0)
            };
            assert!((kq.eval(&[x, y]) - expect).norm() < 1e-12, "kq at {x},{y}");
            assert!((qk.eval(&[x, y]) - expect).norm() < 1e-12, "qk at {x},{y}");
        }
    }
}
