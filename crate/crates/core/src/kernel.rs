//! Pole-sum normal form: finite sums of complex exponentials (with optional
//! monomial prefactors from higher-order poles), each living on a wedge cut
//! out by homogeneous half-spaces.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use num_complex::Complex64 as C64;
use num_traits::Float;

use crate::error::{Error, Result};

/// Largest coordinate count carried by a kernel.
pub const MAX_ARITY: usize = 4;

/// Half-space `normal · coords < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpace {
    pub normal: [f64; MAX_ARITY],
}

impl HalfSpace {
    pub fn new(normal: [f64; MAX_ARITY]) -> Self {
        Self { normal }
    }

    pub fn contains(&self, coords: &[f64]) -> bool {
        dot(&self.normal, coords) < 0.0
    }
}

/// `coeff · Π coords_j^{powers_j} · exp(Σ rates_j · coords_j)` on the
/// intersection of `support`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpTerm {
    pub coeff: C64,
    pub powers: [u8; MAX_ARITY],
    pub rates: [C64; MAX_ARITY],
    pub support: Vec<HalfSpace>,
}

impl ExpTerm {
    pub fn in_support(&self, coords: &[f64]) -> bool {
        self.support.iter().all(|h| h.contains(coords))
    }

    /// Value of the term, zero outside its wedge.
    pub fn eval(&self, coords: &[f64]) -> C64 {
        if !self.in_support(coords) {
            return C64::new(0.0, 0.0);
        }
        let mut e = C64::new(0.0, 0.0);
        let mut m = 1.0;
        for ((r, &p), &c) in self.rates.iter().zip(&self.powers).zip(coords) {
            e += r * c;
            m *= Float::powi(c, i32::from(p));
        }
        self.coeff * m * e.exp()
    }

    pub fn is_pure_exponential(&self) -> bool {
        self.powers.iter().all(|&p| p == 0)
    }
}

/// Real polynomial as `(coefficient, powers)` pairs.
pub(crate) type Poly = Vec<(f64, [u8; MAX_ARITY])>;

pub(crate) fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out: Poly = Vec::new();
    for (ca, pa) in a {
        for (cb, pb) in b {
            let mut p = *pa;
            for (x, y) in p.iter_mut().zip(pb) {
                *x += y;
            }
            poly_add_term(&mut out, ca * cb, p);
        }
    }
    out
}

pub(crate) fn poly_add_term(poly: &mut Poly, c: f64, p: [u8; MAX_ARITY]) {
    match poly.iter_mut().find(|(_, q)| *q == p) {
        Some(slot) => slot.0 += c,
        None => poly.push((c, p)),
    }
}

/// `(Σ_j row_j x_j)^power`.
fn linear_power(row: &[f64; MAX_ARITY], power: u8) -> Poly {
    let mut lin: Poly = Vec::new();
    for (j, &r) in row.iter().enumerate() {
        if r != 0.0 {
            let mut p = [0; MAX_ARITY];
            p[j] = 1;
            lin.push((r, p));
        }
    }
    let mut acc: Poly = alloc::vec![(1.0, [0; MAX_ARITY])];
    for _ in 0..power {
        acc = poly_mul(&acc, &lin);
    }
    acc
}

/// A kernel written as a sum of [`ExpTerm`]s, optionally plus the identity
/// `δ(r − r')` (one-photon kernels only).
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSum {
    pub arity: usize,
    pub terms: Vec<ExpTerm>,
    pub identity: bool,
}

impl KernelSum {
    pub fn empty(arity: usize) -> Self {
        Self { arity, terms: Vec::new(), identity: false }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smooth part at `coords`; the identity part is never sampled.
    pub fn eval(&self, coords: &[f64]) -> C64 {
        debug_assert_eq!(coords.len(), self.arity);
        self.terms.iter().map(|t| t.eval(coords)).sum()
    }

    /// Largest single-term magnitude at `coords`.
    pub fn local_magnitude(&self, coords: &[f64]) -> f64 {
        self.terms.iter().map(|t| t.eval(coords).norm()).fold(0.0, f64::max)
    }

    pub fn scaled(mut self, factor: C64) -> Self {
        for t in &mut self.terms {
            t.coeff *= factor;
        }
        self
    }

    pub fn extend(&mut self, other: KernelSum) {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        self.identity |= other.identity;
        self.terms.extend(other.terms);
    }

    /// Pulls the kernel back along `old = map · new`, where `map` has one row
    /// per old coordinate and `arity` columns.
    pub fn pullback(&self, map: &[[f64; MAX_ARITY]], arity: usize) -> Self {
        assert_eq!(map.len(), self.arity);
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut rates = [C64::new(0.0, 0.0); MAX_ARITY];
            for (row, r) in map.iter().zip(&t.rates) {
                for j in 0..arity {
                    rates[j] += r * row[j];
                }
            }
            let support = t
                .support
                .iter()
                .map(|h| {
                    let mut n = [0.0; MAX_ARITY];
                    for (row, &hn) in map.iter().zip(&h.normal) {
                        for j in 0..arity {
                            n[j] += hn * row[j];
                        }
                    }
                    HalfSpace::new(n)
                })
                .collect::<Vec<_>>();
            let mut poly: Poly = alloc::vec![(1.0, [0; MAX_ARITY])];
            for (row, &p) in map.iter().zip(&t.powers) {
                if p > 0 {
                    poly = poly_mul(&poly, &linear_power(row, p));
                }
            }
            for (c, powers) in poly {
                if c != 0.0 {
                    terms.push(ExpTerm { coeff: t.coeff * c, powers, rates, support: support.clone() });
                }
            }
        }
        Self { arity, terms, identity: false }
    }

    /// Plain-text listing, one term per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# arity={} terms={} identity={}", self.arity, self.terms.len(), self.identity);
        for t in &self.terms {
            let _ = write!(s, "coeff=({:+.17e},{:+.17e}) ", t.coeff.re, t.coeff.im);
            if !t.is_pure_exponential() {
                let _ = write!(s, "powers={:?} ", &t.powers[..self.arity]);
            }
            s.push_str("rates=[");
            for (j, r) in t.rates[..self.arity].iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                let _ = write!(s, "({:+.17e},{:+.17e})", r.re, r.im);
            }
            s.push_str("] support=[");
            for (j, h) in t.support.iter().enumerate() {
                if j > 0 {
                    s.push_str(" & ");
                }
                let mut first = true;
                for (k, &n) in h.normal[..self.arity].iter().enumerate() {
                    if n == 0.0 {
                        continue;
                    }
                    if !first || n < 0.0 {
                        s.push(if n < 0.0 { '-' } else { '+' });
                    }
                    first = false;
                    if n.abs() != 1.0 {
                        let _ = write!(s, "{}*", n.abs());
                    }
                    let _ = write!(s, "c{k}");
                }
                s.push_str("<0");
            }
            s.push_str("]\n");
        }
        s
    }

    /// Checks that no term of a three-coordinate kernel grows along an
    /// extreme ray of its wedge. Purely oscillatory rays are allowed; with
    /// `strict` they are rejected too.
    pub fn check_decay_3d(&self, strict: bool) -> Result<()> {
        assert_eq!(self.arity, 3);
        for (i, t) in self.terms.iter().enumerate() {
            if t.coeff == C64::new(0.0, 0.0) {
                continue;
            }
            let rays = extreme_rays_3d(&t.support)
                .ok_or_else(|| Error::GrowingTerm(alloc::format!("term {i}: wedge contains a line")))?;
            for r in rays {
                let growth: f64 = (0..3).map(|j| t.rates[j].re * r[j]).sum();
                let scale: f64 = (0..3).map(|j| t.rates[j].norm()).sum::<f64>() + 1e-300;
                let limit = if strict { -1e-12 * scale } else { 1e-12 * scale };
                if growth >= limit {
                    return Err(Error::GrowingTerm(alloc::format!("term {i}: growth {growth:e} along ray {r:?}")));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Extreme rays of the closed cone `{c : n_i · c ≤ 0}` in three dimensions,
/// or `None` when the cone contains a line.
fn extreme_rays_3d(support: &[HalfSpace]) -> Option<Vec<[f64; 3]>> {
    let normals: Vec<[f64; 3]> = support.iter().map(|h| [h.normal[0], h.normal[1], h.normal[2]]).collect();
    let mut rays: Vec<[f64; 3]> = Vec::new();
    let inside = |r: &[f64; 3]| normals.iter().all(|n| dot(n, r) <= 1e-12 * norm3(n) * norm3(r));
    for i in 0..normals.len() {
        for j in (i + 1)..normals.len() {
            let c = cross(&normals[i], &normals[j]);
            if norm3(&c) < 1e-12 {
                continue;
            }
            for cand in [c, [-c[0], -c[1], -c[2]]] {
                if inside(&cand) {
                    let n = norm3(&cand);
                    rays.push([cand[0] / n, cand[1] / n, cand[2] / n]);
                }
            }
        }
    }
    // A pointed cone with nonempty interior has at least three extreme rays.
    let rank_full = normals.len() >= 3 && rays.len() >= 3;
    if !rank_full {
        return None;
    }
    // Reject cones containing a line: two opposite rays.
    for a in &rays {
        for b in &rays {
            if (a[0] + b[0]).abs() + (a[1] + b[1]).abs() + (a[2] + b[2]).abs() < 1e-12 {
                return None;
            }
        }
    }
    Some(rays)
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm3(a: &[f64; 3]) -> f64 {
    Float::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])
}
