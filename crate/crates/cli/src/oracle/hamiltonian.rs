use std::f64::consts::SQRT_2;

use cqed_core::params::SystemParams;
use cqed_core::Result;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::basis::ModeBasis;

/// Excitation-number sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    One,
    Two,
}

/// Index of `(n, m)`, `n ≤ m`, in the packed upper triangle of an `size × size` table.
pub fn pair_index(n: usize, m: usize, size: usize) -> usize {
    debug_assert!(n <= m && m < size);
    n * (2 * size - n + 1) / 2 + (m - n)
}

/// State ordering of a sector.
///
/// One excitation: atom, cavity, `b_k`, `d_μ`.
/// Two excitations: `σ₊c†`, `c†²`, `σ₊b_k†`, `c†b_k†`, `b_k†b_q†` (k ≤ q),
/// then `σ₊d_μ†`, `c†d_μ†`, `d_μ†b_k†`, `d_μ†d_ν†` (μ ≤ ν) when lossy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub sector: Sector,
    pub nb: usize,
    pub nd: usize,
}

impl Layout {
    pub fn new(sector: Sector, basis: &ModeBasis) -> Self {
        Self { sector, nb: basis.n_b(), nd: basis.n_d() }
    }

    pub fn dim(&self) -> usize {
        match self.sector {
            Sector::One => 2 + self.nb + self.nd,
            Sector::Two => self.lossy_base() + 2 * self.nd + self.nd * self.nb + self.nd * (self.nd + 1) / 2,
        }
    }

    // One-excitation states.
    pub const ATOM: usize = 0;
    pub const CAVITY: usize = 1;

    pub fn b(&self, n: usize) -> usize {
        2 + n
    }

    pub fn d(&self, m: usize) -> usize {
        2 + self.nb + m
    }

    // Two-excitation states.
    pub const EC: usize = 0;
    pub const CC: usize = 1;

    pub fn eb(&self, n: usize) -> usize {
        2 + n
    }

    pub fn cb(&self, n: usize) -> usize {
        2 + self.nb + n
    }

    pub fn bb(&self, n: usize, m: usize) -> usize {
        let (n, m) = if n <= m { (n, m) } else { (m, n) };
        2 + 2 * self.nb + pair_index(n, m, self.nb)
    }

    fn lossy_base(&self) -> usize {
        2 + 2 * self.nb + self.nb * (self.nb + 1) / 2
    }

    pub fn ed(&self, m: usize) -> usize {
        self.lossy_base() + m
    }

    pub fn cd(&self, m: usize) -> usize {
        self.lossy_base() + self.nd + m
    }

    pub fn db(&self, m: usize, n: usize) -> usize {
        self.lossy_base() + 2 * self.nd + m * self.nb + n
    }

    pub fn dd(&self, m: usize, l: usize) -> usize {
        let (m, l) = if m <= l { (m, l) } else { (l, m) };
        self.lossy_base() + 2 * self.nd + self.nd * self.nb + pair_index(m, l, self.nd)
    }

    /// States with the atom or the cavity excited.
    pub fn matter_states(&self) -> Vec<usize> {
        match self.sector {
            Sector::One => vec![Self::ATOM, Self::CAVITY],
            Sector::Two => {
                let mut v = vec![Self::EC, Self::CC];
                v.extend((0..self.nb).map(|n| self.eb(n)));
                v.extend((0..self.nb).map(|n| self.cb(n)));
                v.extend((0..self.nd).map(|m| self.ed(m)));
                v.extend((0..self.nd).map(|m| self.cd(m)));
                v
            }
        }
    }
}

/// Real symmetric matrix in compressed-row form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetric {
    pub dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl SparseSymmetric {
    /// From upper-triangle entries `(i, j, v)` with `i ≤ j`; mirrored below
    /// the diagonal.
    pub fn from_upper(dim: usize, upper: &[(u32, u32, f64)]) -> Self {
        let mut count = vec![0usize; dim + 1];
        for &(i, j, _) in upper {
            count[i as usize + 1] += 1;
            if i != j {
                count[j as usize + 1] += 1;
            }
        }
        for r in 0..dim {
            count[r + 1] += count[r];
        }
        let nnz = count[dim];
        let mut fill = count.clone();
        let mut cols = vec![0u32; nnz];
        let mut vals = vec![0.0; nnz];
        let mut put = |r: u32, c: u32, v: f64| {
            let k = fill[r as usize];
            cols[k] = c;
            vals[k] = v;
            fill[r as usize] += 1;
        };
        for &(i, j, v) in upper {
            put(i, j, v);
            if i != j {
                put(j, i, v);
            }
        }
        let mut m = Self { dim, row_ptr: count, cols, vals };
        m.sort_rows();
        m
    }

    fn sort_rows(&mut self) {
        for r in 0..self.dim {
            let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
            let mut row: Vec<(u32, f64)> =
                self.cols[a..b].iter().copied().zip(self.vals[a..b].iter().copied()).collect();
            row.sort_by_key(|e| e.0);
            for (k, (c, v)) in row.into_iter().enumerate() {
                self.cols[a + k] = c;
                self.vals[a + k] = v;
            }
        }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        self.cols[a..b].iter().zip(&self.vals[a..b]).map(|(&c, &v)| (c as usize, v))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        match self.cols[a..b].binary_search(&(j as u32)) {
            Ok(k) => self.vals[a + k],
            Err(_) => 0.0,
        }
    }

    /// `max |H_ij − H_ji|` over stored entries.
    pub fn asymmetry(&self) -> f64 {
        (0..self.dim).flat_map(|i| self.row(i).map(move |(j, v)| (i, j, v))).fold(0.0, |m, (i, j, v)| {
            let t = self.get(j, i);
            m.max((v - t).abs())
        })
    }

    /// Gershgorin enclosure `[lo, hi]` of the spectrum.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        (0..self.dim).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            let mut diag = 0.0;
            let mut off = 0.0;
            for (c, v) in self.row(r) {
                if c == r {
                    diag += v;
                } else {
                    off += v.abs();
                }
            }
            (lo.min(diag - off), hi.max(diag + off))
        })
    }

    /// Extreme eigenvalue estimates from `steps` Lanczos iterations on a
    /// fixed pseudo-random start vector. Ritz values lie inside the true
    /// spectrum, so callers add a margin.
    pub fn lanczos_extremes(&self, steps: usize) -> (f64, f64) {
        let n = self.dim;
        let mut v: Vec<f64> = (0..n).map(|i| ((i as f64 + 1.0) * 12.9898).sin().fract() - 0.5).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        let mut prev = vec![0.0; n];
        let mut w = vec![0.0; n];
        let (mut alpha, mut beta) = (Vec::new(), Vec::new());
        let mut b_prev = 0.0;
        for _ in 0..steps.min(n) {
            for (r, out) in w.iter_mut().enumerate() {
                *out = self.row(r).map(|(c, x)| x * v[c]).sum();
            }
            let a: f64 = w.iter().zip(&v).map(|(x, y)| x * y).sum();
            for i in 0..n {
                w[i] -= a * v[i] + b_prev * prev[i];
            }
            alpha.push(a);
            let b = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if b < 1e-12 * (1.0 + a.abs()) {
                break;
            }
            beta.push(b);
            std::mem::swap(&mut prev, &mut v);
            for i in 0..n {
                v[i] = w[i] / b;
            }
            b_prev = b;
        }
        beta.truncate(alpha.len().saturating_sub(1));
        (tridiagonal_extreme(&alpha, &beta, false), tridiagonal_extreme(&alpha, &beta, true))
    }

    /// `y = H x`.
    pub fn apply(&self, x: &[C64], y: &mut [C64]) {
        y.par_iter_mut().with_min_len(4096).enumerate().for_each(|(r, out)| {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += x[self.cols[k] as usize] * self.vals[k];
            }
            *out = acc;
        });
    }

    /// One Chebyshev recurrence step on `H_s = (H − shift)/scale`:
    /// `prev ← 2 H_s cur − prev`, then `acc += coeff · prev`.
    pub(crate) fn chebyshev_step(
        &self,
        cur: &[C64],
        prev: &mut [C64],
        acc: &mut [C64],
        shift: f64,
        scale: f64,
        coeff: C64,
    ) {
        let two_over = 2.0 / scale;
        prev.par_iter_mut().zip(acc.par_iter_mut()).with_min_len(4096).enumerate().for_each(|(r, (p, a))| {
            let mut hx = -shift * cur[r];
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                hx += cur[self.cols[k] as usize] * self.vals[k];
            }
            let next = two_over * hx - *p;
            *p = next;
            *a += coeff * next;
        });
    }
}

/// Smallest or largest eigenvalue of the symmetric tridiagonal matrix with
/// diagonal `a` and off-diagonal `b`, by Sturm-sequence bisection.
fn tridiagonal_extreme(a: &[f64], b: &[f64], largest: bool) -> f64 {
    let n = a.len();
    let radius =
        (0..n).map(|i| a[i].abs() + b.get(i).map_or(0.0, |x| x.abs()) + if i > 0 { b[i - 1].abs() } else { 0.0 });
    let r = radius.fold(0.0, f64::max);
    // Number of eigenvalues below x.
    let below = |x: f64| -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..n {
            let off = if i > 0 { b[i - 1] * b[i - 1] } else { 0.0 };
            d = a[i] - x - if i > 0 { off / d } else { 0.0 };
            if d == 0.0 {
                d = -1e-300;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    let target = if largest { n - 1 } else { 0 };
    let (mut lo, mut hi) = (-r - 1.0, r + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if below(mid) > target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Discretized Hamiltonian of the atom-cavity system restricted to one
/// excitation sector, in the basis of [`Layout`].
pub fn build_hamiltonian(p: &SystemParams, basis: &ModeBasis, sector: Sector) -> Result<SparseSymmetric> {
    p.validate()?;
    let lay = Layout::new(sector, basis);
    let (wa, wc, g) = (p.omega_a, p.omega_c, p.g);
    let (v, w) = (basis.kappa_coupling, basis.gamma_coupling);
    let (kb, md) = (&basis.external, &basis.lateral);
    let mut e: Vec<(u32, u32, f64)> = Vec::new();
    let mut add = |i: usize, j: usize, x: f64| {
        if x != 0.0 || i == j {
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            e.push((i as u32, j as u32, x));
        }
    };
    match sector {
        Sector::One => {
            add(Layout::ATOM, Layout::ATOM, wa);
            add(Layout::CAVITY, Layout::CAVITY, wc);
            add(Layout::ATOM, Layout::CAVITY, g);
            for (n, &k) in kb.iter().enumerate() {
                add(lay.b(n), lay.b(n), k);
                add(Layout::CAVITY, lay.b(n), v);
            }
            for (m, &mu) in md.iter().enumerate() {
                add(lay.d(m), lay.d(m), mu);
                add(Layout::ATOM, lay.d(m), w);
            }
        }
        Sector::Two => {
            add(Layout::EC, Layout::EC, wa + wc);
            add(Layout::CC, Layout::CC, 2.0 * wc);
            add(Layout::EC, Layout::CC, SQRT_2 * g);
            for (n, &k) in kb.iter().enumerate() {
                add(lay.eb(n), lay.eb(n), wa + k);
                add(lay.cb(n), lay.cb(n), wc + k);
                add(lay.eb(n), lay.cb(n), g);
                add(Layout::EC, lay.eb(n), v);
                add(Layout::CC, lay.cb(n), SQRT_2 * v);
                for (m, &q) in kb.iter().enumerate().skip(n) {
                    add(lay.bb(n, m), lay.bb(n, m), k + q);
                    if m == n {
                        add(lay.cb(n), lay.bb(n, n), SQRT_2 * v);
                    } else {
                        add(lay.cb(n), lay.bb(n, m), v);
                        add(lay.cb(m), lay.bb(n, m), v);
                    }
                }
            }
            for (m, &mu) in md.iter().enumerate() {
                add(lay.ed(m), lay.ed(m), wa + mu);
                add(lay.cd(m), lay.cd(m), wc + mu);
                add(lay.ed(m), lay.cd(m), g);
                add(Layout::EC, lay.cd(m), w);
                for (n, &k) in kb.iter().enumerate() {
                    add(lay.db(m, n), lay.db(m, n), mu + k);
                    add(lay.cd(m), lay.db(m, n), v);
                    add(lay.eb(n), lay.db(m, n), w);
                }
                for (l, &nu) in md.iter().enumerate().skip(m) {
                    add(lay.dd(m, l), lay.dd(m, l), mu + nu);
                    if l == m {
                        add(lay.ed(m), lay.dd(m, m), SQRT_2 * w);
                    } else {
                        add(lay.ed(m), lay.dd(m, l), w);
                        add(lay.ed(l), lay.dd(m, l), w);
                    }
                }
            }
        }
    }
    Ok(SparseSymmetric::from_upper(lay.dim(), &e))
}
