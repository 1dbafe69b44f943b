//! Physical parameters of the atom-cavity system, its complex spectrum, and
//! the Gaussian input-pulse description.
//!
//! Units follow ħ = c = 1: frequencies, rates and inverse lengths share one
//! unit, so a pulse length `d` is also a duration.

use alloc::format;
use core::cmp::Ordering;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Relative threshold below which two eigenfrequencies are treated as equal.
pub const DEGENERACY_REL: f64 = 1e-9;

/// Relative κ perturbation applied by [`SystemParams::off_degeneracy`].
pub const DEGENERACY_NUDGE: f64 = 1e-6;

/// Default number of pulse lengths kept between the pulse center and `r = 0`
/// by the validity check on [`PulseParams`].
pub const DEFAULT_MARGIN: f64 = 5.0;

/// Default center position, in units of `d`, used by [`PulseParams::at_default_position`].
pub const DEFAULT_POSITION: f64 = -6.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Atom-cavity coupling.
    pub g: f64,
    /// Atomic transition frequency.
    pub omega_a: f64,
    /// Cavity-mode frequency.
    pub omega_c: f64,
    /// Decay rate of the atom into lateral (non-cavity) modes.
    pub gamma: f64,
    /// Decay rate of the cavity mode through the output mirror.
    pub kappa: f64,
}

impl SystemParams {
    pub fn new(g: f64, omega_a: f64, omega_c: f64, gamma: f64, kappa: f64) -> Result<Self> {
        let p = Self { g, omega_a, omega_c, gamma, kappa };
        p.validate()?;
        Ok(p)
    }

    /// Atom and cavity on resonance at the frequency origin.
    pub fn resonant(g: f64, kappa: f64, gamma: f64) -> Result<Self> {
        Self::new(g, 0.0, 0.0, gamma, kappa)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.g, self.omega_a, self.omega_c, self.gamma, self.kappa];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite system parameter in {self:?}")));
        }
        if self.g < 0.0 {
            return Err(Error::InvalidParameter(format!("g must be non-negative, got {}", self.g)));
        }
        if self.gamma < 0.0 {
            return Err(Error::InvalidParameter(format!("gamma must be non-negative, got {}", self.gamma)));
        }
        if self.kappa <= 0.0 {
            return Err(Error::InvalidParameter(format!("kappa must be positive, got {}", self.kappa)));
        }
        Ok(())
    }

    /// `(ω̃_a, ω̃_c) = (ω_a − iγ/2, ω_c − iκ/2)`.
    pub fn complex_frequencies(&self) -> (C64, C64) {
        (C64::new(self.omega_a, -0.5 * self.gamma), C64::new(self.omega_c, -0.5 * self.kappa))
    }

    /// Coupling constant `4g²/κ` of the equivalent one-dimensional atom.
    pub fn one_d_atom_rate(&self) -> f64 {
        4.0 * self.g * self.g / self.kappa
    }

    pub fn eigensystem(&self) -> EigenSystem {
        EigenSystem::new(self)
    }

    /// The same system with κ scaled by `1 + DEGENERACY_NUDGE`, used to step
    /// off an exceptional point before evaluating residues.
    pub fn off_degeneracy(&self) -> Self {
        Self { kappa: self.kappa * (1.0 + DEGENERACY_NUDGE), ..*self }
    }
}

/// Complex single- and double-excitation spectrum of the damped system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem {
    pub omega_a_t: C64,
    pub omega_c_t: C64,
    /// Roots of `(ω−ω̃_a)(ω−ω̃_c) − g²`, ordered by real then imaginary part.
    pub omega_1: C64,
    pub omega_2: C64,
    /// Roots of `(ω−ω̃_a−ω̃_c)[(ω−2ω̃_c)(ω−ω̃_a−ω̃_c) − 2g²]`, same ordering.
    pub nu: [C64; 3],
    pub g: f64,
    pub kappa: f64,
    pub gamma: f64,
    /// `|ω̃_1 − ω̃_2|` fell below the degeneracy threshold.
    pub degenerate: bool,
}

impl EigenSystem {
    pub fn new(p: &SystemParams) -> Self {
        let (wa, wc) = p.complex_frequencies();
        let g2 = p.g * p.g;
        let [w1, w2] = quadratic_roots(wa + wc, wa * wc - g2);

        let s = wa + wc;
        let [n1, n2] = quadratic_roots(s + 2.0 * wc, 2.0 * wc * s - 2.0 * g2);
        let mut nu = [s, n1, n2];
        sort_roots(&mut nu);

        let mut es = Self {
            omega_a_t: wa,
            omega_c_t: wc,
            omega_1: w1,
            omega_2: w2,
            nu,
            g: p.g,
            kappa: p.kappa,
            gamma: p.gamma,
            degenerate: false,
        };
        es.degenerate = (w1 - w2).norm() < es.degeneracy_threshold();
        es
    }

    /// `ε_deg = 1e−9 · max(|ω̃_1|, |ω̃_2|, κ)`.
    pub fn degeneracy_threshold(&self) -> f64 {
        DEGENERACY_REL * self.omega_1.norm().max(self.omega_2.norm()).max(self.kappa)
    }

    /// Fails when `ω̃_1 ≈ ω̃_2`.
    pub fn require_distinct_modes(&self) -> Result<()> {
        if self.degenerate {
            return Err(Error::Degenerate {
                separation: (self.omega_1 - self.omega_2).norm(),
                threshold: self.degeneracy_threshold(),
            });
        }
        Ok(())
    }

    /// Fails when either the one- or the two-excitation poles coincide.
    pub fn require_nondegenerate(&self) -> Result<()> {
        self.require_distinct_modes()?;
        let thr = self.degeneracy_threshold();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let sep = (self.nu[i] - self.nu[j]).norm();
                if sep < thr {
                    return Err(Error::Degenerate { separation: sep, threshold: thr });
                }
            }
        }
        Ok(())
    }

    /// Coefficients `(A_1, A_2)` of the one-photon response,
    /// `A_1 = (ω̃_2−ω̃_c)/(ω̃_2−ω̃_1)`, `A_2 = (ω̃_1−ω̃_c)/(ω̃_1−ω̃_2)`.
    pub fn response_weights(&self) -> [C64; 2] {
        let (w1, w2, wc) = (self.omega_1, self.omega_2, self.omega_c_t);
        [(w2 - wc) / (w2 - w1), (w1 - wc) / (w1 - w2)]
    }

    /// Slowest amplitude decay rate among the one- and two-excitation modes
    /// and the bare cavity.
    pub fn slowest_decay(&self) -> f64 {
        let mut lam = 0.5 * self.kappa;
        for w in [self.omega_1, self.omega_2].iter().chain(self.nu.iter()) {
            lam = lam.min(-w.im);
        }
        lam
    }

    /// Largest frequency scale present in the spectrum.
    pub fn fastest_rate(&self) -> f64 {
        let mut m = 0.5 * self.kappa;
        for w in [self.omega_1, self.omega_2, self.omega_a_t, self.omega_c_t].iter().chain(self.nu.iter()) {
            m = m.max(w.norm());
        }
        m
    }
}

/// Roots of `ω² − s·ω + p`.
fn quadratic_roots(s: C64, p: C64) -> [C64; 2] {
    let half = 0.5 * s;
    let disc = (half * half - p).sqrt();
    let mut r = [half + disc, half - disc];
    sort_roots(&mut r);
    r
}

/// Ascending real part; near-ties broken by ascending imaginary part.
pub fn sort_roots(roots: &mut [C64]) {
    let scale = roots.iter().fold(1e-300_f64, |m, r| m.max(r.norm()));
    let tie = 1e-12 * scale;
    roots.sort_by(|a, b| {
        if (a.re - b.re).abs() <= tie {
            a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal)
        } else {
            a.re.partial_cmp(&b.re).unwrap_or(Ordering::Equal)
        }
    });
}

/// Input pulse: central frequency `q`, coherence length `d`, center `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseParams {
    pub q: f64,
    pub d: f64,
    pub a: f64,
}

impl PulseParams {
    /// Checks `d > 0` and `a + margin·d < 0`.
    pub fn new(q: f64, d: f64, a: f64, margin: f64) -> Result<Self> {
        let p = Self { q, d, a };
        p.validate(margin)?;
        Ok(p)
    }

    /// Pulse centered at `a = −6d`.
    pub fn at_default_position(q: f64, d: f64) -> Result<Self> {
        Self::new(q, d, DEFAULT_POSITION * d, DEFAULT_MARGIN)
    }

    pub fn validate(&self, margin: f64) -> Result<()> {
        if !(self.q.is_finite() && self.d.is_finite() && self.a.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite pulse parameter in {self:?}")));
        }
        if self.d <= 0.0 {
            return Err(Error::InvalidParameter(format!("pulse length must be positive, got {}", self.d)));
        }
        if self.a + margin * self.d >= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "pulse at a = {} with d = {} reaches r > 0 within {margin} lengths",
                self.a, self.d
            )));
        }
        Ok(())
    }
}

/// The scaling map `(g, ω, γ, κ, q, d, a) → (αg, αω, αγ, ακ, αq, d/α, a/α)`.
pub fn scale_params(p: &SystemParams, pulse: &PulseParams, alpha: f64) -> Result<(SystemParams, PulseParams)> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("scale factor must be positive, got {alpha}")));
    }
    let sys = SystemParams {
        g: alpha * p.g,
        omega_a: alpha * p.omega_a,
        omega_c: alpha * p.omega_c,
        gamma: alpha * p.gamma,
        kappa: alpha * p.kappa,
    };
    let pl = PulseParams { q: alpha * pulse.q, d: pulse.d / alpha, a: pulse.a / alpha };
    Ok((sys, pl))
}

#[cfg(test)]
mod tests {
    use super::*;
    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn complex_frequencies_examples() {
        let p = SystemParams::new(1.0, 0.0, 0.0, 0.0, 5.0).unwrap();
        let (wa, wc) = p.complex_frequencies();
        assert_eq!(wa, C64::new(0.0, 0.0));
        assert_eq!(wc, C64::new(0.0, -2.5));
        let p = SystemParams::new(1.0, 1.0, 0.0, 0.2, 5.0).unwrap();
        assert_eq!(p.complex_frequencies().0, C64::new(1.0, -0.1));
    }

    #[test]
    fn decoupled_roots_are_bare_frequencies() {
        let es = SystemParams::new(0.0, 0.0, 0.0, 0.0, 2.0).unwrap().eigensystem();
        assert!(close(es.omega_1, C64::new(0.0, -1.0), 1e-15));
        assert!(close(es.omega_2, C64::new(0.0, 0.0), 1e-15));
        assert!(!es.degenerate);
    }

    #[test]
    fn strong_coupling_roots() {
        let es = SystemParams::resonant(1.0, 0.5, 0.0).unwrap().eigensystem();
        let split = (1.0_f64 - 0.25 / 16.0).sqrt();
        assert!((split - 0.992_156_741_649_221_9).abs() <= 1e-15);
        assert!(close(es.omega_1, C64::new(-split, -0.125), 1e-14));
        assert!(close(es.omega_2, C64::new(split, -0.125), 1e-14));
        for w in [es.omega_1, es.omega_2] {
            let (wa, wc) = (es.omega_a_t, es.omega_c_t);
            assert!(((w - wa) * (w - wc) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn exceptional_point_is_flagged() {
        let p = SystemParams::resonant(1.0, 4.0, 0.0).unwrap();
        let es = p.eigensystem();
        assert!(es.degenerate);
        assert!(close(es.omega_1, C64::new(0.0, -1.0), 1e-7));
        assert!(matches!(es.require_nondegenerate(), Err(Error::Degenerate { .. })));
        assert!(!p.off_degeneracy().eigensystem().degenerate);
    }

    #[test]
    fn rejects_invalid() {
        assert!(SystemParams::new(1.0, 0.0, 0.0, -0.1, 1.0).is_err());
        assert!(SystemParams::new(1.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(SystemParams::new(f64::NAN, 0.0, 0.0, 0.0, 1.0).is_err());
        assert!(PulseParams::new(0.0, 1.0, -4.0, 5.0).is_err());
        assert!(PulseParams::new(0.0, -1.0, -40.0, 5.0).is_err());
        assert!(scale_params(
            &SystemParams::resonant(1.0, 1.0, 0.0).unwrap(),
            &PulseParams::at_default_position(0.0, 1.0).unwrap(),
            0.0
        )
        .is_err());
    }

    #[test]
    fn scaling_examples() {
        let p = SystemParams::resonant(1.0, 5.0, 0.0).unwrap();
        let pulse = PulseParams::at_default_position(0.0, 3.0).unwrap();
        let (s, pl) = scale_params(&p, &pulse, 1.0).unwrap();
        assert_eq!((s, pl), (p, pulse));
        let (s, pl) = scale_params(&p, &pulse, 2.0).unwrap();
        assert_eq!((s.g, s.kappa, s.gamma, s.omega_a - s.omega_c), (2.0, 10.0, 0.0, 0.0));
        assert_eq!((pl.q, pl.d), (0.0, 1.5));
    }

    #[test]
    fn ordering_breaks_ties_by_imaginary_part() {
        let mut r = [C64::new(0.0, -0.2), C64::new(1e-18, -4.8), C64::new(-1.0, 0.0)];
        sort_roots(&mut r);
        assert_eq!(r[0].re, -1.0);
        assert_eq!(r[1].im, -4.8);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn params() -> impl Strategy<Value = SystemParams> {
            (0.01f64..5.0, -2.0f64..2.0, -2.0f64..2.0, 0.0f64..2.0, 0.01f64..20.0)
                .prop_map(|(g, wa, wc, ga, ka)| SystemParams::new(g, wa, wc, ga, ka).unwrap())
        }

        proptest! {
            #[test]
            fn vieta_identities(p in params()) {
                let es = p.eigensystem();
                let (wa, wc) = (es.omega_a_t, es.omega_c_t);
                let scale = 1.0 + wa.norm() + wc.norm() + p.g;
                prop_assert!(((es.omega_1 + es.omega_2) - (wa + wc)).norm() <= 1e-12 * scale);
                prop_assert!((es.omega_1 * es.omega_2 - (wa * wc - p.g * p.g)).norm() <= 1e-12 * scale * scale);
            }

            #[test]
            fn nu_roots_solve_cubic(p in params()) {
                let es = p.eigensystem();
                let (wa, wc) = (es.omega_a_t, es.omega_c_t);
                let scale = 1.0 + wa.norm() + wc.norm() + p.g;
                for &w in &es.nu {
                    let cubic = (w - wa - wc) * ((w - 2.0 * wc) * (w - wa - wc) - 2.0 * p.g * p.g);
                    prop_assert!(cubic.norm() <= 1e-10 * scale * scale * scale);
                }
            }

            #[test]
            fn all_modes_decay(p in params()) {
                let es = p.eigensystem();
                prop_assert!(es.omega_1.im < 0.0 && es.omega_2.im < 0.0);
                prop_assert!(es.nu.iter().all(|n| n.im < 0.0));
            }

            #[test]
            fn scaling_composes(p in params(), a1 in 0.1f64..10.0, a2 in 0.1f64..10.0) {
                let pulse = PulseParams::at_default_position(0.3, 2.0).unwrap();
                let (s1, l1) = scale_params(&p, &pulse, a1).unwrap();
                let (s12, l12) = scale_params(&s1, &l1, a2).unwrap();
                let (s, l) = scale_params(&p, &pulse, a1 * a2).unwrap();
                for (x, y) in [(s12.g, s.g), (s12.kappa, s.kappa), (s12.gamma, s.gamma), (l12.q, l.q), (l12.d, l.d), (l12.a, l.a)] {
                    prop_assert!((x - y).abs() <= 4.0 * f64::EPSILON * y.abs().max(1e-300));
                }
                prop_assert!((s.one_d_atom_rate() - a1 * a2 * p.one_d_atom_rate()).abs() <= 1e-12 * s.one_d_atom_rate());
            }
        }
    }
}
