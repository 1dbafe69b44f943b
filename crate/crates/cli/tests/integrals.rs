use cqed::oracle::integrals::{integral_by_quadrature, QuadratureSettings};
use cqed_core::params::SystemParams;
use cqed_core::propagators::{eval_integral, Integral};

const POINTS: [(f64, f64, [f64; 3]); 3] =
    [(5.0, 0.0, [-0.3, -0.2, -1.0]), (0.8, 0.1, [-0.4, -0.7, -0.5]), (2.0, 0.3, [-0.6, -0.3, -1.2])];

#[test]
fn residue_sums_match_brute_force_quadrature() {
    let s = QuadratureSettings::default();
    for &(kappa, gamma, [x, y, z]) in &POINTS {
        let es = SystemParams::resonant(1.0, kappa, gamma).unwrap().eigensystem();
        for which in Integral::ALL {
            let exact = eval_integral(which, x, y, z, &es).unwrap();
            let quad = integral_by_quadrature(which, x, y, z, &es, &s);
            let rel = (exact - quad).norm() / exact.norm();
            assert!(rel <= 0.01, "{} κ={kappa} γ={gamma}: {exact} vs {quad} ({rel:e})", which.name());
        }
    }
}

#[test]
fn quadrature_is_converged() {
    // Refining the rule moves the answer by well under the 1% tolerance.
    let es = SystemParams::resonant(1.0, 0.8, 0.1).unwrap().eigensystem();
    let coarse = QuadratureSettings::default();
    let fine = QuadratureSettings { panels: 2 * coarse.panels, ..coarse };
    for which in [Integral::I6, Integral::I8] {
        let a = integral_by_quadrature(which, -0.4, -0.7, -0.5, &es, &coarse);
        let b = integral_by_quadrature(which, -0.4, -0.7, -0.5, &es, &fine);
        assert!((a - b).norm() <= 2.5e-3 * b.norm(), "{}: {a} vs {b}", which.name());
    }
}
