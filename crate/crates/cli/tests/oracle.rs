use cqed::oracle::compare::{compare_one_photon, ONE_PHOTON_TOLERANCE};
use cqed::oracle::evolve::bessel_j_sequence;
use cqed::oracle::hamiltonian::pair_index;
use cqed::oracle::{
    build_hamiltonian, evolve, run, Integrator, Layout, ModeBasis, OracleSettings, OracleSetup, Sector,
};
use cqed_core::params::{PulseParams, SystemParams};
use cqed_core::scattering::{analyze, GridOptions};
use cqed_core::Error;
use num_complex::Complex64 as C64;

fn small_basis(p: &SystemParams, nb: usize, nd: usize) -> ModeBasis {
    ModeBasis::uniform(p, 0.0, 4.0, nb, nd).unwrap()
}

#[test]
fn pair_index_packs_upper_triangle() {
    let n = 7;
    let mut seen = vec![false; n * (n + 1) / 2];
    for i in 0..n {
        for j in i..n {
            let k = pair_index(i, j, n);
            assert!(!seen[k]);
            seen[k] = true;
        }
    }
    assert!(seen.iter().all(|&s| s));
}

#[test]
fn hamiltonian_is_symmetric_in_both_sectors() {
    let p = SystemParams::resonant(1.0, 2.0, 0.3).unwrap();
    let basis = small_basis(&p, 9, 5);
    for sector in [Sector::One, Sector::Two] {
        let h = build_hamiltonian(&p, &basis, sector).unwrap();
        assert_eq!(h.dim, Layout::new(sector, &basis).dim());
        assert_eq!(h.asymmetry(), 0.0);
    }
}

#[test]
fn pair_states_carry_bosonic_factor() {
    let p = SystemParams::resonant(0.7, 2.0, 0.0).unwrap();
    let basis = small_basis(&p, 6, 0);
    let lay = Layout::new(Sector::Two, &basis);
    let h = build_hamiltonian(&p, &basis, Sector::Two).unwrap();
    let v = basis.kappa_coupling;
    assert!((h.get(Layout::EC, Layout::CC) - 2f64.sqrt() * 0.7).abs() < 1e-15);
    assert!((h.get(lay.cb(2), lay.bb(2, 2)) - 2f64.sqrt() * v).abs() < 1e-15);
    assert!((h.get(lay.cb(2), lay.bb(2, 4)) - v).abs() < 1e-15);
    assert!((h.get(lay.cb(4), lay.bb(2, 4)) - v).abs() < 1e-15);
    assert!((h.get(Layout::CC, lay.cb(3)) - 2f64.sqrt() * v).abs() < 1e-15);
    assert_eq!(h.get(lay.eb(1), lay.bb(1, 3)), 0.0);
}

#[test]
fn bessel_sequence_matches_known_values() {
    let j = bessel_j_sequence(1.0, 5);
    assert!((j[0] - 0.765_197_686_557_966_6).abs() < 1e-14);
    assert!((j[1] - 0.440_050_585_744_933_5).abs() < 1e-14);
    let j = bessel_j_sequence(100.0, 120);
    assert!((j[0] - 0.019_985_850_304_223_122).abs() < 1e-13);
    assert!((j[100] - 0.096_366_673_295_861_54).abs() < 1e-13);
}

#[test]
fn zero_time_is_identity() {
    let p = SystemParams::resonant(1.0, 2.0, 0.0).unwrap();
    let h = build_hamiltonian(&p, &small_basis(&p, 8, 0), Sector::One).unwrap();
    let psi: Vec<C64> = (0..h.dim).map(|i| C64::new(i as f64, 1.0)).collect();
    assert_eq!(evolve(&h, &psi, 0.0, Integrator::Chebyshev).unwrap().state, psi);
}

#[test]
fn rabi_oscillation_without_continuum() {
    // κ = γ = 0 leaves atom and cavity as a closed two-level problem.
    let g = 1.3;
    let p = SystemParams { g, omega_a: 0.0, omega_c: 0.0, gamma: 0.0, kappa: 1e-300 };
    let basis = small_basis(&p, 4, 0);
    let h = build_hamiltonian(&p, &basis, Sector::One).unwrap();
    let mut psi = vec![C64::new(0.0, 0.0); h.dim];
    psi[Layout::ATOM] = C64::new(1.0, 0.0);
    for t in [0.3, 1.1, 2.9, 7.5] {
        for integ in [Integrator::Chebyshev, Integrator::Rk4 { courant: 0.05 }] {
            let out = evolve(&h, &psi, t, integ).unwrap();
            let pa = out.state[Layout::ATOM].norm_sqr();
            let c: f64 = (g * t).cos();
            let tol = if integ == Integrator::Chebyshev { 1e-9 } else { 1e-7 };
            assert!((pa - c * c).abs() < tol, "{integ:?} t={t}: {pa} vs {}", c * c);
        }
    }
}

#[test]
fn chebyshev_and_rk4_agree_on_a_small_two_photon_system() {
    let p = SystemParams::resonant(1.0, 1.5, 0.4).unwrap();
    let basis = small_basis(&p, 10, 6);
    let h = build_hamiltonian(&p, &basis, Sector::Two).unwrap();
    let lay = Layout::new(Sector::Two, &basis);
    let mut psi = vec![C64::new(0.0, 0.0); h.dim];
    psi[lay.bb(3, 6)] = C64::new(0.6, 0.0);
    psi[lay.bb(4, 4)] = C64::new(0.0, 0.8);
    let a = evolve(&h, &psi, 3.0, Integrator::Chebyshev).unwrap();
    let b = evolve(&h, &psi, 3.0, Integrator::Rk4 { courant: 0.02 }).unwrap();
    let diff: f64 = a.state.iter().zip(&b.state).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    assert!(diff < 1e-8, "{diff}");
    // Lateral modes are part of the closed system, so probability is conserved.
    assert!(a.norm_drift < 1e-12);
}

#[test]
fn weak_coupling_atom_decays_at_one_d_rate() {
    let p = SystemParams::resonant(1.0, 10.0, 0.0).unwrap();
    let es = p.eigensystem();
    let rate = p.one_d_atom_rate();
    let basis = ModeBasis::uniform(&p, 0.0, 120.0, 2400, 0).unwrap();
    let h = build_hamiltonian(&p, &basis, Sector::One).unwrap();
    let mut psi = vec![C64::new(0.0, 0.0); h.dim];
    psi[Layout::ATOM] = C64::new(1.0, 0.0);
    // Flat-band atom amplitude from the two damped eigenfrequencies.
    let wc = C64::new(0.0, -p.kappa / 2.0);
    let (w1, w2) = (es.omega_1, es.omega_2);
    let exact = |t: f64| {
        let i = C64::new(0.0, 1.0);
        (((w1 - wc) * (-i * w1 * t).exp() - (w2 - wc) * (-i * w2 * t).exp()) / (w1 - w2)).norm_sqr()
    };
    let mut pop = Vec::new();
    for t in [1.0, 2.0, 4.0] {
        let pa = evolve(&h, &psi, t, Integrator::Chebyshev).unwrap().state[Layout::ATOM].norm_sqr();
        assert!((pa / exact(t) - 1.0).abs() < 0.02, "t={t}: {pa} vs {}", exact(t));
        pop.push(pa);
    }
    let slope = (pop[1] / pop[2]).ln() / 2.0;
    assert!((slope / rate - 1.0).abs() < 0.1, "{slope} vs {rate}");
}

#[test]
fn basis_too_small_is_rejected() {
    let p = SystemParams::resonant(1.0, 5.0, 0.0).unwrap();
    let s = OracleSettings { modes: Some(64), ..Default::default() };
    let err = compare_one_photon(&p, 0.0, 2.5, &s).unwrap_err();
    assert!(matches!(err, Error::BasisTooSmall(_)), "{err:?}");
}

#[test]
fn short_evolution_leaves_residual_excitation() {
    let p = SystemParams::resonant(1.0, 5.0, 0.0).unwrap();
    let s = OracleSettings { settle: 0.5, ..Default::default() };
    let err = compare_one_photon(&p, 0.0, 2.5, &s).unwrap_err();
    assert!(matches!(err, Error::ResidualExcitation { .. }), "{err:?}");
}

#[test]
fn one_photon_oracle_matches_analytic_output() {
    for &(k, q, d) in &[(5.0, 0.0, 2.5), (0.5, 0.9, 8.0)] {
        let p = SystemParams::resonant(1.0, k, 0.0).unwrap();
        let c = compare_one_photon(&p, q, d, &OracleSettings::default()).unwrap();
        assert!(c.relative_l2 <= ONE_PHOTON_TOLERANCE, "κ={k}: {}", c.relative_l2);
        assert!((c.oracle_norm - 1.0).abs() < 1e-3, "κ={k}: {}", c.oracle_norm);
    }
}

#[test]
fn empty_cavity_reflection_matches() {
    // The band-edge error falls as 1/W.
    let p = SystemParams::resonant(0.0, 3.0, 0.0).unwrap();
    let err = |band_factor: f64| {
        let s = OracleSettings { band_factor, ..Default::default() };
        compare_one_photon(&p, 0.0, 2.0, &s).unwrap().relative_l2
    };
    let (e12, e24) = (err(12.0), err(24.0));
    assert!(e24 <= 0.01, "{e24}");
    assert!((e12 / e24 - 2.0).abs() < 0.2, "{e12} {e24}");
}

#[test]
fn far_detuned_mirror_passes_input_through() {
    // Cavity far off the pulse carrier: reflection ≈ input up to a phase.
    let p = SystemParams::new(0.0, 0.0, 200.0, 0.0, 2.0).unwrap();
    let s = OracleSettings::default();
    let c = compare_one_photon(&p, 0.0, 2.0, &s).unwrap();
    let input = cqed_core::scattering::Wavefunction1D::sample(c.oracle.grid, |x| c.run.setup.pulse.value(x));
    let overlap = c.oracle.inner(&input).unwrap().norm();
    assert!((overlap - 1.0).abs() < 0.05, "{overlap}");
}

#[test]
fn doubling_the_mode_count_barely_moves_the_output() {
    let p = SystemParams::resonant(1.0, 5.0, 0.0).unwrap();
    let base = compare_one_photon(&p, 0.0, 2.5, &OracleSettings::default()).unwrap();
    let modes = Some(2 * base.run.setup.basis.n_b());
    let fine = compare_one_photon(&p, 0.0, 2.5, &OracleSettings { modes, ..Default::default() }).unwrap();
    let change = fine.oracle.relative_l2(&base.oracle).unwrap();
    assert!(change < 0.5 * ONE_PHOTON_TOLERANCE, "{change}");
}

#[test]
fn lossy_one_photon_run_conserves_probability() {
    let p = SystemParams::resonant(1.0, 5.0, 0.5).unwrap();
    let c = compare_one_photon(&p, 0.0, 2.5, &OracleSettings::default()).unwrap();
    assert!((c.run.total_probability() - 1.0).abs() < 1e-8, "{}", c.run.total_probability());
    assert!(c.run.external_probability() < 0.99);
    assert!(c.relative_l2 <= ONE_PHOTON_TOLERANCE, "{}", c.relative_l2);
    assert!((c.oracle_norm - c.analytic_norm).abs() < 1e-3, "{} vs {}", c.oracle_norm, c.analytic_norm);
}

#[test]
fn lossy_two_photon_norms_follow_the_analytic_ordering() {
    let (q, d) = (0.0, 1.0);
    let p = SystemParams::resonant(1.0, 5.0, 0.1).unwrap();
    let s = OracleSettings::default();
    let one = compare_one_photon(&p, q, d, &s).unwrap();
    let two = run(OracleSetup::new(&p, q, d, Sector::Two, &s).unwrap(), &s).unwrap();
    assert!((two.total_probability() - 1.0).abs() < 1e-8);
    let (full, linear) = (two.external_probability(), one.oracle_norm * one.oracle_norm);
    assert!(linear < full && full < 1.0, "{linear} {full}");
    let exact = analyze(&p, &PulseParams::at_default_position(q, d).unwrap(), &GridOptions::default()).unwrap();
    assert!((full / exact.norm_out - 1.0).abs() < 0.05, "{full} vs {}", exact.norm_out);
    assert!((linear / exact.norm_linear - 1.0).abs() < 0.05, "{linear} vs {}", exact.norm_linear);
}
