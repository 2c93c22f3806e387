use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wicknls::gibbs_sampler::{sample_mu, sigma, GaussianEnsemble};
use wicknls::spectral_core::{linear_flow, FourierField, FreqIndex};
use wicknls::wick_nls_dynamics::*;

fn random_field(radius: usize, seed: u64) -> FourierField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    FourierField::from_fn(radius, |_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn e(radius: usize, n: FreqIndex) -> FourierField {
    FourierField::single_mode(radius, n, C64::new(1.0, 0.0))
}

fn max_diff_on(a: &FourierField, b: &FourierField, within: i64) -> f64 {
    a.iter()
        .filter(|(n, _)| n.norm_sq() <= within * within)
        .map(|(n, z)| (z - b.get(n)).norm())
        .fold(0.0, f64::max)
}

/// Σ_{n = n1 − n2 + n3, n ≠ n1, n3} v̂1(n1) conj(v̂2(n2)) v̂3(n3) by explicit loops.
fn nonres_brute(v1: &FourierField, v2: &FourierField, v3: &FourierField) -> FourierField {
    let r = v1.radius();
    let mut out = FourierField::zeros(r);
    for (n1, a) in v1.iter() {
        for (n2, b) in v2.iter() {
            for (n3, c) in v3.iter() {
                let n = n1 - n2 + n3;
                if n != n1 && n != n3 && out.contains(n) {
                    out.set(n, out.get(n) + a * b.conj() * c);
                }
            }
        }
    }
    out
}

#[test]
fn nonresonant_exclusions_on_single_modes() {
    let m = FreqIndex(1, 2);
    assert!(nonres_trilinear(&e(3, m), &e(3, m), &e(3, m)).unwrap().l2_norm() < 1e-13);
    let out = nonres_trilinear(&e(3, FreqIndex(1, 0)), &e(3, FreqIndex(0, 1)), &e(3, FreqIndex(0, 0))).unwrap();
    assert!((out.get(FreqIndex(1, -1)) - C64::new(1.0, 0.0)).norm() < 1e-13);
    assert!((out.l2_norm_sq() - 1.0).abs() < 1e-12);
}

#[test]
fn nonresonant_matches_triple_loop() {
    for seed in 0..3 {
        let (a, b, c) = (random_field(4, seed), random_field(4, seed + 10), random_field(4, seed + 20));
        let fast = nonres_trilinear(&a, &b, &c).unwrap();
        assert!(max_diff_on(&fast, &nonres_brute(&a, &b, &c), 4) < 1e-12);
    }
}

#[test]
fn resonant_part_is_diagonal_product() {
    let m = FreqIndex(-2, 1);
    assert_eq!(res_trilinear(&e(3, m), &e(3, m), &e(3, m)).unwrap(), e(3, m));
    assert!(res_trilinear(&e(3, m), &e(3, FreqIndex(0, 0)), &e(3, m)).unwrap().is_zero());
    let (a, b, c) = (random_field(3, 1), random_field(3, 2), random_field(3, 3));
    let r = res_trilinear(&a, &b, &c).unwrap();
    for (n, z) in r.iter() {
        assert_eq!(z, a.get(n) * b.get(n).conj() * c.get(n));
    }
}

#[test]
fn renormalized_nonlinearity_single_mode_and_zero() {
    let m = FreqIndex(2, 0);
    let minus = e(4, m).scale(C64::new(-1.0, 0.0));
    assert!(max_diff_on(&renorm_nonlinearity(&e(4, m)), &minus, 4) < 1e-13);
    assert!(max_diff_on(&renorm_nonlinearity_physical(&e(4, m)), &minus, 4) < 1e-13);
    assert!(renorm_nonlinearity(&FourierField::zeros(4)).is_zero());
}

#[test]
fn spectral_and_physical_forms_agree() {
    for seed in 0..100 {
        let v = random_field(8, seed);
        let d = max_diff_on(&renorm_nonlinearity(&v), &renorm_nonlinearity_physical(&v), 4);
        assert!(d < 1e-10, "seed {seed}: {d}");
    }
}

#[test]
fn forcing_ignores_high_modes() {
    let u = e(6, FreqIndex(5, 0));
    for gauged in [false, true] {
        let st = NlsState::new(u.clone(), 4).unwrap();
        let f = rhs(&st, gauged);
        assert!(f.iter().all(|(n, z)| n.norm_sq() > 16 || z.norm() < 1e-13));
    }
    let c = C64::new(0.6, -0.3);
    let st = NlsState::new(FourierField::single_mode(4, FreqIndex(0, 0), c), 2).unwrap();
    // −i·(|c|² − 2|c|²)c.
    let want = C64::new(0.0, -1.0) * (-c.norm_sqr() * c);
    assert!((rhs(&st, true).get(FreqIndex(0, 0)) - want).norm() < 1e-13);
}

#[test]
fn wick_energy_small_cases() {
    let n = 4;
    let s = sigma(n).sigma_n;
    // Zero data: ¼·2σ² for the quartic, no kinetic part.
    assert!((wick_energy(&FourierField::zeros(4), n, s) - 0.5 * s * s).abs() < 1e-10);
}

#[test]
fn gauge_identity_cases() {
    let u = sample_mu(4, &GaussianEnsemble::new(1, 4)).unwrap();
    assert_eq!(gauge_transform(&u, 0.0, 3.0, 4), u);
    assert_eq!(gauge_transform(&u, 1.5, 0.0, 4), u);
}

#[test]
fn zero_data_stays_zero() {
    let st = NlsState::new(FourierField::zeros(8), 4).unwrap();
    let traj = evolve(&st, 0.2, &IntegratorConfig::with_dt(1e-2), false).unwrap();
    assert!(traj.final_state.field.is_zero());
    let gap = gauge_equivalence_check(&FourierField::zeros(8), 4, 0.2, &IntegratorConfig::with_dt(1e-2)).unwrap();
    assert_eq!(gap, 0.0);
}

#[test]
fn linear_modes_evolve_freely() {
    let mut u = sample_mu(8, &GaussianEnsemble::new(2, 8)).unwrap();
    u = u.map(|n, z| if n.norm_sq() > 16 { z } else { C64::new(0.0, 0.0) });
    let st = NlsState::new(u.clone(), 4).unwrap();
    let traj = evolve(&st, 0.3, &IntegratorConfig::with_dt(1e-2), false).unwrap();
    let free = linear_flow(&u, 0.3);
    assert!(max_diff_on(&traj.final_state.field, &free, 8) < 1e-12);
}

#[test]
fn conservation_at_moderate_truncation() {
    let u0 = sample_mu(24, &GaussianEnsemble::new(3, 24)).unwrap();
    let traj = evolve(&NlsState::new(u0, 8).unwrap(), 0.5, &IntegratorConfig::with_dt(1e-3), false).unwrap();
    assert!(TrajectoryRecord::max_relative_drift(&traj.mass) < 1e-7);
    assert!(TrajectoryRecord::max_relative_drift(&traj.energy) < 1e-7);
}

#[test]
fn single_mode_gauge_paths_agree() {
    let u0 = FourierField::single_mode(8, FreqIndex(1, 1), C64::new(0.8, 0.2));
    let gap = gauge_equivalence_check(&u0, 4, 1.0, &IntegratorConfig::with_dt(1e-3)).unwrap();
    assert!(gap < 1e-6, "{gap}");
}

#[test]
fn residual_starts_at_zero_and_vanishes_for_zero_data() {
    let u0 = sample_mu(8, &GaussianEnsemble::new(4, 8)).unwrap();
    let r = residual_diagnostic(&u0, 4, 0.2, &IntegratorConfig::with_dt(1e-3), 0.1).unwrap();
    assert_eq!(r[0].1, 0.0);
    let z = residual_diagnostic(&FourierField::zeros(8), 4, 0.2, &IntegratorConfig::with_dt(1e-2), 0.1).unwrap();
    assert!(z.iter().all(|x| x.1 == 0.0));
}

#[test]
fn residual_bounded_across_truncations() {
    let u0 = sample_mu(64, &GaussianEnsemble::new(5, 64)).unwrap();
    let cfg = IntegratorConfig { tolerance: 1e-4, ..IntegratorConfig::with_dt(1e-3) };
    let finals: Vec<f64> = [8u32, 16]
        .iter()
        .map(|&n| {
            let r = residual_diagnostic(&u0.with_radius(2 * n as usize), n, 0.25, &cfg, 0.1).unwrap();
            r.last().unwrap().1
        })
        .collect();
    assert!(finals.iter().all(|v| v.is_finite()));
    assert!(finals[1] < 3.0 * finals[0], "{finals:?}");
}

#[test]
fn invariance_with_zero_time_has_zero_scores() {
    let cfg = InvarianceConfig::new(2, 0.0, 100, 1);
    let r = invariance_test(&cfg).unwrap();
    assert!(r.observables.iter().all(|o| o.z_mean == 0.0 && o.z_var == 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn mass_is_conserved_pathwise(seed in any::<u64>()) {
        let u0 = sample_mu(8, &GaussianEnsemble::new(seed, 8)).unwrap();
        let cfg = IntegratorConfig { tolerance: 1e-2, ..IntegratorConfig::with_dt(1e-3) };
        let traj = evolve(&NlsState::new(u0, 4).unwrap(), 0.1, &cfg, true).unwrap();
        prop_assert!(TrajectoryRecord::max_relative_drift(&traj.mass) < 1e-6);
    }
}
