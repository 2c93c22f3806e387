use num_complex::Complex64 as C64;
use proptest::prelude::*;
use wicknls::gibbs_sampler::{sample_mu, GaussianEnsemble};
use wicknls::spectral_core::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn max_diff(a: &FourierField, b: &FourierField) -> f64 {
    a.try_sub(b).unwrap().coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn projection_outside_disc_is_zero() {
    let f = FourierField::single_mode(4, FreqIndex(3, 0), c(1.0, 0.0));
    assert!(project(&f, Projection::Leq, 2).unwrap().is_zero());
}

#[test]
fn dyadic_pieces_partition_the_field() {
    let f = sample_mu(8, &GaussianEnsemble::new(1, 8)).unwrap();
    let low = project(&f, Projection::LeqDyadic, 4).unwrap();
    let high = project(&f, Projection::Complement, 4).unwrap();
    assert_eq!(low.try_add(&high).unwrap(), f);
    let blocks = [1, 2, 4, 8].iter().map(|&n| project(&f, Projection::Dyadic, n).unwrap());
    let sum = blocks.fold(FourierField::zeros(8), |acc, b| acc.try_add(&b).unwrap());
    assert_eq!(sum, project(&f, Projection::Leq, 8).unwrap());
}

#[test]
fn non_dyadic_block_is_rejected() {
    let f = FourierField::zeros(4);
    assert!(project(&f, Projection::Dyadic, 3).is_err());
}

#[test]
fn single_mode_flow_phase() {
    let n0 = FreqIndex(2, -1);
    let f = FourierField::single_mode(3, n0, c(1.0, 0.0));
    let g = linear_flow(&f, 0.7);
    assert!((g.get(n0) - C64::from_polar(1.0, -0.7 * 5.0)).norm() < 1e-15);
    assert_eq!(linear_flow(&f, 0.0), f);
}

#[test]
fn fft_roundtrip() {
    let f = sample_mu(6, &GaussianEnsemble::new(2, 6)).unwrap();
    let m = f.product_grid(3);
    let back = FourierField::from_physical(f.to_physical(m), m, 6);
    assert!(max_diff(&f, &back) < 1e-13);
}

#[test]
fn snapshot_roundtrip_is_f32_exact() {
    let f = sample_mu(5, &GaussianEnsemble::new(3, 5)).unwrap();
    let mut buf = Vec::new();
    f.write_snapshot(&mut buf).unwrap();
    let g = FourierField::read_snapshot(buf.as_slice()).unwrap();
    assert_eq!(g.radius(), 5);
    assert!(max_diff(&f, &g) < 1e-6);
}

#[test]
fn xsb_single_mode_matches_weighted_window_norm() {
    // ⟨(2,1)⟩^{0.3}·‖⟨τ⟩^{0.51} η̂_{1/2}‖_{L²}, from adaptive quadrature.
    let u0 = FourierField::single_mode(4, FreqIndex(2, 1), c(1.0, 0.0));
    let u = SpaceTimeField::windowed_flow(&u0, 0.5);
    let v = xsb_norm(&u, XsbParams::with_b(0.3, 0.51)).unwrap();
    assert!((v - 2.144004726182).abs() < 1e-5, "{v}");
}

#[test]
fn xsb_with_zero_weights_is_discrete_l2() {
    let u0 = sample_mu(3, &GaussianEnsemble::new(4, 3)).unwrap();
    let u = SpaceTimeField::windowed_flow(&u0, 0.5);
    let v = xsb_norm(&u, XsbParams::with_b(0.0, 0.0)).unwrap();
    let l2: f64 = u.frames().iter().map(|f| f.l2_norm_sq()).sum::<f64>() * u.dt();
    assert!((v * v - l2).abs() < 1e-10 * l2);
}

/// ‖⟨n⟩^s⟨τ⟩^b ũ‖ by a direct DFT sum over the (n, τ) lattice, without the FFT.
fn xsb_direct(u: &SpaceTimeField, s: f64, b: f64) -> f64 {
    let len = tau_grid_len(u.frames().len());
    let dt = u.dt();
    let dtau = 2.0 * std::f64::consts::PI / (len as f64 * dt);
    let mut total = 0.0;
    for n in FourierField::modes(u.radius()) {
        let q = n.norm_sq() as f64;
        let series: Vec<C64> = u
            .frames()
            .iter()
            .enumerate()
            .map(|(k, f)| f.get(n) * C64::from_polar(1.0, (u.t0() + k as f64 * dt) * q))
            .collect();
        let mut acc = 0.0;
        for j in 0..len {
            let js = if j < len.div_ceil(2) { j as f64 } else { j as f64 - len as f64 };
            let w = -2.0 * std::f64::consts::PI * j as f64 / len as f64;
            let z: C64 = series.iter().enumerate().map(|(k, a)| a * C64::from_polar(1.0, w * k as f64)).sum();
            acc += (1.0 + (js * dtau).powi(2)).powf(b) * z.norm_sqr();
        }
        total += (1.0 + q).powf(s) * acc * dt * dt / (2.0 * std::f64::consts::PI) * dtau;
    }
    total.sqrt()
}

#[test]
fn xsb_random_sample_matches_direct_summation() {
    let u0 = sample_mu(4, &GaussianEnsemble::new(11, 4)).unwrap();
    let u = SpaceTimeField::windowed_flow(&u0, 0.5);
    let fast = xsb_norm(&u, XsbParams::with_b(-0.1, 0.51)).unwrap();
    let slow = xsb_direct(&u, -0.1, 0.51);
    assert!((fast - slow).abs() < 1e-9 * slow, "{fast} vs {slow}");
}

#[test]
fn lp_norm_of_constant_is_one() {
    let one = FourierField::single_mode(2, FreqIndex(0, 0), c(1.0, 0.0));
    let dt = 1.0 / 64.0;
    let u = SpaceTimeField::new(0.0, dt, vec![one; 65]).unwrap();
    for p in [1.0, 2.0, 3.5, 4.0, 6.0] {
        assert!((lp_spacetime_norm(&u, p).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn strichartz_single_mode_and_small_disc() {
    let e = FourierField::single_mode(4, FreqIndex(1, 2), c(1.0, 0.0));
    assert!((strichartz_ratio(&e, 4).unwrap() - 1.0).abs() < 1e-12);
    // f̂ ≡ 1 on |n| ≤ 1, from adaptive quadrature in t on a 64² spatial grid.
    let f = FourierField::from_fn(1, |_| c(1.0, 0.0));
    assert!((strichartz_ratio(&f, 1).unwrap() - 1.22684704669002).abs() < 1e-10);
}

#[test]
fn strichartz_ratio_grows_slowly() {
    let sizes = [4u32, 8, 16, 32];
    let r: Vec<f64> = sizes
        .iter()
        .map(|&n| strichartz_ratio(&FourierField::from_fn(n as usize, |_| c(1.0, 0.0)), n).unwrap())
        .collect();
    assert!(r.windows(2).all(|w| w[1] >= w[0]));
    let xs: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    assert!(wicknls::stats::loglog_slope(&xs, &r) < 0.2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn flow_group_law(t1 in -3.0f64..3.0, t2 in -3.0f64..3.0, seed in any::<u64>()) {
        let f = sample_mu(4, &GaussianEnsemble::new(seed, 4)).unwrap();
        let a = linear_flow(&linear_flow(&f, t1), t2);
        let b = linear_flow(&f, t1 + t2);
        prop_assert!(max_diff(&a, &b) < 1e-12);
        prop_assert!((linear_flow(&f, t1).l2_norm() - f.l2_norm()).abs() < 1e-12);
    }

    #[test]
    fn projection_is_idempotent(n in 1u32..6, seed in any::<u64>()) {
        let f = sample_mu(6, &GaussianEnsemble::new(seed, 6)).unwrap();
        let once = project(&f, Projection::Leq, n).unwrap();
        prop_assert_eq!(project(&once, Projection::Leq, n).unwrap(), once);
    }
}
