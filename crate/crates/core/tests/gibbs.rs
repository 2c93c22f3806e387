use num_complex::Complex64 as C64;
use proptest::prelude::*;
use wicknls::gibbs_sampler::*;
use wicknls::spectral_core::{low_pass, FourierField, FreqIndex};
use wicknls::stats::{derive_seed, mean, standard_error};

#[test]
fn sigma_small_values_are_exact() {
    assert!((sigma(1).sigma_n - 3.0).abs() < 1e-12);
    assert!((sigma(2).sigma_n - 77.0 / 15.0).abs() < 1e-12);
    // Direct summation in double precision.
    assert!((sigma(4).sigma_n - 8.845106527459466).abs() < 1e-12);
    assert!((sigma(8).sigma_n - 13.074009853965864).abs() < 1e-12);
}

#[test]
fn sigma_doubling_gap_approaches_ring_sum() {
    let gap = sigma(8192).sigma_n - sigma(4096).sigma_n;
    let target = 2.0 * std::f64::consts::PI * std::f64::consts::LN_2;
    assert!(((gap - target) / target).abs() < 0.02);
}

#[test]
fn degenerate_ensemble_gives_zero_field() {
    let ens = GaussianEnsemble::from_values(0, FourierField::zeros(4));
    assert!(sample_mu(4, &ens).unwrap().is_zero());
}

#[test]
fn wick_quartic_substitutions() {
    assert_eq!(wick_quartic_poly(0.0, 3.0), 18.0);
    assert!((wick_quartic_poly(3.0, 3.0) + 9.0).abs() < 1e-15);
    // Zero field at N = 1 (σ₁ = 3): −¼·2σ² = −4.5.
    assert!((gibbs_log_weight(&FourierField::zeros(1), 1).unwrap() + 4.5).abs() < 1e-12);
}

#[test]
fn mode_statistics_match_covariance() {
    let n0 = FreqIndex(1, 0);
    let xs: Vec<C64> = (0..20_000).map(|i| gaussian_at(derive_seed(5, i), n0) / 2f64.sqrt()).collect();
    let re: Vec<f64> = xs.iter().map(|z| z.re).collect();
    let sq: Vec<f64> = xs.iter().map(|z| z.norm_sqr()).collect();
    assert!(mean(&re).abs() < 3.0 * standard_error(&re));
    assert!((mean(&sq) - 0.5).abs() < 3.0 * standard_error(&sq));
}

#[test]
fn low_mode_mass_has_mean_sigma() {
    let xs: Vec<f64> = (0..20_000)
        .map(|i| low_pass(&sample_mu(4, &GaussianEnsemble::new(derive_seed(6, i), 4)).unwrap(), 4).l2_norm_sq())
        .collect();
    assert!((mean(&xs) - sigma(4).sigma_n).abs() < 3.0 * standard_error(&xs));
}

#[test]
fn wick_quartic_has_mean_zero() {
    let xs: Vec<f64> = (0..20_000)
        .map(|i| wick_quartic(&sample_mu(8, &GaussianEnsemble::new(derive_seed(7, i), 8)).unwrap(), 8).unwrap().integral)
        .collect();
    assert!(mean(&xs).abs() < 3.0 * standard_error(&xs));
}

#[test]
fn effective_sample_size_limits() {
    assert!((effective_sample_size(&[0.0; 7]).unwrap() - 7.0).abs() < 1e-12);
    assert!((effective_sample_size(&[0.0, -50.0, -60.0]).unwrap() - 1.0).abs() < 1e-9);
    assert!(effective_sample_size(&[]).is_err());
}

#[test]
fn sampling_is_reproducible_and_order_free() {
    let a = sample_mu(6, &GaussianEnsemble::new(9, 6)).unwrap();
    let b = sample_mu(6, &GaussianEnsemble::new(9, 6)).unwrap();
    assert_eq!(a, b);
    let wide = sample_mu(8, &GaussianEnsemble::new(9, 8)).unwrap();
    assert_eq!(wide.get(FreqIndex(3, -2)), a.get(FreqIndex(3, -2)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermite_form_equals_polynomial(re in -5.0f64..5.0, im in -5.0f64..5.0, s in 0.1f64..20.0) {
        let v = C64::new(re, im);
        let a = wick_quartic_hermite(v, s);
        let b = wick_quartic_poly(v.norm_sqr(), s);
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
    }

    #[test]
    fn weights_are_normalized(ls in prop::collection::vec(-30.0f64..30.0, 1..40)) {
        let w = normalized_weights(&ls).unwrap();
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let ess = effective_sample_size(&ls).unwrap();
        prop_assert!(ess >= 1.0 - 1e-9 && ess <= ls.len() as f64 + 1e-9);
    }
}
