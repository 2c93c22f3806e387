use num_complex::Complex64 as C64;
use proptest::prelude::*;
use wicknls::gibbs_sampler::{gaussian_at, sample_mu, GaussianEnsemble};
use wicknls::lattice_counting::{enumerate_s, DyadicTuple};
use wicknls::random_tensor_lab::*;
use wicknls::spectral_core::{bracket_sq, eta_l2_sq, xsb_norm, FourierField, FreqIndex, SpaceTimeField, XsbParams};
use wicknls::stats::{derive_seed, mean, standard_error};
use wicknls::tensor_norms::{hilbert_schmidt, partition_norm, Partition, SparseTensor};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn low_order_wick_products() {
    let g = c(0.7, -1.3);
    assert_eq!(wick_product(g, 0, 0), c(1.0, 0.0));
    assert_eq!(wick_product(g, 1, 0), g);
    assert!((wick_product(g, 1, 1) - c(g.norm_sqr() - 1.0, 0.0)).norm() < 1e-14);
    assert!((wick_product(g, 2, 1) - (g * g * g.conj() - 2.0 * g)).norm() < 1e-14);
    assert!((wick_product(g, 2, 2) - c(g.norm_sqr().powi(2) - 4.0 * g.norm_sqr() + 2.0, 0.0)).norm() < 1e-13);
}

#[test]
fn wick_products_are_orthogonal() {
    let gs: Vec<C64> = (0..40_000).map(|i| gaussian_at(derive_seed(21, i), FreqIndex(0, 0))).collect();
    let pairs = [((1, 1), (0, 0)), ((2, 0), (1, 1)), ((2, 1), (1, 0)), ((1, 1), (2, 2))];
    for ((a, b), (p, q)) in pairs {
        let re: Vec<f64> = gs.iter().map(|&g| (wick_product(g, a, b) * wick_product(g, p, q).conj()).re).collect();
        assert!(mean(&re).abs() < 4.0 * standard_error(&re), "({a},{b}) vs ({p},{q})");
    }
    let sq: Vec<f64> = gs.iter().map(|&g| wick_product(g, 2, 0).norm_sqr()).collect();
    assert!((mean(&sq) - 2.0).abs() < 4.0 * standard_error(&sq));
}

#[test]
fn generic_tensor_edge_cases() {
    let h = SparseTensor::from_entries(&["a", "b"], [(vec![FreqIndex(0, 0), FreqIndex(1, 0)], c(2.0, 0.0))]).unwrap();
    let ens = GaussianEnsemble::new(1, 2);
    assert_eq!(build_generic_random_tensor(&h, &[], &ens).unwrap(), h);
    let scalar = SparseTensor::from_entries(&["g"], [(vec![FreqIndex(1, 1)], c(1.0, 0.0))]).unwrap();
    let xs: Vec<f64> = (0..20_000)
        .map(|i| {
            let e = GaussianEnsemble::new(derive_seed(3, i), 2);
            hilbert_schmidt(&build_generic_random_tensor(&scalar, &[GaussianAxis::new("g", false)], &e).unwrap()).powi(2)
        })
        .collect();
    assert!((mean(&xs) - 1.0).abs() < 3.0 * standard_error(&xs));
    let est = NormEstimate::from_samples(&[xs[0].sqrt(); 200], 2.0, 1);
    assert_eq!(est.ci_width(), 0.0);
    assert!(build_generic_random_tensor(&h, &[GaussianAxis::new("z", false)], &ens).is_err());
}

#[test]
fn zero_ensemble_gives_zero_kernel() {
    let tuple = DyadicTuple::balanced(2).unwrap();
    let zero = GaussianEnsemble::from_values(0, FourierField::zeros(2));
    for variant in KernelVariant::ALL {
        let spec = RandomKernelSpec { variant, tuple, m: 0, s: 0.1, weights: true };
        assert_eq!(KernelTemplate::new(&spec).unwrap().norm(&zero).unwrap(), 0.0);
    }
    let empty = RandomKernelSpec { variant: KernelVariant::H3, tuple: DyadicTuple::new(1, 8, 1, 1).unwrap(), m: 0, s: 0.1, weights: true };
    assert_eq!(KernelTemplate::new(&empty).unwrap().support(), 0);
    assert_eq!(KernelTemplate::new(&empty).unwrap().norm(&GaussianEnsemble::new(1, 8)).unwrap(), 0.0);
}

#[test]
fn h1_matches_quadruple_loop() {
    let tuple = DyadicTuple::balanced(2).unwrap();
    let s = 0.1;
    let ens = GaussianEnsemble::new(77, 2);
    let spec = RandomKernelSpec { variant: KernelVariant::H1, tuple, m: 0, s, weights: true };
    let kernel = build_kernel(&spec, &ens).unwrap();
    let br = |n: FreqIndex| bracket_sq(n.norm_sq()).sqrt();
    let mut oracle = SparseTensor::new(&["n", "n2"]).unwrap();
    for n in FourierField::modes(2) {
        for n2 in FourierField::modes(2) {
            let mut acc = c(0.0, 0.0);
            for q in enumerate_s(&tuple, 0).unwrap() {
                if q[0] == n && q[2] == n2 {
                    acc += ens.g(q[1]) * ens.g(q[3]) * (br(n).powf(s) / br(n2).powf(s) / (br(q[1]) * br(q[3])));
                }
            }
            if acc.norm() > 0.0 {
                oracle.insert(vec![n, n2], acc).unwrap();
            }
        }
    }
    assert_eq!(kernel.tensor.len(), oracle.len());
    assert_eq!(kernel.tensor.axes()[0], "n");
    for (k, v) in oracle.entries() {
        assert!((kernel.tensor.get(k) - v).norm() < 1e-12);
    }
    let template = KernelTemplate::new(&spec).unwrap();
    let p = Partition::new(&["n2"], &["n"]);
    assert!((template.norm(&ens).unwrap() - partition_norm(&oracle, &p).unwrap()).abs() < 1e-10);
}

#[test]
fn h1_entries_have_predicted_second_moment() {
    let tuple = DyadicTuple::balanced(2).unwrap();
    let spec = RandomKernelSpec { variant: KernelVariant::H1, tuple, m: 0, s: 0.1, weights: true };
    let quads = enumerate_s(&tuple, 0).unwrap();
    let (n, n2) = (quads[0][0], quads[0][2]);
    // E|Σ w g g|² = Σ w² over the pairs (n₁, n₃), doubled on the diagonal n₁ = n₃.
    let want: f64 = quads
        .iter()
        .filter(|q| q[0] == n && q[2] == n2)
        .map(|q| {
            let w = KernelVariant::H1.weight(q, 0.1);
            w * w * if q[1] == q[3] { 2.0 } else { 1.0 }
        })
        .sum::<f64>()
        + quads
            .iter()
            .filter(|q| q[0] == n && q[2] == n2 && q[1] != q[3])
            .map(|q| {
                // The partner ordering (n₃, n₁) of the same monomial.
                let w = KernelVariant::H1.weight(q, 0.1);
                let partner = quads.iter().find(|p| p[0] == n && p[2] == n2 && p[1] == q[3] && p[3] == q[1]);
                partner.map(|p| w * KernelVariant::H1.weight(p, 0.1)).unwrap_or(0.0)
            })
            .sum::<f64>();
    let xs: Vec<(f64, f64)> = (0..20_000)
        .map(|i| {
            let k = build_kernel(&spec, &GaussianEnsemble::new(derive_seed(8, i), 2)).unwrap();
            let v = k.tensor.get(&[n, n2]);
            (v.re, v.norm_sqr())
        })
        .collect();
    let re: Vec<f64> = xs.iter().map(|x| x.0).collect();
    let sq: Vec<f64> = xs.iter().map(|x| x.1).collect();
    assert!(mean(&re).abs() < 4.0 * standard_error(&re));
    assert!((mean(&sq) - want).abs() < 4.0 * standard_error(&sq), "{} vs {want}", mean(&sq));
}

#[test]
fn h1_entries_with_disjoint_supports_are_uncorrelated() {
    let tuple = DyadicTuple::balanced(2).unwrap();
    let spec = RandomKernelSpec { variant: KernelVariant::H1, tuple, m: 0, s: 0.1, weights: true };
    let quads = enumerate_s(&tuple, 0).unwrap();
    let support = |n: FreqIndex, n2: FreqIndex| -> Vec<FreqIndex> {
        quads.iter().filter(|q| q[0] == n && q[2] == n2).flat_map(|q| [q[1], q[3]]).collect()
    };
    let keys: Vec<(FreqIndex, FreqIndex)> = quads.iter().map(|q| (q[0], q[2])).collect();
    let (a, b) = keys
        .iter()
        .flat_map(|&a| keys.iter().map(move |&b| (a, b)))
        .find(|&(a, b)| a != b && support(a.0, a.1).iter().all(|x| !support(b.0, b.1).contains(x)))
        .expect("disjoint pair");
    let prods: Vec<f64> = (0..20_000)
        .map(|i| {
            let k = build_kernel(&spec, &GaussianEnsemble::new(derive_seed(9, i), 2)).unwrap();
            (k.tensor.get(&[a.0, a.1]) * k.tensor.get(&[b.0, b.1]).conj()).re
        })
        .collect();
    assert!(mean(&prods).abs() < 3.0 * standard_error(&prods));
}

#[test]
fn h1_estimate_lies_between_partition_and_hs_bounds() {
    let spec = RandomKernelSpec { variant: KernelVariant::H1, tuple: DyadicTuple::balanced(4).unwrap(), m: 0, s: 0.1, weights: true };
    let est = mc_operator_norm(&spec, 2.0, 300, 4).unwrap();
    let h = spec.deterministic_tensor().unwrap();
    assert!(est.estimate >= max_partition_norm(&spec).unwrap());
    assert!(est.estimate <= hilbert_schmidt(&h));
    assert!(est.ci_lo <= est.estimate && est.estimate <= est.ci_hi);
}

#[test]
fn monte_carlo_needs_enough_samples() {
    let spec = RandomKernelSpec { variant: KernelVariant::H2, tuple: DyadicTuple::balanced(2).unwrap(), m: 0, s: 0.1, weights: true };
    assert!(mc_operator_norm(&spec, 2.0, MIN_MC_SAMPLES - 1, 1).is_err());
}

#[test]
fn tau_integral_reduces_to_plancherel() {
    for t in [1.0, 0.5, 0.125] {
        let v = tau_integral(0.0, 0.0, t).unwrap();
        assert!((v - eta_l2_sq(t)).abs() < 1e-6 * v);
    }
    assert!(tau_integral(0.0, 0.0, 1.5).is_err());
}

#[test]
fn stochastic_term_vanishes_on_empty_support() {
    let empty = DyadicTuple::new(1, 8, 1, 1).unwrap();
    assert_eq!(stochastic_closed_form(&empty, 0.1, 0.48, 0.5).unwrap(), 0.0);
    let m = stochastic_cubic_second_moment(&empty, 0.1, 0.48, 0.5, 100, 1).unwrap();
    assert!(m.mc.estimate < 1e-12, "{m:?}");
}

#[test]
fn stochastic_closed_form_matches_monte_carlo() {
    let m = stochastic_cubic_second_moment(&DyadicTuple::balanced(2).unwrap(), 0.1, 0.48, 0.5, 400, 5).unwrap();
    assert!(m.discrepancy_in_widths() <= 3.0, "{m:?}");
}

#[test]
fn resonant_terms_small_cases() {
    let z0 = sample_mu(4, &GaussianEnsemble::new(6, 4)).unwrap();
    let zero = FourierField::zeros(4);
    for case in [ResonantCase::Www, ResonantCase::Wzz, ResonantCase::Wwz] {
        assert_eq!(resonant_term_norms(case, &zero, &zero, 0.1, 0.01, 0.5).unwrap(), 0.0);
    }
    let n0 = FreqIndex(1, 2);
    let w0 = normalize_test_field(&FourierField::single_mode(4, n0, c(1.0, 0.0)), 0.1, 0.01, 0.5).unwrap();
    let got = resonant_term_norms(ResonantCase::Wzz, &z0, &w0, 0.1, 0.01, 0.5).unwrap();
    // R(w, z, z) = |ẑ₀(n₀)|² · w on the single mode n₀.
    let hand = z0.get(n0).norm_sqr() * xsb_norm(&SpaceTimeField::windowed_flow(&w0, 0.5), XsbParams::with_b(0.1, -0.48)).unwrap();
    assert!((got - hand).abs() < 1e-10 * hand);
    let big = FourierField::single_mode(4, n0, c(10.0, 0.0));
    assert!(resonant_term_norms(ResonantCase::Www, &z0, &big, 0.1, 0.01, 0.5).is_err());
}

#[test]
fn translation_covariance_holds() {
    let r = translation_covariance_test(DyadicTuple::balanced(4).unwrap(), 0, 0.1, FreqIndex(2, 1), 2, 300, 11).unwrap();
    assert!(r.pass, "{r:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn template_norm_matches_materialized_kernel(seed in any::<u64>(), vi in 0usize..5) {
        let variant = KernelVariant::ALL[vi];
        let spec = RandomKernelSpec { variant, tuple: DyadicTuple::balanced(2).unwrap(), m: 0, s: 0.1, weights: true };
        let ens = GaussianEnsemble::new(seed, 2);
        let a = KernelTemplate::new(&spec).unwrap().norm(&ens).unwrap();
        let b = build_kernel(&spec, &ens).unwrap().norm().unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b));
    }
}
