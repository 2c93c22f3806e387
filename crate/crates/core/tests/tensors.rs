use num_complex::Complex64 as C64;
use proptest::prelude::*;
use wicknls::lattice_counting::DyadicTuple;
use wicknls::spectral_core::FreqIndex;
use wicknls::tensor_norms::*;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn unit_square() -> Vec<FreqIndex> {
    (-1..=1).flat_map(|a| (-1..=1).map(move |b| FreqIndex(a, b))).collect()
}

fn bc() -> Partition {
    Partition::new(&["b"], &["c"])
}

#[test]
fn identity_and_all_ones() {
    let pts = unit_square();
    let id = SparseTensor::from_entries(&["b", "c"], pts.iter().map(|&p| (vec![p, p], one()))).unwrap();
    assert!((partition_norm(&id, &bc()).unwrap() - 1.0).abs() < 1e-12);
    assert!((schur_bound(&id, &bc()).unwrap() - 1.0).abs() < 1e-12);
    assert!((hilbert_schmidt(&id) - 3.0).abs() < 1e-12);
    let ones = SparseTensor::from_entries(&["b", "c"], pts.iter().flat_map(|&p| pts.iter().map(move |&q| (vec![p, q], one())))).unwrap();
    assert!((partition_norm(&ones, &bc()).unwrap() - 9.0).abs() < 1e-10);
    assert!((schur_bound(&ones, &bc()).unwrap() - 9.0).abs() < 1e-10);
}

#[test]
fn single_entry_and_empty_cases() {
    let h = SparseTensor::from_entries(&["b", "c"], [(vec![FreqIndex(0, 0), FreqIndex(1, 0)], C64::new(0.6, 0.8))]).unwrap();
    assert!((hilbert_schmidt(&h) - 1.0).abs() < 1e-15);
    assert!((partition_norm(&h, &bc()).unwrap() - 1.0).abs() < 1e-15);
    let empty = SparseTensor::new(&["b", "c"]).unwrap();
    assert_eq!(partition_norm(&empty, &bc()).unwrap(), 0.0);
    let all_out = Partition::new::<&str>(&[], &["b", "c"]);
    assert_eq!(partition_norm(&h, &all_out).unwrap(), hilbert_schmidt(&h));
    assert!(SparseTensor::new(&["b", "b"]).is_err());
    assert!(partition_norm(&h, &Partition::new(&["b"], &["x"])).is_err());
}

#[test]
fn base_tensor_partition_norms_match_dense_oracle() {
    // Largest singular values of the explicitly materialized matrices, from LAPACK.
    let h = base_tensor(&BaseTensorSpec { tuple: DyadicTuple::balanced(2).unwrap(), m: 0 }).unwrap();
    assert_eq!(h.len(), 48);
    assert!((hilbert_schmidt(&h) - 48f64.sqrt()).abs() < 1e-12);
    for id in BaseBound::ALL {
        let want = if id.input().len() == 2 { 2.0 } else { 2.449489742783178 };
        let got = partition_norm(&h, &id.partition()).unwrap();
        assert!((got - want).abs() < 1e-10, "{}: {got}", id.label());
    }
}

#[test]
fn out_of_range_level_is_empty() {
    let h = base_tensor(&BaseTensorSpec { tuple: DyadicTuple::balanced(1).unwrap(), m: 100 }).unwrap();
    assert!(h.is_empty());
}

#[test]
fn schur_dominates_exact_on_base_tensor() {
    let h = base_tensor(&BaseTensorSpec { tuple: DyadicTuple::balanced(4).unwrap(), m: 0 }).unwrap();
    let hs = hilbert_schmidt(&h);
    for id in BaseBound::ALL {
        let p = id.partition();
        let exact = partition_norm(&h, &p).unwrap();
        let schur = schur_bound(&h, &p).unwrap();
        assert!(exact <= schur * (1.0 + 1e-12) && schur <= hs * (1.0 + 1e-12));
    }
}

#[test]
fn power_iteration_agrees_with_dense_path() {
    // A path graph of 2 × 2500 nodes forces the iterative branch.
    let k = 2500;
    let mut entries = Vec::new();
    let mut values = Vec::new();
    for i in 0..k {
        entries.push((i, i));
        values.push(C64::new(1.0, 0.0));
        if i + 1 < k {
            entries.push((i, i + 1));
            values.push(C64::new(0.5, 0.0));
        }
    }
    let big = SparsePattern::new(k, k, entries);
    assert_eq!(big.component_count(), 1);
    let got = big.norm(&values).unwrap();
    // Bidiagonal Toeplitz: the norm tends to 1 + 0.5 from below.
    assert!(got < 1.5 && got > 1.5 - 1e-4, "{got}");
}

#[test]
fn base_bound_sweep_is_consistent() {
    let report = verify_base_tensor_bounds(4, 0.25).unwrap();
    assert!(report.chain_holds());
    assert!(report.max_duality_gap() <= 1e-10);
    let ratio_bound = report
        .rows
        .iter()
        .filter(|r| r.bound == BaseBound::N1N3 && r.tuple.n == r.tuple.n1 && r.tuple.n1 == r.tuple.n2 && r.tuple.n2 == r.tuple.n3)
        .map(|r| r.ratio())
        .fold(0.0, f64::max);
    assert!(ratio_bound.is_finite() && ratio_bound < 10.0);
}

fn small_tensor() -> impl Strategy<Value = SparseTensor> {
    prop::collection::vec(((-2i32..=2, -2i32..=2, -2i32..=2, -2i32..=2, -2i32..=2, -2i32..=2), -3.0f64..3.0, -3.0f64..3.0), 1..30)
        .prop_map(|items| {
            SparseTensor::from_entries(
                &["a", "b", "c"],
                items.into_iter().map(|((a0, a1, b0, b1, c0, c1), re, im)| {
                    (vec![FreqIndex(a0, a1), FreqIndex(b0, b1), FreqIndex(c0, c1)], C64::new(re, im))
                }),
            )
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn duality_and_conjugation(h in small_tensor()) {
        for p in [Partition::new(&["a"], &["b", "c"]), Partition::new(&["a", "c"], &["b"])] {
            let x = partition_norm(&h, &p).unwrap();
            prop_assert!((x - partition_norm(&h, &p.transpose()).unwrap()).abs() <= 1e-9 * (1.0 + x));
            prop_assert!((x - partition_norm(&h.conj(), &p).unwrap()).abs() <= 1e-9 * (1.0 + x));
            prop_assert!(x <= schur_bound(&h, &p).unwrap() * (1.0 + 1e-9) + 1e-12);
            prop_assert!(x <= hilbert_schmidt(&h) * (1.0 + 1e-9) + 1e-12);
        }
    }

    #[test]
    fn norm_is_homogeneous(h in small_tensor(), re in -4.0f64..4.0, im in -4.0f64..4.0) {
        let p = Partition::new(&["a", "b"], &["c"]);
        let c = C64::new(re, im);
        let lhs = partition_norm(&h.scale(c), &p).unwrap();
        let rhs = c.norm() * partition_norm(&h, &p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs));
    }

    #[test]
    fn restriction_does_not_increase_norm(h in small_tensor()) {
        let p = Partition::new(&["b"], &["a", "c"]);
        let sub = h.retain(|k| k[0].0 >= 0);
        prop_assert!(partition_norm(&sub, &p).unwrap() <= partition_norm(&h, &p).unwrap() * (1.0 + 1e-9) + 1e-12);
    }
}
