mod common;

use common::*;
use eigensens_core::{
    eigh, estimate, estimate_loo, mean_vector, DataMatrix, Divisor, EstimatorSpec, LooDowndate,
    Matrix,
};
use proptest::prelude::*;

const SPECS: [EstimatorSpec; 4] = [
    EstimatorSpec::covariance(Divisor::N),
    EstimatorSpec::covariance(Divisor::NMinusOne),
    EstimatorSpec::correlation(Divisor::N),
    EstimatorSpec::correlation(Divisor::NMinusOne),
];

fn table(n: usize, p: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-50.0..50.0f64, p), n)
}

fn sized_table() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (3usize..14, 1usize..6).prop_flat_map(|(n, p)| table(n, p))
}

proptest! {
    #[test]
    fn loo_equals_physical_deletion(rows in sized_table()) {
        let x = data(&rows);
        for spec in SPECS {
            if estimate(&x, spec).is_err() {
                continue;
            }
            for i in 0..x.n() {
                let dropped = delete_row(&x, i);
                let (Ok(loo), Ok(phys)) = (estimate_loo(&x, spec, i), estimate(&dropped, spec)) else { continue };
                prop_assert!(loo.matrix.max_abs_diff(&phys.matrix) <= 1e-10 * (1.0 + phys.matrix.max_abs()));
                prop_assert_eq!(loo.n_used, x.n() - 1);
            }
        }
    }

    #[test]
    fn downdate_matches_masked_estimate(rows in sized_table()) {
        let x = data(&rows);
        let dd = LooDowndate::new(&x).unwrap();
        for divisor in [Divisor::N, Divisor::NMinusOne] {
            let spec = EstimatorSpec::covariance(divisor);
            for i in 0..x.n() {
                let fast = dd.estimate_without(&x, spec, i).unwrap();
                let slow = estimate_loo(&x, spec, i).unwrap();
                prop_assert!(fast.matrix.max_abs_diff(&slow.matrix) <= 1e-10 * (1.0 + slow.matrix.max_abs()));
            }
        }
    }

    #[test]
    fn covariance_invariant_to_row_permutation(rows in sized_table(), seed in any::<u64>()) {
        let mut shuffled = rows.clone();
        let mut r = rng(seed);
        rand::seq::SliceRandom::shuffle(shuffled.as_mut_slice(), &mut r);
        let spec = EstimatorSpec::covariance(Divisor::NMinusOne);
        let a = estimate(&data(&rows), spec).unwrap().matrix;
        let b = estimate(&data(&shuffled), spec).unwrap().matrix;
        prop_assert!(a.max_abs_diff(&b) <= 1e-10 * (1.0 + a.max_abs()));
    }

    #[test]
    fn covariance_invariant_to_shift(rows in sized_table(), shift in prop::collection::vec(-1e3..1e3f64, 6)) {
        let moved: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().zip(&shift).map(|(v, s)| v + s).collect()).collect();
        let spec = EstimatorSpec::covariance(Divisor::N);
        let a = estimate(&data(&rows), spec).unwrap().matrix;
        let b = estimate(&data(&moved), spec).unwrap().matrix;
        prop_assert!(a.max_abs_diff(&b) <= 1e-10 * (1.0 + a.max_abs()) * 1e3);
    }

    #[test]
    fn correlation_invariant_to_column_scale(rows in sized_table(), scales in prop::collection::vec(0.01..100.0f64, 6)) {
        let spec = EstimatorSpec::correlation(Divisor::NMinusOne);
        let Ok(a) = estimate(&data(&rows), spec) else { return Ok(()) };
        let scaled: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().zip(&scales).map(|(v, s)| v * s).collect()).collect();
        let b = estimate(&data(&scaled), spec).unwrap();
        prop_assert!(a.matrix.max_abs_diff(&b.matrix) <= 1e-10);
        for j in 0..a.dim() {
            prop_assert!((a.matrix[(j, j)] - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn estimate_is_symmetric_and_psd(rows in sized_table()) {
        for spec in SPECS {
            let Ok(w) = estimate(&data(&rows), spec) else { continue };
            prop_assert!(w.matrix.max_asymmetry() <= 1e-12);
            let smallest = *oracle_values(&to_na(&w.matrix)).last().unwrap();
            prop_assert!(smallest >= -1e-8 * w.trace().max(1e-300));
        }
    }
}

#[test]
fn covariance_matches_textbook_formula() {
    for seed in 0..20 {
        let rows = gaussian_rows(&mut rng(seed), 25, 4);
        for divisor in [Divisor::N, Divisor::NMinusOne] {
            let w = estimate(&data(&rows), EstimatorSpec::covariance(divisor)).unwrap();
            let o = naive_covariance(&rows, divisor);
            assert!(w.matrix.max_abs_diff(&from_na(&o)) < 1e-10);
        }
    }
}

#[test]
fn variance_of_one_two_three() {
    let x = DataMatrix::from_rows(&[[1.0], [2.0], [3.0]]).unwrap();
    let w = estimate(&x, EstimatorSpec::covariance(Divisor::NMinusOne)).unwrap();
    assert_eq!(w.matrix[(0, 0)], 1.0);
}

#[test]
fn mean_vector_against_column_sums() {
    let x = random_data(7, 40, 5);
    let mean = mean_vector(&x);
    for (c, m) in mean.iter().enumerate() {
        let s: f64 = (0..x.n()).map(|i| x.row(i)[c]).sum();
        assert!((m - s / 40.0).abs() < 1e-12);
    }
}

#[test]
fn trace_equals_eigenvalue_sum() {
    let x = random_data(3, 30, 6);
    let w = estimate(&x, EstimatorSpec::covariance(Divisor::NMinusOne)).unwrap();
    let e = eigh(&w).unwrap();
    let sum: f64 = e.values().iter().sum();
    assert!((sum - w.trace()).abs() <= 1e-8 * w.trace());
}

#[test]
fn random_ten_by_three_each_row() {
    let x = random_data(11, 10, 3);
    let spec = EstimatorSpec::covariance(Divisor::NMinusOne);
    for i in 0..10 {
        let loo = estimate_loo(&x, spec, i).unwrap();
        let o = naive_covariance(&rows_of(&delete_row(&x, i)), Divisor::NMinusOne);
        assert!(loo.matrix.max_abs_diff(&from_na(&o)) < 1e-10);
    }
}

#[test]
fn matrix_round_trip_helpers() {
    let m = Matrix::from_fn(2, 3, |r, c| (r * 3 + c) as f64);
    assert_eq!(from_na(&to_na(&m)), m);
}
