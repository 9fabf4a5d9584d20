mod common;

use common::{max_abs_diff, naive_gram, reference_fd};
use fdcov::linalg::{is_psd, spectral_norm, sym_eigenvalues, SymMatrix};
use fdcov::oracle::TrackedStream;
use fdcov::sketch::{Batch, FdSketch};
use fdcov::stream::{into_batches, Family, Generator};
use proptest::prelude::*;

#[test]
fn matches_independent_reference_on_unit_vectors() {
    let (d, ell) = (6, 3);
    let batches: Vec<Vec<Vec<f64>>> = Generator::new(Family::Gaussian, d, 2024)
        .unwrap()
        .take(20)
        .map(|v| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            vec![v.iter().map(|x| x / n).collect()]
        })
        .collect();
    let expected = reference_fd(d, ell, &batches);
    let mut sk = FdSketch::<f64>::new(d, ell).unwrap();
    for (batch, want) in batches.iter().zip(&expected) {
        sk.update(&Batch::from_columns(d, batch).unwrap()).unwrap();
        let diff = max_abs_diff(want, sk.covariance_estimate());
        assert!(diff <= 1e-8, "step {}: {diff:e}", sk.steps());
    }
}

#[test]
fn matches_reference_with_wide_batches() {
    let (d, ell) = (5, 2);
    let vectors: Vec<Vec<f64>> = Generator::new(Family::Gaussian, d, 99).unwrap().take(24).collect();
    let batches: Vec<Vec<Vec<f64>>> = vectors.chunks(4).map(|c| c.to_vec()).collect();
    let expected = reference_fd(d, ell, &batches);
    let mut sk = FdSketch::<f64>::new(d, ell).unwrap();
    for (batch, want) in batches.iter().zip(&expected) {
        sk.update(&Batch::from_columns(d, batch).unwrap()).unwrap();
        assert!(max_abs_diff(want, sk.covariance_estimate()) <= 1e-8);
    }
}

fn family_strategy() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Gaussian),
        (1usize..6, prop_oneof![Just(0.0), Just(0.1)])
            .prop_map(|(rank, noise)| Family::LowRank { rank, noise }),
        Just(Family::Rotations),
        Just(Family::Repeated),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn per_step_invariants(
        d in 2usize..10,
        ell_frac in 0.0f64..1.0,
        width in 1usize..5,
        steps in 1usize..30,
        family in family_strategy(),
        seed in any::<u64>(),
    ) {
        let ell = 1 + ((d - 1) as f64 * ell_frac) as usize;
        let vectors: Vec<_> = Generator::new(family, d, seed).unwrap().take(steps * width).collect();
        let mut ts = TrackedStream::<f64>::new(d, ell).unwrap();
        for batch in into_batches::<f64>(d, &vectors, width).unwrap() {
            let old = ts.sketch.covariance_estimate().clone();
            let trace = ts.push(&batch).unwrap().clone();
            let cur = ts.sketch.covariance_estimate();

            // rank control
            prop_assert_eq!(trace.spectrum[ell - 1], 0.0);
            let eigs = sym_eigenvalues(cur).unwrap();
            prop_assert!(eigs[ell - 1].abs() <= 1e-12 * cur.frobenius_norm().max(1.0));
            prop_assert!(is_psd(cur, 1e-10).unwrap());

            // Δ is PSD with norm λ and its top ell eigenvalues tied at λ
            let lam = trace.lambda_ell;
            prop_assert!(lam >= 0.0);
            let tol = 1e-9 * lam.max(1.0);
            let delta_eigs = sym_eigenvalues(&trace.delta).unwrap();
            prop_assert!(*delta_eigs.last().unwrap() >= -1e-10);
            prop_assert!((spectral_norm(&trace.delta).unwrap() - lam).abs() <= tol);
            for &v in &delta_eigs[..ell] {
                prop_assert!((v - lam).abs() <= tol);
            }
            prop_assert!(trace.delta.trace() >= ell as f64 * lam - d as f64 * 1e-9);

            // C̃ₜ − C̃ₜ₋₁ + XXᵀ is the same Δ
            let gram = SymMatrix::zeros(d).outer_product_accumulate(&batch).unwrap();
            let again = cur.sub(&old).unwrap().scale(-1.0).add(&gram).unwrap();
            prop_assert!(again.sub(&trace.delta).unwrap().max_abs() <= 1e-12 * gram.max_abs().max(1.0));
        }

        // telescoping
        let sum = ts.ledger.delta_sum().unwrap();
        let residual = ts.exact.covariance().sub(ts.sketch.covariance_estimate()).unwrap();
        let tol = steps as f64 * 1e-9 * ts.exact.covariance().max_abs().max(1.0);
        prop_assert!(sum.sub(&residual).unwrap().max_abs() <= tol);
        prop_assert!(ts.sketch.shrinkage_total() >= 0.0);
    }

    #[test]
    fn low_rank_streams_are_exact(
        d in 3usize..12,
        rank in 1usize..4,
        width in 1usize..4,
        steps in 1usize..40,
        seed in any::<u64>(),
    ) {
        let ell = (rank + 1).min(d);
        prop_assume!(rank < ell);
        let family = Family::LowRank { rank, noise: 0.0 };
        let vectors: Vec<_> = Generator::new(family, d, seed).unwrap().take(steps * width).collect();
        let mut sk = FdSketch::<f64>::new(d, ell).unwrap();
        for batch in into_batches::<f64>(d, &vectors, width).unwrap() {
            prop_assert_eq!(sk.update(&batch).unwrap().lambda_ell, 0.0);
        }
        let exact = naive_gram(d, &vectors);
        prop_assert!(max_abs_diff(&exact, sk.covariance_estimate()) <= 1e-9);
    }
}

#[test]
fn f32_sketch_respects_bound() {
    let (d, ell) = (12, 4);
    let vectors: Vec<_> = Generator::new(Family::Gaussian, d, 5).unwrap().take(60).collect();
    let mut ts = TrackedStream::<f32>::new(d, ell).unwrap();
    for batch in into_batches::<f32>(d, &vectors, 2).unwrap() {
        let trace = ts.push(&batch).unwrap();
        assert_eq!(trace.spectrum[ell - 1], 0.0);
    }
    let report = ts.verify_lemma1().unwrap();
    assert!(report.pass, "{report:?}");
    let proof = ts.verify_proof_steps(&[0, 1, 2, 3]).unwrap();
    assert!(proof.iter().all(|p| p.chain.pass && p.telescoping.pass));
}

#[test]
fn exact_covariance_is_invariant_to_batch_size() {
    // the sketch may depend on grouping; the exact covariance must not
    let d = 6;
    let vectors: Vec<_> = Generator::new(Family::Gaussian, d, 11).unwrap().take(30).collect();
    let mut covs = Vec::new();
    for width in [1, 4, 30] {
        let mut ts = TrackedStream::<f64>::new(d, 3).unwrap();
        for b in into_batches::<f64>(d, &vectors, width).unwrap() {
            ts.push(&b).unwrap();
        }
        assert!(ts.verify_lemma1().unwrap().pass);
        covs.push(ts.exact.covariance().clone());
    }
    for c in &covs[1..] {
        assert!(c.sub(&covs[0]).unwrap().max_abs() <= 1e-12);
    }
}
