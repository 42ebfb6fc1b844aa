mod common;

use common::{
    newton_reference, primal, random_problem, svm_oracle_worst_gap, to_dataset,
    two_point_worst_error, ORACLE_TOL,
};
use termweight::classifier::{train, train_traced, Dataset, TrainConfig};
use termweight::corpus::Label;
use termweight::SparseVector;

#[test]
fn matches_reference_optimizer() {
    let gap = svm_oracle_worst_gap(ORACLE_TOL);
    assert!(gap <= 1e-4, "relative primal gap {gap:e}");
}

#[test]
fn newton_reference_is_a_minimum() {
    // Sanity check on the oracle itself: small perturbations never improve it.
    let (rows, y) = random_problem(123);
    let w = newton_reference(&rows, &y, 1.0);
    let best = primal(&w, &rows, &y, 1.0);
    for i in 0..w.len() {
        for delta in [-1e-4, 1e-4] {
            let mut p = w.clone();
            p[i] += delta;
            assert!(primal(&p, &rows, &y, 1.0) >= best);
        }
    }
}

#[test]
fn two_point_closed_form() {
    assert!(two_point_worst_error(ORACLE_TOL) <= 1e-3);
}

#[test]
fn gap_shrinks_with_tolerance() {
    let loose = svm_oracle_worst_gap(1e-2);
    let tight = svm_oracle_worst_gap(1e-8);
    assert!(tight <= loose);
    assert!(tight <= 1e-8, "{tight:e}");
}

#[test]
fn dual_objective_is_monotone_on_random_problems() {
    for seed in 0..10 {
        let (rows, y) = random_problem(seed);
        let cfg = TrainConfig {
            tol: 1e-8,
            seed,
            ..TrainConfig::default()
        };
        let (_, trace) = train_traced(&to_dataset(&rows, &y), &cfg).unwrap();
        assert!(trace.converged);
        assert!(trace
            .dual_objective
            .windows(2)
            .all(|w| w[1] <= w[0] + 1e-12));
    }
}

#[test]
fn feature_scaling_keeps_separable_predictions() {
    let pts = [(2.0, 1.0, true), (1.5, -0.5, true), (-1.0, -2.0, false), (-0.5, 1.0, false)];
    let build = |gamma: f64| {
        let rows = pts
            .iter()
            .map(|&(a, b, _)| SparseVector::new(vec![(0, gamma * a), (1, gamma * b)]).unwrap())
            .collect();
        let labels = pts
            .iter()
            .map(|&(.., p)| if p { Label::Positive } else { Label::Negative })
            .collect();
        Dataset::new(rows, labels, 2).unwrap()
    };
    let cfg = TrainConfig {
        c: 1000.0,
        tol: 1e-6,
        ..TrainConfig::default()
    };
    for gamma in [0.01, 1.0, 50.0] {
        let data = build(gamma);
        let m = train(&data, &cfg).unwrap();
        for (row, label) in data.rows().iter().zip(data.labels()) {
            assert_eq!(m.predict(row).unwrap(), *label, "gamma {gamma}");
        }
    }
}
