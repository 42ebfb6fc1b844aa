//! Test-only reference implementations, independent of the library's code paths.
#![allow(dead_code)]

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use termweight::classifier::Dataset;
use termweight::corpus::Label;
use termweight::SparseVector;

type Big = FBig<HalfEven, 2>;

const PRECISION: usize = 256;

fn big(n: u64) -> Big {
    Big::from(n).with_precision(PRECISION).value()
}

/// Class-conditional entropy of a term with add-one smoothed counts, evaluated
/// in 256-bit binary floating point.
pub fn smoothed_entropy_oracle(a: u64, c: u64, n_pos: u64, n_neg: u64) -> f64 {
    let r_pos = big(a + 1) / big(n_pos);
    let r_neg = big(c + 1) / big(n_neg);
    let total = &r_pos + &r_neg;
    let p_pos = &r_pos / &total;
    let p_neg = &r_neg / &total;
    let ln2 = big(2).ln();
    let h = -(&p_pos * p_pos.ln() + &p_neg * p_neg.ln()) / ln2;
    h.to_f64().value()
}

/// Primal L2-loss SVM objective evaluated on dense rows.
pub fn primal(w: &[f64], rows: &[Vec<f64>], y: &[f64], c: f64) -> f64 {
    let reg = 0.5 * w.iter().map(|v| v * v).sum::<f64>();
    let loss: f64 = rows
        .iter()
        .zip(y)
        .map(|(x, yi)| {
            let m = 1.0 - yi * dot(w, x);
            if m > 0.0 {
                m * m
            } else {
                0.0
            }
        })
        .sum();
    reg + c * loss
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `H d = g` by Gaussian elimination with partial pivoting.
fn solve(mut h: Vec<Vec<f64>>, mut g: Vec<f64>) -> Vec<f64> {
    let n = g.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| h[i][col].abs().total_cmp(&h[j][col].abs()))
            .unwrap();
        h.swap(col, pivot);
        g.swap(col, pivot);
        for row in col + 1..n {
            let f = h[row][col] / h[col][col];
            for k in col..n {
                h[row][k] -= f * h[col][k];
            }
            g[row] -= f * g[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| h[row][k] * x[k]).sum();
        x[row] = (g[row] - s) / h[row][row];
    }
    x
}

/// Reference minimizer of the primal by generalized Newton steps with
/// backtracking, run until the gradient vanishes.
pub fn newton_reference(rows: &[Vec<f64>], y: &[f64], c: f64) -> Vec<f64> {
    let dim = rows[0].len();
    let mut w = vec![0.0; dim];
    for _ in 0..200 {
        let mut grad = w.clone();
        let mut hess: Vec<Vec<f64>> = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        for (x, &yi) in rows.iter().zip(y) {
            let m = 1.0 - yi * dot(&w, x);
            if m > 0.0 {
                for i in 0..dim {
                    grad[i] -= 2.0 * c * yi * x[i] * m;
                    for j in 0..dim {
                        hess[i][j] += 2.0 * c * x[i] * x[j];
                    }
                }
            }
        }
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm < 1e-13 {
            break;
        }
        let step = solve(hess, grad.clone());
        let f0 = primal(&w, rows, y, c);
        let slope: f64 = -dot(&grad, &step);
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = w.iter().zip(&step).map(|(wi, si)| wi - t * si).collect();
            if primal(&trial, rows, y, c) <= f0 + 1e-4 * t * slope || t < 1e-12 {
                w = trial;
                break;
            }
            t *= 0.5;
        }
    }
    w
}

/// Random dense problem with both labels present.
pub fn random_problem(seed: u64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(4..=50);
    let dim = rng.gen_range(1..=10);
    let truth: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    loop {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let y: Vec<f64> = rows
            .iter()
            .map(|x| {
                let noisy = dot(&truth, x) + rng.gen_range(-0.3..0.3);
                if noisy >= 0.0 {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect();
        if y.contains(&1.0) && y.contains(&-1.0) {
            return (rows, y);
        }
    }
}

pub fn to_dataset(rows: &[Vec<f64>], y: &[f64]) -> Dataset {
    let dim = rows[0].len();
    let sparse = rows
        .iter()
        .map(|r| SparseVector::new(r.iter().copied().enumerate().collect()).unwrap())
        .collect();
    let labels = y
        .iter()
        .map(|&v| if v > 0.0 { Label::Positive } else { Label::Negative })
        .collect();
    Dataset::new(sparse, labels, dim).unwrap()
}

use termweight::weighting::{
    entropy_h, global_weight, imbalance_x, scale, CollectionStats, GlobalScheme, ScalingFn,
    TermContingency,
};

const EPS: f64 = 1e-9;

/// Schemes whose weight must not change when the class roles are exchanged.
pub fn symmetric_schemes() -> Vec<GlobalScheme> {
    let mut out = vec![
        GlobalScheme::No,
        GlobalScheme::Idf,
        GlobalScheme::Pidf,
        GlobalScheme::Bidf,
        GlobalScheme::Ig,
        GlobalScheme::Gr,
        GlobalScheme::Mi,
        GlobalScheme::MiPrime,
        GlobalScheme::Chi,
        GlobalScheme::Ne,
    ];
    out.extend([0.0, 0.3, 1.0].map(|b0| GlobalScheme::Re { b0 }));
    out.extend(ScalingFn::ALL.map(GlobalScheme::ScaledX));
    out
}

/// Schemes whose weight flips sign when the class roles are exchanged.
pub const DELTA_SCHEMES: [GlobalScheme; 5] = [
    GlobalScheme::Didf,
    GlobalScheme::Dsidf,
    GlobalScheme::DsidfLegacy,
    GlobalScheme::Dspidf,
    GlobalScheme::Dbidf,
];

/// Checks one contingency against the scheme invariants; returns a
/// description of every violation.
pub fn term_violations(a: u64, c: u64, n_pos: u64, n_neg: u64) -> Vec<String> {
    let mut bad = Vec::new();
    let s = CollectionStats::new(n_pos, n_neg, 1.0).unwrap();
    let t = TermContingency::new(a, c, &s).unwrap();
    let (ts, ss) = (t.swapped(), s.swapped());
    let at = format!("(a={a}, c={c}, N+={n_pos}, N-={n_neg})");
    let mut check = |ok: bool, what: String| {
        if !ok {
            bad.push(format!("{what} at {at}"));
        }
    };

    let hs = entropy_h(&t, &s, true).unwrap();
    check((0.0..=1.0).contains(&hs), format!("smoothed h = {hs}"));
    if a + c > 0 {
        let h = entropy_h(&t, &s, false).unwrap();
        check((0.0..=1.0).contains(&h), format!("h = {h}"));
    }

    for b0 in [0.0, 0.1, 0.5, 0.9, 1.0] {
        let g = global_weight(&GlobalScheme::Re { b0 }, &t, &s).unwrap();
        check(g >= b0 - EPS && g <= 1.0 + EPS, format!("re(b0={b0}) = {g}"));
    }

    let x = imbalance_x(&t, &s);
    check(x >= 1.0, format!("x = {x}"));

    let ig = global_weight(&GlobalScheme::Ig, &t, &s).unwrap();
    check(ig >= 0.0, format!("ig = {ig}"));

    if a + c > 0 {
        let mp = global_weight(&GlobalScheme::MiPrime, &t, &s).unwrap();
        check((-EPS..=1.0 + EPS).contains(&mp), format!("mi' = {mp}"));
        if n_pos == n_neg {
            let mi = global_weight(&GlobalScheme::Mi, &t, &s).unwrap();
            check((mi - mp).abs() < EPS, format!("mi = {mi} but mi' = {mp}"));
        }
    }

    for scheme in symmetric_schemes() {
        match (global_weight(&scheme, &t, &s), global_weight(&scheme, &ts, &ss)) {
            (Ok(g), Ok(gs)) => check((g - gs).abs() < EPS, format!("{scheme} swap {g} vs {gs}")),
            (Err(_), Err(_)) => {}
            (l, r) => check(false, format!("{scheme} swap changes definedness: {l:?} vs {r:?}")),
        }
    }
    for scheme in DELTA_SCHEMES {
        match (global_weight(&scheme, &t, &s), global_weight(&scheme, &ts, &ss)) {
            (Ok(g), Ok(gs)) => check((g + gs).abs() < EPS, format!("{scheme} antisymmetry {g} vs {gs}")),
            (Err(_), Err(_)) => {}
            (l, r) => check(false, format!("{scheme} swap changes definedness: {l:?} vs {r:?}")),
        }
    }
    bad
}

/// Every violation on the full grid `0..=N+ x 0..=N-`.
pub fn grid_violations(n_pos: u64, n_neg: u64) -> Vec<String> {
    (0..=n_pos)
        .flat_map(|a| (0..=n_neg).map(move |c| (a, c)))
        .flat_map(|(a, c)| term_violations(a, c, n_pos, n_neg))
        .collect()
}

/// Ordering and boundedness of the scaling functions on `x >= 1`.
pub fn scaling_violations() -> Vec<String> {
    use ScalingFn::*;
    let mut bad = Vec::new();
    let xs = (0..=400).map(|i| 1.0 + i as f64 * 0.25).chain([1e3, 1e6, 1e12]);
    for x in xs {
        let f = |g| scale(g, x).unwrap();
        let chain = [f(F1), f(F0), f(F2), f(F3), f(F7)];
        if chain.windows(2).any(|w| w[0] < w[1] - EPS) {
            bad.push(format!("f1 >= f0 >= f2 >= f3 >= f7 fails at x={x}: {chain:?}"));
        }
        if f(F5) >= 10.0 {
            bad.push(format!("f5({x}) = {}", f(F5)));
        }
        if f(F6) >= 20.0 {
            bad.push(format!("f6({x}) = {}", f(F6)));
        }
    }
    bad
}

/// Largest absolute difference between the library's smoothed entropy and the
/// high-precision oracle over both property grids and a few large collections.
pub fn entropy_oracle_max_error() -> (f64, usize) {
    let mut cases: Vec<(u64, u64, u64, u64)> = Vec::new();
    for (np, nn) in [(10, 10), (5, 15)] {
        for a in 0..=np {
            for c in 0..=nn {
                cases.push((a, c, np, nn));
            }
        }
    }
    cases.extend([
        (100, 0, 1000, 1000),
        (2, 0, 1000, 1000),
        (100, 1, 1000, 1000),
        (999, 3, 1000, 50_000),
        (0, 0, 1, 1_000_000),
    ]);
    let mut worst: f64 = 0.0;
    for &(a, c, np, nn) in &cases {
        let s = CollectionStats::new(np, nn, 1.0).unwrap();
        let t = TermContingency::new(a, c, &s).unwrap();
        let ours = entropy_h(&t, &s, true).unwrap();
        worst = worst.max((ours - smoothed_entropy_oracle(a, c, np, nn)).abs());
    }
    (worst, cases.len())
}

/// Tolerance at which the oracle comparisons run; the solver's default
/// stopping tolerance is far looser than a 1e-4 objective gap.
pub const ORACLE_TOL: f64 = 1e-6;

/// Worst relative primal gap of the dual solver against the Newton reference
/// over 50 random problems cycling through C in {0.1, 1, 10}.
pub fn svm_oracle_worst_gap(tol: f64) -> f64 {
    use termweight::classifier::{train, TrainConfig};
    let mut worst: f64 = 0.0;
    for seed in 0..50u64 {
        let c = [0.1, 1.0, 10.0][(seed % 3) as usize];
        let (rows, y) = random_problem(seed);
        let reference = primal(&newton_reference(&rows, &y, c), &rows, &y, c);
        let cfg = TrainConfig {
            c,
            tol,
            seed,
            ..TrainConfig::default()
        };
        let model = train(&to_dataset(&rows, &y), &cfg).unwrap();
        worst = worst.max((primal(&model.w, &rows, &y, c) - reference) / reference);
    }
    worst
}

/// Largest deviation from `4C / (1 + 4C)` on the points `+1` and `-1`.
pub fn two_point_worst_error(tol: f64) -> f64 {
    use termweight::classifier::{train, TrainConfig};
    let data = to_dataset(&[vec![1.0], vec![-1.0]], &[1.0, -1.0]);
    [0.1, 1.0, 10.0]
        .into_iter()
        .map(|c| {
            let cfg = TrainConfig {
                c,
                tol,
                ..TrainConfig::default()
            };
            let w = train(&data, &cfg).unwrap().w[0];
            (w - 4.0 * c / (1.0 + 4.0 * c)).abs()
        })
        .fold(0.0, f64::max)
}
