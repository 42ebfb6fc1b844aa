//! L2-regularized L2-loss linear SVM, trained by dual coordinate descent.
//!
//! The primal problem is
//!
//! ```text
//! min_w  1/2 w'w + C * sum_i max(0, 1 - y_i w'x_i)^2
//! ```
//!
//! and the solver works on its dual, `min_a 1/2 a'(Q + D)a - e'a` subject to
//! `a >= 0`, where `Q_ij = y_i y_j x_i'x_j` and `D = I / (2C)`. Each pass
//! visits the coordinates in a seeded random order and keeps `w = sum_i a_i
//! y_i x_i` up to date. There is no intercept.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::sparse::SparseVector;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct Dataset {
    rows: Vec<SparseVector>,
    labels: Vec<Label>,
    dim: usize,
}

impl Dataset {
    pub fn new(rows: Vec<SparseVector>, labels: Vec<Label>, dim: usize) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        for row in &rows {
            if let Some(index) = row.max_index().filter(|&i| i >= dim) {
                return Err(Error::IndexOutOfRange { index, dim });
            }
        }
        Ok(Dataset { rows, labels, dim })
    }

    pub fn rows(&self) -> &[SparseVector] {
        &self.rows
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub c: f64,
    /// Stop once the range of projected gradients over a pass drops below this.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            c: 1.0,
            tol: 0.1,
            max_iter: 1000,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidParameter(format!("C must be positive, got {}", self.c)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub w: Vec<f64>,
}

/// Solver diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainTrace {
    pub passes: usize,
    pub converged: bool,
    /// Dual objective after each pass.
    pub dual_objective: Vec<f64>,
}

pub fn train(data: &Dataset, cfg: &TrainConfig) -> Result<LinearModel> {
    train_traced(data, cfg).map(|(model, _)| model)
}

pub fn train_traced(data: &Dataset, cfg: &TrainConfig) -> Result<(LinearModel, TrainTrace)> {
    cfg.validate()?;
    if !data.labels.contains(&Label::Positive) || !data.labels.contains(&Label::Negative) {
        return Err(Error::SingleClass);
    }
    if let Some(row) = data
        .rows
        .iter()
        .position(|r| r.entries().iter().any(|&(_, v)| !v.is_finite()))
    {
        return Err(Error::NonFinite { row });
    }

    let n = data.len();
    let diag = 0.5 / cfg.c;
    let y: Vec<f64> = data.labels.iter().map(|l| l.sign()).collect();
    let qd: Vec<f64> = data.rows.iter().map(|r| r.squared_norm() + diag).collect();
    let mut alpha = vec![0.0; n];
    let mut w = vec![0.0; data.dim];
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut trace = TrainTrace {
        passes: 0,
        converged: false,
        dual_objective: Vec::new(),
    };

    while trace.passes < cfg.max_iter {
        order.shuffle(&mut rng);
        let mut pg_max = f64::NEG_INFINITY;
        let mut pg_min = f64::INFINITY;
        for &i in &order {
            let row = &data.rows[i];
            let g = y[i] * row.dot_unchecked(&w) - 1.0 + diag * alpha[i];
            let pg = if alpha[i] == 0.0 { g.min(0.0) } else { g };
            pg_max = pg_max.max(pg);
            pg_min = pg_min.min(pg);
            if pg.abs() > 1e-12 {
                let old = alpha[i];
                alpha[i] = (old - g / qd[i]).max(0.0);
                row.axpy_into((alpha[i] - old) * y[i], &mut w);
            }
        }
        trace.passes += 1;
        trace.dual_objective.push(dual_objective(&w, &alpha, diag));
        if pg_max - pg_min < cfg.tol {
            trace.converged = true;
            break;
        }
    }
    Ok((LinearModel { w }, trace))
}

fn dual_objective(w: &[f64], alpha: &[f64], diag: f64) -> f64 {
    let ww: f64 = w.iter().map(|v| v * v).sum();
    let aa: f64 = alpha.iter().map(|a| a * a).sum();
    let sum_a: f64 = alpha.iter().sum();
    0.5 * ww + 0.5 * diag * aa - sum_a
}

impl LinearModel {
    pub fn dim(&self) -> usize {
        self.w.len()
    }

    /// `w'x`.
    pub fn decision(&self, x: &SparseVector) -> Result<f64> {
        x.dot(&self.w)
    }

    /// Positive iff the decision value is at least zero.
    pub fn predict(&self, x: &SparseVector) -> Result<Label> {
        Ok(label_for(self.decision(x)?))
    }

    pub fn primal_objective(&self, data: &Dataset, c: f64) -> f64 {
        let reg: f64 = 0.5 * self.w.iter().map(|v| v * v).sum::<f64>();
        let loss: f64 = data
            .rows
            .iter()
            .zip(&data.labels)
            .map(|(x, l)| {
                let margin = 1.0 - l.sign() * x.dot_unchecked(&self.w);
                if margin > 0.0 {
                    margin * margin
                } else {
                    0.0
                }
            })
            .sum();
        reg + c * loss
    }

    /// `dim<TAB>n` followed by `index<TAB>weight` for every nonzero weight.
    pub fn to_text(&self) -> String {
        let mut out = format!("dim\t{}\n", self.w.len());
        for (i, &v) in self.w.iter().enumerate() {
            if v != 0.0 {
                out.push_str(&format!("{i}\t{v}\n"));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let err = |line: usize, detail: String| Error::Parse {
            what: "linear model",
            line,
            detail,
        };
        let mut lines = text.lines().enumerate();
        let dim = match lines.next() {
            Some((_, first)) => first
                .strip_prefix("dim\t")
                .and_then(|d| d.parse::<usize>().ok())
                .ok_or_else(|| err(1, "expected dim<TAB>n".into()))?,
            None => return Err(err(1, "empty model".into())),
        };
        let mut w = vec![0.0; dim];
        for (idx, line) in lines {
            if line.is_empty() {
                continue;
            }
            let parsed = line
                .split_once('\t')
                .and_then(|(i, v)| Some((i.parse::<usize>().ok()?, v.parse::<f64>().ok()?)));
            let (i, v) = parsed.ok_or_else(|| err(idx + 1, format!("bad entry {line:?}")))?;
            if i >= dim {
                return Err(Error::IndexOutOfRange { index: i, dim });
            }
            w[i] = v;
        }
        Ok(LinearModel { w })
    }
}

pub fn label_for(decision: f64) -> Label {
    if decision >= 0.0 {
        Label::Positive
    } else {
        Label::Negative
    }
}
