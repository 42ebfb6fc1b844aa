use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classifier::{label_for, LinearModel};
use crate::corpus::Label;
use crate::textproc::CountedDoc;
use crate::weighting::{vectorize, WeightModel};
use crate::{Error, Result};

/// Confusion counts and derived metrics, with the positive class as the
/// retrieval target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl EvalReport {
    /// Precision, recall and F1 are 0 when their denominators vanish.
    pub fn from_counts(tp: u64, fp: u64, fn_: u64, tn: u64) -> Result<Self> {
        let total = tp + fp + fn_ + tn;
        if total == 0 {
            return Err(Error::EmptyTestSet);
        }
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Ok(EvalReport {
            tp,
            fp,
            fn_,
            tn,
            accuracy: ratio(tp + tn, total),
            precision,
            recall,
            f1,
        })
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn metric(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Accuracy => self.accuracy,
            Metric::F1 => self.f1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Accuracy,
    F1,
}

impl Metric {
    pub fn id(self) -> &'static str {
        match self {
            Metric::Accuracy => "accuracy",
            Metric::F1 => "f1",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "accuracy" => Ok(Metric::Accuracy),
            "f1" => Ok(Metric::F1),
            other => Err(Error::InvalidParameter(format!("unknown metric {other:?}"))),
        }
    }
}

/// Vectorizes each test document with the training-fitted `weights` and
/// tallies predictions of `model`.
pub fn evaluate<'a>(
    model: &LinearModel,
    weights: &WeightModel,
    test_docs: impl IntoIterator<Item = (&'a CountedDoc, Label)>,
) -> Result<EvalReport> {
    if model.dim() != weights.dim() {
        return Err(Error::DimensionMismatch(format!(
            "classifier has {} weights, weight model has {} terms",
            model.dim(),
            weights.dim()
        )));
    }
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    for (doc, truth) in test_docs {
        let predicted = label_for(model.decision(&vectorize(doc, weights))?);
        match (predicted, truth) {
            (Label::Positive, Label::Positive) => tp += 1,
            (Label::Positive, Label::Negative) => fp += 1,
            (Label::Negative, Label::Positive) => fn_ += 1,
            (Label::Negative, Label::Negative) => tn += 1,
        }
    }
    EvalReport::from_counts(tp, fp, fn_, tn)
}
