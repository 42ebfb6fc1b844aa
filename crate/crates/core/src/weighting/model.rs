use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::global::{global_weight, GlobalScheme, ScalingFn};
use super::local::LocalScheme;
use super::stats::{contingency_counts, CollectionStats};
use crate::corpus::Label;
use crate::sparse::SparseVector;
use crate::textproc::{CountedDoc, Vocabulary};
use crate::{Error, Result};

/// Everything needed to turn counted documents into weighted vectors, fitted
/// on training data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightModel {
    pub local: LocalScheme,
    pub global: GlobalScheme,
    /// One weight per vocabulary index.
    pub global_weights: Vec<f64>,
    pub normalize: bool,
    pub stats: CollectionStats,
}

pub fn fit_weight_model<'a>(
    train_docs: impl IntoIterator<Item = (&'a CountedDoc, Label)>,
    vocab: &Vocabulary,
    local: LocalScheme,
    global: GlobalScheme,
    normalize: bool,
) -> Result<WeightModel> {
    let (terms, stats) = contingency_counts(train_docs, vocab.len())?;
    if matches!(local, LocalScheme::Btf { .. }) && !(stats.avg_dl > 0.0) {
        return Err(Error::InvalidParameter(
            "btf needs a positive average document length".into(),
        ));
    }
    let global_weights = terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            global_weight(&global, t, &stats).map_err(|e| e.with_term(|| vocab.feature(i).to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightModel {
        local,
        global,
        global_weights,
        normalize,
        stats,
    })
}

/// Local weight times global weight for each in-vocabulary term, divided by
/// the Euclidean norm when the model normalizes.
pub fn vectorize(doc: &CountedDoc, model: &WeightModel) -> SparseVector {
    let raw: Vec<(usize, f64)> = doc
        .counts
        .iter()
        .map(|&(i, tf)| {
            let l = model.local.weight(tf, doc.max_tf, doc.dl, model.stats.avg_dl);
            (i, l * model.global_weights[i])
        })
        .collect();
    let v = SparseVector::from_sorted_unchecked(raw);
    if model.normalize {
        let norm = v.squared_norm().sqrt();
        if norm > 0.0 {
            return v.scaled(1.0 / norm);
        }
    }
    v
}

impl WeightModel {
    pub fn dim(&self) -> usize {
        self.global_weights.len()
    }

    /// Text form: `key<TAB>value` header lines, a `weights<TAB>n` line, then
    /// `index<TAB>g` lines. Doubles use shortest round-trip formatting.
    pub fn to_text(&self) -> String {
        let mut out = format!("local\t{}\n", self.local.id());
        match self.local {
            LocalScheme::Atf { k } => out.push_str(&format!("local.k\t{k}\n")),
            LocalScheme::Btf { k1, b } => {
                out.push_str(&format!("local.k1\t{k1}\nlocal.b\t{b}\n"))
            }
            _ => {}
        }
        out.push_str(&format!("global\t{}\n", self.global.id()));
        if let Some(b0) = self.global.b0() {
            out.push_str(&format!("global.b0\t{b0}\n"));
        }
        if let Some(f) = self.global.scaling() {
            out.push_str(&format!("global.scaling\t{f}\n"));
        }
        out.push_str(&format!(
            "normalize\t{}\nstats.n_pos\t{}\nstats.n_neg\t{}\nstats.avg_dl\t{}\nweights\t{}\n",
            self.normalize,
            self.stats.n_pos,
            self.stats.n_neg,
            self.stats.avg_dl,
            self.global_weights.len()
        ));
        for (i, g) in self.global_weights.iter().enumerate() {
            out.push_str(&format!("{i}\t{g}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let err = |line: usize, detail: String| Error::Parse {
            what: "weight model",
            line,
            detail,
        };
        let mut header: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        let mut lines = text.lines().enumerate();
        let count = loop {
            let Some((idx, line)) = lines.next() else {
                return Err(err(idx_after(text), "missing weights line".into()));
            };
            let (key, value) = line
                .split_once('\t')
                .ok_or_else(|| err(idx + 1, "expected key<TAB>value".into()))?;
            if key == "weights" {
                break value
                    .parse::<usize>()
                    .map_err(|_| err(idx + 1, format!("bad count {value:?}")))?;
            }
            header.insert(key, (idx + 1, value));
        };

        let get = |key: &str| -> Result<Option<f64>> {
            header
                .get(key)
                .map(|&(line, v)| {
                    v.parse::<f64>()
                        .map_err(|_| err(line, format!("bad number {v:?} for {key}")))
                })
                .transpose()
        };
        let text_of = |key: &str| -> Result<&str> {
            header
                .get(key)
                .map(|&(_, v)| v)
                .ok_or_else(|| err(0, format!("missing {key}")))
        };

        let local = LocalScheme::from_id(
            text_of("local")?,
            get("local.k")?.unwrap_or(LocalScheme::DEFAULT_K),
            get("local.k1")?.unwrap_or(LocalScheme::DEFAULT_K1),
            get("local.b")?.unwrap_or(LocalScheme::DEFAULT_B),
        )?;
        let scaling = header
            .get("global.scaling")
            .map(|&(_, v)| v.parse::<ScalingFn>())
            .transpose()?;
        let global = GlobalScheme::from_id(text_of("global")?, get("global.b0")?, scaling)?;
        let normalize = match text_of("normalize")? {
            "true" => true,
            "false" => false,
            other => return Err(err(0, format!("bad normalize flag {other:?}"))),
        };
        let as_count = |key: &str| -> Result<u64> {
            let (line, v) = *header.get(key).ok_or_else(|| err(0, format!("missing {key}")))?;
            v.parse().map_err(|_| err(line, format!("bad count {v:?}")))
        };
        let stats = CollectionStats::new(
            as_count("stats.n_pos")?,
            as_count("stats.n_neg")?,
            get("stats.avg_dl")?.ok_or_else(|| err(0, "missing stats.avg_dl".into()))?,
        )?;

        let mut global_weights = Vec::with_capacity(count);
        for (idx, line) in lines {
            if line.is_empty() {
                continue;
            }
            let (i, g) = line
                .split_once('\t')
                .ok_or_else(|| err(idx + 1, "expected index<TAB>weight".into()))?;
            if i.parse::<usize>().ok() != Some(global_weights.len()) {
                return Err(err(idx + 1, format!("index {i:?} is not dense")));
            }
            let g: f64 = g
                .parse()
                .map_err(|_| err(idx + 1, format!("bad weight {g:?}")))?;
            global_weights.push(g);
        }
        if global_weights.len() != count {
            return Err(Error::DimensionMismatch(format!(
                "weight model declares {count} weights but lists {}",
                global_weights.len()
            )));
        }
        Ok(WeightModel {
            local,
            global,
            global_weights,
            normalize,
            stats,
        })
    }
}

fn idx_after(text: &str) -> usize {
    text.lines().count() + 1
}
