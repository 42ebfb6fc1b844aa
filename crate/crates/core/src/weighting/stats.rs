use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::textproc::CountedDoc;
use crate::{Error, Result};

/// Training-collection totals: `N`, `N+`, `N-` and the mean unigram length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollectionStats {
    pub n: u64,
    pub n_pos: u64,
    pub n_neg: u64,
    pub avg_dl: f64,
}

impl CollectionStats {
    pub fn new(n_pos: u64, n_neg: u64, avg_dl: f64) -> Result<Self> {
        if n_pos == 0 || n_neg == 0 {
            return Err(Error::SingleClass);
        }
        if !(avg_dl.is_finite() && avg_dl >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "average document length must be finite and non-negative, got {avg_dl}"
            )));
        }
        Ok(CollectionStats {
            n: n_pos + n_neg,
            n_pos,
            n_neg,
            avg_dl,
        })
    }

    /// The same collection with the class roles exchanged.
    pub fn swapped(&self) -> Self {
        CollectionStats {
            n_pos: self.n_neg,
            n_neg: self.n_pos,
            ..*self
        }
    }
}

/// Per-term document counts: `a`/`c` documents of the positive/negative class
/// contain the term, `b`/`d` do not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TermContingency {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl TermContingency {
    pub fn new(a: u64, c: u64, stats: &CollectionStats) -> Result<Self> {
        if a > stats.n_pos || c > stats.n_neg {
            return Err(Error::InvalidParameter(format!(
                "document frequencies a={a}, c={c} exceed class sizes {}/{}",
                stats.n_pos, stats.n_neg
            )));
        }
        Ok(TermContingency {
            a,
            b: stats.n_pos - a,
            c,
            d: stats.n_neg - c,
        })
    }

    pub fn swapped(&self) -> Self {
        TermContingency {
            a: self.c,
            b: self.d,
            c: self.a,
            d: self.b,
        }
    }

    pub fn df(&self) -> u64 {
        self.a + self.c
    }
}

/// Document-frequency contingency for every vocabulary term, plus collection
/// totals, over training documents only.
pub fn contingency_counts<'a>(
    train_docs: impl IntoIterator<Item = (&'a CountedDoc, Label)>,
    vocab_len: usize,
) -> Result<(Vec<TermContingency>, CollectionStats)> {
    let mut pos_df = vec![0u64; vocab_len];
    let mut neg_df = vec![0u64; vocab_len];
    let (mut n_pos, mut n_neg, mut total_dl) = (0u64, 0u64, 0u64);
    for (doc, label) in train_docs {
        let df = match label {
            Label::Positive => {
                n_pos += 1;
                &mut pos_df
            }
            Label::Negative => {
                n_neg += 1;
                &mut neg_df
            }
        };
        for &(i, _) in &doc.counts {
            df[i] += 1;
        }
        total_dl += doc.dl as u64;
    }
    let n = n_pos + n_neg;
    let avg_dl = if n == 0 { 0.0 } else { total_dl as f64 / n as f64 };
    let stats = CollectionStats::new(n_pos, n_neg, avg_dl)?;
    let terms = pos_df
        .into_iter()
        .zip(neg_df)
        .map(|(a, c)| TermContingency::new(a, c, &stats))
        .collect::<Result<Vec<_>>>()?;
    Ok((terms, stats))
}
