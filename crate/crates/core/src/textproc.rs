//! Tokenization, n-gram features and the training vocabulary.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Lowercases `text` and splits it into maximal runs of alphanumeric
/// characters and apostrophes, with apostrophes trimmed from both ends of
/// each run. No stemming or stop-word removal.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !(c.is_alphanumeric() || c == '\''))
        .map(|run| run.trim_matches('\''))
        .filter(|tok| !tok.is_empty())
        .map(str::to_owned)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ngrams {
    Unigrams,
    UnigramsAndBigrams,
}

impl Ngrams {
    pub fn from_max(ngram_max: usize) -> Result<Self> {
        match ngram_max {
            1 => Ok(Ngrams::Unigrams),
            2 => Ok(Ngrams::UnigramsAndBigrams),
            n => Err(Error::InvalidParameter(format!(
                "ngram_max must be 1 or 2, got {n}"
            ))),
        }
    }

    pub fn max(self) -> usize {
        match self {
            Ngrams::Unigrams => 1,
            Ngrams::UnigramsAndBigrams => 2,
        }
    }
}

/// A unigram or an adjacent token pair. Ordering puts every unigram before
/// every bigram, then compares tokens lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FeatureKey {
    Unigram(String),
    Bigram(String, String),
}

impl FeatureKey {
    pub fn kind(&self) -> &'static str {
        match self {
            FeatureKey::Unigram(_) => "unigram",
            FeatureKey::Bigram(..) => "bigram",
        }
    }

    fn is_unigram(&self) -> bool {
        matches!(self, FeatureKey::Unigram(_))
    }
}

impl fmt::Display for FeatureKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureKey::Unigram(t) => f.write_str(t),
            FeatureKey::Bigram(a, b) => write!(f, "{a} {b}"),
        }
    }
}

/// All unigrams in order, followed by all adjacent pairs when bigrams are on.
pub fn extract_features(tokens: &[String], ngrams: Ngrams) -> Vec<FeatureKey> {
    let mut out: Vec<FeatureKey> = tokens.iter().cloned().map(FeatureKey::Unigram).collect();
    if ngrams == Ngrams::UnigramsAndBigrams {
        out.extend(
            tokens
                .windows(2)
                .map(|w| FeatureKey::Bigram(w[0].clone(), w[1].clone())),
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedDoc {
    pub doc_id: String,
    pub features: Vec<FeatureKey>,
    /// Unigram token count.
    pub dl: usize,
}

impl TokenizedDoc {
    pub fn from_text(doc_id: impl Into<String>, text: &str, ngrams: Ngrams) -> Self {
        let tokens = tokenize(text);
        TokenizedDoc {
            doc_id: doc_id.into(),
            dl: tokens.len(),
            features: extract_features(&tokens, ngrams),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Vocabulary {
    entries: Vec<FeatureKey>,
    index: HashMap<FeatureKey, usize>,
    min_count: usize,
    ngrams: Ngrams,
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
            && self.min_count == other.min_count
            && self.ngrams == other.ngrams
    }
}

impl Vocabulary {
    fn from_sorted(entries: Vec<FeatureKey>, min_count: usize, ngrams: Ngrams) -> Self {
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i))
            .collect();
        Vocabulary {
            entries,
            index,
            min_count,
            ngrams,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn min_count(&self) -> usize {
        self.min_count
    }

    pub fn ngrams(&self) -> Ngrams {
        self.ngrams
    }

    pub fn get(&self, key: &FeatureKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn feature(&self, index: usize) -> &FeatureKey {
        &self.entries[index]
    }

    pub fn features(&self) -> &[FeatureKey] {
        &self.entries
    }

    /// `index<TAB>kind<TAB>feature` lines, preceded by two `#` header lines
    /// carrying the build parameters.
    pub fn to_tsv(&self) -> String {
        let mut out = format!(
            "# min_count\t{}\n# ngram_max\t{}\n",
            self.min_count,
            self.ngrams.max()
        );
        for (i, key) in self.entries.iter().enumerate() {
            out.push_str(&format!("{i}\t{}\t{key}\n", key.kind()));
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let parse_err = |line: usize, detail: String| Error::Parse {
            what: "vocabulary",
            line,
            detail,
        };
        let mut min_count = 1;
        let mut ngrams = Ngrams::Unigrams;
        let mut entries = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            if let Some(header) = line.strip_prefix("# ") {
                let (key, value) = header
                    .split_once('\t')
                    .ok_or_else(|| parse_err(line_no, "malformed header".into()))?;
                let value: usize = value
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad number {value:?}")))?;
                match key {
                    "min_count" => min_count = value,
                    "ngram_max" => ngrams = Ngrams::from_max(value)?,
                    _ => return Err(parse_err(line_no, format!("unknown header {key:?}"))),
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let mut fields = line.splitn(3, '\t');
            let (Some(i), Some(kind), Some(feature)) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(parse_err(line_no, "expected 3 tab-separated fields".into()));
            };
            if i.parse::<usize>().ok() != Some(entries.len()) {
                return Err(parse_err(line_no, format!("index {i:?} is not dense")));
            }
            let key = match kind {
                "unigram" => FeatureKey::Unigram(feature.to_string()),
                "bigram" => {
                    let (a, b) = feature
                        .split_once(' ')
                        .ok_or_else(|| parse_err(line_no, "bigram needs two tokens".into()))?;
                    FeatureKey::Bigram(a.to_string(), b.to_string())
                }
                other => return Err(parse_err(line_no, format!("unknown kind {other:?}"))),
            };
            if entries.last().is_some_and(|prev| prev >= &key) {
                return Err(parse_err(line_no, "entries out of order".into()));
            }
            entries.push(key);
        }
        Ok(Vocabulary::from_sorted(entries, min_count, ngrams))
    }
}

/// Keeps every feature whose total occurrence count over `train_docs` is at
/// least `min_count`. Bigram features are ignored when `ngrams` is unigrams.
pub fn build_vocabulary<'a>(
    train_docs: impl IntoIterator<Item = &'a TokenizedDoc>,
    min_count: usize,
    ngrams: Ngrams,
) -> Result<Vocabulary> {
    if min_count == 0 {
        return Err(Error::InvalidParameter("min_count must be at least 1".into()));
    }
    let mut counts: BTreeMap<&FeatureKey, usize> = BTreeMap::new();
    for doc in train_docs {
        for feature in &doc.features {
            if ngrams == Ngrams::Unigrams && !feature.is_unigram() {
                continue;
            }
            *counts.entry(feature).or_default() += 1;
        }
    }
    let entries: Vec<FeatureKey> = counts
        .into_iter()
        .filter(|&(_, n)| n >= min_count)
        .map(|(k, _)| k.clone())
        .collect();
    if entries.is_empty() {
        return Err(Error::EmptyVocabulary { min_count });
    }
    Ok(Vocabulary::from_sorted(entries, min_count, ngrams))
}

/// In-vocabulary raw term frequencies of one document.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CountedDoc {
    /// `(vocabulary index, tf)` pairs with strictly increasing index.
    pub counts: Vec<(usize, u32)>,
    pub max_tf: u32,
    pub dl: usize,
}

impl CountedDoc {
    pub fn contains(&self, index: usize) -> bool {
        self.counts.binary_search_by_key(&index, |&(i, _)| i).is_ok()
    }
}

pub fn count_document(doc: &TokenizedDoc, vocab: &Vocabulary) -> CountedDoc {
    let mut tf: BTreeMap<usize, u32> = BTreeMap::new();
    for feature in &doc.features {
        if let Some(i) = vocab.get(feature) {
            *tf.entry(i).or_default() += 1;
        }
    }
    let counts: Vec<(usize, u32)> = tf.into_iter().collect();
    CountedDoc {
        max_tf: counts.iter().map(|&(_, n)| n).max().unwrap_or(0),
        counts,
        dl: doc.dl,
    }
}
