//! Labelled document collections, their loaders, and deterministic splits.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    /// Classifier target: +1 for positive, -1 for negative.
    pub fn sign(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => -1.0,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub label: Label,
    pub text: String,
}

/// Label tokens used by the loaders (`labels.positive` / `labels.negative`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelTokens {
    pub positive: String,
    pub negative: String,
}

impl Default for LabelTokens {
    fn default() -> Self {
        LabelTokens {
            positive: "pos".to_string(),
            negative: "neg".to_string(),
        }
    }
}

impl LabelTokens {
    fn resolve(&self, token: &str) -> Option<Label> {
        if token == self.positive {
            Some(Label::Positive)
        } else if token == self.negative {
            Some(Label::Negative)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    documents: Vec<Document>,
    n_pos: usize,
    n_neg: usize,
}

impl Corpus {
    /// Builds a corpus, rejecting empty collections and duplicate ids.
    /// A single-class corpus is allowed here; see [`Corpus::require_both_classes`].
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        if documents.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut seen = BTreeSet::new();
        for doc in &documents {
            if !seen.insert(doc.id.as_str()) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate document id {:?}",
                    doc.id
                )));
            }
        }
        let n_pos = documents
            .iter()
            .filter(|d| d.label == Label::Positive)
            .count();
        let n_neg = documents.len() - n_pos;
        Ok(Corpus {
            documents,
            n_pos,
            n_neg,
        })
    }

    pub fn require_both_classes(self) -> Result<Self> {
        if self.n_pos == 0 {
            Err(Error::EmptyClass(Label::Positive))
        } else if self.n_neg == 0 {
            Err(Error::EmptyClass(Label::Negative))
        } else {
            Ok(self)
        }
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn n_pos(&self) -> usize {
        self.n_pos
    }

    pub fn n_neg(&self) -> usize {
        self.n_neg
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.documents.iter().map(|d| d.label)
    }

    /// Documents at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Corpus> {
        Corpus::new(indices.iter().map(|&i| self.documents[i].clone()).collect())
    }
}

fn class_indices(labels: &[Label]) -> [(Label, Vec<usize>); 2] {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (i, label) in labels.iter().enumerate() {
        match label {
            Label::Positive => pos.push(i),
            Label::Negative => neg.push(i),
        }
    }
    [(Label::Positive, pos), (Label::Negative, neg)]
}

fn unescape(text: &str) -> String {
    if !text.contains('\\') {
        return text.to_string();
    }
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars();
    while let Some(ch) = chars.next() {
        if ch != '\\' {
            out.push(ch);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('\\') => out.push('\\'),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

/// Parses `label<TAB>text` lines. Blank lines are skipped; `\t`, `\n` and `\\`
/// escapes in the text are decoded.
pub fn parse_tsv(contents: &str, labels: &LabelTokens) -> Result<Corpus> {
    let mut documents = Vec::new();
    for (idx, raw) in contents.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            continue;
        }
        let (token, text) = line
            .split_once('\t')
            .ok_or(Error::MissingTab { line: line_no })?;
        let token = token.trim();
        let label = labels.resolve(token).ok_or_else(|| Error::UnknownLabel {
            line: line_no,
            token: token.to_string(),
        })?;
        documents.push(Document {
            id: format!("line-{line_no}"),
            label,
            text: unescape(text),
        });
    }
    Corpus::new(documents)?.require_both_classes()
}

pub fn load_tsv(path: impl AsRef<Path>, labels: &LabelTokens) -> Result<Corpus> {
    let path = path.as_ref();
    let contents = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_tsv(&contents, labels)
}

/// Loads `<root>/<positive>/*` and `<root>/<negative>/*`, one document per
/// regular file, ordered lexicographically by relative path.
pub fn load_class_dirs(root: impl AsRef<Path>, labels: &LabelTokens) -> Result<Corpus> {
    let root = root.as_ref();
    if !root.is_dir() {
        return Err(Error::io(
            root,
            std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
        ));
    }
    let mut documents = Vec::new();
    for (dir_name, label) in [
        (&labels.positive, Label::Positive),
        (&labels.negative, Label::Negative),
    ] {
        let dir = root.join(dir_name);
        if !dir.is_dir() {
            return Err(Error::MissingClassDir(dir));
        }
        let mut names = Vec::new();
        for entry in fs::read_dir(&dir).map_err(|e| Error::io(&dir, e))? {
            let entry = entry.map_err(|e| Error::io(&dir, e))?;
            let file_type = entry.file_type().map_err(|e| Error::io(entry.path(), e))?;
            if file_type.is_file() {
                names.push(entry.file_name().to_string_lossy().into_owned());
            }
        }
        if names.is_empty() {
            return Err(Error::EmptyClass(label));
        }
        names.sort();
        for name in names {
            let path = dir.join(&name);
            let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
            documents.push(Document {
                id: format!("{dir_name}/{name}"),
                label,
                text: String::from_utf8_lossy(&bytes).into_owned(),
            });
        }
    }
    Corpus::new(documents)?.require_both_classes()
}

/// Assignment of every document to one of `k` folds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAssignment {
    k: usize,
    assignment: Vec<usize>,
}

impl FoldAssignment {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// `(train, test)` document indices for `fold`, each in corpus order.
    pub fn split(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        let (test, train): (Vec<usize>, Vec<usize>) =
            (0..self.assignment.len()).partition(|&i| self.assignment[i] == fold);
        (train, test)
    }
}

/// Stratified `k`-fold assignment: each class is shuffled with a generator
/// seeded by `seed`, then dealt round-robin into folds. Dealing of the
/// negative class resumes where the positive class stopped, which keeps fold
/// sizes within one of each other.
pub fn stratified_folds(corpus: &Corpus, k: usize, seed: u64) -> Result<FoldAssignment> {
    let labels: Vec<Label> = corpus.labels().collect();
    stratified_folds_by_label(&labels, k, seed)
}

/// [`stratified_folds`] over a bare label sequence.
pub fn stratified_folds_by_label(labels: &[Label], k: usize, seed: u64) -> Result<FoldAssignment> {
    let [(_, pos), (_, neg)] = class_indices(labels);
    let smallest = pos.len().min(neg.len());
    if k < 2 || k > smallest {
        return Err(Error::InvalidFolds { k, smallest });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0; labels.len()];
    let mut next = 0;
    for mut members in [pos, neg] {
        members.shuffle(&mut rng);
        for doc in members {
            assignment[doc] = next;
            next = (next + 1) % k;
        }
    }
    Ok(FoldAssignment { k, assignment })
}

/// Stratified holdout as index lists `(train, held)`, each sorted in corpus
/// order. Each class contributes `round(fraction * class_size)` held documents.
pub fn holdout_indices(
    corpus: &Corpus,
    fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let labels: Vec<Label> = corpus.labels().collect();
    holdout_by_label(&labels, fraction, seed)
}

/// [`holdout_indices`] over a bare label sequence.
pub fn holdout_by_label(
    labels: &[Label],
    fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "holdout fraction must lie in (0, 1), got {fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut held = Vec::new();
    for (label, mut members) in class_indices(labels) {
        let n_held = (fraction * members.len() as f64).round() as usize;
        if n_held == 0 || n_held >= members.len() {
            return Err(Error::InvalidHoldout { fraction, label });
        }
        members.shuffle(&mut rng);
        held.extend_from_slice(&members[..n_held]);
        train.extend_from_slice(&members[n_held..]);
    }
    train.sort_unstable();
    held.sort_unstable();
    Ok((train, held))
}

pub fn holdout_split(corpus: &Corpus, fraction: f64, seed: u64) -> Result<(Corpus, Corpus)> {
    let (train, held) = holdout_indices(corpus, fraction, seed)?;
    Ok((corpus.subset(&train)?, corpus.subset(&held)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(n_pos: usize, n_neg: usize) -> Corpus {
        let docs = (0..n_pos + n_neg)
            .map(|i| Document {
                id: format!("d{i}"),
                label: if i < n_pos {
                    Label::Positive
                } else {
                    Label::Negative
                },
                text: format!("text {i}"),
            })
            .collect();
        Corpus::new(docs).unwrap()
    }

    #[test]
    fn parses_minimal_tsv() {
        let c = parse_tsv("pos\tgood movie\nneg\tbad movie\n", &LabelTokens::default()).unwrap();
        assert_eq!((c.len(), c.n_pos(), c.n_neg()), (2, 1, 1));
        assert_eq!(c.documents()[0].id, "line-1");
        assert_eq!(c.documents()[1].text, "bad movie");
    }

    #[test]
    fn empty_file_is_empty_corpus() {
        let err = parse_tsv("", &LabelTokens::default()).unwrap_err();
        assert_eq!(err.to_string(), "empty corpus");
    }

    #[test]
    fn unknown_label_names_line_and_token() {
        let err = parse_tsv("maybe\ttext", &LabelTokens::default()).unwrap_err();
        assert!(matches!(err, Error::UnknownLabel { line: 1, ref token } if token == "maybe"));
        assert!(err.to_string().contains("line 1"));
        assert!(err.to_string().contains("maybe"));
    }

    #[test]
    fn missing_tab_and_empty_class() {
        let err = parse_tsv("pos\tok\nno tab here", &LabelTokens::default()).unwrap_err();
        assert!(matches!(err, Error::MissingTab { line: 2 }));
        let err = parse_tsv("pos\ta\npos\tb", &LabelTokens::default()).unwrap_err();
        assert!(matches!(err, Error::EmptyClass(Label::Negative)));
    }

    #[test]
    fn custom_labels_and_escapes() {
        let labels = LabelTokens {
            positive: "1".into(),
            negative: "0".into(),
        };
        let c = parse_tsv("1\ta\\tb\\nc\n\n0\tx\\\\y\r\n", &labels).unwrap();
        assert_eq!(c.documents()[0].text, "a\tb\nc");
        assert_eq!(c.documents()[1].text, "x\\y");
        assert_eq!(c.documents()[1].id, "line-3");
    }

    #[test]
    fn class_dirs() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir(dir.path().join("pos")).unwrap();
        fs::create_dir(dir.path().join("neg")).unwrap();
        fs::write(dir.path().join("pos/b.txt"), "two").unwrap();
        fs::write(dir.path().join("pos/a.txt"), "one").unwrap();
        fs::write(dir.path().join("neg/c.txt"), "three").unwrap();
        let c = load_class_dirs(dir.path(), &LabelTokens::default()).unwrap();
        let ids: Vec<_> = c.documents().iter().map(|d| d.id.as_str()).collect();
        assert_eq!(ids, ["pos/a.txt", "pos/b.txt", "neg/c.txt"]);
        assert_eq!((c.len(), c.n_pos(), c.n_neg()), (3, 2, 1));
    }

    #[test]
    fn class_dirs_missing_negative() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir(dir.path().join("pos")).unwrap();
        fs::write(dir.path().join("pos/a.txt"), "x").unwrap();
        let err = load_class_dirs(dir.path(), &LabelTokens::default()).unwrap_err();
        assert!(err.to_string().starts_with("missing class directory"));
    }

    #[test]
    fn class_dirs_empty_class() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir(dir.path().join("pos")).unwrap();
        fs::create_dir(dir.path().join("neg")).unwrap();
        fs::write(dir.path().join("pos/a.txt"), "x").unwrap();
        let err = load_class_dirs(dir.path(), &LabelTokens::default()).unwrap_err();
        assert!(matches!(err, Error::EmptyClass(Label::Negative)));
    }

    #[test]
    fn folds_exact_divisibility() {
        let c = synthetic(5, 5);
        let f = stratified_folds(&c, 5, 7).unwrap();
        for fold in 0..5 {
            let (_, test) = f.split(fold);
            let pos = test.iter().filter(|&&i| i < 5).count();
            assert_eq!((pos, test.len() - pos), (1, 1));
        }
        assert_eq!(f, stratified_folds(&c, 5, 7).unwrap());
    }

    #[test]
    fn folds_uneven_classes() {
        // Dealing 7 positives over 5 folds puts 2 in folds 0 and 1; the 5
        // negatives resume at fold 2 and wrap, one per fold.
        let c = synthetic(7, 5);
        let f = stratified_folds(&c, 5, 1).unwrap();
        let mut pos_counts = vec![0; 5];
        let mut neg_counts = vec![0; 5];
        for (i, &fold) in f.assignment().iter().enumerate() {
            if i < 7 {
                pos_counts[fold] += 1;
            } else {
                neg_counts[fold] += 1;
            }
        }
        assert_eq!(pos_counts, [2, 2, 1, 1, 1]);
        assert_eq!(neg_counts, [1, 1, 1, 1, 1]);
    }

    #[test]
    fn folds_reject_large_k() {
        let c = synthetic(3, 10);
        assert!(matches!(
            stratified_folds(&c, 4, 0),
            Err(Error::InvalidFolds { k: 4, smallest: 3 })
        ));
        assert!(stratified_folds(&c, 1, 0).is_err());
    }

    #[test]
    fn holdout_counts() {
        let c = synthetic(100, 100);
        let (train, held) = holdout_split(&c, 0.2, 3).unwrap();
        assert_eq!((held.n_pos(), held.n_neg()), (20, 20));
        assert_eq!((train.n_pos(), train.n_neg()), (80, 80));
        assert_eq!(holdout_split(&c, 0.2, 3).unwrap().1, held);
    }

    #[test]
    fn holdout_rejects_empty_side() {
        let c = synthetic(3, 3);
        assert!(matches!(
            holdout_split(&c, 0.01, 0),
            Err(Error::InvalidHoldout { .. })
        ));
        assert!(holdout_split(&c, 0.99, 0).is_err());
    }
}
