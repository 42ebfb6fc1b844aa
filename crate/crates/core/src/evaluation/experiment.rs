use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::classifier::TrainConfig;
use crate::corpus::{holdout_by_label, stratified_folds_by_label, Corpus, Label};
use crate::textproc::{Ngrams, TokenizedDoc};
use crate::weighting::{GlobalScheme, LocalScheme, ScalingFn};
use crate::{Error, Result};

use super::metrics::{EvalReport, Metric};
use super::pipeline::{FittedPipeline, PipelineSettings, PreparedSplit};

/// Either a fixed global scheme or `re` with `b0` chosen on held-out data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum GlobalChoice {
    Fixed(GlobalScheme),
    TunedRe { grid: Vec<f64> },
}

impl fmt::Display for GlobalChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GlobalChoice::Fixed(g) => write!(f, "{g}"),
            GlobalChoice::TunedRe { .. } => f.write_str("re(tuned)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Protocol {
    CrossValidation { folds: usize },
    /// Train on the whole training corpus, test on a separate corpus.
    FixedSplit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub ngrams: Ngrams,
    pub min_count: usize,
    pub local: LocalScheme,
    pub global: GlobalChoice,
    pub normalize: bool,
    /// Solver settings; its seed is replaced by [`ExperimentConfig::seed`].
    pub svm: TrainConfig,
    pub protocol: Protocol,
    /// Fraction of the training data held out when tuning `b0`.
    pub holdout_fraction: f64,
    pub metric: Metric,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            ngrams: Ngrams::Unigrams,
            min_count: 3,
            local: LocalScheme::Tf,
            global: GlobalChoice::Fixed(GlobalScheme::No),
            normalize: true,
            svm: TrainConfig::default(),
            protocol: Protocol::CrossValidation { folds: 10 },
            holdout_fraction: 0.2,
            metric: Metric::Accuracy,
            seed: 0,
        }
    }
}

/// `0.0, 0.1, ..., 1.0`.
pub fn default_b0_grid() -> Vec<f64> {
    (0..=10).map(|i| f64::from(i) / 10.0).collect()
}

fn format_grid(grid: &[f64]) -> String {
    grid.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.svm.validate()?;
        if self.min_count == 0 {
            return Err(Error::InvalidParameter("min_count must be at least 1".into()));
        }
        if !(self.holdout_fraction > 0.0 && self.holdout_fraction < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "holdout fraction must lie in (0, 1), got {}",
                self.holdout_fraction
            )));
        }
        if let GlobalChoice::TunedRe { grid } = &self.global {
            validate_grid(grid)?;
        }
        if let Protocol::CrossValidation { folds } = self.protocol {
            if folds < 2 {
                return Err(Error::InvalidParameter(format!(
                    "cross-validation needs at least 2 folds, got {folds}"
                )));
            }
        }
        Ok(())
    }

    fn settings(&self, global: GlobalScheme) -> PipelineSettings {
        PipelineSettings {
            ngrams: self.ngrams,
            min_count: self.min_count,
            local: self.local,
            global,
            normalize: self.normalize,
            svm: TrainConfig {
                seed: self.seed,
                ..self.svm
            },
        }
    }

    /// Every resolved parameter, keyed by its configuration name.
    pub fn provenance(&self) -> BTreeMap<String, String> {
        let (k, k1, b) = match self.local {
            LocalScheme::Atf { k } => (k, LocalScheme::DEFAULT_K1, LocalScheme::DEFAULT_B),
            LocalScheme::Btf { k1, b } => (LocalScheme::DEFAULT_K, k1, b),
            _ => (
                LocalScheme::DEFAULT_K,
                LocalScheme::DEFAULT_K1,
                LocalScheme::DEFAULT_B,
            ),
        };
        let (global, b0, grid, scaling) = match &self.global {
            GlobalChoice::Fixed(g) => (
                g.id().to_string(),
                g.b0().map_or("-".to_string(), |b| b.to_string()),
                "-".to_string(),
                g.scaling().map_or("-".to_string(), |f| f.to_string()),
            ),
            GlobalChoice::TunedRe { grid } => (
                "re".to_string(),
                "tune".to_string(),
                format_grid(grid),
                "-".to_string(),
            ),
        };
        let (protocol, folds) = match self.protocol {
            Protocol::CrossValidation { folds } => ("cv", folds.to_string()),
            Protocol::FixedSplit => ("split", "-".to_string()),
        };
        [
            ("data.min_count", self.min_count.to_string()),
            ("data.ngram_max", self.ngrams.max().to_string()),
            ("weighting.local", self.local.id().to_string()),
            ("weighting.k", k.to_string()),
            ("weighting.k1", k1.to_string()),
            ("weighting.b", b.to_string()),
            ("weighting.global", global),
            ("weighting.b0", b0),
            ("weighting.b0_grid", grid),
            ("weighting.scaling", scaling),
            ("weighting.normalize", self.normalize.to_string()),
            ("svm.C", self.svm.c.to_string()),
            ("svm.tol", self.svm.tol.to_string()),
            ("svm.max_iter", self.svm.max_iter.to_string()),
            ("eval.protocol", protocol.to_string()),
            ("eval.folds", folds),
            ("eval.holdout", self.holdout_fraction.to_string()),
            ("eval.metric", self.metric.to_string()),
            ("seed", self.seed.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("b0 grid is empty".into()));
    }
    if let Some(bad) = grid.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::InvalidParameter(format!(
            "b0 grid values must lie in [0, 1], got {bad}"
        )));
    }
    Ok(())
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent sub-seed for stream `stream` of a run seeded with `seed`.
fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream))
}

/// `None` where the platform has no clock (browser wasm without JS glue).
fn stopwatch() -> Option<Instant> {
    if cfg!(all(target_arch = "wasm32", target_os = "unknown")) {
        None
    } else {
        Some(Instant::now())
    }
}

#[cfg(feature = "parallel")]
fn par_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T>(n: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (0..n).map(f).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    /// Axis value as printed in tables.
    pub value: String,
    #[serde(skip)]
    pub numeric: Option<f64>,
    /// `None` when the row failed or was not evaluated.
    pub metric: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub axis: String,
    pub metric: Metric,
    pub rows: Vec<SweepRow>,
    /// Index of the best row. Ties go to the larger value on the `b0` axis
    /// and to the earlier row otherwise.
    pub optimum: Option<usize>,
}

impl SweepResult {
    fn new(axis: &str, metric: Metric, rows: Vec<SweepRow>) -> Self {
        let prefer_larger = axis == "b0";
        let mut best: Option<usize> = None;
        for (i, row) in rows.iter().enumerate() {
            let Some(m) = row.metric else { continue };
            let better = match best {
                None => true,
                Some(b) => {
                    let bm = rows[b].metric.unwrap_or(f64::NEG_INFINITY);
                    m > bm || (m == bm && prefer_larger && row.numeric > rows[b].numeric)
                }
            };
            if better {
                best = Some(i);
            }
        }
        SweepResult {
            axis: axis.to_string(),
            metric,
            rows,
            optimum: best,
        }
    }

    pub fn best(&self) -> Option<&SweepRow> {
        self.optimum.map(|i| &self.rows[i])
    }

    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldOutcome {
    pub fold: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub vocab_size: usize,
    pub chosen_b0: Option<f64>,
    pub report: EvalReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuning: Option<SweepResult>,
}

/// Unweighted means over folds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl MeanMetrics {
    fn of(folds: &[FoldOutcome]) -> Self {
        let n = folds.len() as f64;
        let mean = |f: fn(&EvalReport) -> f64| folds.iter().map(|o| f(&o.report)).sum::<f64>() / n;
        MeanMetrics {
            accuracy: mean(|r| r.accuracy),
            precision: mean(|r| r.precision),
            recall: mean(|r| r.recall),
            f1: mean(|r| r.f1),
        }
    }

    pub fn metric(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Accuracy => self.accuracy,
            Metric::F1 => self.f1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvOutcome {
    pub folds: Vec<FoldOutcome>,
    pub mean: MeanMetrics,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub scheme: String,
    pub metric: Metric,
    /// Mean of `metric` over folds (or the single split).
    pub value: f64,
    pub mean: MeanMetrics,
    pub folds: Vec<FoldOutcome>,
    pub provenance: BTreeMap<String, String>,
    /// Wall-clock time (zero where no clock is available); kept out of
    /// serialized reports so they stay reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneOutcome {
    pub chosen_b0: f64,
    pub sweep: SweepResult,
    /// Pipeline refitted on the entire training corpus with `chosen_b0`.
    pub fitted: FittedPipeline,
}

/// Axis of a parameter sweep; everything else in the config stays fixed.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepAxis {
    B0(Vec<f64>),
    Scaling(Vec<ScalingFn>),
    Schemes(Vec<GlobalChoice>),
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::B0(_) => "b0",
            SweepAxis::Scaling(_) => "scaling",
            SweepAxis::Schemes(_) => "scheme",
        }
    }

    fn points(&self) -> Vec<(String, Option<f64>, GlobalChoice)> {
        match self {
            SweepAxis::B0(grid) => grid
                .iter()
                .map(|&b0| {
                    (
                        b0.to_string(),
                        Some(b0),
                        GlobalChoice::Fixed(GlobalScheme::Re { b0 }),
                    )
                })
                .collect(),
            SweepAxis::Scaling(fs) => fs
                .iter()
                .map(|&f| {
                    (
                        f.to_string(),
                        None,
                        GlobalChoice::Fixed(GlobalScheme::ScaledX(f)),
                    )
                })
                .collect(),
            SweepAxis::Schemes(choices) => choices
                .iter()
                .map(|c| (c.to_string(), None, c.clone()))
                .collect(),
        }
    }
}

struct Tokenized {
    docs: Vec<TokenizedDoc>,
    labels: Vec<Label>,
}

impl Tokenized {
    fn new(corpus: &Corpus, ngrams: Ngrams) -> Self {
        let docs = par_map(corpus.len(), |i| {
            let d = &corpus.documents()[i];
            TokenizedDoc::from_text(d.id.clone(), &d.text, ngrams)
        });
        Tokenized {
            docs,
            labels: corpus.labels().collect(),
        }
    }

    fn pairs(&self, indices: &[usize]) -> Vec<(&TokenizedDoc, Label)> {
        indices.iter().map(|&i| (&self.docs[i], self.labels[i])).collect()
    }

    fn all(&self) -> Vec<(&TokenizedDoc, Label)> {
        self.docs.iter().zip(self.labels.iter().copied()).collect()
    }
}

/// Picks `b0` by holding out part of `train`, fitting `re(b0)` for each grid
/// value on the rest, and scoring on the held part.
fn choose_b0(
    train: &[(&TokenizedDoc, Label)],
    cfg: &ExperimentConfig,
    grid: &[f64],
    seed: u64,
) -> Result<(f64, SweepResult)> {
    validate_grid(grid)?;
    if let [only] = grid {
        let row = SweepRow {
            value: only.to_string(),
            numeric: Some(*only),
            metric: None,
            error: None,
        };
        let mut sweep = SweepResult::new("b0", cfg.metric, vec![row]);
        sweep.optimum = Some(0);
        return Ok((*only, sweep));
    }
    let labels: Vec<Label> = train.iter().map(|&(_, l)| l).collect();
    let (fit_idx, held_idx) = holdout_by_label(&labels, cfg.holdout_fraction, seed)?;
    let pick = |idx: &[usize]| idx.iter().map(|&i| train[i]).collect::<Vec<_>>();
    let split = PreparedSplit::new(&pick(&fit_idx), &pick(&held_idx), cfg.ngrams, cfg.min_count)?;
    let settings = cfg.settings(GlobalScheme::No);
    let rows = grid
        .iter()
        .map(|&b0| {
            let (weights, model) = split.fit(&settings, GlobalScheme::re(b0)?)?;
            let report = split.score(&weights, &model)?;
            Ok(SweepRow {
                value: b0.to_string(),
                numeric: Some(b0),
                metric: Some(report.metric(cfg.metric)),
                error: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sweep = SweepResult::new("b0", cfg.metric, rows);
    let chosen = sweep
        .best()
        .and_then(|r| r.numeric)
        .expect("every tuning row carries a metric");
    Ok((chosen, sweep))
}

fn run_split(
    train: &[(&TokenizedDoc, Label)],
    test: &[(&TokenizedDoc, Label)],
    cfg: &ExperimentConfig,
    fold: usize,
    tune_stream: u64,
) -> Result<FoldOutcome> {
    let (global, chosen_b0, tuning) = match &cfg.global {
        GlobalChoice::Fixed(g) => (*g, None, None),
        GlobalChoice::TunedRe { grid } => {
            let (b0, sweep) = choose_b0(train, cfg, grid, derive_seed(cfg.seed, tune_stream))?;
            (GlobalScheme::re(b0)?, Some(b0), Some(sweep))
        }
    };
    let split = PreparedSplit::new(train, test, cfg.ngrams, cfg.min_count)?;
    let (weights, model) = split.fit(&cfg.settings(global), global)?;
    let report = split.score(&weights, &model)?;
    Ok(FoldOutcome {
        fold,
        train_size: train.len(),
        test_size: test.len(),
        vocab_size: split.vocab.len(),
        chosen_b0,
        report,
        tuning,
    })
}

fn cv_tokenized(tokens: &Tokenized, cfg: &ExperimentConfig) -> Result<CvOutcome> {
    let Protocol::CrossValidation { folds: k } = cfg.protocol else {
        return Err(Error::InvalidParameter(
            "cross-validation needs a fold count".into(),
        ));
    };
    let folds = stratified_folds_by_label(&tokens.labels, k, cfg.seed)?;
    let outcomes = par_map(k, |f| {
        let (train, test) = folds.split(f);
        run_split(&tokens.pairs(&train), &tokens.pairs(&test), cfg, f, f as u64 + 1)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(CvOutcome {
        mean: MeanMetrics::of(&outcomes),
        folds: outcomes,
    })
}

/// Stratified k-fold cross-validation. Vocabulary, weights, `b0` and the
/// classifier are all fitted on the training folds of each split.
pub fn cross_validate(corpus: &Corpus, cfg: &ExperimentConfig) -> Result<CvOutcome> {
    cfg.validate()?;
    cv_tokenized(&Tokenized::new(corpus, cfg.ngrams), cfg)
}

/// Chooses `b0` on a held-out part of `train`, then refits on all of `train`.
pub fn tune_b0(train: &Corpus, cfg: &ExperimentConfig, grid: &[f64]) -> Result<TuneOutcome> {
    cfg.validate()?;
    let tokens = Tokenized::new(train, cfg.ngrams);
    let all = tokens.all();
    let (chosen_b0, sweep) = choose_b0(&all, cfg, grid, derive_seed(cfg.seed, 0))?;
    let global = GlobalScheme::re(chosen_b0)?;
    let fitted = FittedPipeline::fit(&all, &cfg.settings(global))?;
    Ok(TuneOutcome {
        chosen_b0,
        sweep,
        fitted,
    })
}

fn experiment_tokenized(
    train: &Tokenized,
    test: Option<&Tokenized>,
    cfg: &ExperimentConfig,
) -> Result<ExperimentRecord> {
    cfg.validate()?;
    let start = stopwatch();
    let folds = match (cfg.protocol, test) {
        (Protocol::CrossValidation { .. }, None) => cv_tokenized(train, cfg)?.folds,
        (Protocol::FixedSplit, Some(test)) => {
            // Same tuning stream as `tune_b0`, so a fixed split agrees with `train`.
            vec![run_split(&train.all(), &test.all(), cfg, 0, 0)?]
        }
        (Protocol::CrossValidation { .. }, Some(_)) => {
            return Err(Error::InvalidParameter(
                "a test corpus was given but the protocol is cross-validation".into(),
            ))
        }
        (Protocol::FixedSplit, None) => {
            return Err(Error::InvalidParameter(
                "fixed-split protocol needs a test corpus".into(),
            ))
        }
    };
    let mean = MeanMetrics::of(&folds);
    Ok(ExperimentRecord {
        scheme: cfg.global.to_string(),
        metric: cfg.metric,
        value: mean.metric(cfg.metric),
        mean,
        folds,
        provenance: cfg.provenance(),
        elapsed: start.map(|s| s.elapsed()).unwrap_or_default(),
    })
}

/// Runs one configuration under its protocol: cross-validation over `train`,
/// or train on `train` and test on `test`.
pub fn run_experiment(
    train: &Corpus,
    test: Option<&Corpus>,
    cfg: &ExperimentConfig,
) -> Result<ExperimentRecord> {
    let train_tokens = Tokenized::new(train, cfg.ngrams);
    let test_tokens = test.map(|t| Tokenized::new(t, cfg.ngrams));
    experiment_tokenized(&train_tokens, test_tokens.as_ref(), cfg)
}

/// One experiment per axis value, same seed and splits throughout. Failing
/// rows carry their error and are skipped when choosing the optimum.
pub fn sweep(
    train: &Corpus,
    test: Option<&Corpus>,
    cfg: &ExperimentConfig,
    axis: &SweepAxis,
) -> Result<SweepResult> {
    cfg.validate()?;
    let train_tokens = Tokenized::new(train, cfg.ngrams);
    let test_tokens = test.map(|t| Tokenized::new(t, cfg.ngrams));
    let points = axis.points();
    let rows = par_map(points.len(), |i| {
        let (value, numeric, choice) = &points[i];
        let row_cfg = ExperimentConfig {
            global: choice.clone(),
            ..cfg.clone()
        };
        match experiment_tokenized(&train_tokens, test_tokens.as_ref(), &row_cfg) {
            Ok(record) => SweepRow {
                value: value.clone(),
                numeric: *numeric,
                metric: Some(record.value),
                error: None,
            },
            Err(e) => SweepRow {
                value: value.clone(),
                numeric: *numeric,
                metric: None,
                error: Some(e.to_string()),
            },
        }
    });
    Ok(SweepResult::new(axis.name(), cfg.metric, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Document;

    fn row(value: f64, metric: Option<f64>) -> SweepRow {
        SweepRow {
            value: value.to_string(),
            numeric: Some(value),
            metric,
            error: None,
        }
    }

    #[test]
    fn b0_ties_prefer_larger() {
        let rows = vec![row(0.0, Some(0.8)), row(0.5, Some(0.8)), row(1.0, Some(0.8))];
        let s = SweepResult::new("b0", Metric::Accuracy, rows);
        assert_eq!(s.best().unwrap().value, "1");
        let rows = vec![row(1.0, Some(0.7)), row(0.2, Some(0.9)), row(0.6, Some(0.9))];
        assert_eq!(SweepResult::new("b0", Metric::Accuracy, rows).optimum, Some(2));
    }

    #[test]
    fn other_axes_prefer_first_and_skip_failures() {
        let mut rows = vec![row(0.0, None), row(1.0, Some(0.5)), row(2.0, Some(0.5))];
        rows[0].error = Some("boom".into());
        let s = SweepResult::new("scheme", Metric::F1, rows);
        assert_eq!(s.optimum, Some(1));
        assert_eq!(s.failed_rows(), 1);
        let none = SweepResult::new("scheme", Metric::F1, vec![row(0.0, None)]);
        assert_eq!(none.optimum, None);
    }

    #[test]
    fn default_grid_values() {
        let g = default_b0_grid();
        assert_eq!(g.len(), 11);
        assert_eq!(g[3].to_string(), "0.3");
        assert_eq!(g[10], 1.0);
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(0, 1), derive_seed(0, 2));
        assert_ne!(derive_seed(1, 1), derive_seed(2, 1));
        assert_eq!(derive_seed(5, 3), derive_seed(5, 3));
    }

    fn planted(n: usize) -> Corpus {
        let docs = (0..2 * n)
            .map(|i| {
                let label = if i % 2 == 0 { Label::Positive } else { Label::Negative };
                let key = if i % 2 == 0 { "sunny" } else { "rainy" };
                Document {
                    id: format!("d{i}"),
                    label,
                    text: format!("the day was {key} and w{} w{}", i % 7, i % 5),
                }
            })
            .collect();
        Corpus::new(docs).unwrap()
    }

    #[test]
    fn single_value_grid_skips_search() {
        let cfg = ExperimentConfig {
            min_count: 1,
            ..ExperimentConfig::default()
        };
        let out = tune_b0(&planted(6), &cfg, &[0.4]).unwrap();
        assert_eq!(out.chosen_b0, 0.4);
        assert_eq!(out.sweep.rows.len(), 1);
        assert_eq!(out.fitted.weights.global, GlobalScheme::Re { b0: 0.4 });
    }

    #[test]
    fn protocol_mismatch_is_rejected() {
        let c = planted(6);
        let cfg = ExperimentConfig {
            protocol: Protocol::FixedSplit,
            ..ExperimentConfig::default()
        };
        assert!(run_experiment(&c, None, &cfg).is_err());
        let cfg = ExperimentConfig::default();
        assert!(run_experiment(&c, Some(&c), &cfg).is_err());
    }

    #[test]
    fn provenance_lists_all_keys() {
        let p = ExperimentConfig::default().provenance();
        assert_eq!(p.len(), 19);
        assert_eq!(p["data.min_count"], "3");
        assert_eq!(p["eval.holdout"], "0.2");
        assert_eq!(p["svm.C"], "1");
    }
}
