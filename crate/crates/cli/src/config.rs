//! Flat `key = value` configuration: defaults, overlay from a file and from
//! flags, and resolution into typed settings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use termweight::classifier::TrainConfig;
use termweight::corpus::{load_class_dirs, load_tsv, Corpus, LabelTokens};
use termweight::evaluation::{ExperimentConfig, GlobalChoice, Metric, Protocol};
use termweight::textproc::Ngrams;
use termweight::weighting::{GlobalScheme, LocalScheme, ScalingFn};

use crate::CliError;

/// Every accepted key with its default and a one-line description.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("data.train", "", "training corpus: TSV file or directory with one folder per class"),
    ("data.test", "", "test corpus, same formats; used by eval and by split experiments"),
    ("data.format", "auto", "auto | tsv | dirs (auto picks dirs for directories)"),
    ("data.min_count", "3", "minimum total occurrences for a vocabulary feature"),
    ("data.ngram_max", "1", "1 = unigrams, 2 = unigrams and bigrams"),
    ("labels.positive", "pos", "label token or folder name of the positive class"),
    ("labels.negative", "neg", "label token or folder name of the negative class"),
    ("weighting.local", "tf", "tf | tp | atf | ltf | btf"),
    ("weighting.k", "0.5", "atf smoothing constant"),
    ("weighting.k1", "1.2", "btf saturation constant"),
    ("weighting.b", "0.95", "btf length normalization"),
    ("weighting.global", "no", "global scheme id (no, idf, ..., re, scaled_x)"),
    ("weighting.b0", "tune", "re bias: a value in [0, 1], or tune to pick it on held-out data"),
    ("weighting.b0_grid", "0:1:0.1", "tuning grid: start:stop:step or a comma list"),
    ("weighting.scaling", "f4", "scaling function for scaled_x, f0 .. f7"),
    ("weighting.normalize", "true", "cosine-normalize document vectors"),
    ("svm.C", "1", "regularization trade-off"),
    ("svm.tol", "0.1", "stopping tolerance on the projected-gradient range"),
    ("svm.max_iter", "1000", "maximum solver passes"),
    ("eval.protocol", "cv", "cv (cross-validate data.train) | split (train on data.train, test on data.test)"),
    ("eval.folds", "10", "cross-validation folds"),
    ("eval.holdout", "0.2", "fraction of training data held out for b0 tuning"),
    ("eval.metric", "accuracy", "accuracy | f1"),
    ("seed", "0", "seed for folds, holdouts and the solver"),
    ("output.dir", "out", "directory for every written file"),
    ("model.dir", "", "where eval reads vocab.tsv, weights.tsv, model.tsv (empty = output.dir)"),
];

/// Text appended to `--help`.
pub fn keys_help() -> String {
    let width = KEYS.iter().map(|(k, ..)| k.len()).max().unwrap_or(0);
    let mut out = String::from(
        "Configuration keys (precedence: flags > --set > --config file > defaults):\n",
    );
    for (key, default, doc) in KEYS {
        let shown = if default.is_empty() { "\"\"" } else { default };
        let _ = writeln!(out, "  {key:<width$}  [default: {shown}]  {doc}");
    }
    out
}

/// Raw string values keyed by name, starting from the defaults.
#[derive(Debug, Clone)]
pub struct RawConfig {
    values: BTreeMap<&'static str, String>,
}

impl Default for RawConfig {
    fn default() -> Self {
        RawConfig {
            values: KEYS.iter().map(|&(k, d, _)| (k, d.to_string())).collect(),
        }
    }
}

impl RawConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let (name, ..) = KEYS
            .iter()
            .find(|(k, ..)| *k == key)
            .ok_or_else(|| CliError::Config(format!("unknown configuration key {key:?}")))?;
        self.values.insert(name, value.trim().to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> &str {
        self.values
            .get(key)
            .map(String::as_str)
            .unwrap_or_else(|| panic!("{key} is not a configuration key"))
    }

    /// Applies `key = value` lines; `#` starts a comment line.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut seen = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("{}:{}: expected key = value", path.display(), n + 1))
            })?;
            let key = key.trim();
            if seen.contains(&key) {
                return Err(CliError::Config(format!(
                    "{}:{}: {key} is set twice",
                    path.display(),
                    n + 1
                )));
            }
            seen.push(key);
            self.set(key, value)
                .map_err(|e| CliError::Config(format!("{}:{}: {e}", path.display(), n + 1)))?;
        }
        Ok(())
    }

    /// Applies one `key=value` override.
    pub fn apply_assignment(&mut self, assignment: &str) -> Result<(), CliError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("expected key=value, got {assignment:?}")))?;
        self.set(key.trim(), value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Auto,
    Tsv,
    Dirs,
}

/// Fully resolved configuration.
#[derive(Debug, Clone)]
pub struct Settings {
    pub train: Option<PathBuf>,
    pub test: Option<PathBuf>,
    pub format: Format,
    pub labels: LabelTokens,
    pub output_dir: PathBuf,
    pub model_dir: PathBuf,
    pub experiment: ExperimentConfig,
    pub b0_grid: Vec<f64>,
    pub raw: RawConfig,
}

fn bad(key: &str, value: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{key} = {value:?}: {why}"))
}

fn parse<T: std::str::FromStr>(raw: &RawConfig, key: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    let v = raw.get(key);
    v.parse().map_err(|e| bad(key, v, e))
}

fn optional_path(raw: &RawConfig, key: &str) -> Option<PathBuf> {
    let v = raw.get(key);
    (!v.is_empty()).then(|| PathBuf::from(v))
}

/// `start:stop:step` (inclusive of `stop`) or a comma-separated list.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| format!("{s:?} is not a number: {e}"))
    };
    let grid = if let Some((start, rest)) = text.split_once(':') {
        let (stop, step) = rest
            .split_once(':')
            .ok_or_else(|| "range must be start:stop:step".to_string())?;
        let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
        if !(step > 0.0) || !(stop >= start) {
            return Err("range needs step > 0 and stop >= start".into());
        }
        let steps = ((stop - start) / step + 1e-9).floor();
        if steps > 100_000.0 {
            return Err("range has too many points".into());
        }
        (0..=steps as usize)
            .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
            .collect()
    } else {
        text.split(',').map(number).collect::<Result<Vec<_>, _>>()?
    };
    if grid.is_empty() {
        return Err("grid is empty".into());
    }
    Ok(grid)
}

/// `f0..f7` style ranges or comma lists of scaling function ids.
pub fn parse_scalings(text: &str) -> Result<Vec<ScalingFn>, String> {
    let one = |s: &str| s.trim().parse::<ScalingFn>().map_err(|e| e.to_string());
    if let Some((from, to)) = text.split_once("..") {
        let (from, to) = (one(from)?, one(to)?);
        if from > to {
            return Err(format!("empty range {text}"));
        }
        Ok(ScalingFn::ALL
            .into_iter()
            .filter(|f| (from..=to).contains(f))
            .collect())
    } else {
        text.split(',').map(one).collect()
    }
}

impl Settings {
    pub fn resolve(raw: RawConfig) -> Result<Self, CliError> {
        let format = match raw.get("data.format") {
            "auto" => Format::Auto,
            "tsv" => Format::Tsv,
            "dirs" => Format::Dirs,
            other => return Err(bad("data.format", other, "expected auto, tsv or dirs")),
        };
        let ngram_max: usize = parse(&raw, "data.ngram_max")?;
        let ngrams = Ngrams::from_max(ngram_max).map_err(|e| bad("data.ngram_max", raw.get("data.ngram_max"), e))?;
        let local = LocalScheme::from_id(
            raw.get("weighting.local"),
            parse(&raw, "weighting.k")?,
            parse(&raw, "weighting.k1")?,
            parse(&raw, "weighting.b")?,
        )
        .map_err(|e| bad("weighting.local", raw.get("weighting.local"), e))?;
        let b0_grid = parse_grid(raw.get("weighting.b0_grid"))
            .map_err(|e| bad("weighting.b0_grid", raw.get("weighting.b0_grid"), e))?;
        let scaling = parse_scalings(raw.get("weighting.scaling"))
            .ok()
            .and_then(|v| (v.len() == 1).then(|| v[0]))
            .ok_or_else(|| bad("weighting.scaling", raw.get("weighting.scaling"), "expected one of f0 .. f7"))?;
        let global = resolve_global(&raw, raw.get("weighting.global"), &b0_grid, scaling)
            .map_err(|e| bad("weighting.global", raw.get("weighting.global"), e))?;
        let protocol = match raw.get("eval.protocol") {
            "cv" => Protocol::CrossValidation {
                folds: parse(&raw, "eval.folds")?,
            },
            "split" => Protocol::FixedSplit,
            other => return Err(bad("eval.protocol", other, "expected cv or split")),
        };
        let metric: Metric = parse(&raw, "eval.metric")?;
        let normalize = match raw.get("weighting.normalize") {
            "true" => true,
            "false" => false,
            other => return Err(bad("weighting.normalize", other, "expected true or false")),
        };
        let experiment = ExperimentConfig {
            ngrams,
            min_count: parse(&raw, "data.min_count")?,
            local,
            global,
            normalize,
            svm: TrainConfig {
                c: parse(&raw, "svm.C")?,
                tol: parse(&raw, "svm.tol")?,
                max_iter: parse(&raw, "svm.max_iter")?,
                seed: 0,
            },
            protocol,
            holdout_fraction: parse(&raw, "eval.holdout")?,
            metric,
            seed: parse(&raw, "seed")?,
        };
        experiment
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        let labels = LabelTokens {
            positive: raw.get("labels.positive").to_string(),
            negative: raw.get("labels.negative").to_string(),
        };
        if labels.positive.is_empty() || labels.positive == labels.negative {
            return Err(CliError::Config(
                "labels.positive and labels.negative must be distinct and non-empty".into(),
            ));
        }
        let output_dir = PathBuf::from(raw.get("output.dir"));
        let model_dir = optional_path(&raw, "model.dir").unwrap_or_else(|| output_dir.clone());
        Ok(Settings {
            train: optional_path(&raw, "data.train"),
            test: optional_path(&raw, "data.test"),
            format,
            labels,
            output_dir,
            model_dir,
            experiment,
            b0_grid,
            raw,
        })
    }

    pub fn load(&self, key: &str) -> Result<Corpus, CliError> {
        let path = match key {
            "data.train" => self.train.as_ref(),
            _ => self.test.as_ref(),
        }
        .ok_or_else(|| CliError::Config(format!("{key} is not set")))?;
        let dirs = match self.format {
            Format::Dirs => true,
            Format::Tsv => false,
            Format::Auto => path.is_dir(),
        };
        let corpus = if dirs {
            load_class_dirs(path, &self.labels)
        } else {
            load_tsv(path, &self.labels)
        }?;
        Ok(corpus)
    }

    /// Data keys that are not part of the experiment provenance.
    pub fn data_provenance(&self) -> impl Iterator<Item = (String, String)> + '_ {
        ["data.train", "data.test", "data.format", "labels.positive", "labels.negative"]
            .into_iter()
            .map(|k| (k.to_string(), self.raw.get(k).to_string()))
    }
}

/// Resolves a global scheme id. `re` follows `weighting.b0`; `re:<b0>` and
/// `scaled_x:<fN>` carry their parameter inline.
pub fn resolve_global(
    raw: &RawConfig,
    spec: &str,
    grid: &[f64],
    scaling: ScalingFn,
) -> Result<GlobalChoice, String> {
    let (id, inline) = match spec.split_once(':') {
        Some((id, p)) => (id.trim(), Some(p.trim())),
        None => (spec.trim(), None),
    };
    match id {
        "re" => {
            let b0 = inline.unwrap_or_else(|| raw.get("weighting.b0"));
            if b0 == "tune" {
                return Ok(GlobalChoice::TunedRe {
                    grid: grid.to_vec(),
                });
            }
            let b0: f64 = b0.parse().map_err(|_| format!("b0 {b0:?} is neither tune nor a number"))?;
            GlobalScheme::re(b0)
                .map(GlobalChoice::Fixed)
                .map_err(|e| e.to_string())
        }
        "scaled_x" => {
            let f = match inline {
                Some(f) => f.parse().map_err(|e: termweight::Error| e.to_string())?,
                None => scaling,
            };
            Ok(GlobalChoice::Fixed(GlobalScheme::ScaledX(f)))
        }
        _ if inline.is_some() => Err(format!("{id} takes no parameter")),
        _ => GlobalScheme::from_id(id, None, None)
            .map(GlobalChoice::Fixed)
            .map_err(|e| e.to_string()),
    }
}
