use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use termweight::classifier::LinearModel;
use termweight::corpus::{Corpus, Label};
use termweight::evaluation::report::{eval_tsv, folds_tsv, sweep_tsv, to_json, write_atomic};
use termweight::evaluation::{
    evaluate, run_experiment, sweep, tune_b0, FittedPipeline, GlobalChoice, PipelineSettings,
    Protocol, SweepAxis, SweepResult,
};
use termweight::synth::{generate, SyntheticSpec};
use termweight::textproc::{build_vocabulary, count_document, TokenizedDoc, Vocabulary};
use termweight::weighting::{GlobalScheme, WeightModel};
use termweight::Error;

use crate::config::{parse_grid, parse_scalings, resolve_global, Settings};
use crate::CliError;

fn tokenize(corpus: &Corpus, settings: &Settings) -> Vec<(TokenizedDoc, Label)> {
    corpus
        .documents()
        .iter()
        .map(|d| {
            (
                TokenizedDoc::from_text(d.id.clone(), &d.text, settings.experiment.ngrams),
                d.label,
            )
        })
        .collect()
}

fn pairs(docs: &[(TokenizedDoc, Label)]) -> Vec<(&TokenizedDoc, Label)> {
    docs.iter().map(|(d, l)| (d, *l)).collect()
}

/// Writes every file, in order, after creating the output directory.
fn write_all(dir: &Path, files: &[(&str, String)]) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    let mut written = Vec::new();
    for (name, contents) in files {
        let path = dir.join(name);
        write_atomic(&path, contents)?;
        written.push(path);
    }
    Ok(written)
}

fn print_written(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

pub fn vocab(settings: &Settings) -> Result<(), CliError> {
    let corpus = settings.load("data.train")?;
    let docs = tokenize(&corpus, settings);
    let vocab = build_vocabulary(
        docs.iter().map(|(d, _)| d),
        settings.experiment.min_count,
        settings.experiment.ngrams,
    )?;
    let written = write_all(&settings.output_dir, &[("vocab.tsv", vocab.to_tsv())])?;
    println!(
        "vocabulary: {} features from {} documents (min_count {}, ngram_max {})",
        vocab.len(),
        corpus.len(),
        vocab.min_count(),
        vocab.ngrams().max()
    );
    print_written(&written);
    Ok(())
}

#[derive(Serialize)]
struct TrainProvenance {
    command: &'static str,
    config: BTreeMap<String, String>,
    documents: usize,
    positive: usize,
    negative: usize,
    vocab_size: usize,
    global: String,
    chosen_b0: Option<f64>,
    tuning: Option<SweepResult>,
}

pub fn train(settings: &Settings) -> Result<(), CliError> {
    let corpus = settings.load("data.train")?;
    let cfg = &settings.experiment;
    let (fitted, chosen_b0, tuning) = match &cfg.global {
        GlobalChoice::TunedRe { grid } => {
            let out = tune_b0(&corpus, cfg, grid)?;
            (out.fitted, Some(out.chosen_b0), Some(out.sweep))
        }
        GlobalChoice::Fixed(global) => {
            let docs = tokenize(&corpus, settings);
            let pipeline_settings = PipelineSettings {
                ngrams: cfg.ngrams,
                min_count: cfg.min_count,
                local: cfg.local,
                global: *global,
                normalize: cfg.normalize,
                svm: termweight::classifier::TrainConfig {
                    seed: cfg.seed,
                    ..cfg.svm
                },
            };
            let fitted = FittedPipeline::fit(&pairs(&docs), &pipeline_settings)?;
            (fitted, None, None)
        }
    };
    let mut config = cfg.provenance();
    config.extend(settings.data_provenance());
    let provenance = TrainProvenance {
        command: "train",
        config,
        documents: corpus.len(),
        positive: corpus.n_pos(),
        negative: corpus.n_neg(),
        vocab_size: fitted.vocab.len(),
        global: fitted.weights.global.to_string(),
        chosen_b0,
        tuning,
    };
    let written = write_all(
        &settings.output_dir,
        &[
            ("vocab.tsv", fitted.vocab.to_tsv()),
            ("weights.tsv", fitted.weights.to_text()),
            ("model.tsv", fitted.model.to_text()),
            ("provenance.json", to_json(&provenance)),
        ],
    )?;
    println!(
        "trained {} on {} documents, {} features",
        provenance.global,
        corpus.len(),
        fitted.vocab.len()
    );
    if let Some(b0) = chosen_b0 {
        println!("chosen b0: {b0}");
    }
    print_written(&written);
    Ok(())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| {
        CliError::Core(Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
    })
}

pub fn eval(settings: &Settings) -> Result<(), CliError> {
    let dir = &settings.model_dir;
    let vocab = Vocabulary::from_tsv(&read(&dir.join("vocab.tsv"))?)?;
    let weights = WeightModel::from_text(&read(&dir.join("weights.tsv"))?)?;
    let model = LinearModel::from_text(&read(&dir.join("model.tsv"))?)?;
    if vocab.len() != weights.dim() || vocab.len() != model.dim() {
        return Err(Error::DimensionMismatch(format!(
            "vocabulary has {} features, weight model {}, classifier {}",
            vocab.len(),
            weights.dim(),
            model.dim()
        ))
        .into());
    }
    let corpus = settings.load("data.test")?;
    let counted: Vec<_> = corpus
        .documents()
        .iter()
        .map(|d| {
            let doc = TokenizedDoc::from_text(d.id.clone(), &d.text, vocab.ngrams());
            (count_document(&doc, &vocab), d.label)
        })
        .collect();
    let report = evaluate(&model, &weights, counted.iter().map(|(d, l)| (d, *l)))?;
    let written = write_all(
        &settings.output_dir,
        &[("report.tsv", eval_tsv(&report)), ("report.json", to_json(&report))],
    )?;
    println!(
        "accuracy {} precision {} recall {} f1 {} on {} documents",
        report.accuracy,
        report.precision,
        report.recall,
        report.f1,
        report.total()
    );
    print_written(&written);
    Ok(())
}

fn load_test_if_split(settings: &Settings) -> Result<Option<Corpus>, CliError> {
    match settings.experiment.protocol {
        Protocol::FixedSplit => settings.load("data.test").map(Some),
        Protocol::CrossValidation { .. } => Ok(None),
    }
}

pub fn experiment(settings: &Settings) -> Result<(), CliError> {
    let train = settings.load("data.train")?;
    let test = load_test_if_split(settings)?;
    let mut record = run_experiment(&train, test.as_ref(), &settings.experiment)?;
    record.provenance.extend(settings.data_provenance());
    let written = write_all(
        &settings.output_dir,
        &[
            ("experiment.tsv", folds_tsv(&record)),
            ("experiment.json", to_json(&record)),
        ],
    )?;
    println!(
        "{}: mean {} {} over {} split(s)",
        record.scheme,
        record.metric,
        record.value,
        record.folds.len()
    );
    eprintln!("elapsed {:.2?}", record.elapsed);
    print_written(&written);
    Ok(())
}

/// Exactly one of these selects the sweep axis.
#[derive(Debug, Clone, Default, clap::Args)]
#[group(required = true, multiple = false)]
pub struct SweepArgs {
    /// b0 values for re: start:stop:step or a comma list
    #[arg(long, value_name = "GRID")]
    pub sweep_b0: Option<String>,
    /// scaling functions for scaled_x: a range like f0..f7 or a comma list
    #[arg(long, value_name = "FUNCTIONS")]
    pub sweep_scaling: Option<String>,
    /// comma list of global schemes, e.g. no,idf,re,re:0.3,scaled_x:f2
    #[arg(long, value_name = "SCHEMES")]
    pub sweep_schemes: Option<String>,
}

impl SweepArgs {
    pub fn axis(&self, settings: &Settings) -> Result<SweepAxis, CliError> {
        let flag_err = |flag: &str, e: String| CliError::Config(format!("--{flag}: {e}"));
        if let Some(g) = &self.sweep_b0 {
            let grid = parse_grid(g).map_err(|e| flag_err("sweep-b0", e))?;
            if let Some(bad) = grid.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(flag_err("sweep-b0", format!("b0 must lie in [0, 1], got {bad}")));
            }
            return Ok(SweepAxis::B0(grid));
        }
        if let Some(f) = &self.sweep_scaling {
            return parse_scalings(f)
                .map(SweepAxis::Scaling)
                .map_err(|e| flag_err("sweep-scaling", e));
        }
        let list = self.sweep_schemes.as_deref().unwrap_or_default();
        let scaling = match settings.experiment.global {
            GlobalChoice::Fixed(GlobalScheme::ScaledX(f)) => f,
            _ => parse_scalings(settings.raw.get("weighting.scaling")).map_err(CliError::Config)?[0],
        };
        list.split(',')
            .map(|s| resolve_global(&settings.raw, s, &settings.b0_grid, scaling))
            .collect::<Result<Vec<_>, _>>()
            .map(SweepAxis::Schemes)
            .map_err(|e| flag_err("sweep-schemes", e))
    }
}

pub fn run_sweep(settings: &Settings, axis: &SweepAxis) -> Result<(), CliError> {
    let train = settings.load("data.train")?;
    let test = load_test_if_split(settings)?;
    let result = sweep(&train, test.as_ref(), &settings.experiment, axis)?;
    let written = write_all(
        &settings.output_dir,
        &[("sweep.tsv", sweep_tsv(&result)), ("sweep.json", to_json(&result))],
    )?;
    print!("{}", sweep_tsv(&result));
    print_written(&written);
    let failed = result.failed_rows();
    if failed == result.rows.len() {
        return Err(CliError::AllRowsFailed(failed));
    }
    if failed > 0 {
        eprintln!("{failed} of {} rows failed", result.rows.len());
    }
    Ok(())
}

#[derive(Debug, Clone, clap::Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = SyntheticSpec::default().docs_per_class)]
    pub docs_per_class: usize,
    #[arg(long, default_value_t = SyntheticSpec::default().doc_len)]
    pub doc_len: usize,
    #[arg(long, default_value_t = SyntheticSpec::default().noise_terms)]
    pub noise_terms: usize,
    #[arg(long, default_value_t = SyntheticSpec::default().class_terms)]
    pub class_terms: usize,
    /// probability that a token slot holds a class-specific term
    #[arg(long, default_value_t = SyntheticSpec::default().class_term_prob)]
    pub class_term_prob: f64,
    /// file name inside the output directory
    #[arg(long, default_value = "synthetic.tsv")]
    pub name: String,
}

pub fn synth(settings: &Settings, args: &SynthArgs) -> Result<(), CliError> {
    let corpus = generate(&SyntheticSpec {
        docs_per_class: args.docs_per_class,
        doc_len: args.doc_len,
        noise_terms: args.noise_terms,
        class_terms: args.class_terms,
        class_term_prob: args.class_term_prob,
        seed: settings.experiment.seed,
    })?;
    let tsv: String = corpus
        .documents()
        .iter()
        .map(|d| {
            let label = match d.label {
                Label::Positive => &settings.labels.positive,
                Label::Negative => &settings.labels.negative,
            };
            format!("{label}\t{}\n", d.text)
        })
        .collect();
    let written = write_all(&settings.output_dir, &[(args.name.as_str(), tsv)])?;
    println!("{} documents", corpus.len());
    print_written(&written);
    Ok(())
}
