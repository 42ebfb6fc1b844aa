//! Browser bindings for the demo page. Every export takes plain numbers or
//! strings and returns a JSON string, or an error message.

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

use termweight::corpus::{parse_tsv, LabelTokens};
use termweight::textproc::{build_vocabulary, count_document, Ngrams, TokenizedDoc};
use termweight::weighting::{
    contingency_counts, entropy_h, fit_weight_model, global_weight, imbalance_x, scale,
    CollectionStats, GlobalScheme, LocalScheme, ScalingFn, TermContingency,
};

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("demo types serialize")
}

fn scaling(id: &str) -> Result<ScalingFn, String> {
    id.parse().map_err(|e: termweight::Error| e.to_string())
}

fn scheme(id: &str, b0: f64, f: ScalingFn) -> Result<GlobalScheme, String> {
    GlobalScheme::from_id(id, Some(b0), Some(f)).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Curve {
    id: &'static str,
    y: Vec<f64>,
}

#[derive(Serialize)]
struct Curves {
    x: Vec<f64>,
    curves: Vec<Curve>,
}

/// Samples every scaling function at `points` evenly spaced `x` in `[1, x_max]`.
#[wasm_bindgen]
pub fn scaling_curves(x_max: f64, points: u32) -> Result<String, String> {
    if !(x_max > 1.0 && x_max.is_finite()) || points < 2 {
        return Err("need x_max > 1 and at least 2 points".into());
    }
    let step = (x_max - 1.0) / f64::from(points - 1);
    let x: Vec<f64> = (0..points).map(|i| 1.0 + f64::from(i) * step).collect();
    let curves = ScalingFn::ALL
        .into_iter()
        .map(|f| Curve {
            id: f.id(),
            y: x.iter().map(|&v| scale(f, v).expect("x >= 1")).collect(),
        })
        .collect();
    Ok(json(&Curves { x, curves }))
}

#[derive(Serialize)]
struct SchemeRow {
    scheme: String,
    weight: Option<f64>,
    error: Option<String>,
}

#[derive(Serialize)]
struct TermReport {
    x: f64,
    entropy: f64,
    rows: Vec<SchemeRow>,
}

/// Every global scheme evaluated on one contingency table.
#[wasm_bindgen]
pub fn scheme_weights(
    a: u32,
    c: u32,
    n_pos: u32,
    n_neg: u32,
    b0: f64,
    scaling_id: &str,
) -> Result<String, String> {
    let f = scaling(scaling_id)?;
    let stats = CollectionStats::new(n_pos.into(), n_neg.into(), 1.0).map_err(|e| e.to_string())?;
    let term = TermContingency::new(a.into(), c.into(), &stats).map_err(|e| e.to_string())?;
    let rows = GlobalScheme::IDS
        .iter()
        .map(|id| {
            let g = scheme(id, b0, f)?;
            let label = g.to_string();
            Ok(match global_weight(&g, &term, &stats) {
                Ok(w) => SchemeRow {
                    scheme: label,
                    weight: Some(w),
                    error: None,
                },
                Err(e) => SchemeRow {
                    scheme: label,
                    weight: None,
                    error: Some(e.to_string()),
                },
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(json(&TermReport {
        x: imbalance_x(&term, &stats),
        entropy: entropy_h(&term, &stats, true).map_err(|e| e.to_string())?,
        rows,
    }))
}

#[derive(Serialize)]
struct WeightedTerm {
    term: String,
    a: u64,
    c: u64,
    weight: f64,
}

#[derive(Serialize)]
struct CorpusReport {
    documents: usize,
    positive: usize,
    negative: usize,
    vocab_size: usize,
    scheme: String,
    terms: Vec<WeightedTerm>,
}

/// Fits `global` on a `label<TAB>text` corpus (labels `pos` / `neg`) and
/// returns the `limit` highest-weighted terms.
#[wasm_bindgen]
pub fn corpus_weights(
    tsv: &str,
    global: &str,
    b0: f64,
    scaling_id: &str,
    min_count: u32,
    limit: u32,
) -> Result<String, String> {
    let err = |e: termweight::Error| e.to_string();
    let g = scheme(global, b0, scaling(scaling_id)?)?;
    let corpus = parse_tsv(tsv, &LabelTokens::default())
        .and_then(|c| c.require_both_classes())
        .map_err(err)?;
    let docs: Vec<TokenizedDoc> = corpus
        .documents()
        .iter()
        .map(|d| TokenizedDoc::from_text(d.id.clone(), &d.text, Ngrams::Unigrams))
        .collect();
    let vocab = build_vocabulary(&docs, min_count as usize, Ngrams::Unigrams).map_err(err)?;
    let counted: Vec<_> = docs.iter().map(|d| count_document(d, &vocab)).collect();
    let labelled = || counted.iter().zip(corpus.labels());
    let (terms, _) = contingency_counts(labelled(), vocab.len()).map_err(err)?;
    let model = fit_weight_model(labelled(), &vocab, LocalScheme::Tf, g, true).map_err(err)?;
    let mut weighted: Vec<WeightedTerm> = terms
        .iter()
        .zip(&model.global_weights)
        .enumerate()
        .map(|(i, (t, &w))| WeightedTerm {
            term: vocab.feature(i).to_string(),
            a: t.a,
            c: t.c,
            weight: w,
        })
        .collect();
    weighted.sort_by(|x, y| y.weight.total_cmp(&x.weight).then_with(|| x.term.cmp(&y.term)));
    weighted.truncate(limit as usize);
    Ok(json(&CorpusReport {
        documents: corpus.len(),
        positive: corpus.n_pos(),
        negative: corpus.n_neg(),
        vocab_size: vocab.len(),
        scheme: g.to_string(),
        terms: weighted,
    }))
}
