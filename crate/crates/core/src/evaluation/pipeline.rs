use crate::classifier::{train, Dataset, LinearModel, TrainConfig};
use crate::corpus::Label;
use crate::textproc::{build_vocabulary, count_document, CountedDoc, Ngrams, TokenizedDoc, Vocabulary};
use crate::weighting::{fit_weight_model, vectorize, GlobalScheme, LocalScheme, WeightModel};
use crate::Result;

use super::metrics::{evaluate, EvalReport};

/// Everything needed to go from tokenized training documents to a classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineSettings {
    pub ngrams: Ngrams,
    pub min_count: usize,
    pub local: LocalScheme,
    pub global: GlobalScheme,
    pub normalize: bool,
    pub svm: TrainConfig,
}

/// Vocabulary, weight model and classifier fitted on one training set.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedPipeline {
    pub vocab: Vocabulary,
    pub weights: WeightModel,
    pub model: LinearModel,
}

impl FittedPipeline {
    pub fn fit(docs: &[(&TokenizedDoc, Label)], settings: &PipelineSettings) -> Result<Self> {
        let split = PreparedSplit::new(docs, &[], settings.ngrams, settings.min_count)?;
        let (weights, model) = split.fit(settings, settings.global)?;
        Ok(FittedPipeline {
            vocab: split.vocab,
            weights,
            model,
        })
    }

    pub fn count(&self, doc: &TokenizedDoc) -> CountedDoc {
        count_document(doc, &self.vocab)
    }

    pub fn evaluate(&self, docs: &[(&TokenizedDoc, Label)]) -> Result<EvalReport> {
        let counted: Vec<(CountedDoc, Label)> =
            docs.iter().map(|&(d, l)| (self.count(d), l)).collect();
        evaluate(
            &self.model,
            &self.weights,
            counted.iter().map(|(d, l)| (d, *l)),
        )
    }
}

/// A train/test partition counted against a vocabulary built from the
/// training side only. Several global schemes can be fitted on it without
/// recounting.
pub(crate) struct PreparedSplit {
    pub vocab: Vocabulary,
    train: Vec<(CountedDoc, Label)>,
    test: Vec<(CountedDoc, Label)>,
}

impl PreparedSplit {
    pub fn new(
        train: &[(&TokenizedDoc, Label)],
        test: &[(&TokenizedDoc, Label)],
        ngrams: Ngrams,
        min_count: usize,
    ) -> Result<Self> {
        let vocab = build_vocabulary(train.iter().map(|&(d, _)| d), min_count, ngrams)?;
        let count_all = |docs: &[(&TokenizedDoc, Label)]| {
            docs.iter()
                .map(|&(d, l)| (count_document(d, &vocab), l))
                .collect::<Vec<_>>()
        };
        let train = count_all(train);
        let test = count_all(test);
        Ok(PreparedSplit { vocab, train, test })
    }

    pub fn fit(
        &self,
        settings: &PipelineSettings,
        global: GlobalScheme,
    ) -> Result<(WeightModel, LinearModel)> {
        let weights = fit_weight_model(
            self.train.iter().map(|(d, l)| (d, *l)),
            &self.vocab,
            settings.local,
            global,
            settings.normalize,
        )?;
        let rows = self.train.iter().map(|(d, _)| vectorize(d, &weights)).collect();
        let labels = self.train.iter().map(|&(_, l)| l).collect();
        let data = Dataset::new(rows, labels, self.vocab.len())?;
        let model = train(&data, &settings.svm)?;
        Ok((weights, model))
    }

    pub fn score(&self, weights: &WeightModel, model: &LinearModel) -> Result<EvalReport> {
        evaluate(model, weights, self.test.iter().map(|(d, l)| (d, *l)))
    }
}
