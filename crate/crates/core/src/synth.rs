//! Seeded synthetic two-class corpora.
//!
//! Every document has `doc_len` token slots. Each slot independently holds,
//! with probability `class_term_prob`, a uniformly chosen term from its
//! class's private list of `class_terms` terms; otherwise it holds a uniformly
//! chosen term from `noise_terms` terms shared by both classes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, Document, Label};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub docs_per_class: usize,
    pub doc_len: usize,
    pub noise_terms: usize,
    pub class_terms: usize,
    pub class_term_prob: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            docs_per_class: 500,
            doc_len: 50,
            noise_terms: 2000,
            class_terms: 50,
            class_term_prob: 0.3,
            seed: 0,
        }
    }
}

/// Documents alternate positive, negative, positive, ... with ids `synth-<n>`.
pub fn generate(spec: &SyntheticSpec) -> Result<Corpus> {
    if spec.docs_per_class == 0 || spec.noise_terms == 0 || spec.class_terms == 0 {
        return Err(Error::InvalidParameter(
            "synthetic corpus needs documents, noise terms and class terms".into(),
        ));
    }
    if !(0.0..=1.0).contains(&spec.class_term_prob) {
        return Err(Error::InvalidParameter(format!(
            "class term probability must lie in [0, 1], got {}",
            spec.class_term_prob
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut documents = Vec::with_capacity(2 * spec.docs_per_class);
    for n in 0..2 * spec.docs_per_class {
        let (label, prefix) = if n % 2 == 0 {
            (Label::Positive, "pos")
        } else {
            (Label::Negative, "neg")
        };
        let words: Vec<String> = (0..spec.doc_len)
            .map(|_| {
                if rng.gen_bool(spec.class_term_prob) {
                    format!("{prefix}{}", rng.gen_range(0..spec.class_terms))
                } else {
                    format!("noise{}", rng.gen_range(0..spec.noise_terms))
                }
            })
            .collect();
        documents.push(Document {
            id: format!("synth-{n}"),
            label,
            text: words.join(" "),
        });
    }
    Corpus::new(documents)
}
