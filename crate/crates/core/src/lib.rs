//! Supervised and unsupervised term weighting for binary text categorization.
//!
//! The crate covers the whole path from labelled raw text to a trained linear
//! classifier:
//!
//! - [`corpus`]: TSV and class-directory loaders, stratified folds and holdout splits.
//! - [`textproc`]: tokenization, unigram/bigram features, training vocabulary.
//! - [`weighting`]: contingency statistics, local schemes (`tf`, `tp`, `atf`, `ltf`, `btf`),
//!   global schemes (`idf` through `rf`, plus `ne`, `re`, `mi'` and scaled imbalance ratios),
//!   bias-term regularization and cosine-normalized vectorization.
//! - [`classifier`]: L2-regularized L2-loss linear SVM trained by dual coordinate descent.
//! - [`evaluation`]: metrics, cross-validation, held-out `b0` tuning, experiments and sweeps.
//!
//! ```
//! use termweight::weighting::{global_weight, CollectionStats, GlobalScheme, TermContingency};
//!
//! let stats = CollectionStats::new(1000, 1000, 100.0).unwrap();
//! let term = TermContingency::new(100, 1, &stats).unwrap();
//! let g = global_weight(&GlobalScheme::Re { b0: 0.5 }, &term, &stats).unwrap();
//! assert!(g > 0.5 && g <= 1.0);
//! ```

pub mod classifier;
pub mod corpus;
mod error;
pub mod evaluation;
pub mod sparse;
pub mod synth;
pub mod textproc;
pub mod weighting;

pub use error::{Error, Result};
pub use sparse::SparseVector;
