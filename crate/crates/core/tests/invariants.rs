use std::collections::BTreeSet;

use proptest::prelude::*;
use termweight::corpus::{holdout_by_label, stratified_folds_by_label, Label};
use termweight::textproc::{build_vocabulary, count_document, tokenize, Ngrams, TokenizedDoc};
use termweight::weighting::{contingency_counts, fit_weight_model, vectorize, GlobalScheme, LocalScheme};

fn labels(n_pos: usize, n_neg: usize, interleave: u64) -> Vec<Label> {
    let mut out: Vec<Label> = (0..n_pos)
        .map(|_| Label::Positive)
        .chain((0..n_neg).map(|_| Label::Negative))
        .collect();
    // Deterministic scramble so classes are not contiguous.
    let n = out.len();
    for i in 0..n {
        let j = ((i as u64).wrapping_mul(2654435761).wrapping_add(interleave) % n as u64) as usize;
        out.swap(i, j);
    }
    out
}

fn word() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["alpha", "beta", "gamma", "delta", "eps", "zeta", "eta"])
        .prop_map(str::to_owned)
}

fn doc_text() -> impl Strategy<Value = String> {
    prop::collection::vec(word(), 0..30).prop_map(|w| w.join(" "))
}

proptest! {
    #[test]
    fn folds_partition_and_balance(
        n_pos in 2usize..60,
        n_neg in 2usize..60,
        k_raw in 2usize..10,
        seed in any::<u64>(),
    ) {
        let k = k_raw.min(n_pos).min(n_neg);
        let l = labels(n_pos, n_neg, seed);
        let folds = stratified_folds_by_label(&l, k, seed).unwrap();
        let mut seen = vec![0usize; l.len()];
        for f in 0..k {
            let (train, test) = folds.split(f);
            prop_assert_eq!(train.len() + test.len(), l.len());
            for &i in &test {
                seen[i] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&s| s == 1));
        for class in [Label::Positive, Label::Negative] {
            let per_fold: Vec<usize> = (0..k)
                .map(|f| {
                    folds.split(f).1.iter().filter(|&&i| l[i] == class).count()
                })
                .collect();
            let spread = per_fold.iter().max().unwrap() - per_fold.iter().min().unwrap();
            prop_assert!(spread <= 1, "{:?}", per_fold);
        }
        let sizes: Vec<usize> = (0..k).map(|f| folds.split(f).1.len()).collect();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        prop_assert_eq!(&folds, &stratified_folds_by_label(&l, k, seed).unwrap());
    }

    #[test]
    fn holdout_is_disjoint_cover(
        n_pos in 2usize..80,
        n_neg in 2usize..80,
        fraction in 0.05f64..0.95,
        seed in any::<u64>(),
    ) {
        let l = labels(n_pos, n_neg, seed);
        if let Ok((train, held)) = holdout_by_label(&l, fraction, seed) {
            let t: BTreeSet<usize> = train.iter().copied().collect();
            let h: BTreeSet<usize> = held.iter().copied().collect();
            prop_assert!(t.is_disjoint(&h));
            prop_assert_eq!(t.len() + h.len(), l.len());
            for class in [Label::Positive, Label::Negative] {
                let size = l.iter().filter(|&&x| x == class).count();
                let got = held.iter().filter(|&&i| l[i] == class).count();
                prop_assert_eq!(got, (fraction * size as f64).round() as usize);
            }
        }
    }

    #[test]
    fn tokenize_is_idempotent(text in "\\PC{0,80}") {
        let once = tokenize(&text);
        let again = tokenize(&once.join(" "));
        prop_assert_eq!(once, again);
    }

    #[test]
    fn min_count_is_monotone(
        texts in prop::collection::vec(doc_text(), 1..12),
        bigrams in any::<bool>(),
    ) {
        let ngrams = if bigrams { Ngrams::UnigramsAndBigrams } else { Ngrams::Unigrams };
        let docs: Vec<TokenizedDoc> = texts
            .iter()
            .enumerate()
            .map(|(i, t)| TokenizedDoc::from_text(format!("d{i}"), t, ngrams))
            .collect();
        let mut previous: Option<BTreeSet<String>> = None;
        for m in 1..6 {
            let current: BTreeSet<String> = match build_vocabulary(&docs, m, ngrams) {
                Ok(v) => v.features().iter().map(|f| format!("{}:{f}", f.kind())).collect(),
                Err(_) => BTreeSet::new(),
            };
            if let Some(prev) = &previous {
                prop_assert!(current.is_subset(prev));
            }
            previous = Some(current);
        }
    }

    #[test]
    fn counts_sum_to_in_vocabulary_features(
        texts in prop::collection::vec(doc_text(), 2..10),
        probe in doc_text(),
    ) {
        let docs: Vec<TokenizedDoc> = texts
            .iter()
            .enumerate()
            .map(|(i, t)| TokenizedDoc::from_text(format!("d{i}"), t, Ngrams::UnigramsAndBigrams))
            .collect();
        prop_assume!(docs.iter().any(|d| d.dl > 0));
        let vocab = build_vocabulary(&docs, 1, Ngrams::UnigramsAndBigrams).unwrap();
        let probe = TokenizedDoc::from_text("p", &probe, Ngrams::UnigramsAndBigrams);
        let counted = count_document(&probe, &vocab);
        let total: u32 = counted.counts.iter().map(|&(_, n)| n).sum();
        let in_vocab = probe.features.iter().filter(|f| vocab.get(f).is_some()).count();
        prop_assert_eq!(total as usize, in_vocab);
        for d in &docs {
            let c = count_document(d, &vocab);
            let sum: u32 = c.counts.iter().map(|&(_, n)| n).sum();
            prop_assert_eq!(sum as usize, d.features.len());
        }
    }

    #[test]
    fn contingency_rows_sum_to_class_sizes(
        texts in prop::collection::vec(doc_text(), 2..14),
    ) {
        let docs: Vec<TokenizedDoc> = texts
            .iter()
            .enumerate()
            .map(|(i, t)| TokenizedDoc::from_text(format!("d{i}"), t, Ngrams::Unigrams))
            .collect();
        prop_assume!(docs.iter().any(|d| d.dl > 0));
        let vocab = build_vocabulary(&docs, 1, Ngrams::Unigrams).unwrap();
        let counted: Vec<_> = docs.iter().map(|d| count_document(d, &vocab)).collect();
        let l: Vec<Label> = (0..docs.len())
            .map(|i| if i % 2 == 0 { Label::Positive } else { Label::Negative })
            .collect();
        let (terms, stats) = contingency_counts(counted.iter().zip(l.iter().copied()), vocab.len()).unwrap();
        for (i, t) in terms.iter().enumerate() {
            prop_assert_eq!(t.a + t.b, stats.n_pos);
            prop_assert_eq!(t.c + t.d, stats.n_neg);
            let df = counted.iter().filter(|c| c.contains(i)).count() as u64;
            prop_assert_eq!(t.df(), df);
        }
    }

    #[test]
    fn normalized_vectors_have_unit_norm(
        texts in prop::collection::vec(doc_text(), 2..14),
        local in 0usize..5,
    ) {
        let docs: Vec<TokenizedDoc> = texts
            .iter()
            .enumerate()
            .map(|(i, t)| TokenizedDoc::from_text(format!("d{i}"), t, Ngrams::Unigrams))
            .collect();
        prop_assume!(docs.iter().any(|d| d.dl > 0));
        let vocab = build_vocabulary(&docs, 1, Ngrams::Unigrams).unwrap();
        let counted: Vec<_> = docs.iter().map(|d| count_document(d, &vocab)).collect();
        let l: Vec<Label> = (0..docs.len())
            .map(|i| if i % 2 == 0 { Label::Positive } else { Label::Negative })
            .collect();
        let local = [
            LocalScheme::Tf,
            LocalScheme::Tp,
            LocalScheme::atf(0.5).unwrap(),
            LocalScheme::Ltf,
            LocalScheme::btf(1.2, 0.95).unwrap(),
        ][local];
        let model = fit_weight_model(
            counted.iter().zip(l.iter().copied()),
            &vocab,
            local,
            GlobalScheme::re(0.3).unwrap(),
            true,
        ).unwrap();
        for c in &counted {
            let v = vectorize(c, &model);
            if v.nnz() > 0 {
                prop_assert!((v.squared_norm() - 1.0).abs() < 1e-9);
            }
        }
    }
}
