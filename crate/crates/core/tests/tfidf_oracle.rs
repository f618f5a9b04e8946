mod common;

use std::collections::HashSet;

use common::{random_docs, words, DenseTfidf};
use opioid_lens::classifier::featurize;
use opioid_lens::topics::{
    build_vocabulary, idf, tfidf_score, top_terms, Stopwords, Vocabulary, VocabularyOptions,
};
use opioid_lens::{Corpus, Post, Source, TokenSequence};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn seqs(docs: &[Vec<String>]) -> Vec<TokenSequence> {
    docs.iter()
        .map(|d| TokenSequence::from_tokens(d.iter().cloned()))
        .collect()
}

fn corpus(texts: &[&str]) -> Corpus {
    let posts = texts
        .iter()
        .enumerate()
        .map(|(i, t)| Post::new(format!("d{i}"), Source::Synthetic, "", *t))
        .collect();
    Corpus::new("c", posts).unwrap()
}

#[test]
fn two_document_examples() {
    let c = corpus(&["heroin withdrawal", "kratom withdrawal"]);
    let v = build_vocabulary(&c, 1, 1, 1).unwrap();
    assert_eq!(v.terms(), ["heroin", "kratom", "withdrawal"]);
    assert_eq!(v.doc_freqs(), [1, 1, 2]);
    assert_eq!(
        build_vocabulary(&c, 1, 1, 2).unwrap().terms(),
        ["withdrawal"]
    );

    let docs = c.token_sequences();
    assert_eq!(tfidf_score("withdrawal", &docs[0], &v, 2).unwrap(), 1.0);
    let heroin = tfidf_score("heroin", &docs[0], &v, 2).unwrap();
    assert!((heroin - 1.405_465_108_108_164_4).abs() < 1e-12);
    assert_eq!(tfidf_score("heroin", &docs[1], &v, 2).unwrap(), 0.0);
    assert!(tfidf_score("opium", &docs[0], &v, 2).is_err());

    let top = top_terms(&docs, &v, 1);
    assert_eq!(top[0].term, "withdrawal");
    assert!((top[0].score - 2.0).abs() < 1e-12);
    assert_eq!(top_terms(&docs, &v, 10).len(), 3);
    assert_eq!(top_terms(&docs, &v, 3)[1].term, "heroin");
}

#[test]
fn trigram_window_count() {
    let v = build_vocabulary(&corpus(&["a b c"]), 1, 3, 1).unwrap();
    assert_eq!(v.terms(), ["a", "a b", "a b c", "b", "b c", "c"]);
}

#[test]
fn featurize_single_term() {
    let c = corpus(&["heroin withdrawal", "kratom withdrawal"]);
    let v = build_vocabulary(&c, 1, 1, 1).unwrap();
    let x = featurize(&TokenSequence::from_tokens(["withdrawal"]), &v, 2);
    assert_eq!(x.entries(), [(2, 1.0)]);
    assert!(featurize(&TokenSequence::default(), &v, 2).is_empty());
    assert!(featurize(&TokenSequence::from_tokens(["opium"]), &v, 2).is_empty());
}

#[test]
fn stopwords_drop_unigrams_only() {
    let docs = seqs(&[words("cold turkey of the withdrawal")]);
    let opts = VocabularyOptions::new(1, 2, 1).with_stopwords(Stopwords::english());
    let v = Vocabulary::build(&docs, &opts).unwrap();
    assert!(v.column("the").is_none());
    assert!(v.column("of the").is_some());
    assert!(v.column("withdrawal").is_some());
}

fn check_against_dense(
    docs: &[Vec<String>],
    n_min: usize,
    n_max: usize,
    min_df: usize,
    stop: &[&str],
) {
    let stop_set: HashSet<String> = stop.iter().map(|s| s.to_string()).collect();
    let dense = DenseTfidf::new(docs, n_min, n_max, min_df, &stop_set);
    let opts = VocabularyOptions::new(n_min, n_max, min_df)
        .with_stopwords(Stopwords::parse(&stop.join("\n")));
    let ts = seqs(docs);
    let v = Vocabulary::build(&ts, &opts).unwrap();
    assert_eq!(v.terms(), dense.terms.as_slice());
    assert_eq!(v.doc_freqs(), dense.doc_freq.as_slice());

    for (t, term) in dense.terms.iter().enumerate() {
        assert!((idf(dense.doc_freq[t], docs.len()) - dense.idf(t)).abs() < 1e-12);
        for (d, seq) in ts.iter().enumerate() {
            let got = tfidf_score(term, seq, &v, docs.len()).unwrap();
            assert!(
                (got - dense.tf[d][t] * dense.idf(t)).abs() < 1e-9,
                "{term} in doc {d}"
            );
        }
    }

    let expected = dense.ranking(usize::MAX);
    let got = top_terms(&ts, &v, usize::MAX);
    assert_eq!(got.len(), expected.len());
    for (g, (term, score)) in got.iter().zip(&expected) {
        assert_eq!(&g.term, term);
        assert!((g.score - score).abs() < 1e-9);
    }
    for k in [1, 3, 7] {
        let names: Vec<String> = top_terms(&ts, &v, k).into_iter().map(|s| s.term).collect();
        let oracle: Vec<String> = dense.ranking(k).into_iter().map(|s| s.0).collect();
        assert_eq!(names, oracle);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_dense_reference(seed in any::<u64>(), n_min in 1usize..=3, span in 0usize..=2, min_df in 1usize..=3, use_stop in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let docs = random_docs(&mut rng, 20, 50);
        let n_max = (n_min + span).min(3);
        let stop: &[&str] = if use_stop { &["the", "of", "and"] } else { &[] };
        check_against_dense(&docs, n_min, n_max, min_df, stop);
    }

    #[test]
    fn permutation_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let docs = random_docs(&mut rng, 20, 50);
        let mut shuffled = docs.clone();
        shuffled.shuffle(&mut rng);
        let opts = VocabularyOptions::new(1, 3, rng.random_range(1..=2));
        let (a, b) = (seqs(&docs), seqs(&shuffled));
        let va = Vocabulary::build(&a, &opts).unwrap();
        let vb = Vocabulary::build(&b, &opts).unwrap();
        prop_assert_eq!(va.terms(), vb.terms());
        prop_assert_eq!(va.doc_freqs(), vb.doc_freqs());
        prop_assert_eq!(top_terms(&a, &va, 10), top_terms(&b, &vb, 10));
    }

    #[test]
    fn linear_in_duplication(seed in any::<u64>(), c in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let docs = random_docs(&mut rng, 10, 20);
        let base = seqs(&docs);
        let v = Vocabulary::build(&base, &VocabularyOptions::new(1, 2, 1)).unwrap();
        let scaled: Vec<TokenSequence> = docs
            .iter()
            .map(|d| TokenSequence::from_tokens((0..c).flat_map(|_| d.iter().cloned())))
            .collect();
        for term in v.terms().iter().filter(|t| !t.contains(' ')) {
            for (s, x) in base.iter().zip(&scaled) {
                let one = tfidf_score(term, s, &v, docs.len()).unwrap();
                let many = tfidf_score(term, x, &v, docs.len()).unwrap();
                prop_assert!((many - c as f64 * one).abs() < 1e-9);
                prop_assert!(one >= 0.0);
            }
        }
    }
}
