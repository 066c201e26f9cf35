use capdiv_core::corpus::{dedup_and_cap, CaptionSet, Corpus};
use capdiv_core::divmetrics::{
    dce_variant_video, diversity_idf, lsa_diversity, mixed_mbleu, self_cider, DceParams,
};
use capdiv_core::refmetrics::{
    build_idf, cider, corpus_accuracy, meteor, rouge_l, sentence_bleu, AccuracyMode, AccuracyOptions, MeteorParams,
    Smoothing,
};
use capdiv_core::simcore::EmbeddingProvider;
use capdiv_core::textproc::{tokenize, TokenSeq};
use proptest::prelude::*;

const WORDS: [&str; 12] = ["a", "man", "dog", "runs", "running", "the", "cat", "is", "on", "grass", "plays", "ball"];

fn sentence() -> impl Strategy<Value = String> {
    proptest::collection::vec(0..WORDS.len(), 1..8).prop_map(|ix| ix.iter().map(|&i| WORDS[i]).collect::<Vec<_>>().join(" "))
}

fn distinct_set(min: usize) -> impl Strategy<Value = Vec<String>> {
    proptest::collection::btree_set(sentence(), min..6).prop_map(|s| s.into_iter().collect())
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reference_metrics_are_bounded(c in sentence(), refs in proptest::collection::vec(sentence(), 1..4)) {
        let rs: Vec<TokenSeq> = refs.iter().map(|r| tokenize(r)).collect();
        let idf = build_idf(&rs).unwrap();
        let cand = tokenize(&c);
        for v in [
            sentence_bleu(&cand, &rs, 4, Smoothing::On).unwrap(),
            sentence_bleu(&cand, &rs, 4, Smoothing::Off).unwrap(),
            meteor(&cand, &rs, &MeteorParams::default()).unwrap(),
            cider(&cand, &rs, &idf).unwrap(),
            rouge_l(&cand, &rs).unwrap(),
        ] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn max_over_refs_never_drops_when_a_ref_is_added(
        c in sentence(),
        refs in proptest::collection::vec(sentence(), 1..4),
        extra in sentence(),
    ) {
        let cand = tokenize(&c);
        let rs: Vec<TokenSeq> = refs.iter().map(|r| tokenize(r)).collect();
        let mut more = rs.clone();
        more.push(tokenize(&extra));
        let p = MeteorParams::default();
        prop_assert!(meteor(&cand, &more, &p).unwrap() >= meteor(&cand, &rs, &p).unwrap());
        prop_assert!(rouge_l(&cand, &more).unwrap() >= rouge_l(&cand, &rs).unwrap());
    }

    #[test]
    fn self_matches_score_one(s in sentence()) {
        let t = tokenize(&s);
        let refs = [t.clone()];
        prop_assert_eq!(sentence_bleu(&t, &refs, 1, Smoothing::Off).unwrap(), 1.0);
        prop_assert_eq!(rouge_l(&t, &refs).unwrap(), 1.0);
    }

    #[test]
    fn diversity_is_permutation_invariant(caps in distinct_set(2), rot in 0usize..6) {
        let mut shuffled = caps.clone();
        shuffled.reverse();
        let r = rot % shuffled.len();
        shuffled.rotate_left(r);
        let a = CaptionSet::new("v", &caps).unwrap();
        let b = CaptionSet::new("v", &shuffled).unwrap();
        let p = EmbeddingProvider::fallback();
        let d = DceParams::default();
        prop_assert!(close(dce_variant_video(&a, &p, &d).unwrap(), dce_variant_video(&b, &p, &d).unwrap()));
        prop_assert!(close(mixed_mbleu(&a, Smoothing::On).unwrap().unwrap(), mixed_mbleu(&b, Smoothing::On).unwrap().unwrap()));
        let la = lsa_diversity(&a).unwrap();
        let lb = lsa_diversity(&b).unwrap();
        prop_assert_eq!(la.is_some(), lb.is_some());
        if let (Some(x), Some(y)) = (la, lb) {
            prop_assert!(close(x, y));
        }
        let mut c = Corpus::new();
        c.add_captions("v", &caps).unwrap();
        c.add_captions("w", &["a cat"]).unwrap();
        let idf = diversity_idf(&c).unwrap();
        let sa = self_cider(&a, &idf).unwrap().unwrap();
        let sb = self_cider(&b, &idf).unwrap().unwrap();
        prop_assert!(close(sa, sb));
    }

    #[test]
    fn diversity_values_are_bounded(caps in distinct_set(2)) {
        let set = CaptionSet::new("v", &caps).unwrap();
        let v = dce_variant_video(&set, &EmbeddingProvider::fallback(), &DceParams::default()).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
        let mut c = Corpus::new();
        c.add_captions("v", &caps).unwrap();
        let idf = diversity_idf(&c).unwrap();
        let s = self_cider(&set, &idf).unwrap().unwrap();
        prop_assert!((0.0..=1.0).contains(&s));
    }

    #[test]
    fn dedup_is_idempotent_and_order_preserving(caps in proptest::collection::vec(sentence(), 1..12), cap in 1usize..10) {
        let set = CaptionSet::new("v", &caps).unwrap();
        let once = dedup_and_cap(&set, cap);
        prop_assert_eq!(dedup_and_cap(&once, cap), once.clone());
        prop_assert!(once.len() <= cap);
        let mut pos = 0;
        for c in once.captions() {
            let found = caps[pos..].iter().position(|s| *s == c.raw_text);
            prop_assert!(found.is_some());
            pos += found.unwrap() + 1;
        }
    }

    #[test]
    fn best1_never_below_all_captions_on_meteor(
        videos in proptest::collection::vec((distinct_set(1), proptest::collection::vec(sentence(), 1..3)), 1..4),
    ) {
        let mut c = Corpus::new();
        for (i, (caps, refs)) in videos.iter().enumerate() {
            c.add_captions(&format!("v{i}"), caps).unwrap();
            c.add_references(&format!("v{i}"), refs).unwrap();
        }
        let o = AccuracyOptions::default();
        let all = corpus_accuracy(&c, AccuracyMode::AllCaptions, &o).unwrap();
        let best = corpus_accuracy(&c, AccuracyMode::Best1, &o).unwrap();
        prop_assert!(best.mean.meteor >= all.mean.meteor - 1e-12);
    }
}
