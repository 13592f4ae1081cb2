mod common;

use common::metric_oracle;
use mtsmt::corpus::Sentence;
use mtsmt::metrics::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn s(x: &str) -> Sentence {
    Sentence::from_whitespace(x)
}

fn single_refs(v: &[Sentence]) -> Vec<Vec<Sentence>> {
    v.iter().map(|r| vec![r.clone()]).collect()
}

fn random_sentence(rng: &mut impl Rng, alphabet: &[&str], max_len: usize) -> Sentence {
    let n = rng.random_range(1..=max_len);
    Sentence::from_words((0..n).map(|_| alphabet[rng.random_range(0..alphabet.len())]))
}

#[test]
fn bleu_brevity_fixture() {
    let h = vec![s("it is a guide to action")];
    let r = vec![vec![s("it is a guide to action which ensures that")]];
    let expected = 100.0 * (-0.5f64).exp();
    assert!((bleu(&h, &r, 4).unwrap() - expected).abs() < 1e-9);
    assert!((bleu(&h, &r, 4).unwrap() - 60.65).abs() < 0.005);
}

#[test]
fn bleu_edge_cases() {
    let h = vec![s("a b c d e")];
    assert_eq!(bleu(&h, &single_refs(&h), 4).unwrap(), 100.0);
    assert_eq!(bleu(&h, &[vec![s("v w x y z")]], 4).unwrap(), 0.0);
    assert!(bleu(&[], &[], 4).is_err());
    assert!(bleu(&h, &[], 4).is_err());
}

#[test]
fn bleu_matches_direct_computation() {
    let mut rng = common::rng(11);
    let alphabet = ["a", "b", "c", "d", "e"];
    for max_n in 1..=4 {
        for _ in 0..50 {
            let k = rng.random_range(1..5);
            let hyps: Vec<Sentence> = (0..k).map(|_| random_sentence(&mut rng, &alphabet, 8)).collect();
            let refs: Vec<Sentence> = (0..k).map(|_| random_sentence(&mut rng, &alphabet, 8)).collect();
            let hw: Vec<Vec<&str>> = hyps.iter().map(|x| x.words()).collect();
            let rw: Vec<Vec<&str>> = refs.iter().map(|x| x.words()).collect();
            let expected = metric_oracle::bleu_single_ref(&hw, &rw, max_n);
            let got = bleu(&hyps, &single_refs(&refs), max_n).unwrap();
            assert!((got - expected).abs() < 1e-9, "max_n {max_n}: {got} vs {expected}");
        }
    }
}

#[test]
fn nist_hand_computation() {
    let h = vec![s("a b a")];
    let r = vec![vec![s("a b a")]];
    let log2 = f64::log2;
    let uni = (2.0 * log2(1.5) + log2(3.0)) / 3.0;
    // bigrams "a b", "b a": info = log2(count(a)/count(a b)) etc.
    let bi = (log2(2.0 / 1.0) + log2(1.0 / 1.0)) / 2.0;
    // trigram "a b a": log2(count(a b)/count(a b a))
    let tri = log2(1.0);
    let expected = uni + bi + tri;
    assert!((nist(&h, &r, 5).unwrap() - expected).abs() < 1e-9);
    assert_eq!(nist(&h, &[vec![s("x y z")]], 5).unwrap(), 0.0);
}

#[test]
fn nist_is_invariant_to_doubling() {
    let h = vec![s("the cat sat"), s("a dog barked loudly")];
    let r = vec![vec![s("the cat sat down")], vec![s("the dog barked loudly")]];
    let mut h2 = h.clone();
    h2.extend(h.clone());
    let mut r2 = r.clone();
    r2.extend(r.clone());
    let (a, b) = (nist(&h, &r, 5).unwrap(), nist(&h2, &r2, 5).unwrap());
    assert!((a - b).abs() < 1e-9);
}

#[test]
fn meteor_fixtures() {
    let six = s("one two three four five six");
    let expected = 100.0 * (1.0 - 0.5 * (1.0f64 / 6.0).powi(3));
    assert!((meteor(&six, &six) - expected).abs() < 1e-9);
    assert!((meteor(&six, &six) - 99.77).abs() < 0.005);
    assert!((meteor(&s("b a"), &s("a b")) - 50.0).abs() < 1e-9);
    assert_eq!(meteor(&s("x y"), &s("a b")), 0.0);
}

#[test]
fn meteor_corpus_aggregates_statistics() {
    let h = vec![s("a b c"), s("d e")];
    let r = single_refs(&h);
    // m = 5, chunks = 2
    let expected = 100.0 * (1.0 - 0.5 * (2.0f64 / 5.0).powi(3));
    assert!((meteor_corpus(&h, &r).unwrap() - expected).abs() < 1e-9);
}

#[test]
fn ter_fixtures() {
    assert_eq!(ter(&s("a b c d"), &s("a b c d")), 0.0);
    assert_eq!(ter(&s("a c b d"), &s("a b c d")), 25.0);
    assert_eq!(ter(&s(""), &s("a b c d")), 100.0);
    assert_eq!(
        metric_oracle::ter_two_shift_optimum(&["a", "c", "b", "d"], &["a", "b", "c", "d"]),
        1
    );
}

#[test]
fn ter_bounded_by_oracle_and_edit_distance() {
    let mut rng = common::rng(5);
    let alphabet = ["a", "b", "c", "d", "e", "f"];
    for _ in 0..300 {
        let h = random_sentence(&mut rng, &alphabet, 6);
        let r = random_sentence(&mut rng, &alphabet, 6);
        let (shifts, edits) = ter_edits(&h, &r);
        let greedy = shifts + edits;
        let (hw, rw) = (h.words(), r.words());
        assert_eq!(edit_distance(&hw, &rw), metric_oracle::levenshtein(&hw, &rw));
        assert!(greedy <= metric_oracle::levenshtein(&hw, &rw));
        if shifts <= 2 {
            assert!(greedy >= metric_oracle::ter_two_shift_optimum(&hw, &rw));
        }
    }
}

#[test]
fn ter_equals_oracle_on_permutations() {
    // Reference permutations reachable by at most two block moves.
    let r = s("a b c d e f");
    for h in ["b a c d e f", "d e f a b c", "a b e f c d", "c a b d f e", "f a b c d e"] {
        let h = s(h);
        let (shifts, edits) = ter_edits(&h, &r);
        assert_eq!(
            shifts + edits,
            metric_oracle::ter_two_shift_optimum(&h.words(), &r.words()),
            "{h}"
        );
    }
}

#[test]
fn ter_corpus_uses_average_reference_length() {
    let h = vec![s("a b")];
    let r = vec![vec![s("a b"), s("a b c d")]];
    assert_eq!(ter_corpus(&h, &r).unwrap(), 0.0);
    let h = vec![s("x y")];
    // best edits 2 against "a b"; average length 3
    assert!((ter_corpus(&h, &r).unwrap() - 200.0 / 3.0).abs() < 1e-9);
}

#[test]
fn ribes_fixtures() {
    let o = RibesOptions::default();
    assert_eq!(ribes(&s("a b c d"), &s("a b c d"), &o), 100.0);
    assert_eq!(ribes(&s("d c b a"), &s("a b c d"), &o), 0.0);
    // five of six pairs of (0,2,1,3) are concordant
    assert!((ribes(&s("a c b d"), &s("a b c d"), &o) - 83.33).abs() < 0.005);
    // precision and brevity terms
    let expected = 100.0 * 0.75f64.powf(0.25);
    assert!((ribes(&s("a b x c"), &s("a b c"), &o) - expected).abs() < 1e-9);
    let expected = 100.0 * (1.0 - 4.0f64 / 3.0).exp().powf(0.10);
    assert!((ribes(&s("a b c"), &s("a b c d"), &o) - expected).abs() < 1e-9);
}

#[test]
fn identity_properties() {
    let h = vec![s("the patient was given two tablets"), s("store below 25 degrees")];
    let r = single_refs(&h);
    let rep = evaluate(&h, &r, &EvaluateOptions::default()).unwrap();
    assert_eq!(rep.bleu, 100.0);
    assert_eq!(rep.ter, 0.0);
    assert_eq!(rep.ribes, 100.0);
    let expected = 100.0 * (1.0 - 0.5 * (2.0f64 / 10.0).powi(3));
    assert!((rep.meteor - expected).abs() < 1e-9);
    assert!(rep.nist > 0.0);
}

#[test]
fn disjoint_vocabulary() {
    let h = vec![s("a b c"), s("d e")];
    let r = vec![vec![s("v w x")], vec![s("y z")]];
    let rep = evaluate(&h, &r, &EvaluateOptions::default()).unwrap();
    assert_eq!((rep.bleu, rep.meteor, rep.ribes), (0.0, 0.0, 0.0));
    assert!(rep.ter >= 100.0);
}

#[test]
fn corpus_metrics_ignore_sentence_order() {
    let mut rng = common::rng(9);
    let alphabet = ["a", "b", "c", "d", "e", "f", "g"];
    let hyps: Vec<Sentence> = (0..20).map(|_| random_sentence(&mut rng, &alphabet, 9)).collect();
    let refs: Vec<Vec<Sentence>> = (0..20)
        .map(|_| vec![random_sentence(&mut rng, &alphabet, 9), random_sentence(&mut rng, &alphabet, 9)])
        .collect();
    let base = evaluate(&hyps, &refs, &EvaluateOptions::default()).unwrap();
    let mut order: Vec<usize> = (0..20).collect();
    order.shuffle(&mut rng);
    let h2: Vec<Sentence> = order.iter().map(|&i| hyps[i].clone()).collect();
    let r2: Vec<Vec<Sentence>> = order.iter().map(|&i| refs[i].clone()).collect();
    let shuffled = evaluate(&h2, &r2, &EvaluateOptions::default()).unwrap();
    for (a, b) in base.values().iter().zip(shuffled.values()) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn thread_count_does_not_matter() {
    let mut rng = common::rng(21);
    let alphabet = ["a", "b", "c", "d", "e"];
    let hyps: Vec<Sentence> = (0..40).map(|_| random_sentence(&mut rng, &alphabet, 10)).collect();
    let refs: Vec<Vec<Sentence>> = (0..40).map(|_| vec![random_sentence(&mut rng, &alphabet, 10)]).collect();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| evaluate(&hyps, &refs, &EvaluateOptions::default()).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn files_and_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let hyp = dir.path().join("hyp.txt");
    let r1 = dir.path().join("r1.txt");
    let r2 = dir.path().join("r2.txt");
    std::fs::write(&hyp, "The cat\na dog\n").unwrap();
    std::fs::write(&r1, "the cat\na dog\n").unwrap();
    std::fs::write(&r2, "only one line\n").unwrap();
    let rep = evaluate_files(&hyp, &[&r1], &EvaluateOptions::default()).unwrap();
    assert_eq!(rep.ter, 0.0);
    assert!(rep.to_tsv(None).starts_with("BLEU\tNIST\tMETEOR\tRIBES\tTER\n"));
    let err = evaluate_files(&hyp, &[&r1, &r2], &EvaluateOptions::default()).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains('2') && msg.contains('1'), "{msg}");
    let breakdown = sentence_breakdown_files(&hyp, &[&r1], &EvaluateOptions::default()).unwrap();
    assert_eq!(breakdown.lines().count(), 3);
}
