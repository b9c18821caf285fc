mod common;

use std::collections::BTreeSet;

use common::{brute_punct_ies, brute_word_ies, random_transcript};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use respira::transcript::default_stop_marks;
use respira::{asr_punct_ies, asr_word_ies, IeInterval, IeSource, TimedWord, Transcript};

fn tr(words: &[(&str, f64, f64)], duration: f64) -> Transcript {
    Transcript::new(
        words
            .iter()
            .map(|&(t, s, e)| TimedWord::new(t, s, e).unwrap())
            .collect(),
        duration,
    )
    .unwrap()
}

fn spans(ies: &[IeInterval]) -> Vec<(f64, f64)> {
    ies.iter().map(|iv| (iv.start_s(), iv.end_s())).collect()
}

#[test]
fn pause_above_threshold_is_an_event() {
    let t = tr(&[("so", 0.6, 1.0), ("then", 1.2, 1.5)], 2.0);
    let ies = asr_word_ies(&t, 0.150).unwrap();
    assert_eq!(spans(&ies), vec![(1.0, 1.2)]);
    assert_eq!(ies[0].source(), IeSource::AsrWord);
}

#[test]
fn pause_of_exactly_threshold_is_not() {
    // 0.25 - 0.1 == 0.15 exactly in binary floating point
    assert_eq!(0.25f64 - 0.1, 0.150);
    let t = tr(&[("a", 0.0, 0.1), ("b", 0.25, 0.4)], 1.0);
    assert!(asr_word_ies(&t, 0.150).unwrap().is_empty());
    let t = tr(&[("a", 0.0, 0.1), ("b", 0.2501, 0.4)], 1.0);
    assert_eq!(asr_word_ies(&t, 0.150).unwrap().len(), 1);
}

#[test]
fn short_transcripts_give_nothing() {
    let marks = default_stop_marks();
    for t in [tr(&[], 1.0), tr(&[("alone.", 0.1, 0.5)], 1.0)] {
        assert!(asr_word_ies(&t, 0.150).unwrap().is_empty());
        assert!(asr_punct_ies(&t, &marks).unwrap().is_empty());
    }
}

#[test]
fn stop_gap_runs_to_next_word() {
    let t = tr(
        &[
            ("the", 2.9, 3.0),
            ("project.", 3.05, 3.40),
            ("Next", 3.95, 4.2),
        ],
        5.0,
    );
    let ies = asr_punct_ies(&t, &default_stop_marks()).unwrap();
    assert_eq!(spans(&ies), vec![(3.40, 3.95)]);
    assert_eq!(ies[0].source(), IeSource::AsrPunct);
}

#[test]
fn final_or_abutting_stops_are_skipped() {
    let t = tr(&[("one,", 0.0, 0.5), ("two.", 0.5, 1.0)], 1.5);
    assert!(asr_punct_ies(&t, &default_stop_marks()).unwrap().is_empty());
}

#[test]
fn unpunctuated_transcript_has_no_stops() {
    let t = tr(
        &[("we", 0.0, 0.2), ("read", 0.6, 0.9), ("aloud", 1.5, 1.9)],
        2.0,
    );
    assert!(asr_punct_ies(&t, &default_stop_marks()).unwrap().is_empty());
    assert_eq!(asr_word_ies(&t, 0.150).unwrap().len(), 2);
}

#[test]
fn only_the_last_character_counts() {
    let t = tr(
        &[
            ("Dr.", 0.0, 0.2),
            ("Smith", 0.5, 0.9),
            ("e.g", 1.0, 1.2),
            ("x", 1.8, 2.0),
        ],
        2.0,
    );
    assert_eq!(
        spans(&asr_punct_ies(&t, &default_stop_marks()).unwrap()),
        vec![(0.2, 0.5)]
    );
}

#[test]
fn custom_marks_and_validation() {
    let t = tr(
        &[("wait;", 0.0, 0.2), ("ok.", 0.5, 0.7), ("go", 1.0, 1.2)],
        2.0,
    );
    let semi: BTreeSet<char> = [';'].into();
    assert_eq!(spans(&asr_punct_ies(&t, &semi).unwrap()), vec![(0.2, 0.5)]);
    assert!(asr_punct_ies(&t, &BTreeSet::new()).is_err());
    assert!(asr_word_ies(&t, 0.0).is_err());
    assert!(asr_word_ies(&t, -1.0).is_err());
}

#[test]
fn transcript_invariants_are_enforced() {
    assert!(TimedWord::new("", 0.0, 1.0).is_err());
    assert!(TimedWord::new("x", 1.0, 0.5).is_err());
    let w = |s, e| TimedWord::new("x", s, e).unwrap();
    assert!(Transcript::new(vec![w(1.0, 1.2), w(0.5, 0.7)], 2.0).is_err());
    assert!(Transcript::new(vec![w(1.0, 2.5)], 2.0).is_err());
}

#[test]
fn both_methods_match_exhaustive_scans() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let marks = default_stop_marks();
    let mark_str: String = marks.iter().collect();
    for case in 0..1000 {
        let overlaps = case % 2 == 0;
        let t = random_transcript(&mut rng, 100, overlaps);
        let words = asr_word_ies(&t, 0.150).unwrap();
        let punct = asr_punct_ies(&t, &marks).unwrap();
        assert_eq!(spans(&words), brute_word_ies(&t, 0.150), "case {case}");
        assert_eq!(spans(&punct), brute_punct_ies(&t, &mark_str), "case {case}");

        if overlaps {
            continue;
        }
        // every event lies in a gap between words
        for iv in words.iter().chain(&punct) {
            for w in t.words() {
                assert!(
                    iv.end_s() <= w.start_s() || iv.start_s() >= w.end_s(),
                    "case {case}"
                );
            }
        }
    }
}
