use proptest::prelude::*;
use respira::transcript::default_stop_marks;
use respira::{
    asr_punct_ies, metrics, score, synth_breathing, synth_transcript, ConfusionCounts, Error,
    SynthConfig,
};

fn quiet(seed: u64) -> SynthConfig {
    SynthConfig {
        seed,
        noise_sigma: 0.0,
        drift_per_s: 0.0,
        ..SynthConfig::default()
    }
}

#[test]
fn two_minutes_at_a_tenth_of_a_hertz() {
    let (w, truth) = synth_breathing(&quiet(1)).unwrap();
    assert_eq!(truth.len(), 12);
    assert_eq!(w.duration_s(), 120.0);
    for pair in truth.windows(2) {
        assert!((pair[1].start_s() - pair[0].start_s() - 10.0).abs() < 1e-9);
    }
    for ie in &truth {
        assert!((ie.duration_s() - 0.225).abs() <= 0.015 + 1e-12);
    }
}

#[test]
fn seeds_are_reproducible_and_distinct() {
    let cfg = SynthConfig {
        seed: 42,
        ..SynthConfig::default()
    };
    let (a, ta) = synth_breathing(&cfg).unwrap();
    let (b, tb) = synth_breathing(&cfg).unwrap();
    assert_eq!(a.samples(), b.samples());
    assert_eq!(ta, tb);
    let (c, _) = synth_breathing(&SynthConfig {
        seed: 43,
        ..cfg.clone()
    })
    .unwrap();
    assert_ne!(a.samples(), c.samples());
}

#[test]
fn invalid_config_lists_every_problem() {
    let cfg = SynthConfig {
        speech_resp_rate_hz: 0.0,
        grammatical_fraction: -0.5,
        noise_sigma: -1.0,
        ..SynthConfig::default()
    };
    let v = cfg.violations();
    let text: Vec<String> = v.iter().map(ToString::to_string).collect();
    for field in ["speech_resp_rate_hz", "grammatical_fraction", "noise_sigma"] {
        assert!(
            text.iter().any(|t| t.contains(field)),
            "{field} missing from {text:?}"
        );
    }
    assert!(matches!(
        synth_breathing(&cfg),
        Err(Error::Validation { .. })
    ));
}

#[test]
fn ungrammatical_transcript_never_hits() {
    let cfg = SynthConfig {
        grammatical_fraction: 0.0,
        ..quiet(5)
    };
    let (_, truth) = synth_breathing(&cfg).unwrap();
    let t = synth_transcript(&truth, &cfg).unwrap();
    let c = score(&asr_punct_ies(&t, &default_stop_marks()).unwrap(), &truth).unwrap();
    assert_eq!(c.tp, 0);
}

#[test]
fn grammatical_transcript_misses_nothing() {
    let cfg = SynthConfig {
        grammatical_fraction: 1.0,
        spurious_stop_rate: 0.0,
        ..quiet(5)
    };
    let (_, truth) = synth_breathing(&cfg).unwrap();
    let t = synth_transcript(&truth, &cfg).unwrap();
    let c = score(&asr_punct_ies(&t, &default_stop_marks()).unwrap(), &truth).unwrap();
    assert_eq!(c.fn_, 0);
    assert_eq!(c.fp, 0);
}

#[test]
fn punctuation_rates_land_on_target() {
    let mut total = ConfusionCounts::default();
    for seed in 0..20 {
        let cfg = SynthConfig {
            seed,
            duration_s: 600.0,
            ..SynthConfig::default()
        };
        let (_, truth) = synth_breathing(&cfg).unwrap();
        let t = synth_transcript(&truth, &cfg).unwrap();
        total = total + score(&asr_punct_ies(&t, &default_stop_marks()).unwrap(), &truth).unwrap();
    }
    let m = metrics(&total);
    let (sens, spec) = (m.sensitivity.unwrap(), m.specificity.unwrap());
    assert!((sens - 0.57).abs() <= 0.05, "sensitivity {sens}");
    assert!((spec - 0.70).abs() <= 0.05, "specificity {spec}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn planted_events_are_strict_rises(seed in any::<u64>(), rate in 0.05f64..0.4, mean in 0.1f64..0.8) {
        let cfg = SynthConfig { speech_resp_rate_hz: rate, ie_duration_mean_s: mean, ie_duration_jitter_s: 0.05, ..quiet(seed) };
        let (w, truth) = synth_breathing(&cfg).unwrap();
        prop_assert!(truth.len() >= 2);
        let fs = cfg.sample_rate_hz;
        for ie in &truth {
            let a = (ie.start_s() * fs).ceil() as usize;
            let b = ((ie.end_s() * fs).floor() as usize).min(w.len() - 1);
            let seg = &w.samples()[a..=b];
            prop_assert!(seg.windows(2).all(|p| p[1] > p[0]));
        }
    }

    #[test]
    fn transcripts_are_valid_and_leave_events_silent(seed in any::<u64>(), g in 0.0f64..=1.0, spurious in 0.0f64..0.2) {
        let cfg = SynthConfig { grammatical_fraction: g, spurious_stop_rate: spurious, ..SynthConfig::default() };
        let (_, truth) = synth_breathing(&SynthConfig { seed, ..cfg.clone() }).unwrap();
        let cfg = SynthConfig { seed, ..cfg };
        let t = synth_transcript(&truth, &cfg).unwrap();
        prop_assert!(!t.words().is_empty());
        prop_assert!(t.words().windows(2).all(|p| p[0].end_s() <= p[1].start_s()));
        for w in t.words() {
            prop_assert!(w.end_s() <= t.audio_duration_s());
            for ie in &truth {
                prop_assert!(w.end_s() <= ie.start_s() || w.start_s() >= ie.end_s());
            }
        }
        // the word just before each event ends exactly where the event starts
        for ie in &truth {
            prop_assert!(t.words().iter().any(|w| w.end_s() == ie.start_s()));
            prop_assert!(t.words().iter().any(|w| w.start_s() == ie.end_s()));
        }
        prop_assert_eq!(synth_transcript(&truth, &cfg).unwrap(), t);
    }
}
