//! Compares belt detection with both transcript methods on a synthetic
//! corpus where only part of the breathing falls on grammatical stops.

use respira::transcript::default_stop_marks;
use respira::{
    asr_punct_ies, asr_word_ies, detect_ies, metrics, score, synth_breathing, synth_transcript,
    ConfusionCounts, DetectorConfig, IeSource, SynthConfig,
};

fn main() -> respira::Result<()> {
    let marks = default_stop_marks();
    let det = DetectorConfig::default();
    let mut totals = [ConfusionCounts::default(); 3];
    for seed in 0..20 {
        let cfg = SynthConfig {
            seed,
            duration_s: 600.0,
            ..SynthConfig::default()
        };
        let (belt, truth) = synth_breathing(&cfg)?;
        let transcript = synth_transcript(&truth, &cfg)?;
        let (belt_ies, _) = detect_ies(&belt, &det, IeSource::Belt)?;
        let estimates = [
            belt_ies,
            asr_word_ies(&transcript, det.pause_threshold_s)?,
            asr_punct_ies(&transcript, &marks)?,
        ];
        for (total, est) in totals.iter_mut().zip(&estimates) {
            *total = *total + score(est, &truth)?;
        }
    }
    println!(
        "{:<10} {:>5} {:>5} {:>5} {:>5}  {:>5} {:>5} {:>5}",
        "method", "tp", "tn", "fp", "fn", "sens", "spec", "f1"
    );
    for (name, c) in ["belt", "ASR-word", "ASR-punct"].iter().zip(totals) {
        let d = metrics(&c).display();
        println!(
            "{name:<10} {:>5} {:>5} {:>5} {:>5}  {:>5} {:>5} {:>5}",
            c.tp, c.tn, c.fp, c.fn_, d.sensitivity, d.specificity, d.f1
        );
    }
    Ok(())
}
