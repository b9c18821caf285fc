//! Picks alternating breathing extrema from a filtered synthetic belt signal.

use respira::{design_butterworth_bandpass, filtfilt, find_extrema, synth_breathing, SynthConfig};

fn main() -> respira::Result<()> {
    let cfg = SynthConfig {
        duration_s: 60.0,
        seed: 11,
        ..SynthConfig::default()
    };
    let (belt, _) = synth_breathing(&cfg)?;
    let cascade = design_butterworth_bandpass(3, 0.1, 1.0, belt.sample_rate_hz())?;
    let filtered = filtfilt(&cascade, &belt)?;

    for threshold in [0.8, 0.3] {
        let ext = find_extrema(&filtered, 1.0, threshold)?;
        println!("threshold {threshold}: {} extrema", ext.len());
        for e in &ext {
            println!(
                "  {:>7.2} s  {:?}  value {:>7.4}  prominence {:.3}",
                e.time_s, e.kind, e.value, e.prominence_normalized
            );
        }
    }
    Ok(())
}
