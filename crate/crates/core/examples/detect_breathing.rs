//! Detects inspiration events in a synthetic recording and compares them
//! with the planted ones.

use respira::{detect_ies, metrics, score, synth_breathing, DetectorConfig, IeSource, SynthConfig};

fn main() -> respira::Result<()> {
    let cfg = SynthConfig {
        seed: 2,
        ..SynthConfig::default()
    };
    let (belt, planted) = synth_breathing(&cfg)?;
    let (events, stats) = detect_ies(&belt, &DetectorConfig::default(), IeSource::Belt)?;

    println!("planted {}, detected {}", planted.len(), events.len());
    for e in &events {
        let hit = planted.iter().find(|p| p.overlaps(e, 0.0));
        match hit {
            Some(p) => println!(
                "  {:>7.2}-{:<7.2} overlaps planted {:.2}-{:.2}",
                e.start_s(),
                e.end_s(),
                p.start_s(),
                p.end_s()
            ),
            None => println!("  {:>7.2}-{:<7.2} stray", e.start_s(), e.end_s()),
        }
    }
    if let Some(rate) = stats.breathing_rate_hz {
        println!(
            "breathing rate {rate:.4} Hz ({:.1} breaths/min)",
            rate * 60.0
        );
    }
    let c = score(&events, &planted)?;
    let d = metrics(&c).display();
    println!(
        "tp {} tn {} fp {} fn {}  sens {} spec {} f1 {}",
        c.tp, c.tn, c.fp, c.fn_, d.sensitivity, d.specificity, d.f1
    );
    Ok(())
}
