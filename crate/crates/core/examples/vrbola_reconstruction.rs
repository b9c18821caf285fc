//! Rebuilds a belt signal from noisy framewise estimates, by overlap-add and
//! by plain concatenation, and compares the two.

use respira::vrbola::rms_error;
use respira::{
    concatenate, detect_ies, metrics, mock_frame_predictor, overlap_add, score, synth_breathing,
    DetectorConfig, IeSource, SynthConfig, WindowShape, WindowSpec,
};

fn main() -> respira::Result<()> {
    let (k, hop) = (256, 128);
    let cfg = SynthConfig {
        duration_s: k as f64 * 30.0 / 50.0,
        seed: 4,
        ..SynthConfig::default()
    };
    let (belt, planted) = synth_breathing(&cfg)?;
    let x = belt.samples();
    let range =
        x.iter().cloned().fold(f64::MIN, f64::max) - x.iter().cloned().fold(f64::MAX, f64::min);
    let sigma = 0.2 * range;

    let window = WindowSpec::new(WindowShape::SquaredSine, k, hop);
    println!(
        "squared-sine K={k} S={hop}: COLA deviation {:.2e}",
        window.cola_deviation()
    );

    let ola_frames = mock_frame_predictor(&belt, k, hop, sigma, 1)?;
    let ola = overlap_add(&ola_frames, &window)?;
    let cat = concatenate(&mock_frame_predictor(&belt, k, k, sigma, 1)?)?;

    let inner = ola.interior.clone();
    println!("interior samples {}..{}", inner.start, inner.end);
    println!(
        "rms error  overlap-add {:.4}",
        rms_error(&ola.waveform.samples()[inner.clone()], &x[inner.clone()])
    );
    println!(
        "rms error  concatenate {:.4}",
        rms_error(&cat.waveform.samples()[inner.clone()], &x[inner])
    );

    let det = DetectorConfig::default();
    for (name, wave) in [
        ("overlap-add", &ola.waveform),
        ("concatenate", &cat.waveform),
    ] {
        let (ies, _) = detect_ies(wave, &det, IeSource::Vrb)?;
        let f1 = metrics(&score(&ies, &planted)?).display().f1;
        println!("detection F1 on {name}: {f1}");
    }
    Ok(())
}
