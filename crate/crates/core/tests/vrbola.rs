use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use respira::vrbola::{mock_frame_predictor_with, rms_error, NoiseProfile};
use respira::{
    concatenate, mock_frame_predictor, overlap_add, synth_breathing, Error, FrameSequence,
    SynthConfig, Waveform, WindowShape, WindowSpec,
};

const FS: f64 = 50.0;

fn random_wave(seed: u64, n: usize) -> Waveform {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
    Waveform::new("ref", FS, x).unwrap()
}

#[test]
fn squared_sine_half_hop_sums_to_one() {
    for k in [2, 4, 16, 256, 1000] {
        let w = WindowSpec::new(WindowShape::SquaredSine, k, k / 2);
        assert!(w.cola_deviation() < 1e-9, "K={k}: {}", w.cola_deviation());
        assert!(w.check_cola().is_ok());
    }
}

#[test]
fn cola_violation_names_the_pair() {
    let w = WindowSpec::new(WindowShape::SquaredSine, 256, 100);
    match w.check_cola().unwrap_err() {
        Error::Cola { length, hop, .. } => assert_eq!((length, hop), (256, 100)),
        e => panic!("{e}"),
    }
    let frames = mock_frame_predictor(&random_wave(1, 2000), 256, 100, 0.0, 0).unwrap();
    let err = overlap_add(
        &frames,
        &WindowSpec::for_frames(WindowShape::SquaredSine, &frames),
    )
    .unwrap_err();
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn window_length_must_match_frames() {
    let frames = mock_frame_predictor(&random_wave(1, 2000), 256, 128, 0.0, 0).unwrap();
    let w = WindowSpec::new(WindowShape::SquaredSine, 128, 64);
    assert!(matches!(
        overlap_add(&frames, &w),
        Err(Error::Validation { .. })
    ));
}

#[test]
fn constant_frames_rebuild_a_constant() {
    let frames = FrameSequence::new(FS, 64, 32, vec![vec![3.25; 64]; 9]).unwrap();
    let r = overlap_add(
        &frames,
        &WindowSpec::for_frames(WindowShape::SquaredSine, &frames),
    )
    .unwrap();
    assert_eq!(r.waveform.len(), 8 * 32 + 64);
    assert_eq!(r.interior, 32..r.waveform.len() - 32);
    assert!(r.interior_samples().iter().all(|v| (v - 3.25).abs() < 1e-9));
}

#[test]
fn single_rectangular_frame_is_verbatim() {
    let frame: Vec<f64> = (0..10).map(|i| i as f64 * 0.5 - 1.0).collect();
    let frames = FrameSequence::new(FS, 10, 10, vec![frame.clone()]).unwrap();
    let r = overlap_add(
        &frames,
        &WindowSpec::for_frames(WindowShape::Rectangular, &frames),
    )
    .unwrap();
    assert_eq!(r.waveform.samples(), &frame[..]);
}

#[test]
fn concatenation_joins_frames() {
    let frames = FrameSequence::new(FS, 2, 2, vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
    assert_eq!(
        concatenate(&frames).unwrap().waveform.samples(),
        &[1.0, 2.0, 3.0, 4.0]
    );

    let single = FrameSequence::new(FS, 3, 3, vec![vec![7.0, 8.0, 9.0]]).unwrap();
    assert_eq!(
        concatenate(&single).unwrap().waveform.samples(),
        &[7.0, 8.0, 9.0]
    );

    let overlapping = FrameSequence::new(FS, 4, 2, vec![vec![0.0; 4]; 3]).unwrap();
    assert!(matches!(
        concatenate(&overlapping),
        Err(Error::Validation { .. })
    ));
}

#[test]
fn concatenated_slices_are_the_source() {
    let src = random_wave(5, 256 * 12);
    let frames = mock_frame_predictor(&src, 256, 256, 0.0, 9).unwrap();
    let r = concatenate(&frames).unwrap();
    assert_eq!(r.waveform.samples(), src.samples());
}

#[test]
fn zero_noise_overlap_add_is_identity_inside() {
    for seed in 0..20 {
        let src = random_wave(seed, 3000 + seed as usize * 37);
        let frames = mock_frame_predictor(&src, 256, 128, 0.0, seed).unwrap();
        let r = overlap_add(
            &frames,
            &WindowSpec::for_frames(WindowShape::SquaredSine, &frames),
        )
        .unwrap();
        for i in r.interior.clone() {
            assert!(
                (r.waveform.samples()[i] - src.samples()[i]).abs() < 1e-9,
                "seed {seed} i {i}"
            );
        }
    }
}

#[test]
fn mock_frames_are_seeded_slices() {
    let src = random_wave(3, 1000);
    let clean = mock_frame_predictor(&src, 100, 50, 0.0, 1).unwrap();
    assert_eq!(clean.len(), (1000 - 100) / 50 + 1);
    for (p, f) in clean.frames().iter().enumerate() {
        assert_eq!(&f[..], &src.samples()[p * 50..p * 50 + 100]);
    }
    let a = mock_frame_predictor(&src, 100, 50, 0.3, 42).unwrap();
    let b = mock_frame_predictor(&src, 100, 50, 0.3, 42).unwrap();
    let c = mock_frame_predictor(&src, 100, 50, 0.3, 43).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);

    assert!(mock_frame_predictor(&random_wave(1, 50), 100, 50, 0.0, 0).is_err());
    assert!(mock_frame_predictor(&src, 100, 0, 0.0, 0).is_err());
    assert!(mock_frame_predictor(&src, 100, 101, 0.0, 0).is_err());
    assert!(mock_frame_predictor(&src, 100, 50, -1.0, 0).is_err());
}

#[test]
fn triangular_noise_grows_toward_frame_edges() {
    let src = Waveform::new("zero", FS, vec![0.0; 256 * 400]).unwrap();
    let frames = mock_frame_predictor(&src, 256, 256, 1.0, 3).unwrap();
    let spread = |range: std::ops::Range<usize>| {
        let v: Vec<f64> = frames
            .frames()
            .iter()
            .flat_map(|f| f[range.clone()].to_vec())
            .collect();
        (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt()
    };
    let centre = spread(120..136);
    let edges = spread(0..8);
    assert!(centre < 0.1, "{centre}");
    assert!(edges > 0.9, "{edges}");

    let flat = mock_frame_predictor_with(&src, 256, 256, 1.0, 3, NoiseProfile::Flat).unwrap();
    let v: Vec<f64> = flat
        .frames()
        .iter()
        .flat_map(|f| f[120..136].to_vec())
        .collect();
    let sd = (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt();
    assert!((sd - 1.0).abs() < 0.05);
}

#[test]
fn overlap_add_beats_concatenation_on_edge_noise() {
    let cfg = SynthConfig {
        duration_s: 256.0 * 40.0 / FS,
        ..SynthConfig::default()
    };
    let (belt, _) = synth_breathing(&cfg).unwrap();
    let x = belt.samples();
    let range =
        x.iter().cloned().fold(f64::MIN, f64::max) - x.iter().cloned().fold(f64::MAX, f64::min);
    let (mut ola_sum, mut cat_sum) = (0.0, 0.0);
    for seed in 0..20 {
        let ola_frames = mock_frame_predictor(&belt, 256, 128, 0.2 * range, seed).unwrap();
        let ola = overlap_add(
            &ola_frames,
            &WindowSpec::for_frames(WindowShape::SquaredSine, &ola_frames),
        )
        .unwrap();
        let cat = concatenate(&mock_frame_predictor(&belt, 256, 256, 0.2 * range, seed).unwrap())
            .unwrap();
        let inner = ola.interior.clone();
        ola_sum += rms_error(&ola.waveform.samples()[inner.clone()], &x[inner.clone()]);
        cat_sum += rms_error(&cat.waveform.samples()[inner.clone()], &x[inner]);
    }
    assert!(ola_sum < cat_sum, "{ola_sum} vs {cat_sum}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reconstruction_length_and_interior(k_half in 1usize..64, p in 1usize..20) {
        let k = 2 * k_half;
        let frames = FrameSequence::new(FS, k, k_half, vec![vec![1.0; k]; p]).unwrap();
        let r = overlap_add(&frames, &WindowSpec::for_frames(WindowShape::SquaredSine, &frames)).unwrap();
        prop_assert_eq!(r.waveform.len(), (p - 1) * k_half + k);
        prop_assert!(r.interior.start <= r.interior.end);
        for &v in r.interior_samples() {
            prop_assert!((v - 1.0).abs() < 1e-9);
        }
    }
}
