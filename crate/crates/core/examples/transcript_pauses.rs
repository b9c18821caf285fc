//! Derives event candidates from a small word-aligned transcript with both
//! transcript methods.

use respira::transcript::default_stop_marks;
use respira::{asr_punct_ies, asr_word_ies, TimedWord, Transcript};

fn main() -> respira::Result<()> {
    let words = [
        ("When", 0.40, 0.62),
        ("the", 0.64, 0.72),
        ("sunlight", 0.75, 1.20),
        ("strikes", 1.22, 1.60),
        ("raindrops,", 1.85, 2.20),
        ("they", 2.60, 2.75),
        ("act", 2.78, 3.00),
        ("as", 3.10, 3.20),
        ("a", 3.22, 3.26),
        ("prism.", 3.28, 3.80),
        ("The", 3.90, 4.05),
        ("division", 4.07, 4.50),
        ("is", 5.10, 5.20),
    ];
    let t = Transcript::new(
        words
            .iter()
            .map(|&(w, s, e)| TimedWord::new(w, s, e))
            .collect::<Result<_, _>>()?,
        5.5,
    )?;

    println!("ASR-word (pauses > 150 ms):");
    for iv in asr_word_ies(&t, 0.150)? {
        println!(
            "  {:.2}-{:.2}  {:.0} ms",
            iv.start_s(),
            iv.end_s(),
            iv.duration_s() * 1000.0
        );
    }
    println!("ASR-punct (after . , ; : ? !):");
    for iv in asr_punct_ies(&t, &default_stop_marks())? {
        println!(
            "  {:.2}-{:.2}  {:.0} ms",
            iv.start_s(),
            iv.end_s(),
            iv.duration_s() * 1000.0
        );
    }
    Ok(())
}
