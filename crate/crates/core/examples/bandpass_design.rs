//! Designs the default 0.1-1 Hz band-pass and prints its sections and a few
//! points of the single-pass magnitude response.

use respira::design_butterworth_bandpass;

fn main() -> respira::Result<()> {
    let cascade = design_butterworth_bandpass(3, 0.1, 1.0, 50.0)?;
    print!("{}", cascade.coefficient_dump());

    println!("\n{:>8}  {:>10}  {:>8}", "freq_hz", "|H|", "dB");
    for f in [0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let m = cascade.magnitude_at(f);
        println!("{f:>8.2}  {m:>10.6}  {:>8.2}", 20.0 * m.log10());
    }
    Ok(())
}
