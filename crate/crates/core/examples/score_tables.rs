//! Recomputes sensitivity, specificity and F1 from published confusion
//! counts for read and spontaneous speech.

use respira::{metrics, ConfusionCounts};

fn main() {
    let tables = [
        (
            "read",
            [
                ("ASR-word", 960, 985, 343, 347),
                ("ASR-punct", 752, 762, 319, 568),
                ("VRB", 885, 866, 101, 290),
                ("VRBOLA", 929, 915, 93, 232),
            ],
        ),
        (
            "spontaneous",
            [
                ("ASR-word", 513, 517, 269, 207),
                ("ASR-punct", 370, 389, 312, 266),
                ("VRB", 512, 488, 136, 168),
                ("VRBOLA", 532, 507, 135, 175),
            ],
        ),
    ];
    for (name, columns) in tables {
        println!("{name}");
        println!(
            "  {:<10} {:>5} {:>5} {:>5} {:>5}  {:>6} {:>6} {:>6}",
            "method", "tp", "tn", "fp", "fn", "sens", "spec", "f1"
        );
        for (method, tp, tn, fp, fn_) in columns {
            let m = metrics(&ConfusionCounts::new(tp, tn, fp, fn_));
            println!(
                "  {method:<10} {tp:>5} {tn:>5} {fp:>5} {fn_:>5}  {:>6.4} {:>6.4} {:>6.4}",
                m.sensitivity.unwrap(),
                m.specificity.unwrap(),
                m.f1.unwrap()
            );
        }
    }
}
