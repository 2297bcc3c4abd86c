//! Overall performance score from (ASR, ACC) pairs: relative accuracy gain
//! minus relative ASR change against the undefended baseline.

use flain::metrics::{compute_ops, display3};

fn main() -> flain::Result<()> {
    // (label, defended acc, defended asr, baseline acc, baseline asr)
    let rows = [
        ("unchanged", 0.95, 0.90, 0.95, 0.90),
        ("backdoor removed", 0.95, 0.0, 0.95, 0.90),
        ("removed, acc -2%", 0.93, 0.0, 0.95, 0.90),
        ("half removed", 0.95, 0.45, 0.95, 0.90),
        ("worse", 0.90, 0.95, 0.95, 0.90),
    ];
    for (label, d_acc, d_asr, b_acc, b_asr) in rows {
        println!(
            "{label:<18} {:>7}",
            display3(compute_ops(d_acc, d_asr, b_acc, b_asr)?)
        );
    }
    match compute_ops(0.9, 0.0, 0.9, 0.0) {
        Ok(v) => println!("unexpected {v}"),
        Err(e) => println!("zero baseline ASR: {e}"),
    }
    Ok(())
}
