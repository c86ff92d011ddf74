//! Digit histograms as CSV with columns `k, count, freq, gk_mass, abs_diff`.

use std::io::Write;

use quadcf_core::{gk_mass, gk_tail, DigitStats};

/// One row per digit `1..=cap`, then a `tail` row for the pooled digits.
pub fn write_histogram<W: Write>(w: W, s: &DigitStats) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["k", "count", "freq", "gk_mass", "abs_diff"])?;
    for k in 1..=s.cap() {
        let g = gk_mass(k as u64).expect("k >= 1");
        let f = s.freq(k);
        w.serialize((k.to_string(), s.count(k), f, g, (f - g).abs()))?;
    }
    let g = gk_tail(s.cap());
    let f = s.tail_freq();
    w.serialize(("tail", s.tail_count(), f, g, (f - g).abs()))?;
    w.flush()?;
    Ok(())
}
