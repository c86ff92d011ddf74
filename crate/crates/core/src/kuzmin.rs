//! Monte Carlo estimate of the law of the `n`-th digit of a uniform random number.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gk::{DigitStats, DEFAULT_DIGIT_CAP};

/// Largest digit index; each Gauss-map step in `f64` costs roughly
/// `log2(digit)` bits of the sample's precision.
pub const MAX_DIGIT_INDEX: u32 = 20;

/// Histogram of the `n`-th digit over `samples` uniform draws from `(0, 1)`.
///
/// Digit 1 is `floor(1/x)`, digit `n` is `floor(1/T^{n-1} x)` with `T` the
/// Gauss map evaluated in double precision. Draws whose orbit hits zero are
/// replaced, so the result always holds `samples` digits.
pub fn kuzmin_montecarlo(n: u32, samples: u64, seed: u64) -> Result<DigitStats> {
    kuzmin_montecarlo_with_cap(n, samples, seed, DEFAULT_DIGIT_CAP)
}

pub fn kuzmin_montecarlo_with_cap(n: u32, samples: u64, seed: u64, cap: usize) -> Result<DigitStats> {
    if n == 0 || n > MAX_DIGIT_INDEX {
        return Err(Error::OutOfRange("digit index must be in 1..=20"));
    }
    if samples == 0 {
        return Err(Error::OutOfRange("samples must be positive"));
    }
    let mut stats = DigitStats::new(cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut taken = 0;
    while taken < samples {
        if let Some(digit) = nth_digit(rng.random::<f64>(), n) {
            stats.push(digit)?;
            taken += 1;
        }
    }
    Ok(stats)
}

fn nth_digit(mut x: f64, n: u32) -> Option<u64> {
    for _ in 1..n {
        if x <= 0.0 {
            return None;
        }
        let inv = 1.0 / x;
        x = inv - libm::floor(inv);
    }
    if x <= 0.0 {
        return None;
    }
    let inv = libm::floor(1.0 / x);
    // saturating cast: digits beyond u64 land in the tail bucket anyway
    Some(if inv >= u64::MAX as f64 { u64::MAX } else { inv as u64 })
}
