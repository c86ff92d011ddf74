//! The Gauss–Kuzmin law and digit histograms measured against it.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cf::CfExpansion;
use crate::error::{Error, Result};

/// Default number of individually tracked digits; larger digits share a tail bucket.
pub const DEFAULT_DIGIT_CAP: usize = 50;

/// `log2(1 + 1/(k(k+2)))`, the limiting frequency of digit `k`.
pub fn gk_mass(k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::OutOfRange("digit must be at least 1"));
    }
    let k = k as f64;
    Ok(libm::log1p(1.0 / (k * (k + 2.0))) / core::f64::consts::LN_2)
}

/// Mass of all digits above `cap`: the partial products telescope to
/// `2(K+1)/(K+2)`, leaving `log2((K+2)/(K+1))`.
pub fn gk_tail(cap: usize) -> f64 {
    let k = cap as f64;
    libm::log1p(1.0 / (k + 1.0)) / core::f64::consts::LN_2
}

/// Digit histogram for digits `1..=cap` with digits above `cap` pooled.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitStats {
    counts: Vec<u64>,
    tail: u64,
    total: u64,
}

impl DigitStats {
    pub fn new(cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::OutOfRange("digit cap must be at least 1"));
        }
        Ok(DigitStats { counts: alloc::vec![0; cap], tail: 0, total: 0 })
    }

    /// Rebuilds a histogram from stored parts, checking `total = sum + tail`.
    pub fn from_parts(counts: Vec<u64>, tail: u64, total: u64) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::OutOfRange("digit cap must be at least 1"));
        }
        if counts.iter().sum::<u64>() + tail != total {
            return Err(Error::OutOfRange("histogram total does not match its counts"));
        }
        Ok(DigitStats { counts, tail, total })
    }

    pub fn cap(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn tail_count(&self) -> u64 {
        self.tail
    }

    /// Count of digit `k` for `1 <= k <= cap`, else 0.
    pub fn count(&self, k: usize) -> u64 {
        if k == 0 {
            return 0;
        }
        self.counts.get(k - 1).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Records one digit. Digits below 1 are rejected.
    pub fn push(&mut self, digit: u64) -> Result<()> {
        if digit == 0 {
            return Err(Error::OutOfRange("digit must be at least 1"));
        }
        match usize::try_from(digit - 1).ok().and_then(|i| self.counts.get_mut(i)) {
            Some(c) => *c += 1,
            None => self.tail += 1,
        }
        self.total += 1;
        Ok(())
    }

    pub fn push_big(&mut self, digit: &BigInt) -> Result<()> {
        match digit.to_u64() {
            Some(d) => self.push(d),
            None if digit > &BigInt::from(0) => {
                self.tail += 1;
                self.total += 1;
                Ok(())
            }
            None => Err(Error::OutOfRange("digit must be at least 1")),
        }
    }

    /// Adds another histogram with the same cap.
    pub fn merge(&mut self, other: &DigitStats) -> Result<()> {
        if other.cap() != self.cap() {
            return Err(Error::OutOfRange("histograms have different digit caps"));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.tail += other.tail;
        self.total += other.total;
        Ok(())
    }

    pub fn freq(&self, k: usize) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.count(k) as f64 / self.total as f64
    }

    pub fn tail_freq(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.tail as f64 / self.total as f64
    }
}

/// Histogram of one period of `e`; the preperiod does not affect the limiting
/// frequencies and is ignored.
pub fn digit_stats(e: &CfExpansion, cap: usize) -> Result<DigitStats> {
    let mut s = DigitStats::new(cap)?;
    for a in &e.period {
        s.push_big(a)?;
    }
    Ok(s)
}

/// Distance between an empirical digit law and Gauss–Kuzmin truncated at the same cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    /// Half the l1 distance, tail bucket included.
    TotalVariation,
    /// Pearson chi-square `sum (f - g)^2 / g`, tail bucket included.
    ChiSquare,
}

pub fn distribution_distance(s: &DigitStats, metric: Metric) -> Result<f64> {
    if s.total == 0 {
        return Err(Error::OutOfRange("empty histogram"));
    }
    let cap = s.cap();
    let tail_gk = gk_tail(cap);
    let term = |f: f64, g: f64| match metric {
        Metric::TotalVariation => 0.5 * (f - g).abs(),
        Metric::ChiSquare => (f - g) * (f - g) / g,
    };
    let mut acc = term(s.tail_freq(), tail_gk);
    for k in 1..=cap {
        acc += term(s.freq(k), gk_mass(k as u64)?);
    }
    Ok(acc)
}

pub fn total_variation(s: &DigitStats) -> Result<f64> {
    distribution_distance(s, Metric::TotalVariation)
}
