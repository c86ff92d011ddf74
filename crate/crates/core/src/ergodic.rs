//! Birkhoff averages along Gauss-map orbits of quadratic irrationals.

use alloc::vec::Vec;

use crate::cf::{cf_expand, cf_step};
use crate::error::{Error, Result};
use crate::surd::Surd;

/// Observables available to [`ergodic_average`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestFn {
    /// The constant 1.
    One,
    /// Indicator of `[lo, hi]`, a subinterval of `[0, 1]`.
    Indicator { lo: f64, hi: f64 },
    /// `ln(1 + x)`.
    Log1p,
    /// `x`.
    Identity,
}

impl TestFn {
    /// Parses `one`, `x`, `log1p`, or `ind:lo:hi`.
    pub fn parse(id: &str) -> Result<Self> {
        match id {
            "one" => Ok(TestFn::One),
            "x" | "identity" => Ok(TestFn::Identity),
            "log1p" => Ok(TestFn::Log1p),
            _ => {
                let rest = id.strip_prefix("ind:").ok_or(Error::OutOfRange("unknown test function"))?;
                let (lo, hi) = rest.split_once(':').ok_or(Error::OutOfRange("unknown test function"))?;
                let lo: f64 = lo.parse().map_err(|_| Error::OutOfRange("bad interval endpoint"))?;
                let hi: f64 = hi.parse().map_err(|_| Error::OutOfRange("bad interval endpoint"))?;
                TestFn::indicator(lo, hi)
            }
        }
    }

    pub fn indicator(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(Error::OutOfRange("indicator interval must lie in [0, 1]"));
        }
        Ok(TestFn::Indicator { lo, hi })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            TestFn::One => 1.0,
            TestFn::Indicator { lo, hi } => {
                if lo <= x && x <= hi {
                    1.0
                } else {
                    0.0
                }
            }
            TestFn::Log1p => libm::log1p(x),
            TestFn::Identity => x,
        }
    }
}

/// `(1/N) sum_{k<N} f(T^k x_0)` with `x_0 = {x}` and `T(x) = {1/x}`.
///
/// The orbit is tracked exactly: `T^k x_0 = 1/s_{k+1}` where `s_k` are the
/// continued-fraction states of `x`. Only the evaluation of `f` is in floating
/// point. The orbit is eventually periodic, so `N` beyond preperiod plus one
/// period is handled by weighting the period sum.
pub fn ergodic_average(x: &Surd, f: TestFn, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::OutOfRange("orbit length must be positive"));
    }
    let exp = cf_expand(x);
    let pre = exp.preperiod.len();
    let per = exp.period.len();
    // s_1 .. s_{pre + per}: fractional orbit points x_k = 1/s_{k+1}
    let mut values = Vec::with_capacity(pre + per);
    let (_, mut state) = cf_step(x);
    for _ in 0..pre + per {
        values.push(f.eval(1.0 / state.to_f64()));
        state = cf_step(&state).1;
    }
    // s_k is periodic from k = pre on, so x_k is periodic from k = pre - 1 on
    let transient = pre.saturating_sub(1);
    let (head, cycle) = split_orbit(&values, transient, per);
    let n_usize = usize::try_from(n).unwrap_or(usize::MAX);
    if n_usize <= head.len() {
        return Ok(head[..n_usize].iter().sum::<f64>() / n as f64);
    }
    let rest = n - head.len() as u64;
    let full = rest / per as u64;
    let part = (rest % per as u64) as usize;
    let cycle_sum: f64 = cycle.iter().sum();
    let total = head.iter().sum::<f64>() + full as f64 * cycle_sum + cycle[..part].iter().sum::<f64>();
    Ok(total / n as f64)
}

fn split_orbit(values: &[f64], transient: usize, per: usize) -> (&[f64], &[f64]) {
    let head = &values[..transient];
    let cycle = &values[transient..transient + per];
    (head, cycle)
}
