//! Continued-fraction expansion of quadratic irrationals via the PQa recurrence.
//!
//! A state `(P + sqrt d)/Q` steps to digit `a = floor(x)` and the next state
//! `(P' + sqrt d)/Q'` with `P' = aQ - P`, `Q' = (d - P'^2)/Q`. Everything is
//! integer arithmetic, so period detection is exact.

use alloc::vec::Vec;
use core::iter;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::matrix::IntMatrix2;
use crate::surd::Surd;

/// Eventually periodic expansion `[pre_0, ..., pre_m; (per_0, ..., per_l)]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CfExpansion {
    pub preperiod: Vec<BigInt>,
    pub period: Vec<BigInt>,
}

impl CfExpansion {
    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    /// The infinite digit stream: preperiod, then the period forever.
    pub fn digits(&self) -> impl Iterator<Item = &BigInt> + '_ {
        self.preperiod.iter().chain(self.period.iter().cycle())
    }

    /// Product of `(a, 1; 1, 0)` over the preperiod.
    pub fn preperiod_matrix(&self) -> IntMatrix2 {
        digit_product(&self.preperiod)
    }

    /// Product of `(a, 1; 1, 0)` over one period; it fixes the purely periodic tail.
    pub fn period_matrix(&self) -> IntMatrix2 {
        digit_product(&self.period)
    }

    /// Primitive hyperbolic matrix of determinant +1 fixing the expanded number:
    /// the period matrix (squared for odd periods), conjugated by the preperiod.
    pub fn automorph(&self) -> IntMatrix2 {
        let mut m = self.period_matrix();
        if self.period.len() % 2 == 1 {
            m = &m * &m;
        }
        let pre = self.preperiod_matrix();
        &(&pre * &m) * &pre.inverse()
    }
}

fn digit_product(digits: &[BigInt]) -> IntMatrix2 {
    digits
        .iter()
        .fold(IntMatrix2::identity(), |acc, a| &acc * &IntMatrix2::digit(a))
}

/// One step of the expansion: `(floor(x), 1/(x - floor(x)))`.
pub fn cf_step(x: &Surd) -> (BigInt, Surd) {
    let digit = x.floor();
    let p_next = &digit * x.q() - x.p();
    let q_next = (x.d() - &p_next * &p_next) / x.q();
    let next = Surd::from_parts(p_next, q_next, x.d().clone(), Some(x.sqrt_floor().clone()));
    (digit, next)
}

/// `x > 1` and `-1 < x' < 0`: exactly the surds with a purely periodic expansion.
pub fn is_reduced(x: &Surd) -> bool {
    let one = BigInt::one();
    if x.sign_vs(&one, &one) < 0 {
        return false;
    }
    // x' = (p - sqrt d)/q; x' < 0 and x' > -1
    let c = x.conjugate();
    c.sign_vs(&BigInt::zero(), &one) < 0 && c.sign_vs(&-one.clone(), &one) > 0
}

/// Full expansion with exact preperiod and minimal period.
///
/// Steps until the first reduced iterate; every later iterate is reduced and
/// the reduced states repeat with exactly the minimal period, so the cycle is
/// closed by returning to that first reduced `(P, Q)`.
pub fn cf_expand(x: &Surd) -> CfExpansion {
    let mut preperiod = Vec::new();
    let mut cur = x.clone();
    while !is_reduced(&cur) {
        let (a, next) = cf_step(&cur);
        preperiod.push(a);
        cur = next;
    }
    let start = cur.clone();
    let mut period = Vec::new();
    loop {
        let (a, next) = cf_step(&cur);
        period.push(a);
        cur = next;
        if cur.p() == start.p() && cur.q() == start.q() {
            break;
        }
    }
    CfExpansion { preperiod, period }
}

/// Iterator over `(digit, state)` pairs: the digit is `floor(state)` and the
/// next state is `1/(state - digit)`. The first item is the input itself.
pub fn cf_states(x: &Surd) -> impl Iterator<Item = (BigInt, Surd)> {
    let mut cur = x.clone();
    iter::from_fn(move || {
        let (a, next) = cf_step(&cur);
        let here = core::mem::replace(&mut cur, next);
        Some((a, here))
    })
}

/// First `n` convergents `(p_k, q_k)` of a digit stream.
pub fn convergents<'a, I>(digits: I, n: usize) -> Vec<(BigInt, BigInt)>
where
    I: IntoIterator<Item = &'a BigInt>,
{
    let (mut p2, mut p1) = (BigInt::zero(), BigInt::one());
    let (mut q2, mut q1) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::with_capacity(n);
    for a in digits.into_iter().take(n) {
        let p = a * &p1 + &p2;
        let q = a * &q1 + &q2;
        p2 = core::mem::replace(&mut p1, p.clone());
        q2 = core::mem::replace(&mut q1, q.clone());
        out.push((p, q));
    }
    out
}
