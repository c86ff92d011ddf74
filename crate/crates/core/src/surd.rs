//! Exact quadratic irrationals `(p + sqrt(d)) / q`.

use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{div_floor, is_square, isqrt};
use crate::error::{Error, Result};

/// A real quadratic irrational `(p + sqrt(d)) / q` kept in the canonical
/// form where `q` divides `d - p^2`.
///
/// That divisibility is what keeps every continued-fraction step in
/// integers. Equality is componentwise on the canonical triple, so two
/// surds with the same real value but different `d` scalings compare
/// unequal; use [`Surd::value_eq`] for value comparison.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Surd {
    p: BigInt,
    q: BigInt,
    d: BigInt,
    // floor(sqrt(d)), cached for the floor and sign routines.
    root: BigInt,
}

impl Surd {
    /// Builds the canonical surd equal to `(p + sqrt(d)) / q`.
    ///
    /// When `q` does not divide `d - p^2`, numerator and denominator are
    /// scaled by `|q|`, giving `(p|q| + sqrt(d q^2)) / (q|q|)`.
    pub fn new(p: BigInt, q: BigInt, d: BigInt) -> Result<Self> {
        if !d.is_positive() {
            return Err(Error::NonPositiveRadicand(d));
        }
        if q.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let root = isqrt(&d);
        if &root * &root == d {
            return Err(Error::SquareRadicand(d));
        }
        Ok(Self::from_parts(p, q, d, Some(root)))
    }

    /// `sqrt(n)` for a positive non-square `n`.
    pub fn sqrt(n: impl Into<BigInt>) -> Result<Self> {
        Self::new(BigInt::zero(), BigInt::one(), n.into())
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(p: i64, q: i64, d: i64) -> Result<Self> {
        Self::new(p.into(), q.into(), d.into())
    }

    // Caller guarantees d > 0 non-square and q != 0.
    pub(crate) fn from_parts(p: BigInt, q: BigInt, d: BigInt, root: Option<BigInt>) -> Self {
        let num = &d - &p * &p;
        if num.is_multiple_of(&q) {
            let root = root.unwrap_or_else(|| isqrt(&d));
            return Surd { p, q, d, root };
        }
        let scale = q.abs();
        let d = d * &scale * &scale;
        let root = isqrt(&d);
        Surd { p: p * &scale, q: q * scale, d, root }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// `floor(sqrt(d))`.
    pub fn sqrt_floor(&self) -> &BigInt {
        &self.root
    }

    /// The Galois conjugate `(p - sqrt(d)) / q`, stored as `(-p + sqrt(d)) / (-q)`.
    pub fn conjugate(&self) -> Surd {
        Surd { p: -&self.p, q: -&self.q, d: self.d.clone(), root: self.root.clone() }
    }

    /// Exact sign of `self - u/v` for `v > 0`. Never zero: the surd is irrational.
    pub fn cmp_rational(&self, u: &BigInt, v: &BigInt) -> Ordering {
        assert!(v.is_positive(), "rational denominator must be positive");
        // sign((p + sqrt d)/q - u/v) = sign(q) * sign(t + v sqrt d), t = p v - u q
        let t = &self.p * v - u * &self.q;
        let inner = if !t.is_negative() || v * v * &self.d > &t * &t {
            Ordering::Greater
        } else {
            Ordering::Less
        };
        if self.q.is_positive() {
            inner
        } else {
            inner.reverse()
        }
    }

    /// Exact sign of `self - u/v` as -1 or +1.
    pub fn sign_vs(&self, u: &BigInt, v: &BigInt) -> i8 {
        match self.cmp_rational(u, v) {
            Ordering::Less => -1,
            _ => 1,
        }
    }

    /// Exact sign of the surd itself.
    pub fn signum(&self) -> i8 {
        self.sign_vs(&BigInt::zero(), &BigInt::one())
    }

    /// `floor(self)`, exact.
    ///
    /// With `s = floor(sqrt d)` the numerator lies strictly inside
    /// `(p + s, p + s + 1)`, so for `q > 0` the floor is `floor((p+s)/q)` and
    /// for `q < 0` it is `floor((p+s+1)/q)`.
    pub fn floor(&self) -> BigInt {
        let base = &self.p + &self.root;
        if self.q.is_positive() {
            div_floor(&base, &self.q)
        } else {
            div_floor(&(base + 1), &self.q)
        }
    }

    /// True when `(p, q, d)` describe the same real number as `other`,
    /// regardless of how each was scaled.
    pub fn value_eq(&self, other: &Surd) -> bool {
        self.q.is_positive() == other.q.is_positive()
            && &self.p * &other.q == &other.p * &self.q
            && &other.q * &other.q * &self.d == &self.q * &self.q * &other.d
    }

    /// Divides out the largest `g` with `g | p`, `g | q` and `g^2 | d`.
    ///
    /// Only factors of `gcd(p, q)` below 2^32 are searched by trial division.
    pub fn simplified(&self) -> Surd {
        let mut g = self.p.gcd(&self.q);
        let mut out = self.clone();
        if g.is_one() {
            return out;
        }
        let mut f = BigInt::from(2u32);
        let limit = BigInt::from(u32::MAX);
        while &f * &f <= g && f <= limit {
            while g.is_multiple_of(&f) {
                g /= &f;
                let sq = &f * &f;
                if out.d.is_multiple_of(&sq) && out.p.is_multiple_of(&f) && out.q.is_multiple_of(&f) {
                    out.d /= &sq;
                    out.p /= &f;
                    out.q /= &f;
                }
            }
            f += 1;
        }
        if g > BigInt::one() {
            let sq = &g * &g;
            if out.d.is_multiple_of(&sq) && out.p.is_multiple_of(&g) && out.q.is_multiple_of(&g) {
                out.d /= &sq;
                out.p /= &g;
                out.q /= &g;
            }
        }
        out.root = isqrt(&out.d);
        out
    }

    /// Approximate real value, for reporting only.
    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        (p + libm::sqrt(d)) / q
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + sqrt({}))/{}", self.p, self.d, self.q)
    }
}

/// Canonicalizes `(p + sqrt(d)) / q`; see [`Surd::new`].
pub fn surd_normalize(p: BigInt, q: BigInt, d: BigInt) -> Result<Surd> {
    Surd::new(p, q, d)
}

/// True when `d > 0` is not a perfect square.
pub fn is_irrational_radicand(d: &BigInt) -> bool {
    d.is_positive() && !is_square(d)
}
