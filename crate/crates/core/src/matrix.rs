//! Unimodular integer matrices and their Möbius action on surds.

use core::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::surd::Surd;

/// A 2x2 integer matrix `(a, b; c, d)` with determinant +1 or -1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix2 {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl IntMatrix2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if det.abs() != BigInt::one() {
            return Err(Error::NotUnimodular);
        }
        Ok(IntMatrix2 { a, b, c, d })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        IntMatrix2 { a: BigInt::one(), b: BigInt::zero(), c: BigInt::zero(), d: BigInt::one() }
    }

    /// `(digit, 1; 1, 0)`, the matrix sending `y` to `digit + 1/y`.
    pub fn digit(digit: &BigInt) -> Self {
        IntMatrix2 { a: digit.clone(), b: BigInt::one(), c: BigInt::one(), d: BigInt::zero() }
    }

    /// `(0, 1; 1, 0)`, sending `x` to `1/x`.
    pub fn swap() -> Self {
        IntMatrix2 { a: BigInt::zero(), b: BigInt::one(), c: BigInt::one(), d: BigInt::zero() }
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn inverse(&self) -> Self {
        let det = self.det();
        IntMatrix2 {
            a: &det * &self.d,
            b: -(&det * &self.b),
            c: -(&det * &self.c),
            d: det * &self.a,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = IntMatrix2::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `ln |lambda|` for the larger eigenvalue of a hyperbolic matrix
    /// (`|trace| > 2`, or any trace when the determinant is -1).
    ///
    /// Works in log space so entries beyond `f64` range are fine.
    pub fn ln_dominant_eigenvalue(&self) -> f64 {
        // lambda = (t + sqrt(t^2 - 4 det)) / 2
        let t = self.trace().abs();
        if t.is_zero() {
            return 0.0;
        }
        let det = self.det();
        let disc = &t * &t - BigInt::from(4) * det;
        let tl = crate::arith::ln_big(&t);
        // sqrt(t^2 - 4det)/t = sqrt(1 - 4det/t^2)
        let ratio = libm::exp(crate::arith::ln_big(&disc.abs()) - 2.0 * tl);
        let r = if disc.is_negative() { 0.0 } else { libm::sqrt(ratio) };
        tl + libm::log((1.0 + r) / 2.0)
    }

    /// Canonical surd equal to `(a x + b) / (c x + d)`.
    pub fn apply(&self, x: &Surd) -> Surd {
        moebius_apply(self, x)
    }
}

impl Mul for &IntMatrix2 {
    type Output = IntMatrix2;

    fn mul(self, rhs: &IntMatrix2) -> IntMatrix2 {
        IntMatrix2 {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }
}

impl Mul for IntMatrix2 {
    type Output = IntMatrix2;

    fn mul(self, rhs: IntMatrix2) -> IntMatrix2 {
        &self * &rhs
    }
}

/// Möbius action `x -> (a x + b) / (c x + d)` of a unimodular matrix.
///
/// With `x = (p + sqrt D)/q`, `A = a p + b q` and `C = c p + d q`, rationalizing
/// gives `(A C - a c D + q det sqrt D) / (C^2 - c^2 D)`; both parts are
/// divisible by `q det`, so the radicand `D` is kept unchanged.
pub fn moebius_apply(g: &IntMatrix2, x: &Surd) -> Surd {
    let (p, q, dd) = (x.p(), x.q(), x.d());
    let big_a = &g.a * p + &g.b * q;
    let big_c = &g.c * p + &g.d * q;
    let num = &big_a * &big_c - &g.a * &g.c * dd;
    let den = &big_c * &big_c - &g.c * &g.c * dd;
    let s = q * g.det();
    debug_assert!((&num % &s).is_zero() && (&den % &s).is_zero());
    Surd::from_parts(num / &s, den / &s, dd.clone(), Some(x.sqrt_floor().clone()))
}
