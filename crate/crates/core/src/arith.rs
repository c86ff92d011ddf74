//! Integer helpers shared by the surd and form code.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Floor of the square root of a nonnegative integer.
///
/// Newton iteration from an overestimate, then a correction pass so that
/// `s*s <= n < (s+1)*(s+1)` holds on return. Panics on negative input.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of a negative number");
    if n.is_zero() {
        return BigInt::zero();
    }
    if let Some(small) = n.to_u64() {
        return BigInt::from(isqrt_u64(small));
    }
    let bits = n.bits();
    let mut x = BigInt::one() << bits.div_ceil(2);
    loop {
        let next = (&x + n / &x) >> 1u32;
        if next >= x {
            break;
        }
        x = next;
    }
    while &x * &x > *n {
        x -= 1;
    }
    loop {
        let up = &x + 1;
        if &up * &up <= *n {
            x = up;
        } else {
            break;
        }
    }
    x
}

/// Floor square root on machine words.
pub fn isqrt_u64(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut s = libm::sqrt(n as f64) as u64;
    while s.checked_mul(s).is_none_or(|sq| sq > n) {
        s -= 1;
    }
    while (s + 1).checked_mul(s + 1).is_some_and(|sq| sq <= n) {
        s += 1;
    }
    s
}

/// True when `n` is the square of an integer (negative numbers never are).
pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = isqrt(n);
    &s * &s == *n
}

/// Floor division with the quotient rounded toward negative infinity.
pub fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Natural logarithm of a positive integer, accurate to double precision
/// even when the integer does not fit in an `f64`.
pub fn ln_big(n: &BigInt) -> f64 {
    assert!(n.sign() == Sign::Plus, "ln of a non-positive integer");
    let bits = n.bits();
    if bits <= 1000 {
        if let Some(v) = n.to_f64() {
            if v.is_finite() {
                return libm::log(v);
            }
        }
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit prefix fits in f64");
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}
