//! Indefinite binary quadratic forms `a x^2 + b x y + c y^2`: reduction,
//! rho cycles, narrow class number, and the Pell automorph.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{is_square, isqrt, ln_big};
use crate::cf::{cf_expand, CfExpansion};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix2;
use crate::surd::Surd;

/// A primitive indefinite form with `b^2 - 4ac > 0` non-square and `a, c != 0`.
///
/// Ordered lexicographically by `(a, b, c)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl QuadForm {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if a.is_zero() || c.is_zero() {
            return Err(Error::InvalidForm("leading and trailing coefficients must be nonzero"));
        }
        if !a.gcd(&b).gcd(&c).is_one() {
            return Err(Error::InvalidForm("coefficients are not coprime"));
        }
        let disc = &b * &b - BigInt::from(4) * &a * &c;
        if !disc.is_positive() || is_square(&disc) {
            return Err(Error::InvalidForm("discriminant must be positive and non-square"));
        }
        Ok(QuadForm { a, b, c })
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn coefficients(&self) -> [&BigInt; 3] {
        [&self.a, &self.b, &self.c]
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Positive, non-square, and congruent to 0 or 1 mod 4.
pub fn is_valid_discriminant(d: &BigInt) -> bool {
    if !d.is_positive() {
        return false;
    }
    let r = d.mod_floor(&BigInt::from(4));
    (r.is_zero() || r.is_one()) && !is_square(d)
}

fn ensure_valid(d: &BigInt) -> Result<()> {
    if is_valid_discriminant(d) {
        Ok(())
    } else {
        Err(Error::InvalidDiscriminant(d.clone()))
    }
}

fn is_squarefree(n: &BigInt) -> bool {
    let n = n.abs();
    if let Some(mut m) = n.to_u64() {
        if m % 4 == 0 {
            return false;
        }
        let mut f = 2u64;
        while f * f <= m {
            if m % f == 0 {
                m /= f;
                if m % f == 0 {
                    return false;
                }
            }
            f += 1;
        }
        return true;
    }
    let mut m = n;
    let mut f = BigInt::from(2u32);
    while &f * &f <= m {
        if m.is_multiple_of(&f) {
            m /= &f;
            if m.is_multiple_of(&f) {
                return false;
            }
        }
        f += 1;
    }
    true
}

/// Discriminant of a maximal order: `d = 1 mod 4` squarefree, or `d = 4m` with
/// `m = 2, 3 mod 4` squarefree.
pub fn is_fundamental_discriminant(d: &BigInt) -> Result<bool> {
    ensure_valid(d)?;
    let four = BigInt::from(4);
    if d.mod_floor(&four).is_one() {
        return Ok(is_squarefree(d));
    }
    let m = d / &four;
    let r = m.mod_floor(&four);
    Ok((r == BigInt::from(2) || r == BigInt::from(3)) && is_squarefree(&m))
}

/// The endpoint `(-b + sqrt(disc)) / (2a)` of the geodesic `q(x, 1) = 0`.
pub fn form_root(f: &QuadForm) -> Surd {
    Surd::from_parts(-&f.b, BigInt::from(2) * &f.a, f.discriminant(), None)
}

// 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b, with s = floor(sqrt D):
// b <= s, 2|a| + b > s, 2|a| - b <= s.
fn reduced_with_root(a: &BigInt, b: &BigInt, s: &BigInt) -> bool {
    if !b.is_positive() || b > s {
        return false;
    }
    let two_a = a.abs() * 2u32;
    &two_a + b > *s && &two_a - b <= *s
}

pub fn is_reduced_form(f: &QuadForm) -> bool {
    let s = isqrt(&f.discriminant());
    reduced_with_root(&f.a, &f.b, &s)
}

/// `(a, b, c) -> (c, b', (b'^2 - D)/(4c))` with `b' = -b mod 2|c|` and
/// `sqrt(D) - 2|c| < b' < sqrt(D)`.
pub fn rho_step(f: &QuadForm) -> Result<QuadForm> {
    let disc = f.discriminant();
    let s = isqrt(&disc);
    if !reduced_with_root(&f.a, &f.b, &s) {
        return Err(Error::NotReduced);
    }
    Ok(rho_unchecked(f, &disc, &s))
}

fn rho_unchecked(f: &QuadForm, disc: &BigInt, s: &BigInt) -> QuadForm {
    let m = f.c.abs() * 2u32;
    let b_next = s - (s + &f.b).mod_floor(&m);
    let c_next = (&b_next * &b_next - disc) / (BigInt::from(4) * &f.c);
    QuadForm { a: f.c.clone(), b: b_next, c: c_next }
}

/// All primitive reduced forms of discriminant `d`, sorted.
pub fn enumerate_reduced_forms(d: &BigInt) -> Result<Vec<QuadForm>> {
    ensure_valid(d)?;
    let s = isqrt(d);
    let mut out = Vec::new();
    match (d.to_u64(), s.to_u64()) {
        (Some(dw), Some(sw)) if dw < (1u64 << 62) => enumerate_small(dw, sw, &mut out),
        _ => enumerate_big(d, &s, &mut out),
    }
    out.sort();
    Ok(out)
}

// |a| ranges over ((s - b)/2, (s + b)/2] for a reduced form with middle coefficient b.
fn enumerate_small(d: u64, s: u64, out: &mut Vec<QuadForm>) {
    let mut b = if d % 2 == 1 { 1 } else { 2 };
    while b <= s {
        let n = (d - b * b) / 4;
        let lo = (s - b) / 2 + 1;
        let hi = (s + b) / 2;
        for m in lo..=hi {
            if !n.is_multiple_of(m) {
                continue;
            }
            let other = n / m;
            if gcd_u64(gcd_u64(m, b), other) != 1 {
                continue;
            }
            let (mi, bi, oi) = (BigInt::from(m), BigInt::from(b), BigInt::from(other));
            out.push(QuadForm { a: mi.clone(), b: bi.clone(), c: -oi.clone() });
            out.push(QuadForm { a: -mi, b: bi, c: oi });
        }
        b += 2;
    }
}

fn enumerate_big(d: &BigInt, s: &BigInt, out: &mut Vec<QuadForm>) {
    let two = BigInt::from(2);
    let mut b = if d.is_odd() { BigInt::one() } else { two.clone() };
    while &b <= s {
        let n = (d - &b * &b) / 4u32;
        let mut m = (s - &b) / &two + 1u32;
        let hi = (s + &b) / &two;
        while m <= hi {
            if n.is_multiple_of(&m) {
                let other = &n / &m;
                if m.gcd(&b).gcd(&other).is_one() {
                    out.push(QuadForm { a: m.clone(), b: b.clone(), c: -other.clone() });
                    out.push(QuadForm { a: -m.clone(), b: b.clone(), c: other });
                }
            }
            m += 1u32;
        }
        b += 2u32;
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// One rho orbit of reduced forms, i.e. one proper equivalence class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCycle {
    /// Cyclic order under [`rho_step`], starting at the smallest form with `a > 0`.
    pub forms: Vec<QuadForm>,
    /// [`form_root`] of `forms[0]`.
    pub root: Surd,
    /// Expansion of `root`; for a reduced form with `a > 0` the root lies in
    /// `(0, 1)`, so the preperiod is `[0]` and the period is that of `1/root`.
    pub expansion: CfExpansion,
}

impl ClassCycle {
    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn period(&self) -> &[BigInt] {
        &self.expansion.period
    }

    /// Determinant-one automorph fixing `root`; its trace is the `x` of the
    /// fundamental solution of `x^2 - D y^2 = 4`.
    pub fn automorph(&self) -> IntMatrix2 {
        self.expansion.automorph()
    }
}

/// Partition of the reduced forms of discriminant `d` into rho cycles.
///
/// The number of cycles is the narrow class number `h+(d)`. Cycles are
/// ordered by their first form.
pub fn class_cycles(d: &BigInt) -> Result<Vec<ClassCycle>> {
    let mut pending: BTreeSet<QuadForm> = enumerate_reduced_forms(d)?.into_iter().collect();
    let s = isqrt(d);
    let mut cycles = Vec::new();
    while let Some(first) = pending.pop_first() {
        let mut forms = alloc::vec![first.clone()];
        let mut cur = rho_unchecked(&first, d, &s);
        while cur != first {
            pending.remove(&cur);
            let next = rho_unchecked(&cur, d, &s);
            forms.push(cur);
            cur = next;
        }
        let start = forms
            .iter()
            .enumerate()
            .filter(|(_, f)| f.a.is_positive())
            .min_by(|x, y| x.1.cmp(y.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        forms.rotate_left(start);
        let root = form_root(&forms[0]);
        let expansion = cf_expand(&root);
        cycles.push(ClassCycle { forms, root, expansion });
    }
    cycles.sort_by(|x, y| x.forms[0].cmp(&y.forms[0]));
    Ok(cycles)
}

/// Narrow class number: the number of rho cycles.
pub fn narrow_class_number(d: &BigInt) -> Result<usize> {
    Ok(class_cycles(d)?.len())
}

/// Minimal positive solution of `x^2 - d y^2 = 4`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PellSolution {
    pub x: BigInt,
    pub y: BigInt,
}

impl PellSolution {
    /// `ln((x + y sqrt d)/2)`; computed as `ln x + ln((1 + sqrt(1 - 4/x^2))/2)`
    /// so that huge solutions do not overflow.
    pub fn ln_unit(&self) -> f64 {
        let lx = ln_big(&self.x);
        let inv_sq = libm::exp(-2.0 * lx);
        lx + libm::log((1.0 + libm::sqrt(1.0 - 4.0 * inv_sq)) / 2.0)
    }
}

/// `omega = (b0 + sqrt d)/2` with `b0` the largest integer below `sqrt d` of
/// the parity of `d`; it is reduced and generates the order of discriminant `d`.
pub fn principal_surd(d: &BigInt) -> Result<Surd> {
    ensure_valid(d)?;
    let s = isqrt(d);
    let b0 = if (&s - d).is_even() { s } else { s - 1 };
    Ok(Surd::from_parts(b0, BigInt::from(2), d.clone(), None))
}

/// Fundamental solution of `x^2 - d y^2 = 4` from the continued fraction of
/// the principal surd: the trace of its automorph is `x`.
pub fn pell4_fundamental(d: &BigInt) -> Result<PellSolution> {
    let omega = principal_surd(d)?;
    let exp = cf_expand(&omega);
    let x = exp.automorph().trace().abs();
    let y_sq = (&x * &x - 4u32) / d;
    let y = isqrt(&y_sq);
    debug_assert_eq!(&x * &x - d * &y * &y, BigInt::from(4));
    Ok(PellSolution { x, y })
}

/// `ln((x + y sqrt d)/2)` for the fundamental solution.
pub fn regulator(d: &BigInt) -> Result<f64> {
    Ok(pell4_fundamental(d)?.ln_unit())
}

/// Length `2 * regulator` of the closed geodesic attached to each class.
pub fn geodesic_length(d: &BigInt) -> Result<f64> {
    Ok(2.0 * regulator(d)?)
}
