use core::fmt;

use num_bigint::BigInt;

/// Errors raised by the exact arithmetic and dynamics routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The radicand of a surd must be positive.
    NonPositiveRadicand(BigInt),
    /// The radicand of a surd is a perfect square, so the value is rational.
    SquareRadicand(BigInt),
    /// Surd denominator was zero.
    ZeroDenominator,
    /// Matrix determinant is not +1 or -1.
    NotUnimodular,
    /// Not a positive, non-square integer congruent to 0 or 1 mod 4.
    InvalidDiscriminant(BigInt),
    /// Form coefficients violate the primitive indefinite form invariants.
    InvalidForm(&'static str),
    /// Operation needs a reduced form.
    NotReduced,
    /// Two forms were expected to share a discriminant.
    DiscriminantMismatch,
    /// A numeric argument is outside its permitted range.
    OutOfRange(&'static str),
    /// Point lies on the measure-zero boundary where the return map is undefined.
    Boundary,
    /// Point lies outside the cross-section domain.
    OutsideDomain,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPositiveRadicand(d) => write!(f, "radicand {d} is not positive"),
            Error::SquareRadicand(d) => write!(f, "radicand {d} is a perfect square"),
            Error::ZeroDenominator => f.write_str("denominator is zero"),
            Error::NotUnimodular => f.write_str("matrix determinant is not +-1"),
            Error::InvalidDiscriminant(d) => write!(f, "{d} is not a valid discriminant"),
            Error::InvalidForm(why) => write!(f, "invalid quadratic form: {why}"),
            Error::NotReduced => f.write_str("form is not reduced"),
            Error::DiscriminantMismatch => f.write_str("forms have different discriminants"),
            Error::OutOfRange(what) => write!(f, "argument out of range: {what}"),
            Error::Boundary => f.write_str("point on the boundary of the cross-section"),
            Error::OutsideDomain => f.write_str("point outside the cross-section domain"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
