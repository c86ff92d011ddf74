//! The cross-section return map `(y, z) -> ({1/y}, y(1 - yz))` and checks of
//! its measure-theoretic properties.
//!
//! Points live in `D = {0 < y < 1, 0 < z < 1/(1+y)}`, which the map sends
//! into itself. Lebesgue area on `D` is invariant and its `y`-marginal is the
//! Gauss density `1/((1+y) ln 2)` after normalizing by `ln 2`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::float::FloatCore;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::ln_big;
use crate::cf::cf_step;
use crate::error::{Error, Result};
use crate::surd::Surd;

/// Natural coordinates of a point on the cross-section.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XPoint {
    y: f64,
    z: f64,
}

impl XPoint {
    pub fn new(y: f64, z: f64) -> Result<Self> {
        if !in_domain(y, z) {
            return Err(Error::OutsideDomain);
        }
        Ok(XPoint { y, z })
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }
}

pub fn in_domain(y: f64, z: f64) -> bool {
    y > 0.0 && y < 1.0 && z > 0.0 && z < 1.0 / (1.0 + y)
}

/// Signed distance-like margin to the boundary of `D`; negative outside.
pub fn domain_margin(y: f64, z: f64) -> f64 {
    y.min(1.0 - y).min(z).min(1.0 / (1.0 + y) - z)
}

const BOUNDARY_TOL: f64 = 1e-15;

/// `({1/y}, y(1 - yz))`, without the domain check on the input.
///
/// Fails with [`Error::Boundary`] when `1/y` is within `1e-15` (relative) of an
/// integer, where the fractional part jumps.
pub fn return_map(y: f64, z: f64) -> Result<(f64, f64)> {
    let inv = 1.0 / y;
    let digit = libm::floor(inv);
    let frac = inv - digit;
    let tol = BOUNDARY_TOL * inv.max(1.0);
    if frac <= tol || 1.0 - frac <= tol {
        return Err(Error::Boundary);
    }
    Ok((frac, y * (1.0 - y * z)))
}

pub fn xsection_map(p: XPoint) -> Result<XPoint> {
    let (y, z) = return_map(p.y, p.z)?;
    Ok(XPoint { y, z })
}

/// Analytic Jacobian `[[dy'/dy, dy'/dz], [dz'/dy, dz'/dz]]` at an interior point.
pub fn jacobian(y: f64, z: f64) -> [[f64; 2]; 2] {
    [[-1.0 / (y * y), 0.0], [1.0 - 2.0 * y * z, -(y * y)]]
}

pub fn jacobian_det(y: f64, z: f64) -> f64 {
    let j = jacobian(y, z);
    j[0][0] * j[1][1] - j[0][1] * j[1][0]
}

/// Gauss-measure mass of each of `bins` equal-width bins of `[0, 1]`.
pub fn gauss_bin_masses(bins: usize) -> Vec<f64> {
    (0..bins)
        .map(|i| {
            let lo = i as f64 / bins as f64;
            let hi = (i + 1) as f64 / bins as f64;
            libm::log((1.0 + hi) / (1.0 + lo)) / core::f64::consts::LN_2
        })
        .collect()
}

/// Sizes of the individual experiments run by [`run_checks`].
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct XsectionConfig {
    pub seed: u64,
    pub jacobian_points: usize,
    pub invariance_points: usize,
    pub contraction_pairs: usize,
    pub contraction_steps: usize,
    pub orbit_len: usize,
    pub orbit_start: (f64, f64),
    pub bins: usize,
}

impl XsectionConfig {
    /// Every experiment sized by `samples`, with at most 1000 contraction
    /// pairs of length 50 and an orbit started at `(pi - 3, 0.1)`.
    pub fn with_samples(samples: usize, seed: u64) -> Self {
        XsectionConfig {
            seed,
            jacobian_points: samples,
            invariance_points: samples,
            contraction_pairs: samples.min(1000),
            contraction_steps: 50,
            orbit_len: samples,
            orbit_start: (core::f64::consts::PI - 3.0, 0.1),
            bins: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct XsectionReport {
    pub config: XsectionConfig,
    /// Largest `|det J - 1|` over the sampled interior points.
    pub max_jacobian_error: f64,
    /// One-step images whose domain margin fell below `-1e-12`.
    pub invariance_violations: usize,
    /// Sampled points skipped because they sat on the boundary `1/y` integer.
    pub boundary_skips: usize,
    /// Smallest domain margin seen among one-step images.
    pub min_image_margin: f64,
    /// Largest relative error between `|dz_n / dz_0|` and `prod y_i^2`.
    pub max_contraction_error: f64,
    /// `y`-histogram of the long orbit.
    pub marginal_counts: Vec<u64>,
    /// Total variation between that histogram and the Gauss measure.
    pub marginal_tv: f64,
    /// Times the long orbit hit the boundary and was restarted from a fresh point.
    pub orbit_restarts: usize,
}

/// Runs every check with [`XsectionConfig::with_samples`].
pub fn xsection_checks(samples: usize, seed: u64) -> Result<XsectionReport> {
    if samples == 0 {
        return Err(Error::OutOfRange("samples must be positive"));
    }
    Ok(run_checks(&XsectionConfig::with_samples(samples, seed)))
}

fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Uniform point of `D` by rejection from the unit square.
pub fn sample_domain(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let y = open_unit(rng);
        let z = open_unit(rng);
        if in_domain(y, z) {
            return (y, z);
        }
    }
}

pub fn run_checks(cfg: &XsectionConfig) -> XsectionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut max_jacobian_error: f64 = 0.0;
    for _ in 0..cfg.jacobian_points {
        let (y, z) = sample_domain(&mut rng);
        max_jacobian_error = max_jacobian_error.max((jacobian_det(y, z) - 1.0).abs());
    }

    let mut violations = 0;
    let mut boundary_skips = 0;
    let mut min_margin = f64::INFINITY;
    for _ in 0..cfg.invariance_points {
        let (y, z) = sample_domain(&mut rng);
        match return_map(y, z) {
            Ok((y1, z1)) => {
                let m = domain_margin(y1, z1);
                min_margin = min_margin.min(m);
                if m < -1e-12 {
                    violations += 1;
                }
            }
            Err(_) => boundary_skips += 1,
        }
    }

    let mut max_contraction_error: f64 = 0.0;
    for _ in 0..cfg.contraction_pairs {
        let err = loop {
            let (y, z1) = sample_domain(&mut rng);
            let z2 = open_unit(&mut rng) / (1.0 + y);
            if z1 == z2 {
                continue;
            }
            if let Some(e) = contraction_error(y, z1, z2, cfg.contraction_steps) {
                break e;
            }
        };
        max_contraction_error = max_contraction_error.max(err);
    }

    let (marginal_counts, orbit_restarts) = orbit_histogram(cfg, &mut rng);
    let masses = gauss_bin_masses(cfg.bins);
    let n = marginal_counts.iter().sum::<u64>().max(1) as f64;
    let marginal_tv = 0.5
        * marginal_counts
            .iter()
            .zip(&masses)
            .map(|(&c, &m)| (c as f64 / n - m).abs())
            .sum::<f64>();

    XsectionReport {
        config: *cfg,
        max_jacobian_error,
        invariance_violations: violations,
        boundary_skips,
        min_image_margin: min_margin,
        max_contraction_error,
        marginal_counts,
        marginal_tv,
        orbit_restarts,
    }
}

/// Exact dyadic rational `mantissa * 2^exp`.
#[derive(Clone, Debug)]
struct Dyadic {
    mantissa: BigInt,
    exp: i64,
}

impl Dyadic {
    fn from_f64(v: f64) -> Self {
        let (m, e, sign) = v.integer_decode();
        Dyadic { mantissa: BigInt::from(m) * i64::from(sign), exp: i64::from(e) }
    }

    fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic { mantissa: &self.mantissa * &o.mantissa, exp: self.exp + o.exp }
    }

    fn sub(&self, o: &Dyadic) -> Dyadic {
        let exp = self.exp.min(o.exp);
        let a = &self.mantissa << (self.exp - exp) as u64;
        let b = &o.mantissa << (o.exp - exp) as u64;
        Dyadic { mantissa: a - b, exp }
    }

    // ln |self|; None for zero
    fn ln_abs(&self) -> Option<f64> {
        if self.mantissa.is_zero() {
            return None;
        }
        Some(ln_big(&self.mantissa.abs()) + self.exp as f64 * core::f64::consts::LN_2)
    }
}

/// Relative error between the exact fiber separation after `steps` iterations
/// and `prod y_i^2` accumulated in floating point.
///
/// Both orbits share the floating-point `y` sequence; the `z` coordinates are
/// iterated exactly on those `y` values (all dyadic rationals), because the
/// separation shrinks far below the `f64` resolution of `z` itself. Returns
/// `None` if the `y` orbit hits the boundary.
pub fn contraction_error(y0: f64, z1: f64, z2: f64, steps: usize) -> Option<f64> {
    let mut y = y0;
    let mut za = Dyadic::from_f64(z1);
    let mut zb = Dyadic::from_f64(z2);
    let ln_dz0 = za.sub(&zb).ln_abs()?;
    let mut log_prod = 0.0;
    for _ in 0..steps {
        let yd = Dyadic::from_f64(y);
        let y2 = yd.mul(&yd);
        za = yd.sub(&y2.mul(&za));
        zb = yd.sub(&y2.mul(&zb));
        log_prod += 2.0 * libm::log(y);
        let (y1, _) = return_map(y, 0.0).ok()?;
        y = y1;
    }
    let ln_ratio = za.sub(&zb).ln_abs()? - ln_dz0;
    Some(libm::expm1(ln_ratio - log_prod).abs())
}

fn orbit_histogram(cfg: &XsectionConfig, rng: &mut ChaCha8Rng) -> (Vec<u64>, usize) {
    let mut counts = alloc::vec![0u64; cfg.bins];
    let mut restarts = 0;
    let (mut y, mut z) = cfg.orbit_start;
    for _ in 0..cfg.orbit_len {
        match return_map(y, z) {
            Ok((y1, z1)) => {
                y = y1;
                z = z1;
            }
            Err(_) => {
                restarts += 1;
                (y, z) = sample_domain(rng);
            }
        }
        let bin = ((y * cfg.bins as f64) as usize).min(cfg.bins - 1);
        counts[bin] += 1;
    }
    (counts, restarts)
}

/// Orbit of the map whose `y` coordinates are the exact Gauss-map orbit of the
/// fractional part of `x` (evaluated to `f64` per step), starting at `z0`.
///
/// Exact `y` values avoid the chaotic drift of a floating-point `y` orbit, so
/// the `z` coordinate can be compared against the periodic structure of `x`.
pub fn shadow_orbit(x: &Surd, z0: f64, steps: usize) -> Result<Vec<XPoint>> {
    let mut state = cf_step(x).1;
    let mut y = 1.0 / state.to_f64();
    let mut p = XPoint::new(y, z0)?;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(p);
    for _ in 0..steps {
        let z = y * (1.0 - y * p.z);
        state = cf_step(&state).1;
        y = 1.0 / state.to_f64();
        p = XPoint { y, z };
        out.push(p);
    }
    Ok(out)
}

/// Digits `floor(1/y)` along a floating-point orbit of the map.
pub fn orbit_digits(start: XPoint, steps: usize) -> Result<Vec<u64>> {
    let mut p = start;
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        out.push(libm::floor(1.0 / p.y) as u64);
        p = xsection_map(p)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::cf_expand;
    use num_traits::ToPrimitive;

    #[test]
    fn map_examples() {
        let p = xsection_map(XPoint::new(0.4, 0.5).unwrap()).unwrap();
        assert!((p.y() - 0.5).abs() < 1e-15);
        assert!((p.z() - 0.32).abs() < 1e-15);

        let ys = (libm::sqrt(5.0) - 1.0) / 2.0;
        let zs = 1.0 / libm::sqrt(5.0);
        assert!((zs - ys / (1.0 + ys * ys)).abs() < 1e-15);
        let p = xsection_map(XPoint::new(ys, zs).unwrap()).unwrap();
        assert!((p.y() - ys).abs() < 1e-14);
        assert!((p.z() - zs).abs() < 1e-14);
    }

    #[test]
    fn fiber_is_affine_with_slope_minus_y_squared() {
        let y = 0.37;
        let (_, z1) = return_map(y, 0.1).unwrap();
        let (_, z2) = return_map(y, 0.3).unwrap();
        assert!(((z2 - z1) / 0.2 + y * y).abs() < 1e-12);
    }

    #[test]
    fn rejects_boundary_and_outside() {
        assert_eq!(return_map(0.5, 0.1), Err(Error::Boundary));
        assert_eq!(return_map(0.25, 0.1), Err(Error::Boundary));
        assert_eq!(XPoint::new(0.5, 0.9), Err(Error::OutsideDomain));
        assert_eq!(XPoint::new(1.0, 0.1), Err(Error::OutsideDomain));
        assert_eq!(XPoint::new(0.2, 0.0), Err(Error::OutsideDomain));
    }

    #[test]
    fn jacobian_is_unimodular() {
        for &(y, z) in &[(0.1, 0.5), (0.9, 0.2), (1e-6, 0.3), (0.5, 0.66)] {
            assert!((jacobian_det(y, z) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let (y, z) = (0.3123, 0.411);
        let h = 1e-7;
        let j = jacobian(y, z);
        let (a, b) = return_map(y + h, z).unwrap();
        let (c, e) = return_map(y - h, z).unwrap();
        assert!(((a - c) / (2.0 * h) - j[0][0]).abs() < 1e-4);
        assert!(((b - e) / (2.0 * h) - j[1][0]).abs() < 1e-6);
        let (_, b) = return_map(y, z + h).unwrap();
        let (_, e) = return_map(y, z - h).unwrap();
        assert!(((b - e) / (2.0 * h) - j[1][1]).abs() < 1e-6);
    }

    #[test]
    fn small_check_run() {
        let r = xsection_checks(2000, 7).unwrap();
        assert!(r.max_jacobian_error < 1e-12);
        assert_eq!(r.invariance_violations, 0);
        assert!(r.max_contraction_error < 1e-9);
        assert_eq!(r.marginal_counts.iter().sum::<u64>(), 2000);
        assert!(r.marginal_tv < 0.2);
        assert_eq!(xsection_checks(2000, 7).unwrap(), r);
    }

    #[test]
    fn bin_masses_sum_to_one() {
        let s: f64 = gauss_bin_masses(100).iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn y_digits_follow_period() {
        // (4 + sqrt 19)/3 is reduced; y_0 is its fractional part
        let x = Surd::from_i64(4, 3, 19).unwrap();
        let e = cf_expand(&x);
        assert!(e.preperiod.is_empty());
        let y0 = x.to_f64() - libm::floor(x.to_f64());
        let digits = orbit_digits(XPoint::new(y0, 0.2).unwrap(), 8).unwrap();
        let per: alloc::vec::Vec<u64> = e.period.iter().map(|a| a.to_u64().unwrap()).collect();
        for (i, d) in digits.iter().enumerate() {
            assert_eq!(*d, per[(i + 1) % per.len()], "step {i}");
        }
    }

    #[test]
    fn shadow_orbit_becomes_periodic() {
        let x = Surd::from_i64(0, 1, 7).unwrap();
        let tail = cf_step(&x).1;
        let l = cf_expand(&tail).period.len();
        let orbit = shadow_orbit(&tail, 0.05, 200).unwrap();
        for w in orbit[100..].windows(l + 1) {
            assert!((w[0].z() - w[l].z()).abs() < 1e-9);
            assert!((w[0].y() - w[l].y()).abs() < 1e-12);
        }
        assert!(orbit.iter().all(|p| in_domain(p.y(), p.z())));
    }
}
