//! Exact continued fractions of quadratic irrationals, cycles of indefinite
//! binary quadratic forms, and continued-fraction digit statistics.
//!
//! The crate is `no_std` with `alloc`. Everything touching continued-fraction
//! digits is exact integer arithmetic; floating point appears only in the
//! statistics, regulators, and the cross-section map.
//!
//! - [`surd`], [`matrix`], [`cf`]: surds `(p + sqrt d)/q`, Möbius action, and
//!   the PQa expansion with exact period detection.
//! - [`forms`], [`oracle`]: reduced forms, rho cycles (one per narrow class),
//!   the fundamental solution of `x^2 - d y^2 = 4`, and a brute-force
//!   equivalence search for cross-checking.
//! - [`gk`], [`ergodic`], [`xsection`], [`kuzmin`]: Gauss–Kuzmin masses, digit
//!   histograms and distances, Birkhoff averages, the return map on the
//!   cross-section, and Monte Carlo digit laws.

#![no_std]

extern crate alloc;

pub mod arith;
pub mod cf;
pub mod ergodic;
pub mod error;
pub mod forms;
pub mod gk;
pub mod kuzmin;
pub mod matrix;
pub mod oracle;
#[cfg(feature = "serde")]
mod serde_impl;
pub mod surd;
pub mod xsection;

pub use cf::{cf_expand, cf_step, convergents, is_reduced, CfExpansion};
pub use error::{Error, Result};
pub use forms::{
    class_cycles, enumerate_reduced_forms, form_root, is_fundamental_discriminant, is_reduced_form,
    is_valid_discriminant, pell4_fundamental, regulator, rho_step, ClassCycle, PellSolution, QuadForm,
};
pub use gk::{digit_stats, distribution_distance, gk_mass, gk_tail, DigitStats, Metric};
pub use matrix::{moebius_apply, IntMatrix2};
pub use oracle::{equivalence_oracle, Verdict};
pub use surd::{surd_normalize, Surd};
pub use xsection::{xsection_checks, xsection_map, XPoint};
