//! Sweeps, caching and file formats on top of `quadcf-core`.

pub mod cache;
pub mod error;
pub mod histogram;
pub mod record;
pub mod sweep;

pub use error::{Error, Result};
pub use record::{aggregate_discriminant, sqrt_stats, ClassData, SweepRecord};
pub use sweep::{run_sweep, Mode, SweepConfig, SweepOutcome, Summary};
