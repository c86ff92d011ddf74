//! Per-discriminant digit statistics pooled over all form classes.

use num_bigint::BigInt;
use quadcf_core::gk::total_variation;
use quadcf_core::{
    cf_expand, class_cycles, distribution_distance, is_fundamental_discriminant, pell4_fundamental, DigitStats,
    Metric, PellSolution, QuadForm, Surd,
};
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Everything about a discriminant that does not depend on the digit cap;
/// this is what the cache stores.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassData {
    pub d: BigInt,
    /// Rho cycles, one per narrow class.
    pub cycles: Vec<Vec<QuadForm>>,
    /// Continued-fraction period of each cycle's root, in the same order.
    pub periods: Vec<Vec<BigInt>>,
    pub pell: PellSolution,
}

impl ClassData {
    pub fn compute(d: &BigInt) -> Result<Self> {
        let cycles = class_cycles(d)?;
        let pell = pell4_fundamental(d)?;
        Ok(ClassData {
            d: d.clone(),
            periods: cycles.iter().map(|c| c.period().to_vec()).collect(),
            cycles: cycles.into_iter().map(|c| c.forms).collect(),
            pell,
        })
    }

    pub fn h_plus(&self) -> usize {
        self.cycles.len()
    }

    /// Class number in the wide sense. Periods are odd exactly when a unit
    /// of norm -1 exists, and then the narrow and wide groups coincide.
    pub fn h(&self) -> usize {
        match self.periods.first() {
            Some(p) if p.len() % 2 == 1 => self.h_plus(),
            _ => self.h_plus() / 2,
        }
    }
}

/// One line of sweep output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    #[serde(with = "decimal")]
    pub d: BigInt,
    /// Set in sqrt mode: the record describes `sqrt n`, and `d = 4n`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "decimal_opt")]
    pub n: Option<BigInt>,
    pub fundamental: bool,
    pub h_plus: usize,
    pub h: usize,
    /// Number of cycles pooled into `agg_stats`.
    pub cycle_count: usize,
    pub total_period: u64,
    pub regulator: f64,
    pub geodesic_length: f64,
    pub agg_stats: DigitStats,
    pub per_cycle_tv: Vec<f64>,
    pub agg_tv: f64,
    pub agg_chi2: f64,
    pub max_cycle_tv: f64,
}

fn period_stats(period: &[BigInt], cap: usize) -> Result<DigitStats> {
    let mut s = DigitStats::new(cap)?;
    for a in period {
        s.push_big(a)?;
    }
    Ok(s)
}

fn build(data: &ClassData, n: Option<&BigInt>, periods: &[&[BigInt]], cap: usize) -> Result<SweepRecord> {
    let mut agg = DigitStats::new(cap)?;
    let mut per_cycle_tv = Vec::with_capacity(periods.len());
    for p in periods {
        let s = period_stats(p, cap)?;
        per_cycle_tv.push(total_variation(&s)?);
        agg.merge(&s)?;
    }
    let regulator = data.pell.ln_unit();
    Ok(SweepRecord {
        d: data.d.clone(),
        n: n.cloned(),
        fundamental: is_fundamental_discriminant(&data.d)?,
        h_plus: data.h_plus(),
        h: data.h(),
        cycle_count: periods.len(),
        total_period: periods.iter().map(|p| p.len() as u64).sum(),
        regulator,
        geodesic_length: 2.0 * regulator,
        agg_tv: total_variation(&agg)?,
        agg_chi2: distribution_distance(&agg, Metric::ChiSquare)?,
        max_cycle_tv: per_cycle_tv.iter().copied().fold(0.0, f64::max),
        per_cycle_tv,
        agg_stats: agg,
    })
}

/// Pools the periods of every cycle of discriminant `data.d`.
pub fn record_from_class_data(data: &ClassData, cap: usize) -> Result<SweepRecord> {
    let periods: Vec<&[BigInt]> = data.periods.iter().map(Vec::as_slice).collect();
    build(data, None, &periods, cap)
}

pub fn aggregate_discriminant(d: &BigInt, cap: usize) -> Result<SweepRecord> {
    record_from_class_data(&ClassData::compute(d)?, cap)
}

/// Statistics of the single period of `sqrt n`, with class data of `4n`
/// (supplied by the caller so it can come from a cache).
pub fn sqrt_record(n: &BigInt, data: &ClassData, cap: usize) -> Result<SweepRecord> {
    let e = cf_expand(&Surd::sqrt(n.clone())?);
    build(data, Some(n), &[&e.period], cap)
}

pub fn sqrt_stats(n: &BigInt, cap: usize) -> Result<SweepRecord> {
    // validates n before the class computation
    Surd::sqrt(n.clone())?;
    sqrt_record(n, &ClassData::compute(&(n * 4))?, cap)
}

mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
        String::deserialize(de)?.parse().map_err(D::Error::custom)
    }
}

mod decimal_opt {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<BigInt>, D::Error> {
        Option::<String>::deserialize(de)?.map(|s| s.parse().map_err(D::Error::custom)).transpose()
    }
}
