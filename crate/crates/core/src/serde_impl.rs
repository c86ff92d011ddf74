//! JSON shapes: surds as `{"p", "q", "d"}` and forms as `[a, b, c]`, every
//! integer a decimal string so no precision is lost.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cf::CfExpansion;
use crate::forms::QuadForm;
use crate::gk::DigitStats;
use crate::surd::Surd;

fn parse<E: serde::de::Error>(s: &str) -> Result<BigInt, E> {
    BigInt::from_str(s).map_err(|_| E::custom("expected a decimal integer string"))
}

#[derive(Serialize, Deserialize)]
struct SurdRepr {
    p: String,
    q: String,
    d: String,
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SurdRepr { p: self.p().to_string(), q: self.q().to_string(), d: self.d().to_string() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Surd {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let r = SurdRepr::deserialize(de)?;
        Surd::new(parse(&r.p)?, parse(&r.q)?, parse(&r.d)?).map_err(D::Error::custom)
    }
}

impl Serialize for QuadForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let [a, b, c] = self.coefficients();
        [a.to_string(), b.to_string(), c.to_string()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadForm {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let [a, b, c] = <[String; 3]>::deserialize(de)?;
        QuadForm::new(parse(&a)?, parse(&b)?, parse(&c)?).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct ExpansionRepr {
    preperiod: Vec<String>,
    period: Vec<String>,
}

impl Serialize for CfExpansion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strs = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect();
        ExpansionRepr { preperiod: strs(&self.preperiod), period: strs(&self.period) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CfExpansion {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let r = ExpansionRepr::deserialize(de)?;
        let ints = |v: Vec<String>| v.iter().map(|x| parse::<D::Error>(x)).collect::<Result<Vec<_>, _>>();
        let period = ints(r.period)?;
        if period.is_empty() {
            return Err(D::Error::custom("period must be nonempty"));
        }
        Ok(CfExpansion { preperiod: ints(r.preperiod)?, period })
    }
}

#[derive(Serialize, Deserialize)]
struct StatsRepr {
    counts: Vec<u64>,
    tail: u64,
    total: u64,
}

impl Serialize for DigitStats {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        StatsRepr { counts: self.counts().to_vec(), tail: self.tail_count(), total: self.total() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DigitStats {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let r = StatsRepr::deserialize(de)?;
        DigitStats::from_parts(r.counts, r.tail, r.total).map_err(D::Error::custom)
    }
}
