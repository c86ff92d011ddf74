//! Range sweeps with class-number and fundamentality filters.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use quadcf_core::arith::is_square;
use quadcf_core::gk::DEFAULT_DIGIT_CAP;
use quadcf_core::{is_fundamental_discriminant, is_valid_discriminant};
use rayon::prelude::*;
use serde::Serialize;

use crate::cache::{Cache, CacheStats};
use crate::error::{Error, Result};
use crate::record::{record_from_class_data, sqrt_record, ClassData, SweepRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Sweep `n` and report the period of `sqrt n`.
    Sqrt,
    /// Sweep discriminants and pool every class.
    Discriminant,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub min: u64,
    pub max: u64,
    /// Only records with `h_plus <= class_cap` are emitted.
    pub class_cap: usize,
    pub fundamental_only: bool,
    pub digit_cap: usize,
    pub mode: Mode,
    pub out_csv: Option<PathBuf>,
    pub out_jsonl: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    /// Worker threads; 0 picks the number of CPUs.
    pub jobs: usize,
    /// Unused: sweeps are deterministic. Kept so every subcommand accepts one.
    pub seed: u64,
}

impl SweepConfig {
    pub fn new(min: u64, max: u64) -> Self {
        SweepConfig {
            min,
            max,
            class_cap: 8,
            fundamental_only: false,
            digit_cap: DEFAULT_DIGIT_CAP,
            mode: Mode::Discriminant,
            out_csv: None,
            out_jsonl: None,
            cache: None,
            jobs: 0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min > self.max {
            return Err(Error::Input(format!("empty range: min {} > max {}", self.min, self.max)));
        }
        if self.class_cap == 0 {
            return Err(Error::Input("class cap must be at least 1".into()));
        }
        if self.digit_cap == 0 {
            return Err(Error::Input("digit cap must be at least 1".into()));
        }
        Ok(())
    }
}

/// Mean statistics of the records whose sweep key lies in `[lo, hi)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bucket {
    pub lo: u64,
    pub hi: u64,
    pub count: usize,
    pub mean_agg_tv: f64,
    pub mean_max_cycle_tv: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub mode: Mode,
    /// Candidates passing the validity and fundamentality tests.
    pub candidates: usize,
    pub records: usize,
    pub over_class_cap: usize,
    pub cache: Option<CacheStats>,
    pub buckets: Vec<Bucket>,
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let key = if self.mode == Mode::Sqrt { "n" } else { "d" };
        writeln!(f, "candidates {}, records {}, over class cap {}", self.candidates, self.records, self.over_class_cap)?;
        if let Some(c) = &self.cache {
            writeln!(f, "cache: {} hits, {} misses, {} stale, {} corrupt", c.hits, c.misses, c.stale, c.corrupt)?;
        }
        if self.records == 0 {
            return writeln!(f, "no records");
        }
        writeln!(f, "{:>22} {:>7} {:>12} {:>14}", format!("{key} range"), "count", "mean agg_tv", "mean max_cyc_tv")?;
        for b in &self.buckets {
            writeln!(
                f,
                "{:>22} {:>7} {:>12.6} {:>14.6}",
                format!("[{}, {})", b.lo, b.hi),
                b.count,
                b.mean_agg_tv,
                b.mean_max_cycle_tv
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
    pub summary: Summary,
}

/// `n` in sqrt mode, `d` otherwise.
pub fn sweep_key(r: &SweepRecord) -> &BigInt {
    r.n.as_ref().unwrap_or(&r.d)
}

/// Means over consecutive ranges `[edges[i], edges[i+1])`; empty ranges are
/// omitted.
pub fn bucket_means(records: &[SweepRecord], edges: &[u64]) -> Vec<Bucket> {
    edges
        .windows(2)
        .filter_map(|w| {
            let (lo, hi) = (BigInt::from(w[0]), BigInt::from(w[1]));
            let inside: Vec<&SweepRecord> =
                records.iter().filter(|r| (&lo..&hi).contains(&sweep_key(r))).collect();
            if inside.is_empty() {
                return None;
            }
            let n = inside.len() as f64;
            Some(Bucket {
                lo: w[0],
                hi: w[1],
                count: inside.len(),
                mean_agg_tv: inside.iter().map(|r| r.agg_tv).sum::<f64>() / n,
                mean_max_cycle_tv: inside.iter().map(|r| r.max_cycle_tv).sum::<f64>() / n,
            })
        })
        .collect()
}

/// Buckets `[2^k, 2^(k+1))` covering `[min, max]`.
pub fn dyadic_buckets(records: &[SweepRecord], min: u64, max: u64) -> Vec<Bucket> {
    let mut edges = vec![];
    let mut e = if min <= 1 { 1 } else { 1u64 << (63 - min.leading_zeros()) };
    loop {
        edges.push(e);
        if e > max {
            break;
        }
        match e.checked_mul(2) {
            Some(next) => e = next,
            None => {
                edges.push(u64::MAX);
                break;
            }
        }
    }
    bucket_means(records, &edges)
}

// (sweep key, discriminant) pairs passing the cheap filters
fn candidates(cfg: &SweepConfig) -> Result<Vec<(BigInt, BigInt)>> {
    let mut out = vec![];
    for k in cfg.min..=cfg.max {
        let key = BigInt::from(k);
        let d = match cfg.mode {
            Mode::Discriminant if is_valid_discriminant(&key) => key.clone(),
            Mode::Sqrt if k > 1 && !is_square(&key) => &key * 4,
            _ => continue,
        };
        if cfg.fundamental_only && !is_fundamental_discriminant(&d)? {
            continue;
        }
        out.push((key, d));
    }
    Ok(out)
}

fn build_record(cfg: &SweepConfig, key: &BigInt, data: &ClassData) -> Result<SweepRecord> {
    match cfg.mode {
        Mode::Discriminant => record_from_class_data(data, cfg.digit_cap),
        Mode::Sqrt => sqrt_record(key, data, cfg.digit_cap),
    }
}

/// Runs the sweep and writes the configured outputs.
///
/// Work is spread over a thread pool, but records are always emitted in
/// ascending order of the sweep key, so outputs are reproducible byte for
/// byte. If a computation fails, records before it are still written and
/// both files end with a status line marking them incomplete.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    let cands = candidates(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Input(format!("cannot start worker pool: {e}")))?;

    let mut cache = cfg.cache.as_deref().map(Cache::open).transpose()?;
    let mut known: Vec<Option<ClassData>> = cands
        .iter()
        .map(|(_, d)| cache.as_mut().and_then(|c| c.get(d).cloned()))
        .collect();
    let missing: Vec<usize> = (0..cands.len()).filter(|&i| known[i].is_none()).collect();
    let computed: Vec<Result<ClassData>> =
        pool.install(|| missing.par_iter().map(|&i| ClassData::compute(&cands[i].1)).collect());

    let mut failure = None;
    for (i, res) in missing.into_iter().zip(computed) {
        match res {
            Ok(data) => {
                if let Some(c) = cache.as_mut() {
                    c.insert(data.clone());
                }
                known[i] = Some(data);
            }
            Err(e) => {
                failure.get_or_insert((i, e));
            }
        }
    }
    if let Some(c) = cache.as_mut() {
        c.flush()?;
    }

    // records strictly before the first failure
    let upto = failure.as_ref().map_or(cands.len(), |(i, _)| *i);
    let mut error = failure.map(|(_, e)| e);
    let built: Vec<Result<SweepRecord>> = pool.install(|| {
        (0..upto)
            .into_par_iter()
            .map(|i| build_record(cfg, &cands[i].0, known[i].as_ref().expect("computed above")))
            .collect()
    });
    let mut records = vec![];
    let mut over_class_cap = 0;
    for r in built {
        match r {
            Ok(r) if r.h_plus <= cfg.class_cap => records.push(r),
            Ok(_) => over_class_cap += 1,
            Err(e) => {
                error = Some(e);
                break;
            }
        }
    }

    let status = error.as_ref().map(ToString::to_string);
    write_outputs(cfg, &records, status.as_deref())?;
    if let Some(e) = error {
        return Err(e);
    }
    let summary = Summary {
        mode: cfg.mode,
        candidates: cands.len(),
        records: records.len(),
        over_class_cap,
        cache: cache.map(|c| c.stats),
        buckets: dyadic_buckets(&records, cfg.min, cfg.max),
    };
    Ok(SweepOutcome { records, summary })
}

fn write_outputs(cfg: &SweepConfig, records: &[SweepRecord], status: Option<&str>) -> Result<()> {
    if let Some(p) = &cfg.out_csv {
        write_csv(p, records, status)?;
    }
    if let Some(p) = &cfg.out_jsonl {
        write_jsonl(p, records, status)?;
    }
    Ok(())
}

pub const CSV_HEADER: [&str; 7] = ["d", "fundamental", "h_plus", "total_period", "regulator", "agg_tv", "max_cycle_tv"];

/// CSV summary; a failed sweep ends with a `# incomplete: ...` line.
pub fn write_csv(path: &Path, records: &[SweepRecord], status: Option<&str>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    w.write_record(CSV_HEADER).map_err(|e| Error::io(path, e))?;
    for r in records {
        w.serialize((r.d.to_string(), r.fundamental, r.h_plus, r.total_period, r.regulator, r.agg_tv, r.max_cycle_tv))
            .map_err(|e| Error::io(path, e))?;
    }
    let mut inner = w.into_inner().map_err(|e| Error::io(path, e.into_error()))?;
    if let Some(s) = status {
        writeln!(inner, "# incomplete: {s}").map_err(|e| Error::io(path, e))?;
    }
    inner.flush().map_err(|e| Error::io(path, e))
}

#[derive(Serialize)]
struct StatusLine<'a> {
    status: &'static str,
    error: &'a str,
}

fn json_line<T: Serialize>(w: &mut impl Write, v: &T, path: &Path) -> Result<()> {
    serde_json::to_writer(&mut *w, v).map_err(|e| Error::io(path, e))?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))
}

/// One JSON record per line; a failed sweep ends with
/// `{"status":"incomplete","error":...}`.
pub fn write_jsonl(path: &Path, records: &[SweepRecord], status: Option<&str>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for r in records {
        json_line(&mut w, r, path)?;
    }
    if let Some(error) = status {
        json_line(&mut w, &StatusLine { status: "incomplete", error }, path)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
