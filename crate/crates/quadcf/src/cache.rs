//! JSON-lines cache of per-discriminant class data.
//!
//! One entry per line, keyed by `d`. Lines with a different schema version
//! are dropped and the file is rewritten on the next flush; lines that fail
//! to parse or validate are skipped and counted. Only one process may write
//! a cache file at a time.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use quadcf_core::{PellSolution, QuadForm};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::ClassData;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Entry {
    version: u32,
    d: String,
    cycles: Vec<Vec<QuadForm>>,
    periods: Vec<Vec<String>>,
    pell: [String; 2],
}

#[derive(Deserialize)]
struct Header {
    version: u32,
}

impl Entry {
    fn from_data(data: &ClassData) -> Self {
        Entry {
            version: SCHEMA_VERSION,
            d: data.d.to_string(),
            cycles: data.cycles.clone(),
            periods: data.periods.iter().map(|p| p.iter().map(ToString::to_string).collect()).collect(),
            pell: [data.pell.x.to_string(), data.pell.y.to_string()],
        }
    }

    fn into_data(self) -> Option<ClassData> {
        let int = |s: &str| s.parse::<BigInt>().ok();
        let d = int(&self.d)?;
        let periods = self
            .periods
            .iter()
            .map(|p| p.iter().map(|a| int(a)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        let pell = PellSolution { x: int(&self.pell[0])?, y: int(&self.pell[1])? };
        let ok = !self.cycles.is_empty()
            && self.cycles.len() == periods.len()
            && self.cycles.iter().flatten().all(|f| f.discriminant() == d)
            && periods.iter().all(|p| !p.is_empty())
            && &pell.x * &pell.x - &d * &pell.y * &pell.y == BigInt::from(4);
        ok.then_some(ClassData { d, cycles: self.cycles, periods, pell })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub loaded: usize,
    pub stale: usize,
    pub corrupt: usize,
    pub hits: usize,
    pub misses: usize,
}

pub struct Cache {
    path: PathBuf,
    entries: BTreeMap<BigInt, ClassData>,
    pending: Vec<BigInt>,
    rewrite: bool,
    pub stats: CacheStats,
}

impl Cache {
    /// Loads `path`; a missing file is an empty cache.
    pub fn open(path: &Path) -> Result<Self> {
        let mut cache = Cache {
            path: path.to_path_buf(),
            entries: BTreeMap::new(),
            pending: Vec::new(),
            rewrite: false,
            stats: CacheStats::default(),
        };
        let bytes = match fs::read(path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(Error::io(path, e)),
        };
        let text = String::from_utf8_lossy(&bytes);
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            match serde_json::from_str::<Header>(line) {
                Ok(h) if h.version != SCHEMA_VERSION => cache.stats.stale += 1,
                Ok(_) => match serde_json::from_str::<Entry>(line).ok().and_then(Entry::into_data) {
                    Some(data) => {
                        cache.entries.insert(data.d.clone(), data);
                        cache.stats.loaded += 1;
                    }
                    None => cache.stats.corrupt += 1,
                },
                Err(_) => cache.stats.corrupt += 1,
            }
        }
        if cache.stats.corrupt > 0 {
            log::warn!("{}: skipped {} corrupt cache lines", path.display(), cache.stats.corrupt);
        }
        if cache.stats.stale > 0 {
            log::info!("{}: dropped {} entries from another schema version", path.display(), cache.stats.stale);
        }
        cache.rewrite = cache.stats.corrupt > 0 || cache.stats.stale > 0 || !(bytes.is_empty() || bytes.ends_with(b"\n"));
        Ok(cache)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&mut self, d: &BigInt) -> Option<&ClassData> {
        let hit = self.entries.get(d);
        if hit.is_some() {
            self.stats.hits += 1;
        } else {
            self.stats.misses += 1;
        }
        hit
    }

    pub fn insert(&mut self, data: ClassData) {
        let d = data.d.clone();
        if self.entries.insert(d.clone(), data).is_none() {
            self.pending.push(d);
        }
    }

    /// Appends new entries, or rewrites the whole file when it held stale or
    /// damaged lines.
    pub fn flush(&mut self) -> Result<()> {
        if self.rewrite {
            let tmp = self.path.with_extension("tmp");
            self.write_lines(File::create(&tmp).map_err(|e| Error::io(&tmp, e))?, self.entries.values(), &tmp)?;
            fs::rename(&tmp, &self.path).map_err(|e| Error::io(&self.path, e))?;
        } else if !self.pending.is_empty() {
            let file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(&self.path)
                .map_err(|e| Error::io(&self.path, e))?;
            let new = self.pending.iter().map(|d| &self.entries[d]);
            self.write_lines(file, new, &self.path)?;
        }
        self.pending.clear();
        self.rewrite = false;
        Ok(())
    }

    fn write_lines<'a>(&self, file: File, items: impl Iterator<Item = &'a ClassData>, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(file);
        for data in items {
            serde_json::to_writer(&mut w, &Entry::from_data(data)).map_err(|e| Error::io(path, e))?;
            w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}
