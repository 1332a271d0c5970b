//! Exhaustive count of actual coordinates by norm.
//!
//! Work is split by s-vector and run on a rayon pool. Inside one s-vector
//! the a-tuples are walked zone by zone, left to right. After zone `i` only
//! the component labels of the points on `L_i` are kept. A component that
//! has no point on `L_i` can never reach the endpoint on `L_n`, so every
//! completion of that prefix is non-actual and the whole subtree is skipped.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coords::{enumerate_s_vectors, odometer_step, SVector};
use crate::diagram::{for_each_zone_arc, ActualityChecker};
use crate::partition::Partition;

/// Environment variable read when no thread count is given explicitly.
pub const THREADS_ENV: &str = "CENSUS_THREADS";

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("strand count must be at least 1")]
    NoStrands,
    #[error("count overflow for n = {n}, k = {k}")]
    Overflow { n: usize, k: u32 },
    #[error("cache conflict for n = {n}, k = {k}: stored g = {stored}, new g = {new}")]
    CacheConflict { n: usize, k: u32, stored: u64, new: u64 },
    #[error("{path}:{line}: {reason}")]
    CacheParse { path: String, line: usize, reason: String },
    #[error("invalid thread count {0:?}")]
    Threads(String),
    #[error("thread pool: {0}")]
    Pool(String),
    #[error("cache i/o: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Plain,
    /// Reversal and vertical-reflection symmetries are used to skip
    /// mirror images.
    Pruned,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Plain => "plain",
            Self::Pruned => "pruned",
        })
    }
}

/// How a single s-vector is processed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Engine {
    /// Zone-by-zone walk with dead-prefix cut-off.
    #[default]
    Frontier,
    /// One connectivity check per a-tuple.
    Direct,
}

impl Engine {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Frontier => "frontier",
            Self::Direct => "direct",
        }
    }

    pub fn version(&self) -> String {
        format!("{}-{}", env!("CARGO_PKG_VERSION"), self.name())
    }
}

#[derive(Debug, Clone, Default)]
pub struct CensusOptions {
    /// Worker count; falls back to `CENSUS_THREADS`, then to rayon's default.
    pub threads: Option<usize>,
    pub mode: Mode,
    pub engine: Engine,
    pub cache: Option<PathBuf>,
    /// Progress lines on standard error.
    pub progress: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub n: usize,
    pub k: u32,
    pub g: u64,
    pub mode: Mode,
    pub engine_version: String,
    pub elapsed_ms: u64,
    /// Virtual tuples covered (counting skipped ones).
    #[serde(skip)]
    pub tuples: u64,
}

/// Thread count from an explicit value, else from `CENSUS_THREADS`.
pub fn resolve_threads(explicit: Option<usize>) -> Result<Option<usize>, CensusError> {
    if let Some(t) = explicit {
        return if t == 0 { Err(CensusError::Threads("0".into())) } else { Ok(Some(t)) };
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(CensusError::Threads(v)),
        },
        Err(_) => Ok(None),
    }
}

/// Number of virtual tuples of norm parameter `k`.
pub fn virtual_tuple_count(n: usize, k: u32) -> u128 {
    enumerate_s_vectors(n, k).map(|sv| sv.a_tuple_count()).sum()
}

/// Walks the a-tuples of one s-vector keeping only the labels of the
/// current line.
struct Frontier {
    s: Vec<u32>,
    bounds: Vec<u32>,
    /// Component labels of the points of each line, canonical by first
    /// occurrence.
    labels: Vec<Vec<u32>>,
    uf: Partition,
    stamp: Vec<u32>,
    epoch: u32,
    relabel: Vec<u32>,
}

impl Frontier {
    fn new(sv: &SVector) -> Self {
        let s = sv.full();
        let bounds = sv.a_bounds();
        let mut labels: Vec<Vec<u32>> = s.iter().map(|&x| Vec::with_capacity(2 * x as usize + 1)).collect();
        labels[0].push(0);
        let widest = s.iter().map(|&x| 2 * x as usize + 1).max().unwrap_or(1);
        Self {
            s,
            bounds,
            labels,
            uf: Partition::new(2 * widest),
            stamp: vec![0; 2 * widest],
            epoch: 0,
            relabel: vec![0; 2 * widest],
        }
    }

    /// Glues zone `zone + 1` with parameter `a` onto the labels of line
    /// `zone`. Returns `false` if a component is closed off.
    fn step(&mut self, zone: usize, a: u32) -> bool {
        let (done, rest) = self.labels.split_at_mut(zone + 1);
        let left = &done[zone];
        let right = &mut rest[0];
        let classes = left.iter().copied().max().map_or(0, |m| m as usize + 1);
        let width = 2 * self.s[zone + 1] as usize + 1;
        self.uf.reset(classes + width);
        let uf = &mut self.uf;
        for_each_zone_arc(self.s[zone], self.s[zone + 1], a, |_, (ur, up), (vr, vp)| {
            let end = |r: bool, p: u32| if r { classes + p as usize - 1 } else { left[p as usize - 1] as usize };
            uf.union(end(ur, up), end(vr, vp));
        });
        // Stamp roots met on the right line, numbering them as met.
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        right.clear();
        let mut next = 0u32;
        for p in 0..width {
            let r = uf.find(classes + p);
            if self.stamp[r] != epoch {
                self.stamp[r] = epoch;
                self.relabel[r] = next;
                next += 1;
            }
            right.push(self.relabel[r]);
        }
        (0..classes).all(|c| {
            let r = uf.find(c);
            self.stamp[r] == epoch
        })
    }

    /// Weighted number of actual completions of the prefix ending at line
    /// `zone`. With `reflect`, a-tuples are visited only when not larger
    /// than their vertical mirror; `tied` tracks equality with the mirror so
    /// far.
    fn walk(&mut self, zone: usize, reflect: bool, tied: bool, weight: u64) -> u64 {
        if zone == self.bounds.len() {
            return weight;
        }
        let bound = self.bounds[zone];
        let mut total = 0;
        for a in 0..=bound {
            let (next_tied, next_weight) = if reflect && tied {
                match a.cmp(&(bound - a)) {
                    std::cmp::Ordering::Greater => break,
                    std::cmp::Ordering::Less => (false, 2 * weight),
                    std::cmp::Ordering::Equal => (true, weight),
                }
            } else {
                (false, weight)
            };
            if self.step(zone, a) {
                total += self.walk(zone + 1, reflect, next_tied, next_weight);
            }
        }
        total
    }
}

fn count_frontier(sv: &SVector, reflect: bool) -> u64 {
    let mut f = Frontier::new(sv);
    f.walk(0, reflect, true, 1)
}

fn count_direct(sv: &SVector, reflect: bool) -> u64 {
    let s = sv.full();
    let bounds = sv.a_bounds();
    let mut a = vec![0u32; bounds.len()];
    let mut checker = ActualityChecker::new();
    let mut total = 0;
    loop {
        let weight = if reflect {
            let mirror = a.iter().zip(&bounds).map(|(x, b)| b - x);
            match a.iter().copied().cmp(mirror) {
                std::cmp::Ordering::Greater => 0,
                std::cmp::Ordering::Less => 2,
                std::cmp::Ordering::Equal => 1,
            }
        } else {
            1
        };
        if weight > 0 && checker.components(&s, &a) == 1 {
            total += weight;
        }
        if odometer_step(&mut a, &bounds).is_none() {
            return total;
        }
    }
}

/// Number of actual a-tuples for the s-vector `sv`.
pub fn count_for_s_vector(sv: &SVector) -> u64 {
    count_for_s_vector_with(sv, Engine::Frontier, false)
}

/// As [`count_for_s_vector`], choosing the engine and whether to fold
/// a-tuples with their vertical mirror.
pub fn count_for_s_vector_with(sv: &SVector, engine: Engine, reflect: bool) -> u64 {
    debug_assert!(sv.a_tuple_count() <= u128::from(u64::MAX));
    match engine {
        Engine::Frontier => count_frontier(sv, reflect),
        Engine::Direct => count_direct(sv, reflect),
    }
}

fn build_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CensusError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = resolve_threads(threads)? {
        b = b.num_threads(t);
    }
    b.build().map_err(|e| CensusError::Pool(e.to_string()))
}

fn compute(n: usize, k: u32, opts: &CensusOptions, pool: &rayon::ThreadPool) -> Result<CensusRecord, CensusError> {
    if n == 0 {
        return Err(CensusError::NoStrands);
    }
    let start = Instant::now();
    let pruned = opts.mode == Mode::Pruned;
    let mut units: Vec<(SVector, u64)> = Vec::new();
    let mut tuples: u128 = 0;
    for sv in enumerate_s_vectors(n, k) {
        tuples += sv.a_tuple_count();
        if pruned {
            let rev = sv.reversed();
            match sv.interior().cmp(rev.interior()) {
                std::cmp::Ordering::Greater => continue,
                std::cmp::Ordering::Less => units.push((sv, 2)),
                std::cmp::Ordering::Equal => units.push((sv, 1)),
            }
        } else {
            units.push((sv, 1));
        }
    }
    let tuples = u64::try_from(tuples).map_err(|_| CensusError::Overflow { n, k })?;
    let total_units = units.len();
    let done = AtomicUsize::new(0);
    let g = pool.install(|| {
        units
            .par_iter()
            .map(|(sv, mult)| {
                let c = count_for_s_vector_with(sv, opts.engine, pruned);
                if opts.progress {
                    let d = done.fetch_add(1, Ordering::Relaxed) + 1;
                    if d * 100 / total_units != (d - 1) * 100 / total_units || d == total_units {
                        eprintln!("n={n} k={k}: {d}/{total_units} s-vectors");
                    }
                }
                c.checked_mul(*mult).ok_or(CensusError::Overflow { n, k })
            })
            .try_reduce(|| 0, |x, y| x.checked_add(y).ok_or(CensusError::Overflow { n, k }))
    })?;
    Ok(CensusRecord {
        n,
        k,
        g,
        mode: opts.mode,
        engine_version: opts.engine.version(),
        elapsed_ms: start.elapsed().as_millis() as u64,
        tuples,
    })
}

fn count_cached(
    n: usize,
    k: u32,
    opts: &CensusOptions,
    pool: &rayon::ThreadPool,
    cache: Option<&mut CensusCache>,
) -> Result<CensusRecord, CensusError> {
    match cache {
        Some(cache) => {
            if let Some(rec) = cache.get(n, k) {
                return Ok(rec.clone());
            }
            let rec = compute(n, k, opts, pool)?;
            cache.insert(rec.clone())?;
            Ok(rec)
        }
        None => compute(n, k, opts, pool),
    }
}

/// `g_{n,k}`, read from the cache when present there.
pub fn count_actual(n: usize, k: u32, opts: &CensusOptions) -> Result<CensusRecord, CensusError> {
    let pool = build_pool(opts.threads)?;
    let mut cache = opts.cache.as_deref().map(CensusCache::open).transpose()?;
    count_cached(n, k, opts, &pool, cache.as_mut())
}

/// `g_{n,0}, ..., g_{n,kmax}`.
pub fn count_table(n: usize, kmax: u32, opts: &CensusOptions) -> Result<Vec<CensusRecord>, CensusError> {
    let pool = build_pool(opts.threads)?;
    let mut cache = opts.cache.as_deref().map(CensusCache::open).transpose()?;
    (0..=kmax).map(|k| count_cached(n, k, opts, &pool, cache.as_mut())).collect()
}

/// CSV with header `n,k,g`.
pub fn records_to_csv(records: &[CensusRecord]) -> String {
    let mut out = String::from("n,k,g\n");
    for r in records {
        out.push_str(&format!("{},{},{}\n", r.n, r.k, r.g));
    }
    out
}

/// Append-only JSON-lines store of census records keyed by `(n, k)`.
#[derive(Debug)]
pub struct CensusCache {
    path: PathBuf,
    records: BTreeMap<(usize, u32), CensusRecord>,
}

impl CensusCache {
    /// Loads `path`; a missing file is an empty cache.
    pub fn open(path: &Path) -> Result<Self, CensusError> {
        let mut cache = Self { path: path.to_path_buf(), records: BTreeMap::new() };
        let file = match File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(e.into()),
        };
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut rec: CensusRecord = serde_json::from_str(&line).map_err(|e| CensusError::CacheParse {
                path: path.display().to_string(),
                line: i + 1,
                reason: e.to_string(),
            })?;
            rec.tuples = u64::try_from(virtual_tuple_count(rec.n, rec.k)).unwrap_or(u64::MAX);
            cache.remember(rec)?;
        }
        Ok(cache)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, n: usize, k: u32) -> Option<&CensusRecord> {
        self.records.get(&(n, k))
    }

    pub fn records(&self) -> impl Iterator<Item = &CensusRecord> {
        self.records.values()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// In-memory insert; `true` if the key was new.
    fn remember(&mut self, rec: CensusRecord) -> Result<bool, CensusError> {
        if let Some(old) = self.records.get(&(rec.n, rec.k)) {
            if old.g != rec.g {
                return Err(CensusError::CacheConflict { n: rec.n, k: rec.k, stored: old.g, new: rec.g });
            }
            return Ok(false);
        }
        self.records.insert((rec.n, rec.k), rec);
        Ok(true)
    }

    /// Stores `rec` and appends it to the file unless an equal record is
    /// already present. Returns `true` if a line was written.
    pub fn insert(&mut self, rec: CensusRecord) -> Result<bool, CensusError> {
        let line = serde_json::to_string(&rec).expect("record serialises");
        if !self.remember(rec)? {
            return Ok(false);
        }
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(f, "{line}")?;
        Ok(true)
    }

    /// Copies the records of the cache at `other` into this one. Returns the
    /// number of new records.
    pub fn merge_from(&mut self, other: &Path) -> Result<usize, CensusError> {
        let other = Self::open(other)?;
        // Check every key before writing anything.
        for rec in other.records() {
            if let Some(old) = self.get(rec.n, rec.k) {
                if old.g != rec.g {
                    return Err(CensusError::CacheConflict { n: rec.n, k: rec.k, stored: old.g, new: rec.g });
                }
            }
        }
        let mut added = 0;
        for rec in other.records.into_values() {
            added += usize::from(self.insert(rec)?);
        }
        Ok(added)
    }
}
