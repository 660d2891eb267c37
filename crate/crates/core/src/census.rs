//! Exhaustive censuses over coefficient boxes, the `xy = z^2` counter and normalized fits.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{RecipError, Result};
use crate::galois::{g3_flag, reducibility_flag, sn_certificate, G3Flag, SnCertificate};
use crate::poly::{discriminant, expand, IntPoly, SymPair};
use crate::arith::is_square_int;

pub const SCHEMA_VERSION: u32 = 1;
pub const SHARD_SIZE: u64 = 100_000;
pub const ENUMERATION_BUDGET: u64 = 1_000_000_000;

#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub n: usize,
    pub h: u64,
    pub monic: bool,
    pub workers: usize,
    pub seed: u64,
    pub prime_budget: usize,
    pub checkpoint: Option<PathBuf>,
    /// Shards processed between checkpoint writes.
    pub checkpoint_every: usize,
}

impl CensusConfig {
    pub fn new(n: usize, h: u64, monic: bool) -> Self {
        CensusConfig {
            n,
            h,
            monic,
            workers: std::thread::available_parallelism().map_or(1, |c| c.get()),
            seed: 0,
            prime_budget: 1000,
            checkpoint: None,
            checkpoint_every: 64,
        }
    }

    fn free_coeffs(&self) -> usize {
        if self.monic {
            self.n
        } else {
            self.n + 1
        }
    }

    pub fn total_items(&self) -> Option<u64> {
        (2 * self.h + 1).checked_pow(self.free_coeffs() as u32)
    }
}

/// Per-shard tallies; addition is the fold.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub total: u64,
    pub inseparable: u64,
    pub reducible_f: u64,
    pub g1: u64,
    pub g2: u64,
    pub g3: u64,
    pub gg_not_sn: u64,
    pub undetermined: u64,
}

impl std::ops::AddAssign for Tally {
    fn add_assign(&mut self, o: Tally) {
        self.total += o.total;
        self.inseparable += o.inseparable;
        self.reducible_f += o.reducible_f;
        self.g1 += o.g1;
        self.g2 += o.g2;
        self.g3 += o.g3;
        self.gg_not_sn += o.gg_not_sn;
        self.undetermined += o.undetermined;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub schema_version: u32,
    pub n: usize,
    #[serde(rename = "H")]
    pub h: u64,
    pub monic: bool,
    pub total: u64,
    pub inseparable: u64,
    pub reducible_f: u64,
    pub g1: u64,
    pub g2: u64,
    pub g3: u64,
    pub gg_not_sn: u64,
    pub undetermined: u64,
    pub wall_time: f64,
    pub worker_count: usize,
    pub seed: u64,
}

impl CensusRecord {
    pub const CSV_HEADER: &'static str = "n,H,monic,total,inseparable,reducible_f,g1,g2,g3,gg_not_sn,wall_time";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{:.3}",
            self.n,
            self.h,
            self.monic,
            self.total,
            self.inseparable,
            self.reducible_f,
            self.g1,
            self.g2,
            self.g3,
            self.gg_not_sn,
            self.wall_time
        )
    }

    pub fn json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn tally(&self) -> Tally {
        Tally {
            total: self.total,
            inseparable: self.inseparable,
            reducible_f: self.reducible_f,
            g1: self.g1,
            g2: self.g2,
            g3: self.g3,
            gg_not_sn: self.gg_not_sn,
            undetermined: self.undetermined,
        }
    }

    /// Equality of everything except timing and worker count.
    pub fn same_counts(&self, o: &CensusRecord) -> bool {
        (self.n, self.h, self.monic, self.seed, self.tally()) == (o.n, o.h, o.monic, o.seed, o.tally())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Checkpoint {
    schema_version: u32,
    n: usize,
    h: u64,
    monic: bool,
    seed: u64,
    next_shard: u64,
    tally: Tally,
}

/// Coefficients `(b_0, ..., b_n)` of item `idx`; `b_0` varies fastest.
pub fn item_coeffs(cfg: &CensusConfig, mut idx: u64) -> Vec<i64> {
    let side = 2 * cfg.h + 1;
    let mut c: Vec<i64> = (0..cfg.free_coeffs())
        .map(|_| {
            let d = (idx % side) as i64 - cfg.h as i64;
            idx /= side;
            d
        })
        .collect();
    if cfg.monic {
        c.push(1);
    }
    c
}

/// Classification of one `g` as tallied by the census.
pub fn classify_item(coeffs: &[i64], n: usize, prime_budget: usize) -> Tally {
    let mut t = Tally {
        total: 1,
        ..Tally::default()
    };
    let g = IntPoly::from_i64(coeffs);
    if g.degree() != Some(n) {
        t.inseparable = 1;
        return t;
    }
    let m = g.eval_i64(2) * g.eval_i64(-2);
    let dg = if n >= 1 { discriminant(&g).unwrap() } else { BigInt::from(1) };
    if m == BigInt::from(0) || dg == BigInt::from(0) {
        t.inseparable = 1;
        return t;
    }
    let f = expand(&g, n).expect("full degree");
    t.reducible_f = u64::from(reducibility_flag(&f));
    match sn_certificate(&g, prime_budget) {
        SnCertificate::Refuted => t.gg_not_sn = 1,
        SnCertificate::Undetermined => t.undetermined = 1,
        SnCertificate::Certified => {
            t.g1 = u64::from(is_square_int(&m));
            t.g2 = u64::from(is_square_int(&(&m * &dg)));
            let pair = SymPair::from_g(g, n).expect("full degree");
            match g3_flag(&pair, prime_budget).expect("separable") {
                G3Flag::Yes => t.g3 = 1,
                G3Flag::Undetermined => t.undetermined = 1,
                G3Flag::No | G3Flag::NotApplicable => {}
            }
        }
    }
    t
}

fn shard_tally(cfg: &CensusConfig, shard: u64, total: u64) -> Tally {
    let lo = shard * SHARD_SIZE;
    let hi = (lo + SHARD_SIZE).min(total);
    let mut t = Tally::default();
    for idx in lo..hi {
        t += classify_item(&item_coeffs(cfg, idx), cfg.n, cfg.prime_budget);
    }
    t
}

fn load_checkpoint(path: &Path, cfg: &CensusConfig) -> Result<Option<Checkpoint>> {
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(path)?;
    let ck: Checkpoint = serde_json::from_str(&text).map_err(|e| RecipError::Parse(format!("checkpoint: {e}")))?;
    if (ck.n, ck.h, ck.monic, ck.seed) != (cfg.n, cfg.h, cfg.monic, cfg.seed) {
        return Err(RecipError::Domain(format!(
            "checkpoint {} belongs to a different census",
            path.display()
        )));
    }
    Ok(Some(ck))
}

fn save_checkpoint(path: &Path, ck: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serde_json::to_string(ck).expect("checkpoint serializes"))?;
    fs::rename(tmp, path)?;
    Ok(())
}

/// Enumerates every `g` in the box `|b_i| <= H` (with `b_n = 1` when monic).
pub fn run_census(cfg: &CensusConfig) -> Result<CensusRecord> {
    let start = Instant::now();
    let total = cfg
        .total_items()
        .filter(|&t| t <= ENUMERATION_BUDGET)
        .ok_or_else(|| {
            RecipError::Resource(format!(
                "(2H+1)^{} exceeds the enumeration budget {ENUMERATION_BUDGET}",
                cfg.free_coeffs()
            ))
        })?;
    let shards = total.div_ceil(SHARD_SIZE);
    let (mut next, mut tally) = match cfg.checkpoint.as_deref().map(|p| load_checkpoint(p, cfg)).transpose()?.flatten() {
        Some(ck) => (ck.next_shard, ck.tally),
        None => (0, Tally::default()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| RecipError::Resource(e.to_string()))?;
    let batch = if cfg.checkpoint.is_some() { cfg.checkpoint_every.max(1) as u64 } else { shards.max(1) };
    while next < shards {
        let end = (next + batch).min(shards);
        let parts: Vec<Tally> = pool.install(|| (next..end).into_par_iter().map(|s| shard_tally(cfg, s, total)).collect());
        for p in parts {
            tally += p;
        }
        next = end;
        if let Some(path) = &cfg.checkpoint {
            save_checkpoint(
                path,
                &Checkpoint {
                    schema_version: SCHEMA_VERSION,
                    n: cfg.n,
                    h: cfg.h,
                    monic: cfg.monic,
                    seed: cfg.seed,
                    next_shard: next,
                    tally,
                },
            )?;
        }
    }
    Ok(CensusRecord {
        schema_version: SCHEMA_VERSION,
        n: cfg.n,
        h: cfg.h,
        monic: cfg.monic,
        total: tally.total,
        inseparable: tally.inseparable,
        reducible_f: tally.reducible_f,
        g1: tally.g1,
        g2: tally.g2,
        g3: tally.g3,
        gg_not_sn: tally.gg_not_sn,
        undetermined: tally.undetermined,
        wall_time: start.elapsed().as_secs_f64(),
        worker_count: cfg.workers.max(1),
        seed: cfg.seed,
    })
}

// ---------------------------------------------------------------------------
// xy = z^2

/// Solutions of `xy = z^2` with `1 <= x, y, z <= H`, via `x = k u^2, y = k v^2, z = k u v`
/// with `gcd(u, v) = 1`.
pub fn count_xyz_square(h: u64) -> u64 {
    if h == 0 {
        return 0;
    }
    let m = h.isqrt() as usize;
    let mut phi: Vec<u64> = (0..=m as u64).collect();
    for i in 2..=m {
        if phi[i] == i as u64 {
            for j in (i..=m).step_by(i) {
                phi[j] -= phi[j] / i as u64;
            }
        }
    }
    // coprime[t] = #{(u, v) in [1, t]^2 : gcd = 1}
    let mut coprime = vec![0u64; m + 1];
    let mut acc = 0u64;
    for t in 1..=m {
        acc += phi[t];
        coprime[t] = 2 * acc - 1;
    }
    (1..=h).map(|k| coprime[(h / k).isqrt() as usize]).sum()
}

/// `count / (H^a log^b H)` per sample and its spread.
#[derive(Clone, Debug, Serialize)]
pub struct FitReport {
    pub model: String,
    pub a: f64,
    pub b: f64,
    pub samples: Vec<(u64, u64)>,
    pub normalized: Vec<f64>,
    pub fitted_constant_range: (f64, f64),
    pub ratio: f64,
    /// Sample heights dropped because their count was zero.
    pub excluded: Vec<u64>,
}

pub fn fit_asymptotic(samples: &[(u64, u64)], a: f64, b: f64) -> Result<FitReport> {
    if samples.len() < 3 {
        return Err(RecipError::Domain("a fit needs at least 3 samples".into()));
    }
    if samples.windows(2).any(|w| w[0].0 >= w[1].0) || samples[0].0 < 2 {
        return Err(RecipError::Domain("sample heights must increase from H >= 2".into()));
    }
    let (kept, dropped): (Vec<_>, Vec<_>) = samples.iter().copied().partition(|s| s.1 > 0);
    let excluded: Vec<u64> = dropped.iter().map(|s| s.0).collect();
    if !excluded.is_empty() {
        log::warn!("excluding zero counts at H = {excluded:?}");
    }
    if kept.is_empty() {
        return Err(RecipError::Domain("every count is zero".into()));
    }
    let normalized: Vec<f64> = kept
        .iter()
        .map(|&(h, c): &(u64, u64)| {
            let h = h as f64;
            c as f64 / (h.powf(a) * h.ln().powf(b))
        })
        .collect();
    let lo = normalized.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = normalized.iter().cloned().fold(0.0, f64::max);
    Ok(FitReport {
        model: format!("H^{a} log^{b} H"),
        a,
        b,
        samples: samples.to_vec(),
        normalized,
        fitted_constant_range: (lo, hi),
        ratio: hi / lo,
        excluded,
    })
}
