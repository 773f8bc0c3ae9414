//! Instrumented benchmark suites.
//!
//! Each suite returns rows of `suite,param1,param2,engine,ops,nanos`. `ops`
//! counts unit-cost coefficient or symbol operations and is deterministic;
//! `nanos` is wall time and is zeroed when timing is off.

use std::fmt;
use std::time::Instant;

use crate::energy::{
    build, count_dp_in, extract_counted, slow_build, GammaTable, ModularRing, NttPrime, StartPair,
};
use crate::verify::{ConstraintParams, GcFraction};
use crate::wordgen::{generate, GenRequest, Problem};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "suite,param1,param2,engine,ops,nanos";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub suite: &'static str,
    pub param1: u64,
    pub param2: u64,
    pub engine: String,
    pub ops: u64,
    pub nanos: u64,
}

impl fmt::Display for BenchRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{},{}", self.suite, self.param1, self.param2, self.engine, self.ops, self.nanos)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Counting,
    Generation,
    Extraction,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "counting" => Ok(Suite::Counting),
            "generation" => Ok(Suite::Generation),
            "extraction" => Ok(Suite::Extraction),
            _ => Err(Error::invalid(format!("unknown suite {s:?}; expected counting, generation or extraction"))),
        }
    }
}

/// A table with entries in {0, 1}, so `D = 1`.
pub fn bench_table() -> GammaTable {
    GammaTable::new([[1, 0, 0, 1], [0, 1, 1, 0], [1, 0, 1, 0], [0, 1, 0, 1]])
}

/// Wall-clock switch; off makes output byte-stable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Timing(pub bool);

impl Timing {
    fn measure<T>(self, f: impl FnOnce() -> Result<T>) -> Result<(T, u64)> {
        let start = Instant::now();
        let out = f()?;
        let nanos = if self.0 { start.elapsed().as_nanos() as u64 } else { 0 };
        Ok((out, nanos))
    }
}

/// `build` against `count_dp`, both in the modular ring. `param2` is `D`.
pub fn counting(lengths: &[usize], table: &GammaTable, timing: Timing) -> Result<Vec<BenchRow>> {
    let ring = ModularRing::new(NttPrime::default());
    let mut rows = Vec::new();
    for &len in lengths {
        let (ops, nanos) = timing.measure(|| Ok(build(len, table, ring)?.build_ops()))?;
        rows.push(row("counting", len, table.spread(), "fft", ops, nanos));
        let (ops, nanos) = timing.measure(|| {
            let mut ops = 0;
            count_dp_in(len, table, &ring, &mut ops)?;
            Ok(ops)
        })?;
        rows.push(row("counting", len, table.spread(), "dp", ops, nanos));
    }
    Ok(rows)
}

/// Every generator over `ns × ks`. `param1` is `n`, `param2` is `k` and the
/// engine column names the problem.
pub fn generation(
    problems: &[Problem],
    ns: &[usize],
    ks: &[usize],
    table: &GammaTable,
    seed: u64,
    timing: Timing,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &problem in problems {
        for &n in ns {
            for &k in ks {
                let params = ConstraintParams { gamma: GcFraction::half(), d: 3, ..ConstraintParams::uniform(k) };
                let req = GenRequest::new(problem, n, params, seed).with_table(*table);
                let (result, nanos) = timing.measure(|| generate(&req))?;
                rows.push(row("generation", n, k as u64, problem.name(), result.ops, nanos));
            }
        }
    }
    Ok(rows)
}

/// Mean ops per extraction with and without a witness index, over up to
/// `samples` achievable energies spread across the range. The
/// `witness-build` row carries the one-off index cost. `param2` is the
/// number of extractions.
pub fn extraction(lengths: &[usize], samples: usize, table: &GammaTable, timing: Timing) -> Result<Vec<BenchRow>> {
    let ring = ModularRing::new(NttPrime::default());
    let mut rows = Vec::new();
    for &len in lengths {
        let ladder = build(len, table, ring)?;
        let achievable = ladder.achievable_energies(len)?;
        let count = samples.clamp(1, achievable.len());
        let last = achievable.len() - 1;
        let energies: Vec<u64> = (0..count).map(|i| achievable[i * last / (count - 1).max(1)]).collect();
        let (index, nanos) = timing.measure(|| slow_build(&ladder))?;
        rows.push(row("extraction", len, count as u64, "witness-build", index.build_ops(), nanos));
        for (engine, ix) in [("witness", Some(&index)), ("scan", None)] {
            let (ops, nanos) = timing.measure(|| {
                let mut ops = 0;
                for &e in &energies {
                    extract_counted(e, &ladder, ix, StartPair::Any, &mut ops)?;
                }
                Ok(ops)
            })?;
            rows.push(row("extraction", len, count as u64, engine, ops / count as u64, nanos / count as u64));
        }
    }
    Ok(rows)
}

fn row(suite: &'static str, param1: usize, param2: u64, engine: &str, ops: u64, nanos: u64) -> BenchRow {
    BenchRow { suite, param1: param1 as u64, param2, engine: engine.to_string(), ops, nanos }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
