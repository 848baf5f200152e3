//! Parallel, reproducible sampling of random expressions and multigraphs.
//!
//! Trials are cut into fixed chunks of [`CHUNK`]; chunk `c` draws from
//! `ChaCha8(seed)` on stream `c`. Which thread runs a chunk therefore never
//! matters, and the merge walks chunks in index order.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;
use twoxor_core::multigraph::{sample_multigraph, Multigraph};
use twoxor_core::partition::IntegerPartition;
use twoxor_core::xor::sample_expression;

pub const CHUNK: u64 = 1024;
/// Below this many successes (or failures) the Wilson form is used.
pub const WILSON_MIN_COUNT: u64 = 30;
pub const Z_PASS: f64 = 4.0;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum McError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("n must be at least 1")]
    NoVariables,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub n: usize,
    pub m: usize,
    pub trials: u64,
    pub seed: u64,
    pub sat_count: u64,
    pub sat_frequency: f64,
    pub false_count: u64,
    /// Keyed by partition strings such as `"3+2+1+1"`.
    pub class_histogram: BTreeMap<String, u64>,
    /// `"sat"`, `"FALSE"` and every histogram key.
    pub standard_errors: BTreeMap<String, f64>,
}

/// Binomial standard error of `k` successes in `trials`.
///
/// Normal approximation once both `k` and `trials − k` reach
/// [`WILSON_MIN_COUNT`]; otherwise the half-width of the z = 1 Wilson
/// interval, which stays positive at `k = 0`.
pub fn standard_error(k: u64, trials: u64) -> f64 {
    let n = trials as f64;
    let p = k as f64 / n;
    if k >= WILSON_MIN_COUNT && trials - k >= WILSON_MIN_COUNT {
        (p * (1.0 - p) / n).sqrt()
    } else {
        (p * (1.0 - p) / n + 1.0 / (4.0 * n * n)).sqrt() / (1.0 + 1.0 / n)
    }
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Runs `work(chunk_index, len)` for every chunk on `parallel` threads and
/// returns the results in chunk order.
fn map_chunks<T: Send>(trials: u64, parallel: usize, work: impl Fn(u64, u64) -> T + Sync) -> Vec<T> {
    let chunks = trials.div_ceil(CHUNK);
    let len = |c: u64| CHUNK.min(trials - c * CHUNK);
    let threads = parallel.max(1).min(chunks.max(1) as usize);
    if threads == 1 {
        return (0..chunks).map(|c| work(c, len(c))).collect();
    }
    let mut slots: Vec<Option<T>> = (0..chunks).map(|_| None).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let work = &work;
                s.spawn(move || {
                    (t as u64..chunks).step_by(threads).map(|c| (c, work(c, len(c)))).collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (c, r) in h.join().expect("worker panicked") {
                slots[c as usize] = Some(r);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("every chunk ran")).collect()
}

/// Samples `trials` uniform expressions, reduces each and tallies classes.
pub fn run_trials(n: usize, m: usize, trials: u64, seed: u64, parallel: usize) -> Result<TrialReport, McError> {
    if trials == 0 {
        return Err(McError::NoTrials);
    }
    if n == 0 {
        return Err(McError::NoVariables);
    }
    let parts = map_chunks(trials, parallel, |c, len| {
        let mut rng = chunk_rng(seed, c);
        let mut hist: BTreeMap<IntegerPartition, u64> = BTreeMap::new();
        let mut false_count = 0u64;
        for _ in 0..len {
            match sample_expression(n, m, &mut rng).reduce().partition() {
                Some(p) => *hist.entry(p).or_insert(0) += 1,
                None => false_count += 1,
            }
        }
        (hist, false_count)
    });
    let mut hist: BTreeMap<IntegerPartition, u64> = BTreeMap::new();
    let mut false_count = 0;
    for (h, f) in parts {
        false_count += f;
        for (p, c) in h {
            *hist.entry(p).or_insert(0) += c;
        }
    }
    let sat_count = trials - false_count;
    let class_histogram: BTreeMap<String, u64> = hist.into_iter().map(|(p, c)| (p.to_string(), c)).collect();
    let mut standard_errors = BTreeMap::new();
    standard_errors.insert("sat".to_string(), standard_error(sat_count, trials));
    standard_errors.insert("FALSE".to_string(), standard_error(false_count, trials));
    for (k, &c) in &class_histogram {
        standard_errors.insert(k.clone(), standard_error(c, trials));
    }
    Ok(TrialReport {
        n,
        m,
        trials,
        seed,
        sat_count,
        sat_frequency: sat_count as f64 / trials as f64,
        false_count,
        class_histogram,
        standard_errors,
    })
}

/// Tally of multigraphs produced by the multigraph process.
pub fn sample_multigraphs(n: usize, m: usize, samples: u64, seed: u64, parallel: usize) -> Result<BTreeMap<Multigraph, u64>, McError> {
    if samples == 0 {
        return Err(McError::NoTrials);
    }
    if n == 0 {
        return Err(McError::NoVariables);
    }
    let parts = map_chunks(samples, parallel, |c, len| {
        let mut rng = chunk_rng(seed, c);
        let mut hist: BTreeMap<Multigraph, u64> = BTreeMap::new();
        for _ in 0..len {
            *hist.entry(sample_multigraph(n, m, &mut rng)).or_insert(0) += 1;
        }
        hist
    });
    let mut out = BTreeMap::new();
    for h in parts {
        for (g, c) in h {
            *out.entry(g).or_insert(0) += c;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// No prediction was supplied.
    Untestable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub estimand: String,
    pub empirical: f64,
    pub predicted: Option<f64>,
    pub standard_error: f64,
    pub z: Option<f64>,
    pub verdict: Verdict,
}

/// `(empirical − predicted)/SE` per estimand; pass when `|z| < z_pass`
/// (normally [`Z_PASS`]).
///
/// Estimands are `"sat"`, `"FALSE"` and partition strings; classes that
/// were predicted but never observed are compared with count 0.
pub fn compare(report: &TrialReport, predictions: &BTreeMap<String, f64>, z_pass: f64) -> Vec<Comparison> {
    let mut counts: BTreeMap<String, u64> = report.class_histogram.clone();
    counts.insert("sat".to_string(), report.sat_count);
    counts.insert("FALSE".to_string(), report.false_count);
    for k in predictions.keys() {
        counts.entry(k.clone()).or_insert(0);
    }
    counts
        .into_iter()
        .map(|(estimand, k)| {
            let empirical = k as f64 / report.trials as f64;
            let se = standard_error(k, report.trials);
            let predicted = predictions.get(&estimand).copied();
            let z = predicted.map(|p| (empirical - p) / se);
            let verdict = match z {
                None => Verdict::Untestable,
                Some(z) if z.abs() < z_pass => Verdict::Pass,
                Some(_) => Verdict::Fail,
            };
            Comparison { estimand, empirical, predicted, standard_error: se, z, verdict }
        })
        .collect()
}
