//! Exhaustive ground truth: every one of the `(4n²)^m` clause sequences,
//! reduced and tallied. Deliberately dumb.

use std::collections::BTreeMap;

use thiserror::Error;
use twoxor_core::partition::IntegerPartition;
use twoxor_core::xor::{all_clauses, Clause, Expression, FunctionRepr};
use twoxor_core::{BigInt, BigRational, BigUint};

pub const DEFAULT_CAP: u64 = 10_000_000;
pub const CAP_ENV: &str = "TWOXOR_ENUM_CAP";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("exhaustive census needs {required} expressions, cap is {cap}")]
    CapExceeded { required: String, cap: u64 },
    #[error("n must be at least 1")]
    NoVariables,
}

/// The cap from `TWOXOR_ENUM_CAP`, else [`DEFAULT_CAP`].
pub fn cap_from_env() -> u64 {
    std::env::var(CAP_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCensus {
    pub n: usize,
    pub m: usize,
    pub per_function: BTreeMap<FunctionRepr, u64>,
    /// Per class: (distinct functions observed, total expressions).
    pub per_class: BTreeMap<IntegerPartition, (usize, u64)>,
    pub false_count: u64,
    pub total: u64,
}

impl OracleCensus {
    pub fn prob_sat(&self) -> BigRational {
        BigRational::new(BigInt::from(self.total - self.false_count), BigInt::from(self.total))
    }

    pub fn prob_false(&self) -> BigRational {
        BigRational::new(BigInt::from(self.false_count), BigInt::from(self.total))
    }

    /// Probability of the whole class `i` (zero when never observed).
    pub fn prob_class(&self, i: &IntegerPartition) -> BigRational {
        let c = self.per_class.get(i).map_or(0, |x| x.1);
        BigRational::new(BigInt::from(c), BigInt::from(self.total))
    }

    /// Probability of one function of class `i`, if every function of the
    /// class was seen with the same count (and zero if none was seen).
    pub fn prob_per_function(&self, i: &IntegerPartition) -> Option<BigRational> {
        let mut counts = self.per_function.iter().filter(|(f, _)| f.partition().as_ref() == Some(i)).map(|(_, &c)| c);
        let first = match counts.next() {
            None => return Some(BigRational::from_integer(0.into())),
            Some(c) => c,
        };
        if counts.any(|c| c != first) {
            return None;
        }
        Some(BigRational::new(BigInt::from(first), BigInt::from(self.total)))
    }

    /// Every function inside each observed class has the same count.
    pub fn equiprobable(&self) -> bool {
        self.per_class.keys().all(|i| self.prob_per_function(i).is_some())
    }

    /// Number of functions observed in class `i`.
    pub fn observed_class_size(&self, i: &IntegerPartition) -> usize {
        self.per_class.get(i).map_or(0, |x| x.0)
    }
}

fn tally(n: usize, m: usize, clauses: &[Clause], range: std::ops::Range<u64>) -> BTreeMap<FunctionRepr, u64> {
    let radix = clauses.len() as u64;
    let mut out = BTreeMap::new();
    let mut expr = Vec::with_capacity(m);
    for idx in range {
        expr.clear();
        let mut x = idx;
        for _ in 0..m {
            expr.push(clauses[(x % radix) as usize]);
            x /= radix;
        }
        let e = Expression::new(n, expr.clone()).expect("clauses are in range");
        *out.entry(e.reduce()).or_insert(0) += 1;
    }
    out
}

/// Enumerates all expressions in mixed-radix order, split into contiguous
/// ranges across `parallel` threads.
pub fn exhaustive_census(n: usize, m: usize, cap: u64, parallel: usize) -> Result<OracleCensus, OracleError> {
    if n == 0 {
        return Err(OracleError::NoVariables);
    }
    let clauses = all_clauses(n);
    let total = (clauses.len() as u64).checked_pow(m as u32).filter(|&t| t <= cap).ok_or_else(|| OracleError::CapExceeded {
        required: BigUint::from(clauses.len()).pow(m as u32).to_string(),
        cap,
    })?;
    let threads = (parallel.max(1) as u64).min(total.max(1));
    let step = total.div_ceil(threads);
    let partials: Vec<BTreeMap<FunctionRepr, u64>> = if threads == 1 {
        vec![tally(n, m, &clauses, 0..total)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let clauses = &clauses;
                    let range = (t * step).min(total)..((t + 1) * step).min(total);
                    s.spawn(move || tally(n, m, clauses, range))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    let mut per_function: BTreeMap<FunctionRepr, u64> = BTreeMap::new();
    for p in partials {
        for (f, c) in p {
            *per_function.entry(f).or_insert(0) += c;
        }
    }
    let false_count = per_function.remove(&FunctionRepr::False).unwrap_or(0);
    let mut per_class: BTreeMap<IntegerPartition, (usize, u64)> = BTreeMap::new();
    for (f, &c) in &per_function {
        let e = per_class.entry(f.partition().expect("FALSE removed")).or_insert((0, 0));
        e.0 += 1;
        e.1 += c;
    }
    Ok(OracleCensus { n, m, per_function, per_class, false_count, total })
}
