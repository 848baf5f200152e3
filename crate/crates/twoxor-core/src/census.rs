//! Exact probabilities and counts as big rationals.
//!
//! Two engines back everything: the dense bivariate series (small cases,
//! kept as an independent path) and the modular evaluation engine in
//! [`crate::modular`] for anything beyond toy sizes.

use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::modular;
use crate::multigraph::multigraph_count;
use crate::partition::{partitions_of, IntegerPartition};
use crate::rational::{binomial, factorial, ipow, q, q_frac, rpow};
use crate::series::{block_egf, build_m, exppoly_product, ExpPolynomial, SeriesError, UniSeries};

/// Largest clause count the exact engines accept.
pub const BUDGET_M: usize = 1000;
/// Largest variable count the exact engines accept.
pub const BUDGET_N: usize = 100_000;
/// Blocks up to this size use closed-form exponential polynomials.
pub const EXP_BLOCK_MAX: usize = 24;
/// `(m+1)(n+1)` up to which `prob_sat_exact` uses the bivariate series.
const SERIES_CELLS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CensusError {
    Budget { m: usize, n: usize },
    /// Partition size does not match `n`, or `g ∤ n`, etc.
    Invalid(&'static str),
    Series(SeriesError),
}

impl fmt::Display for CensusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CensusError::Budget { m, n } => {
                write!(f, "(m, n) = ({m}, {n}) exceeds the exact budget (m ≤ {BUDGET_M}, n ≤ {BUDGET_N})")
            }
            CensusError::Invalid(s) => write!(f, "{s}"),
            CensusError::Series(e) => write!(f, "{e}"),
        }
    }
}

impl From<SeriesError> for CensusError {
    fn from(e: SeriesError) -> Self {
        CensusError::Series(e)
    }
}

fn budget(m: usize, n: usize) -> Result<(), CensusError> {
    if m > BUDGET_M || n > BUDGET_N {
        return Err(CensusError::Budget { m, n });
    }
    Ok(())
}

/// `C_{m,n}`: compensation-weighted count of connected multigraphs.
pub fn connected_count(m: usize, n: usize) -> Result<BigRational, CensusError> {
    budget(m, n)?;
    Ok(modular::connected_counts(n, &[m]).pop().unwrap())
}

/// `C_{0,ℓ}, …, C_{m,ℓ}`, i.e. the coefficients of `ℓ![v^ℓ] log M(z,v)`.
pub fn connected_column(l: usize, m: usize) -> Result<Vec<BigRational>, CensusError> {
    budget(m, l)?;
    let targets: Vec<usize> = (0..=m).collect();
    Ok(modular::connected_counts(l, &targets))
}

/// `C_{m,n}` from the bivariate `log M`; slow, independent of the engine.
pub fn connected_count_series(m: usize, n: usize) -> Result<BigRational, CensusError> {
    let lm = build_m(m, n, &q(1), &q(1)).log()?;
    Ok(lm.coeff(m, n)? * factorial(n))
}

/// `Σ_G κ(G) σ^{c(G)} = n![z^m v^n] M^σ`.
pub fn weighted_count(m: usize, n: usize, sigma: &BigRational) -> Result<BigRational, CensusError> {
    if !sigma.is_positive() {
        return Err(CensusError::Invalid("σ must be positive"));
    }
    budget(m, n)?;
    if sigma.is_one() {
        return Ok(multigraph_count(m, n));
    }
    if (m + 1) * (n + 1) <= SERIES_CELLS {
        return weighted_count_series(m, n, sigma);
    }
    Ok(modular::weighted_counts(n, &[m], sigma).pop().unwrap())
}

/// Same as [`weighted_count`] via the bivariate series.
pub fn weighted_count_series(m: usize, n: usize, sigma: &BigRational) -> Result<BigRational, CensusError> {
    let p = build_m(m, n, &q(1), &q(1)).pow(sigma)?;
    Ok(p.coeff(m, n)? * factorial(n))
}

fn sat_from_weighted(m: usize, n: usize, w: BigRational) -> BigRational {
    w * ipow(&BigInt::from(2), n) * factorial(m) / ipow(&BigInt::from(n), 2 * m)
}

/// Probability that `m` uniform clauses over `n` variables are satisfiable:
/// `2^n m! W(1/2) / n^{2m}` with `W` the weighted count at `σ = 1/2`.
pub fn prob_sat_exact(m: usize, n: usize) -> Result<BigRational, CensusError> {
    if n == 0 {
        return Err(CensusError::Invalid("n must be positive"));
    }
    let w = weighted_count(m, n, &q_frac(1, 2))?;
    Ok(sat_from_weighted(m, n, w))
}

/// [`prob_sat_exact`] through `[z^m v^n]√M(4z,2v) / [z^m v^n]M(8z,v)`
/// literally, with the bivariate series.
pub fn prob_sat_exact_series(m: usize, n: usize) -> Result<BigRational, CensusError> {
    if n == 0 {
        return Err(CensusError::Invalid("n must be positive"));
    }
    let num = build_m(m, n, &q(4), &q(2)).pow(&q_frac(1, 2))?.coeff(m, n)?;
    let den = build_m(m, n, &q(8), &q(1)).coeff(m, n)?;
    Ok(num / den)
}

/// Probability that a uniform assignment satisfies a uniform satisfiable
/// expression: `M_{m,n} / (2^n W(1/2))`.
pub fn prob_input_satisfies_exact(m: usize, n: usize) -> Result<BigRational, CensusError> {
    if n == 0 {
        return Err(CensusError::Invalid("n must be positive"));
    }
    let w = weighted_count(m, n, &q_frac(1, 2))?;
    Ok(multigraph_count(m, n) / (w * ipow(&BigInt::from(2), n)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassProbability {
    pub partition: IntegerPartition,
    /// `E_{m,n}(f)`: expressions computing one fixed `f` of the class.
    pub count_per_function: BigRational,
    pub class_size: BigInt,
    pub prob_per_function: BigRational,
    pub prob_class: BigRational,
}

impl ClassProbability {
    fn new(partition: IntegerPartition, m: usize, count: BigRational) -> Self {
        let n = partition.size();
        let total = ipow(&BigInt::from(4 * n * n), m);
        let prob = &count / total;
        let class_size = partition.class_size();
        let prob_class = &prob * &class_size;
        ClassProbability { partition, count_per_function: count, class_size, prob_per_function: prob, prob_class }
    }
}

/// How [`prob_function_exact_via`] computes `E_{m,n}(f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionRoute {
    /// Small blocks with closed-form exponential polynomials, large ones
    /// with connected-count columns.
    Auto,
    ExpPolynomial,
    /// `Π_ℓ (Σ_j C_{j,ℓ} z^j)^{i_ℓ}` with columns from the modular engine.
    Columns,
    /// `Π_ℓ (ℓ![v^ℓ] log M(4z,v))^{i_ℓ}` read off the bivariate series.
    Bivariate,
}

/// Exact probability of one fixed function in the class `i` after `m`
/// clauses, over `n = s(i)` variables.
pub fn prob_function_exact(i: &IntegerPartition, m: usize) -> Result<ClassProbability, CensusError> {
    prob_function_exact_via(i, m, FunctionRoute::Auto)
}

pub fn prob_function_exact_via(i: &IntegerPartition, m: usize, route: FunctionRoute) -> Result<ClassProbability, CensusError> {
    let n = i.size();
    if n == 0 {
        return Err(CensusError::Invalid("partition of 0"));
    }
    budget(m, n)?;
    let count = if m + i.num_blocks() < n {
        BigRational::zero()
    } else {
        match route {
            FunctionRoute::ExpPolynomial => count_exppoly(i, m),
            FunctionRoute::Columns => count_columns(i, m, &[])?,
            FunctionRoute::Bivariate => count_bivariate(i, m)?,
            FunctionRoute::Auto => {
                let small: Vec<(usize, usize)> = i.blocks().filter(|&(l, _)| l <= EXP_BLOCK_MAX).collect();
                if small.len() == i.blocks().count() {
                    count_exppoly(i, m)
                } else {
                    count_columns(i, m, &small)?
                }
            }
        }
    };
    Ok(ClassProbability::new(i.clone(), m, count))
}

/// `m!·4^m·[z^m] Π block_egf(ℓ)^{i_ℓ}`: the 4 goes into the rates.
fn count_exppoly(i: &IntegerPartition, m: usize) -> BigRational {
    let factors: Vec<(ExpPolynomial, usize)> = i.blocks().map(|(l, c)| (block_egf(l), c)).collect();
    exppoly_product(&factors).dilate(&q(4)).egf_coeff(m)
}

/// Blocks listed in `via_exppoly` are expanded in closed form, the rest
/// from connected columns; the two parts are multiplied as z-series.
fn count_columns(i: &IntegerPartition, m: usize, via_exppoly: &[(usize, usize)]) -> Result<BigRational, CensusError> {
    let closed: Vec<(ExpPolynomial, usize)> = via_exppoly.iter().map(|&(l, c)| (block_egf(l), c)).collect();
    let mut acc = if closed.is_empty() { UniSeries::one(m) } else { exppoly_product(&closed).to_series(m) };
    for (l, c) in i.blocks() {
        if via_exppoly.iter().any(|&(x, _)| x == l) {
            continue;
        }
        let col = UniSeries::from_coeffs(connected_column(l, m)?, m);
        acc = acc.mul(&col.pow_int(c));
    }
    Ok(acc.coeff(m) * factorial(m) * ipow(&BigInt::from(4), m))
}

fn count_bivariate(i: &IntegerPartition, m: usize) -> Result<BigRational, CensusError> {
    let lmax = i.largest();
    let lm = build_m(m, lmax, &q(4), &q(1)).log()?;
    let mut acc = UniSeries::one(m);
    for (l, c) in i.blocks() {
        let row = lm.row(l).scale(&BigRational::from_integer(factorial(l)));
        acc = acc.mul(&row.pow_int(c));
    }
    Ok(acc.coeff(m) * factorial(m))
}

/// Probability of a fixed function made of `n/g` blocks of size `g`, from
/// the finite alternating sums (`g ∈ {2, 3}`).
pub fn prob_g_blocks_closed_form(g: usize, n: usize, m: usize) -> Result<BigRational, CensusError> {
    if n == 0 || (g != 2 && g != 3) || !n.is_multiple_of(g) {
        return Err(CensusError::Invalid("need g ∈ {2, 3} dividing n > 0"));
    }
    let h = n / g;
    let mut sum = BigRational::zero();
    if g == 2 {
        for l in 0..=h {
            let sign = if (h - l).is_multiple_of(2) { 1 } else { -1 };
            let term = rpow(&q((l + h) as i64), m) * binomial(h, l) * BigInt::from(sign);
            sum += term;
        }
    } else {
        let half_n = q_frac(n as i64, 2);
        for l in 0..=h {
            for j in 0..=l {
                let base = &half_n + q((l + 2 * j) as i64);
                let weight = binomial(h, l)
                    * binomial(l, j)
                    * ipow(&BigInt::from(-3), l - j)
                    * ipow(&BigInt::from(2), h - l);
                sum += rpow(&base, m) * weight;
            }
        }
    }
    Ok(sum / ipow(&BigInt::from(n), 2 * m))
}

/// Every class of satisfiable functions on `n` variables plus FALSE.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    pub n: usize,
    pub m: usize,
    /// In [`partitions_of`] order.
    pub classes: Vec<ClassProbability>,
    pub prob_false: BigRational,
}

impl Distribution {
    pub fn prob_sat(&self) -> BigRational {
        self.classes.iter().fold(BigRational::zero(), |acc, c| acc + &c.prob_class)
    }
}

pub fn full_distribution(n: usize, m: usize) -> Result<Distribution, CensusError> {
    if n == 0 {
        return Err(CensusError::Invalid("n must be positive"));
    }
    let classes = partitions_of(n)
        .into_iter()
        .map(|i| prob_function_exact(&i, m))
        .collect::<Result<Vec<_>, _>>()?;
    let sat = classes.iter().fold(BigRational::zero(), |acc, c| acc + &c.prob_class);
    Ok(Distribution { n, m, classes, prob_false: BigRational::one() - sat })
}
