//! Truncated power series and exponential polynomials over `BigRational`.
//!
//! `z` marks clauses (edges), `v` marks variables (vertices). A [`BiSeries`]
//! is ordinary in `z` and exponential-free in storage: the coefficient at
//! `(a, b)` is the plain `[z^a v^b]`; [`BiSeries::egf_coeff`] applies the
//! `a!·b!` scaling.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::rational::{factorial, q, rpow};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesError {
    /// `log`/`pow` need constant term 1, `exp` needs 0.
    ConstantTerm { op: &'static str, expected: i64 },
    /// Coefficient requested beyond the truncation order.
    OutOfRange { m: usize, n: usize, m_max: usize, n_max: usize },
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::ConstantTerm { op, expected } => {
                write!(f, "{op} requires constant term {expected}")
            }
            SeriesError::OutOfRange { m, n, m_max, n_max } => write!(
                f,
                "coefficient ({m},{n}) outside truncation ({m_max},{n_max})"
            ),
        }
    }
}

/// Univariate series `Σ_{k ≤ order} c_k x^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniSeries {
    coeffs: Vec<BigRational>,
}

impl UniSeries {
    pub fn zero(order: usize) -> Self {
        UniSeries { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// Builds from explicit coefficients, padded/truncated to `order`.
    pub fn from_coeffs(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        UniSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `[x^k]`, zero past the order.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn set(&mut self, k: usize, c: BigRational) {
        self.coeffs[k] = c;
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect();
        UniSeries { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect();
        UniSeries { coeffs }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        UniSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// `x ↦ c·x`.
    pub fn dilate(&self, c: &BigRational) -> Self {
        let mut p = BigRational::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            coeffs.push(x * &p);
            p *= c;
        }
        UniSeries { coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }

    /// Non-negative integer power by squaring; no constant-term restriction.
    pub fn pow_int(&self, mut e: usize) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0].is_zero() {
            return Err(SeriesError::ConstantTerm { op: "inverse", expected: 1 });
        }
        let order = self.order();
        let c0inv = self.coeffs[0].recip();
        let mut out = Self::zero(order);
        out.coeffs[0] = c0inv.clone();
        for k in 1..=order {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out.coeffs[k - j];
                }
            }
            out.coeffs[k] = -acc * &c0inv;
        }
        Ok(out)
    }

    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ConstantTerm { op: "exp", expected: 0 });
        }
        let order = self.order();
        let mut out = Self::zero(order);
        out.coeffs[0] = BigRational::one();
        for k in 1..=order {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out.coeffs[k - j] * BigInt::from(j);
                }
            }
            out.coeffs[k] = acc / BigInt::from(k);
        }
        Ok(out)
    }

    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::ConstantTerm { op: "log", expected: 1 });
        }
        let order = self.order();
        let mut out = Self::zero(order);
        for k in 1..=order {
            let mut acc = BigRational::zero();
            for j in 1..k {
                if !out.coeffs[j].is_zero() && !self.coeffs[k - j].is_zero() {
                    acc += &out.coeffs[j] * &self.coeffs[k - j] * BigInt::from(j);
                }
            }
            out.coeffs[k] = &self.coeffs[k] - acc / BigInt::from(k);
        }
        Ok(out)
    }

    /// `self^σ` for rational σ, from `F'·S = σ·S'·F`.
    pub fn pow(&self, sigma: &BigRational) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::ConstantTerm { op: "pow", expected: 1 });
        }
        let order = self.order();
        let mut out = Self::zero(order);
        out.coeffs[0] = BigRational::one();
        for k in 1..=order {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                let w = sigma * BigInt::from(j) - q((k - j) as i64);
                acc += w * &self.coeffs[j] * &out.coeffs[k - j];
            }
            out.coeffs[k] = acc / BigInt::from(k);
        }
        Ok(out)
    }
}

/// Bivariate series truncated at `z^m_max`, `v^n_max`.
///
/// Stored as one z-series per power of `v`, which is what the recurrences
/// in `v` want.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSeries {
    m_max: usize,
    n_max: usize,
    rows: Vec<UniSeries>,
}

impl BiSeries {
    pub fn zero(m_max: usize, n_max: usize) -> Self {
        BiSeries { m_max, n_max, rows: vec![UniSeries::zero(m_max); n_max + 1] }
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// The z-series multiplying `v^b`.
    pub fn row(&self, b: usize) -> &UniSeries {
        &self.rows[b]
    }

    pub fn from_fn(m_max: usize, n_max: usize, f: impl Fn(usize, usize) -> BigRational) -> Self {
        let rows = (0..=n_max)
            .map(|b| UniSeries::from_coeffs((0..=m_max).map(|a| f(a, b)).collect(), m_max))
            .collect();
        BiSeries { m_max, n_max, rows }
    }

    fn check(&self, m: usize, n: usize) -> Result<(), SeriesError> {
        if m > self.m_max || n > self.n_max {
            return Err(SeriesError::OutOfRange { m, n, m_max: self.m_max, n_max: self.n_max });
        }
        Ok(())
    }

    /// `[z^m v^n]`.
    pub fn coeff(&self, m: usize, n: usize) -> Result<BigRational, SeriesError> {
        self.check(m, n)?;
        Ok(self.rows[n].coeff(m))
    }

    /// `m!·n!·[z^m v^n]`.
    pub fn egf_coeff(&self, m: usize, n: usize) -> Result<BigRational, SeriesError> {
        let c = self.coeff(m, n)?;
        Ok(c * (factorial(m) * factorial(n)))
    }

    pub fn truncate(&self, m_max: usize, n_max: usize) -> Self {
        let m_max = m_max.min(self.m_max);
        let n_max = n_max.min(self.n_max);
        BiSeries { m_max, n_max, rows: self.rows[..=n_max].iter().map(|r| r.truncate(m_max)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n_max = self.n_max.min(other.n_max);
        let rows: Vec<_> = (0..=n_max).map(|b| self.rows[b].add(&other.rows[b])).collect();
        BiSeries { m_max: rows[0].order(), n_max, rows }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n_max = self.n_max.min(other.n_max);
        let m_max = self.m_max.min(other.m_max);
        let mut out = Self::zero(m_max, n_max);
        for i in 0..=n_max {
            if self.rows[i].is_zero() {
                continue;
            }
            for j in 0..=n_max - i {
                out.rows[i + j] = out.rows[i + j].add(&self.rows[i].mul(&other.rows[j]));
            }
        }
        out
    }

    fn const_term(&self) -> &BigRational {
        &self.rows[0].coeffs()[0]
    }

    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.const_term().is_zero() {
            return Err(SeriesError::ConstantTerm { op: "exp", expected: 0 });
        }
        let mut out = Self::zero(self.m_max, self.n_max);
        out.rows[0] = self.rows[0].exp()?;
        for k in 1..=self.n_max {
            let mut acc = UniSeries::zero(self.m_max);
            for j in 1..=k {
                if self.rows[j].is_zero() {
                    continue;
                }
                acc = acc.add(&self.rows[j].mul(&out.rows[k - j]).scale(&q(j as i64)));
            }
            out.rows[k] = acc.scale(&BigRational::new(1.into(), BigInt::from(k)));
        }
        Ok(out)
    }

    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.const_term().is_one() {
            return Err(SeriesError::ConstantTerm { op: "log", expected: 1 });
        }
        let s0inv = self.rows[0].inverse()?;
        let mut out = Self::zero(self.m_max, self.n_max);
        out.rows[0] = self.rows[0].log()?;
        for k in 1..=self.n_max {
            let mut acc = UniSeries::zero(self.m_max);
            for j in 1..k {
                if out.rows[j].is_zero() {
                    continue;
                }
                acc = acc.add(&out.rows[j].mul(&self.rows[k - j]).scale(&q(j as i64)));
            }
            let inner = self.rows[k].sub(&acc.scale(&BigRational::new(1.into(), BigInt::from(k))));
            out.rows[k] = inner.mul(&s0inv);
        }
        Ok(out)
    }

    /// `self^σ`, one recurrence for every rational σ.
    pub fn pow(&self, sigma: &BigRational) -> Result<Self, SeriesError> {
        if !self.const_term().is_one() {
            return Err(SeriesError::ConstantTerm { op: "pow", expected: 1 });
        }
        let s0inv = self.rows[0].inverse()?;
        let mut out = Self::zero(self.m_max, self.n_max);
        out.rows[0] = self.rows[0].pow(sigma)?;
        for k in 1..=self.n_max {
            let mut acc = UniSeries::zero(self.m_max);
            for j in 1..=k {
                if self.rows[j].is_zero() {
                    continue;
                }
                let w = sigma * BigInt::from(j) - q((k - j) as i64);
                if w.is_zero() {
                    continue;
                }
                acc = acc.add(&self.rows[j].mul(&out.rows[k - j]).scale(&w));
            }
            let scaled = acc.scale(&BigRational::new(1.into(), BigInt::from(k)));
            out.rows[k] = scaled.mul(&s0inv);
        }
        Ok(out)
    }
}

pub fn series_exp(s: &BiSeries) -> Result<BiSeries, SeriesError> {
    s.exp()
}

pub fn series_log(s: &BiSeries) -> Result<BiSeries, SeriesError> {
    s.log()
}

pub fn series_pow(s: &BiSeries, sigma: &BigRational) -> Result<BiSeries, SeriesError> {
    s.pow(sigma)
}

/// `M(z_scale·z, v_scale·v)` where `M(z,v) = Σ_n e^{n²z/2} v^n/n!`.
pub fn build_m(m_max: usize, n_max: usize, z_scale: &BigRational, v_scale: &BigRational) -> BiSeries {
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut vpow = BigRational::one();
    let mut nfact = BigInt::one();
    for b in 0..=n_max {
        if b > 0 {
            vpow *= v_scale;
            nfact *= b;
        }
        // (z_scale·b²/2)^a / a!
        let rate = z_scale * BigRational::new(BigInt::from(b * b), 2.into());
        let mut coeffs = Vec::with_capacity(m_max + 1);
        let mut term = &vpow / &nfact;
        for a in 0..=m_max {
            if a > 0 {
                term = term * &rate / BigInt::from(a);
            }
            coeffs.push(term.clone());
        }
        rows.push(UniSeries { coeffs });
    }
    BiSeries { m_max, n_max, rows }
}

/// `Σ c_k e^{a_k z}`, rates distinct and sorted, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExpPolynomial {
    terms: Vec<(BigRational, BigRational)>,
}

impl ExpPolynomial {
    /// Normalizes arbitrary `(coefficient, rate)` pairs.
    pub fn new(terms: impl IntoIterator<Item = (BigRational, BigRational)>) -> Self {
        let mut acc: BTreeMap<BigRational, BigRational> = BTreeMap::new();
        for (c, a) in terms {
            *acc.entry(a).or_insert_with(BigRational::zero) += c;
        }
        ExpPolynomial { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(a, c)| (c, a)).collect() }
    }

    pub fn zero() -> Self {
        ExpPolynomial { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::exp_rate(BigRational::one(), BigRational::zero())
    }

    /// `c·e^{a z}`.
    pub fn exp_rate(c: BigRational, a: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ExpPolynomial { terms: vec![(c, a)] }
    }

    /// `(coefficient, rate)` pairs sorted by rate.
    pub fn terms(&self) -> &[(BigRational, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.terms.iter().map(|(k, a)| (k * c, a.clone())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<BigRational, BigRational> = BTreeMap::new();
        for (c1, a1) in &self.terms {
            for (c2, a2) in &other.terms {
                *acc.entry(a1 + a2).or_insert_with(BigRational::zero) += c1 * c2;
            }
        }
        ExpPolynomial { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(a, c)| (c, a)).collect() }
    }

    /// Power by squaring; equal rates merge at every step so the term count
    /// stays bounded by the number of distinct rate sums.
    pub fn pow(&self, mut e: usize) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `z ↦ c·z`.
    pub fn dilate(&self, c: &BigRational) -> Self {
        ExpPolynomial { terms: self.terms.iter().map(|(k, a)| (k.clone(), a * c)).collect() }
    }

    /// `m!·[z^m] = Σ c_k a_k^m`.
    pub fn egf_coeff(&self, m: usize) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (c, a)| acc + c * rpow(a, m))
    }

    /// Float evaluation at `z0`.
    pub fn eval(&self, z0: f64) -> f64 {
        self.terms
            .iter()
            .map(|(c, a)| crate::rational::to_f64(c) * libm::exp(crate::rational::to_f64(a) * z0))
            .sum()
    }

    /// Taylor expansion to `order`.
    pub fn to_series(&self, order: usize) -> UniSeries {
        let coeffs = (0..=order)
            .map(|k| self.egf_coeff(k) / factorial(k))
            .collect();
        UniSeries::from_coeffs(coeffs, order)
    }
}

pub fn exppoly_product(ps: &[(ExpPolynomial, usize)]) -> ExpPolynomial {
    ps.iter().fold(ExpPolynomial::one(), |acc, (p, k)| acc.mul(&p.pow(*k)))
}

pub fn exppoly_egf_coeff(p: &ExpPolynomial, m: usize) -> BigRational {
    p.egf_coeff(m)
}

pub fn exppoly_eval(p: &ExpPolynomial, z0: f64) -> f64 {
    p.eval(z0)
}

/// `ℓ!·[v^ℓ] log M(z,v)` in closed form.
///
/// Writing `M = 1 + v·M̂` with `M̂ = Σ_k e^{(k+1)²z/2} v^k/(k+1)!`,
/// `log M = Σ_j (−1)^{j−1}/j · v^j M̂^j`, and `[v^{ℓ−j}] M̂^j` is a finite sum
/// of exponentials. The powers of `M̂` are built by truncated convolution
/// in `v`, so rates merge as they appear.
pub fn block_egf(l: usize) -> ExpPolynomial {
    assert!(l >= 1, "block size must be positive");
    let top = l - 1;
    let mhat: Vec<ExpPolynomial> = (0..=top)
        .map(|k| {
            let rate = BigRational::new(BigInt::from((k + 1) * (k + 1)), 2.into());
            ExpPolynomial::exp_rate(BigRational::new(1.into(), factorial(k + 1)), rate)
        })
        .collect();
    let mut total = ExpPolynomial::zero();
    let mut power = mhat.clone(); // M̂^j truncated at v^{top}
    for j in 1..=l {
        let sign = if j % 2 == 1 { 1 } else { -1 };
        let w = BigRational::new(BigInt::from(sign), BigInt::from(j));
        total = total.add(&power[l - j].scale(&w));
        if j == l {
            break;
        }
        // Only degrees ≤ l − (j+1) of M̂^{j+1} are ever read.
        let need = l - j - 1;
        let mut next = vec![ExpPolynomial::zero(); need + 1];
        for (a, pa) in power.iter().enumerate().take(need + 1) {
            if pa.is_zero() {
                continue;
            }
            for b in 0..=need - a {
                next[a + b] = next[a + b].add(&pa.mul(&mhat[b]));
            }
        }
        power = next;
    }
    total.scale(&BigRational::from_integer(factorial(l)))
}
