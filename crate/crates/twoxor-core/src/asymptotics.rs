//! Floating-point asymptotic evaluators. Magnitudes come back as natural
//! logarithms ([`LogValue`]); `e^{−n}` factors make linear scale useless.

use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};
use core::fmt;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::rational::{factorial, ln_abs, to_f64};
use crate::series::{block_egf, UniSeries};
use crate::special::{airy_a, lambda_solve, ln_factorial, ln_gamma, saddle_constant, zeta_solve, SaddleSolution};

/// Excess up to which connected counts use the fixed-excess constants.
pub const FIXED_EXCESS_MAX: i64 = 10;
/// `2m/n − ln n` beyond which a multigraph is connected with overwhelming
/// probability (its failure rate is about `e^{−margin}`).
pub const DENSE_MARGIN: f64 = 5.0;
/// Half-width of the critical window in `μ`.
pub const CRITICAL_MU_MAX: f64 = 2.0;
pub const DEFAULT_R_MAX: usize = 20;

/// `sign·e^{ln}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub ln: f64,
    pub negative: bool,
}

impl LogValue {
    pub fn positive(ln: f64) -> Self {
        LogValue { ln, negative: false }
    }

    pub fn value(self) -> f64 {
        let v = libm::exp(self.ln);
        if self.negative {
            -v
        } else {
            v
        }
    }

    pub fn log2(self) -> f64 {
        self.ln / LN_2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SingleBlockCase {
    /// r = −1: trees.
    Tree,
    /// r = 0: unicyclic.
    Unicyclic,
    /// 1 ≤ r ≤ FIXED_EXCESS_MAX.
    FixedExcess,
    /// r → ∞, r = o(√n).
    SlowExcess,
    /// r proportional to n.
    ProportionalExcess,
    /// 2m/n − ln n bounded.
    LogDense,
    /// 2m/n − ln n → ∞.
    Dense,
}

impl SingleBlockCase {
    /// The 1–7 numbering of the cases.
    pub fn number(self) -> u8 {
        self as u8 + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TwoBlockRegime {
    FixedExcessSingleLarge,
    FixedExcessTwoLarge,
    LargeExcessSingleLarge,
    LargeExcessTwoLarge,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegimeTag {
    /// Connected counts with fixed excess `r`.
    FixedExcess { r: i64 },
    LargeExcess,
    Dense,
    Subcritical,
    Critical { mu: f64 },
    SingleBlock(SingleBlockCase),
    TwoBlock(TwoBlockRegime),
    FixedFunction,
    ProportionalBlocks,
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegimeTag::FixedExcess { r } => write!(f, "fixed-excess(r={r})"),
            RegimeTag::LargeExcess => write!(f, "large-excess"),
            RegimeTag::Dense => write!(f, "dense"),
            RegimeTag::Subcritical => write!(f, "subcritical"),
            RegimeTag::Critical { mu } => write!(f, "critical(mu={mu})"),
            RegimeTag::SingleBlock(c) => write!(f, "single-block-case-{}", c.number()),
            RegimeTag::TwoBlock(r) => write!(f, "two-block-{r:?}"),
            RegimeTag::FixedFunction => write!(f, "fixed-function"),
            RegimeTag::ProportionalBlocks => write!(f, "proportional-blocks"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AsymptError {
    /// No multigraph/expression of the requested kind exists.
    Support(&'static str),
    /// No closed formula covers this regime.
    Unsupported(&'static str),
    InvalidInput(&'static str),
}

impl fmt::Display for AsymptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsymptError::Support(s) => write!(f, "empty support: {s}"),
            AsymptError::Unsupported(s) => write!(f, "unsupported regime: {s}"),
            AsymptError::InvalidInput(s) => write!(f, "invalid input: {s}"),
        }
    }
}

/// `Σ_ℓ (6ℓ)!/(288^ℓ (3ℓ)!) · x^{2ℓ}/(2ℓ)!` to degree `order`, the
/// compensation-weighted cubic multigraphs.
pub fn cubic_kernel_series(order: usize) -> UniSeries {
    let mut coeffs = alloc::vec![BigRational::zero(); order + 1];
    for l in 0..=order / 2 {
        coeffs[2 * l] = BigRational::new(
            factorial(6 * l),
            num_traits::pow(BigInt::from(288), l) * factorial(3 * l) * factorial(2 * l),
        );
    }
    UniSeries::from_coeffs(coeffs, order)
}

/// `e_r^{(σ)} = [z^{2r}] (cubic kernel series)^σ`.
pub fn e_sigma_r(sigma: &BigRational, r: usize) -> BigRational {
    cubic_kernel_series(2 * r).pow(sigma).expect("constant term is 1").coeff(2 * r)
}

/// All of `e_0^{(σ)}, …, e_{r_max}^{(σ)}` in one pass.
pub fn e_sigma_all(sigma: &BigRational, r_max: usize) -> Vec<BigRational> {
    let s = cubic_kernel_series(2 * r_max).pow(sigma).expect("constant term is 1");
    (0..=r_max).map(|r| s.coeff(2 * r)).collect()
}

/// Wright-type constant for connected multigraphs of excess `r`.
pub fn k_r(r: i64) -> Result<f64, AsymptError> {
    match r {
        r if r < -1 => Err(AsymptError::InvalidInput("K_r needs r ≥ −1")),
        -1 => Ok(1.0),
        0 => Ok(libm::sqrt(2.0 * PI) / 4.0),
        _ => {
            let r = r as usize;
            let c = cubic_kernel_series(2 * r).log().expect("constant term is 1").coeff(2 * r);
            let rf = r as f64;
            let ln = 0.5 * libm::log(2.0 * PI) - 1.5 * rf * LN_2 - ln_gamma(1.5 * rf) + ln_abs(&c);
            Ok(libm::exp(ln))
        }
    }
}

fn ln_k_r(r: i64) -> Result<f64, AsymptError> {
    Ok(libm::log(k_r(r)?))
}

/// Large-excess connected count on log scale, continuous in the excess
/// (`m` may be fractional): the `λ coth` saddle form.
pub fn ln_connected_large_excess(m: f64, n: f64) -> f64 {
    let lam = lambda_solve(m / n).root;
    let k = saddle_constant(lam / 2.0);
    // ln(2 sinh(λ/2)) stable for large λ
    let ln_2sinh = lam / 2.0 + libm::log1p(-libm::exp(-lam));
    libm::log(k) + m * libm::log(n) - 0.5 * libm::log(2.0 * PI * n) + n * ln_2sinh - m * libm::log(lam)
}

/// `ln (n^{2m}/(2^m m!))`.
pub fn ln_multigraph_count(m: usize, n: usize) -> f64 {
    2.0 * m as f64 * libm::log(n as f64) - m as f64 * LN_2 - ln_factorial(m)
}

/// Asymptotic `C_{m,n}` on log scale with the regime used.
pub fn connected_asympt(m: usize, n: usize) -> Result<(LogValue, RegimeTag), AsymptError> {
    if n == 0 || m + 1 < n {
        return Err(AsymptError::Support("connected multigraphs need m ≥ n − 1"));
    }
    let r = m as i64 - n as i64;
    let nf = n as f64;
    if r <= FIXED_EXCESS_MAX {
        let ln = ln_k_r(r)? + (nf + (3.0 * r as f64 - 1.0) / 2.0) * libm::log(nf);
        return Ok((LogValue::positive(ln), RegimeTag::FixedExcess { r }));
    }
    if 2.0 * m as f64 / nf - libm::log(nf) > DENSE_MARGIN {
        return Ok((LogValue::positive(ln_multigraph_count(m, n)), RegimeTag::Dense));
    }
    Ok((LogValue::positive(ln_connected_large_excess(m as f64, nf)), RegimeTag::LargeExcess))
}

/// `√(2π) Σ_{r ≤ r_max} σ^r e_r^{(σ)} A(3r + σ/2, μ)` and its last term.
pub fn critical_sum(sigma: &BigRational, mu: f64, r_max: usize) -> (f64, f64) {
    let es = e_sigma_all(sigma, r_max);
    let s = to_f64(sigma);
    let mut sum = 0.0;
    let mut last = 0.0;
    for (r, e) in es.iter().enumerate() {
        last = libm::pow(s, r as f64) * to_f64(e) * airy_a(3.0 * r as f64 + s / 2.0, mu);
        sum += last;
    }
    let c = libm::sqrt(2.0 * PI);
    (c * sum, c * last)
}

/// `μ` with `m = (n/2)(1 + μ n^{−1/3})`.
pub fn critical_mu(n: usize, m: usize) -> f64 {
    let nf = n as f64;
    (2.0 * m as f64 / nf - 1.0) * libm::cbrt(nf)
}

/// Satisfiability, subcritical: `(1 − 2m/n)^{1/4}`.
pub fn prob_sat_limit(n: usize, m: usize) -> Result<f64, AsymptError> {
    if n == 0 {
        return Err(AsymptError::InvalidInput("n must be positive"));
    }
    let alpha = m as f64 / n as f64;
    if alpha >= 0.5 {
        return Err(AsymptError::Unsupported("subcritical formula needs m/n < 1/2"));
    }
    Ok(libm::pow(1.0 - 2.0 * alpha, 0.25))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalEstimate {
    pub value: f64,
    pub mu: f64,
    pub partial_sum: f64,
    /// Magnitude of the last summed term.
    pub tail: f64,
}

/// Satisfiability in the critical window:
/// `n^{−1/12} √(2π) Σ_r e_r^{(1/2)}/2^r A(3r + 1/4, μ)`.
pub fn prob_sat_critical(n: usize, m: usize, r_max: usize) -> Result<CriticalEstimate, AsymptError> {
    if n == 0 {
        return Err(AsymptError::InvalidInput("n must be positive"));
    }
    let mu = critical_mu(n, m);
    if libm::fabs(mu) > CRITICAL_MU_MAX {
        return Err(AsymptError::Unsupported("m is outside the critical window"));
    }
    let (sum, last) = critical_sum(&BigRational::new(1.into(), 2.into()), mu, r_max);
    Ok(CriticalEstimate { value: libm::pow(n as f64, -1.0 / 12.0) * sum, mu, partial_sum: sum, tail: libm::fabs(last) })
}

/// Subcritical below the window, critical inside it, unsupported above.
pub fn prob_sat_asympt(n: usize, m: usize, r_max: usize) -> Result<(f64, RegimeTag), AsymptError> {
    if n == 0 {
        return Err(AsymptError::InvalidInput("n must be positive"));
    }
    let mu = critical_mu(n, m);
    if libm::fabs(mu) <= CRITICAL_MU_MAX {
        return Ok((prob_sat_critical(n, m, r_max)?.value, RegimeTag::Critical { mu }));
    }
    Ok((prob_sat_limit(n, m)?, RegimeTag::Subcritical))
}

/// Which critical constant to use for the random-input probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputCriticalVariant {
    /// `n^{1/12}/2^m / (√(2π) Σ 2^{−r} e_r^{(1/2)} A(3r+1/4, μ))`, what the
    /// coefficient asymptotics of `M` and `√M` give.
    Derived,
    /// `n^{1/12}/2^m / Σ 2^{−r} e_r^{(2)} A(3r+1/4, μ)` as printed.
    AsPrinted,
}

/// Probability that a uniform assignment satisfies a uniform satisfiable
/// expression; subcritical `2^{−m}(1 − 2m/n)^{−1/4}`, or the critical form.
pub fn prob_input_limit(n: usize, m: usize, r_max: usize, variant: InputCriticalVariant) -> Result<(LogValue, RegimeTag), AsymptError> {
    if n == 0 {
        return Err(AsymptError::InvalidInput("n must be positive"));
    }
    let nf = n as f64;
    let mu = critical_mu(n, m);
    if libm::fabs(mu) <= CRITICAL_MU_MAX {
        let s = match variant {
            InputCriticalVariant::Derived => critical_sum(&BigRational::new(1.into(), 2.into()), mu, r_max).0,
            InputCriticalVariant::AsPrinted => {
                let es = e_sigma_all(&BigRational::from_integer(2.into()), r_max);
                es.iter()
                    .enumerate()
                    .map(|(r, e)| libm::pow(0.5, r as f64) * to_f64(e) * airy_a(3.0 * r as f64 + 0.25, mu))
                    .sum()
            }
        };
        let ln = libm::log(nf) / 12.0 - m as f64 * LN_2 - libm::log(s);
        return Ok((LogValue::positive(ln), RegimeTag::Critical { mu }));
    }
    let alpha = m as f64 / nf;
    if alpha >= 0.5 {
        return Err(AsymptError::Unsupported("subcritical formula needs m/n < 1/2"));
    }
    let ln = -(m as f64) * LN_2 - 0.25 * libm::log(1.0 - 2.0 * alpha);
    Ok((LogValue::positive(ln), RegimeTag::Subcritical))
}

/// Fixed function as `n → ∞` with `m = αn`: the singletons are absorbed by
/// the saddle point `m/(2 i_1)`, leaving
/// `e^{−α e(f)}/(2n)^{αn} · Π_{ℓ≥2} B_ℓ(2α)^{i_ℓ}` with `B_ℓ = block_egf(ℓ)`.
///
/// `i_tail` lists `(ℓ, i_ℓ)` for blocks of size ≥ 2.
pub fn prob_fixed_function_limit(i_tail: &[(usize, usize)], alpha: f64, n: usize) -> Result<LogValue, AsymptError> {
    let mut essential = 0usize;
    let mut rank = 0usize;
    for &(l, c) in i_tail {
        if l < 2 {
            return Err(AsymptError::InvalidInput("tail blocks must have size ≥ 2"));
        }
        essential += l * c;
        rank += (l - 1) * c;
    }
    if essential > n {
        return Err(AsymptError::InvalidInput("blocks exceed n"));
    }
    if alpha * (n as f64) < rank as f64 {
        return Err(AsymptError::Support("fewer clauses than n − ξ"));
    }
    let nf = n as f64;
    let mut ln = -alpha * essential as f64 - alpha * nf * libm::log(2.0 * nf);
    for &(l, c) in i_tail {
        let b = block_egf(l).eval(2.0 * alpha);
        if b <= 0.0 {
            return Err(AsymptError::Support("block generating function vanishes"));
        }
        ln += c as f64 * libm::log(b);
    }
    Ok(LogValue::positive(ln))
}

/// Probability of one fixed function whose variables form a single block.
pub fn single_block_asympt(n: usize, m: usize) -> Result<(LogValue, SingleBlockCase), AsymptError> {
    if n == 0 || m + 1 < n {
        return Err(AsymptError::Support("a single block needs m ≥ n − 1"));
    }
    let nf = n as f64;
    let r = m as i64 - n as i64;
    let rf = r as f64;
    let ln_n = libm::log(nf);
    let (ln, case) = match r {
        -1 => (0.5 * libm::log(2.0 * PI / nf) - nf, SingleBlockCase::Tree),
        0 => (libm::log(PI / 2.0) - nf, SingleBlockCase::Unicyclic),
        r if r <= FIXED_EXCESS_MAX => {
            // c_r = √(2π)·K_r (see the ledger on the e^{−r} factor)
            let c = 0.5 * libm::log(2.0 * PI) + ln_k_r(r)?;
            (c - nf + rf / 2.0 * ln_n, SingleBlockCase::FixedExcess)
        }
        _ => {
            let t = 2.0 * m as f64 / nf - ln_n;
            if t > DENSE_MARGIN {
                (-(m as f64) * LN_2, SingleBlockCase::Dense)
            } else if 16.0 * rf * rf <= nf {
                let ln = 0.5 * libm::log(1.5) + rf / 2.0 - rf * libm::log(2.0 * libm::sqrt(3.0)) - nf + rf / 2.0 * libm::log(nf / rf);
                (ln, SingleBlockCase::SlowExcess)
            } else {
                let alpha = m as f64 / nf;
                let z = zeta_solve(alpha - 1.0).root;
                let k = saddle_constant(z);
                let ln_sinh_over = z + libm::log1p(-libm::exp(-2.0 * z)) - LN_2 - libm::log(z);
                if 2.0 * alpha < ln_n {
                    // K·(α^{α−1} cosh ζ / ((2ζ)^{α−1} e^α))^n, K = √α·(saddle constant)
                    let ln_cosh = z + libm::log1p(libm::exp(-2.0 * z)) - LN_2;
                    let per = (alpha - 1.0) * libm::log(alpha) + ln_cosh - (alpha - 1.0) * libm::log(2.0 * z) - alpha;
                    (0.5 * libm::log(alpha) + libm::log(k) + nf * per, SingleBlockCase::ProportionalExcess)
                } else {
                    let ln = libm::log(k) - rf * libm::log(2.0 * z) + nf * ln_sinh_over + (nf + rf + 0.5) * libm::log1p(rf / nf) - (nf + rf);
                    (ln, SingleBlockCase::LogDense)
                }
            }
        }
    };
    Ok((LogValue::positive(ln), case))
}

/// Probability of a fixed function with exactly two non-singleton-free
/// blocks of sizes `p` and `n − p` (`2 ≤ p ≤ n − p`), `m` clauses.
pub fn two_block_asympt(n: usize, p: usize, m: usize, regime: TwoBlockRegime) -> Result<LogValue, AsymptError> {
    if p < 1 || 2 * p > n {
        return Err(AsymptError::InvalidInput("need 1 ≤ p ≤ n − p"));
    }
    if m + 2 < n {
        return Err(AsymptError::Support("two blocks need m ≥ n − 2"));
    }
    let nf = n as f64;
    let pf = p as f64;
    let r = m as i64 - n as i64;
    let rf = r as f64;
    let ln_n = libm::log(nf);
    let ln = match regime {
        TwoBlockRegime::FixedExcessSingleLarge => {
            // d = −1 dominates: the small block is a tree, p^{p−2} of them.
            let kf = 0.5 * libm::log(2.0 * PI) + (pf - 2.0) * libm::log(pf) - pf + ln_k_r(r + 1)?;
            kf + ((rf + 3.0) / 2.0 - pf) * ln_n - nf
        }
        TwoBlockRegime::FixedExcessTwoLarge => {
            let q = pf / (nf - pf);
            let mut s = 0.0;
            for d in -1..=r + 1 {
                s += k_r(d)? * k_r(r - d)? * libm::pow(q, 1.5 * d as f64);
            }
            0.5 * libm::log(2.0 * PI * nf / (pf * (nf - pf))) - nf - (nf + rf) * ln_n
                + (nf + 1.5 * rf) * libm::log(nf - pf)
                + pf * libm::log(q)
                + libm::log(s)
        }
        TwoBlockRegime::LargeExcessSingleLarge => {
            if r < 1 {
                return Err(AsymptError::Unsupported("large-excess regime needs r ≥ 1"));
            }
            // small block a tree; the big one carries excess r + 1
            let big_n = nf - pf;
            ln_factorial(m) - 2.0 * m as f64 * ln_n + (pf - 2.0) * libm::log(pf)
                + ln_connected_large_excess(big_n + rf + 1.0, big_n)
        }
        TwoBlockRegime::LargeExcessTwoLarge => {
            if r < 1 {
                return Err(AsymptError::Unsupported("large-excess regime needs r ≥ 1"));
            }
            let gamma = pf / nf;
            let c = rf / nf;
            let a0 = two_block_optimum(gamma, c).root;
            let q = nf - pf;
            let f = |d: f64| ln_connected_large_excess(pf + d, pf) + ln_connected_large_excess(q + rf - d, q);
            let d0 = a0 * rf;
            let h = (0.01 * rf).max(1.0).min(0.25 * d0.min(rf - d0));
            let f2 = (f(d0 + h) - 2.0 * f(d0) + f(d0 - h)) / (h * h);
            if f2.is_nan() || f2 >= 0.0 {
                return Err(AsymptError::Unsupported("no interior maximum in the excess split"));
            }
            ln_factorial(m) - 2.0 * m as f64 * ln_n + f(d0) + 0.5 * libm::log(2.0 * PI / -f2)
        }
    };
    Ok(LogValue::positive(ln))
}

/// `d/da log g(a) = c·log(γ/(1−γ) · ζ₂/ζ₁)` with `ζ₁ = ζ(ac/γ)`,
/// `ζ₂ = ζ((1−a)c/(1−γ))`.
pub fn two_block_log_slope(gamma: f64, c: f64, a: f64) -> f64 {
    let z1 = zeta_solve(a * c / gamma).root;
    let z2 = zeta_solve((1.0 - a) * c / (1.0 - gamma)).root;
    c * libm::log(gamma / (1.0 - gamma) * z2 / z1)
}

/// Maximizer `a₀ ∈ (0,1)` of `g`, by bisection on the decreasing slope.
/// `residual` carries the final bracket width.
pub fn two_block_optimum(gamma: f64, c: f64) -> SaddleSolution {
    let (mut lo, mut hi) = (1e-12, 1.0 - 1e-12);
    let mut it = 0;
    while hi - lo > 1e-12 && it < 200 {
        let mid = 0.5 * (lo + hi);
        if two_block_log_slope(gamma, c, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        it += 1;
    }
    SaddleSolution { root: 0.5 * (lo + hi), residual: hi - lo, iterations: it }
}

/// `z(2e^z − 1)/(e^z − 1)`.
pub fn g2_saddle_lhs(z: f64) -> f64 {
    z + z / -libm::expm1(-z)
}

fn g2_saddle_deriv(z: f64) -> f64 {
    let em = -libm::expm1(-z); // 1 − e^{−z}
    1.0 + (em - z * libm::exp(-z)) / (em * em)
}

/// `4x/3 − 8x²/81` with `x = κ/n`.
pub fn g2_bootstrap(x: f64) -> f64 {
    4.0 * x / 3.0 - 8.0 * x * x / 81.0
}

/// Saddle point for blocks of size 2 with `m = n/2 + κ` clauses, and
/// `ln E_{m,n}(f)` from it:
/// `m!·2^{2m+1}/√(6πns)·s^{n/2−m}·exp(3ns/4 + ns²/48)`.
pub fn saddle_g2(n: usize, kappa: usize) -> Result<(SaddleSolution, LogValue), AsymptError> {
    if n == 0 || !n.is_multiple_of(2) || kappa == 0 {
        return Err(AsymptError::InvalidInput("need even n and κ ≥ 1"));
    }
    let nf = n as f64;
    let x = kappa as f64 / nf;
    let target = 1.0 + 2.0 * x;
    let mut z = g2_bootstrap(x).max(1e-12);
    let mut it = 0;
    let mut res = g2_saddle_lhs(z) - target;
    while libm::fabs(res) >= 1e-13 && it < 100 {
        z -= res / g2_saddle_deriv(z);
        res = g2_saddle_lhs(z) - target;
        it += 1;
    }
    if libm::fabs(res) >= 1e-12 {
        return Err(AsymptError::Unsupported("saddle point did not converge"));
    }
    let m = n / 2 + kappa;
    let mf = m as f64;
    let ln = ln_factorial(m) + (2.0 * mf + 1.0) * LN_2 - 0.5 * libm::log(6.0 * PI * nf * z)
        + (nf / 2.0 - mf) * libm::log(z)
        + 3.0 * nf * z / 4.0
        + nf * z * z / 48.0;
    Ok((SaddleSolution { root: z, residual: res, iterations: it }, LogValue::positive(ln)))
}
