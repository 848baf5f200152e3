//! Γ, 1/Γ, the Airy-type `A(y, μ)`, and the `ζ coth ζ` solver.

use core::f64::consts::PI;

/// `1/Γ(x)`, zero at the poles `x = 0, −1, −2, …`.
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == libm::floor(x) {
        return 0.0;
    }
    if x < 0.5 {
        // 1/Γ(x) = Γ(1−x)·sin(πx)/π
        return libm::tgamma(1.0 - x) * libm::sin(PI * x) / PI;
    }
    1.0 / libm::tgamma(x)
}

/// `(ln|1/Γ(x)|, sign)`; `(-inf, 0)` at poles.
pub fn ln_recip_gamma(x: f64) -> (f64, f64) {
    if x <= 0.0 && x == libm::floor(x) {
        return (f64::NEG_INFINITY, 0.0);
    }
    let (lg, sign) = libm::lgamma_r(x);
    (-lg, sign as f64)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln n!`
pub fn ln_factorial(n: usize) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

/// `A(y, μ) = e^{−μ³/6}/3^{(y+1)/3} · Σ_k (3^{2/3}μ/2)^k / (k!·Γ((y+1−2k)/3))`.
///
/// Summed until five consecutive terms fall below `1e−17` of the running
/// total once the `c^k/k!` factor has started to shrink.
pub fn airy_a(y: f64, mu: f64) -> f64 {
    let c = libm::cbrt(9.0) * mu / 2.0;
    let mut sum = recip_gamma((y + 1.0) / 3.0);
    if mu != 0.0 {
        let lnc = libm::log(libm::fabs(c));
        let csign = if c < 0.0 { -1.0 } else { 1.0 };
        let mut small = 0;
        let mut k = 1usize;
        while k < 5000 {
            let arg = (y + 1.0 - 2.0 * k as f64) / 3.0;
            let (lrg, sg) = ln_recip_gamma(arg);
            let term = if sg == 0.0 {
                0.0
            } else {
                let sign = sg * if k % 2 == 1 { csign } else { 1.0 };
                sign * libm::exp(k as f64 * lnc - ln_factorial(k) + lrg)
            };
            sum += term;
            if libm::fabs(term) <= 1e-17 * libm::fabs(sum) && libm::fabs(c) < k as f64 {
                small += 1;
                if small >= 5 {
                    break;
                }
            } else {
                small = 0;
            }
            k += 1;
        }
    }
    libm::exp(-mu * mu * mu / 6.0) * libm::pow(3.0, -(y + 1.0) / 3.0) * sum
}

/// Root of a scalar equation with its residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleSolution {
    pub root: f64,
    pub residual: f64,
    pub iterations: u32,
}

/// `ζ coth ζ − 1`, without cancellation near 0.
pub fn zcoth_minus_one(z: f64) -> f64 {
    if z < 0.05 {
        let z2 = z * z;
        z2 / 3.0 - z2 * z2 / 45.0 + 2.0 * z2 * z2 * z2 / 945.0 - z2 * z2 * z2 * z2 / 4725.0
    } else {
        z / libm::tanh(z) - 1.0
    }
}

fn zcoth_deriv(z: f64) -> f64 {
    if z < 0.05 {
        let z2 = z * z;
        2.0 * z / 3.0 - 4.0 * z * z2 / 45.0 + 12.0 * z * z2 * z2 / 945.0
    } else {
        let s = libm::sinh(z);
        1.0 / libm::tanh(z) - z / (s * s)
    }
}

/// Solves `ζ coth ζ = 1 + x` for `x > 0` (safeguarded Newton).
pub fn zeta_solve(x: f64) -> SaddleSolution {
    assert!(x > 0.0, "ζ coth ζ = 1 + x needs x > 0");
    let (mut lo, mut hi) = (0.0f64, 1.0 + x + 1.0);
    let mut z = if x < 1.0 { libm::sqrt(3.0 * x) } else { 1.0 + x };
    let mut it = 0;
    loop {
        let f = zcoth_minus_one(z) - x;
        if f > 0.0 {
            hi = hi.min(z);
        } else {
            lo = lo.max(z);
        }
        it += 1;
        if libm::fabs(f) < 1e-14 * (1.0 + x) || it > 200 {
            return SaddleSolution { root: z, residual: f, iterations: it };
        }
        let mut next = z - f / zcoth_deriv(z);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if next == z {
            return SaddleSolution { root: z, residual: f, iterations: it };
        }
        z = next;
    }
}

/// `λ` with `(λ/2) coth(λ/2) = ratio`, ratio > 1.
pub fn lambda_solve(ratio: f64) -> SaddleSolution {
    let s = zeta_solve(ratio - 1.0);
    SaddleSolution { root: 2.0 * s.root, ..s }
}

/// `(e^{2ζ} − 1 − 2ζ)/√(ζ(e^{4ζ} − 1 − 4ζe^{2ζ}))`; tends to √(3/2) at 0.
pub fn saddle_constant(z: f64) -> f64 {
    if z < 1.0 {
        // Both brackets as power series in ζ.
        let mut num = 0.0;
        let mut den = 0.0;
        let mut fact = 1.0;
        for k in 1..40 {
            fact *= k as f64;
            let kf = k as f64;
            if k >= 2 {
                num += libm::pow(2.0, kf) * libm::pow(z, kf - 2.0) / fact;
            }
            if k >= 3 {
                den += (libm::pow(4.0, kf) - libm::pow(2.0, kf + 1.0) * kf) * libm::pow(z, kf - 3.0) / fact;
            }
        }
        // num·ζ² / √(ζ·den·ζ³)
        num / libm::sqrt(den)
    } else {
        let e2 = libm::exp(-2.0 * z);
        (1.0 - e2 * (1.0 + 2.0 * z)) / libm::sqrt(z * (1.0 - e2 * e2 - 4.0 * z * e2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saddle_constant_is_continuous() {
        let a = saddle_constant(1.0 - 1e-9);
        let b = saddle_constant(1.0 + 1e-9);
        assert!((a - b).abs() < 1e-9, "{a} {b}");
        assert!((saddle_constant(1e-6) - (1.5f64).sqrt()).abs() < 1e-5);
    }

    #[test]
    fn zeta_residuals() {
        for &x in &[1e-6, 1e-3, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0] {
            let s = zeta_solve(x);
            assert!(s.residual.abs() < 1e-12, "x={x} {s:?}");
        }
    }
}
