//! Fast exact extraction of `n!·[z^j v^n]` from `M^σ` and `log M`.
//!
//! `M(z,v) = e^v · A(z,v)` with `A = Σ_i z^i q_i(v)` and
//! `q_i(v) = Σ_t S(2i,t) v^t / (2^i i!)` (Touchard), so every z-coefficient
//! of `A^σ` or `log A` is a polynomial in `v` of degree ≤ 2j. We evaluate at
//! the integer points `0..=2j`, run the scalar series recurrence there,
//! interpolate, and apply the final linear functional — all modulo a batch
//! of 62-bit primes. The integer `2^j·j!·b^n·(weighted count)` is then
//! rebuilt by CRT. Cost is `O(j³)` per prime instead of the `O(j²n²)` of
//! the dense bivariate recurrence.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{factorial, ipow};

/// Montgomery arithmetic modulo an odd prime below 2^62.
#[derive(Clone, Copy, Debug)]
struct Mont {
    p: u64,
    nprime: u64,
    r2: u64,
}

impl Mont {
    fn new(p: u64) -> Self {
        let mut inv: u64 = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Mont { p, nprime: inv.wrapping_neg(), r2 }
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.nprime);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn enc(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    fn enc_big(&self, a: &BigUint) -> u64 {
        self.enc((a % self.p).to_u64().unwrap())
    }

    fn dec(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = self.enc(1);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

struct Primes {
    next: u64,
}

impl Iterator for Primes {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.next > 3 {
            let c = self.next;
            self.next -= 2;
            if is_prime(c) {
                return Some(c);
            }
        }
        None
    }
}

fn primes() -> Primes {
    Primes { next: (1u64 << 62) - 1 }
}

#[derive(Clone, Debug)]
enum Kind {
    /// `M^{a/b}`
    Pow { a: u64, b: u64 },
    Log,
}

/// Per-prime residues of `n!·[z^j v^n]` (power) or `C_{j,n}` (log) for each
/// requested `j`, each multiplied by `scale_j`.
fn residues(mt: &Mont, n: usize, targets: &[usize], kind: &Kind) -> Vec<u64> {
    let j_max = *targets.iter().max().unwrap();
    let d = 2 * j_max;
    let one = mt.enc(1);

    // Small inverses and factorial tables (Montgomery form).
    let lim = d.max(n).max(2) + 1;
    let mut fact = vec![one; lim + 1];
    for k in 1..=lim {
        fact[k] = mt.mul(fact[k - 1], mt.enc(k as u64));
    }
    let mut inv_fact = vec![one; lim + 1];
    inv_fact[lim] = mt.inv(fact[lim]);
    for k in (1..=lim).rev() {
        inv_fact[k - 1] = mt.mul(inv_fact[k], mt.enc(k as u64));
    }
    let inv_k: Vec<u64> = (0..=lim).map(|k| if k == 0 { 0 } else { mt.mul(inv_fact[k], fact[k - 1]) }).collect();

    // Stirling numbers of the second kind S(2i, t), rows for even k only kept.
    let mut stirling_even: Vec<Vec<u64>> = Vec::with_capacity(j_max + 1);
    let mut row = vec![one];
    stirling_even.push(row.clone());
    for k in 1..=d {
        let mut next = vec![0u64; k + 1];
        for t in 1..=k {
            let a = if t < row.len() { mt.mul(mt.enc(t as u64), row[t]) } else { 0 };
            let b = row[t - 1];
            next[t] = mt.add(a, b);
        }
        row = next;
        if k % 2 == 0 {
            stirling_even.push(row.clone());
        }
    }
    // 1/(2^i i!)
    let inv2 = mt.inv(mt.enc(2));
    let mut qscale = vec![one; j_max + 1];
    for i in 1..=j_max {
        qscale[i] = mt.mul(mt.mul(qscale[i - 1], inv2), inv_k[i]);
    }

    let (sigma, sigma1) = match kind {
        Kind::Pow { a, b } => {
            let s = mt.mul(mt.enc(*a), mt.inv(mt.enc(*b)));
            (s, mt.add(s, one))
        }
        Kind::Log => (0, 0),
    };

    // values[j][x] for the targets only.
    let mut want = vec![false; j_max + 1];
    for &t in targets {
        want[t] = true;
    }
    let mut values: Vec<Vec<u64>> = vec![Vec::new(); j_max + 1];
    let mut a = vec![0u64; j_max + 1];
    let mut f = vec![0u64; j_max + 1];
    let kvals: Vec<u64> = (0..=j_max).map(|k| mt.enc(k as u64)).collect();
    for x in 0..=d {
        let xm = mt.enc(x as u64);
        a[0] = one;
        for i in 1..=j_max {
            let s = &stirling_even[i];
            let mut acc = 0u64;
            for t in (0..s.len()).rev() {
                acc = mt.add(mt.mul(acc, xm), s[t]);
            }
            a[i] = mt.mul(acc, qscale[i]);
        }
        match kind {
            Kind::Pow { .. } => {
                f[0] = one;
                for k in 1..=j_max {
                    let mut acc = 0u64;
                    for i in 1..=k {
                        // (σ+1)·i − k
                        let w = mt.sub(mt.mul(sigma1, kvals[i]), kvals[k]);
                        acc = mt.add(acc, mt.mul(mt.mul(w, a[i]), f[k - i]));
                    }
                    f[k] = mt.mul(acc, inv_k[k]);
                }
            }
            Kind::Log => {
                f[0] = 0;
                for k in 1..=j_max {
                    let mut acc = 0u64;
                    for i in 1..k {
                        acc = mt.add(acc, mt.mul(mt.mul(kvals[i], f[i]), a[k - i]));
                    }
                    f[k] = mt.sub(a[k], mt.mul(acc, inv_k[k]));
                }
            }
        }
        for j in 0..=j_max {
            if want[j] && x <= 2 * j {
                values[j].push(f[j]);
            }
        }
    }

    let mut out = Vec::with_capacity(targets.len());
    for &j in targets {
        let coeffs = interpolate(mt, &values[j], &inv_fact);
        let r = match kind {
            Kind::Pow { b, .. } => {
                // n!·Σ_t c_t σ^{n−t}/(n−t)!
                let mut acc = 0u64;
                let mut spow = one;
                for s in 0..=n {
                    let t = n - s;
                    if t < coeffs.len() {
                        acc = mt.add(acc, mt.mul(mt.mul(coeffs[t], spow), inv_fact[s]));
                    }
                    spow = mt.mul(spow, sigma);
                }
                let w = mt.mul(acc, fact[n]);
                // scale to the integer 2^j j! b^n W
                let scale = mt.mul(mt.mul(mt.pow(mt.enc(2), j as u64), fact_at(mt, &fact, j)), mt.pow(mt.enc(*b), n as u64));
                mt.mul(w, scale)
            }
            Kind::Log => {
                let mut c = if n < coeffs.len() && j > 0 { mt.mul(coeffs[n], fact[n]) } else { 0 };
                if j == 0 && n == 1 {
                    c = one;
                }
                let scale = mt.mul(mt.pow(mt.enc(2), j as u64), fact_at(mt, &fact, j));
                mt.mul(c, scale)
            }
        };
        out.push(mt.dec(r));
    }
    out
}

fn fact_at(mt: &Mont, fact: &[u64], j: usize) -> u64 {
    if j < fact.len() {
        fact[j]
    } else {
        let mut acc = fact[fact.len() - 1];
        for k in fact.len()..=j {
            acc = mt.mul(acc, mt.enc(k as u64));
        }
        acc
    }
}

/// Monomial coefficients of the polynomial through `(x, vals[x])`,
/// `x = 0..vals.len()`, via forward differences.
fn interpolate(mt: &Mont, vals: &[u64], inv_fact: &[u64]) -> Vec<u64> {
    let d = vals.len() - 1;
    let mut diff = vals.to_vec();
    let mut newton = Vec::with_capacity(d + 1);
    for k in 0..=d {
        newton.push(mt.mul(diff[0], inv_fact[k]));
        for i in 0..d - k {
            diff[i] = mt.sub(diff[i + 1], diff[i]);
        }
    }
    // P = Σ_k newton[k]·x(x−1)…(x−k+1), Horner from the top.
    let mut poly = vec![0u64; d + 1];
    let mut len = 1;
    poly[0] = newton[d];
    for k in (0..d).rev() {
        // poly ← poly·(x − k) + newton[k]
        let km = mt.enc(k as u64);
        for i in (0..=len).rev() {
            let shifted = if i > 0 { poly[i - 1] } else { 0 };
            let here = if i < len { mt.mul(poly[i], km) } else { 0 };
            poly[i] = mt.sub(shifted, here);
        }
        len += 1;
        poly[0] = mt.add(poly[0], newton[k]);
    }
    poly
}

fn crt_reconstruct(per_prime: &[(u64, Vec<u64>)], count: usize) -> Vec<BigUint> {
    let mut xs = vec![BigUint::zero(); count];
    let mut modulus = BigUint::one();
    for (p, res) in per_prime {
        let mp = Mont::new(*p);
        let m_mod = mp.enc_big(&modulus);
        let m_inv = mp.inv(m_mod);
        for (x, r) in xs.iter_mut().zip(res) {
            let cur = mp.enc_big(x);
            let t = mp.mul(mp.sub(mp.enc(*r), cur), m_inv);
            *x += &modulus * mp.dec(t);
        }
        modulus *= *p;
    }
    xs
}

fn run(n: usize, targets: &[usize], kind: Kind, bound_bits: u64) -> Vec<BigUint> {
    let mut per_prime = Vec::new();
    let mut bits = 0.0f64;
    for p in primes() {
        let mt = Mont::new(p);
        per_prime.push((p, residues(&mt, n, targets, &kind)));
        bits += libm::log2(p as f64);
        // One spare prime on top of the bound.
        if bits > bound_bits as f64 + 64.0 {
            break;
        }
    }
    crt_reconstruct(&per_prime, targets.len())
}

/// `n!·[z^j v^n] M^σ = Σ_G κ(G)σ^{c(G)}` for each `j` in `targets`; σ > 0.
pub fn weighted_counts(n: usize, targets: &[usize], sigma: &BigRational) -> Vec<BigRational> {
    assert!(sigma.is_positive(), "σ must be positive");
    if targets.is_empty() {
        return Vec::new();
    }
    if n == 0 {
        return targets.iter().map(|&j| if j == 0 { BigRational::one() } else { BigRational::zero() }).collect();
    }
    let a = sigma.numer().to_biguint().unwrap();
    let b = sigma.denom().to_biguint().unwrap();
    let (a64, b64) = (a.to_u64().expect("σ numerator fits u64"), b.to_u64().expect("σ denominator fits u64"));
    let j_max = *targets.iter().max().unwrap();
    let big = if a > b { a.clone() } else { b.clone() };
    let bound = num_traits::pow(BigUint::from(n), 2 * j_max) * num_traits::pow(big, n);
    let ints = run(n, targets, Kind::Pow { a: a64, b: b64 }, bound.bits());
    ints.into_iter()
        .zip(targets)
        .map(|(x, &j)| {
            let scale = ipow(&BigInt::from(2), j) * factorial(j) * ipow(&BigInt::from(b64), n);
            BigRational::new(BigInt::from(x), scale)
        })
        .collect()
}

/// `C_{j,n} = n!·[z^j v^n] log M` for each `j` in `targets`.
pub fn connected_counts(n: usize, targets: &[usize]) -> Vec<BigRational> {
    if targets.is_empty() {
        return Vec::new();
    }
    if n == 0 {
        return vec![BigRational::zero(); targets.len()];
    }
    let j_max = *targets.iter().max().unwrap();
    let bound = num_traits::pow(BigUint::from(n), 2 * j_max);
    let ints = run(n, targets, Kind::Log, bound.bits());
    ints.into_iter()
        .zip(targets)
        .map(|(x, &j)| {
            let scale = ipow(&BigInt::from(2), j) * factorial(j);
            BigRational::new(BigInt::from(x), scale)
        })
        .collect()
}
