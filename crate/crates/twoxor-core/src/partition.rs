//! Integer partitions `i = (i_1, i_2, …)` with `i_ℓ` blocks of size `ℓ`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::rational::{factorial, ipow};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerPartition {
    /// `counts[ℓ-1] = i_ℓ`, no trailing zeros.
    counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsePartitionError(pub String);

impl fmt::Display for ParsePartitionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bad partition: {}", self.0)
    }
}

impl IntegerPartition {
    /// From block-size multiplicities, `counts[ℓ-1] = i_ℓ`.
    pub fn from_counts(mut counts: Vec<usize>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        IntegerPartition { counts }
    }

    pub fn from_parts(parts: &[usize]) -> Self {
        let mut counts = vec![0; parts.iter().copied().max().unwrap_or(0)];
        for &p in parts {
            assert!(p >= 1, "parts are positive");
            counts[p - 1] += 1;
        }
        Self::from_counts(counts)
    }

    /// All singletons: the partition of TRUE.
    pub fn singletons(n: usize) -> Self {
        Self::from_counts(vec![n])
    }

    /// One block holding every variable.
    pub fn single_block(n: usize) -> Self {
        Self::from_parts(&[n])
    }

    /// `i_ℓ`.
    pub fn count(&self, l: usize) -> usize {
        if l == 0 {
            return 0;
        }
        self.counts.get(l - 1).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// `(ℓ, i_ℓ)` for every `i_ℓ > 0`, increasing `ℓ`.
    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (i + 1, c))
    }

    /// Parts in decreasing order.
    pub fn parts(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (l, c) in self.blocks() {
            out.extend(core::iter::repeat_n(l, c));
        }
        out.reverse();
        out
    }

    /// `s(i) = Σ ℓ·i_ℓ`.
    pub fn size(&self) -> usize {
        self.blocks().map(|(l, c)| l * c).sum()
    }

    /// `ξ(i) = Σ i_ℓ`.
    pub fn num_blocks(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `n − i_1`.
    pub fn essential(&self) -> usize {
        self.size() - self.count(1)
    }

    pub fn largest(&self) -> usize {
        self.counts.len()
    }

    /// Functions in the class: `2^{n−ξ}·n!/Π i_ℓ!(ℓ!)^{i_ℓ}`.
    pub fn class_size(&self) -> BigInt {
        let n = self.size();
        let mut denom = BigInt::one();
        for (l, c) in self.blocks() {
            denom *= factorial(c) * ipow(&factorial(l), c);
        }
        ipow(&BigInt::from(2), n - self.num_blocks()) * factorial(n) / denom
    }
}

impl fmt::Display for IntegerPartition {
    /// `"3+2+1+1"`; the empty partition prints as `"0"`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.parts();
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (k, p) in parts.iter().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for IntegerPartition {
    type Err = ParsePartitionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = Vec::new();
        for tok in s.split('+') {
            let tok = tok.trim();
            let p: usize = tok.parse().map_err(|_| ParsePartitionError(String::from(s)))?;
            if p == 0 {
                return Err(ParsePartitionError(String::from(s)));
            }
            parts.push(p);
        }
        Ok(Self::from_parts(&parts))
    }
}

/// Partitions of `n`, parts listed decreasingly, in reverse-lex order
/// (`n`, then `n−1+1`, …, then `1+…+1`).
pub fn partitions_of(n: usize) -> Vec<IntegerPartition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<IntegerPartition>) {
        if rest == 0 {
            out.push(IntegerPartition::from_parts(cur));
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// `p(n)`, by the usual dynamic programme.
pub fn partition_count(n: usize) -> BigUint {
    let mut p = vec![BigUint::zero(); n + 1];
    p[0] = BigUint::one();
    for part in 1..=n {
        for k in part..=n {
            let add = p[k - part].clone();
            p[k] += add;
        }
    }
    p[n].clone()
}

/// `p(n) + 1`: one class per partition, plus FALSE.
pub fn num_classes(n: usize) -> BigUint {
    partition_count(n) + 1u32
}

pub fn class_size(i: &IntegerPartition) -> BigInt {
    i.class_size()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn running_example_class() {
        let i = IntegerPartition::from_parts(&[3, 2, 1, 1]);
        assert_eq!(i.class_size(), BigInt::from(1680));
        assert_eq!(i.to_string(), "3+2+1+1");
        assert_eq!(i.num_blocks(), 4);
        assert_eq!(i.essential(), 5);
    }

    #[test]
    fn classes_of_five() {
        assert_eq!(partitions_of(5).len(), 7);
        assert_eq!(num_classes(5), BigUint::from(8u32));
    }
}
