//! Labelled multigraphs, compensation factors and exact census counts.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::rational::{factorial, ipow, q};
use crate::series::UniSeries;

/// Multiset of unordered vertex pairs on vertices `1..=n`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultigraphError {
    VertexOutOfRange { vertex: usize, n: usize },
    /// Exhaustive enumeration would need `required` drawings.
    CapExceeded { required: BigUint, cap: u64 },
}

impl fmt::Display for MultigraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultigraphError::VertexOutOfRange { vertex, n } => write!(f, "vertex {vertex} not in 1..={n}"),
            MultigraphError::CapExceeded { required, cap } => {
                write!(f, "enumeration needs {required} drawings, cap is {cap}")
            }
        }
    }
}

impl Multigraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, MultigraphError> {
        let mut out = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(MultigraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            out.push(if u <= v { (u, v) } else { (v, u) });
        }
        out.sort_unstable();
        Ok(Multigraph { n, edges: out })
    }

    pub fn empty(n: usize) -> Self {
        Multigraph { n, edges: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// `m − n`.
    pub fn excess(&self) -> i64 {
        self.m() as i64 - self.n as i64
    }

    /// Canonical sorted edge list, each pair as `(min, max)`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn loops(&self) -> usize {
        self.edges.iter().filter(|(u, v)| u == v).count()
    }

    /// Multiplicity of each distinct pair.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.edges.len() {
            let mut j = i;
            while j < self.edges.len() && self.edges[j] == self.edges[i] {
                j += 1;
            }
            out.push(j - i);
            i = j;
        }
        out
    }

    pub fn is_simple(&self) -> bool {
        self.loops() == 0 && self.multiplicities().iter().all(|&k| k == 1)
    }

    /// Number of vertex sequences `u1 v1 … um vm` drawing this multigraph:
    /// `m!·2^{#non-loops}/Π mult!`.
    pub fn seqv(&self) -> BigInt {
        let non_loops = self.m() - self.loops();
        let mut denom = BigInt::one();
        for k in self.multiplicities() {
            denom *= factorial(k);
        }
        factorial(self.m()) * ipow(&BigInt::from(2), non_loops) / denom
    }

    /// `κ(G) = seqv(G)/(2^m m!)`.
    pub fn kappa(&self) -> BigRational {
        BigRational::new(self.seqv(), ipow(&BigInt::from(2), self.m()) * factorial(self.m()))
    }

    /// Component label (smallest vertex) per vertex, index 0 unused.
    fn roots(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..=self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        (0..=self.n).map(|x| find(&mut parent, x)).collect()
    }

    pub fn connected_components(&self) -> usize {
        let roots = self.roots();
        (1..=self.n).filter(|&x| roots[x] == x).count()
    }

    /// Vertex sets of the components, sorted by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let roots = self.roots();
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 1..=self.n {
            by_root.entry(roots[x]).or_default().push(x);
        }
        by_root.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components() == 1
    }
}

/// `M_{m,n} = n^{2m}/(2^m m!)`.
pub fn multigraph_count(m: usize, n: usize) -> BigRational {
    BigRational::new(
        ipow(&BigInt::from(n), 2 * m),
        ipow(&BigInt::from(2), m) * factorial(m),
    )
}

/// Cubic multigraphs on `2r` vertices: `(6r)!/((3!)^{2r} 2^{3r} (3r)!)`.
pub fn cubic_count(r: usize) -> BigRational {
    BigRational::new(
        factorial(6 * r),
        ipow(&BigInt::from(6), 2 * r) * ipow(&BigInt::from(2), 3 * r) * factorial(3 * r),
    )
}

/// Multigraphs of minimum degree ≥ 2: `(2m)!/(2^m m!)·[x^{2m}](e^x − 1 − x)^n`.
pub fn core_count(m: usize, n: usize) -> BigRational {
    let order = 2 * m;
    let mut coeffs = vec![BigRational::zero(); order + 1];
    for (k, c) in coeffs.iter_mut().enumerate().skip(2) {
        *c = BigRational::new(BigInt::one(), factorial(k));
    }
    let base = UniSeries::from_coeffs(coeffs, order);
    let qnm = base.pow_int(n).coeff(order);
    qnm * BigRational::new(factorial(2 * m), ipow(&BigInt::from(2), m) * factorial(m))
}

/// One step of the multigraph process: `2m` independent uniform vertices.
pub fn sample_multigraph<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Multigraph {
    assert!(n >= 1, "need at least one vertex");
    let edges = (0..m).map(|_| (rng.random_range(1..=n), rng.random_range(1..=n)));
    Multigraph::new(n, edges).expect("sampled vertices are in range")
}

/// Every multigraph reachable by the process, each once, with its κ.
///
/// Walks all `n^{2m}` drawings (refused above `cap`) and tallies; κ is the
/// tally over `2^m m!`, independent of the closed form in [`Multigraph::kappa`].
pub fn enumerate_multigraphs(n: usize, m: usize, cap: u64) -> Result<Vec<(Multigraph, BigRational)>, MultigraphError> {
    let required = num_traits::pow(BigUint::from(n), 2 * m);
    if required > BigUint::from(cap) {
        return Err(MultigraphError::CapExceeded { required, cap });
    }
    let total: u64 = num_traits::ToPrimitive::to_u64(&required).unwrap();
    let mut tally: BTreeMap<Multigraph, u64> = BTreeMap::new();
    let mut digits = vec![0usize; 2 * m];
    for idx in 0..total {
        let mut x = idx;
        for d in digits.iter_mut() {
            *d = (x % n as u64) as usize + 1;
            x /= n as u64;
        }
        let g = Multigraph::new(n, digits.chunks(2).map(|c| (c[0], c[1]))).unwrap();
        *tally.entry(g).or_insert(0) += 1;
    }
    let denom = ipow(&BigInt::from(2), m) * factorial(m);
    Ok(tally
        .into_iter()
        .map(|(g, c)| (g, BigRational::new(BigInt::from(c), denom.clone())))
        .collect())
}

/// Compensation-weighted total of a family given as an iterator.
pub fn census<'a>(family: impl IntoIterator<Item = &'a Multigraph>) -> BigRational {
    family.into_iter().fold(q(0), |acc, g| acc + g.kappa())
}
