//! 2-Xor expressions, their reduction to canonical Boolean functions, and
//! the bijection with 4/8-coloured multigraphs.
//!
//! A clause `l ⊕ l'` is true iff its two literals take different values;
//! an expression is the conjunction of its clauses.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use rand::Rng;

use crate::multigraph::Multigraph;
use crate::partition::IntegerPartition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// 1-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, positive: false }
    }

    /// Signed form: `3` for x3, `-3` for x̄3.
    pub fn from_signed(s: i64) -> Option<Self> {
        if s == 0 {
            return None;
        }
        Some(Literal { var: s.unsigned_abs() as usize, positive: s > 0 })
    }

    pub fn signed(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    pub fn value(self, assignment: &[bool]) -> bool {
        assignment[self.var - 1] == self.positive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause(pub Literal, pub Literal);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Expression {
    n: usize,
    clauses: Vec<Clause>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XorError {
    VariableOutOfRange { var: usize, n: usize },
    AssignmentLength { expected: usize, got: usize },
    Parse(String),
}

impl fmt::Display for XorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XorError::VariableOutOfRange { var, n } => write!(f, "variable {var} not in 1..={n}"),
            XorError::AssignmentLength { expected, got } => {
                write!(f, "assignment has {got} values, expected {expected}")
            }
            XorError::Parse(s) => write!(f, "cannot parse expression: {s}"),
        }
    }
}

impl Expression {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self, XorError> {
        for c in &clauses {
            for l in [c.0, c.1] {
                if l.var == 0 || l.var > n {
                    return Err(XorError::VariableOutOfRange { var: l.var, n });
                }
            }
        }
        Ok(Expression { n, clauses })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Parses the comma-separated clause list, e.g. `"1 -3, -6 5, 7 -7"`.
    ///
    /// Grammar: `expr := "" | clause ("," clause)*`, `clause := lit ws lit`,
    /// `lit := ["-"] digits` (nonzero). Whitespace around tokens is free.
    pub fn parse(n: usize, text: &str) -> Result<Self, XorError> {
        let mut clauses = Vec::new();
        if !text.trim().is_empty() {
            for part in text.split(',') {
                let lits: Vec<&str> = part.split_whitespace().collect();
                if lits.len() != 2 {
                    return Err(XorError::Parse(String::from(part.trim())));
                }
                let mut parsed = [Literal::pos(1); 2];
                for (slot, tok) in parsed.iter_mut().zip(&lits) {
                    let s: i64 = tok.parse().map_err(|_| XorError::Parse(String::from(*tok)))?;
                    *slot = Literal::from_signed(s).ok_or_else(|| XorError::Parse(String::from(*tok)))?;
                }
                clauses.push(Clause(parsed[0], parsed[1]));
            }
        }
        Self::new(n, clauses)
    }

    pub fn evaluate(&self, assignment: &[bool]) -> Result<bool, XorError> {
        if assignment.len() != self.n {
            return Err(XorError::AssignmentLength { expected: self.n, got: assignment.len() });
        }
        Ok(self.clauses.iter().all(|c| c.0.value(assignment) != c.1.value(assignment)))
    }

    pub fn reduce(&self) -> FunctionRepr {
        reduce(self)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.clauses.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} {}", c.0.signed(), c.1.signed())?;
        }
        Ok(())
    }
}

/// Canonical Boolean function: FALSE, or blocks of literals that must all
/// share one value. Each block's smallest variable is positive and blocks are
/// ordered by smallest variable, so equal functions are equal values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctionRepr {
    False,
    Blocks { n: usize, blocks: Vec<Vec<Literal>> },
}

impl FunctionRepr {
    pub fn is_false(&self) -> bool {
        matches!(self, FunctionRepr::False)
    }

    /// `None` for FALSE.
    pub fn partition(&self) -> Option<IntegerPartition> {
        match self {
            FunctionRepr::False => None,
            FunctionRepr::Blocks { blocks, .. } => {
                let sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
                Some(IntegerPartition::from_parts(&sizes))
            }
        }
    }

    /// `n − i_1`; FALSE has no essential variable either.
    pub fn essential_count(&self) -> usize {
        match self {
            FunctionRepr::False => 0,
            FunctionRepr::Blocks { n, blocks } => n - blocks.iter().filter(|b| b.len() == 1).count(),
        }
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        match self {
            FunctionRepr::False => false,
            FunctionRepr::Blocks { blocks, .. } => blocks.iter().all(|b| {
                let v = b[0].value(assignment);
                b.iter().all(|l| l.value(assignment) == v)
            }),
        }
    }

    /// Applies the global flip `x ↦ x̄` to every member of block `k` and
    /// re-canonicalizes — the same function.
    pub fn flip_block(&self, k: usize) -> FunctionRepr {
        match self {
            FunctionRepr::False => FunctionRepr::False,
            FunctionRepr::Blocks { n, blocks } => {
                let mut blocks = blocks.clone();
                for l in blocks[k].iter_mut() {
                    l.positive = !l.positive;
                }
                FunctionRepr::canonical(*n, blocks)
            }
        }
    }

    fn canonical(n: usize, mut blocks: Vec<Vec<Literal>>) -> FunctionRepr {
        for b in blocks.iter_mut() {
            b.sort_by_key(|l| l.var);
            if !b[0].positive {
                for l in b.iter_mut() {
                    l.positive = !l.positive;
                }
            }
        }
        blocks.sort_by_key(|b| b[0].var);
        FunctionRepr::Blocks { n, blocks }
    }
}

impl fmt::Display for FunctionRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionRepr::False => write!(f, "FALSE"),
            FunctionRepr::Blocks { blocks, .. } => {
                for b in blocks {
                    write!(f, "{{")?;
                    for (k, l) in b.iter().enumerate() {
                        if k > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", l.signed())?;
                    }
                    write!(f, "}}")?;
                }
                Ok(())
            }
        }
    }
}

/// Union–find where each node stores its parity relative to its parent.
struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind { parent: (0..=n).collect(), parity: vec![false; n + 1] }
    }

    /// (root, value(x) ⊕ value(root))
    fn find(&mut self, x: usize) -> (usize, bool) {
        let mut path = Vec::new();
        let mut cur = x;
        while self.parent[cur] != cur {
            path.push(cur);
            cur = self.parent[cur];
        }
        let root = cur;
        // Compress, accumulating parity from the top down.
        let mut acc = false;
        for &node in path.iter().rev() {
            acc ^= self.parity[node];
            self.parity[node] = acc;
            self.parent[node] = root;
        }
        (root, if path.is_empty() { false } else { self.parity[x] })
    }

    /// Imposes `value(a) ⊕ value(b) = d`; false on contradiction.
    fn unite(&mut self, a: usize, b: usize, d: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == d;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        self.parity[hi] = pa ^ pb ^ d;
        true
    }
}

/// Canonical function computed by `e`.
pub fn reduce(e: &Expression) -> FunctionRepr {
    let n = e.n;
    let mut uf = ParityUnionFind::new(n);
    let mut ok = true;
    for c in &e.clauses {
        // l1 ⊕ l2 true ⇔ x1 ⊕ x2 = 1 ⊕ neg1 ⊕ neg2
        let d = !(c.0.positive ^ c.1.positive);
        // FALSE absorbs: keep consuming but the result cannot recover.
        ok &= uf.unite(c.0.var, c.1.var, d);
    }
    if !ok {
        return FunctionRepr::False;
    }
    let mut slot = vec![usize::MAX; n + 1];
    let mut blocks: Vec<Vec<Literal>> = Vec::new();
    for x in 1..=n {
        let (root, par) = uf.find(x);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[root]].push(Literal { var: x, positive: !par });
    }
    FunctionRepr::canonical(n, blocks)
}

pub fn partition_of(f: &FunctionRepr) -> Option<IntegerPartition> {
    f.partition()
}

pub fn essential_count(f: &FunctionRepr) -> usize {
    f.essential_count()
}

/// A clause seen as a coloured edge: a loop carries one of 4 colours, an edge
/// between distinct vertices one of 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColouredEdge {
    pub u: usize,
    pub v: usize,
    pub colour: u8,
}

impl ColouredEdge {
    pub fn from_clause(c: Clause) -> Self {
        let (a, b) = (c.0, c.1);
        let neg = |l: Literal| u8::from(!l.positive);
        if a.var == b.var {
            ColouredEdge { u: a.var, v: a.var, colour: 2 * neg(a) + neg(b) }
        } else {
            let (lo, hi, swapped) = if a.var < b.var { (a, b, 0) } else { (b, a, 1) };
            ColouredEdge { u: lo.var, v: hi.var, colour: 4 * swapped + 2 * neg(lo) + neg(hi) }
        }
    }

    pub fn to_clause(self) -> Clause {
        let lit = |var, negbit: u8| Literal { var, positive: negbit == 0 };
        if self.u == self.v {
            Clause(lit(self.u, (self.colour >> 1) & 1), lit(self.u, self.colour & 1))
        } else {
            let lo = lit(self.u, (self.colour >> 1) & 1);
            let hi = lit(self.v, self.colour & 1);
            if self.colour & 4 == 0 {
                Clause(lo, hi)
            } else {
                Clause(hi, lo)
            }
        }
    }
}

/// Edge-labelled coloured multigraph: edge `k` is clause `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouredMultigraph {
    pub n: usize,
    pub edges: Vec<ColouredEdge>,
}

impl ColouredMultigraph {
    pub fn underlying(&self) -> Multigraph {
        Multigraph::new(self.n, self.edges.iter().map(|e| (e.u, e.v))).expect("edges in range")
    }

    pub fn decode(&self) -> Expression {
        Expression { n: self.n, clauses: self.edges.iter().map(|e| e.to_clause()).collect() }
    }
}

pub fn to_multigraph(e: &Expression) -> ColouredMultigraph {
    ColouredMultigraph { n: e.n, edges: e.clauses.iter().map(|&c| ColouredEdge::from_clause(c)).collect() }
}

/// All `4n²` clauses on `n` variables.
pub fn all_clauses(n: usize) -> Vec<Clause> {
    let mut out = Vec::with_capacity(4 * n * n);
    for a in 1..=n {
        for pa in [true, false] {
            for b in 1..=n {
                for pb in [true, false] {
                    out.push(Clause(Literal { var: a, positive: pa }, Literal { var: b, positive: pb }));
                }
            }
        }
    }
    out
}

pub fn sample_clause<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Clause {
    let a = Literal { var: rng.random_range(1..=n), positive: rng.random() };
    let b = Literal { var: rng.random_range(1..=n), positive: rng.random() };
    Clause(a, b)
}

/// `m` clauses drawn uniformly, with replacement, from the `4n²`.
pub fn sample_expression<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Expression {
    assert!(n >= 1, "need at least one variable");
    Expression { n, clauses: (0..m).map(|_| sample_clause(n, rng)).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn running_example() {
        let e = Expression::parse(7, "1 3, -6 5, 7 -7, 2 -3").unwrap();
        let f = e.reduce();
        assert_eq!(f.to_string(), "{1,-2,-3}{4}{5,6}{7}");
        assert_eq!(f.partition().unwrap().to_string(), "3+2+1+1");
        assert_eq!(f.essential_count(), 5);
        assert_eq!(to_multigraph(&e).underlying().connected_components(), 4);
    }

    #[test]
    fn contradiction_is_false() {
        let e = Expression::parse(2, "1 2, 1 -2").unwrap();
        assert!(e.reduce().is_false());
    }
}
