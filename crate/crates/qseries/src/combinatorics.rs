//! Partitions, conjugates, and constrained enumeration of index grids.
//!
//! The index grids are the doubly indexed integers `s_i^{(j)}` over which
//! every sum side ranges: each column is weakly decreasing top to bottom,
//! and rows weakly decrease left to right.  The virtual boundary values
//! `s_i^{(n)} = 0` and `s_{m+1}^{(j)} = 0` are never stored; accessors
//! materialize them on demand so callers never special-case the edges.

use crate::engine;
use crate::{Error, HalfExp, Result};
use std::fmt;

/// An integer partition: weakly decreasing positive parts.
///
/// The empty partition is valid everywhere and indexes the constant
/// term 1 of every sum side.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition, stripping trailing zeros.  Panics if the
    /// sequence increases anywhere — partitions are only ever produced
    /// by code that already has them sorted.
    pub fn new(parts: impl Into<Vec<u32>>) -> Partition {
        let mut parts = parts.into();
        while parts.last() == Some(&0) {
            parts.pop();
        }
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "partition parts must be weakly decreasing: {parts:?}"
        );
        Partition { parts }
    }

    pub fn empty() -> Partition {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `|λ|`, the sum of the parts.
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `l(λ)`, the number of (nonzero) parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `λ₁`, or 0 for the empty partition.
    pub fn first(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// The conjugate partition (transposed Ferrers-Young diagram).
    pub fn conjugate(&self) -> Partition {
        let cols = self.first() as usize;
        let mut parts = Vec::with_capacity(cols);
        for i in 0..cols {
            parts.push(self.parts.iter().filter(|&&p| p as usize > i).count() as u32);
        }
        Partition { parts }
    }

    /// `m_i(λ)`: how many parts equal `i`.  Satisfies
    /// `m_i(λ) = λ′_i − λ′_{i+1}`.
    pub fn multiplicity(&self, i: u32) -> u32 {
        assert!(i >= 1, "multiplicity is defined for part sizes ≥ 1");
        self.parts.iter().filter(|&&p| p == i).count() as u32
    }

    /// `2λ`: every part doubled.
    pub fn doubled(&self) -> Partition {
        Partition {
            parts: self.parts.iter().map(|&p| 2 * p).collect(),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Every partition with `λ₁ ≤ max_part` and `|λ| ≤ max_weight`, graded
/// by weight and then in decreasing lexicographic order within a weight
/// — e.g. `(2,2) → (), (1), (2), (1,1)`.
///
/// The list is materialized eagerly; at verification scale (weights into
/// the low hundreds, small part bounds) it stays in the tens of
/// thousands of entries.
pub fn partitions_bounded(max_part: u32, max_weight: u32) -> impl Iterator<Item = Partition> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    for w in 0..=max_weight {
        push_partitions_of(w, max_part, &mut prefix, &mut out);
    }
    out.into_iter()
}

fn push_partitions_of(w: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if w == 0 {
        out.push(Partition::new(prefix.clone()));
        return;
    }
    for k in (1..=max_part.min(w)).rev() {
        prefix.push(k);
        push_partitions_of(w - k, k, prefix, out);
        prefix.pop();
    }
}

/// The array `s_i^{(j)}` for `1 ≤ i ≤ m`, `0 ≤ j ≤ n−1`: columns weakly
/// decrease downwards, rows weakly decrease rightwards (including into
/// the virtual all-zero column `n`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IndexGrid {
    /// `cols[j][i]` holds `s_{i+1}^{(j)}`.
    cols: Vec<Vec<u32>>,
}

impl IndexGrid {
    /// Validates and builds a grid from its stored columns (column 0
    /// first).  All columns must have the same positive length.
    pub fn new(cols: Vec<Vec<u32>>) -> Result<IndexGrid> {
        if cols.is_empty() || cols[0].is_empty() {
            return Err(Error::Domain(
                "index grid needs at least one row and one column".into(),
            ));
        }
        let m = cols[0].len();
        for (j, col) in cols.iter().enumerate() {
            if col.len() != m {
                return Err(Error::Domain(format!(
                    "column {j} has {} rows, expected {m}",
                    col.len()
                )));
            }
            if !col.windows(2).all(|w| w[0] >= w[1]) {
                return Err(Error::Domain(format!(
                    "column {j} is not weakly decreasing: {col:?}"
                )));
            }
        }
        for j in 1..cols.len() {
            for i in 0..m {
                if cols[j - 1][i] < cols[j][i] {
                    return Err(Error::Domain(format!(
                        "row {} increases from column {} to {}",
                        i + 1,
                        j - 1,
                        j
                    )));
                }
            }
        }
        Ok(IndexGrid { cols })
    }

    /// Number of rows `m`.
    pub fn rows(&self) -> usize {
        self.cols[0].len()
    }

    /// Number of stored columns `n` (columns `0..n-1`; column `n` is the
    /// virtual zero column).
    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    /// `s_{i+1}^{(j)}` with the boundary conventions: row index `m` and
    /// column index `n` read as 0.
    pub fn entry(&self, i: usize, j: usize) -> u32 {
        assert!(i <= self.rows() && j <= self.cols(), "grid index out of range");
        if i == self.rows() || j == self.cols() {
            0
        } else {
            self.cols[j][i]
        }
    }

    /// The stored column `j`.
    pub fn column(&self, j: usize) -> &[u32] {
        &self.cols[j]
    }

    /// `s^{(j)}`, the column sum (0 for the virtual column `n`).
    pub fn column_sum(&self, j: usize) -> u64 {
        assert!(j <= self.cols(), "grid column out of range");
        if j == self.cols() {
            0
        } else {
            self.cols[j].iter().map(|&v| v as u64).sum()
        }
    }
}

/// Enumerates every grid whose column 0 is `s0` and whose remaining
/// `n − 1` columns satisfy the interlacing invariants.
///
/// With `prune: Some(budget)` the enumeration drops exactly those grids
/// whose exponent statistic `𝓐` provably exceeds the budget, using the
/// same admissible lower bound as the series enumeration (never a
/// heuristic, so the unpruned run is the ground truth the pruned run
/// must match).  Order: column-major, deepest column varying fastest,
/// each cell descending from its upper bound.
///
/// This materializing form exists for cross-checks and small instances;
/// the verification hot path runs the same traversal fused with weight
/// accumulation (see `identities`).
pub fn inner_grids(s0: &[u32], n: usize, prune: Option<HalfExp>) -> Result<Vec<IndexGrid>> {
    if n == 0 {
        return Err(Error::Domain("grid needs at least column 0".into()));
    }
    if s0.is_empty() {
        return Err(Error::Domain("column 0 must have at least one row".into()));
    }
    if !s0.windows(2).all(|w| w[0] >= w[1]) {
        return Err(Error::Domain(format!(
            "column 0 is not weakly decreasing: {s0:?}"
        )));
    }
    let budget2 = prune.map(|b| b.twice() as u64);
    let mut cols: Vec<Vec<u32>> = vec![s0.to_vec()];
    if n == 1 {
        // No inner columns: the one grid is column 0 itself.
        let keep = budget2.map_or(true, |b| engine::grid_exponent2(&cols) <= b);
        return Ok(if keep { vec![IndexGrid { cols }] } else { vec![] });
    }
    let mut col = Vec::with_capacity(s0.len());
    let mut out = Vec::new();
    fill(n, budget2, &mut cols, &mut col, &mut out);
    Ok(out)
}

/// Recursive cell-by-cell fill: `cols` holds the completed columns,
/// `col` the one under construction.
fn fill(
    n: usize,
    budget2: Option<u64>,
    cols: &mut Vec<Vec<u32>>,
    col: &mut Vec<u32>,
    out: &mut Vec<IndexGrid>,
) {
    let m = cols[0].len();
    if col.len() == m {
        let finished = std::mem::take(col);
        cols.push(finished);
        if cols.len() == n {
            // Leaf: keep the grid unless its exact exponent busts the budget
            // (the partial bound below is only a lower bound).
            if budget2.map_or(true, |b| engine::grid_exponent2(cols) <= b) {
                out.push(IndexGrid { cols: cols.clone() });
            }
        } else {
            fill(n, budget2, cols, col, out);
        }
        *col = cols.pop().expect("column just pushed");
        return;
    }
    let i = col.len();
    let prev = cols.last().expect("column 0 always present");
    let mut ub = prev[i];
    if i > 0 {
        ub = ub.min(col[i - 1]);
    }
    for v in (0..=ub).rev() {
        col.push(v);
        if below_partial_bound(budget2, n, cols, col) {
            fill(n, budget2, cols, col, out);
        }
        col.pop();
    }
}

/// Admissible partial lower bound: exponent already forced by the filled
/// cells plus the provable minimum cost of completing every row.
fn below_partial_bound(budget2: Option<u64>, n: usize, cols: &[Vec<u32>], col: &[u32]) -> bool {
    let Some(b) = budget2 else { return true };
    let j = cols.len(); // index of the column being filled
    let mut bound = 0u64;
    // Cost already emitted by complete columns.
    for a in 1..j {
        for i in 0..cols[a].len() {
            bound += engine::w2(a as u64, (cols[a - 1][i] - cols[a][i]) as u64, n as u64);
        }
    }
    let prev = &cols[j - 1];
    for i in 0..prev.len() {
        if i < col.len() {
            bound += engine::w2(j as u64, (prev[i] - col[i]) as u64, n as u64);
            bound += engine::remaining_min2(j as u64, col[i] as u64);
        } else {
            bound += engine::remaining_min2((j - 1) as u64, prev[i] as u64);
        }
    }
    bound <= b
}

/// Alternating sum `s₁ − s₂ + s₃ − …` (the odd-indexed-parts statistic
/// of the conjugate when `s` is weakly decreasing).
pub fn alt(s: &[u32]) -> i64 {
    s.iter()
        .enumerate()
        .map(|(k, &v)| if k % 2 == 0 { v as i64 } else { -(v as i64) })
        .sum()
}

/// True iff `s_i − s_{i+1}` is even for every odd position
/// `i = 1, 3, 5, …` (1-based, with a virtual trailing zero).
pub fn even_gap_restriction(s: &[u32]) -> bool {
    (0..s.len())
        .step_by(2)
        .all(|i| (s[i] - s.get(i + 1).copied().unwrap_or(0)) % 2 == 0)
}
