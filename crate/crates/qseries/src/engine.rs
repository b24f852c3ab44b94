//! Fused grid enumeration: walks the interlacing index grids cell by
//! cell while carrying the running exponent and the running weight
//! polynomial, so no grid is materialized on the verification hot path.
//!
//! # Exponent bookkeeping
//!
//! Everything is exact integer arithmetic on *twice* the q-exponent.
//! The exponent statistic of a full grid decomposes over cells as
//!
//! ```text
//! 2·𝓐 = Σ_{i,a} w2(a, Δ_{i,a}),   Δ_{i,a} = s_i^{(a−1)} − s_i^{(a)},
//! w2(a, Δ) = 2(a−1)·Δ + n·Δ·(Δ−1)              (n = column count)
//! ```
//!
//! where `a` runs over 1..=n, the entries of the virtual column `n`
//! being zero.  This follows from regrouping the per-column powers
//! `(a−1)Δ + n·C(Δ,2)`; every summand is ≥ 0, which is also the proof
//! that exponents never go negative.
//!
//! # Pruning bound
//!
//! A row sitting at value `v` with columns beyond `j` unassigned costs
//! at least `remaining_min2(j, v) = 2jv + v(v−1)` more twice-units:
//! descending by unit steps in consecutive columns realizes the bound
//! when enough columns remain, and fewer remaining columns only force
//! larger, more expensive steps.  The bound is a proved minimum, so
//! pruning on it is sound; with pruning disabled the walk keeps only
//! the already-emitted exponent as a horizon and must produce the
//! identical term set, which a regression test asserts.
//!
//! # Coefficients
//!
//! Weight polynomials are carried in checked `i128`; any candidate
//! whose intermediates overflow is transparently recomputed with big
//! integers.  Results are exact either way, and the parallel reduction
//! is an elementwise big-integer sum, so worker count cannot change
//! the output.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

/// Cell cost in twice-units: `2(a−1)Δ + n_cols·Δ(Δ−1)`.
#[inline]
pub(crate) fn w2(a: u64, delta: u64, n_cols: u64) -> u64 {
    2 * (a - 1) * delta + n_cols * delta * delta.saturating_sub(1)
}

/// Minimum remaining cost for a row at value `v` after column `j`,
/// in twice-units.
#[inline]
pub(crate) fn remaining_min2(j: u64, v: u64) -> u64 {
    2 * j * v + v * v.saturating_sub(1)
}

/// Exact exponent (twice-units) of a complete grid via the cell
/// decomposition; `cols` holds the stored columns 0..n−1.
pub(crate) fn grid_exponent2(cols: &[Vec<u32>]) -> u64 {
    let n = cols.len() as u64;
    let m = cols[0].len();
    let mut total = 0u64;
    for a in 1..=cols.len() {
        for i in 0..m {
            let hi = cols[a - 1][i] as u64;
            let lo = if a < cols.len() { cols[a][i] as u64 } else { 0 };
            total += w2(a as u64, hi - lo, n);
        }
    }
    total
}

/// Raised when the machine-integer coefficient path overflows; the
/// caller retries the candidate with big integers.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Overflow;

/// Coefficient arithmetic used inside the walk.  Both implementations
/// agree exactly wherever the checked one succeeds.
pub(crate) trait Coeff: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// `self += a · f`.
    fn add_mul_i64(&mut self, a: &Self, f: i64) -> Result<(), Overflow>;
    fn to_bigint(&self) -> BigInt;
}

impl Coeff for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add_mul_i64(&mut self, a: &Self, f: i64) -> Result<(), Overflow> {
        let prod = a.checked_mul(f as i128).ok_or(Overflow)?;
        *self = self.checked_add(prod).ok_or(Overflow)?;
        Ok(())
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for BigInt {
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn one() -> Self {
        BigInt::from(1)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_mul_i64(&mut self, a: &Self, f: i64) -> Result<(), Overflow> {
        *self += a * f;
        Ok(())
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// A factor polynomial on a strided exponent grid: coefficient `k`
/// multiplies `q^(k·stride2 / 2)`.
#[derive(Clone, Copy)]
pub(crate) struct FactorRef<'a> {
    coeffs: &'a [i64],
    stride2: usize,
}

/// Which extra multiplicative factor a family attaches to the
/// non-final gaps of column 0.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum ExtraKind {
    None,
    /// `(−y; y)_k` with `y = q^(stride2/2)`.
    NegPoch { stride2: usize },
    /// `∏_{j<k} (1 − y^(2j+1))` with `y = q^(stride2/2)`: a finite
    /// Pochhammer whose start is half its step.
    OddStartPoch { stride2: usize },
}

/// Precomputed factor polynomials for one run: q-binomials and inverse
/// Pochhammers at the run's base, plus the optional per-gap factors.
/// Built eagerly so the parallel walk can share it immutably.
pub(crate) struct FactorCache {
    /// Stride of the main base `q^(base2/2)` in twice-units.
    base2: usize,
    /// `invpoch[k]` = `1/(x;x)_k` in x-units, truncated.
    invpoch: Vec<Vec<i64>>,
    /// `qbinom[n][k]` = Gaussian binomial, truncated.
    qbinom: Vec<Vec<Vec<i64>>>,
    extra: Option<ExtraTable>,
}

struct ExtraTable {
    stride2: usize,
    polys: Vec<Vec<i64>>,
}

fn grow(v: Option<i64>) -> i64 {
    v.expect("factor table coefficient overflowed i64")
}

impl FactorCache {
    /// Builds every factor polynomial needed for grids whose column-0
    /// entries are at most `nmax`, truncated at twice-exponent `order2`.
    pub(crate) fn build(order2: usize, base2: usize, nmax: usize, extra: ExtraKind) -> FactorCache {
        assert!(base2 >= 1, "Pochhammer base must be positive");
        let len_x = order2 / base2 + 1;

        // 1/(x;x)_k by exact division by (1 − x^k), which under
        // truncation is the prefix recurrence c[t] += c[t−k].
        let mut invpoch: Vec<Vec<i64>> = Vec::with_capacity(nmax + 1);
        let mut unit = vec![0i64; len_x];
        unit[0] = 1;
        invpoch.push(unit);
        for k in 1..=nmax {
            let mut next = invpoch[k - 1].clone();
            for t in k..len_x {
                next[t] = grow(next[t].checked_add(next[t - k]));
            }
            invpoch.push(next);
        }

        // Gaussian binomials by the Pascal recurrence
        // C(n,k) = C(n−1,k−1) + x^k·C(n−1,k); exact and nonnegative,
        // so truncating every row is sound.
        let mut qbinom: Vec<Vec<Vec<i64>>> = Vec::with_capacity(nmax + 1);
        qbinom.push(vec![vec![1]]);
        for n in 1..=nmax {
            let mut row: Vec<Vec<i64>> = Vec::with_capacity(n + 1);
            for k in 0..=n {
                if k == 0 || k == n {
                    row.push(vec![1]);
                    continue;
                }
                let left = &qbinom[n - 1][k - 1];
                let up = &qbinom[n - 1][k];
                let len = len_x.min((up.len() + k).max(left.len()));
                let mut c = vec![0i64; len];
                let head = left.len().min(len);
                c[..head].copy_from_slice(&left[..head]);
                for (t, &v) in up.iter().enumerate() {
                    if t + k < len {
                        c[t + k] = grow(c[t + k].checked_add(v));
                    }
                }
                row.push(c);
            }
            qbinom.push(row);
        }

        let extra = match extra {
            ExtraKind::None => None,
            ExtraKind::NegPoch { stride2 } => {
                // (−y;y)_k = (−y;y)_{k−1} · (1 + y^k): copy, then add the
                // shifted pass — the copy must fully precede the add so a
                // short shift cannot clobber accumulated terms.
                let len_y = order2 / stride2 + 1;
                let mut polys: Vec<Vec<i64>> = vec![vec![1]];
                for k in 1..=nmax {
                    let prev = &polys[k - 1];
                    let mut next = vec![0i64; len_y.min(prev.len() + k)];
                    let head = prev.len().min(next.len());
                    next[..head].copy_from_slice(&prev[..head]);
                    for (t, &v) in prev.iter().enumerate() {
                        if t + k < next.len() {
                            next[t + k] = grow(next[t + k].checked_add(v));
                        }
                    }
                    polys.push(next);
                }
                Some(ExtraTable { stride2, polys })
            }
            ExtraKind::OddStartPoch { stride2 } => {
                // Extend by (1 − y^(2k−1)) one factor at a time, copy
                // before subtract for the same reason as above.
                let len_y = order2 / stride2 + 1;
                let mut polys: Vec<Vec<i64>> = vec![vec![1]];
                for k in 1..=nmax {
                    let prev = &polys[k - 1];
                    let e = 2 * k - 1;
                    let mut next = vec![0i64; len_y.min(prev.len() + e)];
                    let head = prev.len().min(next.len());
                    next[..head].copy_from_slice(&prev[..head]);
                    for (t, &v) in prev.iter().enumerate() {
                        if t + e < next.len() {
                            next[t + e] = grow(next[t + e].checked_sub(v));
                        }
                    }
                    polys.push(next);
                }
                Some(ExtraTable { stride2, polys })
            }
        };

        FactorCache {
            base2,
            invpoch,
            qbinom,
            extra,
        }
    }

    fn invpoch(&self, k: usize) -> FactorRef<'_> {
        FactorRef {
            coeffs: &self.invpoch[k],
            stride2: self.base2,
        }
    }

    fn qbinom(&self, n: usize, k: usize) -> FactorRef<'_> {
        FactorRef {
            coeffs: &self.qbinom[n][k],
            stride2: self.base2,
        }
    }

    fn extra_factor(&self, k: usize) -> FactorRef<'_> {
        let table = self
            .extra
            .as_ref()
            .expect("candidate carries extra factors but the cache has no table");
        FactorRef {
            coeffs: &table.polys[k],
            stride2: table.stride2,
        }
    }
}

/// One outer term of a sum side: a fixed column 0, the exponent it
/// contributes on top of the grid statistic, and the parameters of the
/// family's extra gap factors.
#[derive(Clone, Debug)]
pub(crate) struct Candidate {
    pub col0: Vec<u32>,
    /// Twice the exponent added on top of the grid statistic.
    pub prefactor2: u64,
    /// Extra-factor parameter for each non-final gap of column 0;
    /// empty when the family attaches none.
    pub extra_ks: Vec<u32>,
}

/// Static description of one enumeration run.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SumCtx {
    /// Total column count: column 0 plus the inner columns.  The
    /// all-zero column `n_cols` is implied.
    pub n_cols: usize,
    pub order2: usize,
    /// With pruning off, only the already-emitted exponent is used as
    /// a truncation horizon; the visited term set must be identical.
    pub prune: bool,
}

/// Per-candidate walk state.  `levels[d]` holds the weight polynomial
/// after `d` factor multiplications; buffers are allocated once and
/// reused, and a shrinking `len` implements adaptive truncation.
struct Walk<'a, C: Coeff> {
    cache: &'a FactorCache,
    ctx: SumCtx,
    levels: Vec<Vec<C>>,
    acc: Vec<C>,
    terms: u64,
}

impl<'a, C: Coeff> Walk<'a, C> {
    fn new(cache: &'a FactorCache, ctx: SumCtx) -> Self {
        Walk {
            cache,
            ctx,
            levels: Vec::new(),
            acc: vec![C::zero(); ctx.order2 + 1],
            terms: 0,
        }
    }

    fn ensure_level(&mut self, depth: usize) {
        while self.levels.len() <= depth {
            self.levels.push(vec![C::zero(); self.ctx.order2 + 1]);
        }
    }

    /// `levels[depth+1][..len] = levels[depth][..len] · f`, truncated.
    fn mul_factor(&mut self, depth: usize, len: usize, f: FactorRef<'_>) -> Result<(), Overflow> {
        self.ensure_level(depth + 1);
        let (head, tail) = self.levels.split_at_mut(depth + 1);
        let src = &head[depth][..len];
        let out = &mut tail[0][..len];
        for c in out.iter_mut() {
            *c = C::zero();
        }
        for (k, &fc) in f.coeffs.iter().enumerate() {
            if fc == 0 {
                continue;
            }
            let off = k * f.stride2;
            if off >= len {
                break;
            }
            for t in 0..len - off {
                if !src[t].is_zero() {
                    out[off + t].add_mul_i64(&src[t], fc)?;
                }
            }
        }
        Ok(())
    }

    /// Accumulates `levels[depth][..len] · q^(e2/2)` into the result
    /// and counts the term.
    fn emit(&mut self, depth: usize, len: usize, e2: u64) -> Result<(), Overflow> {
        let e2 = e2 as usize;
        debug_assert!(e2 <= self.ctx.order2);
        let take = len.min(self.ctx.order2 + 1 - e2);
        let (buf, acc) = (&self.levels[depth], &mut self.acc);
        for t in 0..take {
            if !buf[t].is_zero() {
                acc[e2 + t].add_mul_i64(&buf[t], 1)?;
            }
        }
        self.terms += 1;
        Ok(())
    }
}

/// Position of the cell-by-cell walk.
#[derive(Clone, Copy)]
struct Cell {
    /// Column being filled (real inner columns are 1..n_cols−1).
    a: u64,
    /// Row being filled (0-based).
    i: usize,
    /// Exponent emitted so far, twice-units.
    e2: u64,
    /// Sum of remaining-cost bounds over all rows (0 with pruning off).
    rem: u64,
    depth: usize,
    len: usize,
}

fn run_candidate<C: Coeff>(walk: &mut Walk<'_, C>, cand: &Candidate) -> Result<(), Overflow> {
    let ctx = walk.ctx;
    let cache = walk.cache;
    let n = ctx.n_cols as u64;
    let m = cand.col0.len();
    let order2 = ctx.order2 as u64;

    let e2 = cand.prefactor2;
    let rem0: u64 = if ctx.prune {
        cand.col0
            .iter()
            .map(|&v| remaining_min2(0, v as u64))
            .sum()
    } else {
        0
    };
    if e2 + rem0 > order2 {
        return Ok(());
    }
    let mut len = (order2 - e2 - rem0 + 1) as usize;

    // Base weight: inverse Pochhammers over the column-0 gaps, times
    // the extra factors on the non-final gaps.
    walk.ensure_level(0);
    for c in walk.levels[0].iter_mut() {
        *c = C::zero();
    }
    walk.levels[0][0] = C::one();
    let mut depth = 0usize;
    for j in 0..m {
        let gap = cand.col0[j] - if j + 1 < m { cand.col0[j + 1] } else { 0 };
        walk.mul_factor(depth, len, cache.invpoch(gap as usize))?;
        depth += 1;
    }
    for &k in &cand.extra_ks {
        walk.mul_factor(depth, len, cache.extra_factor(k as usize))?;
        depth += 1;
    }

    if ctx.n_cols == 1 {
        // No inner columns: the whole statistic is the virtual-column
        // cost of column 0.
        let mut total = e2;
        for &v in &cand.col0 {
            total += w2(1, v as u64, n);
        }
        if total <= order2 {
            len = len.min((order2 - total + 1) as usize);
            walk.emit(depth, len, total)?;
        }
        return Ok(());
    }

    // One value buffer per column; column a is filled while column a−1
    // is read, so the buffers must be distinct.
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(ctx.n_cols);
    cols.push(cand.col0.iter().map(|&v| v as u64).collect());
    for _ in 1..ctx.n_cols {
        cols.push(vec![0; m]);
    }
    descend(
        walk,
        Cell {
            a: 1,
            i: 0,
            e2,
            rem: rem0,
            depth,
            len,
        },
        &mut cols,
    )
}

fn descend<C: Coeff>(
    walk: &mut Walk<'_, C>,
    at: Cell,
    cols: &mut Vec<Vec<u64>>,
) -> Result<(), Overflow> {
    let ctx = walk.ctx;
    let cache = walk.cache;
    let n = ctx.n_cols as u64;
    let m = cols[0].len();
    let order2 = ctx.order2 as u64;
    let last_col = at.a == n - 1;
    let a = at.a as usize;

    // Interlacing: weakly below both the row neighbor to the left and
    // the column neighbor above.
    let ub = if at.i == 0 {
        cols[a - 1][0]
    } else {
        cols[a - 1][at.i].min(cols[a][at.i - 1])
    };

    for v in (0..=ub).rev() {
        let delta = cols[a - 1][at.i] - v;
        // On the last real column the virtual-column cost of the row is
        // settled immediately, keeping the horizon exact at the leaves.
        let mut cell_e2 = w2(at.a, delta, n);
        if last_col {
            cell_e2 += w2(n, v, n);
        }
        let e2 = at.e2 + cell_e2;
        let rem = if ctx.prune {
            let after = if last_col { 0 } else { remaining_min2(at.a, v) };
            at.rem - remaining_min2(at.a - 1, cols[a - 1][at.i]) + after
        } else {
            0
        };
        if e2 + rem > order2 {
            continue;
        }
        let len = at.len.min((order2 - e2 - rem + 1) as usize);
        let mut depth = at.depth;

        // The weight factor of the row above becomes known once this
        // cell's value is fixed; the bottom row also settles its own
        // factor against the virtual zero below it.
        if at.i > 0 {
            let b = (cols[a - 1][at.i - 1] - cols[a][at.i - 1]) as usize;
            let whole = (cols[a - 1][at.i - 1] - v) as usize;
            walk.mul_factor(depth, len, cache.qbinom(whole, b))?;
            depth += 1;
        }
        if at.i + 1 == m {
            let whole = cols[a - 1][at.i] as usize;
            walk.mul_factor(depth, len, cache.qbinom(whole, delta as usize))?;
            depth += 1;
        }

        cols[a][at.i] = v;
        if at.i + 1 < m {
            descend(
                walk,
                Cell {
                    a: at.a,
                    i: at.i + 1,
                    e2,
                    rem,
                    depth,
                    len,
                },
                cols,
            )?;
        } else if last_col {
            walk.emit(depth, len, e2)?;
        } else {
            descend(
                walk,
                Cell {
                    a: at.a + 1,
                    i: 0,
                    e2,
                    rem,
                    depth,
                    len,
                },
                cols,
            )?;
        }
    }
    Ok(())
}

/// Runs one candidate with checked machine integers, retrying with big
/// integers on overflow.
fn run_one(ctx: SumCtx, cache: &FactorCache, cand: &Candidate) -> (Vec<BigInt>, u64) {
    let mut walk = Walk::<i128>::new(cache, ctx);
    match run_candidate(&mut walk, cand) {
        Ok(()) => (walk.acc.iter().map(Coeff::to_bigint).collect(), walk.terms),
        Err(Overflow) => {
            let mut walk = Walk::<BigInt>::new(cache, ctx);
            run_candidate(&mut walk, cand).expect("big-integer path cannot overflow");
            (walk.acc, walk.terms)
        }
    }
}

/// Full enumeration over all candidates: twice-indexed coefficients of
/// the sum plus the number of accumulated terms.  Candidates run in
/// parallel; the reduction is an exact elementwise sum, so the result
/// is independent of the worker count.
pub(crate) fn sum_over_candidates(
    ctx: SumCtx,
    cache: &FactorCache,
    candidates: &[Candidate],
) -> (Vec<BigInt>, u64) {
    let len = ctx.order2 + 1;
    let fresh = || (vec![<BigInt as Zero>::zero(); len], 0u64);
    candidates
        .par_iter()
        .fold(
            fresh,
            |(mut acc, terms), cand| {
                let (coeffs, t) = run_one(ctx, cache, cand);
                for (a, c) in acc.iter_mut().zip(coeffs) {
                    if !Zero::is_zero(&c) {
                        *a += c;
                    }
                }
                (acc, terms + t)
            },
        )
        .reduce(
            fresh,
            |(mut a, ta), (b, tb)| {
                for (x, y) in a.iter_mut().zip(b) {
                    if !Zero::is_zero(&y) {
                        *x += y;
                    }
                }
                (a, ta + tb)
            },
        )
}
