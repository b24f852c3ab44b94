//! The exponent and weight statistics attached to index grids, and the
//! principal specializations they compute.
//!
//! `exponent_A`/`weight_B` evaluate the statistics of an explicit grid
//! straight from their defining formulas; `exponent_C`/`weight_D` are
//! the same statistics on a grid whose column 0 is an outer sequence
//! with every entry doubled.  `hl_principal` sums weight·q^exponent
//! over all grids above a fixed column 0, which equals the principal
//! specialization `P_λ(1, q, q², …; qⁿ)`; the sum runs through the
//! fused engine, while the per-grid evaluators here serve as the
//! independent reference the engine is tested against.

// The capital letters in `exponent_A` …`weight_D` are the statistics'
// conventional names, kept verbatim in the API.
#![allow(non_snake_case)]

use crate::combinatorics::{IndexGrid, Partition};
use crate::engine::{self, Candidate, ExtraKind, FactorCache, SumCtx};
use crate::series::{HalfExp, Series};
use crate::{Error, Result};
use num_traits::Zero;

/// Subscripts and Pochhammer base for one family of statistics:
/// `m` rows, `n` columns, weights evaluated at base `q^(base_step)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct StatisticContext {
    m: usize,
    n: usize,
    base_step: HalfExp,
}

impl StatisticContext {
    pub fn new(m: usize, n: usize, base_step: HalfExp) -> Result<StatisticContext> {
        if m == 0 || n == 0 {
            return Err(Error::Domain(format!(
                "statistics need positive dimensions, got m={m}, n={n}"
            )));
        }
        if base_step.twice() == 0 {
            return Err(Error::Domain("Pochhammer base step must be positive".into()));
        }
        Ok(StatisticContext { m, n, base_step })
    }

    fn check_shape(&self, g: &IndexGrid) -> Result<()> {
        if g.rows() != self.m || g.cols() != self.n {
            return Err(Error::Domain(format!(
                "grid is {}×{}, context expects {}×{}",
                g.rows(),
                g.cols(),
                self.m,
                self.n
            )));
        }
        Ok(())
    }
}

/// The exponent statistic
/// `−(n/2)·s⁽⁰⁾ + s⁽¹⁾ + … + s⁽ⁿ⁻¹⁾ + (n/2)·ΣΣ (s_i^{(a−1)} − s_i^{(a)})²`,
/// an exact half-integer, provably ≥ Σ_{j≥1} s⁽ʲ⁾ ≥ 0.
pub fn exponent_A(ctx: &StatisticContext, g: &IndexGrid) -> Result<HalfExp> {
    ctx.check_shape(g)?;
    let n = ctx.n as i64;
    let mut twice: i64 = -n * g.column_sum(0) as i64;
    let mut inner2: i64 = 0;
    for j in 1..ctx.n {
        inner2 += 2 * g.column_sum(j) as i64;
    }
    twice += inner2;
    for i in 0..ctx.m {
        for a in 1..=ctx.n {
            let d = g.entry(i, a - 1) as i64 - g.entry(i, a) as i64;
            assert!(d >= 0, "grid invariant violated: negative row step");
            twice += n * d * d;
        }
    }
    assert!(
        twice >= inner2,
        "exponent lower bound violated: 2·exponent {twice} < {inner2}"
    );
    Ok(HalfExp::from_twice(twice as u32))
}

/// `∏_{j=1}^{k} (1 − x^j)` with `x = q^(base_step)`, truncated.
fn finite_poch(base_step: HalfExp, k: u32, order: HalfExp) -> Series {
    let mut p = Series::one(order);
    for j in 1..=k {
        let e2 = j as u64 * base_step.twice() as u64;
        if e2 > order.twice() as u64 {
            break;
        }
        let mono = Series::monomial(1, HalfExp::from_twice(e2 as u32), order)
            .expect("exponent bounded by order");
        p = p.mul(&Series::one(order).sub(&mono));
    }
    p
}

/// The weight statistic: over every cell `(i, a)` the quotient
/// `(q)_{s_i^{(a−1)}−s_{i+1}^{(a)}} / [(q)_{s_i^{(a−1)}−s_i^{(a)}} ·
/// (q)_{s_i^{(a)}−s_{i+1}^{(a)}}]`, times `∏_j 1/(q)_{s_j⁽⁰⁾−s_{j+1}⁽⁰⁾}`,
/// all at base `q^(base_step)`.
///
/// This is the direct per-grid evaluation used as a reference; the
/// series enumeration multiplies the same factors incrementally.
pub fn weight_B(ctx: &StatisticContext, g: &IndexGrid, order: HalfExp) -> Result<Series> {
    ctx.check_shape(g)?;
    let sub = |hi: u32, lo: u32| -> u32 {
        hi.checked_sub(lo)
            .expect("grid invariant violated: negative Pochhammer subscript")
    };
    let mut num = Series::one(order);
    let mut den = Series::one(order);
    for i in 0..ctx.m {
        for a in 1..=ctx.n {
            num = num.mul(&finite_poch(
                ctx.base_step,
                sub(g.entry(i, a - 1), g.entry(i + 1, a)),
                order,
            ));
            den = den.mul(&finite_poch(
                ctx.base_step,
                sub(g.entry(i, a - 1), g.entry(i, a)),
                order,
            ));
            den = den.mul(&finite_poch(
                ctx.base_step,
                sub(g.entry(i, a), g.entry(i + 1, a)),
                order,
            ));
        }
        den = den.mul(&finite_poch(
            ctx.base_step,
            sub(g.entry(i, 0), g.entry(i + 1, 0)),
            order,
        ));
    }
    Ok(num.mul(&den.invert().expect("Pochhammer products have unit constant")))
}

/// The doubled column 0 `(r₁, r₁, r₂, r₂, …, r_m, r_m)`.
fn doubled_column(r: &[u32]) -> Vec<u32> {
    r.iter().flat_map(|&v| [v, v]).collect()
}

/// Validates that `g` is a `2m`-row grid whose column 0 is the doubled
/// sequence of `r`, as the doubled statistics require.
fn check_doubled(ctx: &StatisticContext, r: &[u32], g: &IndexGrid) -> Result<StatisticContext> {
    if r.len() != ctx.m {
        return Err(Error::Domain(format!(
            "outer sequence has {} entries, context expects {}",
            r.len(),
            ctx.m
        )));
    }
    if !r.windows(2).all(|w| w[0] >= w[1]) {
        return Err(Error::Domain(format!(
            "outer sequence is not weakly decreasing: {r:?}"
        )));
    }
    if g.column(0) != doubled_column(r) {
        return Err(Error::Domain(
            "grid column 0 must be the doubled outer sequence".into(),
        ));
    }
    StatisticContext::new(2 * ctx.m, ctx.n, ctx.base_step)
}

/// The exponent statistic on the doubled grid: column 0 holds
/// `r_{⌈i/2⌉}` over `2m` rows.
pub fn exponent_C(ctx: &StatisticContext, r: &[u32], g: &IndexGrid) -> Result<HalfExp> {
    let doubled = check_doubled(ctx, r, g)?;
    exponent_A(&doubled, g)
}

/// The weight statistic on the doubled grid.
pub fn weight_D(ctx: &StatisticContext, r: &[u32], g: &IndexGrid, order: HalfExp) -> Result<Series> {
    let doubled = check_doubled(ctx, r, g)?;
    weight_B(&doubled, g, order)
}

/// Warns (softly) if a principal specialization came out with a
/// negative coefficient — not promised anywhere, but always observed,
/// so a violation deserves eyes.
fn warn_if_negative(label: &str, s: &Series) {
    if let Some(t) = s.coeffs().iter().position(|c| c < &num_bigint::BigInt::zero()) {
        eprintln!(
            "warning: {label} produced a negative coefficient at twice-exponent {t}; \
             expected nonnegative expansion"
        );
    }
}

/// `P_λ(1, q, q², …; qⁿ)` truncated at `order`: the sum of
/// `weight·q^exponent` over all grids with column 0 equal to the
/// conjugate `λ′` and `n` total columns, evaluated by the fused engine
/// with the minimal row count `m = λ₁`.
pub fn hl_principal(lambda: &Partition, n: usize, order: HalfExp) -> Series {
    assert!(n >= 1, "column count must be positive");
    if lambda.is_empty() {
        return Series::one(order);
    }
    let col0 = lambda.conjugate().parts().to_vec();
    run_single_column(col0, n, order)
}

/// `P_{2λ}(1, q, q², …; qⁿ)` via the doubled-column route: the same
/// enumeration with column 0 `(λ′₁, λ′₁, λ′₂, λ′₂, …)`.  Must agree
/// with `hl_principal(2λ, …)` — the equivalence is load-bearing for
/// the doubled-column sum sides and is pinned by tests.
pub fn hl_principal_even(lambda: &Partition, n: usize, order: HalfExp) -> Series {
    assert!(n >= 1, "column count must be positive");
    if lambda.is_empty() {
        return Series::one(order);
    }
    let col0 = doubled_column(lambda.conjugate().parts());
    run_single_column(col0, n, order)
}

fn run_single_column(col0: Vec<u32>, n: usize, order: HalfExp) -> Series {
    let order2 = order.twice() as usize;
    let nmax = col0[0] as usize;
    let ctx = SumCtx {
        n_cols: n,
        order2,
        prune: true,
    };
    let cache = FactorCache::build(order2, 2 * n, nmax, ExtraKind::None);
    let candidates = [Candidate {
        col0,
        prefactor2: 0,
        extra_ks: Vec::new(),
    }];
    let (coeffs, _terms) = engine::sum_over_candidates(ctx, &cache, &candidates);
    let series = Series::from_twice_coeffs(coeffs);
    warn_if_negative("principal specialization", &series);
    series
}
