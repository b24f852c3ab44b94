//! Sum sides of the seven identity families and the verification
//! driver.
//!
//! Every left-hand side is a sum over interlacing index grids.  This
//! module enumerates the outer data — an outer partition for the
//! doubled-column families, column 0 itself for the free-column ones —
//! within a proved exponent budget, hands each choice to the fused
//! engine, and assembles the results into truncated series.  `verify`
//! then expands the product sides and compares coefficientwise.
//!
//! # Outer enumeration budget
//!
//! Each outer value `v` contributes at least its prefactor share to the
//! final exponent (`a·v` for the doubled families, `½·v` otherwise,
//! both stated in twice-units below), because the grid statistic and
//! the alternating-sum correction are nonnegative.  With pruning on,
//! the engine's per-row root bound `v(v−1)` twice-units is added; both
//! are prefix-monotone over weakly decreasing tuples, so cutting a
//! prefix that exceeds the budget cannot lose a term inside the
//! truncation window.

use std::time::Instant;

use num_bigint::BigInt;

use crate::combinatorics::{alt, even_gap_restriction, partitions_bounded};
use crate::engine::{self, Candidate, ExtraKind, FactorCache, SumCtx};
use crate::family::PrefactorRule;
use crate::hall_littlewood::hl_principal;
use crate::products;
use crate::series::Comparison;
use crate::{oracle, Error, FamilySpec, HalfExp, Result, Series};

/// A coefficient disagreement: the smallest exponent where two compared
/// series differ, with both stored values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub exponent: HalfExp,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

/// Everything one verification run produces: both sides' coefficients,
/// the verdict, and counters for auditing.
#[derive(Clone, Debug)]
pub struct Report {
    pub spec: FamilySpec,
    pub order: HalfExp,
    pub lhs: Series,
    pub rhs_form1: Series,
    /// Present for the families that state the product in two shapes.
    pub rhs_form2: Option<Series>,
    /// True iff no coefficient differs through `order`, across every
    /// compared form.
    pub equal: bool,
    /// The first mismatch found, checking form 1 before form 2.
    pub first_mismatch: Option<Mismatch>,
    /// Grid terms accumulated while expanding the sum side.
    pub terms_enumerated: u64,
    /// Wall-clock duration of the run; the only report field that is
    /// not a pure function of the inputs.
    pub ms_elapsed: u64,
}

/// Emits every weakly decreasing `rows`-tuple whose summed per-entry
/// costs stay within `budget2`.  `entry_cost2(v)` must lower-bound, in
/// twice-units, what one entry at value `v` adds to any completed term,
/// and must be nondecreasing in `v`, so the value loop can stop at the
/// first violation without losing tuples.
fn descending_tuples(
    rows: usize,
    budget2: u64,
    entry_cost2: impl Fn(u64) -> u64 + Copy,
    emit: &mut impl FnMut(&[u32]),
) {
    fn rec(
        buf: &mut Vec<u32>,
        rows: usize,
        cap: u32,
        spent: u64,
        budget2: u64,
        entry_cost2: impl Fn(u64) -> u64 + Copy,
        emit: &mut impl FnMut(&[u32]),
    ) {
        if buf.len() == rows {
            emit(buf);
            return;
        }
        for v in 0..=cap {
            let spent = spent + entry_cost2(v as u64);
            if spent > budget2 {
                break;
            }
            buf.push(v);
            rec(buf, rows, v, spent, budget2, entry_cost2, emit);
            buf.pop();
        }
    }
    rec(
        &mut Vec::with_capacity(rows),
        rows,
        u32::MAX,
        0,
        budget2,
        entry_cost2,
        emit,
    )
}

/// Keeps the nonzero prefix (grids are insensitive to trailing zero
/// rows), but never less than one row, which the engine requires.
fn trimmed(values: &[u32]) -> Vec<u32> {
    let mut col0: Vec<u32> = values.iter().copied().take_while(|&v| v > 0).collect();
    if col0.is_empty() {
        col0.push(0);
    }
    col0
}

/// Builds the outer-term list for one family within the exponent
/// budget.  With `prune` the proved per-row root bound joins the
/// prefactor in the budget; without it only the prefactor does, which
/// is the family's bare termination rule.
fn make_candidates(spec: &FamilySpec, order2: u64, prune: bool) -> Vec<Candidate> {
    let rows = spec.grid_rows();
    let extra = spec.extra_kind();
    let mut out = Vec::new();
    match spec.prefactor_rule() {
        PrefactorRule::OuterWeight { a } => {
            let a2 = 2 * a as u64;
            // The outer value appears on two grid rows, hence the
            // doubled root bound.
            let cost = move |v: u64| a2 * v + if prune { 2 * v * v.saturating_sub(1) } else { 0 };
            descending_tuples(spec.m() as usize, order2, cost, &mut |r| {
                let sum: u64 = r.iter().map(|&v| v as u64).sum();
                let mut col0 = Vec::with_capacity(2 * r.len());
                for &v in r {
                    if v == 0 {
                        break;
                    }
                    col0.push(v);
                    col0.push(v);
                }
                if col0.is_empty() {
                    col0.push(0);
                }
                out.push(Candidate {
                    col0,
                    prefactor2: a2 * sum,
                    extra_ks: Vec::new(),
                });
            });
        }
        rule @ (PrefactorRule::HalfColumnSum | PrefactorRule::HalfColumnSumPlusAlt) => {
            let plus_alt = matches!(rule, PrefactorRule::HalfColumnSumPlusAlt);
            let cost = move |v: u64| v + if prune { v * v.saturating_sub(1) } else { 0 };
            descending_tuples(rows, order2, cost, &mut |s| {
                if spec.restricts_gaps() && !even_gap_restriction(s) {
                    return;
                }
                let sum: u64 = s.iter().map(|&v| v as u64).sum();
                let a = alt(s);
                debug_assert!(a >= 0, "alternating sum of a decreasing tuple");
                let prefactor2 = sum + if plus_alt {
                    2 * spec.n() as u64 * a as u64
                } else {
                    0
                };
                if prefactor2 > order2 {
                    return;
                }
                let mut extra_ks = Vec::new();
                if extra != ExtraKind::None {
                    for i in 0..rows - 1 {
                        let gap = s[i] - s[i + 1];
                        let k = match extra {
                            ExtraKind::OddStartPoch { .. } => (gap + 1) / 2,
                            _ => gap,
                        };
                        if k > 0 {
                            extra_ks.push(k);
                        }
                    }
                }
                out.push(Candidate {
                    col0: trimmed(s),
                    prefactor2,
                    extra_ks,
                });
            });
        }
    }
    out
}

/// Shared core of the sum-side entry points: candidate generation, one
/// factor-cache build, and the parallel engine run.
pub(crate) fn sum_side_with(spec: &FamilySpec, order: HalfExp, prune: bool) -> (Series, u64) {
    let order2 = order.twice() as usize;
    let candidates = make_candidates(spec, order2 as u64, prune);
    let nmax = candidates.iter().map(|c| c.col0[0]).max().unwrap_or(0);
    let n_cols = spec.sum_columns();
    let cache = FactorCache::build(order2, 2 * n_cols, nmax as usize, spec.extra_kind());
    let ctx = SumCtx {
        n_cols,
        order2,
        prune,
    };
    let (coeffs, terms) = engine::sum_over_candidates(ctx, &cache, &candidates);
    (Series::from_twice_coeffs(coeffs), terms)
}

/// The left-hand sum of the identity, truncated at `order`.
pub fn sum_side(spec: &FamilySpec, order: HalfExp) -> Result<Series> {
    Ok(sum_side_with(spec, order, true).0)
}

/// Reference path with the pruning bound disabled: every candidate and
/// grid admitted by the bare termination rule is walked.  Must agree
/// with [`sum_side`] exactly; exists so audits can re-check the bound.
pub fn sum_side_unpruned(spec: &FamilySpec, order: HalfExp) -> Result<Series> {
    Ok(sum_side_with(spec, order, false).0)
}

/// Expands both sides of one identity and compares coefficients
/// through `order`.
pub fn verify(spec: &FamilySpec, order: HalfExp) -> Result<Report> {
    verify_against_kappa(spec, spec.kappa(), order)
}

/// [`verify`] with the product modulus overridden.  Any κ other than
/// `spec.kappa()` turns the run into a negative control that must end
/// with `equal = false`.
pub fn verify_against_kappa(spec: &FamilySpec, kappa: u32, order: HalfExp) -> Result<Report> {
    let started = Instant::now();
    let (lhs, terms_enumerated) = sum_side_with(spec, order, true);
    let rhs_form1 = products::product_side_with_kappa(spec, 1, kappa, order)?;
    let rhs_form2 = if spec.has_second_form() {
        Some(products::product_side_with_kappa(spec, 2, kappa, order)?)
    } else {
        None
    };

    let mut first_mismatch = None;
    for rhs in std::iter::once(&rhs_form1).chain(rhs_form2.as_ref()) {
        if first_mismatch.is_some() {
            break;
        }
        if let Comparison::MismatchAt { exponent, lhs: l, rhs: r } = lhs.equal_to_order(rhs, order)?
        {
            first_mismatch = Some(Mismatch {
                exponent,
                lhs: l,
                rhs: r,
            });
        }
    }
    Ok(Report {
        spec: *spec,
        order,
        lhs,
        rhs_form1,
        rhs_form2,
        equal: first_mismatch.is_none(),
        first_mismatch,
        terms_enumerated,
        ms_elapsed: started.elapsed().as_millis() as u64,
    })
}

/// Outcome of the classical reduction at `n = 1`: which variant of the
/// first family reproduced the Andrews–Gordon sum with linear index
/// `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AgPairing {
    pub m: u32,
    pub i: u32,
    /// `Some(1)` or `Some(2)` when exactly that variant matched,
    /// `None` when neither did.
    pub matching_variant: Option<u8>,
}

/// Compares both family-1 sum sides at `n = 1` against the
/// Andrews–Gordon sum with index `i` and reports which variant, if
/// any, reproduces it.  The variant↔index mapping is observed rather
/// than hard-coded, so callers can pin the pairing empirically.
pub fn ag_reduction_check(m: u32, i: u32, order: HalfExp) -> Result<AgPairing> {
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    if i != 1 && i != m + 1 {
        return Err(Error::Domain(format!(
            "the n = 1 reduction reaches only i = 1 and i = m+1, got i = {i}"
        )));
    }
    let target = oracle::andrews_gordon_lhs(m, i, order);
    let matching_variant = [1u8, 2].into_iter().find(|&variant| {
        let spec = FamilySpec::new(1, variant, m, 1).expect("family 1 accepts any positive m");
        sum_side_with(&spec, order, true).0 == target
    });
    Ok(AgPairing {
        m,
        i,
        matching_variant,
    })
}

/// Compares the family-6 sum side at `n = 1`, rewritten by `q → q²`,
/// against the even-modulus sum.  Both sides come out known through
/// twice `order`, and the comparison runs through all of it.
pub fn bressoud_reduction_check(m: u32, order: HalfExp) -> Result<Comparison> {
    let spec = FamilySpec::new(6, 1, m, 1)?;
    let doubled = sum_side_with(&spec, order, true).0.substitute_q_squared();
    let target = oracle::bressoud_lhs(m, doubled.order());
    doubled.equal_to_order(&target, doubled.order())
}

/// The same sum assembled along the principal-specialization route:
/// `Σ_λ q^(a·|λ|) · P_{2λ}(1,q,…; q^(n'))` for the doubled-column
/// families and `Σ_λ q^(|λ|/2) · P_λ(1,q,…; q^(n'))` for the
/// free-column families without extra gap factors, with `λ₁ ≤ m`
/// throughout.  An independent second path that must agree with
/// [`sum_side`]; families with extra gap factors are out of its reach.
pub fn sum_side_via_hall_littlewood(spec: &FamilySpec, order: HalfExp) -> Result<Series> {
    if spec.extra_kind() != ExtraKind::None {
        return Err(Error::Domain(format!(
            "{spec} attaches extra gap factors; the specialization route covers only plain weights"
        )));
    }
    let n_cols = spec.sum_columns();
    let mut acc = Series::zero(order);
    match spec.prefactor_rule() {
        PrefactorRule::OuterWeight { a } => {
            for lam in partitions_bounded(spec.m(), order.twice() / (2 * a)) {
                let shift = HalfExp::whole(a * lam.weight());
                acc = acc.add(&hl_principal(&lam.doubled(), n_cols, order).shift(shift));
            }
        }
        PrefactorRule::HalfColumnSum => {
            for lam in partitions_bounded(spec.m(), order.twice()) {
                let shift = HalfExp::from_twice(lam.weight());
                acc = acc.add(&hl_principal(&lam, n_cols, order).shift(shift));
            }
        }
        PrefactorRule::HalfColumnSumPlusAlt => {
            unreachable!("the alternating-sum family carries extra factors")
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::inner_grids;
    use crate::hall_littlewood::{exponent_A, exponent_C, weight_B, weight_D, StatisticContext};
    use crate::products::{pochhammer, Sign};
    use num_traits::Zero;

    fn spec(family: u8, variant: u8, m: u32, n: u32) -> FamilySpec {
        FamilySpec::new(family, variant, m, n).unwrap()
    }

    /// The sum side evaluated from the per-grid reference statistics:
    /// materialized grids, per-grid weight series, no fused walk.
    fn naive_sum_side(fs: &FamilySpec, order: HalfExp) -> Series {
        let order2 = order.twice() as u64;
        let n_cols = fs.sum_columns();
        let base = HalfExp::whole(n_cols as u32);
        let rows = fs.grid_rows();
        let mut acc = Series::zero(order);
        let mut add_grids = |col0: &[u32], prefactor2: u64, extra: &Series, ctx_weight: &dyn Fn(
            &crate::combinatorics::IndexGrid,
        )
            -> (HalfExp, Series)| {
            for g in inner_grids(col0, n_cols, Some(order)).unwrap() {
                let (e, w) = ctx_weight(&g);
                let total2 = e.twice() as u64 + prefactor2;
                if total2 > order2 {
                    continue;
                }
                let term = w.mul(extra).shift(HalfExp::from_twice(total2 as u32));
                acc = acc.add(&term);
            }
        };
        match fs.prefactor_rule() {
            PrefactorRule::OuterWeight { a } => {
                let ctx = StatisticContext::new(fs.m() as usize, n_cols, base).unwrap();
                descending_tuples(fs.m() as usize, order2, |v| 2 * a as u64 * v, &mut |r| {
                    let col0: Vec<u32> = r.iter().flat_map(|&v| [v, v]).collect();
                    let sum: u64 = r.iter().map(|&v| v as u64).sum();
                    let one = Series::one(order);
                    add_grids(&col0, 2 * a as u64 * sum, &one, &|g| {
                        (
                            exponent_C(&ctx, r, g).unwrap(),
                            weight_D(&ctx, r, g, order).unwrap(),
                        )
                    });
                });
            }
            rule @ (PrefactorRule::HalfColumnSum | PrefactorRule::HalfColumnSumPlusAlt) => {
                let plus_alt = matches!(rule, PrefactorRule::HalfColumnSumPlusAlt);
                let ctx = StatisticContext::new(rows, n_cols, base).unwrap();
                descending_tuples(rows, order2, |v| v, &mut |s| {
                    if fs.restricts_gaps() && !even_gap_restriction(s) {
                        return;
                    }
                    let sum: u64 = s.iter().map(|&v| v as u64).sum();
                    let prefactor2 = sum + if plus_alt {
                        2 * fs.n() as u64 * alt(s) as u64
                    } else {
                        0
                    };
                    if prefactor2 > order2 {
                        return;
                    }
                    let mut extra = Series::one(order);
                    match fs.extra_kind() {
                        ExtraKind::None => {}
                        ExtraKind::NegPoch { stride2 } => {
                            let y = HalfExp::from_twice(stride2 as u32);
                            for i in 0..rows - 1 {
                                let gap = (s[i] - s[i + 1]) as u64;
                                extra = extra.mul(&pochhammer(Sign::Minus, y, y, Some(gap), order));
                            }
                        }
                        ExtraKind::OddStartPoch { stride2 } => {
                            let y = HalfExp::from_twice(stride2 as u32);
                            let y2 = HalfExp::from_twice(2 * stride2 as u32);
                            for i in 0..rows - 1 {
                                let k = ((s[i] - s[i + 1] + 1) / 2) as u64;
                                extra = extra.mul(&pochhammer(Sign::Plus, y, y2, Some(k), order));
                            }
                        }
                    }
                    add_grids(s, prefactor2, &extra, &|g| {
                        (
                            exponent_A(&ctx, g).unwrap(),
                            weight_B(&ctx, g, order).unwrap(),
                        )
                    });
                });
            }
        }
        acc
    }

    #[test]
    fn first_family_base_case_matches_stated_coefficients() {
        let order = HalfExp::whole(8);
        let s1 = sum_side(&spec(1, 1, 1, 1), order).unwrap();
        let expect1 = [1, 1, 1, 1, 2, 2, 3, 3, 4];
        for (k, &e) in expect1.iter().enumerate() {
            assert_eq!(
                s1.coeff(HalfExp::whole(k as u32)).unwrap(),
                &BigInt::from(e),
                "variant 1, q^{k}"
            );
        }
        let s2 = sum_side(&spec(1, 2, 1, 1), order).unwrap();
        let expect2 = [1, 0, 1, 1, 1, 1, 2, 2, 3];
        for (k, &e) in expect2.iter().enumerate() {
            assert_eq!(
                s2.coeff(HalfExp::whole(k as u32)).unwrap(),
                &BigInt::from(e),
                "variant 2, q^{k}"
            );
        }
        // Whole-exponent families leave every half-step slot empty.
        for s in [&s1, &s2] {
            assert!(s.coeffs().iter().skip(1).step_by(2).all(Zero::is_zero));
        }
    }

    #[test]
    fn order_zero_sum_is_the_constant_one() {
        for fs in [
            spec(1, 1, 2, 2),
            spec(3, 1, 1, 2),
            spec(4, 1, 3, 1),
            spec(5, 2, 2, 1),
            spec(7, 1, 2, 1),
        ] {
            let s = sum_side(&fs, HalfExp::ZERO).unwrap();
            assert_eq!(s.coeffs(), &[BigInt::from(1)], "{fs}");
        }
    }

    #[test]
    fn fused_walk_matches_per_grid_reference() {
        // One representative per structural feature: doubled column,
        // free column, each extra-factor kind, the parity restriction.
        let cases = [
            (spec(1, 1, 2, 1), 8),
            (spec(1, 2, 1, 2), 7),
            (spec(2, 1, 1, 1), 8),
            (spec(4, 1, 2, 1), 7),
            (spec(3, 1, 1, 2), 8),
            (spec(5, 1, 2, 1), 7),
            (spec(5, 2, 2, 1), 7),
            (spec(6, 1, 2, 1), 7),
            (spec(7, 1, 1, 1), 8),
            (spec(7, 1, 1, 2), 7),
        ];
        for (fs, ord) in cases {
            let order = HalfExp::whole(ord);
            let fused = sum_side(&fs, order).unwrap();
            let naive = naive_sum_side(&fs, order);
            assert_eq!(fused, naive, "{fs}");
        }
    }

    #[test]
    fn pruned_and_unpruned_sum_sides_agree() {
        let order = HalfExp::whole(10);
        for fs in [
            spec(1, 1, 1, 1),
            spec(2, 1, 1, 1),
            spec(3, 1, 1, 2),
            spec(4, 1, 2, 1),
            spec(5, 2, 2, 1),
            spec(6, 1, 2, 1),
            spec(7, 1, 1, 1),
        ] {
            assert_eq!(
                sum_side(&fs, order).unwrap(),
                sum_side_unpruned(&fs, order).unwrap(),
                "{fs}"
            );
        }
    }

    #[test]
    fn verify_reports_equal_on_the_classical_case() {
        let report = verify(&spec(1, 1, 1, 1), HalfExp::whole(30)).unwrap();
        assert!(report.equal);
        assert!(report.first_mismatch.is_none());
        assert!(report.rhs_form2.is_some());
        assert!(report.terms_enumerated > 0);
        assert_eq!(report.lhs, report.rhs_form1);
    }

    #[test]
    fn even_modulus_families_verify_beyond_the_degenerate_n() {
        // Families 3 and 7 are the ones whose sum readings collapse to
        // simpler forms at the smallest n; check a genuine n = 2 cell
        // of each against both stated product forms.
        for fs in [spec(3, 1, 1, 2), spec(7, 1, 1, 2)] {
            let report = verify(&fs, HalfExp::whole(20)).unwrap();
            assert!(report.equal, "{fs}: {:?}", report.first_mismatch);
        }
    }

    #[test]
    fn corrupted_modulus_is_flagged_with_a_small_mismatch() {
        let fs = spec(1, 1, 1, 1);
        let report = verify_against_kappa(&fs, fs.kappa() + 1, HalfExp::whole(20)).unwrap();
        assert!(!report.equal);
        let mm = report.first_mismatch.expect("a mismatch must be found");
        assert!(mm.exponent <= HalfExp::whole(6), "mismatch at {}", mm.exponent);
        assert_ne!(mm.lhs, mm.rhs);
    }

    #[test]
    fn andrews_gordon_pairing_is_observed() {
        let order = HalfExp::whole(16);
        // The +r prefactor lands on the pure-squares sum (i = m+1), the
        // +2r prefactor on the fully shifted one (i = 1).
        for m in [1, 2] {
            let high = ag_reduction_check(m, m + 1, order).unwrap();
            assert_eq!(high.matching_variant, Some(1), "m={m}, i={}", m + 1);
            let low = ag_reduction_check(m, 1, order).unwrap();
            assert_eq!(low.matching_variant, Some(2), "m={m}, i=1");
        }
        assert!(ag_reduction_check(2, 2, order).is_err());
        assert!(ag_reduction_check(0, 1, order).is_err());
    }

    #[test]
    fn bressoud_reduction_matches_through_doubled_order() {
        for m in [1, 2] {
            assert!(
                bressoud_reduction_check(m, HalfExp::whole(12)).unwrap().is_equal(),
                "m={m}"
            );
        }
    }

    #[test]
    fn specialization_route_agrees_with_the_fused_walk() {
        let order = HalfExp::whole(10);
        for fs in [
            spec(1, 1, 1, 1),
            spec(1, 2, 1, 1),
            spec(2, 1, 1, 1),
            spec(3, 1, 1, 2),
            spec(4, 1, 1, 1),
            spec(5, 1, 2, 1),
        ] {
            assert_eq!(
                sum_side(&fs, order).unwrap(),
                sum_side_via_hall_littlewood(&fs, order).unwrap(),
                "{fs}"
            );
        }
        // Families with extra gap factors are outside this route.
        assert!(sum_side_via_hall_littlewood(&spec(6, 1, 2, 1), order).is_err());
        assert!(sum_side_via_hall_littlewood(&spec(7, 1, 1, 1), order).is_err());
    }
}
