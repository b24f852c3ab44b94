//! Slow, definition-level reference computations used to certify the fast
//! paths: the finite-variable symmetrization behind `hl_principal`, and
//! directly coded classical sum sides (the Rogers–Ramanujan pair, the
//! odd-modulus Andrews–Gordon series, and Bressoud's even-modulus
//! companion).
//!
//! The symmetrization sums over all `N!` permutations of the principal
//! values `1, q, …, q^(N−1)`.  Each permutation term is a product of
//! factors `(x_u − q^n·x_v)/(x_u − x_v)`, and with these values every
//! such factor is `±q^shift · (1 − q^gap)^(±1)` — a monomial times a
//! unit.  The walk over permutation prefixes therefore keeps one unit
//! polynomial per depth (multiplying numerator binomials downward and
//! dividing denominator binomials by stride prefix sums, both exact
//! under truncation) plus a monomial shift, which never decreases and so
//! prunes the walk once it must leave the truncation window.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::Partition;
use crate::series::{HalfExp, Series};
use crate::{Error, Result};

/// Largest variable count [`hl_principal_oracle`] will try before giving
/// up: the sum has `N!` terms, so this is a hard affordability line.
const N_BUDGET: usize = 9;

/// A quotient of series whose denominator must be invertible.
///
/// The symmetrization keeps its rational arithmetic in factored form all
/// the way down; this type is where a quotient is finally materialized
/// and the unit-denominator requirement is checked rather than assumed.
#[derive(Clone, Debug)]
pub struct RationalFunctionValue {
    pub numerator: Series,
    pub denominator: Series,
}

impl RationalFunctionValue {
    pub fn new(numerator: Series, denominator: Series) -> Result<RationalFunctionValue> {
        let c = denominator.coeff(HalfExp::ZERO)?;
        if !(c == &BigInt::one() || c == &(-BigInt::one())) {
            return Err(Error::Domain(format!(
                "quotient denominator has non-unit constant term {c}"
            )));
        }
        Ok(RationalFunctionValue {
            numerator,
            denominator,
        })
    }

    /// The quotient as a series, truncated at the operands' order.
    pub fn eval(&self) -> Result<Series> {
        Ok(self.denominator.invert()?.mul(&self.numerator))
    }
}

/// Walk state for the permutation sum: which principal indices are used,
/// the assigned prefix, and one unit polynomial per depth on the whole-q
/// grid (`levels[k]` belongs to a prefix of length `k`).
struct Symmetrizer {
    n_vars: usize,
    t_exp: u64,
    parts: Vec<u64>,
    wlen: usize,
    used: Vec<bool>,
    sigma: Vec<u64>,
    levels: Vec<Vec<BigInt>>,
    acc: Vec<BigInt>,
}

impl Symmetrizer {
    fn run(n_vars: usize, t_exp: u64, parts: Vec<u64>, wlen: usize) -> Vec<BigInt> {
        let mut one = vec![BigInt::zero(); wlen];
        one[0] = BigInt::one();
        let mut walk = Symmetrizer {
            n_vars,
            t_exp,
            parts,
            wlen,
            used: vec![false; n_vars + 1],
            sigma: Vec::with_capacity(n_vars),
            levels: vec![one],
            acc: vec![BigInt::zero(); wlen],
        };
        walk.descend(0, 0, 1);
        walk.acc
    }

    /// Every still-unused value `w` smaller than a used value `u` must
    /// eventually form a pair whose shift is at least 1 (the factor
    /// `x_u − x_w` with `u > w` costs `min(u−w, t_exp) ≥ 1` against its
    /// numerator).  Counting those guaranteed crossings gives an
    /// admissible lower bound on the shift still to come.
    fn guaranteed_crossings(&self, extra_used: u64) -> u64 {
        let mut bound = 0;
        for w in 1..=self.n_vars as u64 {
            if self.used[w as usize] || w == extra_used {
                continue;
            }
            for u in 1..=self.n_vars as u64 {
                if (self.used[u as usize] || u == extra_used) && u > w {
                    bound += 1;
                }
            }
        }
        bound
    }

    fn descend(&mut self, depth: usize, shift: u64, sign: i64) {
        if depth == self.n_vars {
            let poly = &self.levels[depth];
            for t in 0..self.wlen - shift as usize {
                if sign > 0 {
                    self.acc[t + shift as usize] += &poly[t];
                } else {
                    self.acc[t + shift as usize] -= &poly[t];
                }
            }
            return;
        }
        'candidates: for v in 1..=self.n_vars as u64 {
            if self.used[v as usize] {
                continue;
            }
            // Assign position depth+1 the principal index v, i.e. the
            // value x = q^(v−1).  First pass: integer bookkeeping only —
            // monomial and pair shifts, sign, vanishing numerators — so
            // pruned branches never touch a polynomial.
            let mut new_shift = shift + (v - 1) * self.parts[depth];
            let mut new_sign = sign;
            for &u in &self.sigma {
                // Numerator x_u − q^t_exp·x_v, denominator x_u − x_v.
                let (nu, nv) = (u - 1, self.t_exp + v - 1);
                if nu == nv {
                    // The numerator vanishes identically.
                    continue 'candidates;
                }
                let num_min = nu.min(nv);
                let den_min = (u - 1).min(v - 1);
                assert!(
                    num_min >= den_min,
                    "permutation term with a negative exponent shift"
                );
                new_shift += num_min - den_min;
                if nu > nv {
                    new_sign = -new_sign;
                }
                // Dividing by the denominator's −1 flips like multiplying.
                if u > v {
                    new_sign = -new_sign;
                }
            }
            if (new_shift + self.guaranteed_crossings(v)) as usize >= self.wlen {
                continue;
            }
            // Second pass: the polynomial part, one numerator unit
            // multiplied and one denominator unit divided per bound pair.
            if self.levels.len() <= depth + 1 {
                self.levels.push(vec![BigInt::zero(); self.wlen]);
            }
            let (head, tail) = self.levels.split_at_mut(depth + 1);
            let poly = &mut tail[0];
            for (dst, src) in poly.iter_mut().zip(&head[depth]) {
                dst.clone_from(src);
            }
            for &u in &self.sigma {
                let (nu, nv) = (u - 1, self.t_exp + v - 1);
                let num_gap = nu.abs_diff(nv) as usize;
                if num_gap < self.wlen {
                    for t in (num_gap..self.wlen).rev() {
                        let sub = poly[t - num_gap].clone();
                        poly[t] -= sub;
                    }
                }
                let den_gap = u.abs_diff(v) as usize;
                if den_gap < self.wlen {
                    for t in den_gap..self.wlen {
                        let add = poly[t - den_gap].clone();
                        poly[t] += add;
                    }
                }
            }
            self.used[v as usize] = true;
            self.sigma.push(v);
            self.descend(depth + 1, new_shift, new_sign);
            self.sigma.pop();
            self.used[v as usize] = false;
        }
    }
}

/// Converts whole-grid coefficients to a [`Series`] on the half grid.
fn whole_to_series(whole: Vec<BigInt>, order: HalfExp) -> Series {
    let mut coeffs = vec![BigInt::zero(); order.twice() as usize + 1];
    for (t, c) in whole.into_iter().enumerate() {
        coeffs[2 * t] = c;
    }
    Series::from_twice_coeffs(coeffs)
}

/// `P_λ(1, q, …, q^(N−1); q^n)` straight from the symmetrized-sum
/// definition, truncated at `order`.
///
/// This is deliberately naive — `N!` permutation terms, pruned but never
/// reorganized — and exists to certify `hl_principal`, which reaches the
/// same values through the combinatorial sum.
pub fn hl_finite_direct(
    lambda: &Partition,
    n_vars: usize,
    n: u32,
    order: HalfExp,
) -> Result<Series> {
    if n_vars == 0 || n == 0 {
        return Err(Error::Domain(
            "symmetrization needs positive variable count and base exponent".into(),
        ));
    }
    if lambda.len() > n_vars {
        return Err(Error::Domain(format!(
            "{n_vars} variables cannot carry a partition of length {}",
            lambda.len()
        )));
    }
    let wlen = (order.twice() / 2) as usize + 1;
    let parts: Vec<u64> = (0..n_vars)
        .map(|k| lambda.parts().get(k).copied().unwrap_or(0) as u64)
        .collect();
    let sum = Symmetrizer::run(n_vars, n as u64, parts, wlen);

    // Multiplicity prefactor ∏_i (1−t)^(m_i)/(t;t)_(m_i) with t = q^n and
    // m_0 = N − l(λ): each (1−t)^m/(t;t)_m is 1/∏_{j≤m}(1+t+⋯+t^(j−1)).
    let mut den = vec![BigInt::zero(); wlen];
    den[0] = BigInt::one();
    let mut mults = vec![n_vars as u32 - lambda.len() as u32];
    let mut prev = 0;
    for &p in lambda.parts() {
        if p != prev {
            mults.push(lambda.multiplicity(p));
            prev = p;
        }
    }
    for m in mults {
        for j in 2..=m as usize {
            // Multiply den by 1 + q^n + ⋯ + q^(n(j−1)).
            let mut next = vec![BigInt::zero(); wlen];
            for c in 0..j {
                let e = c * n as usize;
                if e >= wlen {
                    break;
                }
                for t in e..wlen {
                    next[t] += &den[t - e];
                }
            }
            den = next;
        }
    }
    let quotient =
        RationalFunctionValue::new(whole_to_series(sum, order), whole_to_series(den, order))?;
    quotient.eval()
}

/// The infinite-variable principal specialization as a limit of
/// [`hl_finite_direct`]: increases `N` until two consecutive results
/// agree through `order`, and reports a resource error if that does not
/// happen within the `N ≤ 9` budget.
pub fn hl_principal_oracle(lambda: &Partition, n: u32, order: HalfExp) -> Result<Series> {
    let start = lambda.len().max(1);
    let mut prev = hl_finite_direct(lambda, start, n, order)?;
    for n_vars in start + 1..=N_BUDGET {
        let cur = hl_finite_direct(lambda, n_vars, n, order)?;
        if prev.equal_to_order(&cur, order)?.is_equal() {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Resource(format!(
        "symmetrization oracle did not stabilize through order {order} within N <= {N_BUDGET}"
    )))
}

/// The largest order (at most `cap`) through which the symmetrization
/// can certify its own value within the `N ≤ 9` budget: the agreement
/// window of the two largest affordable variable counts, reported in
/// whole-q units (the symmetrization lives on the whole-q grid).
///
/// Adding a variable only perturbs terms near the truncation horizon, so
/// consecutive `N` agree through roughly `N − λ₁`; requesting an order
/// beyond that window from [`hl_principal_oracle`] is a guaranteed
/// resource error.  Callers that want "as far as the oracle can see"
/// first ask here, then run the oracle at the answer.
pub fn certified_order(lambda: &Partition, n: u32, cap: HalfExp) -> Result<HalfExp> {
    let a = hl_finite_direct(lambda, N_BUDGET - 1, n, cap)?;
    let b = hl_finite_direct(lambda, N_BUDGET, n, cap)?;
    match a.equal_to_order(&b, cap)? {
        crate::series::Comparison::Equal => Ok(cap),
        crate::series::Comparison::MismatchAt { exponent, .. } => {
            // Both operands are supported on even twice-exponents, so the
            // first mismatch sits at a whole power and the window is the
            // whole power before it.
            Ok(HalfExp::from_twice(exponent.twice().saturating_sub(2)))
        }
    }
}

/// `1/(q^step; q^step)_k`, truncated at `order`.
fn inv_poch(step: u32, k: u32, order: HalfExp) -> Series {
    crate::products::pochhammer(
        crate::products::Sign::Plus,
        HalfExp::whole(step),
        HalfExp::whole(step),
        Some(k as u64),
        order,
    )
    .invert()
    .expect("finite Pochhammer symbols have constant term 1")
}

/// Enumerates tuples `r_1 ≥ ⋯ ≥ r_m ≥ 0` with `Σ r_j² ≤ cap`, handing
/// each completed tuple to `emit`.
fn descending_tuples(m: usize, cap: u64, emit: &mut impl FnMut(&[u64])) {
    fn fill(buf: &mut Vec<u64>, m: usize, cap: u64, used: u64, emit: &mut dyn FnMut(&[u64])) {
        if buf.len() == m {
            emit(buf);
            return;
        }
        let bound = buf.last().copied().unwrap_or(u64::MAX);
        let mut r = 0u64;
        while r <= bound && used + r * r <= cap {
            buf.push(r);
            fill(buf, m, cap, used + r * r, emit);
            buf.pop();
            r += 1;
        }
    }
    fill(&mut Vec::with_capacity(m), m, cap, 0, emit);
}

/// The odd-modulus multi-sum
/// `Σ q^(r_1²+⋯+r_m²+r_i+⋯+r_m) / ((q)_(r_1−r_2) ⋯ (q)_(r_m))`
/// over `r_1 ≥ ⋯ ≥ r_m ≥ 0`, truncated at `order`.
pub fn andrews_gordon_lhs(m: u32, i: u32, order: HalfExp) -> Series {
    assert!(
        (1..=m + 1).contains(&i),
        "Andrews-Gordon index i must lie in 1..=m+1"
    );
    let cap = (order.twice() / 2) as u64;
    let mut acc = Series::zero(order);
    descending_tuples(m as usize, cap, &mut |r| {
        let mut exp: u64 = r.iter().map(|&v| v * v).sum();
        exp += r.iter().skip(i as usize - 1).sum::<u64>();
        if exp > cap {
            return;
        }
        let mut term = Series::one(order);
        for j in 0..m as usize {
            let gap = r[j] - r.get(j + 1).copied().unwrap_or(0);
            term = term.mul(&inv_poch(1, gap as u32, order));
        }
        acc = acc.add(&term.shift(HalfExp::whole(exp as u32)));
    });
    acc
}

/// The even-modulus companion sum
/// `Σ q^(s_1²+⋯+s_m²) / ((q)_(s_1−s_2) ⋯ (q)_(s_(m−1)−s_m) (q²;q²)_(s_m))`,
/// truncated at `order`.
pub fn bressoud_lhs(m: u32, order: HalfExp) -> Series {
    let cap = (order.twice() / 2) as u64;
    let mut acc = Series::zero(order);
    descending_tuples(m as usize, cap, &mut |s| {
        let exp: u64 = s.iter().map(|&v| v * v).sum();
        if exp > cap {
            return;
        }
        let mut term = Series::one(order);
        for j in 0..m as usize - 1 {
            term = term.mul(&inv_poch(1, (s[j] - s[j + 1]) as u32, order));
        }
        term = term.mul(&inv_poch(2, s[m as usize - 1] as u32, order));
        acc = acc.add(&term.shift(HalfExp::whole(exp as u32)));
    });
    acc
}

/// The two classical product sides by direct partition counting:
/// `which = 1` counts partitions into parts ≡ ±1 (mod 5), `which = 2`
/// parts ≡ ±2 (mod 5).
pub fn rr_product(which: u8, order: HalfExp) -> Series {
    assert!(which == 1 || which == 2, "the classical pair has two members");
    let residues: [u32; 2] = if which == 1 { [1, 4] } else { [2, 3] };
    let len = order.twice() as usize + 1;
    let mut counts = vec![BigInt::zero(); len];
    counts[0] = BigInt::one();
    let mut part = 1u32;
    while 2 * (part as usize) < len {
        if residues.contains(&(part % 5)) {
            let e = 2 * part as usize;
            for t in e..len {
                let add = counts[t - e].clone();
                counts[t] += add;
            }
        }
        part += 1;
    }
    Series::from_twice_coeffs(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hall_littlewood::hl_principal;
    use crate::products::{pochhammer, theta, Sign};

    fn w(k: u32) -> HalfExp {
        HalfExp::whole(k)
    }

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn whole(series: &Series) -> Vec<i64> {
        series
            .coeffs()
            .iter()
            .enumerate()
            .filter_map(|(t, c)| {
                if t % 2 == 0 {
                    Some(i64::try_from(c).unwrap())
                } else {
                    assert!(c.is_zero(), "unexpected half-step coefficient at t={t}");
                    None
                }
            })
            .collect()
    }

    #[test]
    fn empty_partition_specializes_to_one() {
        for n_vars in 1..=4 {
            for n in 1..=2 {
                let s = hl_finite_direct(&Partition::empty(), n_vars, n, w(6)).unwrap();
                assert_eq!(s, Series::one(w(6)), "N={n_vars}, n={n}");
            }
        }
    }

    #[test]
    fn single_box_is_the_monomial_sum() {
        // P_(1) is x_1 + ⋯ + x_N for every parameter value, so the
        // specialization is 1 + q + ⋯ + q^(N−1).
        let s = hl_finite_direct(&p(&[1]), 3, 1, w(2)).unwrap();
        assert_eq!(whole(&s), vec![1, 1, 1]);
        for n in 1..=3 {
            let s = hl_finite_direct(&p(&[1]), 5, n, w(4)).unwrap();
            assert_eq!(whole(&s), vec![1, 1, 1, 1, 1], "n={n}");
        }
    }

    #[test]
    fn two_variable_cases_match_hand_algebra() {
        // With two variables: the length-2 column gives x_1x_2 → q, and
        // the single row (2) gives x_1² + x_2² + (1−t)x_1x_2, which at
        // (1, q) with t = q^n is 1 + q + q² − q^(n+1).
        let s = hl_finite_direct(&p(&[1, 1]), 2, 1, w(3)).unwrap();
        assert_eq!(whole(&s), vec![0, 1, 0, 0]);
        let s = hl_finite_direct(&p(&[2]), 2, 1, w(3)).unwrap();
        assert_eq!(whole(&s), vec![1, 1, 0, 0]);
        let s = hl_finite_direct(&p(&[2]), 2, 2, w(3)).unwrap();
        assert_eq!(whole(&s), vec![1, 1, 1, -1]);
    }

    #[test]
    fn rejects_overlong_partitions() {
        assert!(hl_finite_direct(&p(&[1, 1, 1]), 2, 1, w(4)).is_err());
    }

    #[test]
    fn consecutive_variable_counts_agree_through_the_stability_window() {
        let shapes = [p(&[1]), p(&[2]), p(&[1, 1]), p(&[2, 1]), p(&[2, 2])];
        let order = w(8);
        for lambda in &shapes {
            for n in 1..=2 {
                for n_vars in lambda.len().max(1)..=5 {
                    let a = hl_finite_direct(lambda, n_vars, n, order).unwrap();
                    let b = hl_finite_direct(lambda, n_vars + 1, n, order).unwrap();
                    let window = w((n_vars as u32).saturating_sub(lambda.first()).min(8));
                    assert!(
                        a.equal_to_order(&b, window).unwrap().is_equal(),
                        "λ={lambda}, n={n}, N={n_vars} vs {}",
                        n_vars + 1
                    );
                }
            }
        }
    }

    #[test]
    fn symmetrization_certifies_the_combinatorial_sum() {
        let shapes = [p(&[1]), p(&[2]), p(&[1, 1]), p(&[2, 1]), p(&[3, 2])];
        for lambda in &shapes {
            for n in 1..=2u32 {
                let n_vars = 6;
                let window = w(n_vars as u32 - lambda.first());
                let direct = hl_finite_direct(lambda, n_vars, n, window).unwrap();
                let fast = hl_principal(lambda, n as usize, window);
                assert!(
                    direct.equal_to_order(&fast, window).unwrap().is_equal(),
                    "λ={lambda}, n={n}"
                );
            }
        }
    }

    #[test]
    fn oracle_stabilizes_or_reports_its_budget() {
        let s = hl_principal_oracle(&p(&[1]), 1, w(5)).unwrap();
        assert_eq!(whole(&s), vec![1, 1, 1, 1, 1, 1]);

        let s = hl_principal_oracle(&p(&[1, 1]), 2, w(4)).unwrap();
        assert_eq!(s, hl_principal(&p(&[1, 1]), 2, w(4)));

        // Stabilization through order 20 would need more variables than
        // the budget allows.
        match hl_principal_oracle(&p(&[1]), 1, w(20)) {
            Err(Error::Resource(_)) => {}
            other => panic!("expected a resource error, got {other:?}"),
        }
    }

    #[test]
    fn certified_order_bounds_then_feeds_the_oracle() {
        // λ = (1): N variables see 1 + q + ⋯ + q^(N−1), so N = 8 vs 9
        // disagree first at q⁸ and the certified window is order 7.
        let cw = certified_order(&p(&[1]), 1, w(20)).unwrap();
        assert_eq!(cw, w(7));
        // The oracle succeeds exactly up to that window…
        let s = hl_principal_oracle(&p(&[1]), 1, cw).unwrap();
        assert_eq!(whole(&s), vec![1; 8]);
        // …and a low cap is passed through untouched.
        assert_eq!(certified_order(&p(&[1]), 1, w(4)).unwrap(), w(4));
    }

    #[test]
    fn andrews_gordon_single_row_matches_the_classical_pair() {
        assert_eq!(
            whole(&andrews_gordon_lhs(1, 1, w(6))),
            vec![1, 0, 1, 1, 1, 1, 2]
        );
        assert_eq!(
            whole(&andrews_gordon_lhs(1, 2, w(6))),
            vec![1, 1, 1, 1, 2, 2, 3]
        );
        // The i = 1 sum carries the linear term and lands on the ±2
        // product; i = m+1 drops it and lands on the ±1 product.
        let order = w(50);
        assert_eq!(andrews_gordon_lhs(1, 1, order), rr_product(2, order));
        assert_eq!(andrews_gordon_lhs(1, 2, order), rr_product(1, order));
    }

    #[test]
    fn rr_products_count_restricted_partitions() {
        assert_eq!(whole(&rr_product(1, w(6))), vec![1, 1, 1, 1, 2, 2, 3]);
        assert_eq!(whole(&rr_product(2, w(6))), vec![1, 0, 1, 1, 1, 1, 2]);
        // Cross-check the counting against the product machinery.
        let order = w(30);
        let target = pochhammer(Sign::Plus, w(1), w(5), None, order)
            .mul(&pochhammer(Sign::Plus, w(4), w(5), None, order))
            .invert()
            .unwrap();
        assert_eq!(rr_product(1, order), target);
    }

    #[test]
    fn bressoud_single_row_counts_distinct_odd_parts() {
        assert_eq!(whole(&bressoud_lhs(1, w(6))), vec![1, 1, 0, 1, 1, 1, 1]);
        // Σ q^(s²)/(q²;q²)_s = (−q;q²)_∞.
        let order = w(30);
        let target = pochhammer(Sign::Minus, w(1), w(2), None, order);
        assert_eq!(bressoud_lhs(1, order), target);
    }

    #[test]
    fn bressoud_two_rows_match_their_even_modulus_product() {
        let order = w(24);
        let lhs = bressoud_lhs(2, order);
        let rhs = pochhammer(Sign::Plus, w(6), w(6), None, order)
            .mul(&theta(Sign::Plus, w(3), w(6), order).unwrap())
            .mul(
                &pochhammer(Sign::Plus, w(1), w(1), None, order)
                    .invert()
                    .unwrap(),
            );
        assert_eq!(lhs, rhs);
    }
}
