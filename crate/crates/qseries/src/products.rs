//! Truncated expansions of q-Pochhammer symbols, theta functions, and the
//! assembled infinite-product sides of the seven identity families.
//!
//! Everything here is exact arithmetic on [`Series`] values.  The only
//! non-integer that ever appears is the global constant 1/2 in family 7,
//! carried symbolically on [`ProductExpr`] until expansion; it must cancel
//! against the factor of 2 contributed by the `θ(−1;·)`-type factor, and a
//! failure to cancel is treated as a mistranscribed table, not a
//! recoverable condition.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::family::FamilySpec;
use crate::series::{HalfExp, Series};
use crate::{Error, Result};

/// Sign convention inside a binomial factor: `Plus` builds factors of the
/// form `1 − q^e`, `Minus` builds `1 + q^e`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// The coefficient of `q^e` in the factor `1 − sign·q^e`.
    fn term(self) -> i64 {
        match self {
            Sign::Plus => -1,
            Sign::Minus => 1,
        }
    }
}

/// One Pochhammer symbol `(±q^start; q^step)_count` raised to an integer
/// power; negative powers divide.
#[derive(Clone, Copy, Debug)]
pub struct FactorSpec {
    pub sign: Sign,
    pub start: HalfExp,
    pub step: HalfExp,
    /// `None` is the infinite symbol.
    pub count: Option<u64>,
    pub power: i32,
}

/// A product of Pochhammer factors scaled by a rational constant whose
/// denominator is a power of two.
#[derive(Clone, Debug)]
pub struct ProductExpr {
    pub constant_num: i64,
    pub constant_den_pow2: u32,
    pub factors: Vec<FactorSpec>,
}

/// Expands `(±q^start; q^step)_count` truncated at `order`.
///
/// `count = None` is the infinite symbol, which needs `step > 0` so that
/// factor exponents eventually leave the truncation window.  Factors whose
/// exponent exceeds the order are identically 1 at this truncation and are
/// skipped.
pub fn pochhammer(
    sign: Sign,
    start: HalfExp,
    step: HalfExp,
    count: Option<u64>,
    order: HalfExp,
) -> Series {
    assert!(
        count.is_some() || step > HalfExp::ZERO,
        "infinite Pochhammer symbol needs a positive step"
    );
    let len = order.twice() as usize + 1;
    let mut coeffs = vec![BigInt::zero(); len];
    coeffs[0] = BigInt::one();
    let mut j = 0u64;
    loop {
        if count == Some(j) {
            break;
        }
        let e2 = start.twice() as u64 + j * step.twice() as u64;
        if e2 > order.twice() as u64 {
            // Exponents only grow with j, so every remaining factor is 1
            // within the truncation.
            break;
        }
        mul_binomial(&mut coeffs, e2 as usize, sign);
        j += 1;
    }
    Series::from_twice_coeffs(coeffs)
}

/// In-place multiplication of a twice-indexed coefficient vector by
/// `1 − sign·q^(e2/2)`.
fn mul_binomial(coeffs: &mut [BigInt], e2: usize, sign: Sign) {
    let term = sign.term();
    if e2 == 0 {
        // The factor degenerates to a constant: 1 − 1 = 0 for `Plus`,
        // 1 + 1 = 2 for `Minus`.
        let c = BigInt::from(1 + term);
        for a in coeffs.iter_mut() {
            *a *= &c;
        }
        return;
    }
    for t in (e2..coeffs.len()).rev() {
        let add = &coeffs[t - e2] * term;
        coeffs[t] += add;
    }
}

/// The starting exponents of the two constituent infinite products of
/// `θ(±q^a; q^base) = (±q^a; q^base)_∞ · (±q^(base−a); q^base)_∞`.
///
/// Replacing the argument by `q^base` over it keeps the same sign, so both
/// constituents share the sign convention.  For `Plus` the exponents must
/// satisfy `0 < a < base`, or one constituent would contain the factor
/// `1 − q⁰ = 0`; for `Minus` the exponent 0 is fine (the factor is then
/// the constant 2) and only `a ≤ base` is required.
fn theta_starts(sign: Sign, a_exp: HalfExp, base_exp: HalfExp) -> Result<(HalfExp, HalfExp)> {
    match sign {
        Sign::Plus => {
            if a_exp == HalfExp::ZERO || a_exp >= base_exp {
                return Err(Error::Domain(format!(
                    "theta(q^{a_exp}; q^{base_exp}) needs 0 < {a_exp} < {base_exp}, \
                     or a constituent product vanishes"
                )));
            }
        }
        Sign::Minus => {
            if a_exp > base_exp {
                return Err(Error::Domain(format!(
                    "theta(-q^{a_exp}; q^{base_exp}) needs {a_exp} <= {base_exp}"
                )));
            }
        }
    }
    let mirror = HalfExp::from_twice(base_exp.twice() - a_exp.twice());
    Ok((a_exp, mirror))
}

/// Expands `θ(±q^a; q^base)` truncated at `order`.
pub fn theta(sign: Sign, a_exp: HalfExp, base_exp: HalfExp, order: HalfExp) -> Result<Series> {
    let (lo, hi) = theta_starts(sign, a_exp, base_exp)?;
    let first = pochhammer(sign, lo, base_exp, None, order);
    let second = pochhammer(sign, hi, base_exp, None, order);
    Ok(first.mul(&second))
}

impl ProductExpr {
    /// The empty product: constant 1, no factors.
    pub fn unit() -> ProductExpr {
        ProductExpr {
            constant_num: 1,
            constant_den_pow2: 0,
            factors: Vec::new(),
        }
    }

    /// Appends `(q^start; q^step)_∞` raised to `power` (`power = 0` is a
    /// no-op, which keeps the assembly tables uniform in the edge cases
    /// where an exponent like n−1 vanishes).
    fn infinite(&mut self, start: HalfExp, step: HalfExp, power: i32) {
        if power != 0 {
            self.factors.push(FactorSpec {
                sign: Sign::Plus,
                start,
                step,
                count: None,
                power,
            });
        }
    }

    /// Appends the two constituent products of `θ(±q^a; q^base)`.
    fn theta(&mut self, sign: Sign, a_exp: HalfExp, base_exp: HalfExp) -> Result<()> {
        let (lo, hi) = theta_starts(sign, a_exp, base_exp)?;
        for start in [lo, hi] {
            self.factors.push(FactorSpec {
                sign,
                start,
                step: base_exp,
                count: None,
                power: 1,
            });
        }
        Ok(())
    }

    /// Appends `θ(q^(j−i); q^base) · θ(q^(i+j+offset); q^base)` over all
    /// pairs `1 ≤ i < j ≤ limit`.
    fn theta_pairs(&mut self, limit: u32, offset: i32, base_exp: HalfExp) -> Result<()> {
        for i in 1..limit {
            for j in (i + 1)..=limit {
                self.theta(Sign::Plus, HalfExp::whole(j - i), base_exp)?;
                let second = i64::from(i + j) + i64::from(offset);
                debug_assert!(second > 0);
                self.theta(Sign::Plus, HalfExp::whole(second as u32), base_exp)?;
            }
        }
        Ok(())
    }

    /// Expands the whole product truncated at `order`.
    ///
    /// The power-of-two denominator on the constant must cancel exactly
    /// against the expanded factors; a residue would mean a mistranscribed
    /// factor table and is a panic, not an error.
    pub fn expand(&self, order: HalfExp) -> Result<Series> {
        let mut acc = Series::one(order);
        for f in &self.factors {
            let mut base = pochhammer(f.sign, f.start, f.step, f.count, order);
            if f.power < 0 {
                base = base.invert()?;
            }
            for _ in 0..f.power.unsigned_abs() {
                acc = acc.mul(&base);
            }
        }
        let mut acc = acc.scale(&BigInt::from(self.constant_num));
        if self.constant_den_pow2 > 0 {
            acc = div_exact_pow2(&acc, self.constant_den_pow2);
        }
        Ok(acc)
    }
}

/// Divides every coefficient by `2^k`, panicking on any remainder.
fn div_exact_pow2(series: &Series, k: u32) -> Series {
    let d = BigInt::one() << k;
    let coeffs = series
        .coeffs()
        .iter()
        .map(|c| {
            let rem = c % &d;
            assert!(
                rem.is_zero(),
                "constant denominator 2^{k} fails to cancel on coefficient {c}"
            );
            c / &d
        })
        .collect();
    Series::from_twice_coeffs(coeffs)
}

/// Expands the infinite-product side of a family in its `form`-th printed
/// shape (`form = 2` exists only for the families that display two).
pub fn product_side(spec: &FamilySpec, form: u8, order: HalfExp) -> Result<Series> {
    rhs_expr(spec, form, spec.kappa())?.expand(order)
}

/// Same as [`product_side`] but with the modulus overridden, so callers
/// can deliberately corrupt it as a negative control.
pub fn product_side_with_kappa(
    spec: &FamilySpec,
    form: u8,
    kappa: u32,
    order: HalfExp,
) -> Result<Series> {
    rhs_expr(spec, form, kappa)?.expand(order)
}

/// Assembles the factor table of one family/variant/form.
///
/// Exponent bookkeeping is done on the twice-grid throughout, so the
/// half-integer entries (step `q^(1/2)`, modulus `q^(κ/2)` for odd κ,
/// theta arguments like `q^(i−1/2)`) need no special casing.
fn rhs_expr(spec: &FamilySpec, form: u8, kappa: u32) -> Result<ProductExpr> {
    if form != 1 && form != 2 {
        return Err(Error::Domain(format!("unknown product form {form}")));
    }
    if form == 2 && !spec.has_second_form() {
        return Err(Error::Domain(format!(
            "family {} displays a single product form",
            spec.family()
        )));
    }
    let m = spec.m();
    let n = spec.n();
    let q1 = HalfExp::whole(1); // q
    let q2 = HalfExp::whole(2); // q²
    let qh = HalfExp::from_twice(1); // q^(1/2)
    let qk = HalfExp::whole(kappa); // q^κ
    let qk2 = HalfExp::from_twice(kappa); // q^(κ/2)

    let mut e = ProductExpr::unit();
    match (spec.family(), spec.variant(), form) {
        (1, 1, 1) => {
            e.infinite(qk, qk, n as i32);
            e.infinite(q1, q1, -(n as i32));
            for i in 1..=n {
                e.theta(Sign::Plus, HalfExp::whole(i + m), qk)?;
            }
            e.theta_pairs(n, -1, qk)?;
        }
        (1, 1, 2) => {
            e.infinite(qk, qk, m as i32);
            e.infinite(q1, q1, -(m as i32));
            for i in 1..=m {
                e.theta(Sign::Plus, HalfExp::whole(i + 1), qk)?;
            }
            e.theta_pairs(m, 1, qk)?;
        }
        (1, 2, _) => {
            let limit = if form == 1 { n } else { m };
            e.infinite(qk, qk, limit as i32);
            e.infinite(q1, q1, -(limit as i32));
            for i in 1..=limit {
                e.theta(Sign::Plus, HalfExp::whole(i), qk)?;
            }
            e.theta_pairs(limit, 0, qk)?;
        }
        (2, _, 1) => {
            e.infinite(q2, q2, 1);
            e.infinite(qk2, qk2, 1);
            e.infinite(qk, qk, n as i32 - 1);
            e.infinite(q1, q1, -(n as i32 + 1));
            for i in 1..=n {
                e.theta(Sign::Plus, HalfExp::whole(i), qk2)?;
            }
            e.theta_pairs(n, 0, qk)?;
        }
        (2, _, 2) => {
            e.infinite(qk, qk, m as i32);
            e.infinite(q1, q1, -(m as i32));
            for i in 1..=m {
                e.theta(Sign::Plus, HalfExp::whole(i + 1), qk)?;
            }
            e.theta_pairs(m, 1, qk)?;
        }
        (3, _, 1) => {
            e.infinite(qk, qk, n as i32);
            e.infinite(q2, q2, -1);
            e.infinite(q1, q1, -(n as i32 - 1));
            e.theta_pairs(n, -1, qk)?;
        }
        (3, _, 2) => {
            e.infinite(qk, qk, m as i32);
            e.infinite(q1, q1, -(m as i32));
            for i in 1..=m {
                e.theta(Sign::Plus, HalfExp::whole(i), qk)?;
            }
            e.theta_pairs(m, 0, qk)?;
        }
        (4, _, 1) => {
            e.infinite(qk, qk, n as i32 - 1);
            e.infinite(qk2, qk2, 1);
            e.infinite(q1, q1, -(n as i32 - 1));
            e.infinite(qh, qh, -1);
            for i in 1..=n {
                e.theta(Sign::Plus, HalfExp::whole(i), qk2)?;
            }
            e.theta_pairs(n, 0, qk)?;
        }
        (5, 1, 1) => {
            e.infinite(qk, qk, n as i32);
            e.infinite(q1, q1, -(n as i32 - 1));
            e.infinite(qh, q1, -1);
            e.infinite(q2, q2, -1);
            for i in 1..=n {
                // Argument q^(i + (m−1)/2), i.e. twice-value 2i + m − 1.
                e.theta(Sign::Plus, HalfExp::from_twice(2 * i + m - 1), qk)?;
            }
            e.theta_pairs(n, -1, qk)?;
        }
        (5, 2, 1) => {
            e.infinite(qk, qk, n as i32 - 1);
            e.infinite(qk2, qk2, 1);
            e.infinite(q1, q1, -(n as i32 - 1));
            e.infinite(qh, q1, -2);
            e.infinite(q2, q2, -1);
            for i in 1..=n {
                // Argument q^(i − 1/2) against modulus q^(κ/2).
                e.theta(Sign::Plus, HalfExp::from_twice(2 * i - 1), qk2)?;
            }
            e.theta_pairs(n, -1, qk)?;
        }
        (6, _, 1) => {
            e.infinite(qk, qk, n as i32);
            e.infinite(q1, q1, -(n as i32 - 1));
            e.infinite(qh, qh, -1);
            for i in 1..=n {
                // Argument q^(i + m/2 − 1/2), i.e. twice-value 2i + m − 1.
                e.theta(Sign::Plus, HalfExp::from_twice(2 * i + m - 1), qk)?;
            }
            e.theta_pairs(n, -2, qk)?;
        }
        (7, _, 1) => {
            e.constant_den_pow2 = 1;
            e.infinite(qk, qk, n as i32);
            e.infinite(q1, q1, -(n as i32));
            e.factors.push(FactorSpec {
                sign: Sign::Minus,
                start: qk2,
                step: qk,
                count: None,
                power: 1,
            });
            for i in 1..=n {
                e.theta(Sign::Minus, HalfExp::whole(i - 1), qk)?;
                // Argument q^(i + κ/2 − 1), i.e. twice-value 2i + κ − 2.
                e.theta(Sign::Plus, HalfExp::from_twice(2 * i + kappa - 2), qk)?;
            }
            e.theta_pairs(n, -2, qk)?;
        }
        _ => unreachable!("family/variant combinations are validated by FamilySpec"),
    }
    Ok(e)
}
