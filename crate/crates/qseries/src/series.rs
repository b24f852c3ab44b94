//! Truncated formal power series in `u`, where `u² = q`.
//!
//! Exponents live on the half-integer grid: a [`HalfExp`] stores *twice*
//! the q-exponent, so `q^(5/2)` is `HalfExp::from_twice(5)` and `q³` is
//! `HalfExp::whole(3)`.  A [`Series`] keeps one dense big-integer
//! coefficient per half-step from `q⁰` up to its truncation order.
//!
//! Truncation is explicit state, never an approximation: coefficients at
//! exponents beyond the order are *unknown*, not zero.  Binary operations
//! therefore carry `order = min(order_a, order_b)`, and reading past the
//! order is a domain error rather than a silent zero.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// An exponent on the half-integer grid, stored as twice its value.
///
/// All exponents in this crate are nonnegative; the enumeration layers
/// prove their exponents cannot go negative and assert it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HalfExp {
    twice: u32,
}

impl HalfExp {
    pub const ZERO: HalfExp = HalfExp { twice: 0 };

    /// The exponent `t/2`.
    pub fn from_twice(twice: u32) -> Self {
        HalfExp { twice }
    }

    /// The whole exponent `k`, i.e. twice-value `2k`.
    pub fn whole(k: u32) -> Self {
        HalfExp { twice: 2 * k }
    }

    /// Twice the exponent value (the grid index).
    pub fn twice(self) -> u32 {
        self.twice
    }

    /// True when the exponent is an integer power of `q`.
    pub fn is_integral(self) -> bool {
        self.twice % 2 == 0
    }
}

impl fmt::Display for HalfExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Outcome of a coefficientwise comparison through a given order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Comparison {
    Equal,
    /// The smallest exponent at which the two series differ, with both
    /// stored coefficients.
    MismatchAt {
        exponent: HalfExp,
        lhs: BigInt,
        rhs: BigInt,
    },
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal)
    }
}

/// Dense truncated power series on the half-integer exponent grid.
///
/// `coeffs[t]` is the coefficient of `q^(t/2)`; the vector always holds
/// exactly `order.twice() + 1` entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    coeffs: Vec<BigInt>,
    order: HalfExp,
}

impl Series {
    /// The zero series truncated at `order`.
    pub fn zero(order: HalfExp) -> Series {
        Series {
            coeffs: vec![BigInt::zero(); order.twice() as usize + 1],
            order,
        }
    }

    /// The constant series 1 truncated at `order`.
    pub fn one(order: HalfExp) -> Series {
        let mut s = Series::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// A single term `c·q^e` truncated at `order`.
    pub fn monomial(c: impl Into<BigInt>, e: HalfExp, order: HalfExp) -> Result<Series> {
        if e > order {
            return Err(Error::Domain(format!(
                "monomial exponent {e} exceeds truncation order {order}"
            )));
        }
        let mut s = Series::zero(order);
        s.coeffs[e.twice() as usize] = c.into();
        Ok(s)
    }

    /// Builds a series from raw twice-indexed coefficients; the slice
    /// length fixes the order (`len = order.twice() + 1`).  Used by the
    /// enumeration layers, which accumulate on raw vectors.
    pub(crate) fn from_twice_coeffs(coeffs: Vec<BigInt>) -> Series {
        assert!(!coeffs.is_empty(), "series needs at least the constant slot");
        let order = HalfExp::from_twice((coeffs.len() - 1) as u32);
        Series { coeffs, order }
    }

    pub fn order(&self) -> HalfExp {
        self.order
    }

    /// All stored coefficients, indexed by twice-exponent.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// The stored coefficient of `q^e`; reading beyond the truncation
    /// order is a domain error, never a silent zero.
    pub fn coeff(&self, e: HalfExp) -> Result<&BigInt> {
        if e > self.order {
            return Err(Error::Domain(format!(
                "coefficient at {e} requested, but series is only known through {}",
                self.order
            )));
        }
        Ok(&self.coeffs[e.twice() as usize])
    }

    /// Coefficientwise sum, truncated at the smaller order.
    pub fn add(&self, other: &Series) -> Series {
        let order = self.order.min(other.order);
        let len = order.twice() as usize + 1;
        let coeffs = (0..len)
            .map(|t| &self.coeffs[t] + &other.coeffs[t])
            .collect();
        Series { coeffs, order }
    }

    /// Coefficientwise difference, truncated at the smaller order.
    pub fn sub(&self, other: &Series) -> Series {
        let order = self.order.min(other.order);
        let len = order.twice() as usize + 1;
        let coeffs = (0..len)
            .map(|t| &self.coeffs[t] - &other.coeffs[t])
            .collect();
        Series { coeffs, order }
    }

    /// Cauchy product, truncated at the smaller order.
    pub fn mul(&self, other: &Series) -> Series {
        let order = self.order.min(other.order);
        let len = order.twice() as usize + 1;
        let mut coeffs = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().take(len).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (b, c) in other.coeffs.iter().zip(coeffs[i..].iter_mut()) {
                if !b.is_zero() {
                    *c += a * b;
                }
            }
        }
        Series { coeffs, order }
    }

    /// Multiplicative inverse up to the truncation order.
    ///
    /// Requires a unit constant term (±1) so the inverse stays integral;
    /// that the constant actually is ±1 is itself a correctness check on
    /// the callers, which only ever invert products of `(1 − q^k)`-type
    /// factors.
    pub fn invert(&self) -> Result<Series> {
        let a0 = &self.coeffs[0];
        if !(a0 == &BigInt::one() || a0 == &(-BigInt::one())) {
            return Err(Error::Domain(format!(
                "cannot invert series with non-unit constant term {a0}"
            )));
        }
        let len = self.coeffs.len();
        let mut inv = vec![BigInt::zero(); len];
        // With a0 = ±1: c₀ = a0, and cₜ = −a0·Σ_{k=1..t} aₖ·c_{t−k}.
        inv[0] = a0.clone();
        for t in 1..len {
            let mut acc = BigInt::zero();
            for k in 1..=t {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &inv[t - k];
                }
            }
            inv[t] = -(a0 * acc);
        }
        Ok(Series {
            coeffs: inv,
            order: self.order,
        })
    }

    /// Compares coefficients through `order`, which must not exceed
    /// either truncation order (comparing unknown coefficients would be
    /// meaningless).
    pub fn equal_to_order(&self, other: &Series, order: HalfExp) -> Result<Comparison> {
        if order > self.order || order > other.order {
            return Err(Error::Domain(format!(
                "comparison through {order} requested, but series are only known through {} and {}",
                self.order, other.order
            )));
        }
        for t in 0..=order.twice() as usize {
            if self.coeffs[t] != other.coeffs[t] {
                return Ok(Comparison::MismatchAt {
                    exponent: HalfExp::from_twice(t as u32),
                    lhs: self.coeffs[t].clone(),
                    rhs: other.coeffs[t].clone(),
                });
            }
        }
        Ok(Comparison::Equal)
    }

    /// Restricts to a smaller truncation order (dropping knowledge).
    pub fn truncate(&self, order: HalfExp) -> Series {
        assert!(
            order <= self.order,
            "truncate can only lower the order ({} -> {order})",
            self.order
        );
        Series {
            coeffs: self.coeffs[..=order.twice() as usize].to_vec(),
            order,
        }
    }

    /// The series with `q` replaced by `q²`.
    ///
    /// A coefficient known at `q^(t/2)` becomes the coefficient of `q^t`,
    /// so the result is known through twice the original order (the new
    /// odd half-steps are genuinely zero, not unknown).
    pub fn substitute_q_squared(&self) -> Series {
        let order = HalfExp::from_twice(2 * self.order.twice());
        let mut coeffs = vec![BigInt::zero(); order.twice() as usize + 1];
        for (t, c) in self.coeffs.iter().enumerate() {
            coeffs[2 * t] = c.clone();
        }
        Series { coeffs, order }
    }

    /// Scales every coefficient by `c`.
    pub fn scale(&self, c: &BigInt) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            order: self.order,
        }
    }

    /// Shifts the series by `q^e` (multiplication by a monomial),
    /// keeping the truncation order.
    pub fn shift(&self, e: HalfExp) -> Series {
        let len = self.coeffs.len();
        let mut coeffs = vec![BigInt::zero(); len];
        for (t, c) in self.coeffs.iter().enumerate() {
            let dst = t + e.twice() as usize;
            if dst < len {
                coeffs[dst] = c.clone();
            }
        }
        Series {
            coeffs,
            order: self.order,
        }
    }
}
