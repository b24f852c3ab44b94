//! Descriptors for the seven identity families.
//!
//! A `FamilySpec` pins down everything both sides of one identity need:
//! the modulus κ, the column count of the index grids, the exponent
//! added on top of the grid statistic, the optional extra weight
//! factors on column-0 gaps, and the optional parity restriction on
//! column 0.  Families 1–3 run over doubled column-0 grids (an outer
//! partition `r` with each part repeated), families 4–7 over grids with
//! a free column 0.

use crate::engine::ExtraKind;
use crate::{Error, Result};
use std::fmt;

/// How a family's exponent prefactor is computed from the outer data.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum PrefactorRule {
    /// `a·r` with `r = r₁+…+r_m`, for the doubled-column families.
    OuterWeight { a: u32 },
    /// `½·s⁽⁰⁾`.
    HalfColumnSum,
    /// `½·s⁽⁰⁾ + n·alt(s⁽⁰⁾)`.  The weight n on the alternating sum
    /// is invisible at n = 1; without it the family-7 sum matches no
    /// product of modulus 2m+2n once n ≥ 2.
    HalfColumnSumPlusAlt,
}

/// One identity family/variant with its parameters `m, n ≥ 1`.
///
/// `variant` is 2 only where a second left-hand side exists: family 1
/// (prefactors `+r` vs `+2r`) and family 5 (two displayed identities).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FamilySpec {
    family: u8,
    variant: u8,
    m: u32,
    n: u32,
}

impl FamilySpec {
    pub fn new(family: u8, variant: u8, m: u32, n: u32) -> Result<FamilySpec> {
        if !(1..=7).contains(&family) {
            return Err(Error::Domain(format!("family must be 1–7, got {family}")));
        }
        let variants = if family == 1 || family == 5 { 2 } else { 1 };
        if variant == 0 || variant > variants {
            return Err(Error::Domain(format!(
                "family {family} has {variants} variant(s), got variant {variant}"
            )));
        }
        if m == 0 || n == 0 {
            return Err(Error::Domain(format!(
                "parameters must be positive, got m={m}, n={n}"
            )));
        }
        if family == 3 && n < 2 {
            return Err(Error::Domain("family 3 requires n ≥ 2".into()));
        }
        Ok(FamilySpec {
            family,
            variant,
            m,
            n,
        })
    }

    pub fn family(&self) -> u8 {
        self.family
    }

    pub fn variant(&self) -> u8 {
        self.variant
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The modulus κ of the family's products.
    pub fn kappa(&self) -> u32 {
        let (m, n) = (self.m, self.n);
        match self.family {
            1 => 2 * m + 2 * n + 1,
            2 => 2 * m + 2 * n + 2,
            3 => 2 * m + 2 * n,
            4 => m + 2 * n + 1,
            5 => m + 2 * n,
            6 => m + 2 * n - 1,
            7 => 2 * m + 2 * n,
            _ => unreachable!("validated at construction"),
        }
    }

    /// The grid column count n′ of the family header.
    ///
    /// Family 3 uses 2n−2 (hence its n ≥ 2 floor): with 2n columns its
    /// sum matches no product of the family's modulus, while 2n−2
    /// restores both stated product forms and the uniform even-modulus
    /// rule κ = 2m + n′ + 2 shared with families 1 and 2.
    pub fn n_prime(&self) -> u32 {
        match self.family {
            1 | 5 | 6 => 2 * self.n - 1,
            2 | 4 | 7 => 2 * self.n,
            3 => 2 * self.n - 2,
            _ => unreachable!("validated at construction"),
        }
    }

    /// Families 1–3 state the product side in two equivalent shapes.
    pub fn has_second_form(&self) -> bool {
        self.family <= 3
    }

    /// Rows of the index grids the sum side ranges over.
    pub(crate) fn grid_rows(&self) -> usize {
        match self.family {
            1..=3 | 7 => 2 * self.m as usize,
            4..=6 => self.m as usize,
            _ => unreachable!("validated at construction"),
        }
    }

    /// Stored grid columns of the sum side, column 0 included.  This is
    /// n′ except for the second identity of family 5, which is displayed
    /// over 2n columns.
    pub(crate) fn sum_columns(&self) -> usize {
        if self.family == 5 && self.variant == 2 {
            2 * self.n as usize
        } else {
            self.n_prime() as usize
        }
    }

    pub(crate) fn prefactor_rule(&self) -> PrefactorRule {
        match self.family {
            1 => PrefactorRule::OuterWeight { a: self.variant as u32 },
            2 => PrefactorRule::OuterWeight { a: 1 },
            3 => PrefactorRule::OuterWeight { a: 2 },
            4 | 5 | 6 => PrefactorRule::HalfColumnSum,
            7 => PrefactorRule::HalfColumnSumPlusAlt,
            _ => unreachable!("validated at construction"),
        }
    }

    /// The extra weight factor attached to each non-final column-0 gap.
    pub(crate) fn extra_kind(&self) -> ExtraKind {
        match self.family {
            5 if self.variant == 2 => ExtraKind::NegPoch {
                stride2: 2 * self.n as usize,
            },
            6 => ExtraKind::NegPoch {
                stride2: (2 * self.n - 1) as usize,
            },
            7 => ExtraKind::OddStartPoch {
                stride2: 4 * self.n as usize,
            },
            _ => ExtraKind::None,
        }
    }

    /// Family 7 restricts column 0 to even gaps at odd positions.
    pub(crate) fn restricts_gaps(&self) -> bool {
        self.family == 7
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "family {} variant {} (m={}, n={})",
            self.family, self.variant, self.m, self.n
        )
    }
}
