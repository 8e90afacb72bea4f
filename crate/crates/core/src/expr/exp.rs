use std::fmt;

use super::poly::Q;
use super::rational::RationalExpr;
use super::var::Axis;
use crate::error::{Error, Result};

/// A value `prefactor · exp(exponent)` with rational prefactor and exponent.
///
/// This is the shape of kernel elements built from X/Y-invariants. It is
/// closed under differentiation and multiplication; sums are only defined
/// when both exponents agree (or one side is zero). Zero is stored as `0·e^0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpRational {
    prefactor: RationalExpr,
    exponent: RationalExpr,
}

impl ExpRational {
    pub fn new(prefactor: RationalExpr, exponent: RationalExpr) -> Self {
        if prefactor.is_zero() {
            return Self::zero();
        }
        ExpRational {
            prefactor,
            exponent,
        }
    }

    pub fn zero() -> Self {
        ExpRational {
            prefactor: RationalExpr::zero(),
            exponent: RationalExpr::zero(),
        }
    }

    /// `exp(exponent)`.
    pub fn exp(exponent: RationalExpr) -> Self {
        Self::new(RationalExpr::one(), exponent)
    }

    pub fn prefactor(&self) -> &RationalExpr {
        &self.prefactor
    }

    pub fn exponent(&self) -> &RationalExpr {
        &self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.prefactor.is_zero()
    }

    /// The plain rational value when there is no exponential factor.
    pub fn as_rational(&self) -> Option<&RationalExpr> {
        self.exponent.is_zero().then_some(&self.prefactor)
    }

    /// `(∂R + R·∂S)·e^S`.
    pub fn diff(&self, axis: Axis) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let p = &self.prefactor.diff(axis) + &(&self.prefactor * &self.exponent.diff(axis));
        Self::new(p, self.exponent.clone())
    }

    /// Logarithmic derivative `∂(self)/self`, always rational.
    pub fn log_derivative(&self, axis: Axis) -> Result<RationalExpr> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let dp = self.prefactor.diff(axis).checked_div(&self.prefactor)?;
        Ok(&dp + &self.exponent.diff(axis))
    }

    pub fn checked_add(&self, rhs: &ExpRational) -> Result<Self> {
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if self.exponent != rhs.exponent {
            return Err(Error::ExpMixing);
        }
        Ok(Self::new(
            &self.prefactor + &rhs.prefactor,
            self.exponent.clone(),
        ))
    }

    pub fn checked_sub(&self, rhs: &ExpRational) -> Result<Self> {
        self.checked_add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.prefactor, self.exponent.clone())
    }

    pub fn mul(&self, rhs: &ExpRational) -> Self {
        Self::new(
            &self.prefactor * &rhs.prefactor,
            &self.exponent + &rhs.exponent,
        )
    }

    pub fn checked_div(&self, rhs: &ExpRational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::new(
            self.prefactor.checked_div(&rhs.prefactor)?,
            &self.exponent - &rhs.exponent,
        ))
    }

    pub fn mul_rational(&self, r: &RationalExpr) -> Self {
        Self::new(&self.prefactor * r, self.exponent.clone())
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.prefactor.scale(c), self.exponent.clone())
    }

    pub fn pow(&self, n: i32) -> Result<Self> {
        Ok(Self::new(
            self.prefactor.pow(n)?,
            self.exponent.scale(&Q::from_integer(n.into())),
        ))
    }

    pub fn swap_xy(&self) -> Self {
        Self::new(self.prefactor.swap_xy(), self.exponent.swap_xy())
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl From<RationalExpr> for ExpRational {
    fn from(r: RationalExpr) -> Self {
        ExpRational::new(r, RationalExpr::zero())
    }
}

impl fmt::Display for ExpRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent.is_zero() {
            return write!(f, "{}", self.prefactor);
        }
        if self.prefactor.is_one() {
            return write!(f, "exp({})", self.exponent);
        }
        let p = &self.prefactor;
        if p.is_polynomial() && p.num().num_terms() == 1 {
            write!(f, "{p}*exp({})", self.exponent)
        } else {
            write!(f, "({p})*exp({})", self.exponent)
        }
    }
}
