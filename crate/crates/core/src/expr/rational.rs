use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{Monomial, Polynomial, Q};
use super::var::{Axis, JetSymbol, Var};
use crate::error::{Error, Result};

/// A reduced quotient of polynomials: an element of ℚ(x, y, jets).
///
/// Canonical form: `gcd(num, den) = 1`, the leading coefficient of `den` is 1,
/// and zero is `0/1`. Value equality is therefore structural equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalExpr {
    num: Polynomial,
    den: Polynomial,
}

impl Default for RationalExpr {
    fn default() -> Self {
        RationalExpr::zero()
    }
}

impl RationalExpr {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return RationalExpr::zero();
        }
        if let Some(c) = den.constant_value() {
            return RationalExpr {
                num: num.scale(&c.recip()),
                den: Polynomial::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Self::from_coprime(num, den)
    }

    /// Builds from parts already known to be coprime; only rescales.
    fn from_coprime(num: Polynomial, den: Polynomial) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            RationalExpr { num, den }
        } else {
            let inv = lc.recip();
            RationalExpr {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> Self {
        RationalExpr {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalExpr {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(Polynomial::from_int(n))
    }

    pub fn from_q(q: Q) -> Self {
        Self::from_poly(Polynomial::constant(q))
    }

    pub fn x() -> Self {
        Self::from_poly(Polynomial::x())
    }

    pub fn y() -> Self {
        Self::from_poly(Polynomial::y())
    }

    pub fn var(v: impl Into<Var>) -> Self {
        Self::from_poly(Polynomial::var(v))
    }

    pub fn jet(j: JetSymbol) -> Self {
        Self::from_poly(Polynomial::jet(j))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn jets(&self) -> BTreeSet<JetSymbol> {
        let mut j = self.num.jets();
        j.extend(self.den.jets());
        j
    }

    pub fn has_jets(&self) -> bool {
        !self.jets().is_empty()
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return RationalExpr::zero();
        }
        RationalExpr {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RationalExpr) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let e = n.unsigned_abs();
        Ok(RationalExpr {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// `∂/∂axis` by the quotient rule; jets shift their derivative index.
    pub fn diff(&self, axis: Axis) -> Self {
        if self.den.is_one() {
            return Self::from_poly(self.num.diff(axis));
        }
        let dn = self.num.diff(axis);
        let dd = self.den.diff(axis);
        if dd.is_zero() {
            // den is constant in `axis`; num' stays coprime to den only up to
            // shared factors, so reduce.
            return Self::reduce(dn, self.den.clone());
        }
        // (n'd - n d') / d^2. With d = g·s where g = gcd(d, d'), the result
        // is (n' s - n d'/g) / (d s), saving a factor g before reduction.
        let g = gcd(&self.den, &dd);
        let s = self.den.div_exact(&g).expect("gcd divides");
        let ddg = dd.div_exact(&g).expect("gcd divides");
        let top = &(&dn * &s) - &(&self.num * &ddg);
        let bottom = &self.den * &s;
        Self::reduce(top, bottom)
    }

    pub fn diff_n(&self, axis: Axis, n: u32) -> Self {
        let mut e = self.clone();
        for _ in 0..n {
            e = e.diff(axis);
        }
        e
    }

    /// Replaces the variable `v` by a rational constant.
    pub fn substitute_const(&self, v: &Var, value: &Q) -> Result<Self> {
        let den = self.den.substitute_const(v, value);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.num.substitute_const(v, value), den))
    }

    /// Replaces the variable `v` by the expression `value`.
    pub fn substitute(&self, v: &Var, value: &RationalExpr) -> Result<Self> {
        if !self.contains_var(v) {
            return Ok(self.clone());
        }
        let n = subst_poly(&self.num, v, value);
        let d = subst_poly(&self.den, v, value);
        n.checked_div(&d)
    }

    /// Replaces every jet `f_{x^i y^j}` of the symbol `func` by the matching
    /// derivative of `value`. `value` must not mention `func` itself.
    pub fn substitute_function(&self, func: &str, value: &RationalExpr) -> Result<Self> {
        if value.jets().iter().any(|j| j.func() == func) {
            return Err(Error::JetsNotAllowed);
        }
        let mut out = self.clone();
        for j in self.jets().into_iter().filter(|j| j.func() == func) {
            let d = value.diff_n(Axis::X, j.dx_order()).diff_n(Axis::Y, j.dy_order());
            out = out.substitute(&Var::Jet(j), &d)?;
        }
        Ok(out)
    }

    /// The coefficients of `v` when the expression is polynomial in `v`
    /// (i.e. `v` does not occur in the denominator).
    pub fn coeffs_in(&self, v: &Var) -> Option<Vec<RationalExpr>> {
        if self.den.contains_var(v) {
            return None;
        }
        Some(
            self.num
                .coeffs_in(v)
                .into_iter()
                .map(|c| Self::reduce(c, self.den.clone()))
                .collect(),
        )
    }

    /// The image under the reflection `x ↔ y`.
    pub fn swap_xy(&self) -> Self {
        Self::from_coprime(self.num.swap_xy(), self.den.swap_xy())
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

/// Horner evaluation of `p` at `v = value`.
fn subst_poly(p: &Polynomial, v: &Var, value: &RationalExpr) -> RationalExpr {
    let coeffs = p.coeffs_in(v);
    let mut acc = RationalExpr::zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * value) + &RationalExpr::from_poly(c.clone());
    }
    acc
}

impl From<Polynomial> for RationalExpr {
    fn from(p: Polynomial) -> Self {
        RationalExpr::from_poly(p)
    }
}

impl From<i64> for RationalExpr {
    fn from(n: i64) -> Self {
        RationalExpr::from_int(n)
    }
}

impl From<JetSymbol> for RationalExpr {
    fn from(j: JetSymbol) -> Self {
        RationalExpr::jet(j)
    }
}

fn needs_parens_as_factor(p: &Polynomial) -> bool {
    if p.num_terms() != 1 {
        return true;
    }
    let (m, c) = p.leading().unwrap();
    !(c.is_one() && (m.is_one() || m.factors().len() == 1))
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        // Clear coefficient denominators for display only.
        let l = self
            .num
            .terms()
            .chain(self.den.terms())
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let (num, den) = if l.is_one() {
            (self.num.clone(), self.den.clone())
        } else {
            let l = Q::from_integer(l);
            (self.num.scale(&l), self.den.scale(&l))
        };
        if num.num_terms() > 1 {
            write!(f, "({num})")?;
        } else {
            write!(f, "{num}")?;
        }
        if needs_parens_as_factor(&den) {
            write!(f, "/({den})")
        } else {
            write!(f, "/{den}")
        }
    }
}

impl Add for &RationalExpr {
    type Output = RationalExpr;
    fn add(self, rhs: &RationalExpr) -> RationalExpr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let n = &self.num + &rhs.num;
            if self.den.is_one() {
                return RationalExpr::from_poly(n);
            }
            return RationalExpr::reduce(n, self.den.clone());
        }
        if self.den.is_one() {
            let n = &(&self.num * &rhs.den) + &rhs.num;
            return RationalExpr::from_coprime(n, rhs.den.clone());
        }
        if rhs.den.is_one() {
            let n = &self.num + &(&rhs.num * &self.den);
            return RationalExpr::from_coprime(n, self.den.clone());
        }
        // Henrici: with g = gcd(b, d), only g can share factors with the sum.
        let g = gcd(&self.den, &rhs.den);
        let b = self.den.div_exact(&g).expect("gcd divides");
        let d = rhs.den.div_exact(&g).expect("gcd divides");
        let t = &(&self.num * &d) + &(&rhs.num * &b);
        if t.is_zero() {
            return RationalExpr::zero();
        }
        let g2 = if g.is_one() { g.clone() } else { gcd(&t, &g) };
        let (t, g_rest) = if g2.is_one() {
            (t, g)
        } else {
            (
                t.div_exact(&g2).expect("gcd divides"),
                g.div_exact(&g2).expect("gcd divides"),
            )
        };
        RationalExpr::from_coprime(t, &(&b * &d) * &g_rest)
    }
}

impl Sub for &RationalExpr {
    type Output = RationalExpr;
    fn sub(self, rhs: &RationalExpr) -> RationalExpr {
        self + &(-rhs)
    }
}

impl Mul for &RationalExpr {
    type Output = RationalExpr;
    fn mul(self, rhs: &RationalExpr) -> RationalExpr {
        if self.is_zero() || rhs.is_zero() {
            return RationalExpr::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalExpr::from_poly(&self.num * &rhs.num);
        }
        // Henrici: cancel across the diagonals only.
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let div = |p: &Polynomial, g: &Polynomial| {
            if g.is_one() {
                p.clone()
            } else {
                p.div_exact(g).expect("gcd divides")
            }
        };
        let n = &div(&self.num, &g1) * &div(&rhs.num, &g2);
        let d = &div(&self.den, &g2) * &div(&rhs.den, &g1);
        RationalExpr::from_coprime(n, d)
    }
}

impl Neg for &RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        RationalExpr {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for RationalExpr {
            type Output = RationalExpr;
            fn $method(self, rhs: RationalExpr) -> RationalExpr {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RationalExpr> for RationalExpr {
            type Output = RationalExpr;
            fn $method(self, rhs: &RationalExpr) -> RationalExpr {
                (&self).$method(rhs)
            }
        }
        impl $tr<RationalExpr> for &RationalExpr {
            type Output = RationalExpr;
            fn $method(self, rhs: RationalExpr) -> RationalExpr {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// A rational constant `n/d`.
pub fn rat(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// The monomial `x^i y^j` as a polynomial, a small convenience for tests.
pub fn xy_monomial(i: u32, j: u32) -> Polynomial {
    Polynomial::term(
        Monomial::var(Var::X, i).mul(&Monomial::var(Var::Y, j)),
        Q::one(),
    )
}
