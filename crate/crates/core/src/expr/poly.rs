//! Sparse multivariate polynomials over ℚ in `x`, `y` and jet symbols.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is the
//! lexicographic monomial order with `x > y > jets`. The map never stores a
//! zero coefficient, so equal polynomials have identical representations.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::var::{Axis, JetSymbol, Var};

pub type Q = BigRational;

/// A power product, stored as `(variable, exponent)` pairs sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, exp)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    fn with_exponent(&self, v: &Var, exp: u32) -> Monomial {
        let mut out = self.0.clone();
        match out.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(i) if exp == 0 => {
                out.remove(i);
            }
            Ok(i) => out[i].1 = exp,
            Err(_) if exp == 0 => {}
            Err(i) => out.insert(i, (v.clone(), exp)),
        }
        Monomial(out)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == *v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v.clone(), e - f)),
                }
            } else if j < other.0.len() && other.0[j].0 < *v {
                return None;
            } else {
                out.push((v.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(v, e)| {
                    let f = other.degree_in(v);
                    (f > 0).then(|| (v.clone(), (*e).min(f)))
                })
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        o => return o,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Q::from_integer(BigInt::from(n)))
    }

    pub fn var(v: impl Into<Var>) -> Self {
        Self::term(Monomial::var(v.into(), 1), Q::one())
    }

    pub fn x() -> Self {
        Self::var(Var::X)
    }

    pub fn y() -> Self {
        Self::var(Var::Y)
    }

    pub fn jet(j: JetSymbol) -> Self {
        Self::var(Var::Jet(j))
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value of a constant polynomial (`Some(0)` for zero).
    pub fn constant_value(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Leading term in the lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.last_key_value()
    }

    pub fn leading_coeff(&self) -> Q {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect(),
        }
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => Polynomial::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut result = Polynomial::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn jets(&self) -> BTreeSet<JetSymbol> {
        self.vars()
            .into_iter()
            .filter_map(|v| match v {
                Var::Jet(j) => Some(j),
                _ => None,
            })
            .collect()
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.terms.keys().any(|m| m.degree_in(v) > 0)
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// Coefficients with respect to `v`: `self = Σ out[i] · v^i`.
    pub fn coeffs_in(&self, v: &Var) -> Vec<Polynomial> {
        let mut out = vec![Polynomial::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let e = m.degree_in(v);
            out[e as usize]
                .terms
                .insert(m.with_exponent(v, 0), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: &Var, coeffs: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (i, c) in coeffs.iter().enumerate() {
            for (m, d) in &c.terms {
                out.terms
                    .insert(m.mul(&Monomial::var(v.clone(), i as u32)), d.clone());
            }
        }
        out
    }

    /// `∂/∂axis`, with jets differentiated by shifting their index.
    pub fn diff(&self, axis: Axis) -> Polynomial {
        let base = Var::from(axis);
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            for (v, e) in m.factors() {
                let lowered = m.with_exponent(v, e - 1);
                let coeff = c * Q::from_integer(BigInt::from(*e));
                match v {
                    Var::Jet(j) => {
                        let dj = Monomial::var(Var::Jet(j.derive(axis)), 1);
                        out.add_term(lowered.mul(&dj), coeff);
                    }
                    w if *w == base => out.add_term(lowered, coeff),
                    _ => {}
                }
            }
        }
        out
    }

    /// Replaces `v` by the rational constant `value`.
    pub fn substitute_const(&self, v: &Var, value: &Q) -> Polynomial {
        let mut powers = vec![Q::one()];
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.degree_in(v) as usize;
            while powers.len() <= e {
                let next = powers.last().expect("nonempty") * value;
                powers.push(next);
            }
            out.add_term(m.with_exponent(v, 0), c * &powers[e]);
        }
        out
    }

    /// Antiderivative in `v` with zero constant of integration.
    pub fn integrate(&self, v: &Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.degree_in(v) + 1;
            out.add_term(
                m.with_exponent(v, e),
                c / Q::from_integer(BigInt::from(e)),
            );
        }
        out
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        let (dm, dc) = d.leading()?;
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let inv = dc.recip();
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(dm)?;
            let qc = rc * &inv;
            rem = &rem - &d.mul_monomial(&qm, &qc);
            quot.terms.insert(qm, qc);
        }
        Some(quot)
    }

    /// gcd of all monomials (the largest monomial dividing every term).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |g, m| g.gcd(m))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Q) -> Q) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// The image under the reflection `x ↔ y` (jets swap their indices too).
    pub fn swap_xy(&self) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| {
            let swapped = m.factors().iter().fold(Monomial::one(), |acc, (v, e)| {
                let w = match v {
                    Var::X => Var::Y,
                    Var::Y => Var::X,
                    Var::Jet(j) => Var::Jet(JetSymbol::new(j.func(), j.dy_order(), j.dx_order())),
                };
                acc.mul(&Monomial::var(w, *e))
            });
            (swapped, c.clone())
        }))
    }

    /// Writes the polynomial in the expression grammar.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

pub(crate) fn fmt_rational(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if neg {
                f.write_str("-")?;
            } else if k > 0 {
                f.write_str("+")?;
            }
            let a = c.abs();
            if m.is_one() {
                f.write_str(&fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_integer(BigInt::from(n))
    }

    #[test]
    fn lex_order_puts_x_first() {
        let x2 = Monomial::var(Var::X, 2);
        let xy = Monomial::var(Var::X, 1).mul(&Monomial::var(Var::Y, 1));
        let x = Monomial::var(Var::X, 1);
        let y2 = Monomial::var(Var::Y, 2);
        assert!(x2 > xy && xy > x && x > y2 && y2 > Monomial::one());
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let x = Polynomial::x();
        let y = Polynomial::y();
        let p = &(&x + &y) - &x;
        assert_eq!(p, y);
        assert_eq!(p.num_terms(), 1);
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn diff_of_x2y() {
        let x = Polynomial::x();
        let y = Polynomial::y();
        let p = &(&x * &x) * &y;
        let expect = &(&x * &y).scale(&q(2)) + &Polynomial::zero();
        assert_eq!(p.diff(Axis::X), expect);
        assert_eq!(p.diff(Axis::Y), &x * &x);
    }

    #[test]
    fn diff_shifts_jets() {
        let r = Polynomial::jet(JetSymbol::base("r"));
        assert_eq!(r.diff(Axis::Y), Polynomial::jet(JetSymbol::new("r", 0, 1)));
        let r2 = &r * &r;
        let expect = (&r * &Polynomial::jet(JetSymbol::new("r", 1, 0))).scale(&q(2));
        assert_eq!(r2.diff(Axis::X), expect);
    }

    #[test]
    fn exact_division() {
        let x = Polynomial::x();
        let y = Polynomial::y();
        let a = &(&x * &x) - &(&y * &y);
        let b = &x - &y;
        assert_eq!(a.div_exact(&b), Some(&x + &y));
        assert_eq!(b.div_exact(&(&x + &y)), None);
        assert_eq!(x.div_exact(&y), None);
    }

    #[test]
    fn coeffs_round_trip() {
        let x = Polynomial::x();
        let y = Polynomial::y();
        let p = &(&(&x * &x) * &y) + &(&y + &Polynomial::from_int(3));
        let cs = p.coeffs_in(&Var::X);
        assert_eq!(cs.len(), 3);
        assert_eq!(Polynomial::from_coeffs_in(&Var::X, &cs), p);
    }

    #[test]
    fn render_uses_grammar() {
        let x = Polynomial::x();
        let y = Polynomial::y();
        let p = &(&(&x * &x).scale(&q(-1)) - &(&x * &y)) + &Polynomial::from_int(1);
        assert_eq!(p.to_string(), "-x^2-x*y+1");
        let half = Q::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(x.scale(&half).to_string(), "1/2*x");
    }

    #[test]
    fn integrate_then_diff() {
        let x = Polynomial::x();
        let y = Polynomial::y();
        let p = &(&x * &y) + &(&x * &x);
        assert_eq!(p.integrate(&Var::X).diff(Axis::X), p);
    }
}
