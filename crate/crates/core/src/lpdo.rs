//! The ring K[Dx, Dy] of linear partial differential operators.
//!
//! An operator is a sparse map `(i, j) ↦ a_ij` standing for `Σ a_ij Dx^i Dy^j`
//! with coefficients written to the left of the derivations. Composition uses
//! the Leibniz rule. The zero operator is the empty map.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::expr::{eval_rational, Ast, Axis, ExpRational, Q, RationalExpr, SymbolTable};

/// Highest operator order the ring accepts.
pub const MAX_ORDER: u32 = 4;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lpdo {
    coeffs: BTreeMap<(u32, u32), RationalExpr>,
}

fn binom(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

impl Lpdo {
    pub fn zero() -> Self {
        Lpdo::default()
    }

    pub fn one() -> Self {
        Self::mult(RationalExpr::one())
    }

    /// Multiplication by `f`, an order-zero operator.
    pub fn mult(f: RationalExpr) -> Self {
        Self::term(0, 0, f)
    }

    pub fn dx() -> Self {
        Self::term(1, 0, RationalExpr::one())
    }

    pub fn dy() -> Self {
        Self::term(0, 1, RationalExpr::one())
    }

    pub fn d(axis: Axis) -> Self {
        match axis {
            Axis::X => Self::dx(),
            Axis::Y => Self::dy(),
        }
    }

    /// `coeff · Dx^i Dy^j`. Orders above [`MAX_ORDER`] are not checked here;
    /// use [`Lpdo::from_coeffs`] for untrusted input.
    pub fn term(i: u32, j: u32, coeff: RationalExpr) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert((i, j), coeff);
        }
        Lpdo { coeffs }
    }

    pub fn from_coeffs(iter: impl IntoIterator<Item = ((u32, u32), RationalExpr)>) -> Result<Self> {
        let mut out = Lpdo::zero();
        for ((i, j), c) in iter {
            if i + j > MAX_ORDER {
                return Err(Error::UnsupportedOrder(i + j));
            }
            out.add_coeff((i, j), c);
        }
        Ok(out)
    }

    /// `DxDy + a·Dx + b·Dy + c`.
    pub fn hyperbolic(a: RationalExpr, b: RationalExpr, c: RationalExpr) -> Self {
        let mut out = Self::term(1, 1, RationalExpr::one());
        out.add_coeff((1, 0), a);
        out.add_coeff((0, 1), b);
        out.add_coeff((0, 0), c);
        out
    }

    fn add_coeff(&mut self, key: (u32, u32), c: RationalExpr) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(key).or_default();
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> RationalExpr {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&(u32, u32), &RationalExpr)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Maximum of `i + j` over stored terms; 0 for the zero operator.
    pub fn order(&self) -> u32 {
        self.coeffs.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    /// True for `DxDy + a·Dx + b·Dy + c`.
    pub fn is_hyperbolic_normal(&self) -> bool {
        self.order() == 2
            && self.coeff(1, 1).is_one()
            && self.coeff(2, 0).is_zero()
            && self.coeff(0, 2).is_zero()
    }

    /// The coefficients `(a, b, c)` of the normal form.
    pub fn normal_form(&self) -> Result<(RationalExpr, RationalExpr, RationalExpr)> {
        if !self.is_hyperbolic_normal() {
            return Err(Error::NotNormalForm);
        }
        Ok((self.coeff(1, 0), self.coeff(0, 1), self.coeff(0, 0)))
    }

    pub fn add(&self, other: &Lpdo) -> Lpdo {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_coeff(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Lpdo) -> Lpdo {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Lpdo {
        Lpdo {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Lpdo) -> Result<Lpdo> {
        let order = self.order() + other.order();
        if !self.is_zero() && !other.is_zero() && order > MAX_ORDER {
            return Err(Error::UnsupportedOrder(order));
        }
        let max_i = self.coeffs.keys().map(|k| k.0).max().unwrap_or(0);
        let max_j = self.coeffs.keys().map(|k| k.1).max().unwrap_or(0);
        let mut out = Lpdo::zero();
        for (&(k, l), q) in &other.coeffs {
            // derivs[s][t] = ∂x^s ∂y^t q
            let mut derivs: Vec<Vec<RationalExpr>> = Vec::with_capacity(max_i as usize + 1);
            let mut col = q.clone();
            for _ in 0..=max_i {
                let mut row = Vec::with_capacity(max_j as usize + 1);
                let mut e = col.clone();
                for _ in 0..=max_j {
                    let next = e.diff(Axis::Y);
                    row.push(e);
                    e = next;
                }
                derivs.push(row);
                col = col.diff(Axis::X);
            }
            for (&(i, j), p) in &self.coeffs {
                for s in 0..=i {
                    for t in 0..=j {
                        let dq = &derivs[s as usize][t as usize];
                        if dq.is_zero() {
                            continue;
                        }
                        let c = (p * dq).scale(&Q::from_integer(BigInt::from(binom(i, s) * binom(j, t))));
                        out.add_coeff((i - s + k, j - t + l), c);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Σ a_ij ∂x^i ∂y^j f`.
    pub fn apply(&self, f: &ExpRational) -> Result<ExpRational> {
        let mut acc = ExpRational::zero();
        let max_i = self.coeffs.keys().map(|k| k.0).max().unwrap_or(0);
        let mut fx = f.clone();
        for i in 0..=max_i {
            let mut fxy = fx.clone();
            let max_j = self
                .coeffs
                .keys()
                .filter(|k| k.0 == i)
                .map(|k| k.1)
                .max();
            if let Some(max_j) = max_j {
                for j in 0..=max_j {
                    if let Some(c) = self.coeffs.get(&(i, j)) {
                        acc = acc.checked_add(&fxy.mul_rational(c))?;
                    }
                    fxy = fxy.diff(Axis::Y);
                }
            }
            fx = fx.diff(Axis::X);
        }
        Ok(acc)
    }

    pub fn apply_rational(&self, f: &RationalExpr) -> RationalExpr {
        let out = self
            .apply(&ExpRational::from(f.clone()))
            .expect("rational input never mixes exponents");
        out.as_rational().cloned().unwrap_or_default()
    }

    /// Conjugation `g⁻¹ ∘ L ∘ g`.
    pub fn gauge(&self, g: &RationalExpr) -> Result<Lpdo> {
        let inv = g.recip()?;
        Lpdo::mult(inv).compose(&self.compose(&Lpdo::mult(g.clone()))?)
    }

    /// Sum of `a_ij X^i Y^j` over `i + j = order`.
    pub fn symbol(&self) -> PrincipalSymbol {
        let d = self.order();
        PrincipalSymbol {
            terms: self
                .coeffs
                .iter()
                .filter(|((i, j), _)| i + j == d)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// The image under `x ↔ y` (which also swaps `Dx` and `Dy`).
    pub fn swap_xy(&self) -> Lpdo {
        Lpdo {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&(i, j), c)| ((j, i), c.swap_xy()))
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Lpdo> {
        Self::parse_with(&SymbolTable::default(), text)
    }

    /// Accepts either operator text or the JSON object form.
    pub fn parse_with(symbols: &SymbolTable, text: &str) -> Result<Lpdo> {
        if text.trim_start().starts_with('{') {
            return Self::from_json_with(symbols, text);
        }
        eval_operator(&symbols.parse_ast(text)?)
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Map<String, Value> = self
            .coeffs
            .iter()
            .map(|((i, j), c)| (format!("{i},{j}"), Value::String(c.to_string())))
            .collect();
        let mut obj = Map::new();
        obj.insert("coeffs".into(), Value::Object(coeffs));
        Value::Object(obj)
    }

    pub fn from_json_with(symbols: &SymbolTable, text: &str) -> Result<Lpdo> {
        let bad = |msg: &str| Error::Syntax {
            pos: 0,
            msg: msg.to_string(),
        };
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Syntax {
            pos: e.column().saturating_sub(1),
            msg: format!("invalid JSON: {e}"),
        })?;
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("expected an object with a \"coeffs\" map"))?;
        let mut terms = Vec::new();
        for (key, val) in coeffs {
            let (i, j) = key
                .split_once(',')
                .and_then(|(i, j)| Some((i.trim().parse().ok()?, j.trim().parse().ok()?)))
                .ok_or_else(|| bad(&format!("bad coefficient key `{key}`, expected \"i,j\"")))?;
            let text = val
                .as_str()
                .ok_or_else(|| bad("coefficients must be strings"))?;
            terms.push(((i, j), symbols.parse_expr(text)?));
        }
        Lpdo::from_coeffs(terms)
    }
}

fn eval_operator(ast: &Ast) -> Result<Lpdo> {
    Ok(match ast {
        Ast::D(axes, _) => {
            if axes.len() as u32 > MAX_ORDER {
                return Err(Error::UnsupportedOrder(axes.len() as u32));
            }
            let mut op = Lpdo::one();
            for a in axes {
                op = op.compose(&Lpdo::d(*a))?;
            }
            op
        }
        Ast::Neg(a) => eval_operator(a)?.neg(),
        Ast::Add(a, b) => eval_operator(a)?.add(&eval_operator(b)?),
        Ast::Sub(a, b) => eval_operator(a)?.sub(&eval_operator(b)?),
        Ast::Mul(a, b) => eval_operator(a)?.compose(&eval_operator(b)?)?,
        Ast::Div(a, b) => {
            let (p, q) = (eval_operator(a)?, eval_operator(b)?);
            if q.order() > 0 || (p.order() > 0 && q.coeff(0, 0).constant_value().is_none()) {
                return Err(Error::Syntax {
                    pos: 0,
                    msg: "only division by a constant or between coefficients is supported".into(),
                });
            }
            p.compose(&Lpdo::mult(q.coeff(0, 0).recip()?))?
        }
        Ast::Pow(a, n) => {
            let p = eval_operator(a)?;
            if p.order() == 0 {
                Lpdo::mult(p.coeff(0, 0).pow(*n)?)
            } else if *n < 0 {
                return Err(Error::Syntax {
                    pos: 0,
                    msg: "negative power of a differential operator".into(),
                });
            } else {
                let mut out = Lpdo::one();
                for _ in 0..*n {
                    out = out.compose(&p)?;
                }
                out
            }
        }
        other => Lpdo::mult(eval_rational(other)?),
    })
}

fn d_word(i: u32, j: u32) -> String {
    "Dx".repeat(i as usize) + &"Dy".repeat(j as usize)
}

impl fmt::Display for Lpdo {
    /// Operator text, highest order first: `DxDy + (a)*Dx + (b)*Dy + (c)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut keys: Vec<_> = self.coeffs.keys().copied().collect();
        keys.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        for (n, (i, j)) in keys.into_iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let c = &self.coeffs[&(i, j)];
            let word = d_word(i, j);
            if word.is_empty() {
                write!(f, "({c})")?;
            } else if c.is_one() {
                f.write_str(&word)?;
            } else {
                write!(f, "({c})*{word}")?;
            }
        }
        Ok(())
    }
}

/// The principal symbol `Σ a_ij X^i Y^j` over the top-order terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalSymbol {
    terms: BTreeMap<(u32, u32), RationalExpr>,
}

impl PrincipalSymbol {
    pub fn coeff(&self, i: u32, j: u32) -> RationalExpr {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &RationalExpr)> {
        self.terms.iter()
    }
}

impl fmt::Display for PrincipalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (&(i, j), c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let mut factors = Vec::new();
            if !c.is_one() {
                factors.push(format!("({c})"));
            }
            for (name, e) in [("X", i), ("Y", j)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

/// `M1 ∘ L − L1 ∘ M`; zero exactly when the intertwining relation holds.
pub fn residual(m1: &Lpdo, l: &Lpdo, l1: &Lpdo, m: &Lpdo) -> Result<Lpdo> {
    Ok(m1.compose(l)?.sub(&l1.compose(m)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_exp_rational, parse_expr};

    fn e(s: &str) -> RationalExpr {
        parse_expr(s).unwrap()
    }

    fn example_l() -> Lpdo {
        Lpdo::parse("DxDy + (1 - x^2 - x*y)").unwrap()
    }

    #[test]
    fn leibniz_rule() {
        let p = Lpdo::dx().compose(&Lpdo::term(0, 1, e("x"))).unwrap();
        let expect = Lpdo::term(1, 1, e("x")).add(&Lpdo::dy());
        assert_eq!(p, expect);
    }

    #[test]
    fn factorization_of_normal_form() {
        // (Dx + b)(Dy + a) = DxDy + a Dx + b Dy + (ab + a_x); a, b generic
        let symbols = SymbolTable::new(["a", "b"]);
        let a = symbols.parse_expr("a").unwrap();
        let b = symbols.parse_expr("b").unwrap();
        let left = Lpdo::dx().add(&Lpdo::mult(b.clone()));
        let right = Lpdo::dy().add(&Lpdo::mult(a.clone()));
        let prod = left.compose(&right).unwrap();
        let c = &(&a * &b) + &symbols.parse_expr("a_x").unwrap();
        assert_eq!(prod, Lpdo::hyperbolic(a, b, c));
    }

    #[test]
    fn unit_and_zero() {
        let l = example_l();
        assert_eq!(l.compose(&Lpdo::one()).unwrap(), l);
        assert_eq!(Lpdo::one().compose(&l).unwrap(), l);
        assert!(l.compose(&Lpdo::zero()).unwrap().is_zero());
    }

    #[test]
    fn order_cap() {
        let l = example_l();
        let l2 = l.compose(&l).unwrap();
        assert_eq!(l2.order(), 4);
        assert_eq!(l2.compose(&Lpdo::dx()), Err(Error::UnsupportedOrder(5)));
        assert_eq!(Lpdo::parse("DxDxDyDyDx"), Err(Error::UnsupportedOrder(5)));
    }

    #[test]
    fn apply_examples() {
        let z = parse_exp_rational("exp(-(x^2/2 + x*y))").unwrap();
        assert!(example_l().apply(&z).unwrap().is_zero());
        let m = Lpdo::parse("Dx + x + y").unwrap();
        assert!(m.apply(&z).unwrap().is_zero());
        assert!(Lpdo::parse("DxDy").unwrap().apply_rational(&e("x^2+y")).is_zero());
        assert_eq!(Lpdo::dx().apply_rational(&e("x^2*y")), e("2*x*y"));
    }

    #[test]
    fn gauge_examples() {
        let symbols = SymbolTable::new(["c"]);
        let l = Lpdo::parse_with(&symbols, "DxDy + (c)").unwrap();
        let lg = l.gauge(&e("x")).unwrap();
        let expect = Lpdo::parse_with(&symbols, "DxDy + (1/x)*Dy + (c)").unwrap();
        assert_eq!(lg, expect);
        assert_eq!(example_l().gauge(&RationalExpr::one()).unwrap(), example_l());
        let g = e("(x+1)/(y^2+2)");
        let back = example_l().gauge(&g).unwrap().gauge(&g.recip().unwrap()).unwrap();
        assert_eq!(back, example_l());
        assert_eq!(example_l().gauge(&RationalExpr::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn trivial_residual() {
        let l = example_l();
        assert!(residual(&l, &l, &l, &l).unwrap().is_zero());
    }

    #[test]
    fn symbols() {
        assert_eq!(example_l().symbol().to_string(), "X*Y");
        assert_eq!(Lpdo::parse("Dx + x + y").unwrap().symbol().to_string(), "X");
        assert_eq!(Lpdo::parse("Dy + x").unwrap().symbol().to_string(), "Y");
        let s = Lpdo::parse("2*Dx^2 + x*DxDy").unwrap().symbol();
        assert_eq!(s.coeff(2, 0), RationalExpr::from_int(2));
        assert_eq!(s.coeff(1, 1), e("x"));
    }

    #[test]
    fn normal_form_predicate() {
        assert!(example_l().is_hyperbolic_normal());
        assert!(!Lpdo::parse("DxDy + Dx^2").unwrap().is_hyperbolic_normal());
        assert!(!Lpdo::parse("2*DxDy").unwrap().is_hyperbolic_normal());
        assert!(!Lpdo::parse("Dx + 1").unwrap().is_hyperbolic_normal());
        assert_eq!(Lpdo::parse("Dx").unwrap().normal_form(), Err(Error::NotNormalForm));
    }

    #[test]
    fn text_and_json_round_trip() {
        let l1 = Lpdo::parse("DxDy - 1/(x+y)*Dy - x^2 - x*y").unwrap();
        assert_eq!(l1.to_string(), "DxDy + (-1/(x+y))*Dy + (-x^2-x*y)");
        assert_eq!(Lpdo::parse(&l1.to_string()).unwrap(), l1);
        let json = l1.to_json().to_string();
        assert_eq!(
            json,
            r#"{"coeffs":{"0,0":"-x^2-x*y","0,1":"-1/(x+y)","1,1":"1"}}"#
        );
        assert_eq!(Lpdo::parse(&json).unwrap(), l1);
    }

    #[test]
    fn operator_parse_errors() {
        assert!(matches!(Lpdo::parse("DxDy + (x"), Err(Error::Syntax { .. })));
        assert!(matches!(Lpdo::parse("x/Dx"), Err(Error::Syntax { .. })));
        assert!(matches!(Lpdo::parse(r#"{"coeffs": {"1": "x"}}"#), Err(Error::Syntax { .. })));
    }
}
