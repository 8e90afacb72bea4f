//! Parser for the ASCII expression grammar.
//!
//! ```text
//! expr    := expr ('+'|'-') expr | expr ('*'|'/') expr | '-' expr
//!          | expr '^' int | '(' expr ')' | atom
//! atom    := integer | 'x' | 'y' | name | name '_' [xy]+ | 'exp' '(' expr ')'
//!          | ('Dx'|'Dy')+                      (operator text only)
//! int     := '-'? digits | '(' '-'? digits ')'
//! ```
//!
//! `*` is mandatory between factors. Jet names must be declared in the
//! [`SymbolTable`]; the derivative suffix is order-insensitive (`r_yx = r_xy`).

use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::exp::ExpRational;
use super::poly::Q;
use super::rational::RationalExpr;
use super::var::{Axis, JetSymbol, Var};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Int(BigInt),
    Var(Var),
    /// A product of derivations, e.g. `DxDy`.
    D(Vec<Axis>, usize),
    Exp(Box<Ast>, usize),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((Tok::Int(n), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// Declared jet function names.
#[derive(Clone, Debug)]
pub struct SymbolTable {
    functions: BTreeSet<String>,
}

impl Default for SymbolTable {
    /// Declares `r`, `q` and `z`.
    fn default() -> Self {
        SymbolTable::new(["r", "q", "z"])
    }
}

impl SymbolTable {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        SymbolTable {
            functions: names.into_iter().map(Into::into).collect(),
        }
    }

    /// No jet names at all: only `x`, `y` and numbers.
    pub fn empty() -> Self {
        SymbolTable {
            functions: BTreeSet::new(),
        }
    }

    pub fn declare(&mut self, name: impl Into<String>) {
        self.functions.insert(name.into());
    }

    pub fn parse_ast(&self, text: &str) -> Result<Ast> {
        let toks = lex(text)?;
        let mut p = Parser {
            toks,
            at: 0,
            symbols: self,
        };
        let ast = p.expr(0)?;
        match p.peek() {
            (Tok::End, _) => Ok(ast),
            (Tok::RParen, pos) => Err(Error::Syntax {
                pos,
                msg: "unbalanced `)`".into(),
            }),
            (_, pos) => Err(Error::Syntax {
                pos,
                msg: "expected an operator (`*` is required between factors)".into(),
            }),
        }
    }

    pub fn parse_expr(&self, text: &str) -> Result<RationalExpr> {
        eval_rational(&self.parse_ast(text)?)
    }

    pub fn parse_exp_rational(&self, text: &str) -> Result<ExpRational> {
        eval_exp(&self.parse_ast(text)?)
    }

    fn classify(&self, name: &str, pos: usize) -> Result<Atom> {
        match name {
            "x" => return Ok(Atom::Var(Var::X)),
            "y" => return Ok(Atom::Var(Var::Y)),
            "exp" => return Ok(Atom::Exp),
            _ => {}
        }
        if let Some(ds) = parse_d_product(name) {
            return Ok(Atom::D(ds));
        }
        let (func, suffix) = match name.rfind('_') {
            Some(k) if k + 1 < name.len() && name[k + 1..].bytes().all(|b| b == b'x' || b == b'y') => {
                (&name[..k], &name[k + 1..])
            }
            _ => (name, ""),
        };
        if !self.functions.contains(func) {
            return Err(Error::UnknownSymbol {
                name: func.to_string(),
                pos,
            });
        }
        let dx = suffix.bytes().filter(|&b| b == b'x').count() as u32;
        let dy = suffix.len() as u32 - dx;
        Ok(Atom::Var(Var::Jet(JetSymbol::new(func, dx, dy))))
    }
}

enum Atom {
    Var(Var),
    D(Vec<Axis>),
    Exp,
}

fn parse_d_product(name: &str) -> Option<Vec<Axis>> {
    let b = name.as_bytes();
    if b.is_empty() || b.len() % 2 != 0 {
        return None;
    }
    b.chunks(2)
        .map(|c| match c {
            b"Dx" => Some(Axis::X),
            b"Dy" => Some(Axis::Y),
            _ => None,
        })
        .collect()
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    symbols: &'a SymbolTable,
}

impl Parser<'_> {
    fn peek(&self) -> (Tok, usize) {
        self.toks[self.at].clone()
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let (t, pos) = self.bump();
        if t == want {
            Ok(())
        } else {
            Err(Error::Syntax {
                pos,
                msg: format!("expected {what}"),
            })
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Ast> {
        let mut lhs = self.prefix()?;
        loop {
            let (tok, _) = self.peek();
            let (l_bp, r_bp) = match tok {
                Tok::Plus | Tok::Minus => (1, 2),
                Tok::Star | Tok::Slash => (3, 4),
                Tok::Caret => (7, 8),
                _ => break,
            };
            if l_bp < min_bp {
                break;
            }
            self.bump();
            if tok == Tok::Caret {
                let e = self.exponent()?;
                lhs = Ast::Pow(Box::new(lhs), e);
                continue;
            }
            let rhs = self.expr(r_bp)?;
            let (l, r) = (Box::new(lhs), Box::new(rhs));
            lhs = match tok {
                Tok::Plus => Ast::Add(l, r),
                Tok::Minus => Ast::Sub(l, r),
                Tok::Star => Ast::Mul(l, r),
                Tok::Slash => Ast::Div(l, r),
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    fn exponent(&mut self) -> Result<i32> {
        let paren = matches!(self.peek().0, Tok::LParen);
        if paren {
            self.bump();
        }
        let neg = matches!(self.peek().0, Tok::Minus);
        if neg {
            self.bump();
        }
        let (t, pos) = self.bump();
        let Tok::Int(n) = t else {
            return Err(Error::Syntax {
                pos,
                msg: "expected an integer exponent".into(),
            });
        };
        let n: i32 = i32::try_from(&n).map_err(|_| Error::Syntax {
            pos,
            msg: "exponent too large".into(),
        })?;
        if paren {
            self.expect(Tok::RParen, "`)`")?;
        }
        Ok(if neg { -n } else { n })
    }

    fn prefix(&mut self) -> Result<Ast> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Minus => Ok(Ast::Neg(Box::new(self.expr(5)?))),
            Tok::Plus => self.expr(5),
            Tok::Int(n) => Ok(Ast::Int(n)),
            Tok::LParen => {
                let e = self.expr(0)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => match self.symbols.classify(&name, pos)? {
                Atom::Var(v) => Ok(Ast::Var(v)),
                Atom::D(ds) => Ok(Ast::D(ds, pos)),
                Atom::Exp => {
                    self.expect(Tok::LParen, "`(` after exp")?;
                    let e = self.expr(0)?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Ast::Exp(Box::new(e), pos))
                }
            },
            Tok::End => Err(Error::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
            _ => Err(Error::Syntax {
                pos,
                msg: "expected a number, symbol or `(`".into(),
            }),
        }
    }
}

pub fn eval_rational(ast: &Ast) -> Result<RationalExpr> {
    Ok(match ast {
        Ast::Int(n) => RationalExpr::from_q(Q::from_integer(n.clone())),
        Ast::Var(v) => RationalExpr::var(v.clone()),
        Ast::D(_, pos) => {
            return Err(Error::Syntax {
                pos: *pos,
                msg: "differential operator in a coefficient expression".into(),
            })
        }
        Ast::Exp(_, pos) => {
            return Err(Error::Syntax {
                pos: *pos,
                msg: "exp(...) is only allowed in kernel functions".into(),
            })
        }
        Ast::Neg(a) => -eval_rational(a)?,
        Ast::Add(a, b) => eval_rational(a)? + eval_rational(b)?,
        Ast::Sub(a, b) => eval_rational(a)? - eval_rational(b)?,
        Ast::Mul(a, b) => eval_rational(a)? * eval_rational(b)?,
        Ast::Div(a, b) => eval_rational(a)?.checked_div(&eval_rational(b)?)?,
        Ast::Pow(a, n) => eval_rational(a)?.pow(*n)?,
    })
}

pub fn eval_exp(ast: &Ast) -> Result<ExpRational> {
    Ok(match ast {
        Ast::Exp(a, _) => ExpRational::exp(eval_rational(a)?),
        Ast::Neg(a) => eval_exp(a)?.neg(),
        Ast::Add(a, b) => eval_exp(a)?.checked_add(&eval_exp(b)?)?,
        Ast::Sub(a, b) => eval_exp(a)?.checked_sub(&eval_exp(b)?)?,
        Ast::Mul(a, b) => eval_exp(a)?.mul(&eval_exp(b)?),
        Ast::Div(a, b) => eval_exp(a)?.checked_div(&eval_exp(b)?)?,
        Ast::Pow(a, n) => eval_exp(a)?.pow(*n)?,
        other => ExpRational::from(eval_rational(other)?),
    })
}

/// Parses with the default symbol table (`r`, `q`, `z`).
pub fn parse_expr(text: &str) -> Result<RationalExpr> {
    SymbolTable::default().parse_expr(text)
}

/// Parses a kernel function such as `(x+1)*exp(-x*y)`.
pub fn parse_exp_rational(text: &str) -> Result<ExpRational> {
    SymbolTable::default().parse_exp_rational(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rational::rat;

    fn x() -> RationalExpr {
        RationalExpr::x()
    }
    fn y() -> RationalExpr {
        RationalExpr::y()
    }

    #[test]
    fn operator_coefficient_from_example() {
        let e = parse_expr("1 - x^2 - x*y").unwrap();
        let expect = &(&RationalExpr::one() - &(&x() * &x())) - &(&x() * &y());
        assert_eq!(e, expect);
    }

    #[test]
    fn transformed_invariant_k1() {
        let e = parse_expr("(x^4+3*x^3*y+3*x^2*y^2+y^3*x+1)/(x+y)^2").unwrap();
        let s = &x() + &y();
        let num = parse_expr("x^4+3*x^3*y+3*x^2*y^2+y^3*x+1").unwrap();
        assert_eq!(e, num.checked_div(&(&s * &s)).unwrap());
        assert!(!e.is_polynomial());
    }

    #[test]
    fn log_derivative_expansion() {
        let e = parse_expr("r_xy / r - r_x*r_y/r^2").unwrap();
        let r = RationalExpr::jet(JetSymbol::base("r"));
        let lnr_xy = r.diff(Axis::X).checked_div(&r).unwrap().diff(Axis::Y);
        assert_eq!(e, lnr_xy);
    }

    #[test]
    fn suffix_is_order_insensitive() {
        assert_eq!(parse_expr("r_yx").unwrap(), parse_expr("r_xy").unwrap());
    }

    #[test]
    fn precedence() {
        assert_eq!(parse_expr("-x^2").unwrap(), -(&x() * &x()));
        assert_eq!(parse_expr("1/2*x").unwrap(), x().scale(&rat(1, 2)));
        assert_eq!(parse_expr("x^-1").unwrap(), x().recip().unwrap());
        assert_eq!(parse_expr("x^(-2)*x^2").unwrap(), RationalExpr::one());
        assert_eq!(parse_expr("2-3-4").unwrap(), RationalExpr::from_int(-5));
        assert_eq!(parse_expr("8/2/2").unwrap(), RationalExpr::from_int(2));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_expr("x y"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_expr("(x+1"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_expr("x $ 1"), Err(Error::Syntax { pos: 2, .. })));
        assert_eq!(
            parse_expr("1 + w_x"),
            Err(Error::UnknownSymbol { name: "w".into(), pos: 4 })
        );
        assert_eq!(parse_expr("1/(x-x)"), Err(Error::DivisionByZero));
        assert!(matches!(parse_expr("DxDy"), Err(Error::Syntax { pos: 0, .. })));
    }

    #[test]
    fn kernel_functions() {
        let z = parse_exp_rational("(x+1)*exp(-x*y)").unwrap();
        assert_eq!(z.prefactor(), &(&x() + &RationalExpr::one()));
        assert_eq!(z.exponent(), &-(&x() * &y()));
        assert_eq!(
            parse_exp_rational("exp(x) + exp(y)"),
            Err(Error::ExpMixing)
        );
        let plain = parse_exp_rational("x+y^2").unwrap();
        assert_eq!(plain.as_rational(), Some(&(&x() + &(&y() * &y()))));
    }

    #[test]
    fn render_round_trips() {
        for s in [
            "-1/(x+y)",
            "-x^2-x*y",
            "(x^4+3*x^3*y+3*x^2*y^2+x*y^3+1)/(x^2+2*x*y+y^2)",
            "(r_xy*r-r_x*r_y)/r^2",
            "-2/(4*x-y)",
            "1/2*x/(x*y+1)",
        ] {
            let e = parse_expr(s).unwrap();
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e, "{s}");
        }
        assert_eq!(parse_expr("-1/(x+y)").unwrap().to_string(), "-1/(x+y)");
        assert_eq!(parse_expr("-x^2-x*y").unwrap().to_string(), "-x^2-x*y");
    }
}
