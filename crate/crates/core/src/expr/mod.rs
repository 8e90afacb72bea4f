//! The coefficient field: exact rational functions in `x`, `y` and jet
//! symbols, with the single exponential extension used for kernel elements.

mod exp;
mod gcd;
mod parse;
mod poly;
mod rational;
mod var;

pub use exp::ExpRational;
pub use gcd::{gcd, gcd_many};
pub use parse::{eval_exp, eval_rational, parse_exp_rational, parse_expr, Ast, SymbolTable};
pub use poly::{Monomial, Polynomial, Q};
pub use rational::{rat, xy_monomial, RationalExpr};
pub use var::{Axis, JetSymbol, Var};
