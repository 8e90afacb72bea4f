//! Invariants and Darboux transformations of hyperbolic operators
//! `L = DxDy + a·Dx + b·Dy + c` on the plane.

pub mod darboux;
pub mod error;
pub mod expr;
pub mod invariants;
pub mod lpdo;
pub mod oracle;
pub mod reduction;
pub mod transport;

pub use error::{Error, Result};
pub use expr::{Axis, ExpRational, JetSymbol, Polynomial, RationalExpr, Var};
pub use lpdo::{residual, Lpdo};
pub use darboux::{darboux, x_darboux, y_darboux, DarbouxKind, DarbouxOptions, DarbouxTriple};
pub use invariants::{
    compatibility_residual, corresponding_x_invariant, corresponding_y_invariant,
    kernel_from_x_invariant, kernel_from_y_invariant, laplace_invariants, pair_invariants,
    x_residual, y_residual, BasePoint, LaplaceInvariants, PairInvariants,
};
pub use reduction::{prolong, reduce, solve_for_jet, verify_transport_closure, JetRelation};
pub use transport::{
    transport_x_under_x, transport_x_under_y, transport_y_under_x, transport_y_under_y,
};
