//! How invariants of `L` move to invariants of `L1` under a Darboux transform.
//!
//! If `z ∈ Ker L` has invariants `(r, q)` and `T` is the transform generated
//! by `r0` (or `q0`), then `M(z) ∈ Ker L1` and its invariants are closed-form
//! expressions in `r`, `q` and the generator. All functions accept either
//! concrete rational functions or symbolic jets (`RationalExpr::jet`).

use crate::error::{Error, Result};
use crate::expr::{Axis, RationalExpr};

fn ensure_distinct(v: &RationalExpr, generator: &RationalExpr) -> Result<RationalExpr> {
    if generator.is_zero() {
        return Err(Error::ZeroInvariant);
    }
    let gap = generator - v;
    if gap.is_zero() {
        return Err(Error::GeneratorExcluded);
    }
    Ok(gap)
}

/// Image of an X-invariant `r` under the X-transform generated by `r0`:
/// `r + (r/r0)_x · r0/(r0 − r)`.
pub fn transport_x_under_x(r: &RationalExpr, r0: &RationalExpr) -> Result<RationalExpr> {
    let gap = ensure_distinct(r, r0)?;
    let ratio = r.checked_div(r0)?.diff(Axis::X);
    Ok(r + &(&ratio * r0).checked_div(&gap)?)
}

/// Image of a Y-invariant `q` under the Y-transform generated by `q0`:
/// `q + (q/q0)_y · q0/(q0 − q)`.
pub fn transport_y_under_y(q: &RationalExpr, q0: &RationalExpr) -> Result<RationalExpr> {
    let gap = ensure_distinct(q, q0)?;
    let ratio = q.checked_div(q0)?.diff(Axis::Y);
    Ok(q + &(&ratio * q0).checked_div(&gap)?)
}

/// Image of the X-invariant `r` (with corresponding Y-invariant `q`) under
/// the Y-transform generated by `q0`: `−((q0)_x + h − q0·r)/(q0 − q)`.
pub fn transport_x_under_y(
    r: &RationalExpr,
    q: &RationalExpr,
    q0: &RationalExpr,
    h: &RationalExpr,
) -> Result<RationalExpr> {
    let gap = ensure_distinct(q, q0)?;
    let top = &(&q0.diff(Axis::X) + h) - &(q0 * r);
    Ok(-&top.checked_div(&gap)?)
}

/// Image of the Y-invariant `q` (with corresponding X-invariant `r`) under
/// the X-transform generated by `r0`: `−((r0)_y + k − r0·q)/(r0 − r)`.
///
/// This is the reflection of [`transport_x_under_y`]; `strict` refuses it.
pub fn transport_y_under_x(
    q: &RationalExpr,
    r: &RationalExpr,
    r0: &RationalExpr,
    k: &RationalExpr,
    strict: bool,
) -> Result<RationalExpr> {
    if strict {
        return Err(Error::StrictModeRejected("transport of Y-invariants under X-transforms"));
    }
    let gap = ensure_distinct(r, r0)?;
    let top = &(&r0.diff(Axis::Y) + k) - &(r0 * q);
    Ok(-&top.checked_div(&gap)?)
}
