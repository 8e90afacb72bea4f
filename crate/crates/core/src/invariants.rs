//! Gauge invariants of `L = DxDy + a·Dx + b·Dy + c` and of pairs `(L, z)`
//! with `L(z) = 0`.
//!
//! * Laplace invariants `h = ab + a_x − c`, `k = ab + b_y − c`.
//! * Pair invariants `R = −b − z_x/z`, `Q = −a − z_y/z`.
//! * X-invariants are the solutions `r` of
//!   `h − k − r_y + (k/r)_x + (ln r)_xy = 0`, Y-invariants the solutions `q` of
//!   `h − k + q_x − (h/q)_y − (ln q)_xy = 0`. Every X-invariant comes from
//!   exactly one kernel element up to scale, reconstructed here by
//!   [`kernel_from_x_invariant`].
//!
//! `(ln r)_xy` is always expanded as `(r_xy·r − r_x·r_y)/r²`.

use crate::error::{Error, Result};
use crate::expr::{Axis, ExpRational, RationalExpr, Var, Q};
use crate::lpdo::Lpdo;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaplaceInvariants {
    pub h: RationalExpr,
    pub k: RationalExpr,
}

/// The invariants `(R, Q)` of a pair `(L, z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairInvariants {
    pub r: RationalExpr,
    pub q: RationalExpr,
}

/// Lower limits of the definite integrals used by kernel reconstruction.
///
/// Moving the base point only rescales the reconstructed kernel element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePoint {
    pub x0: Q,
    pub y0: Q,
}

impl Default for BasePoint {
    fn default() -> Self {
        BasePoint {
            x0: Q::from_integer(0.into()),
            y0: Q::from_integer(0.into()),
        }
    }
}

impl BasePoint {
    pub fn new(x0: Q, y0: Q) -> Self {
        BasePoint { x0, y0 }
    }

    fn along(&self, axis: Axis) -> &Q {
        match axis {
            Axis::X => &self.x0,
            Axis::Y => &self.y0,
        }
    }
}

pub fn laplace_invariants(l: &Lpdo) -> Result<LaplaceInvariants> {
    let (a, b, c) = l.normal_form()?;
    let ab = &a * &b;
    Ok(LaplaceInvariants {
        h: &(&ab + &a.diff(Axis::X)) - &c,
        k: &(&ab + &b.diff(Axis::Y)) - &c,
    })
}

pub fn pair_invariants(l: &Lpdo, z: &ExpRational) -> Result<PairInvariants> {
    let (a, b, _) = l.normal_form()?;
    if z.is_zero() {
        return Err(Error::ZeroFunction);
    }
    if !l.apply(z)?.is_zero() {
        return Err(Error::NotInKernel);
    }
    Ok(PairInvariants {
        r: -&(&b + &z.log_derivative(Axis::X)?),
        q: -&(&a + &z.log_derivative(Axis::Y)?),
    })
}

/// `(ln f)_xy` without logarithms.
fn log_xy(f: &RationalExpr) -> Result<RationalExpr> {
    let fx = f.diff(Axis::X);
    let fy = f.diff(Axis::Y);
    let top = &(&f.diff(Axis::X).diff(Axis::Y) * f) - &(&fx * &fy);
    top.checked_div(&(f * f))
}

/// Left-hand side of the X-invariant equation; zero iff `r` is an X-invariant.
pub fn x_residual(r: &RationalExpr, h: &RationalExpr, k: &RationalExpr) -> Result<RationalExpr> {
    if r.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let k_over_r = k.checked_div(r)?;
    Ok(&(&(&(h - k) - &r.diff(Axis::Y)) + &k_over_r.diff(Axis::X)) + &log_xy(r)?)
}

/// Left-hand side of the Y-invariant equation; zero iff `q` is a Y-invariant.
pub fn y_residual(q: &RationalExpr, h: &RationalExpr, k: &RationalExpr) -> Result<RationalExpr> {
    if q.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let h_over_q = h.checked_div(q)?;
    Ok(&(&(&(h - k) + &q.diff(Axis::X)) - &h_over_q.diff(Axis::Y)) - &log_xy(q)?)
}

/// `r_y − q_x − h + k`, zero for corresponding invariants.
pub fn compatibility_residual(
    r: &RationalExpr,
    q: &RationalExpr,
    h: &RationalExpr,
    k: &RationalExpr,
) -> RationalExpr {
    &(&(&r.diff(Axis::Y) - &q.diff(Axis::X)) - h) + k
}

pub fn is_x_invariant(l: &Lpdo, r: &RationalExpr) -> Result<bool> {
    let LaplaceInvariants { h, k } = laplace_invariants(l)?;
    Ok(!r.is_zero() && x_residual(r, &h, &k)?.is_zero())
}

pub fn is_y_invariant(l: &Lpdo, q: &RationalExpr) -> Result<bool> {
    let LaplaceInvariants { h, k } = laplace_invariants(l)?;
    Ok(!q.is_zero() && y_residual(q, &h, &k)?.is_zero())
}

/// Definite integral `∫_{v0}^{v} f dv` for `f` polynomial in `v`.
fn definite_integral(f: &RationalExpr, v: &Var, v0: &Q, what: &str) -> Result<RationalExpr> {
    if f.den().contains_var(v) {
        return Err(Error::NonElementaryIntegral(format!(
            "{what} = {f} is not polynomial in {v}"
        )));
    }
    let anti = RationalExpr::new(f.num().integrate(v), f.den().clone())?;
    let at_base = anti.substitute_const(v, v0)?;
    Ok(&anti - &at_base)
}

/// Reconstructs `z ∈ Ker L` from an invariant along `axis`.
///
/// For `axis = X` the invariant `inv` is an X-invariant `r` and
/// `z = f(y)·exp(−∫_{x0}^x (b + r) dx)` with `f' = −A(x0, y)·f`,
/// `A = k/r + r_y/r + a`, `f(y0) = 1`. `axis = Y` is the mirror image.
fn kernel_from_invariant(
    l: &Lpdo,
    inv: &RationalExpr,
    axis: Axis,
    base: &BasePoint,
) -> Result<ExpRational> {
    let (a, b, _) = l.normal_form()?;
    let LaplaceInvariants { h, k } = laplace_invariants(l)?;
    if inv.is_zero() {
        return Err(Error::ZeroInvariant);
    }
    if inv.has_jets() {
        return Err(Error::JetsNotAllowed);
    }
    let other = axis.other();
    // (own coefficient, other coefficient, invariant entering A)
    let (own, cross, lap) = match axis {
        Axis::X => (&b, &a, &k),
        Axis::Y => (&a, &b, &h),
    };
    let residual = match axis {
        Axis::X => x_residual(inv, &h, &k)?,
        Axis::Y => y_residual(inv, &h, &k)?,
    };
    if !residual.is_zero() {
        return Err(match axis {
            Axis::X => Error::NotAnXInvariant,
            Axis::Y => Error::NotAYInvariant,
        });
    }

    let v = Var::from(axis);
    let w = Var::from(other);
    let phi = definite_integral(&(own + inv), &v, base.along(axis), "the integrand")?;

    let big_a = &(&lap.checked_div(inv)? + &inv.diff(other).checked_div(inv)?) + cross;
    let a_base = big_a
        .substitute_const(&v, base.along(axis))
        .map_err(|_| Error::SingularBasePoint(format!("{v} = {}", base.along(axis))))?;
    let psi = definite_integral(&a_base, &w, base.along(other), "A at the base point")?;

    let z = ExpRational::exp(-&(&phi + &psi));
    if !l.apply(&z)?.is_zero() {
        return Err(Error::NotInKernel);
    }
    Ok(z)
}

/// The kernel element (normalized to 1 at the base point) of an X-invariant.
pub fn kernel_from_x_invariant(l: &Lpdo, r: &RationalExpr, base: &BasePoint) -> Result<ExpRational> {
    kernel_from_invariant(l, r, Axis::X, base)
}

/// The kernel element (normalized to 1 at the base point) of a Y-invariant.
pub fn kernel_from_y_invariant(l: &Lpdo, q: &RationalExpr, base: &BasePoint) -> Result<ExpRational> {
    kernel_from_invariant(l, q, Axis::Y, base)
}

/// The Y-invariant paired with the X-invariant `r` through their common kernel element.
pub fn corresponding_y_invariant(l: &Lpdo, r: &RationalExpr, base: &BasePoint) -> Result<RationalExpr> {
    let z = kernel_from_x_invariant(l, r, base)?;
    Ok(pair_invariants(l, &z)?.q)
}

/// The X-invariant paired with the Y-invariant `q`.
pub fn corresponding_x_invariant(l: &Lpdo, q: &RationalExpr, base: &BasePoint) -> Result<RationalExpr> {
    let z = kernel_from_y_invariant(l, q, base)?;
    Ok(pair_invariants(l, &z)?.r)
}
