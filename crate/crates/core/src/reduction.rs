//! Differential reduction modulo solved jet relations.
//!
//! A relation `E = 0` linear in its highest jet `u` is stored solved,
//! `u = rhs`. Prolonging differentiates it to get relations for derivatives
//! of `u`; reducing substitutes leading jets until none is left. This is
//! enough to decide whether a transported invariant satisfies the X-invariant
//! equation of the transformed operator, given only that `r` satisfies the
//! equation of the original one.
//!
//! Jets are ranked by total order, then by the number of x-derivatives.

use std::fmt;

use crate::darboux::x_darboux;
use crate::error::{Error, Result};
use crate::expr::{Axis, JetSymbol, RationalExpr, Var};
use crate::invariants::{laplace_invariants, x_residual};
use crate::lpdo::{Lpdo, MAX_ORDER};
use crate::transport::transport_x_under_x;

/// Substitution rounds allowed before [`reduce`] gives up.
pub const REDUCTION_ROUNDS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetRelation {
    /// The expression asserted to vanish.
    pub lhs: RationalExpr,
    pub leading: JetSymbol,
    pub rhs: RationalExpr,
}

impl fmt::Display for JetRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.leading, self.rhs)
    }
}

/// Solves `expr = 0` for `target`.
pub fn solve_for_jet(expr: &RationalExpr, target: &JetSymbol) -> Result<JetRelation> {
    let v = Var::Jet(target.clone());
    if !expr.contains_var(&v) {
        return Err(Error::TargetAbsent(target.to_string()));
    }
    let parts = expr
        .coeffs_in(&v)
        .filter(|p| p.len() == 2)
        .ok_or_else(|| Error::NotLinearInTarget(target.to_string()))?;
    let rhs = -&parts[0].checked_div(&parts[1])?;
    if let Some(j) = rhs
        .jets()
        .into_iter()
        .find(|j| j.same_func(target) && j > target)
    {
        return Err(Error::TargetNotLeading {
            target: target.to_string(),
            found: j.to_string(),
        });
    }
    Ok(JetRelation {
        lhs: expr.clone(),
        leading: target.clone(),
        rhs,
    })
}

/// Solves `expr = 0` for the highest-ranked jet of `func` it contains.
pub fn solve_for_leader(expr: &RationalExpr, func: &str) -> Result<JetRelation> {
    let leader = expr
        .jets()
        .into_iter()
        .filter(|j| j.func() == func)
        .max()
        .ok_or_else(|| Error::TargetAbsent(func.to_string()))?;
    solve_for_jet(expr, &leader)
}

/// Differentiates `rel` along `axis` and reduces the result by `rel`.
pub fn prolong(rel: &JetRelation, axis: Axis) -> Result<JetRelation> {
    let rhs = reduce(&rel.rhs.diff(axis), std::slice::from_ref(rel))?;
    let leading = rel.leading.derive(axis);
    Ok(JetRelation {
        lhs: &RationalExpr::jet(leading.clone()) - &rhs,
        leading,
        rhs,
    })
}

/// Substitutes leading jets by their solved forms until none remains.
///
/// Higher-ranked jets go first. If two relations share a leading jet the
/// first one in `rels` is used.
pub fn reduce(target: &RationalExpr, rels: &[JetRelation]) -> Result<RationalExpr> {
    let mut order: Vec<&JetRelation> = rels.iter().collect();
    order.sort_by(|a, b| b.leading.cmp(&a.leading));
    let mut out = target.clone();
    for _ in 0..REDUCTION_ROUNDS {
        let jets = out.jets();
        let Some(rel) = order.iter().find(|r| jets.contains(&r.leading)) else {
            return Ok(out);
        };
        out = out.substitute(&Var::Jet(rel.leading.clone()), &rel.rhs)?;
    }
    Err(Error::NonTermination(REDUCTION_ROUNDS))
}

/// Reduces `target` modulo `base` and as many prolongations of it as needed.
///
/// Prolongations are added until no derivative of `base.leading` survives;
/// derivatives above total order [`MAX_ORDER`] are refused.
pub fn reduce_with_prolongations(target: &RationalExpr, base: &JetRelation) -> Result<(RationalExpr, Vec<JetRelation>)> {
    let mut rels = vec![base.clone()];
    loop {
        let out = reduce(target, &rels)?;
        let pending = out
            .jets()
            .into_iter()
            .find(|j| base.leading.divides(j) && rels.iter().all(|r| &r.leading != j));
        let Some(jet) = pending else {
            return Ok((out, rels));
        };
        if jet.order() > MAX_ORDER {
            return Err(Error::UnsupportedOrder(jet.order()));
        }
        // prolong the closest known relation one step towards `jet`
        let from = rels
            .iter()
            .filter(|r| r.leading.divides(&jet))
            .max_by_key(|r| r.leading.order())
            .expect("base relation divides every pending jet");
        let axis = if from.leading.dx_order() < jet.dx_order() {
            Axis::X
        } else {
            Axis::Y
        };
        let next = prolong(from, axis)?;
        let next = JetRelation {
            rhs: reduce(&next.rhs, &rels)?,
            ..next
        };
        rels.push(next);
    }
}

/// `x_residual` of `formula` (an expression in the jets of `r`) for the
/// X-transform of `l` generated by `r0`, reduced modulo the X-invariant
/// equation of `r` for `l`. Zero means `formula` always yields X-invariants of
/// the transformed operator.
pub fn transport_closure_residual(
    l: &Lpdo,
    r0: &RationalExpr,
    formula: &RationalExpr,
) -> Result<RationalExpr> {
    if l.coeffs().any(|(_, c)| c.has_jets()) || r0.has_jets() {
        return Err(Error::JetsNotAllowed);
    }
    let t = x_darboux(l, r0)?;
    let inv = laplace_invariants(l)?;
    let inv1 = laplace_invariants(&t.l1)?;
    let r = RationalExpr::jet(JetSymbol::base("r"));
    let relation = x_residual(&r, &inv.h, &inv.k)?;
    let base = solve_for_jet(&relation, &JetSymbol::new("r", 1, 1))?;
    let b = x_residual(formula, &inv1.h, &inv1.k)?;
    Ok(reduce_with_prolongations(&b, &base)?.0)
}

/// Whether the transport formula maps X-invariants of `l` to X-invariants of
/// its X-transform by `r0`, decided by jet reduction.
pub fn verify_transport_closure(l: &Lpdo, r0: &RationalExpr) -> Result<bool> {
    let r = RationalExpr::jet(JetSymbol::base("r"));
    let formula = transport_x_under_x(&r, r0)?;
    Ok(transport_closure_residual(l, r0, &formula)?.is_zero())
}
