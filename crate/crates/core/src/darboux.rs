//! Darboux transformations generated by X- and Y-invariants.
//!
//! For an X-invariant `r0` of `L` set `M = Dx + r0 + b`. There is a unique
//! `M1 = Dx + m` and a unique normal-form `L1` with `M1∘L = L1∘M`; both are found by
//! matching coefficients of the residual, a linear system in `a1, b1, c1, m`. The
//! Y-case uses `M = Dy + q0 + a` and `M1 = Dy + m`.
//!
//! The X-transform keeps `a` and the Y-transform keeps `b`.

use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{Axis, ExpRational, RationalExpr};
use crate::invariants::{laplace_invariants, x_residual, y_residual, LaplaceInvariants};
use crate::lpdo::{residual, Lpdo};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DarbouxKind {
    X,
    Y,
}

impl DarbouxKind {
    pub fn axis(self) -> Axis {
        match self {
            DarbouxKind::X => Axis::X,
            DarbouxKind::Y => Axis::Y,
        }
    }
}

impl fmt::Display for DarbouxKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DarbouxKind::X => "X",
            DarbouxKind::Y => "Y",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxOptions {
    /// Reject generators that are not invariants of the requested kind.
    pub check_generator: bool,
}

impl Default for DarbouxOptions {
    fn default() -> Self {
        DarbouxOptions {
            check_generator: true,
        }
    }
}

/// Which residual coefficient fixed which unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pivot {
    pub unknown: &'static str,
    /// `(i, j)` of the `Dx^i Dy^j` coefficient used.
    pub equation: (u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxTriple {
    pub kind: DarbouxKind,
    pub source: Lpdo,
    pub generator: RationalExpr,
    pub l1: Lpdo,
    pub m: Lpdo,
    pub m1: Lpdo,
    pub pivots: Vec<Pivot>,
}

impl DarbouxTriple {
    /// `M1∘L − L1∘M`.
    pub fn residual(&self) -> Result<Lpdo> {
        residual(&self.m1, &self.source, &self.l1, &self.m)
    }

    /// Sends `z ∈ Ker L` to `M(z) ∈ Ker L1`.
    pub fn kernel_map(&self, z: &ExpRational) -> Result<ExpRational> {
        if !self.source.apply(z)?.is_zero() {
            return Err(Error::NotInKernel);
        }
        let image = self.m.apply(z)?;
        if !self.l1.apply(&image)?.is_zero() {
            return Err(Error::NotInKernel);
        }
        Ok(image)
    }
}

pub fn x_darboux(l: &Lpdo, r0: &RationalExpr) -> Result<DarbouxTriple> {
    darboux(l, r0, DarbouxKind::X, &DarbouxOptions::default())
}

pub fn y_darboux(l: &Lpdo, q0: &RationalExpr) -> Result<DarbouxTriple> {
    darboux(l, q0, DarbouxKind::Y, &DarbouxOptions::default())
}

const UNKNOWNS_X: [&str; 4] = ["a1", "b1", "c1", "m100"];
const UNKNOWNS_Y: [&str; 4] = ["a1", "b1", "c1", "m010"];

pub fn darboux(
    l: &Lpdo,
    generator: &RationalExpr,
    kind: DarbouxKind,
    opts: &DarbouxOptions,
) -> Result<DarbouxTriple> {
    let (a, b, _) = l.normal_form()?;
    if generator.is_zero() {
        return Err(Error::ZeroInvariant);
    }
    if opts.check_generator {
        let LaplaceInvariants { h, k } = laplace_invariants(l)?;
        let (res, err) = match kind {
            DarbouxKind::X => (x_residual(generator, &h, &k)?, Error::NotAnXInvariant),
            DarbouxKind::Y => (y_residual(generator, &h, &k)?, Error::NotAYInvariant),
        };
        if !res.is_zero() {
            return Err(err);
        }
    }

    let axis = kind.axis();
    let names = match kind {
        DarbouxKind::X => UNKNOWNS_X,
        DarbouxKind::Y => UNKNOWNS_Y,
    };
    let shift = match kind {
        DarbouxKind::X => generator + &b,
        DarbouxKind::Y => generator + &a,
    };
    let m = Lpdo::d(axis).add(&Lpdo::mult(shift));

    // M1∘L − L1∘M = D∘L + m·L − DxDy∘M − a1·Dx∘M − b1·Dy∘M − c1·M
    let r0 = Lpdo::d(axis).compose(l)?.sub(&Lpdo::dx().compose(&Lpdo::dy())?.compose(&m)?);
    let columns = [
        Lpdo::dx().compose(&m)?.neg(),
        Lpdo::dy().compose(&m)?.neg(),
        m.neg(),
        l.clone(),
    ];
    let mut keys: Vec<(u32, u32)> = r0.coeffs().map(|(k, _)| *k).collect();
    for col in &columns {
        keys.extend(col.coeffs().map(|(k, _)| *k));
    }
    keys.sort_unstable();
    keys.dedup();
    let equations = keys
        .into_iter()
        .map(|(i, j)| Equation {
            key: (i, j),
            coeffs: columns.iter().map(|c| c.coeff(i, j)).collect(),
            constant: r0.coeff(i, j),
        })
        .collect();
    let (values, pivots, obstruction) = eliminate(equations, &names)?;

    let l1 = Lpdo::hyperbolic(values[0].clone(), values[1].clone(), values[2].clone());
    let m1 = Lpdo::d(axis).add(&Lpdo::mult(values[3].clone()));
    let triple = DarbouxTriple {
        kind,
        source: l.clone(),
        generator: generator.clone(),
        l1,
        m,
        m1,
        pivots,
    };
    if opts.check_generator && (obstruction || !combine(&r0, &columns, &values).is_zero()) {
        return Err(Error::Unsolvable("coefficient matching left a nonzero residual".into()));
    }
    Ok(triple)
}

/// `r0 + Σ values[i]·columns[i]`.
fn combine(r0: &Lpdo, columns: &[Lpdo], values: &[RationalExpr]) -> Lpdo {
    columns
        .iter()
        .zip(values)
        .fold(r0.clone(), |acc, (c, v)| acc.add(&Lpdo::mult(v.clone()).compose(c).expect("order-0 factor")))
}

struct Equation {
    key: (u32, u32),
    coeffs: Vec<RationalExpr>,
    constant: RationalExpr,
}

/// Gauss–Jordan elimination over rational functions.
///
/// Unknowns are solved in the given order. Each takes the unused equation with
/// the fewest live unknowns, ties going to the higher-order coefficient.
/// Returns the values, the pivot log and whether an unused equation was
/// inconsistent.
fn eliminate(
    mut eqs: Vec<Equation>,
    names: &[&'static str],
) -> Result<(Vec<RationalExpr>, Vec<Pivot>, bool)> {
    let n = names.len();
    let mut used = vec![false; eqs.len()];
    let mut pivot_row = vec![0usize; n];
    let mut pivots = Vec::with_capacity(n);
    for u in 0..n {
        let row = (0..eqs.len())
            .filter(|&i| !used[i] && !eqs[i].coeffs[u].is_zero())
            .min_by_key(|&i| {
                let live = eqs[i].coeffs.iter().filter(|c| !c.is_zero()).count();
                let (p, q) = eqs[i].key;
                (live, std::cmp::Reverse((p + q, p)))
            })
            .ok_or_else(|| Error::Unsolvable(format!("no equation determines {}", names[u])))?;
        used[row] = true;
        pivot_row[u] = row;
        pivots.push(Pivot {
            unknown: names[u],
            equation: eqs[row].key,
        });

        let lead = eqs[row].coeffs[u].clone();
        let norm = |c: &RationalExpr| c.checked_div(&lead);
        let coeffs = eqs[row].coeffs.iter().map(norm).collect::<Result<Vec<_>>>()?;
        let constant = norm(&eqs[row].constant)?;
        eqs[row].coeffs = coeffs;
        eqs[row].constant = constant;

        for i in 0..eqs.len() {
            if i == row || eqs[i].coeffs[u].is_zero() {
                continue;
            }
            let f = eqs[i].coeffs[u].clone();
            for j in 0..n {
                let t = &f * &eqs[row].coeffs[j];
                eqs[i].coeffs[j] = &eqs[i].coeffs[j] - &t;
            }
            let t = &f * &eqs[row].constant;
            eqs[i].constant = &eqs[i].constant - &t;
        }
    }
    let values = pivot_row.iter().map(|&r| -&eqs[r].constant).collect();
    let inconsistent = (0..eqs.len()).any(|i| !used[i] && !eqs[i].constant.is_zero());
    Ok((values, pivots, inconsistent))
}
