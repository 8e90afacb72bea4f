//! Random instances with known answers.
//!
//! A pair `(L, z)` is built backwards: pick polynomials `z ≠ 0`, `a`, `b`
//! and set `c = −(z_xy + a·z_x + b·z_y)/z`, so `L(z) = 0` holds by
//! construction. Everything is driven by a seeded ChaCha generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::expr::{Axis, ExpRational, Monomial, Polynomial, RationalExpr, Var, Q};
use crate::invariants::{
    compatibility_residual, laplace_invariants, pair_invariants, x_residual, y_residual,
    PairInvariants,
};
use crate::lpdo::Lpdo;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Total degree bound for `z`, `a` and `b`.
    pub max_degree: u32,
    /// Coefficients are drawn from `−coeff_bound..=coeff_bound`.
    pub coeff_bound: i64,
    /// Total degree bound for numerator and denominator of gauges.
    pub gauge_degree: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_degree: 3,
            coeff_bound: 4,
            gauge_degree: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OraclePair {
    pub l: Lpdo,
    pub z: ExpRational,
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random polynomial in `x, y` of total degree at most `degree`; about
/// half of the admissible monomials get a nonzero coefficient.
pub fn random_polynomial(rng: &mut impl Rng, degree: u32, bound: i64) -> Polynomial {
    let mut terms = Vec::new();
    for i in 0..=degree {
        for j in 0..=degree - i {
            if rng.gen_bool(0.5) {
                let c = rng.gen_range(-bound..=bound);
                let m = Monomial::var(Var::X, i).mul(&Monomial::var(Var::Y, j));
                terms.push((m, Q::from_integer(c.into())));
            }
        }
    }
    Polynomial::from_terms(terms)
}

fn random_nonzero(rng: &mut impl Rng, degree: u32, bound: i64) -> Polynomial {
    loop {
        let p = random_polynomial(rng, degree, bound);
        if !p.is_zero() {
            return p;
        }
    }
}

/// The operator `DxDy + a·Dx + b·Dy + c` annihilating `z`.
pub fn operator_with_kernel(a: RationalExpr, b: RationalExpr, z: &ExpRational) -> Result<Lpdo> {
    let zx = z.diff(Axis::X);
    let zy = z.diff(Axis::Y);
    let num = zx
        .diff(Axis::Y)
        .checked_add(&zx.mul_rational(&a))?
        .checked_add(&zy.mul_rational(&b))?;
    let c = num.checked_div(z)?;
    let c = c.as_rational().cloned().unwrap_or_else(RationalExpr::zero);
    Ok(Lpdo::hyperbolic(a, b, -&c))
}

/// A random pair with nonzero pair invariants.
pub fn random_pair(rng: &mut impl Rng, cfg: &OracleConfig) -> OraclePair {
    loop {
        let z = ExpRational::from(RationalExpr::from_poly(random_nonzero(
            rng,
            cfg.max_degree,
            cfg.coeff_bound,
        )));
        let a = RationalExpr::from_poly(random_polynomial(rng, cfg.max_degree, cfg.coeff_bound));
        let b = RationalExpr::from_poly(random_polynomial(rng, cfg.max_degree, cfg.coeff_bound));
        let Ok(l) = operator_with_kernel(a, b, &z) else {
            continue;
        };
        match pair_invariants(&l, &z) {
            Ok(PairInvariants { r, q }) if !r.is_zero() && !q.is_zero() => {
                return OraclePair { l, z };
            }
            _ => continue,
        }
    }
}

/// A random pair with `z = exp(S)`, `S` polynomial; kernel reconstruction
/// recovers such `z` up to scale.
pub fn random_exp_pair(rng: &mut impl Rng, cfg: &OracleConfig) -> OraclePair {
    loop {
        let s = random_nonzero(rng, cfg.max_degree, cfg.coeff_bound);
        let z = ExpRational::exp(RationalExpr::from_poly(s));
        let a = RationalExpr::from_poly(random_polynomial(rng, cfg.max_degree, cfg.coeff_bound));
        let b = RationalExpr::from_poly(random_polynomial(rng, cfg.max_degree, cfg.coeff_bound));
        let Ok(l) = operator_with_kernel(a, b, &z) else {
            continue;
        };
        match pair_invariants(&l, &z) {
            Ok(PairInvariants { r, q }) if !r.is_zero() && !q.is_zero() => {
                return OraclePair { l, z };
            }
            _ => continue,
        }
    }
}

/// An operator with two known kernel elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleTwoSolutions {
    pub l: Lpdo,
    pub z0: ExpRational,
    pub z: ExpRational,
}

/// Picks polynomials `z0`, `z` and `a`, then solves the two linear equations
/// `L(z0) = L(z) = 0` for `b` and `c`. Both kernel elements have nonzero and
/// pairwise distinct invariants.
pub fn random_two_solutions(rng: &mut impl Rng, cfg: &OracleConfig) -> OracleTwoSolutions {
    loop {
        let z0 = RationalExpr::from_poly(random_nonzero(rng, cfg.max_degree, cfg.coeff_bound));
        let z = RationalExpr::from_poly(random_nonzero(rng, cfg.max_degree, cfg.coeff_bound));
        let a = RationalExpr::from_poly(random_polynomial(rng, cfg.max_degree.min(2), cfg.coeff_bound));
        let Some(l) = two_solution_operator(&a, &z0, &z) else {
            continue;
        };
        let (z0, z) = (ExpRational::from(z0), ExpRational::from(z));
        let (Ok(p0), Ok(p)) = (pair_invariants(&l, &z0), pair_invariants(&l, &z)) else {
            continue;
        };
        let nonzero = [&p0.r, &p0.q, &p.r, &p.q].iter().all(|v| !v.is_zero());
        if nonzero && p0.r != p.r && p0.q != p.q {
            return OracleTwoSolutions { l, z0, z };
        }
    }
}

fn two_solution_operator(a: &RationalExpr, z0: &RationalExpr, z: &RationalExpr) -> Option<Lpdo> {
    // b·u_y + c·u = −(u_xy + a·u_x) for u = z0, z
    let rhs = |u: &RationalExpr| -&(&u.diff(Axis::X).diff(Axis::Y) + &(a * &u.diff(Axis::X)));
    let (e0, e1) = (rhs(z0), rhs(z));
    let (y0, y1) = (z0.diff(Axis::Y), z.diff(Axis::Y));
    let det = &(&y0 * z) - &(&y1 * z0);
    if det.is_zero() {
        return None;
    }
    let b = (&(&e0 * z) - &(&e1 * z0)).checked_div(&det).ok()?;
    let c = (&(&y0 * &e1) - &(&y1 * &e0)).checked_div(&det).ok()?;
    Some(Lpdo::hyperbolic(a.clone(), b, c))
}

/// A random nonzero rational function `p/q`.
pub fn random_gauge(rng: &mut impl Rng, cfg: &OracleConfig) -> RationalExpr {
    let p = random_nonzero(rng, cfg.gauge_degree, cfg.coeff_bound);
    let q = random_nonzero(rng, cfg.gauge_degree, cfg.coeff_bound);
    RationalExpr::new(p, q).expect("nonzero denominator")
}

/// Names of the identities that fail for `pair` under the gauge `g`.
pub fn check_pair(pair: &OraclePair, g: &RationalExpr) -> Result<Vec<&'static str>> {
    let mut failed = Vec::new();
    let inv = laplace_invariants(&pair.l)?;
    let p = pair_invariants(&pair.l, &pair.z)?;
    if !x_residual(&p.r, &inv.h, &inv.k)?.is_zero() {
        failed.push("x-residual");
    }
    if !y_residual(&p.q, &inv.h, &inv.k)?.is_zero() {
        failed.push("y-residual");
    }
    if !compatibility_residual(&p.r, &p.q, &inv.h, &inv.k).is_zero() {
        failed.push("compatibility");
    }
    let lg = pair.l.gauge(g)?;
    if laplace_invariants(&lg)? != inv {
        failed.push("gauge-laplace");
    }
    let zg = pair.z.checked_div(&ExpRational::from(g.clone()))?;
    if pair_invariants(&lg, &zg)? != p {
        failed.push("gauge-pair");
    }
    Ok(failed)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFailure {
    pub index: usize,
    pub seed: u64,
    pub operator: String,
    pub kernel: String,
    pub failed: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub seed: u64,
    pub instances: usize,
    pub failures: Vec<InstanceFailure>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs [`check_pair`] on `count` random instances derived from `seed`.
///
/// Instance `i` uses its own generator seeded from the master stream, so
/// results do not depend on scheduling.
pub fn run_property_suite(seed: u64, count: usize, cfg: &OracleConfig) -> PropertyReport {
    let mut master = rng_from_seed(seed);
    let seeds: Vec<u64> = (0..count).map(|_| master.gen()).collect();
    let mut failures: Vec<InstanceFailure> = seeds
        .par_iter()
        .enumerate()
        .filter_map(|(index, &s)| {
            let mut rng = rng_from_seed(s);
            let pair = random_pair(&mut rng, cfg);
            let g = random_gauge(&mut rng, cfg);
            let failed = match check_pair(&pair, &g) {
                Ok(f) if f.is_empty() => return None,
                Ok(f) => f.into_iter().map(String::from).collect(),
                Err(e) => vec![e.to_string()],
            };
            Some(InstanceFailure {
                index,
                seed: s,
                operator: pair.l.to_string(),
                kernel: pair.z.to_string(),
                failed,
            })
        })
        .collect();
    failures.sort_by_key(|f| f.index);
    PropertyReport {
        seed,
        instances: count,
        failures,
    }
}
