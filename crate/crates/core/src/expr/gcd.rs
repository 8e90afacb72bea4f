//! Greatest common divisors of multivariate polynomials over ℚ.
//!
//! Variables present in only one argument are eliminated by taking contents.
//! The common part goes through the heuristic evaluate-and-interpolate gcd
//! over ℤ; if that gives up, a primitive pseudo-remainder sequence is run
//! with polynomial coefficients in the other variables. Results are monic.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{Polynomial, Q};
use super::var::Var;

/// Monic gcd of `a` and `b`; `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    if a.is_monomial() || b.is_monomial() {
        let m = a.monomial_content().gcd(&b.monomial_content());
        return Polynomial::term(m, Q::from_integer(1.into()));
    }
    if a == b {
        return a.monic();
    }

    let va = a.vars();
    let vb = b.vars();
    if let Some(v) = va.difference(&vb).next() {
        return gcd_with_content(b, a, v);
    }
    if let Some(v) = vb.difference(&va).next() {
        return gcd_with_content(a, b, v);
    }

    // Cheap divisibility checks catch the common "one divides the other" case.
    if a.num_terms() <= b.num_terms() {
        if b.div_exact(a).is_some() {
            return a.monic();
        }
    } else if a.div_exact(b).is_some() {
        return b.monic();
    }

    if let Some(g) = heuristic_gcd(&integer_primitive(a), &integer_primitive(b)) {
        return g.monic();
    }

    let main = pick_main_var(a, b, &va);
    let (ca, pa) = split_content(a, &main);
    let (cb, pb) = split_content(b, &main);
    let content = gcd(&ca, &cb);
    let prim = primitive_prs(pa, pb, &main);
    let g = &content * &prim;
    g.monic()
}

/// gcd of a list; short-circuits once a unit is reached.
pub fn gcd_many<'a>(items: impl IntoIterator<Item = &'a Polynomial>) -> Polynomial {
    let mut g = Polynomial::zero();
    for p in items {
        g = gcd(&g, p);
        if g.is_one() {
            break;
        }
    }
    g
}

/// gcd(a, b) where `v` occurs in `b` but not in `a`: only the content of `b`
/// with respect to `v` can share factors with `a`.
fn gcd_with_content(a: &Polynomial, b: &Polynomial, v: &Var) -> Polynomial {
    let mut g = a.monic();
    for c in b.coeffs_in(v).iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn pick_main_var(a: &Polynomial, b: &Polynomial, vars: &BTreeSet<Var>) -> Var {
    vars.iter()
        .min_by_key(|v| (a.degree_in(v).max(b.degree_in(v)), a.degree_in(v) + b.degree_in(v)))
        .cloned()
        .expect("non-constant polynomial has a variable")
}

/// Splits `p` into (content, primitive part) with respect to `v`.
fn split_content(p: &Polynomial, v: &Var) -> (Polynomial, Vec<Polynomial>) {
    let coeffs = p.coeffs_in(v);
    let cont = gcd_many(coeffs.iter().filter(|c| !c.is_zero()));
    if cont.is_one() {
        return (cont, coeffs);
    }
    let prim = coeffs
        .iter()
        .map(|c| c.div_exact(&cont).expect("content divides coefficients"))
        .collect();
    (cont, prim)
}

fn trim(p: &mut Vec<Polynomial>) {
    while p.last().is_some_and(Polynomial::is_zero) {
        p.pop();
    }
}

/// Pseudo-remainder of `a` by `b` as univariate polynomials.
fn prem(a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    let db = b.len() - 1;
    let lc = &b[db];
    let mut r = a.to_vec();
    trim(&mut r);
    while !r.is_empty() && r.len() - 1 >= db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lc;
        }
        for (j, bj) in b.iter().enumerate() {
            r[j + shift] = &r[j + shift] - &(&lr * bj);
        }
        debug_assert!(r[dr].is_zero());
        trim(&mut r);
    }
    r
}

/// Primitive part of a univariate polynomial with polynomial coefficients,
/// scaled so its leading coefficient is monic.
fn make_primitive(p: Vec<Polynomial>) -> Vec<Polynomial> {
    let cont = gcd_many(p.iter().filter(|c| !c.is_zero()));
    let mut out: Vec<Polynomial> = if cont.is_one() {
        p
    } else {
        p.iter()
            .map(|c| c.div_exact(&cont).expect("content divides coefficients"))
            .collect()
    };
    if let Some(lead) = out.last() {
        let lc = lead.leading_coeff();
        if !num_traits::One::is_one(&lc) {
            let inv = num_traits::Inv::inv(lc);
            for c in out.iter_mut() {
                *c = c.scale(&inv);
            }
        }
    }
    out
}

fn primitive_prs(a: Vec<Polynomial>, b: Vec<Polynomial>, v: &Var) -> Polynomial {
    let (mut r0, mut r1) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    trim(&mut r0);
    trim(&mut r1);
    if r1.len() == 1 {
        return Polynomial::one();
    }
    r0 = make_primitive(r0);
    r1 = make_primitive(r1);
    loop {
        let r = prem(&r0, &r1);
        if r.is_empty() {
            return Polynomial::from_coeffs_in(v, &r1);
        }
        if r.len() == 1 {
            return Polynomial::one();
        }
        r0 = r1;
        r1 = make_primitive(r);
    }
}

/// `p` scaled to integer coefficients with content 1.
fn integer_primitive(p: &Polynomial) -> Polynomial {
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for (_, c) in p.terms() {
        den = den.lcm(c.denom());
        num = num.gcd(c.numer());
    }
    if num.is_zero() {
        return Polynomial::zero();
    }
    p.scale(&Q::new(den, num))
}

fn integer_content(p: &Polynomial) -> BigInt {
    p.terms().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c.numer()))
}

fn max_norm(p: &Polynomial) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

fn with_positive_lead(p: Polynomial) -> Polynomial {
    if p.leading_coeff().is_negative() {
        -p
    } else {
        p
    }
}

const HEURISTIC_TRIES: usize = 6;

/// Heuristic gcd over ℤ[vars] of integer polynomials, content included.
///
/// Evaluates the main variable at a large integer, recurses, and reads the
/// candidate back from its balanced base-ξ digits; a candidate is accepted
/// only if it divides both inputs. `None` means the heuristic gave up.
fn heuristic_gcd(f: &Polynomial, g: &Polynomial) -> Option<Polynomial> {
    if f.is_zero() {
        return Some(with_positive_lead(g.clone()));
    }
    if g.is_zero() {
        return Some(with_positive_lead(f.clone()));
    }
    let cf = integer_content(f);
    let cg = integer_content(g);
    let content = Polynomial::constant(Q::from_integer(cf.gcd(&cg)));
    let f = f.scale(&Q::new(BigInt::one(), cf));
    let g = g.scale(&Q::new(BigInt::one(), cg));
    if f.is_constant() || g.is_constant() {
        return Some(content);
    }

    let vf = f.vars();
    let vg = g.vars();
    if let Some(v) = vf.symmetric_difference(&vg).next() {
        let (with, without) = if vf.contains(v) { (&f, &g) } else { (&g, &f) };
        let mut h = without.clone();
        for c in with.coeffs_in(v).iter().filter(|c| !c.is_zero()) {
            h = heuristic_gcd(&h, c)?;
            if h.is_constant() {
                break;
            }
        }
        let h = integer_primitive(&h);
        return Some(&content * &with_positive_lead(h));
    }

    let x = vf.iter().next().cloned().expect("non-constant polynomial has a variable");
    let nf = max_norm(&f);
    let ng = max_norm(&g);
    let b: BigInt = BigInt::from(2) * nf.clone().min(ng.clone()) + 29;
    let lf = f.leading_coeff().numer().abs();
    let lg = g.leading_coeff().numer().abs();
    let by_lead = BigInt::from(2) * (nf / lf).min(ng / lg) + 2;
    let mut xi = (b.clone().min(BigInt::from(99) * b.sqrt())).max(by_lead);

    for _ in 0..HEURISTIC_TRIES {
        let q = Q::from_integer(xi.clone());
        let ff = f.substitute_const(&x, &q);
        let gg = g.substitute_const(&x, &q);
        if !ff.is_zero() && !gg.is_zero() {
            let h = heuristic_gcd(&ff, &gg)?;
            let cand = integer_primitive(&interpolate(&h, &xi, &x));
            if !cand.is_zero() && f.div_exact(&cand).is_some() && g.div_exact(&cand).is_some() {
                return Some(&content * &with_positive_lead(cand));
            }
        }
        xi = xi.clone() * BigInt::from(73794) * xi.sqrt().sqrt() / BigInt::from(27011);
    }
    None
}

/// Reads `h` as a number in balanced base `xi` whose digits are the
/// coefficients of successive powers of `x`.
fn interpolate(h: &Polynomial, xi: &BigInt, x: &Var) -> Polynomial {
    let half = xi / BigInt::from(2);
    let mut rest = h.clone();
    let mut out = Polynomial::zero();
    let mut power = 0u32;
    while !rest.is_zero() {
        let digit = rest.map_coeffs(|c| {
            let mut m = c.numer().mod_floor(xi);
            if m > half {
                m -= xi;
            }
            Q::from_integer(m)
        });
        out = &out + &digit.mul_monomial(&super::poly::Monomial::var(x.clone(), power), &Q::one());
        rest = (&rest - &digit).scale(&Q::new(BigInt::one(), xi.clone()));
        power += 1;
    }
    out
}
