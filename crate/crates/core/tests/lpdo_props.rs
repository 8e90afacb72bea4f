use darboux_core::expr::{Monomial, Q};
use darboux_core::{ExpRational, Lpdo, Polynomial, RationalExpr, Var};
use proptest::prelude::*;

fn xy_poly(max_deg: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, -4i64..=4), 0..4).prop_map(|terms| {
        Polynomial::from_terms(terms.into_iter().map(|(i, j, c)| {
            let m = Monomial::var(Var::X, i).mul(&Monomial::var(Var::Y, j));
            (m, Q::from_integer(c.into()))
        }))
    })
}

fn nonzero_xy_poly(max_deg: u32) -> impl Strategy<Value = Polynomial> {
    xy_poly(max_deg).prop_filter("zero", |p| !p.is_zero())
}

/// Operators of order ≤ `max_order` (at most 2) with polynomial coefficients.
fn operator_up_to(max_order: u32) -> impl Strategy<Value = Lpdo> {
    prop::collection::vec(xy_poly(2), 6).prop_map(move |cs| {
        let keys = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
        let terms = keys
            .into_iter()
            .zip(cs.into_iter().map(RationalExpr::from_poly))
            .filter(|((i, j), _)| i + j <= max_order);
        Lpdo::from_coeffs(terms).unwrap()
    })
}

fn operator() -> impl Strategy<Value = Lpdo> {
    operator_up_to(2)
}

/// Triples of order ≤ 2 each whose composite stays within the order cap.
fn triple() -> impl Strategy<Value = (Lpdo, Lpdo, Lpdo)> {
    (0u32..=2, 0u32..=2)
        .prop_flat_map(|(o1, o2)| (Just(o1), Just(o2), 0..=(4 - o1 - o2).min(2)))
        .prop_flat_map(|(o1, o2, o3)| (operator_up_to(o1), operator_up_to(o2), operator_up_to(o3)))
}

fn gauge() -> impl Strategy<Value = RationalExpr> {
    (nonzero_xy_poly(2), nonzero_xy_poly(1)).prop_map(|(n, d)| RationalExpr::new(n, d).unwrap())
}

fn test_function() -> impl Strategy<Value = ExpRational> {
    (nonzero_xy_poly(2), xy_poly(2)).prop_map(|(p, s)| {
        ExpRational::new(RationalExpr::from_poly(p), RationalExpr::from_poly(s))
    })
}

fn hyperbolic() -> impl Strategy<Value = Lpdo> {
    (xy_poly(2), xy_poly(2), xy_poly(2)).prop_map(|(a, b, c)| {
        Lpdo::hyperbolic(
            RationalExpr::from_poly(a),
            RationalExpr::from_poly(b),
            RationalExpr::from_poly(c),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn composition_is_associative((p, q, r) in triple()) {
        let left = p.compose(&q).unwrap().compose(&r).unwrap();
        let right = p.compose(&q.compose(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn apply_respects_composition(p in operator(), q in operator(), f in test_function()) {
        let pq = p.compose(&q).unwrap();
        prop_assert_eq!(pq.apply(&f).unwrap(), p.apply(&q.apply(&f).unwrap()).unwrap());
    }

    #[test]
    fn gauge_is_a_group_action(l in hyperbolic(), g in gauge(), h in gauge()) {
        let twice = l.gauge(&g).unwrap().gauge(&h).unwrap();
        prop_assert_eq!(twice, l.gauge(&(&g * &h)).unwrap());
    }

    #[test]
    fn gauge_preserves_normal_form(l in hyperbolic(), g in gauge()) {
        prop_assert!(l.gauge(&g).unwrap().is_hyperbolic_normal());
    }

    #[test]
    fn principal_symbol_is_multiplicative(p in operator(), q in operator()) {
        let pq = p.compose(&q).unwrap();
        let top = p.order() + q.order();
        for i in 0..=top {
            let j = top - i;
            let mut expected = RationalExpr::zero();
            for a in 0..=i {
                for b in 0..=j {
                    let (c, d) = (i - a, j - b);
                    if a + b == p.order() && c + d == q.order() {
                        expected = &expected + &(&p.coeff(a, b) * &q.coeff(c, d));
                    }
                }
            }
            prop_assert_eq!(pq.coeff(i, j), expected);
        }
    }

    #[test]
    fn text_and_json_round_trip(l in operator()) {
        prop_assert_eq!(Lpdo::parse(&l.to_string()).unwrap(), l.clone());
        let json = l.to_json().to_string();
        prop_assert_eq!(Lpdo::parse(&json).unwrap(), l);
    }
}
