mod common;

use std::collections::BTreeMap;

use common::{arb_laurent, lp};
use kbsm_core::ring::{p_n, p_nk, LaurentPoly, XPoly};
use proptest::prelude::*;

/// Dense reference model: `(x degree, A exponent) -> coefficient`.
type Naive = BTreeMap<(u32, i32), i128>;

fn naive_add(a: &Naive, b: &Naive) -> Naive {
    let mut out = a.clone();
    for (k, v) in b {
        *out.entry(*k).or_default() += v;
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Multiplies by `c * A^e * x^d`.
fn naive_mono(a: &Naive, c: i128, e: i32, d: u32) -> Naive {
    a.iter().map(|(&(x, ae), &v)| ((x + d, ae + e), v * c)).collect()
}

fn naive_pn(n: i64) -> Naive {
    match n {
        0 => BTreeMap::from([((0, 2), -1), ((0, -2), -1)]),
        1 => BTreeMap::from([((1, 0), 1)]),
        n if n > 1 => naive_add(&naive_mono(&naive_pn(n - 1), -1, -2, 1), &naive_mono(&naive_pn(n - 2), -1, 2, 0)),
        n => naive_add(&naive_mono(&naive_pn(n + 1), -1, -4, 1), &naive_mono(&naive_pn(n + 2), -1, -2, 0)),
    }
}

fn naive_pnk(n: i64, k: u32) -> Naive {
    if k == 0 {
        return naive_pn(n);
    }
    let a = naive_pnk(n + 1, k - 1);
    let first = naive_add(&naive_mono(&a, -1, 4, 0), &a);
    naive_add(&first, &naive_mono(&naive_pnk(n, k - 1), 1, -2, 1))
}

fn to_naive(p: &XPoly) -> Naive {
    let mut out = Naive::new();
    for (d, c) in p.terms() {
        for (e, v) in c.terms() {
            out.insert((d, e), i128::try_from(v.clone()).unwrap());
        }
    }
    out
}

fn arb_xpoly() -> impl Strategy<Value = XPoly> {
    prop::collection::vec(arb_laurent(), 0..4).prop_map(|cs| {
        cs.into_iter().enumerate().fold(XPoly::zero(), |acc, (d, c)| &acc + &XPoly::term(c, d as u32))
    })
}

#[test]
fn families_match_direct_recursion() {
    for n in -12..=12 {
        assert_eq!(to_naive(&p_n(n)), naive_pn(n), "P_{n}");
    }
    for n in -8..=8 {
        for k in 0..=6 {
            assert_eq!(to_naive(&p_nk(n, k)), naive_pnk(n, k), "P_{n},{k}");
        }
    }
}

#[test]
fn named_values() {
    assert_eq!(p_n(0), XPoly::constant(LaurentPoly::delta()));
    assert_eq!(p_n(1), XPoly::x());
    assert_eq!(p_n(-1), XPoly::term(LaurentPoly::a_pow(-6), 1));
    assert_eq!(p_n(2).to_string(), "(-A^-2)*x^2 + (A^4+1)");
    assert_eq!(p_nk(0, 1), XPoly::term(lp(&[(4, -1), (-4, -1)]), 1));
    assert_eq!(p_nk(1, 0), XPoly::x());
}

#[test]
fn laurent_examples() {
    assert_eq!(lp(&[(2, 1), (-2, 1)]) + lp(&[(-2, -1)]), LaurentPoly::a_pow(2));
    assert_eq!(LaurentPoly::a_pow(3) * LaurentPoly::a_pow(-3), LaurentPoly::one());
    assert_eq!(LaurentPoly::delta().pow(2), lp(&[(4, 1), (0, 2), (-4, 1)]));
    assert_eq!((LaurentPoly::delta() + LaurentPoly::delta()).to_string(), "-2A^2-2A^-2");
    assert_eq!(lp(&[(4, -1), (0, 1)]).to_string(), "-A^4+1");
}

proptest! {
    #[test]
    fn laurent_ring_axioms(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn xpoly_ring_axioms(a in arb_xpoly(), b in arb_xpoly(), c in arb_xpoly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &XPoly::one(), a.clone());
    }

    #[test]
    fn xpoly_product_matches_naive(a in arb_xpoly(), b in arb_xpoly()) {
        let mut want = Naive::new();
        for (&(d, e), &v) in &to_naive(&b) {
            want = naive_add(&want, &naive_mono(&to_naive(&a), v, e, d));
        }
        prop_assert_eq!(to_naive(&(&a * &b)), want);
    }
}
