#![allow(dead_code)]

use kbsm_core::diagram::geometry::{polygon_contains, q, Point, Square};
use kbsm_core::diagram::{punctures, ValidatedDiagram};
use kbsm_core::ring::LaurentPoly;
use kbsm_core::words::{GeneralWord, LetterKind, Link, SkeinElement, Surface};
use proptest::prelude::*;

pub fn lp(terms: &[(i32, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(terms.iter().copied())
}

pub fn word(s: &str, surface: Surface) -> GeneralWord {
    GeneralWord::parse(s, surface).unwrap()
}

pub fn el(s: &str, surface: Surface) -> SkeinElement {
    SkeinElement::from_word(word(s, surface))
}

pub fn arb_laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-6i32..=6, -4i64..=4), 0..4)
        .prop_map(LaurentPoly::from_terms)
}

fn arb_chain(max_len: usize, arrows: i32) -> impl Strategy<Value = Vec<Link>> {
    prop::collection::vec((0u32..=2, -arrows..=arrows), 0..=max_len)
        .prop_map(|v| v.into_iter().map(|(x, a)| Link::new(x, a)).collect())
}

/// Random general words over the alphabet of `surface`.
pub fn arb_word(surface: Surface, max_chain: usize, arrows: i32) -> BoxedStrategy<GeneralWord> {
    let chain = |kind| {
        if surface.admits(kind) {
            arb_chain(max_chain, arrows).boxed()
        } else {
            Just(Vec::new()).boxed()
        }
    };
    (chain(LetterKind::Y), chain(LetterKind::Z), chain(LetterKind::T), 0u32..=2)
        .prop_map(|(y, z, t, c)| GeneralWord::new(y, z, t, c))
        .boxed()
}

pub fn arb_element(surface: Surface) -> impl Strategy<Value = SkeinElement> {
    prop::collection::vec((arb_laurent(), arb_word(surface, 2, 2)), 0..4)
        .prop_map(|v| v.into_iter().collect())
}

/// `d` with a small arrowless square added where it meets nothing and lies
/// outside every component.
pub fn with_trivial_circle(d: &ValidatedDiagram) -> ValidatedDiagram {
    let dg = d.diagram();
    let holes = punctures(dg.surface);
    let half = q(1, 64);
    for i in -24i64..=24 {
        for j in -24i64..=24 {
            let center = Point::new(q(i, 8), q(j, 8));
            if center.norm_sq() >= q(9, 1) {
                continue;
            }
            let sq = Square { center: center.clone(), half: half.clone() };
            let blocked = dg.segments().any(|s| {
                let (a, b) = dg.endpoints(s);
                sq.meets_segment(a, b)
            }) || holes.iter().any(|h| sq.contains(h))
                || dg.components.iter().any(|c| polygon_contains(c, &center));
            if blocked {
                continue;
            }
            let corner = |dx: i64, dy: i64| Point::new(&center.x + &half * q(dx, 1), &center.y + &half * q(dy, 1));
            let mut out = dg.clone();
            out.components.push(vec![corner(-1, -1), corner(1, -1), corner(1, 1), corner(-1, 1)]);
            return out.validate().expect("a free square keeps the diagram valid");
        }
    }
    panic!("no free spot for a trivial circle");
}
