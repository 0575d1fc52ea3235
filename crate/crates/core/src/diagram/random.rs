use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::geometry::{polygon_contains, q, Point, Q};
use super::{punctures, ArrowDiagram, CrossingSpec, Dot, SegRef, Under, ValidatedDiagram};
use crate::words::Surface;

/// Octagon directions, diagonals shortened so the shape stays round-ish.
fn directions() -> Vec<Point> {
    [(4, 0), (3, 3), (0, 4), (-3, 3), (-4, 0), (-3, -3), (0, -4), (3, -3)]
        .iter()
        .map(|&(x, y)| Point::new(q(x, 4), q(y, 4)))
        .collect()
}

fn rq(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Q {
    q(rng.gen_range(lo..=hi), den)
}

/// A star-shaped polygon around `center` with mean radius `r`.
fn blob(rng: &mut ChaCha8Rng, center: &Point, r: &Q) -> Vec<Point> {
    let mut pts: Vec<Point> = directions()
        .iter()
        .map(|d| {
            let scale = r * (Q::from_integer(1.into()) + rq(rng, -256, 256, 1024));
            center.add(&d.scale(&scale))
        })
        .collect();
    if rng.gen_bool(0.5) {
        pts.reverse();
    }
    pts
}

/// Which punctures a component of each type must enclose.
#[derive(Clone, Copy)]
enum Shape {
    X,
    AroundLeft,
    AroundRight,
    AroundBoth,
}

fn component(rng: &mut ChaCha8Rng, surface: Surface) -> Vec<Point> {
    let holes = punctures(surface);
    let shapes: &[Shape] = match surface {
        Surface::Disk => &[Shape::X],
        Surface::Annulus => &[Shape::X, Shape::AroundLeft],
        Surface::Pants => &[Shape::X, Shape::AroundLeft, Shape::AroundRight, Shape::AroundBoth],
    };
    loop {
        let shape = shapes[rng.gen_range(0..shapes.len())];
        let jitter = |rng: &mut ChaCha8Rng| rq(rng, -8, 8, 64);
        let (center, r, wants) = match (shape, surface) {
            (Shape::X, _) => (
                Point::new(rq(rng, -160, 160, 64), rq(rng, -128, 128, 64)),
                rq(rng, 16, 48, 64),
                vec![],
            ),
            (Shape::AroundLeft, Surface::Annulus) => (
                Point::new(jitter(rng), jitter(rng)),
                rq(rng, 24, 160, 64),
                vec![0],
            ),
            (Shape::AroundLeft, _) => (
                Point::new(q(-1, 1) + jitter(rng), jitter(rng)),
                rq(rng, 20, 56, 64),
                vec![0],
            ),
            (Shape::AroundRight, _) => (
                Point::new(q(1, 1) + jitter(rng), jitter(rng)),
                rq(rng, 20, 56, 64),
                vec![1],
            ),
            (Shape::AroundBoth, _) => (
                Point::new(jitter(rng), jitter(rng)),
                rq(rng, 96, 160, 64),
                vec![0, 1],
            ),
        };
        let poly = blob(rng, &center, &r);
        let enclosed: Vec<usize> = (0..holes.len()).filter(|&i| polygon_contains(&poly, &holes[i])).collect();
        if enclosed == wants && poly.iter().all(|p| p.norm_sq() < Q::from_integer(16.into())) {
            return poly;
        }
    }
}

/// A reproducible valid diagram with at most `max_crossings` crossings and
/// at most `max_dots` dots.
pub fn random_diagram(surface: Surface, max_crossings: usize, max_dots: usize, seed: u64) -> ValidatedDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(1..=3);
        let components: Vec<Vec<Point>> = (0..n).map(|_| component(&mut rng, surface)).collect();
        let bare = ArrowDiagram { surface, components, crossings: vec![], dots: vec![] };
        let Ok(hits) = bare.intersections() else {
            continue;
        };
        if hits.len() > max_crossings {
            continue;
        }
        let crossings = hits
            .keys()
            .map(|&(a, b)| CrossingSpec { a, b, under: if rng.gen_bool(0.5) { Under::A } else { Under::B } })
            .collect();
        let dot_count = rng.gen_range(0..=max_dots);
        let segs: Vec<SegRef> = bare.segments().collect();
        let dots = (0..dot_count)
            .map(|_| Dot {
                seg: segs[rng.gen_range(0..segs.len())],
                t: q(rng.gen_range(1..1024), 1024),
                along: rng.gen_bool(0.5),
            })
            .collect();
        if let Ok(d) = (ArrowDiagram { crossings, dots, ..bare }).validate() {
            return d;
        }
    }
}
