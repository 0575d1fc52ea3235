//! Construction of diagram pairs that differ by a single move.
//!
//! Moves are spliced into a small square around a point of the base diagram
//! that meets nothing but the strands being modified.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::geometry::{angle_cmp, intersect, lerp, q, Point, SegHit, Square, Q};
use super::{punctures, DiagramError, SegRef, Sketch, ValidatedDiagram};
use crate::ring::LaurentPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    /// Adds a kink whose removal contributes `-A^3`.
    Omega1Pos,
    /// Adds a kink whose removal contributes `-A^-3`.
    Omega1Neg,
    Omega2,
    Omega3,
    Omega4,
    Omega5,
}

impl MoveKind {
    pub const ALL: [MoveKind; 6] = [
        MoveKind::Omega1Pos,
        MoveKind::Omega1Neg,
        MoveKind::Omega2,
        MoveKind::Omega3,
        MoveKind::Omega4,
        MoveKind::Omega5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::Omega1Pos => "omega1+",
            MoveKind::Omega1Neg => "omega1-",
            MoveKind::Omega2 => "omega2",
            MoveKind::Omega3 => "omega3",
            MoveKind::Omega4 => "omega4",
            MoveKind::Omega5 => "omega5",
        }
    }

    /// Number of local orientation variants.
    pub fn variants(self) -> u32 {
        match self {
            MoveKind::Omega1Pos | MoveKind::Omega1Neg => 2,
            MoveKind::Omega2 => 4,
            MoveKind::Omega3 => 12,
            MoveKind::Omega4 => 2,
            MoveKind::Omega5 => 4,
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MoveKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        MoveKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown move `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveSpec {
    pub kind: MoveKind,
    /// Local orientation variant; drawn from the seed when absent.
    pub variant: Option<u32>,
}

impl MoveSpec {
    pub fn new(kind: MoveKind) -> Self {
        Self { kind, variant: None }
    }
}

/// Two diagrams related by one move; `<right> = factor * <left>`.
#[derive(Clone, Debug)]
pub struct MovePair {
    pub left: ValidatedDiagram,
    pub right: ValidatedDiagram,
    pub factor: LaurentPoly,
    /// The diagrams agree outside this square.
    pub splice: Square,
    pub variant: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("no admissible site for {kind} in this diagram")]
    NoSite { kind: MoveKind },
}

/// Pairs the arms of a crossing for the smoothing with coefficient `A`.
///
/// `dirs` are the arm directions `[a_in, a_out, b_in, b_out]`, pointing away
/// from the crossing. Each over arm joins the under arm that precedes it in
/// counterclockwise order.
pub(crate) fn a_pairing(dirs: &[Point; 4], a_is_over: bool) -> [(usize, usize); 2] {
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| angle_cmp(&dirs[i], &dirs[j]));
    let is_over = |arm: usize| (arm < 2) == a_is_over;
    let mut pairs = Vec::with_capacity(2);
    for k in 0..4 {
        let arm = order[k];
        if is_over(arm) {
            let prev = order[(k + 3) % 4];
            debug_assert!(!is_over(prev));
            pairs.push((arm, prev));
        }
    }
    [pairs[0], pairs[1]]
}

/// The dot direction rule at a crossing: the dotted strand is under when its
/// arrow points towards the crossing.
pub(crate) const DOT_TOWARD_MEANS_UNDER: bool = true;

/// Largest square `|p - center| <= 2^-k` (`k >= 2`) meeting no geometry other
/// than the segments in `through`, and on those no vertex, dot or other
/// crossing.
pub(crate) fn free_square(sk: &Sketch, center: &Point, through: &[(Point, Point)]) -> Option<Square> {
    let mut half = q(1, 4);
    for _ in 0..24 {
        let sq = Square { center: center.clone(), half: half.clone() };
        if square_is_free(sk, &sq, through) {
            return Some(sq);
        }
        half /= Q::from_integer(2.into());
    }
    None
}

fn square_is_free(sk: &Sketch, sq: &Square, through: &[(Point, Point)]) -> bool {
    if punctures(sk.surface).iter().any(|p| sq.contains(p)) {
        return false;
    }
    for comp in &sk.components {
        let n = comp.len();
        for i in 0..n {
            let (a, b) = (&comp[i], &comp[(i + 1) % n]);
            if sq.contains(a) {
                return false;
            }
            let is_through = through.iter().any(|(p, q)| (p == a && q == b) || (p == b && q == a));
            if !is_through && sq.meets_segment(a, b) {
                return false;
            }
        }
    }
    if sk.dots.iter().any(|(p, _)| sq.contains(p)) {
        return false;
    }
    sk.unders
        .iter()
        .filter(|(p, _)| p != &sq.center)
        .all(|(p, _)| !sq.contains(p))
}

fn seg_points(sk: &Sketch, s: SegRef) -> (Point, Point) {
    let c = &sk.components[s.comp];
    (c[s.seg].clone(), c[(s.seg + 1) % c.len()].clone())
}

/// Replaces the interior of segment `s` between `path[0]` and `path.last()`
/// by the polyline `path`.
fn splice_path(sk: &mut Sketch, s: SegRef, path: &[Point]) {
    let comp = &mut sk.components[s.comp];
    let at = s.seg + 1;
    comp.splice(at..at, path.iter().cloned());
}

fn all_segments(sk: &Sketch) -> Vec<(Point, Point)> {
    sk.components
        .iter()
        .flat_map(|c| (0..c.len()).map(move |i| (c[i].clone(), c[(i + 1) % c.len()].clone())))
        .collect()
}

/// Crossings between the new polyline `path` and the sketch's segments,
/// excluding the host segment `(hp, hq)`: `(point, new segment dir, old segment dir)`.
fn new_hits(
    segs: &[(Point, Point)],
    host: &(Point, Point),
    path: &[Point],
) -> Option<Vec<(Point, Point, Point)>> {
    let mut out = Vec::new();
    for w in path.windows(2) {
        for (a, b) in segs {
            if a == &host.0 && b == &host.1 {
                continue;
            }
            match intersect(&w[0], &w[1], a, b) {
                SegHit::None => {}
                SegHit::Degenerate => return None,
                SegHit::Proper { point, .. } => out.push((point, w[1].sub(&w[0]), b.sub(a))),
            }
        }
    }
    Some(out)
}

/// Free points on random segments, each with a square around it. Squares
/// are computed lazily; the random choices are drawn up front.
fn segment_sites<'a>(sk: &'a Sketch, rng: &mut ChaCha8Rng) -> impl Iterator<Item = (SegRef, Point, Square)> + 'a {
    let mut segs: Vec<SegRef> = sk
        .components
        .iter()
        .enumerate()
        .flat_map(|(c, pts)| (0..pts.len()).map(move |s| SegRef::new(c, s)))
        .collect();
    segs.shuffle(rng);
    let picks: Vec<(SegRef, [Q; 4])> =
        segs.into_iter().map(|s| (s, std::array::from_fn(|_| q(rng.gen_range(1..64), 64)))).collect();
    picks.into_iter().filter_map(move |(s, ts)| {
        let (p, qv) = seg_points(sk, s);
        ts.iter().find_map(|t| {
            let center = lerp(&p, &qv, t);
            free_square(sk, &center, &[(p.clone(), qv.clone())]).map(|sq| (s, center, sq))
        })
    })
}

/// `d` scaled so that its larger coordinate has absolute value `len`.
pub(crate) fn with_linf(d: &Point, len: &Q) -> Point {
    d.scale(&(len / d.linf()))
}

pub fn make_move_pair(
    base: &ValidatedDiagram,
    spec: MoveSpec,
    seed: u64,
) -> Result<MovePair, MoveError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let variant = spec.variant.unwrap_or_else(|| rng.gen_range(0..spec.kind.variants()));
    let sk = Sketch::from_diagram(base);
    let built = match spec.kind {
        MoveKind::Omega1Pos | MoveKind::Omega1Neg => omega1(&sk, spec.kind == MoveKind::Omega1Pos, variant, &mut rng),
        MoveKind::Omega2 => omega2(&sk, variant, &mut rng),
        MoveKind::Omega3 => omega3(&sk, variant, &mut rng),
        MoveKind::Omega4 => omega4(&sk, variant, &mut rng),
        MoveKind::Omega5 => omega5(&sk, variant, &mut rng),
    };
    let (left, right, factor, splice) = built.ok_or(MoveError::NoSite { kind: spec.kind })?;
    Ok(MovePair { left, right, factor, splice, variant })
}

type Built = Option<(ValidatedDiagram, ValidatedDiagram, LaurentPoly, Square)>;

fn build_pair(left: &Sketch, right: &Sketch) -> Option<(ValidatedDiagram, ValidatedDiagram)> {
    let ok = |r: Result<ValidatedDiagram, DiagramError>| r.ok();
    Some((ok(left.build())?, ok(right.build())?))
}

fn omega4(sk: &Sketch, variant: u32, rng: &mut ChaCha8Rng) -> Built {
    let (s, center, sq) = segment_sites(sk, rng).next()?;
    let (p, qv) = seg_points(sk, s);
    let step = with_linf(&qv.sub(&p), &(&sq.half / Q::from_integer(2.into())));
    let first = center.sub(&step);
    let second = center.add(&step);
    let dir = qv.sub(&p);
    let back = p.sub(&qv);
    let mut right = sk.clone();
    if variant.is_multiple_of(2) {
        // arrows facing each other
        right.dots.push((first, dir));
        right.dots.push((second, back));
    } else {
        right.dots.push((first, back));
        right.dots.push((second, dir));
    }
    let (l, r) = build_pair(sk, &right)?;
    Some((l, r, LaurentPoly::one(), sq))
}

fn omega1(sk: &Sketch, positive: bool, variant: u32, rng: &mut ChaCha8Rng) -> Built {
    for (s, center, sq) in segment_sites(sk, rng) {
        let (p, qv) = seg_points(sk, s);
        let half_len = with_linf(&qv.sub(&p), &(&sq.half / Q::from_integer(4.into())));
        let p0 = center.sub(&half_len);
        let p1 = center.add(&half_len);
        let e = p1.sub(&p0).scale(&q(1, 4));
        let n = if variant.is_multiple_of(2) { e.perp() } else { e.perp().scale(&q(-1, 1)) };
        let local = |u: Q, v: Q| p0.add(&e.scale(&u)).add(&n.scale(&v));
        let path = [
            p0.clone(),
            local(q(3, 1), q(2, 1)),
            local(q(2, 1), q(3, 1)),
            local(q(1, 1), q(2, 1)),
            p1.clone(),
        ];
        let x = local(q(2, 1), q(4, 3));
        let dirs = [
            path[0].sub(&x),
            path[1].sub(&x),
            path[3].sub(&x),
            path[4].sub(&x),
        ];
        // Exactly one over/under choice gives the requested factor.
        for a_over in [true, false] {
            let pairs = a_pairing(&dirs, a_over);
            let loop_split = pairs.iter().any(|&(i, j)| (i.min(j), i.max(j)) == (1, 2));
            if loop_split != positive {
                continue;
            }
            let mut right = sk.clone();
            splice_path(&mut right, s, &path);
            let under_dir = if a_over { path[4].sub(&path[3]) } else { path[1].sub(&path[0]) };
            right.unders.push((x.clone(), under_dir));
            let (l, r) = build_pair(sk, &right)?;
            let factor = if positive {
                LaurentPoly::monomial(-1, 3)
            } else {
                LaurentPoly::monomial(-1, -3)
            };
            return Some((l, r, factor, sq));
        }
    }
    None
}

fn omega2(sk: &Sketch, variant: u32, rng: &mut ChaCha8Rng) -> Built {
    let finger_over = variant.is_multiple_of(2);
    let segs = all_segments(sk);
    for (s, center, sq) in segment_sites(sk, rng) {
        let (p, qv) = seg_points(sk, s);
        let half_len = with_linf(&qv.sub(&p), &(&sq.half / Q::from_integer(2.into())));
        let p0 = center.sub(&half_len);
        let p1 = center.add(&half_len);
        let n = with_linf(&p1.sub(&p0).perp(), &(&sq.half / Q::from_integer(2.into())));
        let normals = if variant / 2 == 0 {
            [n.clone(), n.scale(&q(-1, 1))]
        } else {
            [n.scale(&q(-1, 1)), n.clone()]
        };
        for n in normals {
            if let Some(found) = finger(sk, &segs, s, (&p, &qv), (&p0, &p1), &n, &sq, finger_over) {
                return Some(found);
            }
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn finger(
    sk: &Sketch,
    segs: &[(Point, Point)],
    s: SegRef,
    (p, qv): (&Point, &Point),
    (p0, p1): (&Point, &Point),
    n: &Point,
    sq: &Square,
    finger_over: bool,
) -> Built {
    let radius_sq = Q::from_integer(16.into());
    let host = (p.clone(), qv.clone());
    let path_at = |k: i64| {
        let off = n.scale(&Q::from_integer(k.into()));
        [p0.clone(), p0.add(&off), p1.add(&off), p1.clone()]
    };
    // None when the finger leaves the disk; Some(None) on a degenerate touch.
    let probe = |k: i64| {
        let path = path_at(k);
        if path[1].norm_sq() >= radius_sq || path[2].norm_sq() >= radius_sq {
            return None;
        }
        Some(new_hits(segs, &host, &path))
    };
    let clear = |r: &Option<Option<Vec<(Point, Point, Point)>>>| matches!(r, Some(Some(h)) if h.is_empty());
    // The first blocking offset: double until something is met, then bisect.
    let (mut lo, mut hi) = (0i64, 1i64);
    while clear(&probe(hi)) {
        lo = hi;
        hi *= 2;
        if hi > 256 {
            return None;
        }
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if clear(&probe(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Step past offsets where the far edge only touches the diagram.
    let (hits, k) = loop {
        match probe(hi)? {
            Some(h) => break (h, hi),
            None if hi < 256 => hi += 1,
            None => return None,
        }
    };
    let path = path_at(k);
    let rect = [p0.clone(), p1.clone(), path[2].clone(), path[1].clone()];
    if hits.len() != 2 || !region_is_clean(sk, &rect) {
        return None;
    }
    let mut right = sk.clone();
    splice_path(&mut right, s, &path);
    for (point, new_dir, old_dir) in hits {
        right.unders.push((point, if finger_over { old_dir } else { new_dir }));
    }
    let (l, r) = build_pair(sk, &right)?;
    let splice = bounding_square(&[&rect[..], std::slice::from_ref(&sq.center)].concat(), &sq.half);
    Some((l, r, LaurentPoly::one(), splice))
}

/// No vertex, dot, crossing or puncture in the closed convex polygon.
fn region_is_clean(sk: &Sketch, poly: &[Point]) -> bool {
    let inside = |pt: &Point| {
        let n = poly.len();
        let signs: Vec<Q> = (0..n)
            .map(|i| super::geometry::cross(&poly[(i + 1) % n].sub(&poly[i]), &pt.sub(&poly[i])))
            .collect();
        signs.iter().all(|s| *s >= Q::zero()) || signs.iter().all(|s| *s <= Q::zero())
    };
    let vertices = sk.components.iter().flatten();
    !(vertices.clone().any(inside)
        || sk.dots.iter().any(|(p, _)| inside(p))
        || sk.unders.iter().any(|(p, _)| inside(p))
        || punctures(sk.surface).iter().any(inside))
}

fn bounding_square(points: &[Point], pad: &Q) -> Square {
    let min_x = points.iter().map(|p| p.x.clone()).min().unwrap();
    let max_x = points.iter().map(|p| p.x.clone()).max().unwrap();
    let min_y = points.iter().map(|p| p.y.clone()).min().unwrap();
    let max_y = points.iter().map(|p| p.y.clone()).max().unwrap();
    let two = Q::from_integer(2.into());
    let center = Point::new((&min_x + &max_x) / &two, (&min_y + &max_y) / &two);
    let half = ((&max_x - &min_x) / &two).max((&max_y - &min_y) / &two) + pad;
    Square { center, half }
}

fn crossing_sites<'a>(sk: &'a Sketch, rng: &mut ChaCha8Rng) -> impl Iterator<Item = (usize, Square)> + 'a {
    let mut idx: Vec<usize> = (0..sk.unders.len()).collect();
    idx.shuffle(rng);
    idx.into_iter().filter_map(move |i| {
        let x = &sk.unders[i].0;
        let through: Vec<(Point, Point)> = all_segments(sk)
            .into_iter()
            .filter(|(a, b)| super::geometry::on_segment(x, a, b))
            .collect();
        free_square(sk, x, &through).map(|sq| (i, sq))
    })
}

/// The two segments through crossing `i`: `(under, over)`.
fn strands_at(sk: &Sketch, i: usize) -> Option<((Point, Point), (Point, Point))> {
    let (x, under_dir) = &sk.unders[i];
    let through: Vec<(Point, Point)> = all_segments(sk)
        .into_iter()
        .filter(|(a, b)| super::geometry::on_segment(x, a, b))
        .collect();
    let [s1, s2] = &through[..] else {
        return None;
    };
    if super::geometry::cross(&s1.1.sub(&s1.0), under_dir).is_zero() {
        Some((s1.clone(), s2.clone()))
    } else {
        Some((s2.clone(), s1.clone()))
    }
}

fn omega3(sk: &Sketch, variant: u32, rng: &mut ChaCha8Rng) -> Built {
    let frame = variant % 4;
    // 0: new strand over both, 1: under both, 2: between them
    let height = variant / 4;
    for (i, sq) in crossing_sites(sk, rng) {
        let Some((under, over)) = strands_at(sk, i) else {
            continue;
        };
        let x = sk.unders[i].0.clone();
        let len = &sq.half / Q::from_integer(4.into());
        let mut u1 = with_linf(&under.1.sub(&under.0), &len);
        let mut u2 = with_linf(&over.1.sub(&over.0), &len);
        if frame & 1 == 1 {
            u1 = u1.scale(&q(-1, 1));
        }
        if frame & 2 == 2 {
            u2 = u2.scale(&q(-1, 1));
        }
        let at = |a: Q, b: Q| x.add(&u1.scale(&a)).add(&u2.scale(&b));
        let quad = |c: Q| {
            let k = q(1, 2);
            let far = q(1, 1);
            vec![
                at(&c + &k, -&k),
                at(-&k, &c + &k),
                at(-&k, &far + &k),
                at(&far + &k, -&k),
            ]
        };
        let side = |c: Q| -> Option<Sketch> {
            let mut out = sk.clone();
            let pts = quad(c);
            for (a, b) in [(&pts[0], &pts[1]), (&pts[2], &pts[3])] {
                let new_dir = b.sub(a);
                for (strand, strand_is_under) in [(&under, true), (&over, false)] {
                    let SegHit::Proper { point, .. } = intersect(a, b, &strand.0, &strand.1) else {
                        return None;
                    };
                    let strand_dir = strand.1.sub(&strand.0);
                    let new_is_under = match height {
                        0 => false,
                        1 => true,
                        _ => !strand_is_under,
                    };
                    out.unders.push((point, if new_is_under { new_dir.clone() } else { strand_dir }));
                }
            }
            out.components.push(pts);
            Some(out)
        };
        let (Some(left), Some(right)) = (side(q(1, 4)), side(q(-1, 4))) else {
            continue;
        };
        if let Some((l, r)) = build_pair(&left, &right) {
            return Some((l, r, LaurentPoly::one(), sq));
        }
    }
    None
}

fn omega5(sk: &Sketch, variant: u32, rng: &mut ChaCha8Rng) -> Built {
    let dotted_is_under_strand = variant.is_multiple_of(2);
    let along = variant / 2 == 0;
    for (i, sq) in crossing_sites(sk, rng) {
        let Some((under, over)) = strands_at(sk, i) else {
            continue;
        };
        let (dotted, other) = if dotted_is_under_strand { (under, over) } else { (over, under) };
        let x = sk.unders[i].0.clone();
        let d = dotted.1.sub(&dotted.0);
        let step = with_linf(&d, &(&sq.half / Q::from_integer(2.into())));
        let arrow = if along { d.clone() } else { d.scale(&q(-1, 1)) };
        let side = |before: bool| {
            let mut out = sk.clone();
            let point = if before { x.sub(&step) } else { x.add(&step) };
            let toward = before == along;
            let dotted_under = toward == DOT_TOWARD_MEANS_UNDER;
            out.unders[i].1 = if dotted_under { d.clone() } else { other.1.sub(&other.0) };
            out.dots.push((point, arrow.clone()));
            out
        };
        if let Some((l, r)) = build_pair(&side(true), &side(false)) {
            return Some((l, r, LaurentPoly::one(), sq));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{ArrowDiagram, Point};
    use crate::words::Surface;

    fn circle() -> ValidatedDiagram {
        ArrowDiagram {
            surface: Surface::Disk,
            components: vec![vec![
                Point::int(-1, -1),
                Point::int(1, -1),
                Point::int(1, 1),
                Point::int(-1, 1),
            ]],
            crossings: vec![],
            dots: vec![],
        }
        .validate()
        .unwrap()
    }

    #[test]
    fn a_pairing_of_a_plus() {
        // a runs west to east over b running south to north
        let dirs = [Point::int(-1, 0), Point::int(1, 0), Point::int(0, -1), Point::int(0, 1)];
        let pairs = a_pairing(&dirs, true);
        // ccw order: a_out(E), b_out(N), a_in(W), b_in(S)
        assert_eq!(pairs, [(1, 2), (0, 3)]);
    }

    #[test]
    fn moves_on_a_circle() {
        let base = circle();
        for kind in [MoveKind::Omega1Pos, MoveKind::Omega1Neg, MoveKind::Omega2, MoveKind::Omega4] {
            for variant in 0..kind.variants() {
                let pair = make_move_pair(&base, MoveSpec { kind, variant: Some(variant) }, 3)
                    .unwrap_or_else(|e| panic!("{kind} {variant}: {e}"));
                let extra = match kind {
                    MoveKind::Omega1Pos | MoveKind::Omega1Neg => 1,
                    MoveKind::Omega2 => 2,
                    _ => 0,
                };
                assert_eq!(pair.right.crossing_count(), pair.left.crossing_count() + extra);
                let dots = if kind == MoveKind::Omega4 { 2 } else { 0 };
                assert_eq!(pair.right.dot_count(), pair.left.dot_count() + dots);
            }
        }
    }
}
