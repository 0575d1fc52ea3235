//! Exact planar primitives over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Self::new(qi(x), qi(y))
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, k: &Q) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    /// Rotation by a quarter turn counterclockwise.
    pub fn perp(&self) -> Point {
        Point::new(-&self.y, self.x.clone())
    }

    pub fn norm_sq(&self) -> Q {
        &self.x * &self.x + &self.y * &self.y
    }

    pub fn linf(&self) -> Q {
        self.x.abs().max(self.y.abs())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn cross(a: &Point, b: &Point) -> Q {
    &a.x * &b.y - &a.y * &b.x
}

pub fn dot(a: &Point, b: &Point) -> Q {
    &a.x * &b.x + &a.y * &b.y
}

/// `a + t (b - a)`.
pub fn lerp(a: &Point, b: &Point, t: &Q) -> Point {
    a.add(&b.sub(a).scale(t))
}

/// Outcome of intersecting two closed segments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegHit {
    None,
    /// Transversal crossing interior to both segments, at parameters `(t, u)`.
    Proper { t: Q, u: Q, point: Point },
    /// Touching at an endpoint or overlapping along a line.
    Degenerate,
}

pub fn intersect(p1: &Point, p2: &Point, q1: &Point, q2: &Point) -> SegHit {
    let d1 = p2.sub(p1);
    let d2 = q2.sub(q1);
    let denom = cross(&d1, &d2);
    let w = q1.sub(p1);
    if denom.is_zero() {
        if !cross(&d1, &w).is_zero() {
            return SegHit::None;
        }
        // Collinear: compare projections onto d1.
        let len = dot(&d1, &d1);
        let a = dot(&w, &d1);
        let b = dot(&q2.sub(p1), &d1);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        return if hi < Q::zero() || lo > len {
            SegHit::None
        } else {
            SegHit::Degenerate
        };
    }
    let t = cross(&w, &d2) / &denom;
    let u = cross(&w, &d1) / &denom;
    let zero = Q::zero();
    let one = Q::one();
    if t < zero || t > one || u < zero || u > one {
        return SegHit::None;
    }
    if t == zero || t == one || u == zero || u == one {
        return SegHit::Degenerate;
    }
    let point = lerp(p1, p2, &t);
    SegHit::Proper { t, u, point }
}

pub fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    let d = b.sub(a);
    let w = p.sub(a);
    if !cross(&d, &w).is_zero() {
        return false;
    }
    let s = dot(&w, &d);
    s >= Q::zero() && s <= dot(&d, &d)
}

/// Whether the segment `a b` crosses the ray from `p` towards `+x`.
///
/// Half-open in `y`, so parities add up over any closed polyline that
/// avoids `p`.
pub fn ray_crosses(p: &Point, a: &Point, b: &Point) -> bool {
    if (a.y > p.y) == (b.y > p.y) {
        return false;
    }
    // x-coordinate of the segment at height p.y, compared without division
    // by a sign-unknown quantity.
    let lhs = (&p.y - &a.y) * (&b.x - &a.x);
    let rhs = (&p.x - &a.x) * (&b.y - &a.y);
    if b.y > a.y {
        lhs > rhs
    } else {
        lhs < rhs
    }
}

/// Twice the signed area contribution of the edge `a b`.
pub fn shoelace(a: &Point, b: &Point) -> Q {
    cross(a, b)
}

pub fn polygon_contains(poly: &[Point], p: &Point) -> bool {
    let n = poly.len();
    (0..n)
        .filter(|&i| ray_crosses(p, &poly[i], &poly[(i + 1) % n]))
        .count()
        % 2
        == 1
}

pub fn signed_area2(poly: &[Point]) -> Q {
    let n = poly.len();
    (0..n).map(|i| shoelace(&poly[i], &poly[(i + 1) % n])).sum()
}

/// Axis-aligned square `|x - cx| <= h, |y - cy| <= h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Square {
    pub center: Point,
    pub half: Q,
}

impl Square {
    pub fn contains(&self, p: &Point) -> bool {
        p.sub(&self.center).linf() <= self.half
    }

    /// Whether the closed segment meets the closed square (Liang-Barsky).
    pub fn meets_segment(&self, a: &Point, b: &Point) -> bool {
        let d = b.sub(a);
        let mut lo = Q::zero();
        let mut hi = Q::one();
        let bounds = [
            (-&d.x, &a.x - (&self.center.x - &self.half)),
            (d.x.clone(), (&self.center.x + &self.half) - &a.x),
            (-&d.y, &a.y - (&self.center.y - &self.half)),
            (d.y.clone(), (&self.center.y + &self.half) - &a.y),
        ];
        for (p, qv) in bounds {
            if p.is_zero() {
                if qv < Q::zero() {
                    return false;
                }
            } else {
                let r = &qv / &p;
                if p < Q::zero() {
                    if r > lo {
                        lo = r;
                    }
                } else if r < hi {
                    hi = r;
                }
                if lo > hi {
                    return false;
                }
            }
        }
        true
    }

    /// Portion of `a b` outside the open square, as up to two sub-segments.
    pub fn clip_outside(&self, a: &Point, b: &Point) -> Vec<(Point, Point)> {
        let d = b.sub(a);
        let mut lo = Q::zero();
        let mut hi = Q::one();
        let bounds = [
            (-&d.x, &a.x - (&self.center.x - &self.half)),
            (d.x.clone(), (&self.center.x + &self.half) - &a.x),
            (-&d.y, &a.y - (&self.center.y - &self.half)),
            (d.y.clone(), (&self.center.y + &self.half) - &a.y),
        ];
        for (p, qv) in bounds {
            if p.is_zero() {
                if qv <= Q::zero() {
                    return vec![(a.clone(), b.clone())];
                }
            } else {
                let r = &qv / &p;
                if p < Q::zero() {
                    if r > lo {
                        lo = r;
                    }
                } else if r < hi {
                    hi = r;
                }
            }
        }
        if lo >= hi {
            return vec![(a.clone(), b.clone())];
        }
        let mut out = Vec::new();
        if lo > Q::zero() {
            out.push((a.clone(), lerp(a, b, &lo)));
        }
        if hi < Q::one() {
            out.push((lerp(a, b, &hi), b.clone()));
        }
        out
    }
}

/// Strict counterclockwise angular order of direction vectors, starting
/// from the positive x axis.
pub fn angle_cmp(a: &Point, b: &Point) -> std::cmp::Ordering {
    let half = |p: &Point| {
        if p.y > Q::zero() || (p.y.is_zero() && p.x > Q::zero()) {
            0
        } else {
            1
        }
    };
    half(a)
        .cmp(&half(b))
        .then_with(|| Q::zero().cmp(&cross(a, b)))
}
