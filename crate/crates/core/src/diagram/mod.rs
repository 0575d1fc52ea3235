//! Arrow diagrams: closed polylines in a punctured disk with crossing
//! decorations and directed dots.
//!
//! Punctures sit at `(-1, 0)` and `(1, 0)` for the pair of pants and at the
//! origin for the annulus; every vertex lies strictly inside the disk of
//! radius 4. All geometry is exact.

mod format;
pub mod geometry;
mod moves;
mod random;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

pub use format::{read_diagram, write_diagram};
pub use geometry::{Point, Q};
pub use moves::{make_move_pair, MoveError, MoveKind, MovePair, MoveSpec};
pub(crate) use moves::{a_pairing, free_square, with_linf};
pub use random::random_diagram;

use crate::words::Surface;
use geometry::{intersect, lerp, on_segment, qi, SegHit};

pub fn punctures(surface: Surface) -> Vec<Point> {
    match surface {
        Surface::Disk => vec![],
        Surface::Annulus => vec![Point::int(0, 0)],
        Surface::Pants => vec![Point::int(-1, 0), Point::int(1, 0)],
    }
}

/// Segment `seg` of component `comp` runs from vertex `seg` to vertex `seg + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SegRef {
    pub comp: usize,
    pub seg: usize,
}

impl SegRef {
    pub fn new(comp: usize, seg: usize) -> Self {
        Self { comp, seg }
    }
}

impl fmt::Display for SegRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.comp, self.seg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Under {
    A,
    B,
}

/// Decoration of the crossing between segments `a` and `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingSpec {
    pub a: SegRef,
    pub b: SegRef,
    pub under: Under,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dot {
    pub seg: SegRef,
    /// Position along the segment, strictly between 0 and 1.
    pub t: Q,
    /// The arrow points along the stored traversal order.
    pub along: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowDiagram {
    pub surface: Surface,
    pub components: Vec<Vec<Point>>,
    pub crossings: Vec<CrossingSpec>,
    pub dots: Vec<Dot>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("component {comp} has fewer than 3 vertices")]
    TooFewVertices { comp: usize },
    #[error("segment {seg} has zero length")]
    ZeroLength { seg: SegRef },
    #[error("vertex {vertex} of component {comp} lies outside the disk of radius 4")]
    OutsideDisk { comp: usize, vertex: usize },
    #[error("segment {seg} passes through the puncture {puncture}")]
    ThroughPuncture { seg: SegRef, puncture: Point },
    #[error("non-transversal intersection between segments {a} and {b}")]
    Degenerate { a: SegRef, b: SegRef },
    #[error("three or more strands meet at {point}")]
    TriplePoint { point: Point },
    #[error("undeclared crossing between segments {a} and {b} at {point}")]
    MissingCrossing { a: SegRef, b: SegRef, point: Point },
    #[error("crossing decoration for segments {a} and {b}, which do not cross")]
    ExtraCrossing { a: SegRef, b: SegRef },
    #[error("crossing between segments {a} and {b} is decorated twice")]
    DuplicateCrossing { a: SegRef, b: SegRef },
    #[error("segment {seg} does not exist")]
    NoSuchSegment { seg: SegRef },
    #[error("dot parameter {t} on segment {seg} is not strictly between 0 and 1")]
    DotParameter { seg: SegRef, t: Q },
    #[error("dot on segment {seg} sits on a crossing")]
    DotOnCrossing { seg: SegRef },
    #[error("two dots at {point}")]
    DotCollision { point: Point },
}

/// A crossing with its geometry resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub over: SegRef,
    pub under: SegRef,
    pub t_over: Q,
    pub t_under: Q,
    pub point: Point,
}

/// A diagram that passed every general-position check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidatedDiagram {
    diagram: ArrowDiagram,
    crossings: Vec<Crossing>,
}

impl ArrowDiagram {
    pub fn segment_count(&self, comp: usize) -> usize {
        self.components[comp].len()
    }

    pub fn endpoints(&self, s: SegRef) -> (&Point, &Point) {
        let c = &self.components[s.comp];
        (&c[s.seg], &c[(s.seg + 1) % c.len()])
    }

    pub fn segments(&self) -> impl Iterator<Item = SegRef> + '_ {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(c, pts)| (0..pts.len()).map(move |s| SegRef::new(c, s)))
    }

    fn has_segment(&self, s: SegRef) -> bool {
        s.comp < self.components.len() && s.seg < self.components[s.comp].len()
    }

    fn adjacent(&self, a: SegRef, b: SegRef) -> bool {
        if a.comp != b.comp {
            return false;
        }
        let n = self.segment_count(a.comp);
        (a.seg + 1) % n == b.seg || (b.seg + 1) % n == a.seg
    }

    pub fn dot_point(&self, d: &Dot) -> Point {
        let (p, q) = self.endpoints(d.seg);
        lerp(p, q, &d.t)
    }

    /// All transversal intersections, keyed by segment pair `(a, b)` with `a < b`.
    fn intersections(&self) -> Result<BTreeMap<(SegRef, SegRef), (Q, Q, Point)>, DiagramError> {
        let segs: Vec<SegRef> = self.segments().collect();
        let mut out = BTreeMap::new();
        for (i, &a) in segs.iter().enumerate() {
            let (p1, p2) = self.endpoints(a);
            for &b in &segs[i + 1..] {
                let (q1, q2) = self.endpoints(b);
                if self.adjacent(a, b) {
                    // Consecutive segments share a vertex; they may only
                    // meet elsewhere if they fold back onto each other.
                    let d1 = p2.sub(p1);
                    let d2 = q2.sub(q1);
                    if geometry::cross(&d1, &d2).is_zero() && geometry::dot(&d1, &d2) < Q::zero() {
                        return Err(DiagramError::Degenerate { a, b });
                    }
                    continue;
                }
                match intersect(p1, p2, q1, q2) {
                    SegHit::None => {}
                    SegHit::Degenerate => return Err(DiagramError::Degenerate { a, b }),
                    SegHit::Proper { t, u, point } => {
                        out.insert((a, b), (t, u, point));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn validate(self) -> Result<ValidatedDiagram, DiagramError> {
        let radius_sq = qi(16);
        for (c, pts) in self.components.iter().enumerate() {
            if pts.len() < 3 {
                return Err(DiagramError::TooFewVertices { comp: c });
            }
            for (v, p) in pts.iter().enumerate() {
                if p.norm_sq() >= radius_sq {
                    return Err(DiagramError::OutsideDisk { comp: c, vertex: v });
                }
            }
        }
        for s in self.segments() {
            let (p, q) = self.endpoints(s);
            if p == q {
                return Err(DiagramError::ZeroLength { seg: s });
            }
            for h in punctures(self.surface) {
                if on_segment(&h, p, q) {
                    return Err(DiagramError::ThroughPuncture { seg: s, puncture: h });
                }
            }
        }
        let hits = self.intersections()?;
        let mut seen_points: HashMap<&Point, ()> = HashMap::new();
        for (_, _, point) in hits.values() {
            if seen_points.insert(point, ()).is_some() {
                return Err(DiagramError::TriplePoint { point: point.clone() });
            }
        }

        let mut crossings = Vec::with_capacity(self.crossings.len());
        let mut decorated: HashMap<(SegRef, SegRef), ()> = HashMap::new();
        for spec in &self.crossings {
            for s in [spec.a, spec.b] {
                if !self.has_segment(s) {
                    return Err(DiagramError::NoSuchSegment { seg: s });
                }
            }
            let key = if spec.a < spec.b { (spec.a, spec.b) } else { (spec.b, spec.a) };
            let Some((t, u, point)) = hits.get(&key) else {
                return Err(DiagramError::ExtraCrossing { a: spec.a, b: spec.b });
            };
            if decorated.insert(key, ()).is_some() {
                return Err(DiagramError::DuplicateCrossing { a: spec.a, b: spec.b });
            }
            let (ta, tb) = if spec.a < spec.b { (t, u) } else { (u, t) };
            let (over, under, t_over, t_under) = match spec.under {
                Under::A => (spec.b, spec.a, tb, ta),
                Under::B => (spec.a, spec.b, ta, tb),
            };
            crossings.push(Crossing {
                over,
                under,
                t_over: t_over.clone(),
                t_under: t_under.clone(),
                point: point.clone(),
            });
        }
        if let Some(((a, b), (_, _, point))) = hits.iter().find(|(k, _)| !decorated.contains_key(k)) {
            return Err(DiagramError::MissingCrossing { a: *a, b: *b, point: point.clone() });
        }

        let mut dot_points: HashMap<Point, ()> = HashMap::new();
        for d in &self.dots {
            if !self.has_segment(d.seg) {
                return Err(DiagramError::NoSuchSegment { seg: d.seg });
            }
            if d.t <= Q::zero() || d.t >= Q::one() {
                return Err(DiagramError::DotParameter { seg: d.seg, t: d.t.clone() });
            }
            let point = self.dot_point(d);
            if seen_points.contains_key(&point) {
                return Err(DiagramError::DotOnCrossing { seg: d.seg });
            }
            if dot_points.insert(point.clone(), ()).is_some() {
                return Err(DiagramError::DotCollision { point });
            }
        }
        Ok(ValidatedDiagram { diagram: self, crossings })
    }
}

impl ValidatedDiagram {
    pub fn diagram(&self) -> &ArrowDiagram {
        &self.diagram
    }

    pub fn into_diagram(self) -> ArrowDiagram {
        self.diagram
    }

    pub fn surface(&self) -> Surface {
        self.diagram.surface
    }

    /// Resolved crossings, in the order of the decorations.
    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn dot_count(&self) -> usize {
        self.diagram.dots.len()
    }
}

/// A diagram described by geometry alone: crossings are keyed by their
/// point and the direction of the under strand, dots by their point and
/// arrow direction. Moves edit sketches, then rebuild the indexed form.
#[derive(Clone, Debug)]
pub(crate) struct Sketch {
    pub surface: Surface,
    pub components: Vec<Vec<Point>>,
    /// Crossing point and a vector parallel to the under strand.
    pub unders: Vec<(Point, Point)>,
    /// Dot point and the arrow direction.
    pub dots: Vec<(Point, Point)>,
}

impl Sketch {
    pub fn from_diagram(d: &ValidatedDiagram) -> Self {
        let dg = d.diagram();
        let unders = d
            .crossings()
            .iter()
            .map(|c| {
                let (p, q) = dg.endpoints(c.under);
                (c.point.clone(), q.sub(p))
            })
            .collect();
        let dots = dg
            .dots
            .iter()
            .map(|dot| {
                let (p, q) = dg.endpoints(dot.seg);
                let dir = if dot.along { q.sub(p) } else { p.sub(q) };
                (dg.dot_point(dot), dir)
            })
            .collect();
        Sketch { surface: dg.surface, components: dg.components.clone(), unders, dots }
    }

    /// Re-derives segment indices. Every intersection needs an entry in
    /// `unders` at its point whose direction matches one of the strands.
    pub fn build(&self) -> Result<ValidatedDiagram, DiagramError> {
        let bare = ArrowDiagram {
            surface: self.surface,
            components: self.components.clone(),
            crossings: vec![],
            dots: vec![],
        };
        let hits = bare.intersections()?;
        let under_at: HashMap<&Point, &Point> = self.unders.iter().map(|(p, d)| (p, d)).collect();
        let mut crossings = Vec::new();
        for ((a, b), (_, _, point)) in &hits {
            let Some(dir) = under_at.get(point) else {
                return Err(DiagramError::MissingCrossing { a: *a, b: *b, point: point.clone() });
            };
            let (p, q) = bare.endpoints(*a);
            let under = if geometry::cross(&q.sub(p), dir).is_zero() { Under::A } else { Under::B };
            crossings.push(CrossingSpec { a: *a, b: *b, under });
        }
        let mut dots = Vec::new();
        for (point, dir) in &self.dots {
            let seg = bare
                .segments()
                .find(|s| {
                    let (p, q) = bare.endpoints(*s);
                    on_segment(point, p, q) && point != p && point != q
                })
                .ok_or(DiagramError::DotCollision { point: point.clone() })?;
            let (p, q) = bare.endpoints(seg);
            let d = q.sub(p);
            let t = if !d.x.is_zero() { (&point.x - &p.x) / &d.x } else { (&point.y - &p.y) / &d.y };
            dots.push(Dot { seg, t, along: geometry::dot(&d, dir) > Q::zero() });
        }
        ArrowDiagram { crossings, dots, ..bare }.validate()
    }
}
