//! The state sum: smoothing every crossing both ways, classifying the
//! resulting curves and collapsing them into words.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::diagram::geometry::{ray_crosses, shoelace, Point, Q};
use crate::diagram::{a_pairing, free_square, punctures, with_linf, Sketch, ValidatedDiagram};
use crate::ring::{p_nk, LaurentPoly, XPoly};
use crate::words::{GeneralWord, LetterKind, Link, SkeinElement, Surface};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveKind {
    X,
    Y,
    Z,
    T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassifiedComponent {
    pub kind: CurveKind,
    /// Net arrows: counterclockwise positive, clockwise positive for `T`.
    pub arrows: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ForestNode {
    pub comp: ClassifiedComponent,
    /// Curves directly inside this one, sorted.
    pub children: Vec<ForestNode>,
}

/// Containment forest of the non-trivial curves of a smoothed state.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConfigForest {
    pub roots: Vec<ForestNode>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Marker {
    /// Smoothing with coefficient `A`.
    Positive,
    /// Smoothing with coefficient `A^-1`.
    Negative,
}

/// One marker per crossing, indexed like `ValidatedDiagram::crossings`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub markers: Vec<Marker>,
}

impl State {
    /// State number `bits`: crossing `i` is positive when bit `i` is clear.
    pub fn from_bits(bits: u64, crossings: usize) -> Self {
        let markers = (0..crossings)
            .map(|i| if bits >> i & 1 == 0 { Marker::Positive } else { Marker::Negative })
            .collect();
        State { markers }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateSummary {
    pub p: usize,
    pub n: usize,
    pub trivial_count: usize,
}

impl StateSummary {
    /// `A^{p-n} (-A^2-A^-2)^{|s|}`.
    pub fn weight(&self) -> LaurentPoly {
        LaurentPoly::a_pow(self.p as i32 - self.n as i32) * LaurentPoly::delta().pow(self.trivial_count as u32)
    }
}

/// An oriented piece of curve between two crossing arms, or a whole
/// crossingless component.
struct Arc {
    /// Arm ids at the start and end; `None` for a closed component.
    ends: Option<(usize, usize)>,
    area2: Q,
    /// Ray parity for each test point.
    parity: Vec<bool>,
    dots: i32,
}

/// Smoothing data that does not depend on the state.
struct Skeleton {
    surface: Surface,
    arcs: Vec<Arc>,
    /// For each arm: the arc it bounds.
    arm_arc: Vec<usize>,
    /// Arm points, indexed `4 * crossing + j` with `j` = over in, over out,
    /// under in, under out.
    arm_points: Vec<Point>,
    a_pairs: Vec<[(usize, usize); 2]>,
    b_pairs: Vec<[(usize, usize); 2]>,
    /// Test points: punctures first, then one point on each arc.
    tests: Vec<Point>,
}

impl Skeleton {
    fn new(d: &ValidatedDiagram) -> Self {
        let dg = d.diagram();
        let sketch = Sketch::from_diagram(d);
        let mut arm_points = Vec::new();
        let mut a_pairs = Vec::new();
        let mut b_pairs = Vec::new();
        // (segment, parameter, kind) events along each component
        #[derive(Clone)]
        enum Event {
            Pass { arm_in: usize, arm_out: usize },
            Dot(i32),
        }
        let mut events: Vec<Vec<(usize, Q, Event)>> = vec![Vec::new(); dg.components.len()];
        for (i, c) in d.crossings().iter().enumerate() {
            let (op, oq) = dg.endpoints(c.over);
            let (up, uq) = dg.endpoints(c.under);
            let through = [(op.clone(), oq.clone()), (up.clone(), uq.clone())];
            let sq = free_square(&sketch, &c.point, &through).expect("crossings have free neighborhoods");
            let half = &sq.half / Q::from_integer(2.into());
            let o = with_linf(&oq.sub(op), &half);
            let u = with_linf(&uq.sub(up), &half);
            arm_points.extend([c.point.sub(&o), c.point.add(&o), c.point.sub(&u), c.point.add(&u)]);
            let dirs = [o.scale(&-Q::one()), o.clone(), u.scale(&-Q::one()), u.clone()];
            let a = a_pairing(&dirs, true);
            let b = [(a[0].0, a[1].1), (a[1].0, a[0].1)];
            let base = 4 * i;
            a_pairs.push(a.map(|(x, y)| (base + x, base + y)));
            b_pairs.push(b.map(|(x, y)| (base + x, base + y)));
            events[c.over.comp].push((c.over.seg, c.t_over.clone(), Event::Pass { arm_in: base, arm_out: base + 1 }));
            events[c.under.comp].push((c.under.seg, c.t_under.clone(), Event::Pass { arm_in: base + 2, arm_out: base + 3 }));
        }
        for dot in &dg.dots {
            events[dot.seg.comp].push((dot.seg.seg, dot.t.clone(), Event::Dot(if dot.along { 1 } else { -1 })));
        }

        let mut arcs = Vec::new();
        let mut arm_arc = vec![usize::MAX; arm_points.len()];
        let mut reps = Vec::new();
        for (c, pts) in dg.components.iter().enumerate() {
            let evs = &mut events[c];
            evs.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
            let passes: Vec<usize> = (0..evs.len()).filter(|&k| matches!(evs[k].2, Event::Pass { .. })).collect();
            if passes.is_empty() {
                let dots = evs.iter().map(|e| if let Event::Dot(s) = e.2 { s } else { 0 }).sum();
                reps.push(pts[0].clone());
                arcs.push((None, pts.clone(), dots));
                continue;
            }
            let n = pts.len();
            for (idx, &k) in passes.iter().enumerate() {
                let next = passes[(idx + 1) % passes.len()];
                let Event::Pass { arm_out, .. } = evs[k].2 else { unreachable!() };
                let Event::Pass { arm_in, .. } = evs[next].2 else { unreachable!() };
                let mut poly = vec![arm_points[arm_out].clone()];
                let (s0, s1) = (evs[k].0, evs[next].0);
                let same_seg_forward = s0 == s1 && evs[k].1 < evs[next].1;
                if !same_seg_forward {
                    let mut s = s0;
                    loop {
                        s = (s + 1) % n;
                        poly.push(pts[s].clone());
                        if s == s1 {
                            break;
                        }
                    }
                }
                poly.push(arm_points[arm_in].clone());
                let mut dots = 0;
                let mut j = (k + 1) % evs.len();
                while j != next {
                    if let Event::Dot(s) = evs[j].2 {
                        dots += s;
                    }
                    j = (j + 1) % evs.len();
                }
                arm_arc[arm_out] = arcs.len();
                arm_arc[arm_in] = arcs.len();
                reps.push(arm_points[arm_out].clone());
                arcs.push((Some((arm_out, arm_in)), poly, dots));
            }
        }

        let mut tests = punctures(dg.surface);
        tests.extend(reps);
        let arcs = arcs
            .into_iter()
            .map(|(ends, poly, dots)| {
                let closed = ends.is_none();
                let edges: Vec<(&Point, &Point)> = if closed {
                    (0..poly.len()).map(|i| (&poly[i], &poly[(i + 1) % poly.len()])).collect()
                } else {
                    poly.windows(2).map(|w| (&w[0], &w[1])).collect()
                };
                let area2 = edges.iter().map(|(a, b)| shoelace(a, b)).sum();
                let parity = tests
                    .iter()
                    .map(|t| edges.iter().filter(|(a, b)| ray_crosses(t, a, b)).count() % 2 == 1)
                    .collect();
                Arc { ends, area2, parity, dots }
            })
            .collect();
        Skeleton { surface: dg.surface, arcs, arm_arc, arm_points, a_pairs, b_pairs, tests }
    }

    fn puncture_count(&self) -> usize {
        punctures(self.surface).len()
    }

    fn smooth(&self, state: &State) -> (ConfigForest, StateSummary) {
        let mut partner = vec![usize::MAX; self.arm_points.len()];
        for (i, m) in state.markers.iter().enumerate() {
            let pairs = match m {
                Marker::Positive => &self.a_pairs[i],
                Marker::Negative => &self.b_pairs[i],
            };
            for &(x, y) in pairs {
                partner[x] = y;
                partner[y] = x;
            }
        }
        struct Curve {
            area2: Q,
            parity: Vec<bool>,
            dots: i32,
            rep: usize,
        }
        let mut curves = Vec::new();
        let mut seen = vec![false; self.arcs.len()];
        for start in 0..self.arcs.len() {
            if seen[start] {
                continue;
            }
            let mut c = Curve {
                area2: Q::zero(),
                parity: vec![false; self.tests.len()],
                dots: 0,
                rep: self.puncture_count() + start,
            };
            let mut arc = start;
            let mut forward = true;
            loop {
                seen[arc] = true;
                let a = &self.arcs[arc];
                let sign = if forward { 1 } else { -1 };
                if forward {
                    c.area2 += &a.area2;
                } else {
                    c.area2 -= &a.area2;
                }
                c.dots += sign * a.dots;
                for (p, q) in c.parity.iter_mut().zip(&a.parity) {
                    *p ^= q;
                }
                let Some((s, e)) = a.ends else {
                    break;
                };
                let exit = if forward { e } else { s };
                let enter = partner[exit];
                let (u, v) = (&self.arm_points[exit], &self.arm_points[enter]);
                c.area2 += shoelace(u, v);
                for (p, t) in c.parity.iter_mut().zip(&self.tests) {
                    *p ^= ray_crosses(t, u, v);
                }
                arc = self.arm_arc[enter];
                forward = self.arcs[arc].ends.map(|(s, _)| s) == Some(enter);
                if arc == start {
                    break;
                }
            }
            curves.push(c);
        }

        let holes = self.puncture_count();
        let classified: Vec<ClassifiedComponent> = curves
            .iter()
            .map(|c| {
                let ccw = c.area2 > Q::zero();
                let arrows = if ccw { c.dots } else { -c.dots };
                let kind = match (holes, &c.parity[..holes]) {
                    (0, _) => CurveKind::X,
                    (1, [false]) => CurveKind::X,
                    (1, [true]) => CurveKind::Y,
                    (_, [false, false]) => CurveKind::X,
                    (_, [true, false]) => CurveKind::Y,
                    (_, [false, true]) => CurveKind::Z,
                    _ => CurveKind::T,
                };
                let arrows = if kind == CurveKind::T { -arrows } else { arrows };
                ClassifiedComponent { kind, arrows }
            })
            .collect();
        let n = curves.len();
        let contains = |outer: usize, inner: usize| outer != inner && curves[outer].parity[curves[inner].rep];
        let depth: Vec<usize> = (0..n).map(|i| (0..n).filter(|&j| contains(j, i)).count()).collect();
        let parent: Vec<Option<usize>> = (0..n)
            .map(|i| (0..n).find(|&j| contains(j, i) && depth[j] + 1 == depth[i]))
            .collect();
        let mut children = vec![Vec::new(); n];
        let mut roots = Vec::new();
        for i in 0..n {
            match parent[i] {
                Some(p) => children[p].push(i),
                None => roots.push(i),
            }
        }
        // A curve is trivial when it bounds a disk and neither it nor anything
        // inside it carries arrows.
        fn arrowless_disk(i: usize, comps: &[ClassifiedComponent], children: &[Vec<usize>]) -> bool {
            comps[i].kind == CurveKind::X
                && comps[i].arrows == 0
                && children[i].iter().all(|&c| arrowless_disk(c, comps, children))
        }
        let mut trivial = 0;
        fn build(
            i: usize,
            comps: &[ClassifiedComponent],
            children: &[Vec<usize>],
            trivial: &mut usize,
        ) -> Option<ForestNode> {
            if arrowless_disk(i, comps, children) {
                *trivial += 1 + count_below(i, children);
                return None;
            }
            let mut kids: Vec<ForestNode> =
                children[i].iter().filter_map(|&c| build(c, comps, children, trivial)).collect();
            kids.sort();
            Some(ForestNode { comp: comps[i], children: kids })
        }
        fn count_below(i: usize, children: &[Vec<usize>]) -> usize {
            children[i].iter().map(|&c| 1 + count_below(c, children)).sum()
        }
        let mut forest: Vec<ForestNode> =
            roots.iter().filter_map(|&r| build(r, &classified, &children, &mut trivial)).collect();
        forest.sort();
        let p = state.markers.iter().filter(|m| **m == Marker::Positive).count();
        let summary = StateSummary { p, n: state.markers.len() - p, trivial_count: trivial };
        (ConfigForest { roots: forest }, summary)
    }
}

pub fn smooth(d: &ValidatedDiagram, s: &State) -> (ConfigForest, StateSummary) {
    assert_eq!(s.markers.len(), d.crossing_count(), "state must mark every crossing");
    Skeleton::new(d).smooth(s)
}

/// `sum_s A^{p(s)-n(s)} (-A^2-A^-2)^{|s|}` grouped by the forest of each state.
pub fn bracket_raw(d: &ValidatedDiagram) -> BTreeMap<ConfigForest, LaurentPoly> {
    let (out, visited) = bracket_raw_counted(d);
    assert_eq!(visited, 1usize << d.crossing_count());
    out
}

/// The state sum and the number of states visited.
pub fn bracket_raw_counted(d: &ValidatedDiagram) -> (BTreeMap<ConfigForest, LaurentPoly>, usize) {
    let c = d.crossing_count();
    assert!(c < 63, "too many crossings for a state sum");
    let skeleton = Skeleton::new(d);
    let counter = AtomicUsize::new(0);
    let merged = (0..1u64 << c)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<ConfigForest, LaurentPoly>, bits| {
            counter.fetch_add(1, Ordering::Relaxed);
            let (forest, summary) = skeleton.smooth(&State::from_bits(bits, c));
            *acc.entry(forest).or_default() += &summary.weight();
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += &v;
            }
            a
        });
    let merged = merged.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    (merged, counter.into_inner())
}

fn x_value(node: &ForestNode) -> XPoly {
    let inner = node.children.iter().fold(XPoly::one(), |acc, c| &acc * &x_value(c));
    let mut out = XPoly::zero();
    for (k, c) in inner.terms() {
        out = &out + &p_nk(node.comp.arrows as i64, k).scale(c);
    }
    out
}

/// Where an `x` region sits in a word: before letter `i` of a chain, or central.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Region {
    Before(LetterKind, usize),
    Central,
}

/// Collapses `x` subtrees into polynomials and reads the remaining curves
/// off as words.
pub fn refine(f: &ConfigForest) -> SkeinElement {
    let mut chains: [Vec<i32>; 3] = Default::default();
    let mut regions: Vec<(Region, XPoly)> = Vec::new();

    fn letter(kind: CurveKind) -> Option<LetterKind> {
        match kind {
            CurveKind::X => None,
            CurveKind::Y => Some(LetterKind::Y),
            CurveKind::Z => Some(LetterKind::Z),
            CurveKind::T => Some(LetterKind::T),
        }
    }

    // Chain positions: y and z are listed innermost first, t outermost first.
    // First collect each non-x node with its nesting depth inside its chain.
    struct Found<'a> {
        kind: LetterKind,
        depth: usize,
        node: &'a ForestNode,
    }
    fn walk<'a>(nodes: &'a [ForestNode], depths: &mut [usize; 3], out: &mut Vec<Found<'a>>) {
        for n in nodes {
            if let Some(kind) = letter(n.comp.kind) {
                let i = kind.index();
                out.push(Found { kind, depth: depths[i], node: n });
                depths[i] += 1;
                walk(&n.children, depths, out);
                depths[i] -= 1;
            }
        }
    }
    let mut found = Vec::new();
    walk(&f.roots, &mut [0; 3], &mut found);
    for kind in LetterKind::ALL {
        let mut of_kind: Vec<&Found> = found.iter().filter(|x| x.kind == kind).collect();
        of_kind.sort_by_key(|x| x.depth);
        if kind != LetterKind::T {
            of_kind.reverse();
        }
        chains[kind.index()] = of_kind.iter().map(|x| x.node.comp.arrows).collect();
    }
    let t_len = chains[LetterKind::T.index()].len();
    let position = |kind: LetterKind, depth: usize| -> usize {
        let len = chains[kind.index()].len();
        if kind == LetterKind::T {
            depth
        } else {
            len - 1 - depth
        }
    };

    let top_region = if t_len > 0 { Region::Before(LetterKind::T, 0) } else { Region::Central };
    for root in f.roots.iter().filter(|n| n.comp.kind == CurveKind::X) {
        regions.push((top_region, x_value(root)));
    }
    for fd in &found {
        let pos = position(fd.kind, fd.depth);
        let region = match fd.kind {
            LetterKind::T if pos + 1 < t_len => Region::Before(LetterKind::T, pos + 1),
            LetterKind::T => Region::Central,
            k => Region::Before(k, pos),
        };
        for child in fd.node.children.iter().filter(|n| n.comp.kind == CurveKind::X) {
            regions.push((region, x_value(child)));
        }
    }

    let skeleton = GeneralWord::new(
        chains[0].iter().map(|&a| Link::bare(a)).collect(),
        chains[1].iter().map(|&a| Link::bare(a)).collect(),
        chains[2].iter().map(|&a| Link::bare(a)).collect(),
        0,
    );
    let mut terms: Vec<(LaurentPoly, GeneralWord)> = vec![(LaurentPoly::one(), skeleton)];
    for (region, poly) in regions {
        let mut next = Vec::new();
        for (c, w) in &terms {
            for (k, pc) in poly.terms() {
                let mut w = w.clone();
                match region {
                    Region::Before(kind, i) => w.add_x_before(kind, i, k),
                    Region::Central => w.set_central(w.central() + k),
                }
                next.push((c * pc, w));
            }
        }
        terms = next;
    }
    terms.into_iter().collect()
}

/// `sum_f c_f refine(f)` over the state sum.
pub fn refined_bracket(d: &ValidatedDiagram) -> SkeinElement {
    let mut out = SkeinElement::zero();
    for (forest, c) in bracket_raw(d) {
        out.add_scaled(&c, &refine(&forest));
    }
    out
}

/// The bracket of `d` written in the standard basis.
pub fn kbsm_bracket(d: &ValidatedDiagram) -> SkeinElement {
    crate::reduction::Reducer::global().normal_form(&refined_bracket(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{read_diagram, ArrowDiagram, Dot, SegRef};

    fn square(cx: (i64, i64), half: (i64, i64), ccw: bool, surface: Surface) -> ArrowDiagram {
        use crate::diagram::geometry::q;
        let (cx, cd) = cx;
        let (h, hd) = half;
        let c = q(cx, cd);
        let r = q(h, hd);
        let mut pts = vec![
            Point::new(&c - &r, -r.clone()),
            Point::new(&c + &r, -r.clone()),
            Point::new(&c + &r, r.clone()),
            Point::new(&c - &r, r.clone()),
        ];
        if !ccw {
            pts.reverse();
        }
        ArrowDiagram { surface, components: vec![pts], crossings: vec![], dots: vec![] }
    }

    #[test]
    fn arrowless_circle_is_trivial() {
        let d = square((0, 1), (1, 1), true, Surface::Disk).validate().unwrap();
        let (f, s) = smooth(&d, &State { markers: vec![] });
        assert!(f.roots.is_empty());
        assert_eq!(s.trivial_count, 1);
    }

    #[test]
    fn dotted_circle_around_left_hole() {
        let mut d = square((-1, 1), (1, 2), true, Surface::Pants);
        d.dots.push(Dot { seg: SegRef::new(0, 0), t: Q::one() / Q::from_integer(3.into()), along: true });
        let (f, _) = smooth(&d.clone().validate().unwrap(), &State { markers: vec![] });
        assert_eq!(f.roots.len(), 1);
        assert_eq!(f.roots[0].comp, ClassifiedComponent { kind: CurveKind::Y, arrows: 1 });
        // clockwise traversal with the same dot reads as -1
        d.components[0].reverse();
        d.dots[0].seg = SegRef::new(0, 2);
        let (f, _) = smooth(&d.validate().unwrap(), &State { markers: vec![] });
        assert_eq!(f.roots[0].comp.arrows, -1);
    }

    #[test]
    fn opposite_dots_cancel() {
        let mut d = square((0, 1), (1, 1), true, Surface::Disk);
        d.dots.push(Dot { seg: SegRef::new(0, 0), t: Q::one() / Q::from_integer(3.into()), along: true });
        d.dots.push(Dot { seg: SegRef::new(0, 2), t: Q::one() / Q::from_integer(3.into()), along: false });
        let (f, s) = smooth(&d.validate().unwrap(), &State { markers: vec![] });
        assert!(f.roots.is_empty());
        assert_eq!(s.trivial_count, 1);
    }

    #[test]
    fn positive_kink_state_sum() {
        // A curl: the strand crosses itself once.
        let text = "surface disk\ncomponent\n-1 0\n1/2 1\n0 3/2\n-1/2 1\n1 0\n0 -1\n";
        let mut d = read_diagram(text).unwrap();
        d.crossings.push(crate::diagram::CrossingSpec {
            a: SegRef::new(0, 0),
            b: SegRef::new(0, 3),
            under: crate::diagram::Under::A,
        });
        let d = d.validate().unwrap();
        let raw = bracket_raw(&d);
        assert_eq!(raw.len(), 1);
        let c = raw.get(&ConfigForest::default()).unwrap();
        let delta = LaurentPoly::delta();
        let kink = LaurentPoly::monomial(-1, 3);
        let mirror = LaurentPoly::monomial(-1, -3);
        assert!(*c == &kink * &delta || *c == &mirror * &delta, "{c}");
    }

    #[test]
    fn refine_places_x_by_region() {
        let node = |kind, arrows, children| ForestNode { comp: ClassifiedComponent { kind, arrows }, children };
        // y_2 around one x with one arrow
        let f = ConfigForest { roots: vec![node(CurveKind::Y, 2, vec![node(CurveKind::X, 1, vec![])])] };
        let w = GeneralWord::parse("x y_2", Surface::Annulus).unwrap();
        assert_eq!(refine(&f), SkeinElement::from_word(w));
        // reversed arrow circle alone
        let f = ConfigForest { roots: vec![node(CurveKind::X, -1, vec![])] };
        assert_eq!(refine(&f).to_string(), "A^-6 * x");
        // t chain: outer t_2 holding an x between it and the inner t
        let f = ConfigForest {
            roots: vec![node(
                CurveKind::T,
                2,
                vec![node(CurveKind::T, 0, vec![node(CurveKind::X, 1, vec![])]), node(CurveKind::X, 1, vec![])],
            )],
        };
        let w = GeneralWord::parse("t_2 x t x", Surface::Pants).unwrap();
        assert_eq!(refine(&f), SkeinElement::from_word(w));
    }
}
