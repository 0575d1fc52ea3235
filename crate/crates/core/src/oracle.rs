//! Independent checks of the state sum: a recursive bracket that smooths
//! crossings one at a time in the plane, and move invariance trials.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::geometry::{polygon_contains, signed_area2, Point, Q};
use crate::diagram::{
    a_pairing, free_square, make_move_pair, punctures, random_diagram, with_linf, MoveKind, MoveSpec, Sketch,
    ValidatedDiagram,
};
use crate::reduction::Reducer;
use crate::ring::LaurentPoly;
use crate::state_sum::{kbsm_bracket, refine, ClassifiedComponent, ConfigForest, CurveKind, ForestNode};
use crate::words::{SkeinElement, Surface};

/// Which crossing the recursion smooths first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmoothingOrder {
    Lowest,
    Highest,
}

/// `<D> = A <D_A> + A^-1 <D_B>` down to crossingless diagrams, in the basis.
pub fn bracket_recursive(d: &ValidatedDiagram) -> SkeinElement {
    bracket_recursive_with(d, SmoothingOrder::Lowest)
}

pub fn bracket_recursive_with(d: &ValidatedDiagram, order: SmoothingOrder) -> SkeinElement {
    Reducer::global().normal_form(&unreduced(d, order))
}

fn unreduced(d: &ValidatedDiagram, order: SmoothingOrder) -> SkeinElement {
    let c = d.crossing_count();
    if c == 0 {
        return crossingless(d);
    }
    let i = match order {
        SmoothingOrder::Lowest => 0,
        SmoothingOrder::Highest => c - 1,
    };
    let (da, db) = smooth_crossing(d, i);
    let mut out = SkeinElement::zero();
    out.add_scaled(&LaurentPoly::a_pow(1), &unreduced(&da, order));
    out.add_scaled(&LaurentPoly::a_pow(-1), &unreduced(&db, order));
    out
}

/// The two diagrams obtained by smoothing crossing `i`, `A` pairing first.
pub fn smooth_crossing(d: &ValidatedDiagram, i: usize) -> (ValidatedDiagram, ValidatedDiagram) {
    let dg = d.diagram();
    let c = &d.crossings()[i];
    let sketch = Sketch::from_diagram(d);
    let (op, oq) = dg.endpoints(c.over);
    let (up, uq) = dg.endpoints(c.under);
    let through = [(op.clone(), oq.clone()), (up.clone(), uq.clone())];
    let sq = free_square(&sketch, &c.point, &through).expect("crossings have free neighborhoods");
    let half = &sq.half / Q::from_integer(2.into());
    let o = with_linf(&oq.sub(op), &half);
    let u = with_linf(&uq.sub(up), &half);
    let arms = [c.point.sub(&o), c.point.add(&o), c.point.sub(&u), c.point.add(&u)];
    let dirs = [o.scale(&-Q::one()), o.clone(), u.scale(&-Q::one()), u.clone()];
    let a = a_pairing(&dirs, true);
    let b = [(a[0].0, a[1].1), (a[1].0, a[0].1)];

    // Open paths from an outgoing arm to the next incoming arm, plus the
    // components that do not pass through the crossing.
    let mut paths: Vec<(usize, usize, Vec<Point>)> = Vec::new();
    let mut closed = Vec::new();
    for (k, pts) in sketch.components.iter().enumerate() {
        let mut cuts: Vec<(usize, &Q, usize)> = Vec::new();
        if c.over.comp == k {
            cuts.push((c.over.seg, &c.t_over, 0));
        }
        if c.under.comp == k {
            cuts.push((c.under.seg, &c.t_under, 2));
        }
        if cuts.is_empty() {
            closed.push(pts.clone());
            continue;
        }
        cuts.sort();
        let n = pts.len();
        for (idx, &(s0, t0, arm0)) in cuts.iter().enumerate() {
            let (s1, t1, arm1) = cuts[(idx + 1) % cuts.len()];
            let mut path = vec![arms[arm0 + 1].clone()];
            if !(s0 == s1 && t0 < t1) {
                let mut s = s0;
                loop {
                    s = (s + 1) % n;
                    path.push(pts[s].clone());
                    if s == s1 {
                        break;
                    }
                }
            }
            path.push(arms[arm1].clone());
            paths.push((arm0 + 1, arm1, path));
        }
    }

    let join = |pairs: [(usize, usize); 2]| {
        let mut partner = [0usize; 4];
        for (x, y) in pairs {
            partner[x] = y;
            partner[y] = x;
        }
        let mut comps = closed.clone();
        let mut used = vec![false; paths.len()];
        for start in 0..paths.len() {
            if used[start] {
                continue;
            }
            let mut curve: Vec<Point> = Vec::new();
            let (mut p, mut forward) = (start, true);
            loop {
                used[p] = true;
                let (s, e, pts) = &paths[p];
                if forward {
                    curve.extend(pts.iter().cloned());
                } else {
                    curve.extend(pts.iter().rev().cloned());
                }
                let next_arm = partner[if forward { *e } else { *s }];
                let (q, f) = paths
                    .iter()
                    .enumerate()
                    .find_map(|(j, (s, e, _))| {
                        if *s == next_arm {
                            Some((j, true))
                        } else if *e == next_arm {
                            Some((j, false))
                        } else {
                            None
                        }
                    })
                    .expect("every arm ends a path");
                if q == start {
                    break;
                }
                p = q;
                forward = f;
            }
            comps.push(curve);
        }
        let mut sk = sketch.clone();
        sk.components = comps;
        sk.unders.retain(|(p, _)| p != &c.point);
        sk.build().expect("smoothing stays inside a free square")
    };
    (join(a), join(b))
}

/// Reads a crossingless diagram off directly, keeping every curve.
fn crossingless(d: &ValidatedDiagram) -> SkeinElement {
    let dg = d.diagram();
    let holes = punctures(dg.surface);
    let polys = &dg.components;
    let comps: Vec<ClassifiedComponent> = polys
        .iter()
        .enumerate()
        .map(|(k, poly)| {
            let inside: Vec<bool> = holes.iter().map(|h| polygon_contains(poly, h)).collect();
            let kind = match inside[..] {
                [true] | [true, false] => CurveKind::Y,
                [false, true] => CurveKind::Z,
                [true, true] => CurveKind::T,
                _ => CurveKind::X,
            };
            let along: i32 = dg
                .dots
                .iter()
                .filter(|dt| dt.seg.comp == k)
                .map(|dt| if dt.along { 1 } else { -1 })
                .sum();
            let ccw = signed_area2(poly) > Q::zero();
            let mut arrows = if ccw { along } else { -along };
            if kind == CurveKind::T {
                arrows = -arrows;
            }
            ClassifiedComponent { kind, arrows }
        })
        .collect();
    let n = polys.len();
    let encloses = |o: usize, i: usize| o != i && polygon_contains(&polys[o], &polys[i][0]);
    let depth: Vec<usize> = (0..n).map(|i| (0..n).filter(|&o| encloses(o, i)).count()).collect();
    fn node(i: usize, n: usize, comps: &[ClassifiedComponent], parent: &[Option<usize>]) -> ForestNode {
        let mut children: Vec<ForestNode> =
            (0..n).filter(|&j| parent[j] == Some(i)).map(|j| node(j, n, comps, parent)).collect();
        children.sort();
        ForestNode { comp: comps[i], children }
    }
    let parent: Vec<Option<usize>> =
        (0..n).map(|i| (0..n).find(|&o| encloses(o, i) && depth[o] + 1 == depth[i])).collect();
    let mut roots: Vec<ForestNode> = (0..n).filter(|&i| parent[i].is_none()).map(|i| node(i, n, &comps, &parent)).collect();
    roots.sort();
    refine(&ConfigForest { roots })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trial {
    pub index: usize,
    pub seed: u64,
    pub kind: MoveKind,
    pub ok: bool,
    /// Both sides in the basis, `factor * <left>` first, kept on failure.
    pub mismatch: Option<(SkeinElement, SkeinElement)>,
}

impl fmt::Display for Trial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let result = if self.ok { "OK" } else { "FAIL" };
        write!(f, "TRIAL {} seed={} move={} result={}", self.index, self.seed, self.kind, result)?;
        if let Some((l, r)) = &self.mismatch {
            write!(f, "\n  expected {l}\n  got      {r}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct InvarianceReport {
    pub trials: Vec<Trial>,
}

impl InvarianceReport {
    pub fn failures(&self) -> usize {
        self.trials.iter().filter(|t| !t.ok).count()
    }

    pub fn passed(&self) -> usize {
        self.trials.iter().filter(|t| t.ok).count()
    }

    pub fn all_ok(&self) -> bool {
        self.failures() == 0
    }
}

impl fmt::Display for InvarianceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.trials {
            writeln!(f, "{t}")?;
        }
        write!(f, "{} passed, {} failed", self.passed(), self.failures())
    }
}

/// Limits on the random base diagrams.
#[derive(Clone, Copy, Debug)]
pub struct TrialShape {
    pub max_crossings: usize,
    pub max_dots: usize,
}

impl Default for TrialShape {
    fn default() -> Self {
        TrialShape { max_crossings: 4, max_dots: 4 }
    }
}

/// Runs `trials` random instances of each move and compares `<right>` with
/// `factor * <left>`. Trials are numbered across moves in the order given.
pub fn check_invariance(surface: Surface, moves: &[MoveKind], trials: usize, seed: u64) -> InvarianceReport {
    check_invariance_with(surface, moves, trials, seed, TrialShape::default())
}

pub fn check_invariance_with(
    surface: Surface,
    moves: &[MoveKind],
    trials: usize,
    seed: u64,
    shape: TrialShape,
) -> InvarianceReport {
    use rayon::prelude::*;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jobs: Vec<(MoveKind, u64)> =
        moves.iter().flat_map(|&k| (0..trials).map(move |_| k)).map(|k| (k, rng.gen())).collect();
    let trials = jobs
        .par_iter()
        .enumerate()
        .map(|(index, &(kind, s))| run_trial(index, s, kind, surface, shape))
        .collect();
    InvarianceReport { trials }
}

const MAX_REDRAWS: usize = 1000;

/// Bases without a site for the move are redrawn; the retry seeds follow
/// from the trial seed.
fn run_trial(index: usize, seed: u64, kind: MoveKind, surface: Surface, shape: TrialShape) -> Trial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let found = (0..MAX_REDRAWS).find_map(|_| {
        let s: u64 = rng.gen();
        let base = random_diagram(surface, shape.max_crossings, shape.max_dots, s);
        make_move_pair(&base, MoveSpec::new(kind), s).ok()
    });
    let Some(pair) = found else {
        return Trial { index, seed, kind, ok: false, mismatch: None };
    };
    let expected = kbsm_bracket(&pair.left).scale(&pair.factor);
    let got = kbsm_bracket(&pair.right);
    let ok = expected == got;
    Trial { index, seed, kind, ok, mismatch: (!ok).then_some((expected, got)) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::random_diagram;
    use crate::state_sum::refined_bracket;

    #[test]
    fn recursive_matches_state_sum_on_small_diagrams() {
        for surface in Surface::ALL {
            for seed in 0..12 {
                let d = random_diagram(surface, 3, 2, seed);
                let nf = Reducer::global().normal_form(&refined_bracket(&d));
                assert_eq!(bracket_recursive(&d), nf, "{surface:?} seed {seed}");
                assert_eq!(bracket_recursive_with(&d, SmoothingOrder::Highest), nf);
            }
        }
    }

    #[test]
    fn smoothing_removes_one_crossing() {
        let d = (0..50)
            .map(|s| random_diagram(Surface::Pants, 3, 1, s))
            .find(|d| d.crossing_count() >= 2)
            .unwrap();
        let (a, b) = smooth_crossing(&d, 0);
        assert_eq!(a.crossing_count(), d.crossing_count() - 1);
        assert_eq!(b.crossing_count(), d.crossing_count() - 1);
        assert_eq!(a.dot_count(), d.dot_count());
    }
}
