//! Rewriting of skein elements to the free basis of each surface.
//!
//! Four layers run in sequence on every word: semi-reduction pushes `x`
//! circles out of the `y`/`z` chains (into the central region through the
//! `t` chain) and brings arrow counts into `{0, 1}`; reduction leaves at
//! most one primed letter per chain, in last position; the quasi-final
//! layer moves arrows `y -> z -> t`; the final layer removes words that
//! contain all four curve types. Each rule output re-enters the whole
//! pipeline, so a word is only returned once no rule applies.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::ring::LaurentPoly;
use crate::words::{GeneralWord, LetterKind, Link, SkeinElement, Surface, Token, Letter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleId {
    /// `x^k m_n -> (-A^4+1) x^{k-1} m_{n+1} + A^-2 x^{k-1} m_n x`
    Srr2,
    /// `m_n -> -A^-2 m_{n-1} x - A^2 m_{n-2}` for `n > 1`
    Srr3,
    /// `m_n -> -A^-2 m_{n+2} - A^-4 m_{n+1} x` for `n < 0`
    Srr4,
    /// `m' m -> (-A^-4+1) x + A^2 m m'`
    RrPrimeBare,
    /// `m' m' -> -A^-2 x^2 + (2A^4+2) + A^2 m m_2`
    RrPrimePrime,
    /// Arrow moves between chains; the payload is the rule number 2..=7.
    Qf(u8),
    F2,
    F3,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleId::Srr2 => f.write_str("SRR.2"),
            RuleId::Srr3 => f.write_str("SRR.3"),
            RuleId::Srr4 => f.write_str("SRR.4"),
            RuleId::RrPrimeBare => f.write_str("RR.yy'"),
            RuleId::RrPrimePrime => f.write_str("RR.y'y'"),
            RuleId::Qf(n) => write!(f, "QF.{n}"),
            RuleId::F2 => f.write_str("F.2"),
            RuleId::F3 => f.write_str("F.3"),
        }
    }
}

/// Which `t` exponent to use in the last two terms of quasi-final rule 5
/// (`y^a y' t^c t' x^d`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Rule5Exponent {
    /// `t^c`, matching rules 3 and 7 and the final-stage rule 3.
    #[default]
    Corrected,
    /// `t^{c-1}` as printed; undefined for `c = 0`, where `t^0` is used.
    Verbatim,
}

/// One rewrite: `input` was replaced by `output`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: RuleId,
    pub input: GeneralWord,
    pub output: SkeinElement,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RULE {} : {} => {}", self.rule, self.input, self.output)
    }
}

/// The rewrites performed while normalizing, one per distinct word.
#[derive(Clone, Debug, Default)]
pub struct RewriteTrace {
    pub steps: Vec<TraceStep>,
}

impl RewriteTrace {
    /// Re-applies the recorded rewrites to `input` until none applies.
    pub fn replay(&self, input: &SkeinElement) -> SkeinElement {
        let rules: HashMap<&GeneralWord, &SkeinElement> =
            self.steps.iter().map(|s| (&s.input, &s.output)).collect();
        let mut memo = HashMap::new();
        let mut out = SkeinElement::zero();
        for (w, c) in input.terms() {
            out.add_scaled(c, &substitute(w, &rules, &mut memo));
        }
        out
    }
}

fn substitute(
    w: &GeneralWord,
    rules: &HashMap<&GeneralWord, &SkeinElement>,
    memo: &mut HashMap<GeneralWord, SkeinElement>,
) -> SkeinElement {
    if let Some(hit) = memo.get(w) {
        return hit.clone();
    }
    let result = match rules.get(w) {
        None => SkeinElement::from_word(w.clone()),
        Some(out) => {
            let mut acc = SkeinElement::zero();
            for (u, c) in out.terms() {
                acc.add_scaled(c, &substitute(u, rules, memo));
            }
            acc
        }
    };
    memo.insert(w.clone(), result.clone());
    result
}

/// Shorthand for building the words that appear in rule outputs.
#[derive(Default)]
struct WordBuilder(Vec<Token>);

impl WordBuilder {
    fn l(mut self, kind: LetterKind, arrows: i32, count: u32) -> Self {
        self.0
            .extend(std::iter::repeat_n(Token::Letter(Letter::new(kind, arrows)), count as usize));
        self
    }
    fn y(self, arrows: i32, count: u32) -> Self {
        self.l(LetterKind::Y, arrows, count)
    }
    fn z(self, arrows: i32, count: u32) -> Self {
        self.l(LetterKind::Z, arrows, count)
    }
    fn t(self, arrows: i32, count: u32) -> Self {
        self.l(LetterKind::T, arrows, count)
    }
    fn x(mut self, count: u32) -> Self {
        self.0.extend(std::iter::repeat_n(Token::X, count as usize));
        self
    }
    fn build(self) -> GeneralWord {
        GeneralWord::from_tokens(&self.0).expect("rule output respects the type order")
    }
}

fn wb() -> WordBuilder {
    WordBuilder::default()
}

fn lp(terms: &[(i32, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(terms.iter().copied())
}

fn combo(terms: Vec<(LaurentPoly, GeneralWord)>) -> SkeinElement {
    terms.into_iter().collect()
}

/// Shape `y^a y'^a1 z^b z'^b1 t^c t'^c1 x^d` of a reduced word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Shape {
    a: u32,
    a1: bool,
    b: u32,
    b1: bool,
    c: u32,
    c1: bool,
    d: u32,
}

impl Shape {
    fn of(w: &GeneralWord) -> Self {
        let part = |kind| {
            let chain = w.chain(kind);
            let primed = chain.last().is_some_and(|l| l.arrows == 1);
            (chain.len() as u32 - primed as u32, primed)
        };
        let (a, a1) = part(LetterKind::Y);
        let (b, b1) = part(LetterKind::Z);
        let (c, c1) = part(LetterKind::T);
        Shape { a, a1, b, b1, c, c1, d: w.central() }
    }
}

fn badness(arrows: i32) -> i64 {
    if arrows > 1 {
        arrows as i64 - 1
    } else if arrows < 0 {
        -(arrows as i64)
    } else {
        0
    }
}

/// Semi-reduction step at letter `i` of `kind`, chosen by rule.
fn srr_at(w: &GeneralWord, kind: LetterKind, i: usize, rule: RuleId) -> SkeinElement {
    let link = w.chain(kind)[i];
    let with = |arrows: i32, x_before: u32, x_after: u32| {
        let mut out = w.clone();
        out.chain_mut(kind)[i] = Link::new(x_before, arrows);
        out.add_x_after(kind, i, x_after);
        out
    };
    let n = link.arrows;
    let k = link.x_before;
    match rule {
        RuleId::Srr2 => combo(vec![
            (lp(&[(4, -1), (0, 1)]), with(n + 1, k - 1, 0)),
            (lp(&[(-2, 1)]), with(n, k - 1, 1)),
        ]),
        RuleId::Srr3 => combo(vec![
            (lp(&[(-2, -1)]), with(n - 1, k, 1)),
            (lp(&[(2, -1)]), with(n - 2, k, 0)),
        ]),
        RuleId::Srr4 => combo(vec![
            (lp(&[(-2, -1)]), with(n + 2, k, 0)),
            (lp(&[(-4, -1)]), with(n + 1, k, 1)),
        ]),
        _ => unreachable!("not a semi-reduction rule"),
    }
}

/// Reduction step on the adjacent pair `i, i + 1` (`m'` followed by `m` or `m'`).
fn rr_at(w: &GeneralWord, kind: LetterKind, i: usize) -> (RuleId, SkeinElement) {
    let chain = w.chain(kind);
    let second = chain[i + 1].arrows;
    let removed = |extra_x: u32| {
        let mut out = w.clone();
        let chain = out.chain_mut(kind);
        let inner_x = chain[i].x_before;
        chain.drain(i..=i + 1);
        out.add_x_before(kind, i, inner_x + extra_x);
        out
    };
    let relabel = |first: i32, second: i32| {
        let mut out = w.clone();
        out.chain_mut(kind)[i].arrows = first;
        out.chain_mut(kind)[i + 1].arrows = second;
        out
    };
    if second == 0 {
        (
            RuleId::RrPrimeBare,
            combo(vec![(lp(&[(-4, -1), (0, 1)]), removed(1)), (lp(&[(2, 1)]), relabel(0, 1))]),
        )
    } else {
        (
            RuleId::RrPrimePrime,
            combo(vec![
                (lp(&[(-2, -1)]), removed(2)),
                (lp(&[(4, 2), (0, 2)]), removed(0)),
                (lp(&[(2, 1)]), relabel(0, 2)),
            ]),
        )
    }
}

fn qf_rule(w: &GeneralWord, rule5: Rule5Exponent) -> Option<(RuleId, SkeinElement)> {
    let s = Shape::of(w);
    let Shape { a, a1, b, b1, c, c1, d } = s;
    let cp = c1 as u32;
    let a2 = lp(&[(2, 1)]);
    let two = lp(&[(0, 2)]);
    let am2 = lp(&[(-2, 1)]);
    let (id, p, q, r) = if a1 && b > 0 && !b1 {
        (
            2,
            wb().y(0, a + 1).z(0, b - 1).z(-1, 1).t(0, c).t(1, cp).x(d).build(),
            wb().y(0, a).z(0, b - 1).t(0, c).t(1, cp).x(d).t(1, 1).build(),
            wb().y(0, a).z(0, b - 1).t(0, c).t(1, cp).x(d).t(0, 1).x(1).build(),
        )
    } else if a1 && b1 {
        (
            3,
            wb().y(0, a + 1).z(0, b + 1).t(0, c).t(1, cp).x(d).build(),
            wb().y(0, a).z(0, b).t(0, c).t(1, cp).x(d).t(0, 1).build(),
            wb().y(0, a).z(0, b).t(0, c).t(1, cp).x(d).t(-1, 1).x(1).build(),
        )
    } else if a1 && b == 0 && !b1 && c > 0 && !c1 {
        (
            4,
            wb().y(0, a + 1).t(0, c - 1).t(-1, 1).x(d).build(),
            wb().y(0, a).x(d).z(1, 1).t(0, c - 1).build(),
            wb().y(0, a).x(d).z(0, 1).t(0, c - 1).x(1).build(),
        )
    } else if a1 && b == 0 && !b1 && c1 {
        let tail = match rule5 {
            Rule5Exponent::Corrected => c,
            Rule5Exponent::Verbatim => c.saturating_sub(1),
        };
        (
            5,
            wb().y(0, a + 1).t(0, c + 1).x(d).build(),
            wb().y(0, a).x(d).z(0, 1).t(0, tail).build(),
            wb().y(0, a).x(d).z(-1, 1).t(0, tail).x(1).build(),
        )
    } else if !a1 && b1 && c > 0 && !c1 {
        (
            6,
            wb().y(0, a).z(0, b + 1).t(0, c - 1).t(-1, 1).x(d).build(),
            wb().y(0, a).x(d).y(1, 1).z(0, b).t(0, c - 1).build(),
            wb().y(0, a).x(d).y(0, 1).z(0, b).t(0, c - 1).x(1).build(),
        )
    } else if !a1 && b1 && c1 {
        (
            7,
            wb().y(0, a).z(0, b + 1).t(0, c + 1).x(d).build(),
            wb().y(0, a).x(d).y(0, 1).z(0, b).t(0, c).build(),
            wb().y(0, a).x(d).y(-1, 1).z(0, b).t(0, c).x(1).build(),
        )
    } else {
        return None;
    };
    Some((RuleId::Qf(id), combo(vec![(a2, p), (two, q), (am2, r)])))
}

fn f_rule(w: &GeneralWord) -> Option<(RuleId, SkeinElement)> {
    if !w.has_all_four_types() {
        return None;
    }
    let Shape { a, a1, b, b1, c, c1, d } = Shape::of(w);
    if a1 || b1 {
        return None;
    }
    let d = d - 1;
    let mut out = SkeinElement::zero();
    let a2 = lp(&[(2, 1)]);
    let two = lp(&[(0, 2)]);
    let am2 = lp(&[(-2, 1)]);
    // Adds `sign * A^2 * (2 * first + A^-2 * second)`.
    let mut group = |sign: i64, first: GeneralWord, second: GeneralWord| {
        let s = LaurentPoly::constant(sign);
        out.add_term(&(&s * &a2) * &two, first);
        out.add_term(&(&s * &a2) * &am2, second);
    };
    let rule = if !c1 {
        // Z - Y - X
        group(
            1,
            wb().y(0, a - 1).z(0, b).x(d).z(1, 1).t(0, c - 1).build(),
            wb().y(0, a - 1).z(0, b).x(d).z(0, 1).t(0, c - 1).x(1).build(),
        );
        group(
            1,
            wb().y(0, a).x(d).y(1, 1).z(0, b - 1).t(0, c - 1).build(),
            wb().y(0, a).x(d).y(0, 1).z(0, b - 1).t(0, c - 1).x(1).build(),
        );
        group(
            -1,
            wb().y(0, a - 1).z(0, b - 1).t(0, c).x(d).t(1, 1).build(),
            wb().y(0, a - 1).z(0, b - 1).t(0, c).x(d).t(0, 1).x(1).build(),
        );
        out.add_term(lp(&[(2, -2)]), wb().y(0, a).z(0, b).t(0, c - 1).t(1, 1).x(d).build());
        RuleId::F2
    } else {
        // Y' + X' - Z'
        group(
            -1,
            wb().y(0, a).x(d).y(0, 1).z(0, b - 1).t(0, c).build(),
            wb().y(0, a).x(d).y(-1, 1).z(0, b - 1).t(0, c).x(1).build(),
        );
        group(
            1,
            wb().y(0, a - 1).z(0, b - 1).t(0, c).t(1, 1).x(d).t(1, 1).build(),
            wb().y(0, a - 1).z(0, b - 1).t(0, c).t(1, 1).x(d).t(0, 1).x(1).build(),
        );
        group(
            -1,
            wb().y(0, a - 1).z(0, b).x(d).z(0, 1).t(0, c).build(),
            wb().y(0, a - 1).z(0, b).x(d).z(-1, 1).t(0, c).x(1).build(),
        );
        out.add_term(lp(&[(4, -2)]), wb().y(0, a).z(0, b).t(0, c + 1).x(d).build());
        RuleId::F3
    };
    Some((rule, out))
}

/// Which layer a rewrite belongs to; used for the termination measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stage {
    Srr,
    Rr,
    Qf,
    F,
}

fn stage_of(rule: RuleId) -> Stage {
    match rule {
        RuleId::Srr2 | RuleId::Srr3 | RuleId::Srr4 => Stage::Srr,
        RuleId::RrPrimeBare | RuleId::RrPrimePrime => Stage::Rr,
        RuleId::Qf(_) => Stage::Qf,
        RuleId::F2 | RuleId::F3 => Stage::F,
    }
}

/// Well-founded measure of a stage; every rule output is strictly smaller
/// than its input in lexicographic order.
fn measure(stage: Stage, w: &GeneralWord) -> Vec<i64> {
    let links = || LetterKind::ALL.into_iter().flat_map(|k| w.chain(k).iter());
    match stage {
        Stage::Srr => links().flat_map(|l| [l.x_before as i64, badness(l.arrows)]).collect(),
        Stage::Rr => {
            let weighted: i64 = LetterKind::ALL
                .into_iter()
                .map(|k| {
                    let c = w.chain(k);
                    c.iter()
                        .enumerate()
                        .map(|(i, l)| l.arrows as i64 * (c.len() - i) as i64)
                        .sum::<i64>()
                })
                .sum();
            vec![w.letter_count() as i64, weighted]
        }
        Stage::Qf => {
            let sum = |k| w.chain(k).iter().map(|l| l.arrows as i64).sum::<i64>();
            vec![w.letter_count() as i64, 2 * sum(LetterKind::Y) + sum(LetterKind::Z)]
        }
        Stage::F => vec![w.letter_count() as i64, w.x_count() as i64],
    }
}

fn check_measure(rule: RuleId, input: &GeneralWord, output: &SkeinElement) {
    let stage = stage_of(rule);
    let before = measure(stage, input);
    for (w, _) in output.terms() {
        let after = measure(stage, w);
        assert!(
            after < before,
            "termination measure did not decrease for {rule}: {input} ({before:?}) -> {w} ({after:?})"
        );
    }
}

/// The rewrite chosen by the default strategy, or `None` for a basis word.
///
/// Semi-reduction works on the innermost offending letter of the first
/// offending chain; at that letter negative arrow counts go first, then
/// counts above one, then `x` pushing.
pub fn rewrite_step(w: &GeneralWord, rule5: Rule5Exponent) -> Option<(RuleId, SkeinElement)> {
    for kind in LetterKind::ALL {
        for (i, l) in w.chain(kind).iter().enumerate() {
            let rule = if l.arrows < 0 {
                RuleId::Srr4
            } else if l.arrows > 1 {
                RuleId::Srr3
            } else if l.x_before > 0 {
                RuleId::Srr2
            } else {
                continue;
            };
            return Some((rule, srr_at(w, kind, i, rule)));
        }
    }
    for kind in LetterKind::ALL {
        let chain = w.chain(kind);
        if let Some(i) = (0..chain.len().saturating_sub(1)).find(|&i| chain[i].arrows == 1) {
            return Some(rr_at(w, kind, i));
        }
    }
    qf_rule(w, rule5).or_else(|| f_rule(w))
}

/// Every admissible single rewrite of `w`, at any position.
///
/// Semi-reduction and reduction relations are local, so they may fire at
/// any letter whose precondition holds; the quasi-final and final rules
/// have exactly one applicable shape.
pub fn all_rewrites(w: &GeneralWord, rule5: Rule5Exponent) -> Vec<(RuleId, SkeinElement)> {
    let mut out = Vec::new();
    for kind in LetterKind::ALL {
        let chain = w.chain(kind);
        for (i, l) in chain.iter().enumerate() {
            if l.arrows < 0 {
                out.push((RuleId::Srr4, srr_at(w, kind, i, RuleId::Srr4)));
            }
            if l.arrows > 1 {
                out.push((RuleId::Srr3, srr_at(w, kind, i, RuleId::Srr3)));
            }
            if l.x_before > 0 {
                out.push((RuleId::Srr2, srr_at(w, kind, i, RuleId::Srr2)));
            }
            if let Some(next) = chain.get(i + 1) {
                if l.arrows == 1 && next.x_before == 0 && (next.arrows == 0 || next.arrows == 1) {
                    out.push(rr_at(w, kind, i));
                }
            }
        }
    }
    if w.is_reduced() {
        out.extend(qf_rule(w, rule5));
        if w.is_quasi_final() {
            out.extend(f_rule(w));
        }
    }
    out
}

/// Memoizing normal-form engine.
pub struct Reducer {
    rule5: Rule5Exponent,
    cache: Mutex<HashMap<GeneralWord, SkeinElement>>,
}

thread_local! {
    static IN_PROGRESS: RefCell<HashSet<GeneralWord>> = RefCell::new(HashSet::new());
}

impl Reducer {
    pub fn new(rule5: Rule5Exponent) -> Self {
        Self { rule5, cache: Mutex::new(HashMap::new()) }
    }

    /// The process-wide reducer with the default rule set.
    pub fn global() -> &'static Reducer {
        static R: OnceLock<Reducer> = OnceLock::new();
        R.get_or_init(|| Reducer::new(Rule5Exponent::default()))
    }

    pub fn rule5(&self) -> Rule5Exponent {
        self.rule5
    }

    pub fn normal_form_word(&self, w: &GeneralWord) -> SkeinElement {
        if let Some(hit) = self.cache.lock().unwrap().get(w) {
            return hit.clone();
        }
        let result = match rewrite_step(w, self.rule5) {
            None => SkeinElement::from_word(w.clone()),
            Some((rule, out)) => {
                if cfg!(debug_assertions) {
                    check_measure(rule, w, &out);
                }
                let fresh = IN_PROGRESS.with(|s| s.borrow_mut().insert(w.clone()));
                assert!(fresh, "rewriting cycled back to {w}");
                let mut acc = SkeinElement::zero();
                for (u, c) in out.terms() {
                    acc.add_scaled(c, &self.normal_form_word(u));
                }
                IN_PROGRESS.with(|s| s.borrow_mut().remove(w));
                acc
            }
        };
        self.cache
            .lock()
            .unwrap()
            .entry(w.clone())
            .or_insert(result)
            .clone()
    }

    pub fn normal_form(&self, e: &SkeinElement) -> SkeinElement {
        let mut out = SkeinElement::zero();
        for (w, c) in e.terms() {
            out.add_scaled(c, &self.normal_form_word(w));
        }
        out
    }

    /// Normal form together with the rewrites used, bypassing the cache.
    pub fn normal_form_traced(&self, e: &SkeinElement) -> (SkeinElement, RewriteTrace) {
        let mut trace = RewriteTrace::default();
        let mut seen: HashMap<GeneralWord, SkeinElement> = HashMap::new();
        let mut out = SkeinElement::zero();
        for (w, c) in e.terms() {
            out.add_scaled(c, &self.traced_word(w, &mut seen, &mut trace));
        }
        (out, trace)
    }

    fn traced_word(
        &self,
        w: &GeneralWord,
        seen: &mut HashMap<GeneralWord, SkeinElement>,
        trace: &mut RewriteTrace,
    ) -> SkeinElement {
        if let Some(hit) = seen.get(w) {
            return hit.clone();
        }
        let result = match rewrite_step(w, self.rule5) {
            None => SkeinElement::from_word(w.clone()),
            Some((rule, out)) => {
                trace.steps.push(TraceStep { rule, input: w.clone(), output: out.clone() });
                let mut acc = SkeinElement::zero();
                for (u, c) in out.terms() {
                    acc.add_scaled(c, &self.traced_word(u, seen, trace));
                }
                acc
            }
        };
        seen.insert(w.clone(), result.clone());
        result
    }
}

/// Normal form in the word basis. Every word is rewritten with the full
/// pipeline, so the output only contains basis words of the smallest
/// surface whose alphabet covers the input.
pub fn normal_form(e: &SkeinElement, _surface: Surface) -> SkeinElement {
    Reducer::global().normal_form(e)
}

pub fn reduce_srr(w: &GeneralWord) -> SkeinElement {
    stage_closure(w, |u| {
        LetterKind::ALL.into_iter().find_map(|kind| {
            u.chain(kind).iter().enumerate().find_map(|(i, l)| {
                let rule = if l.arrows < 0 {
                    RuleId::Srr4
                } else if l.arrows > 1 {
                    RuleId::Srr3
                } else if l.x_before > 0 {
                    RuleId::Srr2
                } else {
                    return None;
                };
                Some(srr_at(u, kind, i, rule))
            })
        })
    })
}

/// `<<w>_srr>_rr`: semi-reduced and reduced, without moving arrows between chains.
pub fn reduce_rr(w: &GeneralWord) -> SkeinElement {
    stage_closure(w, |u| match rewrite_step(u, Rule5Exponent::default()) {
        Some((rule, out)) if matches!(stage_of(rule), Stage::Srr | Stage::Rr) => Some(out),
        _ => None,
    })
}

/// Up to the quasi-final layer.
pub fn reduce_qf(w: &GeneralWord) -> SkeinElement {
    stage_closure(w, |u| match rewrite_step(u, Rule5Exponent::default()) {
        Some((rule, out)) if stage_of(rule) != Stage::F => Some(out),
        _ => None,
    })
}

/// All four layers; same as the normal form.
pub fn reduce_f(w: &GeneralWord) -> SkeinElement {
    Reducer::global().normal_form_word(w)
}

fn stage_closure(
    w: &GeneralWord,
    step: impl Fn(&GeneralWord) -> Option<SkeinElement> + Copy,
) -> SkeinElement {
    fn go(
        w: &GeneralWord,
        step: &dyn Fn(&GeneralWord) -> Option<SkeinElement>,
        memo: &mut HashMap<GeneralWord, SkeinElement>,
    ) -> SkeinElement {
        if let Some(hit) = memo.get(w) {
            return hit.clone();
        }
        let result = match step(w) {
            None => SkeinElement::from_word(w.clone()),
            Some(out) => {
                let mut acc = SkeinElement::zero();
                for (u, c) in out.terms() {
                    acc.add_scaled(c, &go(u, step, memo));
                }
                acc
            }
        };
        memo.insert(w.clone(), result.clone());
        result
    }
    go(w, &step, &mut HashMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{p_n, XPoly};

    fn w(s: &str, surface: Surface) -> GeneralWord {
        GeneralWord::parse(s, surface).unwrap()
    }

    fn el(terms: &[(&[(i32, i64)], &str)], surface: Surface) -> SkeinElement {
        terms.iter().map(|(c, s)| (lp(c), w(s, surface))).collect()
    }

    #[test]
    fn srr_rule_instances() {
        let an = Surface::Annulus;
        let (rule, out) = rewrite_step(&w("x y", an), Rule5Exponent::Corrected).unwrap();
        assert_eq!(rule, RuleId::Srr2);
        assert_eq!(out, el(&[(&[(4, -1), (0, 1)], "y'"), (&[(-2, 1)], "y x")], an));
        assert_eq!(
            reduce_srr(&w("y_2", an)),
            el(&[(&[(-2, -1)], "y' x"), (&[(2, -1)], "y")], an)
        );
        assert_eq!(
            reduce_srr(&w("y_-1", an)),
            el(&[(&[(-4, -1)], "y x"), (&[(-2, -1)], "y'")], an)
        );
    }

    #[test]
    fn rr_rule_instances() {
        let an = Surface::Annulus;
        assert_eq!(
            reduce_rr(&w("y' y", an)),
            el(&[(&[(-4, -1), (0, 1)], "x"), (&[(2, 1)], "y y'")], an)
        );
        let expected = el(&[(&[(-2, -1)], "x^2"), (&[(4, 2), (0, 2)], "1")], an)
            .add(&reduce_rr(&w("y y_2", an)).scale(&lp(&[(2, 1)])));
        assert_eq!(reduce_rr(&w("y' y'", an)), expected);
        assert_eq!(reduce_rr(&w("y y' x", an)), el(&[(&[(0, 1)], "y y' x")], an));
    }

    #[test]
    fn qf_rule_instances() {
        let p = Surface::Pants;
        let (rule, out) = rewrite_step(&w("y' z", p), Rule5Exponent::Corrected).unwrap();
        assert_eq!(rule, RuleId::Qf(2));
        assert_eq!(out, el(&[(&[(2, 1)], "y z_-1"), (&[(0, 2)], "t'"), (&[(-2, 1)], "t x")], p));
        let (rule, out) = rewrite_step(&w("y' t", p), Rule5Exponent::Corrected).unwrap();
        assert_eq!(rule, RuleId::Qf(4));
        assert_eq!(out, el(&[(&[(2, 1)], "y t_-1"), (&[(0, 2)], "z'"), (&[(-2, 1)], "z x")], p));
        assert!(rewrite_step(&w("y y' x", p), Rule5Exponent::Corrected).is_none());
    }

    #[test]
    fn f_rule_instance() {
        let p = Surface::Pants;
        let (rule, out) = rewrite_step(&w("y z t x", p), Rule5Exponent::Corrected).unwrap();
        assert_eq!(rule, RuleId::F2);
        // -2A^2 y z t' + A^2 (Z - Y - X) at a = b = c = 1, d = 0
        let expected = el(
            &[
                (&[(2, -2)], "y z t'"),
                (&[(2, 2)], "z z'"),
                (&[(0, 1)], "z z x"),
                (&[(2, 2)], "y y'"),
                (&[(0, 1)], "y y x"),
                (&[(2, -2)], "t t'"),
                (&[(0, -1)], "t t x"),
            ],
            p,
        );
        assert_eq!(out, expected);
        assert!(rewrite_step(&w("y z t", p), Rule5Exponent::Corrected).is_none());
        assert!(rewrite_step(&w("x^5", p), Rule5Exponent::Corrected).is_none());
    }

    #[test]
    fn golden_identities_in_the_annulus() {
        let an = Surface::Annulus;
        let r = Reducer::new(Rule5Exponent::Corrected);
        let a = |k| LaurentPoly::a_pow(k);
        let x_el = |p: XPoly| SkeinElement::from_xpoly(&p);
        let word = |s| SkeinElement::from_word(w(s, an));

        // n = m = 1
        let lhs = x_el(p_n(-1)).scale(&a(1)).add(&r.normal_form(&word("y' y")).scale(&a(-1)));
        assert_eq!(lhs, el(&[(&[(1, 1)], "y y'"), (&[(-1, 1)], "x")], an));

        // n = 0, m = 1
        let lhs = r
            .normal_form(&word("y_-1 y'"))
            .scale(&a(1))
            .add(&x_el(p_n(2)).scale(&a(-1)));
        assert_eq!(lhs, el(&[(&[(3, -1), (-1, -1)], "1"), (&[(-1, 1)], "y y")], an));

        // n = m = 0, both sides
        let d = r.normal_form(&word("y_-1 y")).scale(&a(1)).add(&word("x").scale(&a(-1)));
        let d_prime = x_el(p_n(-1)).scale(&a(1)).add(&r.normal_form(&word("y y_-1")).scale(&a(-1)));
        let expected = el(&[(&[(-3, -1)], "y y'"), (&[(-5, -1)], "y y x"), (&[(-5, 1)], "x")], an);
        assert_eq!(d, expected);
        assert_eq!(d_prime, expected);

        assert_eq!(
            r.normal_form(&word("y_-1 y")),
            el(&[(&[(-4, -1)], "y y'"), (&[(-6, -1)], "y y x"), (&[(-6, 1), (-2, -1)], "x")], an)
        );
    }

    #[test]
    fn rule5_variants_against_final_rule_3() {
        // Moving the arrow of y' in `y y' z t t' x` to the t chain directly
        // (rule 5 with z letters carried along) and through the z chain must
        // agree; the difference is exactly final rule 3.
        let p = Surface::Pants;
        for (variant, should_agree) in
            [(Rule5Exponent::Corrected, true), (Rule5Exponent::Verbatim, false)]
        {
            let r = Reducer::new(variant);
            let lhs = r.normal_form(&SkeinElement::from_word(w("y y' z t t'", p)));
            let nf = |s: &str| r.normal_form(&SkeinElement::from_word(w(s, p)));
            let tail = match variant {
                Rule5Exponent::Corrected => "t",
                Rule5Exponent::Verbatim => "",
            };
            let direct = nf("y y z t^2")
                .scale(&lp(&[(2, 1)]))
                .add(&nf(&format!("y z z {tail}")).scale(&lp(&[(0, 2)])))
                .add(&nf(&format!("y z z_-1 {tail} x")).scale(&lp(&[(-2, 1)])));
            assert_eq!(lhs == direct, should_agree, "{variant:?}");
        }
    }

    #[test]
    fn trace_replays_to_output() {
        let e = SkeinElement::from_word(w("x y_3 z' t_-2 x", Surface::Pants));
        let r = Reducer::new(Rule5Exponent::Corrected);
        let (out, trace) = r.normal_form_traced(&e);
        assert_eq!(out, r.normal_form(&e));
        assert_eq!(trace.replay(&e), out);
        assert!(trace.steps[0].to_string().starts_with("RULE SRR."));
    }
}
