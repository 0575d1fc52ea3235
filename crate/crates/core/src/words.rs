//! Words encoding crossingless diagrams and their linear combinations.
//!
//! A word lists the `y` curves (around the left hole) from the hole
//! outward, then the `z` curves (around the right hole) from the hole
//! outward, then the `t` curves (around both holes) from the outer boundary
//! inward. A run of `x` written immediately before a letter lies on the
//! side of that letter the reading path comes from: inside a `y`/`z`
//! curve, outside a `t` curve. A trailing run lies in the central region
//! bounded by the outermost `y`, the outermost `z` and the innermost `t`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ring::{fmt_coeff, LaurentPoly, XPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Surface {
    Disk,
    Annulus,
    Pants,
}

impl Surface {
    pub fn name(self) -> &'static str {
        match self {
            Surface::Disk => "disk",
            Surface::Annulus => "annulus",
            Surface::Pants => "pants",
        }
    }

    pub fn admits(self, kind: LetterKind) -> bool {
        match self {
            Surface::Disk => false,
            Surface::Annulus => kind == LetterKind::Y,
            Surface::Pants => true,
        }
    }

    pub const ALL: [Surface; 3] = [Surface::Disk, Surface::Annulus, Surface::Pants];
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Surface {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "disk" => Ok(Surface::Disk),
            "annulus" => Ok(Surface::Annulus),
            "pants" => Ok(Surface::Pants),
            other => Err(format!("unknown surface `{other}` (expected disk, annulus or pants)")),
        }
    }
}

/// Curve types that are not null-homotopic in the surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LetterKind {
    Y,
    Z,
    T,
}

impl LetterKind {
    pub const ALL: [LetterKind; 3] = [LetterKind::Y, LetterKind::Z, LetterKind::T];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> char {
        match self {
            LetterKind::Y => 'y',
            LetterKind::Z => 'z',
            LetterKind::T => 't',
        }
    }
}

/// A `y`, `z` or `t` curve carrying a net number of arrows.
///
/// Arrows are counted counterclockwise-positive on `y` and `z` curves and
/// clockwise-positive on `t` curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub kind: LetterKind,
    pub arrows: i32,
}

impl Letter {
    pub fn new(kind: LetterKind, arrows: i32) -> Self {
        Self { kind, arrows }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.arrows {
            0 => write!(f, "{}", self.kind.symbol()),
            1 => write!(f, "{}'", self.kind.symbol()),
            n => write!(f, "{}_{n}", self.kind.symbol()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Token {
    X,
    Letter(Letter),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::X => f.write_str("x"),
            Token::Letter(l) => l.fmt(f),
        }
    }
}

/// One letter of a chain together with the `x` circles on its near side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Link {
    pub x_before: u32,
    pub arrows: i32,
}

impl Link {
    pub fn new(x_before: u32, arrows: i32) -> Self {
        Self { x_before, arrows }
    }

    pub fn bare(arrows: i32) -> Self {
        Self::new(0, arrows)
    }
}

/// A word over `{x} ∪ {y_m, z_m, t_m}` stored chain by chain.
///
/// The chained form is in bijection with the token sequences that respect
/// the `y < z < t` type order, so it is the canonical representation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneralWord {
    chains: [Vec<Link>; 3],
    central: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("syntax error at column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error("letter `{letter}` is not allowed on the {surface}")]
    Alphabet { letter: char, surface: Surface },
    #[error("type order violated: `{later}` cannot follow `{earlier}` (y letters precede z letters precede t letters)")]
    TypeOrder { earlier: char, later: char },
}

impl GeneralWord {
    /// The empty word (the empty link).
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(y: Vec<Link>, z: Vec<Link>, t: Vec<Link>, central: u32) -> Self {
        Self { chains: [y, z, t], central }
    }

    /// `x^n` in the central region.
    pub fn x_pow(n: u32) -> Self {
        Self { central: n, ..Self::default() }
    }

    pub fn chain(&self, kind: LetterKind) -> &[Link] {
        &self.chains[kind.index()]
    }

    pub fn chain_mut(&mut self, kind: LetterKind) -> &mut Vec<Link> {
        &mut self.chains[kind.index()]
    }

    pub fn central(&self) -> u32 {
        self.central
    }

    pub fn set_central(&mut self, n: u32) {
        self.central = n;
    }

    pub fn with_central(mut self, n: u32) -> Self {
        self.central = n;
        self
    }

    /// Number of `y`, `z` and `t` letters.
    pub fn letter_count(&self) -> usize {
        self.chains.iter().map(Vec::len).sum()
    }

    /// Total number of `x` circles in all regions.
    pub fn x_count(&self) -> u32 {
        self.central + self.chains.iter().flatten().map(|l| l.x_before).sum::<u32>()
    }

    /// Adds `n` circles to the region just past letter `i` of the chain,
    /// i.e. before letter `i + 1`, or the central region after the last one.
    pub fn add_x_after(&mut self, kind: LetterKind, i: usize, n: u32) {
        let chain = &mut self.chains[kind.index()];
        match chain.get_mut(i + 1) {
            Some(next) => next.x_before += n,
            None => self.central += n,
        }
    }

    /// Adds `n` circles to the region before letter `i` of the chain, or to
    /// the central region when `i` is past the end.
    pub fn add_x_before(&mut self, kind: LetterKind, i: usize, n: u32) {
        match self.chains[kind.index()].get_mut(i) {
            Some(l) => l.x_before += n,
            None => self.central += n,
        }
    }

    /// Token sequence in reading order.
    pub fn tokens(&self) -> Vec<Token> {
        let mut out = Vec::new();
        for kind in LetterKind::ALL {
            for l in self.chain(kind) {
                out.extend(std::iter::repeat_n(Token::X, l.x_before as usize));
                out.push(Token::Letter(Letter::new(kind, l.arrows)));
            }
        }
        out.extend(std::iter::repeat_n(Token::X, self.central as usize));
        out
    }

    /// Builds a word from tokens, enforcing the `y < z < t` type order.
    pub fn from_tokens(tokens: &[Token]) -> Result<Self, WordError> {
        let mut w = Self::empty();
        let mut pending = 0u32;
        let mut last: Option<LetterKind> = None;
        for tok in tokens {
            match tok {
                Token::X => pending += 1,
                Token::Letter(l) => {
                    if let Some(prev) = last {
                        if prev > l.kind {
                            return Err(WordError::TypeOrder {
                                earlier: prev.symbol(),
                                later: l.kind.symbol(),
                            });
                        }
                    }
                    last = Some(l.kind);
                    w.chains[l.kind.index()].push(Link::new(pending, l.arrows));
                    pending = 0;
                }
            }
        }
        w.central = pending;
        Ok(w)
    }

    pub fn parse(text: &str, surface: Surface) -> Result<Self, WordError> {
        let tokens = tokenize(text)?;
        for tok in &tokens {
            if let Token::Letter(l) = tok {
                if !surface.admits(l.kind) {
                    return Err(WordError::Alphabet { letter: l.kind.symbol(), surface });
                }
            }
        }
        Self::from_tokens(&tokens)
    }

    pub fn has_kind(&self, kind: LetterKind) -> bool {
        !self.chain(kind).is_empty()
    }

    /// The smallest surface whose alphabet contains every letter.
    pub fn min_surface(&self) -> Surface {
        if self.has_kind(LetterKind::Z) || self.has_kind(LetterKind::T) {
            Surface::Pants
        } else if self.has_kind(LetterKind::Y) {
            Surface::Annulus
        } else {
            Surface::Disk
        }
    }

    /// Every chain has no `x` inside it and reads `m^k` or `m^k m'`.
    pub fn is_reduced(&self) -> bool {
        self.chains.iter().all(|c| chain_is_reduced(c))
    }

    /// Every chain has no `x` inside it and only arrow values 0 and 1.
    pub fn is_semi_reduced(&self) -> bool {
        self.chains
            .iter()
            .flatten()
            .all(|l| l.x_before == 0 && (l.arrows == 0 || l.arrows == 1))
    }

    /// Reduced, with at most one primed letter which is the last letter.
    pub fn is_quasi_final(&self) -> bool {
        if !self.is_reduced() {
            return false;
        }
        let letters: Vec<i32> = self.chains.iter().flatten().map(|l| l.arrows).collect();
        let primes = letters.iter().filter(|&&a| a == 1).count();
        primes == 0 || (primes == 1 && letters.last() == Some(&1))
    }

    /// Quasi-final and not containing all four curve types.
    pub fn is_final(&self) -> bool {
        self.is_quasi_final() && !self.has_all_four_types()
    }

    pub fn has_all_four_types(&self) -> bool {
        self.central > 0 && LetterKind::ALL.iter().all(|k| self.has_kind(*k))
    }
}

fn chain_is_reduced(c: &[Link]) -> bool {
    let n = c.len();
    c.iter().enumerate().all(|(i, l)| {
        l.x_before == 0 && (l.arrows == 0 || (l.arrows == 1 && i + 1 == n))
    })
}

/// Membership in the free basis of the skein module of the surface.
pub fn is_basis_word(w: &GeneralWord, surface: Surface) -> bool {
    if w.min_surface() > surface {
        return false;
    }
    match surface {
        Surface::Disk => true,
        Surface::Annulus => w.is_reduced(),
        Surface::Pants => w.is_final(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>, WordError> {
    let trimmed = text.trim();
    if trimmed == "1" {
        return Ok(Vec::new());
    }
    let chars: Vec<char> = text.chars().collect();
    let err = |col: usize, msg: &str| WordError::Syntax { col: col + 1, msg: msg.to_string() };
    let read_int = |i: &mut usize, signed: bool| -> Option<i64> {
        let start = *i;
        if signed && chars.get(*i) == Some(&'-') {
            *i += 1;
        }
        let digits = *i;
        while chars.get(*i).is_some_and(|c| c.is_ascii_digit()) {
            *i += 1;
        }
        if *i == digits {
            *i = start;
            return None;
        }
        chars[start..*i].iter().collect::<String>().parse().ok()
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            'x' => {
                i += 1;
                Token::X
            }
            'y' | 'z' | 't' => {
                let kind = match c {
                    'y' => LetterKind::Y,
                    'z' => LetterKind::Z,
                    _ => LetterKind::T,
                };
                i += 1;
                let arrows = match chars.get(i) {
                    Some('\'') => {
                        i += 1;
                        1
                    }
                    Some('_') => {
                        i += 1;
                        let n = read_int(&mut i, true).ok_or_else(|| err(i, "expected integer after `_`"))?;
                        i32::try_from(n).map_err(|_| err(start, "arrow count out of range"))?
                    }
                    _ => 0,
                };
                Token::Letter(Letter::new(kind, arrows))
            }
            _ => return Err(err(i, &format!("unexpected character `{c}`"))),
        };
        let mut reps = 1usize;
        if chars.get(i) == Some(&'^') {
            i += 1;
            let n = read_int(&mut i, false).ok_or_else(|| err(i, "expected positive integer after `^`"))?;
            if n < 1 {
                return Err(err(i, "exponent must be positive"));
            }
            reps = usize::try_from(n).map_err(|_| err(i, "exponent too large"))?;
        }
        out.extend(std::iter::repeat_n(tok, reps));
        if let Some(&next) = chars.get(i) {
            if !(next.is_whitespace() || matches!(next, 'x' | 'y' | 'z' | 't')) {
                return Err(err(i, &format!("unexpected character `{next}`")));
            }
        }
    }
    if out.is_empty() {
        return Err(err(0, "empty word (use `1` for the empty word)"));
    }
    Ok(out)
}

impl fmt::Display for GeneralWord {
    /// Canonical text: repeated tokens collapse to powers, the empty word is `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens = self.tokens();
        if tokens.is_empty() {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            let mut j = i + 1;
            while j < tokens.len() && tokens[j] == tokens[i] {
                j += 1;
            }
            match j - i {
                1 => parts.push(tokens[i].to_string()),
                n => parts.push(format!("{}^{n}", tokens[i])),
            }
            i = j;
        }
        f.write_str(&parts.join(" "))
    }
}

/// A finite `Z[A, A^-1]`-linear combination of words.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct SkeinElement {
    terms: BTreeMap<GeneralWord, LaurentPoly>,
}

impl SkeinElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_word(w: GeneralWord) -> Self {
        Self::term(LaurentPoly::one(), w)
    }

    /// Central powers of `x`: `sum c_k x^k`.
    pub fn from_xpoly(p: &XPoly) -> Self {
        p.terms()
            .map(|(k, c)| (c.clone(), GeneralWord::x_pow(k)))
            .collect()
    }

    pub fn term(c: LaurentPoly, w: GeneralWord) -> Self {
        let mut e = Self::zero();
        e.add_term(c, w);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &GeneralWord) -> LaurentPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GeneralWord, &LaurentPoly)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (GeneralWord, LaurentPoly)> {
        self.terms.into_iter()
    }

    pub fn add_term(&mut self, c: LaurentPoly, w: GeneralWord) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &LaurentPoly, other: &SkeinElement) {
        if c.is_zero() {
            return;
        }
        for (w, k) in &other.terms {
            self.add_term(k * c, w.clone());
        }
    }

    pub fn add(&self, other: &SkeinElement) -> SkeinElement {
        let mut out = self.clone();
        out.add_scaled(&LaurentPoly::one(), other);
        out
    }

    pub fn sub(&self, other: &SkeinElement) -> SkeinElement {
        let mut out = self.clone();
        out.add_scaled(&LaurentPoly::constant(-1), other);
        out
    }

    pub fn scale(&self, c: &LaurentPoly) -> SkeinElement {
        let mut out = SkeinElement::zero();
        out.add_scaled(c, self);
        out
    }

    /// Every word lies in the free basis of `surface`.
    pub fn is_supported_on_basis(&self, surface: Surface) -> bool {
        self.terms.keys().all(|w| is_basis_word(w, surface))
    }
}

impl FromIterator<(LaurentPoly, GeneralWord)> for SkeinElement {
    fn from_iter<I: IntoIterator<Item = (LaurentPoly, GeneralWord)>>(iter: I) -> Self {
        let mut e = SkeinElement::zero();
        for (c, w) in iter {
            e.add_term(c, w);
        }
        e
    }
}

impl fmt::Display for SkeinElement {
    /// `coeff * word` terms joined by ` + `, sorted by the word's text.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts: Vec<(String, &LaurentPoly)> =
            self.terms.iter().map(|(w, c)| (w.to_string(), c)).collect();
        parts.sort_by(|a, b| a.0.cmp(&b.0));
        let rendered: Vec<String> = parts
            .into_iter()
            .map(|(w, c)| if c.is_one() { w } else { format!("{} * {w}", fmt_coeff(c)) })
            .collect();
        f.write_str(&rendered.join(" + "))
    }
}

impl fmt::Debug for SkeinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> GeneralWord {
        GeneralWord::parse(s, Surface::Pants).unwrap()
    }

    #[test]
    fn parse_mixed_word() {
        let word = w("y' z^2 t t' x^2");
        assert_eq!(word.chain(LetterKind::Y), &[Link::bare(1)]);
        assert_eq!(word.chain(LetterKind::Z), &[Link::bare(0), Link::bare(0)]);
        assert_eq!(word.chain(LetterKind::T), &[Link::bare(0), Link::bare(1)]);
        assert_eq!(word.central(), 2);
        assert_eq!(word.to_string(), "y' z^2 t t' x^2");
    }

    #[test]
    fn x_runs_bind_to_following_letter() {
        let word = w("y_0 x y_1 z_0 z_0 x^2 t_2 t_0 x");
        assert_eq!(word.chain(LetterKind::Y), &[Link::bare(0), Link::new(1, 1)]);
        assert_eq!(word.chain(LetterKind::T), &[Link::new(2, 2), Link::bare(0)]);
        assert_eq!(word.central(), 1);
        assert_eq!(word.to_string(), "y x y' z^2 x^2 t_2 t x");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            GeneralWord::parse("t y", Surface::Pants),
            Err(WordError::TypeOrder { earlier: 't', later: 'y' })
        ));
        assert!(matches!(
            GeneralWord::parse("y z", Surface::Annulus),
            Err(WordError::Alphabet { letter: 'z', .. })
        ));
        assert!(matches!(GeneralWord::parse("y", Surface::Disk), Err(WordError::Alphabet { .. })));
        assert!(matches!(GeneralWord::parse("y_", Surface::Pants), Err(WordError::Syntax { .. })));
        assert!(matches!(GeneralWord::parse("x^0", Surface::Pants), Err(WordError::Syntax { .. })));
        assert!(matches!(GeneralWord::parse("q", Surface::Pants), Err(WordError::Syntax { .. })));
        assert!(matches!(GeneralWord::parse("  ", Surface::Pants), Err(WordError::Syntax { .. })));
    }

    #[test]
    fn printing() {
        assert_eq!(GeneralWord::parse("x^3", Surface::Disk).unwrap().central(), 3);
        assert_eq!(w("y x y'").to_string(), "y x y'");
        assert_eq!(GeneralWord::empty().to_string(), "1");
        assert_eq!(w("1"), GeneralWord::empty());
        assert_eq!(w("t_2 t x").to_string(), "t_2 t x");
        assert_eq!(w("y_-3").to_string(), "y_-3");
        assert_eq!(w("yy'x").to_string(), "y y' x");
    }

    #[test]
    fn basis_predicates() {
        assert!(is_basis_word(&w("y y y' x x"), Surface::Annulus));
        assert!(!is_basis_word(&w("y' y"), Surface::Annulus));
        assert!(!is_basis_word(&w("y z t x"), Surface::Pants));
        assert!(is_basis_word(&w("y z t"), Surface::Pants));
        assert!(!is_basis_word(&w("y z t' x^3"), Surface::Pants));
        assert!(is_basis_word(&w("z t' x^3"), Surface::Pants));
        assert!(!is_basis_word(&w("y z z' t x^2"), Surface::Pants));
        assert!(is_basis_word(&w("y y' x"), Surface::Pants));
        assert!(!is_basis_word(&w("y' z'"), Surface::Pants));
        assert!(!is_basis_word(&w("x y"), Surface::Annulus));
        assert!(is_basis_word(&w("x^5"), Surface::Disk));
        assert!(!is_basis_word(&w("y"), Surface::Disk));
    }

    #[test]
    fn element_module_ops() {
        let x = SkeinElement::from_word(w("x"));
        let y = SkeinElement::term(LaurentPoly::a_pow(2), w("y"));
        let e = x.add(&y);
        assert!(e.add(&e.scale(&LaurentPoly::constant(-1))).is_zero());
        assert_eq!(e.scale(&LaurentPoly::one()), e);
        let scaled = e.scale(&LaurentPoly::a_pow(-2));
        assert_eq!(scaled.coeff(&w("y")), LaurentPoly::one());
        assert_eq!(scaled.coeff(&w("x")), LaurentPoly::a_pow(-2));
        assert_eq!(scaled.to_string(), "A^-2 * x + y");
    }
}
