//! Line-based diagram files.
//!
//! ```text
//! surface pants
//! component
//! -3/2 -1/2
//! -1/2 -1/2
//! -1 1/2
//! crossing 0 0 1 2 under=A
//! dot 0 1 1/3 dir=+
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write;
use std::str::FromStr;

use super::{ArrowDiagram, CrossingSpec, DiagramError, Dot, Point, SegRef, Under, Q};
use crate::words::Surface;

fn err(line: usize, msg: impl Into<String>) -> DiagramError {
    DiagramError::Parse { line, msg: msg.into() }
}

fn rational(tok: &str, line: usize) -> Result<Q, DiagramError> {
    Q::from_str(tok).map_err(|_| err(line, format!("not a rational number: `{tok}`")))
}

fn index(tok: &str, line: usize) -> Result<usize, DiagramError> {
    tok.parse().map_err(|_| err(line, format!("not an index: `{tok}`")))
}

pub fn read_diagram(text: &str) -> Result<ArrowDiagram, DiagramError> {
    let mut surface = None;
    let mut components: Vec<Vec<Point>> = Vec::new();
    let mut in_component = false;
    let mut crossings = Vec::new();
    let mut dots = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "surface" => {
                if surface.is_some() {
                    return Err(err(line, "surface declared twice"));
                }
                let [_, name] = toks[..] else {
                    return Err(err(line, "expected `surface disk|annulus|pants`"));
                };
                surface = Some(Surface::from_str(name).map_err(|e| err(line, e.to_string()))?);
            }
            "component" => {
                if toks.len() != 1 {
                    return Err(err(line, "`component` takes no arguments"));
                }
                components.push(Vec::new());
                in_component = true;
            }
            "crossing" => {
                in_component = false;
                let [_, ca, sa, cb, sb, under] = toks[..] else {
                    return Err(err(line, "expected `crossing cA sA cB sB under=A|B`"));
                };
                let under = match under {
                    "under=A" => Under::A,
                    "under=B" => Under::B,
                    other => return Err(err(line, format!("expected under=A or under=B, got `{other}`"))),
                };
                crossings.push(CrossingSpec {
                    a: SegRef::new(index(ca, line)?, index(sa, line)?),
                    b: SegRef::new(index(cb, line)?, index(sb, line)?),
                    under,
                });
            }
            "dot" => {
                in_component = false;
                let [_, c, s, t, dir] = toks[..] else {
                    return Err(err(line, "expected `dot c s t dir=+|-`"));
                };
                let along = match dir {
                    "dir=+" => true,
                    "dir=-" => false,
                    other => return Err(err(line, format!("expected dir=+ or dir=-, got `{other}`"))),
                };
                dots.push(Dot {
                    seg: SegRef::new(index(c, line)?, index(s, line)?),
                    t: rational(t, line)?,
                    along,
                });
            }
            _ => {
                if !in_component {
                    return Err(err(line, format!("unexpected `{content}`")));
                }
                let [x, y] = toks[..] else {
                    return Err(err(line, "expected a point `x y`"));
                };
                let p = Point::new(rational(x, line)?, rational(y, line)?);
                components.last_mut().expect("inside a component").push(p);
            }
        }
    }
    let surface = surface.ok_or_else(|| err(1, "missing `surface` line"))?;
    if components.is_empty() {
        return Err(err(text.lines().count().max(1), "no components"));
    }
    Ok(ArrowDiagram { surface, components, crossings, dots })
}

pub fn write_diagram(d: &ArrowDiagram) -> String {
    let mut out = String::new();
    writeln!(out, "surface {}", d.surface).unwrap();
    for comp in &d.components {
        out.push_str("component\n");
        for p in comp {
            writeln!(out, "{} {}", p.x, p.y).unwrap();
        }
    }
    for c in &d.crossings {
        let under = match c.under {
            Under::A => "A",
            Under::B => "B",
        };
        writeln!(out, "crossing {} {} {} {} under={under}", c.a.comp, c.a.seg, c.b.comp, c.b.seg).unwrap();
    }
    for dot in &d.dots {
        let dir = if dot.along { '+' } else { '-' };
        writeln!(out, "dot {} {} {} dir={dir}", dot.seg.comp, dot.seg.seg, dot.t).unwrap();
    }
    out
}
