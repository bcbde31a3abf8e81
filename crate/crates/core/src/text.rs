//! Line-oriented text format for skeletons, diagrams and claspers.
//!
//! ```text
//! # comment
//! skeleton S { interval c1; circle c2; }
//! diagram D on S { legs: l1@c1, l2@c1, l3@c2; vertices: v1(h1,h2,h3); edges: l1-h1, l2-h2, l3-h3; }
//! clasper C on S { leaf L1 @ c1; leaf L2 @ c1; edge L1-L2; }
//! ```
//!
//! Leg order within a component is the textual order of its legs.

use std::sync::Arc;

use crate::canon::canonicalize;
use crate::clasper::{Clasper, ClasperPart};
use crate::diagram::{build_diagram, Diagram, DiagramSpec};
use crate::error::ParseError;
use crate::skeleton::{Component, ComponentKind, Skeleton};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Punct(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("");
        let mut chars = text.char_indices().peekable();
        while let Some(&(start, c)) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
            } else if "{}();:,@-".contains(c) {
                out.push(Token {
                    tok: Tok::Punct(c),
                    line,
                });
                chars.next();
            } else if c.is_alphanumeric() || c == '_' || c == '\'' || c == '.' {
                let mut end = start;
                while let Some(&(j, d)) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' || d == '\'' || d == '.' {
                        end = j + d.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token {
                    tok: Tok::Ident(text[start..end].to_string()),
                    line,
                });
            } else {
                return Err(ParseError::Syntax {
                    line,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    last_line: usize,
}

impl Parser {
    fn line(&self) -> usize {
        self.toks.get(self.pos).map_or(self.last_line, |t| t.line)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Result<Tok, ParseError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or(ParseError::Truncated { line: self.last_line })?;
        self.pos += 1;
        Ok(t.tok)
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        let line = self.line();
        match self.next()? {
            Tok::Ident(s) => Ok(s),
            Tok::Punct(c) => Err(ParseError::Syntax {
                line,
                message: format!("expected a name, found `{c}`"),
            }),
        }
    }

    fn punct(&mut self, want: char) -> Result<(), ParseError> {
        let line = self.line();
        match self.next()? {
            Tok::Punct(c) if c == want => Ok(()),
            Tok::Punct(c) => Err(ParseError::Syntax {
                line,
                message: format!("expected `{want}`, found `{c}`"),
            }),
            Tok::Ident(s) => Err(ParseError::Syntax {
                line,
                message: format!("expected `{want}`, found `{s}`"),
            }),
        }
    }

    fn eat(&mut self, want: char) -> bool {
        if self.peek() == Some(&Tok::Punct(want)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, want: &str) -> Result<(), ParseError> {
        let line = self.line();
        let s = self.ident()?;
        if s == want {
            Ok(())
        } else {
            Err(ParseError::Syntax {
                line,
                message: format!("expected `{want}`, found `{s}`"),
            })
        }
    }

    /// Comma-separated items up to a terminating `;`.
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
        let mut out = Vec::new();
        if self.eat(';') {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(';') {
                return Ok(out);
            }
            self.punct(',')?;
        }
    }
}

/// Everything declared in one text document, in declaration order.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub skeletons: Vec<Arc<Skeleton>>,
    pub diagrams: Vec<(String, Diagram)>,
    pub claspers: Vec<(String, Clasper)>,
}

impl Document {
    pub fn skeleton(&self, name: &str) -> Option<&Arc<Skeleton>> {
        self.skeletons.iter().find(|s| s.name() == name)
    }
}

pub fn parse_document(src: &str) -> Result<Document, ParseError> {
    let toks = tokenize(src)?;
    let last_line = src.lines().count().max(1);
    let mut p = Parser {
        toks,
        pos: 0,
        last_line,
    };
    let mut doc = Document::default();
    while p.peek().is_some() {
        let line = p.line();
        let kw = p.ident()?;
        match kw.as_str() {
            "skeleton" => {
                let sk = parse_skeleton_body(&mut p)?;
                doc.skeletons.push(Arc::new(sk));
            }
            "diagram" => {
                let name = p.ident()?;
                p.keyword("on")?;
                let sline = p.line();
                let sname = p.ident()?;
                let sk = doc.skeleton(&sname).cloned().ok_or_else(|| ParseError::Syntax {
                    line: sline,
                    message: format!("unknown skeleton `{sname}`"),
                })?;
                let (spec, start) = parse_diagram_body(&mut p)?;
                let d = build_diagram(sk, &spec).map_err(|source| ParseError::Invalid { line: start, source })?;
                doc.diagrams.push((name, d));
            }
            "clasper" => {
                let name = p.ident()?;
                p.keyword("on")?;
                let sline = p.line();
                let sname = p.ident()?;
                let sk = doc.skeleton(&sname).cloned().ok_or_else(|| ParseError::Syntax {
                    line: sline,
                    message: format!("unknown skeleton `{sname}`"),
                })?;
                let parts = parse_clasper_body(&mut p)?;
                doc.claspers.push((name.clone(), Clasper::new(name, sk, parts)));
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    message: format!("unknown declaration `{other}`"),
                });
            }
        }
    }
    Ok(doc)
}

fn parse_skeleton_body(p: &mut Parser) -> Result<Skeleton, ParseError> {
    let name = p.ident()?;
    let line = p.line();
    p.punct('{')?;
    let mut comps = Vec::new();
    while !p.eat('}') {
        let kline = p.line();
        let kind = match p.ident()?.as_str() {
            "interval" => ComponentKind::Interval,
            "circle" => ComponentKind::Circle,
            other => {
                return Err(ParseError::Syntax {
                    line: kline,
                    message: format!("unknown component kind `{other}`"),
                })
            }
        };
        let id = p.ident()?;
        p.punct(';')?;
        comps.push(Component { id, kind });
    }
    Skeleton::new(name, comps).map_err(|source| ParseError::Invalid { line, source })
}

fn parse_diagram_body(p: &mut Parser) -> Result<(DiagramSpec, usize), ParseError> {
    let start = p.line();
    p.punct('{')?;
    let mut spec = DiagramSpec::default();
    let mut counts: Vec<(String, usize)> = Vec::new();
    while !p.eat('}') {
        let line = p.line();
        let section = p.ident()?;
        p.punct(':')?;
        match section.as_str() {
            "legs" => {
                let legs = p.list(|p| {
                    let h = p.ident()?;
                    p.punct('@')?;
                    let c = p.ident()?;
                    Ok((h, c))
                })?;
                for (h, c) in legs {
                    let slot = match counts.iter_mut().find(|(k, _)| *k == c) {
                        Some((_, n)) => {
                            *n += 1;
                            *n - 1
                        }
                        None => {
                            counts.push((c.clone(), 1));
                            0
                        }
                    };
                    spec.legs.push((h, c, slot));
                }
            }
            "vertices" => {
                let vs = p.list(|p| {
                    let v = p.ident()?;
                    p.punct('(')?;
                    let mut hs = Vec::new();
                    if !p.eat(')') {
                        loop {
                            hs.push(p.ident()?);
                            if p.eat(')') {
                                break;
                            }
                            p.punct(',')?;
                        }
                    }
                    Ok((v, hs))
                })?;
                spec.vertices.extend(vs);
            }
            "edges" => {
                let es = p.list(|p| {
                    let a = p.ident()?;
                    p.punct('-')?;
                    let b = p.ident()?;
                    Ok((a, b))
                })?;
                spec.edges.extend(es);
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    message: format!("unknown section `{other}`"),
                })
            }
        }
    }
    Ok((spec, start))
}

fn parse_clasper_body(p: &mut Parser) -> Result<Vec<ClasperPart>, ParseError> {
    p.punct('{')?;
    let mut parts = Vec::new();
    while !p.eat('}') {
        let line = p.line();
        let kw = p.ident()?;
        let part = match kw.as_str() {
            "leaf" => {
                let name = p.ident()?;
                let mut slots = Vec::new();
                if p.eat('@') {
                    loop {
                        slots.push(p.ident()?);
                        if !p.eat(',') {
                            break;
                        }
                    }
                }
                ClasperPart::DiskLeaf { name, slots }
            }
            "node" => ClasperPart::Node { name: p.ident()? },
            "edge" => {
                let a = p.ident()?;
                p.punct('-')?;
                let b = p.ident()?;
                ClasperPart::Edge { a, b }
            }
            "annulus" | "box" => {
                let name = p.ident()?;
                // skip any attachment data
                while p.peek().is_some_and(|t| *t != Tok::Punct(';')) {
                    p.next()?;
                }
                ClasperPart::Other { kind: kw.clone(), name }
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    message: format!("unknown clasper part `{other}`"),
                })
            }
        };
        p.punct(';')?;
        parts.push(part);
    }
    Ok(parts)
}

/// Parses a document that must contain at least one diagram and returns the first.
pub fn parse_diagram(src: &str) -> Result<Diagram, ParseError> {
    parse_document(src)?
        .diagrams
        .into_iter()
        .next()
        .map(|(_, d)| d)
        .ok_or(ParseError::Missing("diagram"))
}

/// Single-line serialization with canonical token names (`l1..`, `v1..`,
/// `h1..`) in digest order. The diagram's own vertex orientations are kept,
/// so the result parses back to a diagram isomorphic to `d` with sign +1.
pub fn serialize_diagram(d: &Diagram, name: &str) -> String {
    let canon = canonicalize(d);
    let map = &canon.mapping;
    let u = d.leg_count();
    let n = d.half_edge_count();
    let tok = |c: usize| {
        if c < u {
            format!("l{}", c + 1)
        } else {
            format!("h{}", c - u + 1)
        }
    };
    let mut rev = vec![0; n];
    for (h, &c) in map.iter().enumerate() {
        rev[c] = h;
    }
    let mut legs = Vec::new();
    let mut next = 0;
    for (ci, row) in d.legs().iter().enumerate() {
        for _ in 0..row.len() {
            legs.push(format!("{}@{}", tok(next), d.skeleton().components()[ci].id));
            next += 1;
        }
    }
    let t = d.vertex_count();
    let mut verts = vec![String::new(); t];
    for tri in d.vertices() {
        let mut c = [map[tri[0]], map[tri[1]], map[tri[2]]];
        let m = (0..3).min_by_key(|&i| c[i]).unwrap();
        c.rotate_left(m);
        let k = (c[0] - u) / 3;
        verts[k] = format!("v{}({},{},{})", k + 1, tok(c[0]), tok(c[1]), tok(c[2]));
    }
    let mut edges = Vec::new();
    for a in 0..n {
        let b = map[d.partner(rev[a])];
        if a < b {
            edges.push(format!("{}-{}", tok(a), tok(b)));
        }
    }
    let mut s = format!("diagram {} on {} {{", name, d.skeleton().name());
    if !legs.is_empty() {
        s.push_str(&format!(" legs: {};", legs.join(", ")));
    }
    if !verts.is_empty() {
        s.push_str(&format!(" vertices: {};", verts.join(", ")));
    }
    s.push_str(&format!(" edges: {}; }}", edges.join(", ")));
    s
}
