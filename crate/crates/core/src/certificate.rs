//! Replayable reduction certificates and their verifier.
//!
//! A certificate is a sequence of rewrite steps on canonical classes. Replay
//! starts from the state `{input: 1}`; each step removes the whole current
//! coefficient of its parent class and distributes it over the children.
//! Every step is regenerated from the parent's canonical representative and
//! the recorded location, never from strategy code.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::canon::{canonicalize, digest_degree, digest_shape, from_digest, Digest, Sign};
use crate::diagram::{Diagram, Slot};
use crate::error::{CertificateError, ParseError};
use crate::lincomb::{format_rational, parse_rational, rat, LinearCombination, Rational};
use crate::reduce::{slide_terms, SlideBlocks};
use crate::skeleton::Skeleton;
use crate::stu::RelationSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    StuExpand,
    SlideJoin,
    CanonicalZero,
    OracleSolved,
}

impl StepKind {
    pub fn token(self) -> &'static str {
        match self {
            StepKind::StuExpand => "STU-EXPAND",
            StepKind::SlideJoin => "SLIDE-JOIN",
            StepKind::CanonicalZero => "CANONICAL-ZERO",
            StepKind::OracleSolved => "ORACLE-SOLVED",
        }
    }
}

impl FromStr for StepKind {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "STU-EXPAND" => Ok(StepKind::StuExpand),
            "SLIDE-JOIN" => Ok(StepKind::SlideJoin),
            "CANONICAL-ZERO" => Ok(StepKind::CanonicalZero),
            "ORACLE-SOLVED" => Ok(StepKind::OracleSolved),
            _ => Err(()),
        }
    }
}

/// Where a step acts on its parent's canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    /// 1-based leg index in skeleton order: `l3`.
    Leg(usize),
    /// Two adjacent leg blocks on a component: `c1:start:k1:k2`.
    Slide {
        component: String,
        start: usize,
        k1: usize,
        k2: usize,
    },
    None,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Leg(i) => write!(f, "l{i}"),
            Location::Slide {
                component,
                start,
                k1,
                k2,
            } => write!(f, "{component}:{start}:{k1}:{k2}"),
            Location::None => f.write_str("-"),
        }
    }
}

impl FromStr for Location {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "-" {
            return Ok(Location::None);
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [c, a, b, d] => {
                let num = |x: &str| x.parse::<usize>().map_err(|_| format!("bad location `{s}`"));
                Ok(Location::Slide {
                    component: c.to_string(),
                    start: num(a)?,
                    k1: num(b)?,
                    k2: num(d)?,
                })
            }
            [leg] => leg
                .strip_prefix('l')
                .and_then(|n| n.parse().ok())
                .filter(|&n: &usize| n >= 1)
                .map(Location::Leg)
                .ok_or_else(|| format!("bad location `{s}`")),
            _ => Err(format!("bad location `{s}`")),
        }
    }
}

/// A signed child: `+digest` or `-digest`. Multiplicities are written by
/// repetition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Child {
    pub negative: bool,
    pub digest: Digest,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub index: usize,
    pub kind: StepKind,
    pub parent: Digest,
    pub at: Location,
    pub children: Vec<Child>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub input: Digest,
    pub steps: Vec<Step>,
    pub result: LinearCombination,
}

fn slot_of_index(d: &Diagram, index: usize) -> Option<Slot> {
    d.slots().nth(index)
}

/// Global 0-based leg index of a slot.
pub fn index_of_slot(d: &Diagram, slot: Slot) -> usize {
    d.legs()[..slot.component].iter().map(Vec::len).sum::<usize>() + slot.position
}

fn push_child(out: &mut Vec<Child>, d: &Diagram, negative: bool) {
    let c = canonicalize(d).form;
    match c.sign {
        Sign::Zero => {}
        s => out.push(Child {
            negative: negative ^ (s == Sign::Minus),
            digest: c.digest,
        }),
    }
}

/// Children of a step, recomputed from the parent's canonical representative.
pub fn regenerate(
    skeleton: &Arc<Skeleton>,
    kind: StepKind,
    parent: &Digest,
    at: &Location,
) -> Result<Vec<Child>, String> {
    let rep = from_digest(skeleton.clone(), parent).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    match (kind, at) {
        (StepKind::StuExpand, Location::Leg(i)) => {
            let slot = slot_of_index(&rep, i - 1).ok_or_else(|| format!("no leg l{i}"))?;
            let (t, u) = rep.stu_expand(slot).map_err(|e| e.to_string())?;
            push_child(&mut out, &t, false);
            push_child(&mut out, &u, true);
        }
        (
            StepKind::SlideJoin,
            Location::Slide {
                component,
                start,
                k1,
                k2,
            },
        ) => {
            let c = skeleton
                .index_of(component)
                .ok_or_else(|| format!("unknown component `{component}`"))?;
            let (swapped, joins) = slide_terms(
                &rep,
                SlideBlocks {
                    component: c,
                    start: *start,
                    k1: *k1,
                    k2: *k2,
                },
            )
            .map_err(|e| e.to_string())?;
            push_child(&mut out, &swapped, false);
            for j in &joins {
                push_child(&mut out, j, false);
            }
        }
        (StepKind::CanonicalZero | StepKind::OracleSolved, Location::None) => {}
        (k, l) => return Err(format!("location `{l}` does not fit step kind {}", k.token())),
    }
    Ok(out)
}

/// Applies steps to the state `{input: 1}` and returns the final state.
pub fn replay(input: &Digest, steps: &[Step]) -> LinearCombination {
    let mut state = LinearCombination::single(input.clone(), rat(1));
    for s in steps {
        let Some(mass) = state.remove(&s.parent) else { continue };
        for c in &s.children {
            let coef = if c.negative { -mass.clone() } else { mass.clone() };
            state.add_term(c.digest.clone(), coef);
        }
    }
    state
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "INPUT {}", self.input)?;
        for s in &self.steps {
            write!(
                f,
                "STEP {} {} parent={} at={} ->",
                s.index,
                s.kind.token(),
                s.parent,
                s.at
            )?;
            for (i, c) in s.children.iter().enumerate() {
                let sep = if i == 0 { " " } else { "," };
                write!(f, "{sep}{}{}", if c.negative { '-' } else { '+' }, c.digest)?;
            }
            writeln!(f)?;
        }
        write!(f, "RESULT")?;
        for (i, (d, c)) in self.result.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{d}:{}", format_rational(c))?;
        }
        writeln!(f)
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn digest_token(line: usize, s: &str) -> Result<Digest, ParseError> {
    Digest::parse(s).map_err(|source| ParseError::Invalid { line, source })
}

fn parse_step(line: usize, text: &str) -> Result<Step, ParseError> {
    let (head, tail) = text.split_once("->").ok_or_else(|| syntax(line, "missing `->`"))?;
    let words: Vec<&str> = head.split_whitespace().collect();
    let [_, index, kind, parent, at] = words.as_slice() else {
        return Err(syntax(line, "expected `STEP <k> <KIND> parent=<digest> at=<token> ->`"));
    };
    let index = index
        .parse()
        .map_err(|_| syntax(line, format!("bad step number `{index}`")))?;
    let kind = kind.parse::<StepKind>().map_err(|_| ParseError::UnknownStepKind {
        line,
        token: kind.to_string(),
    })?;
    let parent = parent
        .strip_prefix("parent=")
        .ok_or_else(|| syntax(line, "expected `parent=`"))?;
    let parent = digest_token(line, parent)?;
    let at = at.strip_prefix("at=").ok_or_else(|| syntax(line, "expected `at=`"))?;
    let at = at.parse::<Location>().map_err(|m| syntax(line, m))?;
    let mut children = Vec::new();
    let tail = tail.trim();
    if !tail.is_empty() {
        for tok in tail.split(',') {
            let tok = tok.trim();
            let (negative, rest) = match tok.as_bytes().first() {
                Some(b'+') => (false, &tok[1..]),
                Some(b'-') => (true, &tok[1..]),
                _ => return Err(syntax(line, format!("child `{tok}` needs a sign"))),
            };
            children.push(Child {
                negative,
                digest: digest_token(line, rest)?,
            });
        }
    }
    Ok(Step {
        index,
        kind,
        parent,
        at,
        children,
    })
}

fn parse_result(line: usize, text: &str) -> Result<LinearCombination, ParseError> {
    let mut lc = LinearCombination::new();
    let text = text.trim();
    if text.is_empty() {
        return Ok(lc);
    }
    for part in text.split(',') {
        let (d, c) = part
            .trim()
            .rsplit_once(':')
            .ok_or_else(|| syntax(line, format!("bad term `{part}`")))?;
        let c = parse_rational(c).ok_or_else(|| syntax(line, format!("bad coefficient `{c}`")))?;
        lc.add_term(digest_token(line, d)?, c);
    }
    Ok(lc)
}

impl FromStr for Certificate {
    type Err = ParseError;
    fn from_str(src: &str) -> Result<Self, ParseError> {
        let mut lines = src
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty());
        let (l1, first) = lines.next().ok_or(ParseError::Truncated { line: 1 })?;
        let input = first
            .strip_prefix("INPUT ")
            .ok_or_else(|| syntax(l1, "expected `INPUT <digest>`"))?;
        let input = digest_token(l1, input.trim())?;
        let mut steps = Vec::new();
        let mut last = l1;
        for (n, text) in lines {
            last = n;
            if text.starts_with("STEP") {
                steps.push(parse_step(n, text)?);
            } else if let Some(rest) = text.strip_prefix("RESULT") {
                if !(rest.is_empty() || rest.starts_with(' ')) {
                    return Err(syntax(n, "expected `RESULT`"));
                }
                let result = parse_result(n, rest)?;
                return Ok(Certificate { input, steps, result });
            } else {
                return Err(syntax(n, format!("unexpected line `{text}`")));
            }
        }
        Err(ParseError::Truncated { line: last + 1 })
    }
}

/// Outcome of verification: `ok` plus human-readable diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub ok: bool,
    pub failing_step: Option<usize>,
    pub diagnostics: Vec<String>,
}

impl Verification {
    fn fail(step: Option<usize>, message: String) -> Self {
        Verification {
            ok: false,
            failing_step: step,
            diagnostics: vec![message],
        }
    }
}

fn check_digest(sys: &RelationSystem, d: &Digest) -> Result<(), CertificateError> {
    let shape = digest_shape(d).map_err(|_| CertificateError::UnknownDigest(d.to_string()))?;
    let kinds: Vec<_> = shape.iter().map(|(k, _)| *k).collect();
    if kinds != sys.skeleton().kinds() {
        return Err(CertificateError::SkeletonMismatch(d.to_string()));
    }
    let n = digest_degree(d).map_err(|_| CertificateError::UnknownDigest(d.to_string()))?;
    if n != sys.degree() {
        return Err(CertificateError::DegreeMismatch {
            expected: sys.degree(),
            found: n,
        });
    }
    from_digest(sys.skeleton().clone(), d).map_err(|_| CertificateError::UnknownDigest(d.to_string()))?;
    Ok(())
}

/// Regenerates every step, replays the certificate, and checks that
/// `input - result` lies in the relation span.
pub fn verify_certificate(cert: &Certificate, sys: &RelationSystem) -> Result<Verification, CertificateError> {
    check_digest(sys, &cert.input)?;
    for s in &cert.steps {
        check_digest(sys, &s.parent)?;
        for c in &s.children {
            check_digest(sys, &c.digest)?;
        }
    }
    for d in cert.result.digests() {
        check_digest(sys, d)?;
    }
    let skeleton = sys.skeleton();
    let mut oracle = false;
    for (i, s) in cert.steps.iter().enumerate() {
        let k = i + 1;
        if s.index != k {
            return Ok(Verification::fail(Some(k), format!("step {k}: numbered {}", s.index)));
        }
        if oracle {
            return Ok(Verification::fail(
                Some(k),
                format!("step {k}: follows a terminal ORACLE-SOLVED step"),
            ));
        }
        match s.kind {
            StepKind::OracleSolved => oracle = true,
            StepKind::CanonicalZero => {
                let rep = from_digest(skeleton.clone(), &s.parent).expect("checked");
                if canonicalize(&rep).form.sign != Sign::Zero {
                    return Ok(Verification::fail(
                        Some(k),
                        format!("step {k}: parent is not a zero class"),
                    ));
                }
            }
            _ => {}
        }
        match regenerate(skeleton, s.kind, &s.parent, &s.at) {
            Ok(children) if children == s.children => {}
            Ok(_) => {
                return Ok(Verification::fail(
                    Some(k),
                    format!("step {k}: children differ from the regenerated {}", s.kind.token()),
                ))
            }
            Err(m) => return Ok(Verification::fail(Some(k), format!("step {k}: {m}"))),
        }
    }
    if !oracle && replay(&cert.input, &cert.steps) != cert.result {
        return Ok(Verification::fail(None, "replayed steps do not give RESULT".into()));
    }
    for d in cert.result.digests() {
        let rep = from_digest(skeleton.clone(), d).expect("checked");
        if !rep.is_tree_diagram() {
            return Ok(Verification::fail(
                None,
                format!("RESULT term {d} is not a tree diagram"),
            ));
        }
    }
    let mut diff = LinearCombination::of_diagram(&from_digest(skeleton.clone(), &cert.input).expect("checked"), rat(1));
    for (d, c) in cert.result.iter() {
        diff.add_diagram(&from_digest(skeleton.clone(), d).expect("checked"), &-c.clone());
    }
    match sys.in_span(&diff) {
        Ok(Some(_)) => Ok(Verification {
            ok: true,
            failing_step: None,
            diagnostics: Vec::new(),
        }),
        Ok(None) => Ok(Verification::fail(
            None,
            "input - RESULT is not in the relation span".into(),
        )),
        Err(e) => Ok(Verification::fail(None, e.to_string())),
    }
}

/// Sum of a step's children with the parent coefficient `coef`.
pub fn children_combination(step: &Step, coef: &Rational) -> LinearCombination {
    step.children
        .iter()
        .map(|c| (c.digest.clone(), if c.negative { -coef.clone() } else { coef.clone() }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn location_tokens_round_trip() {
        for s in ["l1", "l12", "c1:0:2:1", "-"] {
            assert_eq!(s.parse::<Location>().unwrap().to_string(), s);
        }
        assert!("l0".parse::<Location>().is_err());
        assert!("x:1".parse::<Location>().is_err());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = "INPUT i2_1\nSTEP 1 STU-EXPAND parent=i2_1 at=l1 -> +i2_1\n"
            .parse::<Certificate>()
            .unwrap_err();
        assert_eq!(err, ParseError::Truncated { line: 3 });
        let err = "INPUT i2_1\nSTEP 1 MAGIC parent=i2_1 at=l1 ->\nRESULT\n"
            .parse::<Certificate>()
            .unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownStepKind {
                line: 2,
                token: "MAGIC".into()
            }
        );
        let err = "INPUT i2_1\nSTEP 1 STU-EXPAND parent=i2_1 at=l1 -> i2_1\nRESULT\n"
            .parse::<Certificate>()
            .unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }));
    }

    #[test]
    fn empty_result_round_trips() {
        let c = Certificate {
            input: Digest::parse("i2_1").unwrap(),
            steps: Vec::new(),
            result: LinearCombination::new(),
        };
        let text = c.to_string();
        assert_eq!(text, "INPUT i2_1\nRESULT\n");
        assert_eq!(text.parse::<Certificate>().unwrap(), c);
    }

    #[test]
    fn replay_moves_whole_mass() {
        let a = Digest::parse("i2_1").unwrap();
        let b = Digest::parse("i4_23").unwrap();
        let step = Step {
            index: 1,
            kind: StepKind::StuExpand,
            parent: a.clone(),
            at: Location::Leg(1),
            children: vec![
                Child {
                    negative: false,
                    digest: b.clone(),
                },
                Child {
                    negative: false,
                    digest: b.clone(),
                },
            ],
        };
        let out = replay(&a, std::slice::from_ref(&step));
        assert_eq!(out, LinearCombination::single(b.clone(), rat(2)));
        assert_eq!(
            children_combination(&step, &rat(3)),
            LinearCombination::single(b, rat(6))
        );
    }
}
