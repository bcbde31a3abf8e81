//! Strict graph claspers: disk-leaves, nodes and edges attached to a skeleton.
//!
//! A simple clasper projects to a diagram with one leg per disk-leaf and one
//! trivalent vertex per node. Reducing a clasper reduces its shadow and
//! keeps a ledger of every block slide, with the degrees on either side.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::canon::from_digest;
use crate::certificate::{Certificate, Location, StepKind};
use crate::diagram::{build_diagram, Diagram, DiagramSpec, Slot};
use crate::error::{ClasperError, ReductionError};
use crate::lincomb::LinearCombination;
use crate::reduce::{reduce_to_trees, ReductionOptions};
use crate::skeleton::{ComponentKind, Skeleton};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClasperPart {
    /// A disk-leaf meeting the skeleton at the listed components, in order.
    DiskLeaf {
        name: String,
        slots: Vec<String>,
    },
    Node {
        name: String,
    },
    Edge {
        a: String,
        b: String,
    },
    /// Any part a strict clasper may not contain (annulus leaves, boxes).
    Other {
        kind: String,
        name: String,
    },
}

#[derive(Clone, Debug)]
pub struct Clasper {
    pub name: String,
    pub skeleton: Arc<Skeleton>,
    pub parts: Vec<ClasperPart>,
}

impl Clasper {
    pub fn new(name: impl Into<String>, skeleton: Arc<Skeleton>, parts: Vec<ClasperPart>) -> Self {
        Clasper {
            name: name.into(),
            skeleton,
            parts,
        }
    }

    fn leaves(&self) -> impl Iterator<Item = (&String, &Vec<String>)> {
        self.parts.iter().filter_map(|p| match p {
            ClasperPart::DiskLeaf { name, slots } => Some((name, slots)),
            _ => None,
        })
    }

    fn nodes(&self) -> impl Iterator<Item = &String> {
        self.parts.iter().filter_map(|p| match p {
            ClasperPart::Node { name } => Some(name),
            _ => None,
        })
    }

    fn edges(&self) -> impl Iterator<Item = (&String, &String)> {
        self.parts.iter().filter_map(|p| match p {
            ClasperPart::Edge { a, b } => Some((a, b)),
            _ => None,
        })
    }

    /// Half the number of disk-leaves plus nodes.
    pub fn degree(&self) -> usize {
        (self.leaves().count() + self.nodes().count()) / 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PartKind {
    Leaf,
    Node,
}

pub fn validate_clasper(c: &Clasper) -> Result<(), ClasperError> {
    if c.parts.is_empty() {
        return Err(ClasperError::Empty);
    }
    if let Some(ClasperPart::Other { name, .. }) = c.parts.iter().find(|p| matches!(p, ClasperPart::Other { .. })) {
        return Err(ClasperError::NotStrict(name.clone()));
    }
    let mut kinds: HashMap<&str, PartKind> = HashMap::new();
    for (name, slots) in c.leaves() {
        if kinds.insert(name, PartKind::Leaf).is_some() {
            return Err(ClasperError::DuplicatePart(name.clone()));
        }
        if let Some(bad) = slots.iter().find(|s| c.skeleton.index_of(s).is_none()) {
            return Err(ClasperError::UnknownComponent(bad.clone()));
        }
    }
    for name in c.nodes() {
        if kinds.insert(name, PartKind::Node).is_some() {
            return Err(ClasperError::DuplicatePart(name.clone()));
        }
    }
    let count = kinds.len();
    if count == 0 {
        return Err(ClasperError::Empty);
    }
    if count % 2 == 1 {
        return Err(ClasperError::NonIntegerDegree(count));
    }
    let mut ends: HashMap<&str, usize> = kinds.keys().map(|&k| (k, 0)).collect();
    let mut adj: HashMap<&str, Vec<&str>> = HashMap::new();
    for (a, b) in c.edges() {
        for x in [a, b] {
            *ends
                .get_mut(x.as_str())
                .ok_or_else(|| ClasperError::UnknownPart(x.clone()))? += 1;
        }
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut names: Vec<&str> = kinds.keys().copied().collect();
    names.sort();
    for &name in &names {
        let expected = if kinds[name] == PartKind::Leaf { 1 } else { 3 };
        if ends[name] != expected {
            return Err(ClasperError::BadValence(name.to_string(), ends[name], expected));
        }
    }
    // every connected piece needs a disk-leaf
    let mut seen: HashMap<&str, bool> = HashMap::new();
    for &start in &names {
        if seen.contains_key(start) {
            continue;
        }
        let mut stack = vec![start];
        let mut has_leaf = false;
        seen.insert(start, true);
        while let Some(x) = stack.pop() {
            has_leaf |= kinds[x] == PartKind::Leaf;
            for &y in adj.get(x).map(Vec::as_slice).unwrap_or(&[]) {
                if seen.insert(y, true).is_none() {
                    stack.push(y);
                }
            }
        }
        if !has_leaf {
            return Err(ClasperError::LeglessComponent);
        }
    }
    Ok(())
}

/// True when every disk-leaf meets the skeleton exactly once.
pub fn is_simple(c: &Clasper) -> bool {
    c.leaves().all(|(_, slots)| slots.len() == 1)
}

/// The diagram of a valid simple clasper.
pub fn shadow(c: &Clasper) -> Result<Diagram, ClasperError> {
    validate_clasper(c)?;
    if let Some((name, slots)) = c.leaves().find(|(_, s)| s.len() != 1) {
        return Err(ClasperError::NotSimple(name.clone(), slots.len()));
    }
    let mut spec = DiagramSpec::default();
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for (name, slots) in c.leaves() {
        let comp = slots[0].as_str();
        let n = counts.entry(comp).or_insert(0);
        spec.legs.push((name.clone(), comp.to_string(), *n));
        *n += 1;
    }
    let is_node: HashMap<&str, bool> = c.nodes().map(|n| (n.as_str(), true)).collect();
    let mut corners: BTreeMap<&str, Vec<String>> = c.nodes().map(|n| (n.as_str(), Vec::new())).collect();
    for (i, (a, b)) in c.edges().enumerate() {
        let mut end = |x: &String, side: usize| -> String {
            if is_node.contains_key(x.as_str()) {
                let tok = format!("{x}.{i}.{side}");
                corners.get_mut(x.as_str()).unwrap().push(tok.clone());
                tok
            } else {
                x.clone()
            }
        };
        let ta = end(a, 0);
        let tb = end(b, 1);
        spec.edges.push((ta, tb));
    }
    for n in c.nodes() {
        spec.vertices.push((n.clone(), corners.remove(n.as_str()).unwrap()));
    }
    Ok(build_diagram(c.skeleton.clone(), &spec).expect("validated clasper has a well-formed shadow"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LedgerKind {
    /// Both blocks together touch every internal component.
    Slide,
    /// Other components are carried along untouched.
    ZipAbsorption,
}

impl LedgerKind {
    pub fn token(self) -> &'static str {
        match self {
            LedgerKind::Slide => "slide",
            LedgerKind::ZipAbsorption => "zip-absorption",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerEntry {
    pub step: usize,
    pub kind: LedgerKind,
    pub n1: usize,
    pub n2: usize,
}

impl LedgerEntry {
    pub fn bound(&self) -> usize {
        self.n1 + self.n2
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ledger {
    pub entries: Vec<LedgerEntry>,
}

impl Ledger {
    /// First entry whose bound falls below `degree`.
    pub fn violation(&self, degree: usize) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| e.bound() < degree)
    }
}

/// Recomputes the ledger from the slide steps of a certificate.
pub fn ledger_from_certificate(cert: &Certificate, skeleton: &Arc<Skeleton>) -> Ledger {
    let mut entries = Vec::new();
    for s in cert.steps.iter().filter(|s| s.kind == StepKind::SlideJoin) {
        let Location::Slide {
            component,
            start,
            k1,
            k2,
        } = &s.at
        else {
            continue;
        };
        let Some(c) = skeleton.index_of(component) else {
            continue;
        };
        let Ok(d) = from_digest(skeleton.clone(), &s.parent) else {
            continue;
        };
        let m = d.legs()[c].len();
        let wrap = |p: usize| {
            if skeleton.kind(c) == ComponentKind::Circle {
                p % m
            } else {
                p
            }
        };
        let first: Vec<Slot> = (0..*k1).map(|i| Slot::new(c, wrap(start + i))).collect();
        let second: Vec<Slot> = (0..*k2).map(|i| Slot::new(c, wrap(start + k1 + i))).collect();
        let comps = d.internal_components();
        let touches =
            |comp: &crate::diagram::InternalComponent, block: &[Slot]| block.iter().any(|s| comp.legs.contains(s));
        let mut n1 = 0;
        let mut n2 = 0;
        let mut spectators = 0;
        for comp in &comps {
            if touches(comp, &first) {
                n1 += comp.degree();
            } else if touches(comp, &second) {
                n2 += comp.degree();
            } else {
                spectators += comp.degree();
            }
        }
        let entry = if spectators == 0 {
            LedgerEntry {
                step: s.index,
                kind: LedgerKind::Slide,
                n1,
                n2,
            }
        } else {
            LedgerEntry {
                step: s.index,
                kind: LedgerKind::ZipAbsorption,
                n1: n1 + n2,
                n2: spectators,
            }
        };
        entries.push(entry);
    }
    Ledger { entries }
}

#[derive(Clone, Debug)]
pub struct ClasperReduction {
    pub result: LinearCombination,
    pub certificate: Certificate,
    pub ledger: Ledger,
}

/// Reduces the shadow of a simple clasper and checks every ledger bound.
pub fn reduce_clasper(c: &Clasper, opts: &ReductionOptions) -> Result<ClasperReduction, ClasperError> {
    let d = shadow(c)?;
    let r = reduce_to_trees(&d, opts).map_err(ClasperError::Reduction)?;
    let ledger = ledger_from_certificate(&r.certificate, &c.skeleton);
    let n = c.degree();
    if let Some(e) = ledger.violation(n) {
        return Err(ClasperError::Reduction(ReductionError::LedgerViolation {
            n1: e.n1,
            n2: e.n2,
            degree: n,
        }));
    }
    Ok(ClasperReduction {
        result: r.result,
        certificate: r.certificate,
        ledger,
    })
}
