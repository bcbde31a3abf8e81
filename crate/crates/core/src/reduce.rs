//! Rewriting a diagram into tree diagrams.
//!
//! At each step a vertex-adjacent leg in a non-tree component is expanded by
//! one STU instance `D = T - U`. When the leg's vertex lies on a cycle both
//! terms keep the component connected and are reduced independently. When
//! the vertex is a cut vertex the component splits into two pieces whose new
//! legs sit side by side; `T` is reduced, the same sequence of moves is
//! replayed on `U`, and every tree term of `T` differs from its mirror in `U`
//! only by the order of the two adjacent leg blocks. That difference
//! telescopes into joined tree diagrams, one per adjacent transposition.
//!
//! Legs carry persistent ids through the recursion so that the two blocks can
//! be located in every tree term, and so the replay on `U` can follow `T`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::canon::{canonicalize, from_digest, Sign};
use crate::certificate::{regenerate, replay, Certificate, Location, Step, StepKind};
use crate::diagram::{Diagram, InternalComponent, Slot};
use crate::error::{AlgebraError, ReductionError};
use crate::lincomb::{rat, LinearCombination};
use crate::skeleton::{ComponentKind, Skeleton};
use crate::stu::{express_in_tree_basis, generate_relations};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    CycleFirst,
    NearestCycle,
    FirstLeg,
}

impl FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cycle-first" => Ok(Strategy::CycleFirst),
            "nearest-cycle" => Ok(Strategy::NearestCycle),
            "first-leg" => Ok(Strategy::FirstLeg),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::CycleFirst => "cycle-first",
            Strategy::NearestCycle => "nearest-cycle",
            Strategy::FirstLeg => "first-leg",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fallback {
    Error,
    #[default]
    LinearSolve,
}

impl FromStr for Fallback {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "error" => Ok(Fallback::Error),
            "linear-solve" => Ok(Fallback::LinearSolve),
            other => Err(format!("unknown fallback `{other}`")),
        }
    }
}

pub const DEFAULT_MAX_STEPS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionOptions {
    pub strategy: Strategy,
    pub max_steps: usize,
    pub fallback: Fallback,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        ReductionOptions {
            strategy: Strategy::CycleFirst,
            max_steps: DEFAULT_MAX_STEPS,
            fallback: Fallback::LinearSolve,
        }
    }
}

/// Two adjacent leg blocks on one component: `k1` legs from `start`, then
/// `k2` legs. Positions wrap on circles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlideBlocks {
    pub component: usize,
    pub start: usize,
    pub k1: usize,
    pub k2: usize,
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum CaseResult {
    /// The vertex lies on a cycle: both terms keep its component connected.
    OnCycle { t: Diagram, u: Diagram },
    /// The vertex is a cut vertex. `first` and `second` are the two pieces
    /// restricted to the skeleton, and `blocks` records where their new legs
    /// sit in `t`.
    CutVertex {
        t: Diagram,
        u: Diagram,
        first: Diagram,
        second: Diagram,
        blocks: SlideBlocks,
    },
}

impl CaseResult {
    pub fn terms(&self) -> (&Diagram, &Diagram) {
        match self {
            CaseResult::OnCycle { t, u } | CaseResult::CutVertex { t, u, .. } => (t, u),
        }
    }
}

fn component_of_slot(comps: &[InternalComponent], slot: Slot) -> usize {
    comps
        .iter()
        .position(|c| c.legs.contains(&slot))
        .expect("every leg lies in a component")
}

/// Vertex-adjacent legs in non-tree components, or in any component when the
/// diagram is already a tree diagram.
fn candidates(d: &Diagram) -> Vec<Slot> {
    let comps = d.internal_components();
    let adjacent: Vec<Slot> = d.slots().filter(|&s| d.leg_vertex(s).is_some()).collect();
    let in_cycles: Vec<Slot> = adjacent
        .iter()
        .copied()
        .filter(|&s| !comps[component_of_slot(&comps, s)].is_tree())
        .collect();
    if in_cycles.is_empty() {
        adjacent
    } else {
        in_cycles
    }
}

fn nearest(d: &Diagram, cands: &[Slot]) -> Slot {
    let dist = d.distance_to_cycle();
    *cands
        .iter()
        .min_by_key(|&&s| (dist[d.leg_vertex(s).unwrap()].unwrap_or(usize::MAX), s))
        .expect("candidates are nonempty")
}

pub fn choose_leg(d: &Diagram, strategy: Strategy) -> Result<Slot, ReductionError> {
    if d.has_legless_component() {
        return Err(ReductionError::LeglessComponent);
    }
    let cands = candidates(d);
    if cands.is_empty() {
        return Err(ReductionError::NoEligibleLeg);
    }
    Ok(match strategy {
        Strategy::FirstLeg => cands[0],
        Strategy::NearestCycle => nearest(d, &cands),
        Strategy::CycleFirst => {
            let on = d.vertices_on_cycles();
            cands
                .iter()
                .copied()
                .find(|&s| on[d.leg_vertex(s).unwrap()])
                .unwrap_or_else(|| nearest(d, &cands))
        }
    })
}

/// One STU expansion at `slot`, classified by whether the vertex is a cut vertex.
pub fn expand_and_classify(d: &Diagram, slot: Slot) -> Result<CaseResult, AlgebraError> {
    let (t, u) = d.stu_expand(slot)?;
    let v = d.leg_vertex(slot).expect("expansion succeeded");
    if d.vertices_on_cycles()[v] {
        return Ok(CaseResult::OnCycle { t, u });
    }
    let comps = t.internal_components();
    let first_slot = slot;
    let second_slot = Slot::new(slot.component, slot.position + 1);
    let a = &comps[component_of_slot(&comps, first_slot)];
    let b = &comps[component_of_slot(&comps, second_slot)];
    let (first, second) = (t.restrict(a), t.restrict(b));
    let blocks = SlideBlocks {
        component: slot.component,
        start: slot.position,
        k1: 1,
        k2: 1,
    };
    Ok(CaseResult::CutVertex {
        t,
        u,
        first,
        second,
        blocks,
    })
}

/// Moves the second block in front of the first by adjacent transpositions.
/// Returns the slid diagram and the joined diagram of every transposition, so
/// that `d = slid + sum(joins)`.
pub fn slide_terms(d: &Diagram, blocks: SlideBlocks) -> Result<(Diagram, Vec<Diagram>), AlgebraError> {
    let SlideBlocks {
        component,
        start,
        k1,
        k2,
    } = blocks;
    let m = d
        .legs()
        .get(component)
        .map(Vec::len)
        .ok_or_else(|| AlgebraError::NotSlidePair("no such component".into()))?;
    if k1 + k2 > m || (start >= m && m > 0) {
        return Err(AlgebraError::NotSlidePair(format!(
            "blocks {k1}+{k2} at {start} exceed {m} legs"
        )));
    }
    let (mut cur, start) = if start + k1 + k2 > m {
        if d.skeleton().kind(component) != ComponentKind::Circle {
            return Err(AlgebraError::NotSlidePair(
                "blocks run past the end of an interval".into(),
            ));
        }
        (d.rotated(component, start), 0)
    } else {
        (d.clone(), start)
    };
    let mut joins = Vec::with_capacity(k1 * k2);
    for j in 0..k2 {
        for q in (start + j..start + k1 + j).rev() {
            joins.push(cur.join_adjacent(component, q).expect("adjacent legs"));
            cur = cur.swap_adjacent(component, q).expect("adjacent legs");
        }
    }
    Ok((cur, joins))
}

/// `t - u` as a sum of joined diagrams, given that `u` is `t` with the two
/// recorded leg blocks exchanged.
pub fn slide_expansion(t: &Diagram, u: &Diagram, blocks: SlideBlocks) -> Result<LinearCombination, AlgebraError> {
    let (slid, joins) = slide_terms(t, blocks)?;
    if crate::canon::is_isomorphic(&slid, u) != Some(Sign::Plus) && canonicalize(u).form.sign != Sign::Zero {
        return Err(AlgebraError::NotSlidePair(
            "second diagram is not the slid first diagram".into(),
        ));
    }
    let mut out = LinearCombination::new();
    for j in &joins {
        out.add_diagram(j, &rat(1));
    }
    Ok(out)
}

const ROOT: u32 = u32::MAX;

/// A diagram whose legs carry persistent ids with ancestry.
#[derive(Clone, Debug)]
struct Raw {
    d: Diagram,
    ids: Vec<Vec<u32>>,
    parent: Vec<u32>,
}

impl Raw {
    fn new(d: Diagram) -> Self {
        let mut next = 0;
        let ids = d
            .legs()
            .iter()
            .map(|row| {
                let r: Vec<u32> = (next..next + row.len() as u32).collect();
                next += row.len() as u32;
                r
            })
            .collect();
        Raw {
            d,
            ids,
            parent: vec![ROOT; next as usize],
        }
    }

    fn slot_of(&self, id: u32) -> Slot {
        for (c, row) in self.ids.iter().enumerate() {
            if let Some(p) = row.iter().position(|&x| x == id) {
                return Slot::new(c, p);
            }
        }
        panic!("leg id {id} not present");
    }

    fn fresh(&mut self, parent: u32) -> u32 {
        self.parent.push(parent);
        (self.parent.len() - 1) as u32
    }

    /// STU terms with ids; the first new id follows `e1`, the second `e2`.
    fn expand(&self, id: u32) -> (Raw, Raw, u32, u32) {
        let slot = self.slot_of(id);
        let (t, u) = self.d.stu_expand(slot).expect("chosen leg is vertex-adjacent");
        let mut base = self.clone();
        let a = base.fresh(id);
        let b = base.fresh(id);
        let mut rt = Raw { d: t, ..base.clone() };
        rt.ids[slot.component].splice(slot.position..=slot.position, [a, b]);
        let mut ru = Raw { d: u, ..base };
        ru.ids[slot.component].splice(slot.position..=slot.position, [b, a]);
        (rt, ru, a, b)
    }

    fn descends(&self, mut x: u32, anc: u32) -> bool {
        loop {
            if x == anc {
                return true;
            }
            if x == ROOT {
                return false;
            }
            x = self.parent[x as usize];
        }
    }

    fn block(&self, anc: u32) -> (usize, usize, usize) {
        for (c, row) in self.ids.iter().enumerate() {
            let pos: Vec<usize> = (0..row.len()).filter(|&p| self.descends(row[p], anc)).collect();
            if let (Some(&s), Some(&e)) = (pos.first(), pos.last()) {
                assert_eq!(e - s + 1, pos.len(), "descendant legs stay contiguous");
                return (c, s, pos.len());
            }
        }
        panic!("no descendants of leg {anc}");
    }

    fn slide(&self, first: u32, second: u32, join_parent: u32) -> (SlideBlocks, Vec<Raw>) {
        let (c, s, k1) = self.block(first);
        let (c2, s2, k2) = self.block(second);
        assert!(c == c2 && s2 == s + k1, "blocks are adjacent");
        let blocks = SlideBlocks {
            component: c,
            start: s,
            k1,
            k2,
        };
        let mut cur = self.clone();
        let mut joins = Vec::new();
        for j in 0..k2 {
            for q in (s + j..s + k1 + j).rev() {
                let mut joined = Raw {
                    d: cur.d.join_adjacent(c, q).expect("adjacent legs"),
                    ..cur.clone()
                };
                let id = joined.fresh(join_parent);
                joined.ids[c].splice(q..=q + 1, [id]);
                joins.push(joined);
                cur.d = cur.d.swap_adjacent(c, q).expect("adjacent legs");
                cur.ids[c].swap(q, q + 1);
            }
        }
        (blocks, joins)
    }
}

/// The moves made on one diagram, replayable on its mirror.
#[derive(Clone, Debug)]
enum Trace {
    Leaf,
    Expand { leg: u32, t: Box<Trace>, u: Box<Trace> },
    Split { leg: u32, t: Box<Trace> },
}

struct Exhausted;

struct Engine {
    skeleton: Arc<Skeleton>,
    opts: ReductionOptions,
    used: usize,
    steps: Vec<Step>,
}

impl Engine {
    fn tick(&mut self) -> Result<(), Exhausted> {
        self.used += 1;
        if self.used > self.opts.max_steps {
            Err(Exhausted)
        } else {
            Ok(())
        }
    }

    fn log(&mut self, kind: StepKind, d: &Diagram, at: impl FnOnce(&[usize]) -> Location) {
        let c = canonicalize(d);
        if c.form.sign == Sign::Zero {
            return;
        }
        let at = at(&c.mapping);
        let children = regenerate(&self.skeleton, kind, &c.form.digest, &at).expect("steps regenerate");
        self.steps.push(Step {
            index: self.steps.len() + 1,
            kind,
            parent: c.form.digest,
            at,
            children,
        });
    }

    fn choose(&self, raw: &Raw) -> Option<u32> {
        if raw.d.is_tree_diagram() {
            return None;
        }
        let slot = choose_leg(&raw.d, self.opts.strategy).expect("non-tree component has a vertex leg");
        Some(raw.ids[slot.component][slot.position])
    }

    /// Reduces `raw`, following `guide` when given. Returns the moves made and
    /// the tree terms reached (coefficients live in the step log).
    fn run(&mut self, raw: Raw, guide: Option<&Trace>) -> Result<(Trace, Vec<Raw>), Exhausted> {
        let leg = match guide {
            Some(Trace::Leaf) => None,
            Some(Trace::Expand { leg, .. } | Trace::Split { leg, .. }) => Some(*leg),
            None => self.choose(&raw),
        };
        let Some(leg) = leg else {
            return Ok((Trace::Leaf, vec![raw]));
        };
        self.tick()?;
        let slot = raw.slot_of(leg);
        let h = raw.d.leg_at(slot).unwrap();
        self.log(StepKind::StuExpand, &raw.d, |map| Location::Leg(map[h] + 1));
        let v = raw.d.leg_vertex(slot).expect("vertex-adjacent");
        let on_cycle = raw.d.vertices_on_cycles()[v];
        let (t, u, a, b) = raw.expand(leg);
        if on_cycle {
            let (tg, ug) = match guide {
                Some(Trace::Expand { t, u, .. }) => (Some(&**t), Some(&**u)),
                _ => (None, None),
            };
            let (tt, mut leaves) = self.run(t, tg)?;
            let (ut, more) = self.run(u, ug)?;
            leaves.extend(more);
            return Ok((
                Trace::Expand {
                    leg,
                    t: Box::new(tt),
                    u: Box::new(ut),
                },
                leaves,
            ));
        }
        let tg = match guide {
            Some(Trace::Split { t, .. }) => Some(&**t),
            _ => None,
        };
        let (tt, tree_terms) = self.run(t, tg)?;
        self.run(u, Some(&tt))?;
        let mut out = Vec::new();
        for tau in tree_terms {
            self.tick()?;
            let (blocks, joins) = tau.slide(a, b, leg);
            let comp_id = self.skeleton.components()[blocks.component].id.clone();
            let d = &tau.d;
            let first = d.leg_at(Slot::new(blocks.component, blocks.start)).unwrap();
            self.log(StepKind::SlideJoin, d, |map| {
                let offset: usize = d.legs()[..blocks.component].iter().map(Vec::len).sum();
                Location::Slide {
                    component: comp_id,
                    start: map[first] - offset,
                    k1: blocks.k1,
                    k2: blocks.k2,
                }
            });
            out.extend(joins);
        }
        Ok((Trace::Split { leg, t: Box::new(tt) }, out))
    }
}

/// Result of a reduction: a tree combination and the certificate proving it.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub result: LinearCombination,
    pub certificate: Certificate,
}

pub fn reduce_to_trees(d: &Diagram, opts: &ReductionOptions) -> Result<Reduction, ReductionError> {
    if d.has_legless_component() {
        return Err(ReductionError::LeglessComponent);
    }
    let canon = canonicalize(d).form;
    let skeleton = d.skeleton_arc().clone();
    if canon.sign == Sign::Zero {
        let step = Step {
            index: 1,
            kind: StepKind::CanonicalZero,
            parent: canon.digest.clone(),
            at: Location::None,
            children: Vec::new(),
        };
        let certificate = Certificate {
            input: canon.digest,
            steps: vec![step],
            result: LinearCombination::new(),
        };
        return Ok(Reduction {
            result: LinearCombination::new(),
            certificate,
        });
    }
    let sign = rat(canon.sign.as_i64());
    // work on the canonical representative so the log is stated relative to it
    let rep = from_digest(skeleton.clone(), &canon.digest).expect("own digest decodes");
    let mut engine = Engine {
        skeleton: skeleton.clone(),
        opts: *opts,
        used: 0,
        steps: Vec::new(),
    };
    match engine.run(Raw::new(rep.clone()), None) {
        Ok(_) => {
            let result = replay(&canon.digest, &engine.steps);
            let certificate = Certificate {
                input: canon.digest,
                steps: engine.steps,
                result,
            };
            Ok(Reduction {
                result: certificate.result.scaled(&sign),
                certificate,
            })
        }
        Err(Exhausted) => match opts.fallback {
            Fallback::Error => Err(ReductionError::StepBudgetExhausted(opts.max_steps)),
            Fallback::LinearSolve => {
                let sys = generate_relations(skeleton, d.degree())?;
                let result = express_in_tree_basis(&rep, &sys)?.ok_or(ReductionError::NoTreeExpression)?;
                let step = Step {
                    index: 1,
                    kind: StepKind::OracleSolved,
                    parent: canon.digest.clone(),
                    at: Location::None,
                    children: Vec::new(),
                };
                let certificate = Certificate {
                    input: canon.digest,
                    steps: vec![step],
                    result,
                };
                Ok(Reduction {
                    result: certificate.result.scaled(&sign),
                    certificate,
                })
            }
        },
    }
}

/// Element-wise reduction; failures stay in their own slot.
pub fn reduce_all(inputs: &[Diagram], opts: &ReductionOptions) -> Vec<Result<Reduction, ReductionError>> {
    inputs.par_iter().map(|d| reduce_to_trees(d, opts)).collect()
}
