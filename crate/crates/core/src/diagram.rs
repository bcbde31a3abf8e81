//! Unitrivalent diagrams on a skeleton.
//!
//! Half-edges are numbered densely. Every half-edge is owned either by a
//! leg (a slot on a skeleton component) or by a corner of a trivalent
//! vertex, and `partner` is the fixed-point-free involution pairing them
//! into edges. A vertex triple is read as a cyclic order.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{AlgebraError, DiagramError};
use crate::skeleton::{ComponentKind, Skeleton};

pub type HalfEdge = usize;

/// A leg position: component index and slot index within it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub component: usize,
    pub position: usize,
}

impl Slot {
    pub fn new(component: usize, position: usize) -> Self {
        Slot { component, position }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Owner {
    Leg(Slot),
    Corner { vertex: usize, corner: usize },
}

#[derive(Clone, Debug)]
pub struct Diagram {
    skeleton: Arc<Skeleton>,
    legs: Vec<Vec<HalfEdge>>,
    vertices: Vec<[HalfEdge; 3]>,
    partner: Vec<HalfEdge>,
    owner: Vec<Owner>,
}

/// One connected piece of the internal graph. A chord (an edge joining two
/// legs) forms its own component with no vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InternalComponent {
    pub vertices: Vec<usize>,
    pub legs: Vec<Slot>,
    pub internal_edges: usize,
}

impl InternalComponent {
    pub fn degree(&self) -> usize {
        (self.legs.len() + self.vertices.len()) / 2
    }

    pub fn betti(&self) -> usize {
        if self.vertices.is_empty() {
            0
        } else {
            self.internal_edges + 1 - self.vertices.len()
        }
    }

    pub fn is_tree(&self) -> bool {
        self.betti() == 0
    }
}

/// Token-level description of a diagram, as read from text.
#[derive(Clone, Debug, Default)]
pub struct DiagramSpec {
    /// (half-edge token, component id, slot index)
    pub legs: Vec<(String, String, usize)>,
    /// (vertex token, half-edge tokens in cyclic order)
    pub vertices: Vec<(String, Vec<String>)>,
    pub edges: Vec<(String, String)>,
}

/// Validates a token-level description and builds the diagram.
pub fn build_diagram(skeleton: Arc<Skeleton>, spec: &DiagramSpec) -> Result<Diagram, DiagramError> {
    let mut index: HashMap<&str, HalfEdge> = HashMap::new();
    let mut names: Vec<&str> = Vec::new();

    // legs grouped per component, checked for gaps and collisions
    let mut per_comp: Vec<Vec<Option<&str>>> = vec![Vec::new(); skeleton.len()];
    for (tok, comp, slot) in &spec.legs {
        let c = skeleton
            .index_of(comp)
            .ok_or_else(|| DiagramError::UnknownComponent(comp.clone()))?;
        let row = &mut per_comp[c];
        if row.len() <= *slot {
            row.resize(slot + 1, None);
        }
        if row[*slot].is_some() {
            return Err(DiagramError::DuplicateSlot(comp.clone(), *slot));
        }
        row[*slot] = Some(tok.as_str());
    }
    let mut legs = Vec::with_capacity(skeleton.len());
    for (c, row) in per_comp.iter().enumerate() {
        let mut ids = Vec::with_capacity(row.len());
        for (pos, tok) in row.iter().enumerate() {
            let tok = tok.ok_or_else(|| DiagramError::EmptySlot(skeleton.components()[c].id.clone(), pos))?;
            if index.insert(tok, names.len()).is_some() {
                return Err(DiagramError::DuplicateHalfEdge(tok.to_string()));
            }
            ids.push(names.len());
            names.push(tok);
        }
        legs.push(ids);
    }
    let mut vertices = Vec::with_capacity(spec.vertices.len());
    for (vtok, hs) in &spec.vertices {
        if hs.len() != 3 {
            return Err(DiagramError::NonTrivalentVertex(vtok.clone(), hs.len()));
        }
        let mut triple = [0; 3];
        for (i, h) in hs.iter().enumerate() {
            if index.insert(h.as_str(), names.len()).is_some() {
                return Err(DiagramError::DuplicateHalfEdge(h.clone()));
            }
            triple[i] = names.len();
            names.push(h.as_str());
        }
        vertices.push(triple);
    }
    let mut partner = vec![usize::MAX; names.len()];
    for (a, b) in &spec.edges {
        let ia = *index
            .get(a.as_str())
            .ok_or_else(|| DiagramError::DanglingHalfEdge(a.clone()))?;
        let ib = *index
            .get(b.as_str())
            .ok_or_else(|| DiagramError::DanglingHalfEdge(b.clone()))?;
        if ia == ib {
            return Err(DiagramError::DuplicateHalfEdge(a.clone()));
        }
        for (i, tok) in [(ia, a), (ib, b)] {
            if partner[i] != usize::MAX {
                return Err(DiagramError::DuplicateHalfEdge(tok.clone()));
            }
        }
        partner[ia] = ib;
        partner[ib] = ia;
    }
    if let Some(h) = partner.iter().position(|&p| p == usize::MAX) {
        return Err(DiagramError::UnmatchedHalfEdge(names[h].to_string()));
    }
    Diagram::new(skeleton, legs, vertices, partner)
}

impl Diagram {
    /// Builds a diagram from numbered parts, checking every structural invariant.
    pub fn new(
        skeleton: Arc<Skeleton>,
        legs: Vec<Vec<HalfEdge>>,
        vertices: Vec<[HalfEdge; 3]>,
        partner: Vec<HalfEdge>,
    ) -> Result<Self, DiagramError> {
        if legs.len() != skeleton.len() {
            return Err(DiagramError::UnknownComponent(format!(
                "expected {} components, got {}",
                skeleton.len(),
                legs.len()
            )));
        }
        let n = partner.len();
        let mut owner: Vec<Option<Owner>> = vec![None; n];
        let claim = |h: HalfEdge, o: Owner, owner: &mut Vec<Option<Owner>>| {
            if h >= n {
                return Err(DiagramError::DanglingHalfEdge(format!("#{h}")));
            }
            if owner[h].is_some() {
                return Err(DiagramError::DuplicateHalfEdge(format!("#{h}")));
            }
            owner[h] = Some(o);
            Ok(())
        };
        for (c, row) in legs.iter().enumerate() {
            for (p, &h) in row.iter().enumerate() {
                claim(h, Owner::Leg(Slot::new(c, p)), &mut owner)?;
            }
        }
        for (v, tri) in vertices.iter().enumerate() {
            for (k, &h) in tri.iter().enumerate() {
                claim(h, Owner::Corner { vertex: v, corner: k }, &mut owner)?;
            }
        }
        let owner: Vec<Owner> = owner
            .into_iter()
            .enumerate()
            .map(|(h, o)| o.ok_or_else(|| DiagramError::DanglingHalfEdge(format!("#{h}"))))
            .collect::<Result<_, _>>()?;
        for (h, &p) in partner.iter().enumerate() {
            if p >= n || p == h || partner[p] != h {
                return Err(DiagramError::UnmatchedHalfEdge(format!("#{h}")));
            }
        }
        if n == 0 {
            return Err(DiagramError::EmptyDiagram);
        }
        Ok(Diagram {
            skeleton,
            legs,
            vertices,
            partner,
            owner,
        })
    }

    /// Renumbers half-edges densely (legs first, then vertex corners).
    /// `partner_of` is given in the caller's numbering.
    pub(crate) fn assemble(
        skeleton: Arc<Skeleton>,
        legs: Vec<Vec<HalfEdge>>,
        vertices: Vec<[HalfEdge; 3]>,
        partner_of: impl Fn(HalfEdge) -> HalfEdge,
    ) -> Diagram {
        let mut map: HashMap<HalfEdge, HalfEdge> = HashMap::new();
        let mut order = Vec::new();
        for &h in legs.iter().flatten().chain(vertices.iter().flatten()) {
            map.insert(h, order.len());
            order.push(h);
        }
        let partner = order.iter().map(|&h| map[&partner_of(h)]).collect();
        let legs = legs.iter().map(|r| r.iter().map(|h| map[h]).collect()).collect();
        let vertices = vertices.iter().map(|t| [map[&t[0]], map[&t[1]], map[&t[2]]]).collect();
        Diagram::new(skeleton, legs, vertices, partner).expect("assembled diagram is well formed")
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn skeleton_arc(&self) -> &Arc<Skeleton> {
        &self.skeleton
    }

    pub fn legs(&self) -> &[Vec<HalfEdge>] {
        &self.legs
    }

    pub fn vertices(&self) -> &[[HalfEdge; 3]] {
        &self.vertices
    }

    pub fn partner(&self, h: HalfEdge) -> HalfEdge {
        self.partner[h]
    }

    pub fn partners(&self) -> &[HalfEdge] {
        &self.partner
    }

    pub fn owner(&self, h: HalfEdge) -> Owner {
        self.owner[h]
    }

    pub fn half_edge_count(&self) -> usize {
        self.partner.len()
    }

    pub fn leg_count(&self) -> usize {
        self.legs.iter().map(Vec::len).sum()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Half the number of univalent plus trivalent vertices.
    pub fn degree(&self) -> usize {
        (self.leg_count() + self.vertex_count()) / 2
    }

    pub fn edge_count(&self) -> usize {
        self.partner.len() / 2
    }

    /// Leg slots in skeleton order.
    pub fn slots(&self) -> impl Iterator<Item = Slot> + '_ {
        self.legs
            .iter()
            .enumerate()
            .flat_map(|(c, row)| (0..row.len()).map(move |p| Slot::new(c, p)))
    }

    pub fn leg_at(&self, slot: Slot) -> Option<HalfEdge> {
        self.legs.get(slot.component)?.get(slot.position).copied()
    }

    /// Internal vertex the leg at `slot` is attached to, if any.
    pub fn leg_vertex(&self, slot: Slot) -> Option<usize> {
        let h = self.leg_at(slot)?;
        match self.owner[self.partner[h]] {
            Owner::Corner { vertex, .. } => Some(vertex),
            Owner::Leg(_) => None,
        }
    }

    /// Slot positions adjacent to `position` on a component; circles wrap.
    pub fn next_position(&self, component: usize, position: usize) -> Option<usize> {
        let m = self.legs[component].len();
        match self.skeleton.kind(component) {
            ComponentKind::Interval => (position + 1 < m).then_some(position + 1),
            ComponentKind::Circle => (m >= 2).then_some((position + 1) % m),
        }
    }

    fn vertex_neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.vertices[v]
            .iter()
            .filter_map(move |&h| match self.owner[self.partner[h]] {
                Owner::Corner { vertex, .. } => Some(vertex),
                Owner::Leg(_) => None,
            })
    }

    /// Connected components of the internal graph, ordered by their first leg
    /// slot (legless components last, by smallest vertex).
    pub fn internal_components(&self) -> Vec<InternalComponent> {
        let t = self.vertex_count();
        let mut comp_of = vec![usize::MAX; t];
        let mut comps: Vec<InternalComponent> = Vec::new();
        for start in 0..t {
            if comp_of[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut queue = VecDeque::from([start]);
            comp_of[start] = id;
            let mut verts = Vec::new();
            while let Some(v) = queue.pop_front() {
                verts.push(v);
                for w in self.vertex_neighbours(v) {
                    if comp_of[w] == usize::MAX {
                        comp_of[w] = id;
                        queue.push_back(w);
                    }
                }
            }
            verts.sort_unstable();
            comps.push(InternalComponent {
                vertices: verts,
                legs: Vec::new(),
                internal_edges: 0,
            });
        }
        for h in 0..self.partner.len() {
            let p = self.partner[h];
            if h < p {
                if let (Owner::Corner { vertex, .. }, Owner::Corner { .. }) = (self.owner[h], self.owner[p]) {
                    comps[comp_of[vertex]].internal_edges += 1;
                }
            }
        }
        let mut chords = Vec::new();
        for slot in self.slots() {
            let h = self.legs[slot.component][slot.position];
            match self.owner[self.partner[h]] {
                Owner::Corner { vertex, .. } => comps[comp_of[vertex]].legs.push(slot),
                Owner::Leg(other) => {
                    if slot < other {
                        chords.push(InternalComponent {
                            vertices: Vec::new(),
                            legs: vec![slot, other],
                            internal_edges: 0,
                        });
                    }
                }
            }
        }
        comps.extend(chords);
        comps.sort_by(|a, b| match (a.legs.first(), b.legs.first()) {
            (Some(x), Some(y)) => x.cmp(y),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => a.vertices.cmp(&b.vertices),
        });
        comps
    }

    /// Index into `internal_components()` for each vertex.
    pub fn vertex_component_map(&self, comps: &[InternalComponent]) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.vertex_count()];
        for (i, c) in comps.iter().enumerate() {
            for &v in &c.vertices {
                out[v] = i;
            }
        }
        out
    }

    /// First Betti number of the internal graph.
    pub fn betti(&self) -> usize {
        self.internal_components().iter().map(InternalComponent::betti).sum()
    }

    /// Every internal component is a tree (bare chords included).
    pub fn is_tree_diagram(&self) -> bool {
        self.internal_components().iter().all(InternalComponent::is_tree)
    }

    pub fn is_connected(&self) -> bool {
        self.internal_components().len() == 1
    }

    pub fn has_legless_component(&self) -> bool {
        self.internal_components().iter().any(|c| c.legs.is_empty())
    }

    /// For each vertex, whether it lies on a cycle of the internal graph.
    pub fn vertices_on_cycles(&self) -> Vec<bool> {
        let t = self.vertex_count();
        let mut on = vec![false; t];
        // internal edges as (half-edge, vertex, vertex)
        let mut edges = Vec::new();
        for h in 0..self.partner.len() {
            let p = self.partner[h];
            if let (Owner::Corner { vertex: a, .. }, Owner::Corner { vertex: b, .. }) = (self.owner[h], self.owner[p]) {
                if h < p {
                    edges.push((a, b));
                }
            }
        }
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a == b {
                on[a] = true;
                continue;
            }
            // edge i lies on a cycle iff a and b stay connected without it
            let mut seen = vec![false; t];
            let mut stack = vec![a];
            seen[a] = true;
            while let Some(x) = stack.pop() {
                for (j, &(p, q)) in edges.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    let y = if p == x {
                        q
                    } else if q == x {
                        p
                    } else {
                        continue;
                    };
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            if seen[b] {
                on[a] = true;
                on[b] = true;
            }
        }
        on
    }

    /// Breadth-first distance in the internal graph from each vertex to the
    /// nearest vertex lying on a cycle; `None` when its component is a tree.
    pub fn distance_to_cycle(&self) -> Vec<Option<usize>> {
        let on = self.vertices_on_cycles();
        let mut dist: Vec<Option<usize>> = on.iter().map(|&b| if b { Some(0) } else { None }).collect();
        let mut queue: VecDeque<usize> = (0..on.len()).filter(|&v| on[v]).collect();
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for w in self.vertex_neighbours(v) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// The diagram restricted to one internal component, on the same skeleton.
    pub fn restrict(&self, comp: &InternalComponent) -> Diagram {
        let legs: Vec<Vec<HalfEdge>> = self
            .legs
            .iter()
            .enumerate()
            .map(|(c, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(p, _)| comp.legs.contains(&Slot::new(c, *p)))
                    .map(|(_, &h)| h)
                    .collect()
            })
            .collect();
        let vertices = comp.vertices.iter().map(|&v| self.vertices[v]).collect();
        Diagram::assemble(self.skeleton.clone(), legs, vertices, |h| self.partner[h])
    }

    /// The two STU expansion terms at a vertex-adjacent leg. Writing the
    /// vertex's cyclic order starting from the leg edge as `(h, e1, e2)`, the
    /// first term puts new legs for `e1` then `e2` where the old leg was, the
    /// second puts `e2` then `e1`.
    pub fn stu_expand(&self, slot: Slot) -> Result<(Diagram, Diagram), AlgebraError> {
        let leg = self.leg_at(slot).ok_or(AlgebraError::NoSuchLeg {
            component: slot.component,
            position: slot.position,
        })?;
        let h = self.partner[leg];
        let (v, corner) = match self.owner[h] {
            Owner::Corner { vertex, corner } => (vertex, corner),
            Owner::Leg(_) => {
                return Err(AlgebraError::LegNotAdjacentToVertex {
                    component: slot.component,
                    position: slot.position,
                })
            }
        };
        let tri = self.vertices[v];
        let e1 = tri[(corner + 1) % 3];
        let e2 = tri[(corner + 2) % 3];
        let build = |first: HalfEdge, second: HalfEdge| {
            let mut legs = self.legs.clone();
            legs[slot.component].splice(slot.position..=slot.position, [first, second]);
            let vertices: Vec<[HalfEdge; 3]> = self
                .vertices
                .iter()
                .enumerate()
                .filter(|&(w, _)| w != v)
                .map(|(_, t)| *t)
                .collect();
            Diagram::assemble(self.skeleton.clone(), legs, vertices, |x| self.partner[x])
        };
        Ok((build(e1, e2), build(e2, e1)))
    }

    /// Joins the legs at `position` and the next slot into a new trivalent
    /// vertex carrying a single leg. The new vertex reads `(new, first, second)`,
    /// so expanding it again at the new leg gives back `self` as the first term.
    pub fn join_adjacent(&self, component: usize, position: usize) -> Option<Diagram> {
        let next = self.next_position(component, position)?;
        let a = self.legs[component][position];
        let b = self.legs[component][next];
        let n = self.partner.len();
        let (new_leg, new_corner) = (n, n + 1);
        let mut legs = self.legs.clone();
        if next > position {
            legs[component].splice(position..=next, [new_leg]);
        } else {
            // wrap-around on a circle: drop both ends, append the new leg
            let row = &mut legs[component];
            row.remove(position);
            row.remove(0);
            row.push(new_leg);
        }
        let mut vertices = self.vertices.clone();
        vertices.push([new_corner, a, b]);
        let partner = |x: HalfEdge| {
            if x == new_leg {
                new_corner
            } else if x == new_corner {
                new_leg
            } else {
                self.partner[x]
            }
        };
        Some(Diagram::assemble(self.skeleton.clone(), legs, vertices, partner))
    }

    /// Transposes the legs at `position` and the next slot.
    pub fn swap_adjacent(&self, component: usize, position: usize) -> Option<Diagram> {
        let next = self.next_position(component, position)?;
        let mut legs = self.legs.clone();
        legs[component].swap(position, next);
        Some(Diagram { legs, ..self.clone() }.reowned())
    }

    fn reowned(mut self) -> Self {
        for (c, row) in self.legs.iter().enumerate() {
            for (p, &h) in row.iter().enumerate() {
                self.owner[h] = Owner::Leg(Slot::new(c, p));
            }
        }
        self
    }

    /// Same diagram with a circle component's legs rotated left by `r`.
    pub fn rotated(&self, component: usize, r: usize) -> Diagram {
        assert_eq!(self.skeleton.kind(component), ComponentKind::Circle);
        let mut legs = self.legs.clone();
        let m = legs[component].len();
        if m > 0 {
            legs[component].rotate_left(r % m);
        }
        Diagram { legs, ..self.clone() }.reowned()
    }

    /// A randomly relabelled copy: half-edge numbering, vertex order, corner
    /// rotations and circle base points are shuffled. The copy is isomorphic
    /// to `self` with sign +1.
    pub fn shuffled<R: Rng + ?Sized>(&self, rng: &mut R) -> Diagram {
        let n = self.partner.len();
        let mut perm: Vec<HalfEdge> = (0..n).collect();
        perm.shuffle(rng);
        let mut legs: Vec<Vec<HalfEdge>> = self.legs.iter().map(|r| r.iter().map(|&h| perm[h]).collect()).collect();
        for (c, row) in legs.iter_mut().enumerate() {
            if self.skeleton.kind(c) == ComponentKind::Circle && !row.is_empty() {
                let r = rng.gen_range(0..row.len());
                row.rotate_left(r);
            }
        }
        let mut vertices: Vec<[HalfEdge; 3]> = self
            .vertices
            .iter()
            .map(|t| {
                let r = rng.gen_range(0..3);
                [perm[t[r]], perm[t[(r + 1) % 3]], perm[t[(r + 2) % 3]]]
            })
            .collect();
        vertices.shuffle(rng);
        let mut partner = vec![0; n];
        for h in 0..n {
            partner[perm[h]] = perm[self.partner[h]];
        }
        Diagram::new(self.skeleton.clone(), legs, vertices, partner).expect("relabelling preserves validity")
    }

    /// Same structure with one vertex's cyclic order reversed.
    pub fn with_reversed_vertex(&self, v: usize) -> Diagram {
        let mut vertices = self.vertices.clone();
        vertices[v].swap(1, 2);
        Diagram::new(self.skeleton.clone(), self.legs.clone(), vertices, self.partner.clone())
            .expect("reversal preserves validity")
    }

    /// Replaces the skeleton by another of the same shape (names may differ).
    pub fn with_skeleton(&self, skeleton: Arc<Skeleton>) -> Diagram {
        assert!(skeleton.same_shape(&self.skeleton));
        Diagram {
            skeleton,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn chord_counts() {
        let d = fixtures::chord();
        assert_eq!(
            (d.leg_count(), d.vertex_count(), d.degree(), d.edge_count(), d.betti()),
            (2, 0, 1, 1, 0)
        );
    }

    #[test]
    fn y_counts() {
        let d = fixtures::y_diagram();
        assert_eq!(
            (d.leg_count(), d.vertex_count(), d.degree(), d.edge_count(), d.betti()),
            (3, 1, 2, 3, 0)
        );
    }

    #[test]
    fn theta_counts() {
        let d = fixtures::theta();
        assert_eq!(
            (d.leg_count(), d.vertex_count(), d.degree(), d.edge_count(), d.betti()),
            (2, 2, 2, 4, 1)
        );
        assert_eq!(d.internal_components().len(), 1);
    }

    #[test]
    fn tadpole_betti_matches_union_find() {
        let d = fixtures::tadpole();
        // union-find over vertices, counting edges that close a cycle
        let t = d.vertex_count();
        let mut parent: Vec<usize> = (0..t).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut cycles = 0;
        for h in 0..d.half_edge_count() {
            let q = d.partner(h);
            if let (Owner::Corner { vertex: a, .. }, Owner::Corner { vertex: b, .. }) = (d.owner(h), d.owner(q)) {
                if h < q {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra == rb {
                        cycles += 1;
                    } else {
                        parent[ra] = rb;
                    }
                }
            }
        }
        assert_eq!(cycles, 1);
        assert_eq!(d.betti(), 1);
    }

    #[test]
    fn components_of_disjoint_chords_and_theta_plus_chord() {
        let two = fixtures::parse_one(
            "skeleton S { interval c1; } diagram D on S { legs: a@c1, b@c1, c@c1, d@c1; edges: a-c, b-d; }",
        );
        assert_eq!(two.internal_components().len(), 2);
        let tc = fixtures::parse_one(
            "skeleton S { interval c1; } diagram D on S { legs: a@c1, b@c1, c@c1, d@c1; vertices: x(x1,x2,x3), y(y1,y2,y3); edges: a-x1, x2-y2, x3-y3, y1-c, b-d; }",
        );
        let comps = tc.internal_components();
        let mut degrees: Vec<usize> = comps.iter().map(InternalComponent::degree).collect();
        degrees.sort();
        assert_eq!(degrees, vec![1, 2]);
    }

    #[test]
    fn build_errors() {
        let sk = Arc::new(Skeleton::interval());
        let mut spec = DiagramSpec {
            legs: vec![("a".into(), "c1".into(), 0), ("b".into(), "c1".into(), 1)],
            vertices: vec![],
            edges: vec![("a".into(), "z".into())],
        };
        assert_eq!(
            build_diagram(sk.clone(), &spec).unwrap_err(),
            DiagramError::DanglingHalfEdge("z".into())
        );
        spec.edges = vec![];
        assert_eq!(
            build_diagram(sk.clone(), &spec).unwrap_err(),
            DiagramError::UnmatchedHalfEdge("a".into())
        );
        spec.legs[1].2 = 2;
        spec.edges = vec![("a".into(), "b".into())];
        assert!(matches!(
            build_diagram(sk.clone(), &spec),
            Err(DiagramError::EmptySlot(_, 1))
        ));
        spec.legs[1].2 = 0;
        assert!(matches!(
            build_diagram(sk.clone(), &spec),
            Err(DiagramError::DuplicateSlot(_, 0))
        ));
        let spec = DiagramSpec {
            legs: vec![("a".into(), "c1".into(), 0)],
            vertices: vec![("v".into(), vec!["p".into(), "q".into()])],
            edges: vec![],
        };
        assert_eq!(
            build_diagram(sk, &spec).unwrap_err(),
            DiagramError::NonTrivalentVertex("v".into(), 2)
        );
    }

    #[test]
    fn stu_expand_counts() {
        let theta = fixtures::theta();
        let (t, u) = theta.stu_expand(Slot::new(0, 0)).unwrap();
        for x in [&t, &u] {
            assert_eq!(x.edge_count(), theta.edge_count() - 1);
            assert_eq!(x.degree(), theta.degree());
        }
        let chord = fixtures::chord();
        assert!(matches!(
            chord.stu_expand(Slot::new(0, 0)),
            Err(AlgebraError::LegNotAdjacentToVertex { .. })
        ));
    }

    #[test]
    fn join_inverts_expand() {
        let y = fixtures::y_diagram();
        let (t, _) = y.stu_expand(Slot::new(0, 1)).unwrap();
        let j = t.join_adjacent(0, 1).unwrap();
        assert_eq!(crate::canon::is_isomorphic(&j, &y), Some(crate::canon::Sign::Plus));
    }

    #[test]
    fn cycles_and_distances() {
        let d = fixtures::bigon_with_pendant_chain();
        let dist = d.distance_to_cycle();
        let legs: Vec<usize> = d.slots().filter_map(|s| d.leg_vertex(s)).collect();
        assert!(legs.iter().all(|&v| dist[v] >= Some(1)));
        assert_eq!(legs.iter().map(|&v| dist[v].unwrap()).min(), Some(1));
    }
}
