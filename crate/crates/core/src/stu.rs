//! STU relations on a fixed skeleton and degree, and exact span queries.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::canon::{canonicalize, Digest, Sign};
use crate::diagram::{Diagram, Owner, Slot};
use crate::enumerate::{enumerate_diagrams, DiagramClass, EnumerationSpec, Filter, DEFAULT_MAX_DEGREE};
use crate::error::AlgebraError;
use crate::linalg::{dense_rank, SparseEchelon, SparseVec};
use crate::lincomb::{LinearCombination, Rational};
use crate::skeleton::Skeleton;

/// `D - T + U` for the STU instance at the leg in `slot`.
pub fn stu_row(d: &Diagram, slot: Slot) -> Result<LinearCombination, AlgebraError> {
    let (t, u) = d.stu_expand(slot)?;
    let mut row = LinearCombination::of_diagram(d, Rational::one());
    row.add_diagram(&t, &-Rational::one());
    row.add_diagram(&u, &Rational::one());
    Ok(row)
}

/// Slots whose leg ends at an internal vertex.
pub fn vertex_legs(d: &Diagram) -> Vec<Slot> {
    d.slots().filter(|&s| d.leg_vertex(s).is_some()).collect()
}

/// The three resolutions of every internal edge joining two distinct
/// vertices, as `I + H + X` with orientations chosen so the sum vanishes in
/// the quotient.
pub fn ihx_instances(d: &Diagram) -> Vec<LinearCombination> {
    let mut out = Vec::new();
    for h in 0..d.half_edge_count() {
        let g = d.partner(h);
        let (Owner::Corner { vertex: v1, corner: k1 }, Owner::Corner { vertex: v2, corner: k2 }) =
            (d.owner(h), d.owner(g))
        else {
            continue;
        };
        if h > g || v1 == v2 {
            continue;
        }
        let t1 = d.vertices()[v1];
        let t2 = d.vertices()[v2];
        let (a, b) = (t1[(k1 + 1) % 3], t1[(k1 + 2) % 3]);
        let (c, e) = (t2[(k2 + 1) % 3], t2[(k2 + 2) % 3]);
        let mut lc = LinearCombination::new();
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            let mut vertices = d.vertices().to_vec();
            vertices[v1] = [h, x, y];
            vertices[v2] = [g, z, e];
            let term = Diagram::assemble(d.skeleton_arc().clone(), d.legs().to_vec(), vertices, |q| d.partner(q));
            lc.add_diagram(&term, &Rational::one());
        }
        out.push(lc);
    }
    out
}

fn normalized(row: LinearCombination) -> LinearCombination {
    let negative = row.iter().next().is_some_and(|(_, c)| c.is_negative());
    if negative {
        row.scaled(&-Rational::one())
    } else {
        row
    }
}

/// STU relations of one degree over the nonzero classes in which every
/// internal component carries a leg. Columns list non-tree classes first,
/// then tree classes, each in digest order.
#[derive(Debug)]
pub struct RelationSystem {
    skeleton: Arc<Skeleton>,
    degree: usize,
    basis: Vec<DiagramClass>,
    tree_start: usize,
    index: HashMap<Digest, usize>,
    rows: Vec<LinearCombination>,
    echelon: SparseEchelon,
}

pub fn generate_relations(skeleton: Arc<Skeleton>, degree: usize) -> Result<RelationSystem, AlgebraError> {
    generate_relations_with_budget(skeleton, degree, DEFAULT_MAX_DEGREE)
}

pub fn generate_relations_with_budget(
    skeleton: Arc<Skeleton>,
    degree: usize,
    max_degree: usize,
) -> Result<RelationSystem, AlgebraError> {
    let mut spec = EnumerationSpec::new(skeleton.clone(), degree, &[Filter::All]);
    spec.max_degree = max_degree;
    let all = enumerate_diagrams(&spec)?;
    // zero classes still contribute relations between their expansions
    let rows: BTreeSet<String> = all
        .par_iter()
        .flat_map_iter(|c| {
            vertex_legs(&c.rep)
                .into_iter()
                .map(|s| normalized(stu_row(&c.rep, s).expect("vertex leg")))
                .filter(|r| !r.is_zero())
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
        })
        .collect();
    let rows: Vec<LinearCombination> = rows
        .iter()
        .map(|s| LinearCombination::parse_line(s).expect("own output parses"))
        .collect();
    let (mut non_tree, mut tree): (Vec<DiagramClass>, Vec<DiagramClass>) = all
        .into_iter()
        .filter(|c| c.form.sign != Sign::Zero)
        .partition(|c| !c.rep.is_tree_diagram());
    let tree_start = non_tree.len();
    non_tree.append(&mut tree);
    let basis = non_tree;
    let index = basis
        .iter()
        .enumerate()
        .map(|(i, c)| (c.form.digest.clone(), i))
        .collect();
    let mut sys = RelationSystem {
        skeleton,
        degree,
        basis,
        tree_start,
        index,
        rows,
        echelon: SparseEchelon::new(),
    };
    let mut echelon = SparseEchelon::new();
    for (i, r) in sys.rows.iter().enumerate() {
        let v = sys.integer_vector(r).expect("rows live on the basis");
        echelon.insert(v, i);
    }
    sys.echelon = echelon;
    Ok(sys)
}

impl RelationSystem {
    pub fn skeleton(&self) -> &Arc<Skeleton> {
        &self.skeleton
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> &[DiagramClass] {
        &self.basis
    }

    pub fn rows(&self) -> &[LinearCombination] {
        &self.rows
    }

    pub fn column(&self, digest: &Digest) -> Option<usize> {
        self.index.get(digest).copied()
    }

    pub fn is_tree_column(&self, col: usize) -> bool {
        col >= self.tree_start
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// Dimension of the quotient by the relation span.
    pub fn quotient_rank(&self) -> usize {
        self.basis.len() - self.rank()
    }

    /// Dimension of the image of the tree classes in the quotient.
    pub fn tree_span_rank(&self) -> usize {
        (self.tree_start..self.basis.len())
            .filter(|&c| !self.echelon.is_pivot(c))
            .count()
    }

    /// Quotient dimension recomputed by dense Bareiss elimination.
    pub fn dense_quotient_rank(&self) -> usize {
        let rows: Vec<SparseVec> = self.rows.iter().map(|r| self.integer_vector(r).unwrap()).collect();
        self.basis.len() - dense_rank(&rows, self.basis.len())
    }

    fn vector(&self, v: &LinearCombination) -> Result<BTreeMap<usize, Rational>, AlgebraError> {
        v.iter()
            .map(|(d, c)| {
                self.column(d)
                    .map(|i| (i, c.clone()))
                    .ok_or_else(|| AlgebraError::BasisMismatch(format!("`{d}` is not a basis class")))
            })
            .collect()
    }

    fn integer_vector(&self, v: &LinearCombination) -> Result<SparseVec, AlgebraError> {
        let r = self.vector(v)?;
        Ok(r.into_iter()
            .map(|(i, c)| {
                assert!(c.is_integer());
                (i, c.to_integer())
            })
            .filter(|(_, c): &(usize, BigInt)| !c.is_zero())
            .collect())
    }

    fn combination(&self, v: BTreeMap<usize, Rational>) -> LinearCombination {
        v.into_iter()
            .map(|(i, c)| (self.basis[i].form.digest.clone(), c))
            .collect()
    }

    /// Row coefficients summing to `v`, or `None` outside the span.
    pub fn in_span(&self, v: &LinearCombination) -> Result<Option<BTreeMap<usize, Rational>>, AlgebraError> {
        Ok(self.echelon.express(&self.vector(v)?))
    }

    /// Unique representative of `v` modulo the relations.
    pub fn normal_form(&self, v: &LinearCombination) -> Result<LinearCombination, AlgebraError> {
        Ok(self.combination(self.echelon.normal_form(&self.vector(v)?)))
    }

    pub fn check_diagram(&self, d: &Diagram) -> Result<(), AlgebraError> {
        if !d.skeleton().same_shape(&self.skeleton) {
            return Err(AlgebraError::BasisMismatch("skeleton shape differs".into()));
        }
        if d.degree() != self.degree {
            return Err(AlgebraError::BasisMismatch(format!(
                "diagram degree {} but system degree {}",
                d.degree(),
                self.degree
            )));
        }
        if d.has_legless_component() {
            return Err(AlgebraError::BasisMismatch("diagram has a legless component".into()));
        }
        Ok(())
    }

    /// Combination of tree classes equal to `v` modulo the relations.
    pub fn express_combination_in_tree_basis(
        &self,
        v: &LinearCombination,
    ) -> Result<Option<LinearCombination>, AlgebraError> {
        let nf = self.echelon.normal_form(&self.vector(v)?);
        if nf.keys().any(|&c| !self.is_tree_column(c)) {
            return Ok(None);
        }
        Ok(Some(self.combination(nf)))
    }

    /// One row per line, `digest: coeff, ...`.
    pub fn to_text(&self) -> String {
        self.rows.iter().map(|r| format!("{r}\n")).collect()
    }
}

/// Dimension summary of one relation system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionReport {
    pub classes: usize,
    pub tree_classes: usize,
    pub relations: usize,
    pub quotient_rank: usize,
    pub dense_quotient_rank: usize,
    pub tree_span_rank: usize,
    pub connected: usize,
    pub connected_in_tree_span: usize,
}

impl DimensionReport {
    pub fn new(sys: &RelationSystem) -> Self {
        let connected: Vec<&DiagramClass> = sys.basis().iter().filter(|c| c.rep.is_connected()).collect();
        let in_tree_span = connected
            .par_iter()
            .filter(|c| matches!(express_in_tree_basis(&c.rep, sys), Ok(Some(_))))
            .count();
        DimensionReport {
            classes: sys.basis().len(),
            tree_classes: sys.basis().len() - sys.tree_start,
            relations: sys.rows().len(),
            quotient_rank: sys.quotient_rank(),
            dense_quotient_rank: sys.dense_quotient_rank(),
            tree_span_rank: sys.tree_span_rank(),
            connected: connected.len(),
            connected_in_tree_span: in_tree_span,
        }
    }

    /// `key=value` lines in a fixed order.
    pub fn to_text(&self) -> String {
        format!(
            "classes={}\ntree_classes={}\nrelations={}\nquotient_rank={}\ndense_quotient_rank={}\ntree_span_rank={}\nconnected={}\nconnected_in_tree_span={}\n",
            self.classes,
            self.tree_classes,
            self.relations,
            self.quotient_rank,
            self.dense_quotient_rank,
            self.tree_span_rank,
            self.connected,
            self.connected_in_tree_span
        )
    }
}

/// Checks `v` against the relation span; `Some` carries row coefficients.
pub fn in_span(v: &LinearCombination, sys: &RelationSystem) -> Result<Option<BTreeMap<usize, Rational>>, AlgebraError> {
    sys.in_span(v)
}

/// `d` rewritten over tree classes modulo the relations, if possible.
pub fn express_in_tree_basis(d: &Diagram, sys: &RelationSystem) -> Result<Option<LinearCombination>, AlgebraError> {
    sys.check_diagram(d)?;
    sys.express_combination_in_tree_basis(&LinearCombination::of_diagram(d, Rational::one()))
}

/// Canonical sign of `d`; `Zero` for classes killed by antisymmetry.
pub fn sign_of(d: &Diagram) -> Sign {
    canonicalize(d).form.sign
}
