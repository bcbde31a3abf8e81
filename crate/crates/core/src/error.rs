use thiserror::Error;

/// Structural problems with a skeleton or diagram.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("skeleton has no components")]
    EmptySkeleton,
    #[error("duplicate skeleton component `{0}`")]
    DuplicateComponent(String),
    #[error("unknown skeleton component `{0}`")]
    UnknownComponent(String),
    #[error("half-edge `{0}` is used in an edge but never declared as a leg or vertex corner")]
    DanglingHalfEdge(String),
    #[error("vertex `{0}` has {1} half-edges, expected 3")]
    NonTrivalentVertex(String, usize),
    #[error("half-edge `{0}` is not matched by any edge")]
    UnmatchedHalfEdge(String),
    #[error("half-edge `{0}` is declared or matched more than once")]
    DuplicateHalfEdge(String),
    #[error("slot {1} on component `{0}` is empty")]
    EmptySlot(String, usize),
    #[error("slot {1} on component `{0}` is occupied more than once")]
    DuplicateSlot(String, usize),
    #[error("diagram has degree zero")]
    EmptyDiagram,
    #[error("malformed digest `{0}`")]
    BadDigest(String),
}

/// Text-format syntax errors, with 1-based line numbers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown step kind `{token}`")]
    UnknownStepKind { line: usize, token: String },
    #[error("line {line}: unexpected end of input")]
    Truncated { line: usize },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: DiagramError,
    },
    #[error("no {0} found in input")]
    Missing(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("leg at component {component} slot {position} is not attached to an internal vertex")]
    LegNotAdjacentToVertex { component: usize, position: usize },
    #[error("no leg at component {component} slot {position}")]
    NoSuchLeg { component: usize, position: usize },
    #[error("degree {degree} exceeds the configured budget {max}")]
    DegreeTooLargeForBudget { degree: usize, max: usize },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("vector is not over the relation system's basis: {0}")]
    BasisMismatch(String),
    #[error("diagrams are not related by a single block slide: {0}")]
    NotSlidePair(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("an internal component has no legs")]
    LeglessComponent,
    #[error("no leg is adjacent to an internal vertex")]
    NoEligibleLeg,
    #[error("step budget of {0} exhausted")]
    StepBudgetExhausted(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("ledger entry {n1}+{n2} is below the clasper degree {degree}")]
    LedgerViolation { n1: usize, n2: usize, degree: usize },
    #[error("oracle found no tree expression")]
    NoTreeExpression,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClasperError {
    #[error("part `{0}` is not a disk-leaf, node, or edge")]
    NotStrict(String),
    #[error("part `{0}` has {1} edge ends, expected {2}")]
    BadValence(String, usize, usize),
    #[error("a connected component of the clasper has no disk-leaf")]
    LeglessComponent,
    #[error("disk-leaves plus nodes is odd ({0})")]
    NonIntegerDegree(usize),
    #[error("clasper is not simple: disk-leaf `{0}` meets the skeleton {1} times")]
    NotSimple(String, usize),
    #[error("unknown part `{0}`")]
    UnknownPart(String),
    #[error("duplicate part `{0}`")]
    DuplicatePart(String),
    #[error("unknown skeleton component `{0}`")]
    UnknownComponent(String),
    #[error("clasper is empty")]
    Empty,
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("unknown digest `{0}`")]
    UnknownDigest(String),
    #[error("certificate degree {found} does not match the relation system degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("skeleton shape of `{0}` does not match")]
    SkeletonMismatch(String),
}
