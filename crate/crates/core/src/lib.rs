//! Reduction of unitrivalent diagrams on a skeleton to combinations of tree
//! diagrams modulo the STU relations, with replayable certificates, a
//! combinatorial model of strict graph claspers, and exhaustive enumeration
//! for checking everything at small degree.

pub mod canon;
pub mod certificate;
pub mod clasper;
pub mod cli;
pub mod diagram;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod lincomb;
pub mod reduce;
pub mod skeleton;
pub mod stu;
pub mod text;

pub use canon::{canonicalize, from_digest, is_isomorphic, CanonicalDiagram, Digest, Sign};
pub use certificate::{verify_certificate, Certificate, Verification};
pub use clasper::{is_simple, reduce_clasper, shadow, validate_clasper, Clasper, Ledger, LedgerEntry, LedgerKind};
pub use diagram::{Diagram, Slot};
pub use enumerate::{enumerate_diagrams, EnumerationSpec, Filter};
pub use error::{AlgebraError, CertificateError, ClasperError, DiagramError, ParseError, ReductionError};
pub use lincomb::{LinearCombination, Rational};
pub use reduce::{choose_leg, expand_and_classify, reduce_all, reduce_to_trees, ReductionOptions, Strategy};
pub use skeleton::{ComponentKind, Skeleton};
pub use stu::{express_in_tree_basis, generate_relations, in_span, stu_row, DimensionReport, RelationSystem};
