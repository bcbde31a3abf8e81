//! Skeletons: the ordered, oriented 1-manifold a diagram's legs sit on.

use std::collections::HashSet;
use std::fmt;

use crate::error::DiagramError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentKind {
    /// Endpoints are fixed, so leg order is linear.
    Interval,
    /// Leg order is only defined up to rotation.
    Circle,
}

impl ComponentKind {
    pub fn letter(self) -> char {
        match self {
            ComponentKind::Interval => 'i',
            ComponentKind::Circle => 'c',
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            ComponentKind::Interval => "interval",
            ComponentKind::Circle => "circle",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub id: String,
    pub kind: ComponentKind,
}

/// An ordered list of skeleton components with unique ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Skeleton {
    name: String,
    components: Vec<Component>,
}

impl Skeleton {
    pub fn new(name: impl Into<String>, components: Vec<Component>) -> Result<Self, DiagramError> {
        if components.is_empty() {
            return Err(DiagramError::EmptySkeleton);
        }
        let mut seen = HashSet::new();
        for c in &components {
            if !seen.insert(c.id.as_str()) {
                return Err(DiagramError::DuplicateComponent(c.id.clone()));
            }
        }
        Ok(Skeleton {
            name: name.into(),
            components,
        })
    }

    /// A skeleton with a single interval component `c1`.
    pub fn interval() -> Self {
        Self::from_kinds("S", &[ComponentKind::Interval])
    }

    /// A skeleton with a single circle component `c1`.
    pub fn circle() -> Self {
        Self::from_kinds("S", &[ComponentKind::Circle])
    }

    /// Components named `c1, c2, ...` in order.
    pub fn from_kinds(name: &str, kinds: &[ComponentKind]) -> Self {
        let components = kinds
            .iter()
            .enumerate()
            .map(|(i, &kind)| Component {
                id: format!("c{}", i + 1),
                kind,
            })
            .collect();
        Skeleton {
            name: name.to_string(),
            components,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn kind(&self, comp: usize) -> ComponentKind {
        self.components[comp].kind
    }

    pub fn kinds(&self) -> Vec<ComponentKind> {
        self.components.iter().map(|c| c.kind).collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    /// Two skeletons have the same shape when their kinds agree component by component.
    pub fn same_shape(&self, other: &Skeleton) -> bool {
        self.kinds() == other.kinds()
    }
}

impl fmt::Display for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "skeleton {} {{", self.name)?;
        for c in &self.components {
            write!(f, " {} {};", c.kind.keyword(), c.id)?;
        }
        write!(f, " }}")
    }
}
