//! Exact rational linear combinations of canonical diagrams.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::canon::{canonicalize, Digest, Sign};
use crate::diagram::Diagram;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q` in lowest terms, or `p` when `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            (!q.is_zero()).then(|| Rational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Digest-keyed combination; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearCombination {
    terms: BTreeMap<Digest, Rational>,
}

impl LinearCombination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(digest: Digest, coef: Rational) -> Self {
        let mut lc = Self::new();
        lc.add_term(digest, coef);
        lc
    }

    /// `coef · d`, with the antisymmetry sign folded in.
    pub fn of_diagram(d: &Diagram, coef: Rational) -> Self {
        let mut lc = Self::new();
        lc.add_diagram(d, &coef);
        lc
    }

    pub fn add_term(&mut self, digest: Digest, coef: Rational) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(digest);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_diagram(&mut self, d: &Diagram, coef: &Rational) {
        let c = canonicalize(d).form;
        match c.sign {
            Sign::Zero => {}
            s => self.add_term(c.digest, coef * rat(s.as_i64())),
        }
    }

    pub fn add_scaled(&mut self, other: &LinearCombination, factor: &Rational) {
        for (d, c) in &other.terms {
            self.add_term(d.clone(), c * factor);
        }
    }

    pub fn add(&mut self, other: &LinearCombination) {
        self.add_scaled(other, &Rational::one());
    }

    pub fn sub(&mut self, other: &LinearCombination) {
        self.add_scaled(other, &-Rational::one());
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        let mut out = Self::new();
        out.add_scaled(self, factor);
        out
    }

    pub fn remove(&mut self, digest: &Digest) -> Option<Rational> {
        self.terms.remove(digest)
    }

    pub fn get(&self, digest: &Digest) -> Option<&Rational> {
        self.terms.get(digest)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in digest order.
    pub fn iter(&self) -> impl Iterator<Item = (&Digest, &Rational)> {
        self.terms.iter()
    }

    pub fn digests(&self) -> impl Iterator<Item = &Digest> {
        self.terms.keys()
    }

    /// Parses `digest: coeff, digest: coeff, ...`.
    pub fn parse_line(line: &str) -> Option<Self> {
        let mut lc = Self::new();
        let line = line.trim();
        if line.is_empty() {
            return Some(lc);
        }
        for part in line.split(',') {
            let (d, c) = part.split_once(':')?;
            let digest = Digest::parse(d.trim()).ok()?;
            lc.add_term(digest, parse_rational(c)?);
        }
        Some(lc)
    }
}

impl fmt::Display for LinearCombination {
    /// `digest: coeff, digest: coeff, ...` in digest order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in &self.terms {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{}: {}", d, format_rational(c))?;
        }
        Ok(())
    }
}

impl FromIterator<(Digest, Rational)> for LinearCombination {
    fn from_iter<I: IntoIterator<Item = (Digest, Rational)>>(iter: I) -> Self {
        let mut lc = Self::new();
        for (d, c) in iter {
            lc.add_term(d, c);
        }
        lc
    }
}
