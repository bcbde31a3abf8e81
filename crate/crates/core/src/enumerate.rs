//! Exhaustive enumeration of diagram classes of a fixed degree.
//!
//! Only diagrams in which every internal component carries at least one leg
//! are generated; those are the diagrams the STU relations act on.
//!
//! Generation works per internal vertex count `t` (with `u = 2n - t` legs)
//! and per distribution of legs over skeleton components. Half-edges are
//! matched in order: the smallest unmatched half-edge is paired either with
//! a later unmatched one or with a fresh vertex. Fresh vertices are
//! interchangeable, and so are the two free corners of a vertex, which keeps
//! the raw count small. Everything is then canonicalized and deduplicated.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::canon::{canonicalize, from_digest, CanonicalDiagram, Digest, Sign};
use crate::diagram::Diagram;
use crate::error::AlgebraError;
use crate::skeleton::Skeleton;

pub const DEFAULT_MAX_DEGREE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Filter {
    Connected,
    Trees,
    NonZero,
    All,
}

impl Filter {
    pub fn accepts(self, d: &Diagram, sign: Sign) -> bool {
        match self {
            Filter::Connected => d.is_connected(),
            Filter::Trees => d.is_tree_diagram(),
            Filter::NonZero => sign != Sign::Zero,
            Filter::All => true,
        }
    }
}

impl std::str::FromStr for Filter {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "connected" => Ok(Filter::Connected),
            "trees" => Ok(Filter::Trees),
            "nonzero" => Ok(Filter::NonZero),
            "all" => Ok(Filter::All),
            other => Err(format!("unknown filter `{other}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnumerationSpec {
    pub skeleton: Arc<Skeleton>,
    pub degree: usize,
    /// All filters must accept.
    pub filters: Vec<Filter>,
    pub max_degree: usize,
}

impl EnumerationSpec {
    pub fn new(skeleton: Arc<Skeleton>, degree: usize, filters: &[Filter]) -> Self {
        EnumerationSpec {
            skeleton,
            degree,
            filters: filters.to_vec(),
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

/// One isomorphism class together with its canonical representative.
#[derive(Clone, Debug)]
pub struct DiagramClass {
    pub form: CanonicalDiagram,
    pub rep: Diagram,
}

/// Ordered ways of writing `total` as `parts` nonnegative summands.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

const UNSET: usize = usize::MAX;

struct Generator<'a> {
    skeleton: &'a Arc<Skeleton>,
    counts: &'a [usize],
    u: usize,
    t: usize,
    out: Vec<Diagram>,
}

impl Generator<'_> {
    fn run(&mut self, partner: &mut Vec<usize>, introduced: usize) {
        let assigned = self.u + 3 * introduced;
        let Some(a) = (0..assigned).find(|&h| partner[h] == UNSET) else {
            if introduced == self.t {
                self.emit(partner);
            }
            return;
        };
        for b in a + 1..assigned {
            if partner[b] != UNSET {
                continue;
            }
            if b >= self.u && (b - self.u) % 3 == 2 && b - 1 != a && partner[b - 1] == UNSET {
                // the two free corners of a vertex are interchangeable
                continue;
            }
            partner[a] = b;
            partner[b] = a;
            self.run(partner, introduced);
            partner[a] = UNSET;
            partner[b] = UNSET;
        }
        if introduced < self.t {
            let b = assigned;
            partner[a] = b;
            partner[b] = a;
            self.run(partner, introduced + 1);
            partner[a] = UNSET;
            partner[b] = UNSET;
        }
    }

    fn emit(&mut self, partner: &[usize]) {
        let mut legs = Vec::new();
        let mut next = 0;
        for &m in self.counts {
            legs.push((next..next + m).collect());
            next += m;
        }
        let u = self.u;
        let vertices = (0..self.t).map(|k| [u + 3 * k, u + 3 * k + 1, u + 3 * k + 2]).collect();
        let d = Diagram::new(self.skeleton.clone(), legs, vertices, partner.to_vec())
            .expect("generated diagram is well formed");
        self.out.push(d);
    }
}

/// Raw generated diagrams for one `(t, leg distribution)` work item.
fn generate(skeleton: &Arc<Skeleton>, counts: &[usize], t: usize) -> Vec<Diagram> {
    let u: usize = counts.iter().sum();
    let mut g = Generator {
        skeleton,
        counts,
        u,
        t,
        out: Vec::new(),
    };
    let mut partner = vec![UNSET; u + 3 * t];
    g.run(&mut partner, 0);
    g.out
}

/// Complete, duplicate-free, digest-ordered list of classes passing the filters.
pub fn enumerate_diagrams(spec: &EnumerationSpec) -> Result<Vec<DiagramClass>, AlgebraError> {
    let n = spec.degree;
    if n == 0 {
        return Err(AlgebraError::ZeroDegree);
    }
    if n > spec.max_degree {
        return Err(AlgebraError::DegreeTooLargeForBudget {
            degree: n,
            max: spec.max_degree,
        });
    }
    let k = spec.skeleton.len();
    let mut items = Vec::new();
    for t in 0..2 * n {
        let u = 2 * n - t;
        for counts in compositions(u, k) {
            items.push((t, counts));
        }
    }
    let found: BTreeMap<Digest, Sign> = items
        .par_iter()
        .map(|(t, counts)| {
            let mut local = BTreeMap::new();
            for d in generate(&spec.skeleton, counts, *t) {
                let c = canonicalize(&d).form;
                local.entry(c.digest).or_insert(c.sign);
            }
            local
        })
        .reduce(BTreeMap::new, |mut a, b| {
            a.extend(b);
            a
        });
    let classes: Vec<DiagramClass> = found
        .into_par_iter()
        .map(|(digest, sign)| {
            let rep = from_digest(spec.skeleton.clone(), &digest).expect("own digest decodes");
            DiagramClass {
                form: CanonicalDiagram { digest, sign },
                rep,
            }
        })
        .filter(|c| spec.filters.iter().all(|f| f.accepts(&c.rep, c.form.sign)))
        .collect();
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::collections::BTreeSet;

    /// Every perfect matching on labelled half-edges, with labelled vertices
    /// and corners, canonicalized. Only feasible for tiny degrees.
    fn brute_force(skeleton: &Arc<Skeleton>, n: usize) -> BTreeMap<Digest, Sign> {
        fn matchings(free: &[usize], partner: &mut [usize], out: &mut Vec<Vec<usize>>) {
            let Some(&a) = free.first() else {
                out.push(partner.to_vec());
                return;
            };
            for i in 1..free.len() {
                let b = free[i];
                let rest: Vec<usize> = free.iter().copied().filter(|&x| x != a && x != b).collect();
                partner[a] = b;
                partner[b] = a;
                matchings(&rest, partner, out);
            }
        }
        let mut out = BTreeMap::new();
        for t in 0..2 * n {
            let u = 2 * n - t;
            for counts in compositions(u, skeleton.len()) {
                let h = u + 3 * t;
                let mut all = Vec::new();
                matchings(&(0..h).collect::<Vec<_>>(), &mut vec![0; h], &mut all);
                for partner in all {
                    let mut legs = Vec::new();
                    let mut next = 0;
                    for &m in &counts {
                        legs.push((next..next + m).collect());
                        next += m;
                    }
                    let vertices = (0..t).map(|k| [u + 3 * k, u + 3 * k + 1, u + 3 * k + 2]).collect();
                    let d = Diagram::new(skeleton.clone(), legs, vertices, partner).unwrap();
                    if d.has_legless_component() {
                        continue;
                    }
                    let c = canonicalize(&d).form;
                    out.insert(c.digest, c.sign);
                }
            }
        }
        out
    }

    fn enumerate(sk: Skeleton, n: usize, f: &[Filter]) -> Vec<DiagramClass> {
        enumerate_diagrams(&EnumerationSpec::new(Arc::new(sk), n, f)).unwrap()
    }

    #[test]
    fn degree_one_interval() {
        let all = enumerate(Skeleton::interval(), 1, &[Filter::All]);
        // the chord and the tadpole
        assert_eq!(all.len(), 2);
        let nonzero = enumerate(Skeleton::interval(), 1, &[Filter::NonZero]);
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].form.digest, canonicalize(&fixtures::chord()).form.digest);
    }

    #[test]
    fn degree_two_trees_match_brute_force() {
        let sk = Arc::new(Skeleton::interval());
        let trees = enumerate(Skeleton::interval(), 2, &[Filter::Trees]);
        // three two-chord diagrams and the Y
        assert_eq!(trees.len(), 4);
        let oracle: BTreeSet<Digest> = brute_force(&sk, 2)
            .into_keys()
            .filter(|d| from_digest(sk.clone(), d).unwrap().is_tree_diagram())
            .collect();
        let got: BTreeSet<Digest> = trees.into_iter().map(|c| c.form.digest).collect();
        assert_eq!(got, oracle);
    }

    #[test]
    fn complete_against_brute_force() {
        for (sk, n) in [
            (Skeleton::interval(), 1),
            (Skeleton::interval(), 2),
            (Skeleton::circle(), 1),
            (Skeleton::circle(), 2),
        ] {
            let sk = Arc::new(sk);
            // signs depend on the labelling; only zero-ness is a class property
            let oracle: BTreeMap<Digest, bool> = brute_force(&sk, n)
                .into_iter()
                .map(|(d, s)| (d, s == Sign::Zero))
                .collect();
            let got: BTreeMap<Digest, bool> = enumerate_diagrams(&EnumerationSpec::new(sk.clone(), n, &[Filter::All]))
                .unwrap()
                .into_iter()
                .map(|c| (c.form.digest, c.form.sign == Sign::Zero))
                .collect();
            assert_eq!(got, oracle, "{:?} degree {n}", sk.kinds());
        }
    }

    #[test]
    fn nonzero_excludes_only_zero_classes() {
        let sk = Arc::new(Skeleton::interval());
        let all = enumerate(Skeleton::interval(), 2, &[Filter::All]);
        let nonzero: BTreeSet<Digest> = enumerate(Skeleton::interval(), 2, &[Filter::NonZero])
            .into_iter()
            .map(|c| c.form.digest)
            .collect();
        for c in &all {
            if !nonzero.contains(&c.form.digest) {
                let d = from_digest(sk.clone(), &c.form.digest).unwrap();
                let signs = crate::canon::tests::brute_force_signs(&d, &d);
                assert!(signs.contains(&-1));
            }
        }
        assert!(all.len() > nonzero.len());
    }

    #[test]
    fn budget_enforced() {
        let spec = EnumerationSpec::new(Arc::new(Skeleton::interval()), 5, &[Filter::All]);
        assert!(matches!(
            enumerate_diagrams(&spec),
            Err(AlgebraError::DegreeTooLargeForBudget { .. })
        ));
    }

    #[test]
    fn deterministic_and_sorted() {
        let a = enumerate(Skeleton::interval(), 3, &[Filter::All]);
        let b = enumerate(Skeleton::interval(), 3, &[Filter::All]);
        let da: Vec<_> = a.iter().map(|c| c.form.digest.clone()).collect();
        let db: Vec<_> = b.iter().map(|c| c.form.digest.clone()).collect();
        assert_eq!(da, db);
        assert!(da.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn independent_of_thread_count() {
        let spec = EnumerationSpec::new(Arc::new(Skeleton::interval()), 3, &[Filter::All]);
        let digests = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| enumerate_diagrams(&spec).unwrap())
                .into_iter()
                .map(|c| c.form.digest)
                .collect::<Vec<_>>()
        };
        assert_eq!(digests(1), digests(4));
    }
}
