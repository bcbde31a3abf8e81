//! Canonical forms of diagrams up to isomorphism, with antisymmetry signs.
//!
//! A canonical numbering assigns legs the numbers `0..u` in skeleton order
//! (after choosing a base point on each circle) and then discovers vertices
//! by repeatedly matching the smallest unmatched numbered half-edge: when its
//! partner sits on an unnumbered vertex, that vertex gets the next block of
//! three numbers with the partner first. The only freedom is the order of the
//! two remaining corners, the circle base points, and (for legless
//! components) the choice of root. The digest records the sequence of
//! partners produced, minimised over all such numberings.
//!
//! The canonical representative orients vertex `k` as `(u+3k, u+3k+1,
//! u+3k+2)`. The sign of a diagram is the parity of its own vertex orders
//! relative to that; if two minimal numberings disagree on the sign the
//! diagram has an odd automorphism and is zero modulo antisymmetry.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::diagram::{Diagram, Owner};
use crate::error::DiagramError;
use crate::skeleton::{ComponentKind, Skeleton};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
    Zero,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
            Sign::Zero => 0,
        }
    }

    pub fn from_parity(odd: bool) -> Sign {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        match (self, rhs) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Plus,
            _ => Sign::Minus,
        }
    }
}

/// Deterministic key of an isomorphism class (orientation forgotten).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest(String);

impl Digest {
    /// Accepts any string made of the digest alphabet; structural checks
    /// happen in [`from_digest`].
    pub fn parse(s: &str) -> Result<Digest, DiagramError> {
        let ok = !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '~');
        if ok {
            Ok(Digest(s.to_string()))
        } else {
            Err(DiagramError::BadDigest(s.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalDiagram {
    pub digest: Digest,
    pub sign: Sign,
}

/// Canonical form plus the witness numbering (original half-edge to
/// canonical half-edge).
#[derive(Clone, Debug)]
pub struct Canonical {
    pub form: CanonicalDiagram,
    pub mapping: Vec<usize>,
}

const ALPHABET: &[u8] = b"0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";

fn digit_value(c: u8) -> Option<usize> {
    ALPHABET.iter().position(|&a| a == c)
}

#[derive(Clone)]
struct State {
    num: Vec<usize>,
    rev: Vec<usize>,
    matched: Vec<bool>,
    assigned: usize,
    next_vertex: usize,
    cursor: usize,
    seq: Vec<u16>,
    /// `seq` is already below the best sequence of version `seen`.
    less: bool,
    seen: usize,
}

struct Search<'a> {
    d: &'a Diagram,
    u: usize,
    best: Option<Vec<u16>>,
    best_sign: Sign,
    best_map: Vec<usize>,
    zero: bool,
    version: usize,
}

const UNSET: usize = usize::MAX;

impl<'a> Search<'a> {
    fn place_legs(&mut self, comp: usize, st: State) {
        let d = self.d;
        if comp == d.legs().len() {
            self.run(st);
            return;
        }
        let row = &d.legs()[comp];
        let rotations = match d.skeleton().kind(comp) {
            ComponentKind::Circle if !row.is_empty() => row.len(),
            _ => 1,
        };
        for r in 0..rotations {
            let mut s = st.clone();
            for i in 0..row.len() {
                let h = row[(i + r) % row.len()];
                s.num[h] = s.assigned;
                s.rev[s.assigned] = h;
                s.assigned += 1;
            }
            self.place_legs(comp + 1, s);
        }
    }

    /// Records partner `b` of the current half-edge `a`; false means prune.
    fn emit(&self, st: &mut State, a: usize, b: usize) -> bool {
        st.matched[a] = true;
        st.matched[b] = true;
        st.seq.push(b as u16);
        if st.seen != self.version {
            // the best sequence improved since this branch last compared
            st.seen = self.version;
            st.less = false;
            if let Some(best) = &self.best {
                let k = st.seq.len() - 1;
                match st.seq[..k].cmp(&best[..k]) {
                    Ordering::Less => st.less = true,
                    Ordering::Greater => return false,
                    Ordering::Equal => {}
                }
            }
        }
        if !st.less {
            match &self.best {
                None => st.less = true,
                Some(best) => match (b as u16).cmp(&best[st.seq.len() - 1]) {
                    Ordering::Less => st.less = true,
                    Ordering::Greater => return false,
                    Ordering::Equal => {}
                },
            }
        }
        true
    }

    fn assign_vertex(&self, st: &mut State, corners: [usize; 3]) -> usize {
        let base = self.u + 3 * st.next_vertex;
        for (i, &h) in corners.iter().enumerate() {
            st.num[h] = base + i;
            st.rev[base + i] = h;
        }
        st.assigned += 3;
        st.next_vertex += 1;
        base
    }

    fn run(&mut self, mut st: State) {
        let d = self.d;
        let n = d.half_edge_count();
        loop {
            while st.cursor < st.assigned && st.matched[st.cursor] {
                st.cursor += 1;
            }
            if st.cursor == st.assigned {
                if st.assigned == n {
                    self.finish(st);
                    return;
                }
                // a legless component: try every root and corner order
                for tri in d.vertices() {
                    if st.num[tri[0]] != UNSET {
                        continue;
                    }
                    for r in 0..3 {
                        for flip in [false, true] {
                            let (x, y) = if flip { (2, 1) } else { (1, 2) };
                            let mut s = st.clone();
                            self.assign_vertex(&mut s, [tri[r], tri[(r + x) % 3], tri[(r + y) % 3]]);
                            self.run(s);
                        }
                    }
                }
                return;
            }
            let a = st.cursor;
            let b_raw = d.partner(st.rev[a]);
            if st.num[b_raw] != UNSET {
                let b = st.num[b_raw];
                if !self.emit(&mut st, a, b) {
                    return;
                }
                continue;
            }
            let (v, c) = match d.owner(b_raw) {
                Owner::Corner { vertex, corner } => (vertex, corner),
                Owner::Leg(_) => unreachable!("legs are numbered first"),
            };
            let tri = d.vertices()[v];
            let o1 = tri[(c + 1) % 3];
            let o2 = tri[(c + 2) % 3];
            for (x, y) in [(o1, o2), (o2, o1)] {
                let mut s = st.clone();
                let base = self.assign_vertex(&mut s, [b_raw, x, y]);
                if self.emit(&mut s, a, base) {
                    self.run(s);
                }
            }
            return;
        }
    }

    fn finish(&mut self, st: State) {
        let sign = orientation_sign(self.d, &st.num);
        let order = self.best.as_ref().map_or(Ordering::Less, |b| st.seq.cmp(b));
        match order {
            Ordering::Less => {
                self.best = Some(st.seq);
                self.best_sign = sign;
                self.best_map = st.num;
                self.zero = false;
                self.version += 1;
            }
            Ordering::Equal if sign != self.best_sign => self.zero = true,
            _ => {}
        }
    }
}

/// Parity of the diagram's vertex orders relative to ascending canonical order.
fn orientation_sign(d: &Diagram, num: &[usize]) -> Sign {
    let mut odd = false;
    for tri in d.vertices() {
        let (a, b, c) = (num[tri[0]], num[tri[1]], num[tri[2]]);
        let inversions = (a > b) as u8 + (a > c) as u8 + (b > c) as u8;
        odd ^= inversions % 2 == 1;
    }
    Sign::from_parity(odd)
}

fn shape_prefix(d: &Diagram) -> String {
    let mut s = String::new();
    for (c, row) in d.legs().iter().enumerate() {
        s.push(d.skeleton().kind(c).letter());
        s.push_str(&row.len().to_string());
    }
    s
}

fn encode(prefix: &str, n: usize, seq: &[u16]) -> Digest {
    let mut s = String::from(prefix);
    if n <= ALPHABET.len() {
        s.push('_');
        for &b in seq {
            s.push(ALPHABET[b as usize] as char);
        }
    } else {
        s.push('~');
        for &b in seq {
            let b = b as usize;
            s.push(ALPHABET[b / ALPHABET.len()] as char);
            s.push(ALPHABET[b % ALPHABET.len()] as char);
        }
    }
    Digest(s)
}

pub fn canonicalize(d: &Diagram) -> Canonical {
    let n = d.half_edge_count();
    let u = d.leg_count();
    let mut search = Search {
        d,
        u,
        best: None,
        best_sign: Sign::Plus,
        best_map: Vec::new(),
        zero: false,
        version: 0,
    };
    let st = State {
        num: vec![UNSET; n],
        rev: vec![UNSET; n],
        matched: vec![false; n],
        assigned: 0,
        next_vertex: 0,
        cursor: 0,
        seq: Vec::with_capacity(n / 2),
        less: false,
        seen: 0,
    };
    search.place_legs(0, st);
    let seq = search.best.expect("at least one numbering exists");
    let digest = encode(&shape_prefix(d), n, &seq);
    let sign = if search.zero { Sign::Zero } else { search.best_sign };
    Canonical {
        form: CanonicalDiagram { digest, sign },
        mapping: search.best_map,
    }
}

/// Sign `s` with `d1 ≅ s·d2`, or `None` when the diagrams are not isomorphic.
/// Zero-class diagrams are isomorphic with either sign; that is reported as
/// `Sign::Zero`.
pub fn is_isomorphic(d1: &Diagram, d2: &Diagram) -> Option<Sign> {
    if !d1.skeleton().same_shape(d2.skeleton()) {
        return None;
    }
    let c1 = canonicalize(d1).form;
    let c2 = canonicalize(d2).form;
    (c1.digest == c2.digest).then(|| c1.sign * c2.sign)
}

/// Parses the shape prefix of a digest: component kinds and leg counts.
pub fn digest_shape(digest: &Digest) -> Result<Vec<(ComponentKind, usize)>, DiagramError> {
    let bad = || DiagramError::BadDigest(digest.0.clone());
    let s = digest.as_str();
    let cut = s.find(['_', '~']).ok_or_else(bad)?;
    let mut out = Vec::new();
    let bytes = &s.as_bytes()[..cut];
    let mut i = 0;
    while i < bytes.len() {
        let kind = match bytes[i] {
            b'i' => ComponentKind::Interval,
            b'c' => ComponentKind::Circle,
            _ => return Err(bad()),
        };
        i += 1;
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let count = s[..cut][start..i].parse().map_err(|_| bad())?;
        out.push((kind, count));
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

/// Degree of the class named by a digest, without building the diagram.
pub fn digest_degree(digest: &Digest) -> Result<usize, DiagramError> {
    let u: usize = digest_shape(digest)?.iter().map(|(_, m)| m).sum();
    let s = digest.as_str();
    let cut = s.find(['_', '~']).unwrap();
    let width = if s.as_bytes()[cut] == b'_' { 1 } else { 2 };
    let n = 2 * (s.len() - cut - 1) / width;
    if n < u || !(n - u).is_multiple_of(3) {
        return Err(DiagramError::BadDigest(s.to_string()));
    }
    Ok((u + (n - u) / 3) / 2)
}

/// A skeleton with default component names matching a digest's shape.
pub fn skeleton_for_digest(digest: &Digest) -> Result<Skeleton, DiagramError> {
    let kinds: Vec<ComponentKind> = digest_shape(digest)?.into_iter().map(|(k, _)| k).collect();
    Ok(Skeleton::from_kinds("S", &kinds))
}

/// Rebuilds the canonical representative named by a digest.
pub fn from_digest(skeleton: Arc<Skeleton>, digest: &Digest) -> Result<Diagram, DiagramError> {
    let bad = || DiagramError::BadDigest(digest.0.clone());
    let shape = digest_shape(digest)?;
    if shape.iter().map(|(k, _)| *k).collect::<Vec<_>>() != skeleton.kinds() {
        return Err(bad());
    }
    let s = digest.as_str();
    let cut = s.find(['_', '~']).unwrap();
    let body = &s.as_bytes()[cut + 1..];
    let seq: Vec<usize> = if s.as_bytes()[cut] == b'_' {
        body.iter()
            .map(|&c| digit_value(c).ok_or_else(bad))
            .collect::<Result<_, _>>()?
    } else {
        if !body.len().is_multiple_of(2) {
            return Err(bad());
        }
        body.chunks(2)
            .map(|p| Ok(digit_value(p[0]).ok_or_else(bad)? * ALPHABET.len() + digit_value(p[1]).ok_or_else(bad)?))
            .collect::<Result<_, _>>()?
    };
    let u: usize = shape.iter().map(|(_, m)| m).sum();
    let n = 2 * seq.len();
    if n < u || !(n - u).is_multiple_of(3) {
        return Err(bad());
    }
    let t = (n - u) / 3;
    let mut partner = vec![UNSET; n];
    let mut assigned = u;
    let mut cursor = 0;
    for &b in &seq {
        while cursor < assigned && partner[cursor] != UNSET {
            cursor += 1;
        }
        if cursor == assigned {
            if assigned + 3 > n {
                return Err(bad());
            }
            assigned += 3;
        }
        if b == assigned && assigned + 3 <= n {
            assigned += 3;
        }
        if b >= assigned || b == cursor || partner[b] != UNSET {
            return Err(bad());
        }
        partner[cursor] = b;
        partner[b] = cursor;
    }
    if assigned != n || partner.contains(&UNSET) {
        return Err(bad());
    }
    let mut legs = Vec::new();
    let mut next = 0;
    for (_, m) in &shape {
        legs.push((next..next + m).collect());
        next += m;
    }
    let vertices = (0..t).map(|k| [u + 3 * k, u + 3 * k + 1, u + 3 * k + 2]).collect();
    Diagram::new(skeleton, legs, vertices, partner)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Exhaustive isomorphism search: all vertex bijections and corner
    /// permutations, legs fixed up to circle rotation. Returns the signs of
    /// every isomorphism found.
    pub(crate) fn brute_force_signs(d1: &Diagram, d2: &Diagram) -> Vec<i64> {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for i in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let mut signs = Vec::new();
        if d1.vertex_count() != d2.vertex_count() || d1.half_edge_count() != d2.half_edge_count() {
            return signs;
        }
        if d1.legs().iter().map(Vec::len).collect::<Vec<_>>() != d2.legs().iter().map(Vec::len).collect::<Vec<_>>() {
            return signs;
        }
        let t = d1.vertex_count();
        let corner_perms = perms(3);
        // rotations per component
        let rot_choices: Vec<usize> = d1
            .legs()
            .iter()
            .enumerate()
            .map(|(c, r)| {
                if d1.skeleton().kind(c) == ComponentKind::Circle && !r.is_empty() {
                    r.len()
                } else {
                    1
                }
            })
            .collect();
        let mut rots = vec![vec![]];
        for &k in &rot_choices {
            rots = rots
                .into_iter()
                .flat_map(|r: Vec<usize>| {
                    (0..k).map(move |i| {
                        let mut r = r.clone();
                        r.push(i);
                        r
                    })
                })
                .collect();
        }
        for rot in &rots {
            for vp in perms(t) {
                let mut choice = vec![0usize; t];
                loop {
                    let mut map = vec![UNSET; d1.half_edge_count()];
                    for (c, row) in d1.legs().iter().enumerate() {
                        let m = row.len();
                        for (p, &h) in row.iter().enumerate() {
                            map[h] = d2.legs()[c][(p + rot[c]) % m.max(1)];
                        }
                    }
                    let mut odd = false;
                    for v in 0..t {
                        let cp = &corner_perms[choice[v]];
                        let src = d1.vertices()[v];
                        let dst = d2.vertices()[vp[v]];
                        for k in 0..3 {
                            map[src[k]] = dst[cp[k]];
                        }
                        let inv = (cp[0] > cp[1]) as u8 + (cp[0] > cp[2]) as u8 + (cp[1] > cp[2]) as u8;
                        odd ^= inv % 2 == 1;
                    }
                    if (0..d1.half_edge_count()).all(|h| map[d1.partner(h)] == d2.partner(map[h])) {
                        signs.push(if odd { -1 } else { 1 });
                    }
                    let mut i = 0;
                    while i < t {
                        choice[i] += 1;
                        if choice[i] < 6 {
                            break;
                        }
                        choice[i] = 0;
                        i += 1;
                    }
                    if i == t {
                        break;
                    }
                }
            }
        }
        signs
    }

    #[test]
    fn relabelling_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in fixtures::all() {
            let c = canonicalize(&d).form;
            for _ in 0..200 {
                let e = d.shuffled(&mut rng);
                assert_eq!(canonicalize(&e).form, c);
            }
        }
    }

    #[test]
    fn rotation_of_a_triple_is_even() {
        let theta = fixtures::theta();
        let mut vs = theta.vertices().to_vec();
        vs[0].rotate_left(1);
        let rot = Diagram::new(
            theta.skeleton_arc().clone(),
            theta.legs().to_vec(),
            vs,
            theta.partners().to_vec(),
        )
        .unwrap();
        assert_eq!(canonicalize(&rot).form, canonicalize(&theta).form);
    }

    #[test]
    fn tadpole_is_zero_by_exhaustive_search() {
        let d = fixtures::tadpole();
        let signs = brute_force_signs(&d, &d);
        assert!(signs.contains(&-1));
        assert_eq!(canonicalize(&d).form.sign, Sign::Zero);
    }

    #[test]
    fn y_transposition_is_minus() {
        let y = fixtures::y_diagram();
        assert_eq!(is_isomorphic(&y, &y), Some(Sign::Plus));
        assert_eq!(is_isomorphic(&y, &y.with_reversed_vertex(0)), Some(Sign::Minus));
        assert_eq!(is_isomorphic(&fixtures::chord(), &y), None);
    }

    #[test]
    fn signs_agree_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in fixtures::all() {
            if d.vertex_count() > 4 {
                continue;
            }
            let e = if d.vertex_count() == 0 {
                d.shuffled(&mut rng)
            } else {
                d.shuffled(&mut rng).with_reversed_vertex(0)
            };
            let signs = brute_force_signs(&d, &e);
            assert!(!signs.is_empty());
            let expected = if signs.iter().any(|&s| s != signs[0]) {
                Sign::Zero
            } else {
                Sign::from_parity(signs[0] < 0)
            };
            assert_eq!(
                is_isomorphic(&d, &e),
                Some(expected),
                "{}",
                canonicalize(&d).form.digest
            );
        }
    }

    #[test]
    fn digest_round_trip() {
        for d in fixtures::all() {
            let c = canonicalize(&d);
            let rep = from_digest(d.skeleton_arc().clone(), &c.form.digest).unwrap();
            let again = canonicalize(&rep).form;
            assert_eq!(again.digest, c.form.digest);
            if c.form.sign != Sign::Zero {
                assert_eq!(again.sign, Sign::Plus);
            }
            assert_eq!(digest_degree(&c.form.digest).unwrap(), d.degree());
        }
    }

    #[test]
    fn circle_rotation_invariance() {
        let d = fixtures::parse_one(
            "skeleton S { circle c1; } diagram D on S { legs: a@c1, b@c1, c@c1; vertices: v(x,y,z); edges: a-x, b-y, c-z; }",
        );
        let e = fixtures::parse_one(
            "skeleton S { circle c1; } diagram D on S { legs: b@c1, c@c1, a@c1; vertices: v(x,y,z); edges: a-x, b-y, c-z; }",
        );
        assert_eq!(is_isomorphic(&d, &e), Some(Sign::Plus));
        let f = fixtures::parse_one(
            "skeleton S { interval c1; } diagram D on S { legs: b@c1, c@c1, a@c1; vertices: v(x,y,z); edges: a-x, b-y, c-z; }",
        );
        // on an interval the same leg rotation is a different labelled shape but still isomorphic
        assert!(is_isomorphic(&f, &fixtures::y_diagram()).is_some());
    }

    #[test]
    fn bad_digests_rejected() {
        let sk = Arc::new(Skeleton::interval());
        for s in ["i2_", "x2_1", "i2_11", "i2_0", "i3_5"] {
            let d = Digest::parse(s).unwrap();
            assert!(from_digest(sk.clone(), &d).is_err(), "{s}");
        }
        assert!(Digest::parse("a b").is_err());
    }
}
