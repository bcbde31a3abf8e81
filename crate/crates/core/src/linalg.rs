//! Exact elimination over the integers.
//!
//! [`SparseEchelon`] keeps integer rows in primitive form and reduces by
//! cross-multiplication, remembering how each echelon row was built so that
//! a vector in the span can be written back in terms of the original rows
//! with rational coefficients at the end. [`dense_rank`] is an independent
//! Bareiss elimination on a dense matrix, used to cross-check ranks.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lincomb::Rational;

pub type SparseVec = BTreeMap<usize, BigInt>;

fn content(v: &SparseVec) -> BigInt {
    v.values().fold(BigInt::zero(), |g, x| g.gcd(x))
}

#[derive(Clone, Debug)]
struct EchelonRow {
    pivot: usize,
    row: SparseVec,
    origin: usize,
    /// `original[origin] = scale * row + sum(coef_j * echelon_j)`
    scale: Rational,
    combo: Vec<(usize, Rational)>,
}

/// Result of reducing a vector: `v = scale * remainder + sum(coef * echelon)`.
struct Reduced {
    remainder: SparseVec,
    scale: Rational,
    combo: BTreeMap<usize, Rational>,
}

#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    rows: Vec<EchelonRow>,
    pivot_row: HashMap<usize, usize>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.pivot)
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    fn reduce(&self, mut w: SparseVec) -> Reduced {
        let mut scale = Rational::one();
        let mut combo: BTreeMap<usize, Rational> = BTreeMap::new();
        let g = content(&w);
        if !g.is_zero() && !g.is_one() {
            for x in w.values_mut() {
                *x /= &g;
            }
            scale *= Rational::from_integer(g);
        }
        let mut cursor = 0;
        loop {
            let hit = w
                .range(cursor..)
                .find(|(c, _)| self.pivot_row.contains_key(c))
                .map(|(&c, q)| (c, q.clone()));
            let Some((col, q)) = hit else { break };
            let k = self.pivot_row[&col];
            let e = &self.rows[k];
            let p = &e.row[&col];
            let g = p.gcd(&q);
            let alpha = p / &g;
            let beta = &q / &g;
            // w' = alpha*w - beta*e
            for x in w.values_mut() {
                *x *= &alpha;
            }
            for (c, x) in &e.row {
                let entry = w.entry(*c).or_insert_with(BigInt::zero);
                *entry -= &beta * x;
                if entry.is_zero() {
                    w.remove(c);
                }
            }
            let a = Rational::from_integer(alpha);
            scale /= &a;
            *combo.entry(k).or_insert_with(Rational::zero) += &scale * Rational::from_integer(beta);
            let g2 = content(&w);
            if g2.is_zero() {
                break;
            }
            if !g2.is_one() {
                for x in w.values_mut() {
                    *x /= &g2;
                }
                scale *= Rational::from_integer(g2);
            }
            cursor = col + 1;
        }
        combo.retain(|_, v| !v.is_zero());
        Reduced {
            remainder: w,
            scale,
            combo,
        }
    }

    /// Adds a row; returns whether it increased the rank.
    pub fn insert(&mut self, row: SparseVec, origin: usize) -> bool {
        let Reduced {
            mut remainder,
            mut scale,
            combo,
        } = self.reduce(row);
        let Some((&pivot, lead)) = remainder.iter().next() else {
            return false;
        };
        if lead.is_negative() {
            for x in remainder.values_mut() {
                *x = -&*x;
            }
            scale = -scale;
        }
        self.pivot_row.insert(pivot, self.rows.len());
        self.rows.push(EchelonRow {
            pivot,
            row: remainder,
            origin,
            scale,
            combo: combo.into_iter().collect(),
        });
        true
    }

    /// Unique representative of `v` modulo the row span: no entries on pivot columns.
    pub fn normal_form(&self, v: &BTreeMap<usize, Rational>) -> BTreeMap<usize, Rational> {
        let (ints, denom) = clear_denominators(v);
        let r = self.reduce(ints);
        let factor = r.scale / Rational::from_integer(denom);
        r.remainder
            .into_iter()
            .map(|(c, x)| (c, &factor * Rational::from_integer(x)))
            .collect()
    }

    /// Coefficients on the original rows (by origin index) summing to `v`,
    /// or `None` when `v` is outside the span.
    pub fn express(&self, v: &BTreeMap<usize, Rational>) -> Option<BTreeMap<usize, Rational>> {
        let (ints, denom) = clear_denominators(v);
        let r = self.reduce(ints);
        if !r.remainder.is_empty() {
            return None;
        }
        let d = Rational::from_integer(denom);
        let mut coef: Vec<Rational> = vec![Rational::zero(); self.rows.len()];
        for (k, c) in r.combo {
            coef[k] = c / &d;
        }
        let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
        for k in (0..self.rows.len()).rev() {
            if coef[k].is_zero() {
                continue;
            }
            let row = &self.rows[k];
            let a = &coef[k] / &row.scale;
            *out.entry(row.origin).or_insert_with(Rational::zero) += &a;
            for (j, b) in &row.combo {
                let delta = &a * b;
                coef[*j] -= delta;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Some(out)
    }
}

fn clear_denominators(v: &BTreeMap<usize, Rational>) -> (SparseVec, BigInt) {
    let denom = v.values().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints = v
        .iter()
        .filter(|(_, x)| !x.is_zero())
        .map(|(&c, x)| (c, x.numer() * (&denom / x.denom())))
        .collect();
    (ints, denom)
}

/// Rank by fraction-free (Bareiss) elimination on a dense copy.
pub fn dense_rank(rows: &[SparseVec], ncols: usize) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let mut d = vec![BigInt::zero(); ncols];
            for (&c, x) in r {
                d[c] = x.clone();
            }
            d
        })
        .collect();
    let nrows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(r) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, r);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = pivot_row[col].clone();
        for row in rest.iter_mut() {
            let factor = row[col].clone();
            for j in col + 1..ncols {
                let v = &pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincomb::rat;

    fn sv(entries: &[(usize, i64)]) -> SparseVec {
        entries
            .iter()
            .map(|&(c, x)| (c, BigInt::from(x)))
            .filter(|(_, x)| !x.is_zero())
            .collect()
    }

    fn rv(entries: &[(usize, i64)]) -> BTreeMap<usize, Rational> {
        entries.iter().map(|&(c, x)| (c, rat(x))).collect()
    }

    #[test]
    fn ranks_agree_on_small_matrices() {
        let rows = vec![
            sv(&[(0, 2), (1, 4), (2, 6)]),
            sv(&[(0, 1), (1, 2), (2, 3)]),
            sv(&[(1, 3), (2, 1)]),
            sv(&[(0, 5), (2, -7)]),
        ];
        let mut e = SparseEchelon::new();
        for (i, r) in rows.iter().enumerate() {
            e.insert(r.clone(), i);
        }
        assert_eq!(e.rank(), 3);
        assert_eq!(dense_rank(&rows, 3), 3);
    }

    #[test]
    fn express_re_substitutes() {
        let rows = [
            sv(&[(0, 2), (1, -3)]),
            sv(&[(1, 5), (2, 7)]),
            sv(&[(0, 4), (2, 14), (1, 4)]),
        ];
        let mut e = SparseEchelon::new();
        for (i, r) in rows.iter().enumerate() {
            e.insert(r.clone(), i);
        }
        let target = rv(&[(0, 6), (1, 1), (2, 14)]);
        let coef = e.express(&target).expect("in span");
        let mut sum: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, c) in &coef {
            for (col, x) in &rows[*i] {
                *sum.entry(*col).or_insert_with(Rational::zero) += c * Rational::from_integer(x.clone());
            }
        }
        sum.retain(|_, v| !v.is_zero());
        assert_eq!(sum, target);
        assert_eq!(e.rank(), 2);
        assert!(e.express(&rv(&[(0, 1)])).is_none());
    }

    #[test]
    fn zero_is_in_span() {
        let e = SparseEchelon::new();
        assert_eq!(e.express(&BTreeMap::new()), Some(BTreeMap::new()));
        assert!(e.express(&rv(&[(0, 1)])).is_none());
    }
}
