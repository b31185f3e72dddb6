//! Exact linear algebra over the rationals (dense solves, sparse nullspaces).

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

pub type SparseRow = BTreeMap<usize, Q>;

/// Row-reduced echelon form kept as pivot column -> row with a unit pivot.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
    entries: usize,
    max_entries: usize,
}

impl Echelon {
    pub fn new(max_entries: usize) -> Self {
        Echelon {
            pivots: BTreeMap::new(),
            entries: 0,
            max_entries,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the current pivots; returns the remainder.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut cursor = 0usize;
        loop {
            let next = row
                .range(cursor..)
                .find(|(c, _)| self.pivots.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((col, coef)) = next else { break };
            for (c, v) in &self.pivots[&col] {
                let e = row.entry(*c).or_insert_with(Q::zero);
                *e -= &coef * v;
                if e.is_zero() {
                    row.remove(c);
                }
            }
            cursor = col + 1;
        }
        row
    }

    /// Adds a row; returns true if the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> Result<bool> {
        let row = self.reduce(row);
        let Some((&lead, lv)) = row.iter().next() else {
            return Ok(false);
        };
        let inv = Q::one() / lv;
        let row: SparseRow = row.into_iter().map(|(c, v)| (c, v * &inv)).collect();
        self.entries += row.len();
        if self.entries > self.max_entries {
            return Err(Error::Resource(format!(
                "exact elimination exceeded {} stored entries",
                self.max_entries
            )));
        }
        self.pivots.insert(lead, row);
        Ok(true)
    }

    /// Back-substitutes so each pivot column is zero in every other row.
    pub fn into_reduced(mut self) -> BTreeMap<usize, SparseRow> {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &p in &cols {
            let prow = self.pivots[&p].clone();
            for (&q, row) in self.pivots.iter_mut() {
                if q == p {
                    continue;
                }
                if let Some(coef) = row.get(&p).cloned() {
                    for (c, v) in &prow {
                        let e = row.entry(*c).or_insert_with(Q::zero);
                        *e -= &coef * v;
                        if e.is_zero() {
                            row.remove(c);
                        }
                    }
                }
            }
        }
        self.pivots
    }
}

/// Basis of `{x : A x = 0}` for a sparse matrix with `ncols` columns.
/// Each basis vector has a 1 in one free column and 0 in the others.
pub fn nullspace(rows: Vec<SparseRow>, ncols: usize, max_entries: usize) -> Result<Vec<Vec<Q>>> {
    let mut ech = Echelon::new(max_entries);
    for r in rows {
        ech.insert(r)?;
    }
    let red = ech.into_reduced();
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !red.contains_key(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (&p, row) in &red {
            if let Some(x) = row.get(&free) {
                v[p] = -x.clone();
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// Solves `A x = b` for dense `A` (m x n). Free variables are set to zero.
/// Returns `None` when the system is inconsistent.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.first().map_or(0, |r| r.len());
    let mut ech = Echelon::new(usize::MAX);
    for (row, rhs) in a.iter().zip(b) {
        let mut r: SparseRow = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect();
        if !rhs.is_zero() {
            r.insert(n, rhs.clone());
        }
        ech.insert(r).ok()?;
    }
    let red = ech.into_reduced();
    if red.contains_key(&n) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (&p, row) in &red {
        if let Some(v) = row.get(&n) {
            x[p] = v.clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn row(v: &[(usize, i64)]) -> SparseRow {
        v.iter().map(|(c, x)| (*c, q(*x))).collect()
    }

    #[test]
    fn nullspace_small() {
        // x0 + x1 = 0, x1 - x2 = 0
        let ns = nullspace(
            vec![row(&[(0, 1), (1, 1)]), row(&[(1, 1), (2, -1)])],
            3,
            100,
        )
        .unwrap();
        assert_eq!(ns, vec![vec![q(-1), q(1), q(1)]]);
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let x = solve(&a, &[q(3), q(4)]).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(solve(&a, &[q(1), q(3)]).is_none());
        let x = solve(&a, &[qf(1, 2), q(1)]).unwrap();
        assert_eq!(x, vec![qf(1, 2), q(0)]);
    }

    #[test]
    fn resource_limit() {
        let rows = (0..10).map(|i| row(&[(i, 1), (i + 1, 1)])).collect();
        assert!(matches!(nullspace(rows, 11, 5), Err(Error::Resource(_))));
    }
}
