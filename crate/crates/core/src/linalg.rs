//! Sparse row echelon forms over a prime field.

use crate::arith::PrimeField;

/// Sparse row: `(column, value)` pairs, columns strictly increasing, values nonzero.
pub type SparseRow = Vec<(usize, u32)>;

/// An incrementally built echelon basis of a row space. Pivot rows are monic
/// and only have entries at or right of their pivot column.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: PrimeField,
    ncols: usize,
    pivot_of: Vec<Option<usize>>,
    rows: Vec<SparseRow>,
    scratch: Vec<u32>,
}

impl Echelon {
    pub fn new(field: PrimeField, ncols: usize) -> Echelon {
        Echelon {
            field,
            ncols,
            pivot_of: vec![None; ncols],
            rows: Vec::new(),
            scratch: vec![0; ncols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of[col].is_some()
    }

    fn sweep(&mut self, row: &[(usize, u32)]) -> Option<usize> {
        let f = self.field;
        for &(c, v) in row {
            self.scratch[c] = f.add(self.scratch[c], v);
        }
        let start = row.first().map_or(self.ncols, |t| t.0);
        let mut first_free = None;
        for c in start..self.ncols {
            let v = self.scratch[c];
            if v == 0 {
                continue;
            }
            match self.pivot_of[c] {
                Some(k) => {
                    for &(j, w) in &self.rows[k] {
                        self.scratch[j] = f.sub(self.scratch[j], f.mul(v, w));
                    }
                }
                None => {
                    if first_free.is_none() {
                        first_free = Some(c);
                    }
                }
            }
        }
        first_free
    }

    fn drain_scratch(&mut self, from: usize) -> SparseRow {
        let mut out = Vec::new();
        for c in from..self.ncols {
            let v = std::mem::take(&mut self.scratch[c]);
            if v != 0 {
                out.push((c, v));
            }
        }
        out
    }

    /// The unique representative of `row` modulo the span with zeros in all pivot columns.
    pub fn reduce(&mut self, row: &[(usize, u32)]) -> SparseRow {
        let start = row.first().map_or(self.ncols, |t| t.0);
        match self.sweep(row) {
            Some(_) => self.drain_scratch(start),
            None => {
                self.drain_scratch(start);
                Vec::new()
            }
        }
    }

    /// Adds `row` to the basis. Returns whether it was independent.
    pub fn insert(&mut self, row: &[(usize, u32)]) -> bool {
        let start = row.first().map_or(self.ncols, |t| t.0);
        match self.sweep(row) {
            None => {
                self.drain_scratch(start);
                false
            }
            Some(p) => {
                let mut r = self.drain_scratch(start);
                let inv = self.field.inv(r[0].1).unwrap();
                for t in &mut r {
                    t.1 = self.field.mul(t.1, inv);
                }
                debug_assert_eq!(r[0].0, p);
                self.pivot_of[p] = Some(self.rows.len());
                self.rows.push(r);
                true
            }
        }
    }
}

/// Rank of a dense matrix given as rows.
pub fn dense_rank(field: PrimeField, rows: &[Vec<u32>]) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut e = Echelon::new(field, ncols);
    for r in rows {
        let sparse: SparseRow = r
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(c, v)| (c, *v))
            .collect();
        e.insert(&sparse);
    }
    e.rank()
}

/// Inverse of a square dense matrix, if it is invertible.
pub fn dense_inverse(field: PrimeField, m: &[Vec<u32>]) -> Option<Vec<Vec<u32>>> {
    let n = m.len();
    let mut a: Vec<Vec<u32>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "matrix must be square");
            let mut r = row.clone();
            r.extend((0..n).map(|j| u32::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        let inv = field.inv(a[col][col]).unwrap();
        for v in a[col].iter_mut() {
            *v = field.mul(*v, inv);
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let c = a[r][col];
                let pivot = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot) {
                    *x = field.sub(*x, field.mul(c, *y));
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_ranks() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(dense_rank(f, &[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(dense_rank(f, &[vec![1, 2], vec![2, 5]]), 2);
        assert_eq!(dense_rank(f, &[vec![0, 0, 0]]), 0);
        assert_eq!(dense_rank(f, &[]), 0);
    }

    #[test]
    fn reduce_is_canonical() {
        let f = PrimeField::new(101).unwrap();
        let mut e = Echelon::new(f, 3);
        assert!(e.insert(&[(0, 1), (1, 1)]));
        let a = e.reduce(&[(0, 1)]);
        let b = e.reduce(&[(1, 100)]);
        assert_eq!(a, b);
        assert_eq!(a, vec![(1, 100)]);
    }

    #[test]
    fn inverse() {
        let f = PrimeField::new(101).unwrap();
        let m = vec![vec![2, 1], vec![1, 1]];
        let inv = dense_inverse(f, &m).unwrap();
        assert_eq!(inv, vec![vec![1, 100], vec![100, 2]]);
        assert!(dense_inverse(f, &[vec![1, 2], vec![2, 4]]).is_none());
    }

    proptest! {
        #[test]
        fn rank_of_transpose(rows in prop::collection::vec(prop::collection::vec(0u32..5, 4), 0..6)) {
            let f = PrimeField::new(5).unwrap();
            let r = dense_rank(f, &rows);
            if !rows.is_empty() {
                let t: Vec<Vec<u32>> = (0..4).map(|c| rows.iter().map(|r| r[c]).collect()).collect();
                prop_assert_eq!(r, dense_rank(f, &t));
            }
            prop_assert!(r <= rows.len().min(4));
        }
    }
}
