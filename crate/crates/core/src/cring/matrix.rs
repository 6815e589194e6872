use super::CIRing;
use crate::arith::Polynomial;
use crate::error::{Error, Result};

/// A homogeneous matrix between graded free modules, stored by columns.
/// Column `j` maps the source generator of degree `source[j]` to a vector
/// whose entry `i` has degree `source[j] - target[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrix {
    pub target: Vec<i32>,
    pub source: Vec<i32>,
    pub columns: Vec<Vec<Polynomial>>,
}

impl GradedMatrix {
    pub fn new(target: Vec<i32>, source: Vec<i32>, columns: Vec<Vec<Polynomial>>) -> GradedMatrix {
        assert_eq!(source.len(), columns.len());
        assert!(columns.iter().all(|c| c.len() == target.len()));
        GradedMatrix {
            target,
            source,
            columns,
        }
    }

    pub fn zero(target: Vec<i32>, source: Vec<i32>) -> GradedMatrix {
        let columns = vec![vec![Polynomial::zero(); target.len()]; source.len()];
        GradedMatrix::new(target, source, columns)
    }

    pub fn nrows(&self) -> usize {
        self.target.len()
    }

    pub fn ncols(&self) -> usize {
        self.source.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &Polynomial {
        &self.columns[col][row]
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().flatten().all(|p| p.is_zero())
    }

    /// Checks that every entry has the degree its position requires.
    pub fn is_homogeneous(&self) -> bool {
        self.columns.iter().zip(&self.source).all(|(col, s)| {
            col.iter().zip(&self.target).all(|(p, t)| {
                p.is_zero() || (p.is_homogeneous() && p.degree().unwrap() as i32 == s - t)
            })
        })
    }

    /// `self * other`, reduced in `ring`.
    pub fn mul(&self, ring: &CIRing, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.source.len() != other.target.len() {
            return Err(Error::Usage(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols(),
                other.nrows(),
                other.ncols()
            )));
        }
        let poly = ring.poly_ring();
        let columns = other
            .columns
            .iter()
            .map(|oc| {
                let mut acc = vec![Polynomial::zero(); self.nrows()];
                for (k, b) in oc.iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    for (i, a) in self.columns[k].iter().enumerate() {
                        if !a.is_zero() {
                            acc[i] = poly.add(&acc[i], &poly.mul(a, b));
                        }
                    }
                }
                acc.iter().map(|p| ring.reduce(p)).collect()
            })
            .collect();
        Ok(GradedMatrix::new(
            self.target.clone(),
            other.source.clone(),
            columns,
        ))
    }

    pub fn sub(&self, ring: &CIRing, other: &GradedMatrix) -> GradedMatrix {
        assert_eq!(self.nrows(), other.nrows());
        assert_eq!(self.ncols(), other.ncols());
        let poly = ring.poly_ring();
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(x, y)| ring.reduce(&poly.sub(x, y)))
                    .collect()
            })
            .collect();
        GradedMatrix::new(self.target.clone(), self.source.clone(), columns)
    }

    pub fn add(&self, ring: &CIRing, other: &GradedMatrix) -> GradedMatrix {
        let poly = ring.poly_ring();
        let neg = GradedMatrix::new(
            other.target.clone(),
            other.source.clone(),
            other
                .columns
                .iter()
                .map(|c| c.iter().map(|p| poly.neg(p)).collect())
                .collect(),
        );
        self.sub(ring, &neg)
    }

    pub fn scale(&self, ring: &CIRing, c: u32) -> GradedMatrix {
        let poly = ring.poly_ring();
        GradedMatrix::new(
            self.target.clone(),
            self.source.clone(),
            self.columns
                .iter()
                .map(|col| col.iter().map(|p| poly.scale(p, c)).collect())
                .collect(),
        )
    }

    /// Entries reduced modulo the ring relations.
    pub fn reduced(&self, ring: &CIRing) -> GradedMatrix {
        GradedMatrix::new(
            self.target.clone(),
            self.source.clone(),
            self.columns
                .iter()
                .map(|col| col.iter().map(|p| ring.reduce(p)).collect())
                .collect(),
        )
    }

    /// Constant coefficients, row-major: the map after tensoring with the residue field.
    pub fn constant_part(&self) -> Vec<Vec<u32>> {
        (0..self.nrows())
            .map(|i| self.columns.iter().map(|c| c[i].constant()).collect())
            .collect()
    }

    pub fn identity(shifts: Vec<i32>, ring: &CIRing) -> GradedMatrix {
        let n = shifts.len();
        let columns = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| if i == j { ring.poly_ring().one() } else { Polynomial::zero() })
                    .collect()
            })
            .collect();
        GradedMatrix::new(shifts.clone(), shifts, columns)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PolyRing;
    use std::sync::Arc;

    #[test]
    fn product_reduces_mod_relations() {
        let r = Arc::new(PolyRing::with_vars(101, &["x", "y"]).unwrap());
        let a = CIRing::new(r.clone(), vec![r.parse("x^2").unwrap()]).unwrap();
        let x = GradedMatrix::new(vec![0], vec![1], vec![vec![r.parse("x").unwrap()]]);
        let xx = x.clone();
        let xx = GradedMatrix::new(vec![1], vec![2], xx.columns);
        let p = x.mul(&a, &xx).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.source, vec![2]);
        let q = x.mul(&a.ambient(), &xx).unwrap();
        assert_eq!(q.entry(0, 0), &r.parse("x^2").unwrap());
        assert!(q.is_homogeneous());
    }
}
