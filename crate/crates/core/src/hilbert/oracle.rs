//! Degreewise dimensions by plain linear algebra, independent of Gröbner bases.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::arith::{Monomial, Polynomial};
use crate::cring::{CIRing, Presentation};
use crate::linalg::{Echelon, SparseRow};

/// Dimensions in one degree of a map `F_1 -> F_0` over `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleDegree {
    /// `dim_k (F_0 ⊗ A)_d`.
    pub free_dim: i64,
    /// Rank of the image in degree `d`.
    pub image_rank: i64,
}

struct Coordinates {
    index: HashMap<(Monomial, usize), usize>,
}

impl Coordinates {
    fn new(nvars: usize, target: &[i32], d: i32) -> Coordinates {
        let mut index = HashMap::new();
        let mut cache: HashMap<i32, Vec<Monomial>> = HashMap::new();
        for (c, s) in target.iter().enumerate() {
            let k = d - s;
            if k < 0 {
                continue;
            }
            let monos = cache
                .entry(k)
                .or_insert_with(|| Monomial::all_of_degree(nvars, k as u32));
            for m in monos.iter() {
                let n = index.len();
                index.insert((*m, c), n);
            }
        }
        Coordinates { index }
    }

    fn row(&self, terms: impl Iterator<Item = (Monomial, usize, u32)>) -> SparseRow {
        let mut row: SparseRow = terms
            .map(|(m, c, v)| (self.index[&(m, c)], v))
            .collect();
        row.sort_by_key(|t| t.0);
        row
    }
}

fn multiples(
    ring: &CIRing,
    coords: &Coordinates,
    echelon: &mut Echelon,
    column: &[(usize, &Polynomial)],
    degree: i32,
    d: i32,
) {
    let k = d - degree;
    if k < 0 {
        return;
    }
    for m in Monomial::all_of_degree(ring.nvars(), k as u32) {
        let terms = column.iter().flat_map(|(c, p)| {
            p.terms()
                .iter()
                .map(move |(pm, v)| (pm.mul(&m), *c, *v))
        });
        let row = coords.row(terms);
        echelon.insert(&row);
    }
}

/// Rank in degree `d` of the map given by `columns` (of degrees `col_degrees`)
/// into `⊕ A(-target[i])`, by Gaussian elimination on monomial coordinates.
pub fn oracle_image_rank(
    ring: &CIRing,
    target: &[i32],
    columns: &[Vec<Polynomial>],
    col_degrees: &[i32],
    d: i32,
) -> OracleDegree {
    let coords = Coordinates::new(ring.nvars(), target, d);
    let mut echelon = Echelon::new(ring.poly_ring().field(), coords.index.len());
    let degs = ring.equation_degrees();
    for (c, s) in target.iter().enumerate() {
        for (f, fd) in ring.equations().iter().zip(&degs) {
            multiples(ring, &coords, &mut echelon, &[(c, f)], s + fd, d);
        }
    }
    let contraction = echelon.rank();
    for (col, deg) in columns.iter().zip(col_degrees) {
        let entries: Vec<(usize, &Polynomial)> =
            col.iter().enumerate().filter(|(_, p)| !p.is_zero()).collect();
        multiples(ring, &coords, &mut echelon, &entries, *deg, d);
    }
    OracleDegree {
        free_dim: (coords.index.len() - contraction) as i64,
        image_rank: (echelon.rank() - contraction) as i64,
    }
}

/// `dim_k M_d` for a presented module.
pub fn oracle_dim(m: &Presentation, d: i32) -> i64 {
    let r = oracle_image_rank(m.ring(), m.shifts(), m.relations(), m.relation_degrees(), d);
    r.free_dim - r.image_rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PolyRing;
    use crate::cring::present;
    use crate::hilbert::hilbert_series;
    use std::sync::Arc;

    #[test]
    fn oracle_matches_series_on_a_small_module() {
        let r = Arc::new(PolyRing::with_vars(101, &["x", "y", "z"]).unwrap());
        let a = CIRing::new(r.clone(), vec![r.parse("x^2").unwrap(), r.parse("y^2").unwrap()])
            .unwrap();
        let p = |s: &str| r.parse(s).unwrap();
        let m = present(
            &a,
            vec![0, 1],
            vec![vec![p("x*y"), p("z")], vec![p("y*z"), p("x")]],
        )
        .unwrap();
        let s = hilbert_series(&m);
        for d in 0..8 {
            assert_eq!(oracle_dim(&m, d), s.dim_in_degree(d), "degree {d}");
        }
    }
}
