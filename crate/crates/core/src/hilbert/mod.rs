//! Hilbert series, multiplicities and the associated graded module.

mod oracle;
mod series;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::Polynomial;
use crate::cring::{minimalize, Presentation};
use crate::error::{Error, Result};
use crate::groebner::{FreeModule, GroebnerBasis, ModuleOrder, Vector};

pub use oracle::{oracle_dim, oracle_image_rank, OracleDegree};
pub use series::{binomial, minimal_monomials, LaurentPoly, MonomialIdealSeries};

/// Numerator of the Hilbert series of `M` over `(1 - z)^n`, from the lead
/// terms of the relation basis.
pub fn numerator(m: &Presentation) -> LaurentPoly {
    let gb = m.relation_basis();
    let mut memo = MonomialIdealSeries::new();
    m.shifts()
        .iter()
        .enumerate()
        .fold(LaurentPoly::zero(), |acc, (c, s)| {
            acc.add(&memo.numerator(&gb.lead_monomials(c)).shift(*s))
        })
}

/// A Hilbert series `N(z) / (1 - z)^n = h(z) / (1 - z)^dim` with `h(1) != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeries {
    nvars: usize,
    numerator: LaurentPoly,
    dim: Option<usize>,
    h: LaurentPoly,
}

impl HilbertSeries {
    pub fn from_numerator(nvars: usize, numerator: LaurentPoly) -> HilbertSeries {
        if numerator.is_zero() {
            return HilbertSeries {
                nvars,
                numerator,
                dim: None,
                h: LaurentPoly::zero(),
            };
        }
        let mut h = numerator.clone();
        let mut dim = nvars;
        while dim > 0 {
            match h.div_one_minus_z() {
                Some(q) => {
                    h = q;
                    dim -= 1;
                }
                None => break,
            }
        }
        HilbertSeries {
            nvars,
            numerator,
            dim: Some(dim),
            h,
        }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.numerator
    }

    /// The reduced numerator `h`.
    pub fn h(&self) -> &LaurentPoly {
        &self.h
    }

    /// Krull dimension; `None` for the zero module.
    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    /// `e_i = h^(i)(1) / i!`, defined for `i <= dim`.
    pub fn e_coefficient(&self, i: usize) -> Result<i64> {
        match self.dim {
            None => Ok(0),
            Some(d) if i <= d => Ok(self.h.taylor_at_one(i)),
            Some(d) => Err(Error::Usage(format!(
                "e_{i} is undefined for a module of dimension {d}"
            ))),
        }
    }

    /// `e_0, ..., e_dim`.
    pub fn multiplicities(&self) -> Vec<i64> {
        match self.dim {
            None => Vec::new(),
            Some(d) => (0..=d).map(|i| self.h.taylor_at_one(i)).collect(),
        }
    }

    /// Dimension of the degree `d` component.
    pub fn dim_in_degree(&self, d: i32) -> i64 {
        let Some(dim) = self.dim else { return 0 };
        self.h
            .terms()
            .filter(|(e, _)| *e <= d)
            .map(|(e, c)| {
                if dim == 0 {
                    if e == d {
                        c
                    } else {
                        0
                    }
                } else {
                    c * binomial((d - e) as i64 + dim as i64 - 1, dim - 1)
                }
            })
            .sum()
    }

    /// `Σ_{j <= d} dim M_j`.
    pub fn cumulative(&self, d: i32) -> i64 {
        if self.h.is_zero() {
            return 0;
        }
        (self.h.low()..=d).map(|j| self.dim_in_degree(j)).sum()
    }
}

/// Hilbert series of the graded module `M`.
pub fn hilbert_series(m: &Presentation) -> HilbertSeries {
    HilbertSeries::from_numerator(m.ring().nvars(), numerator(m))
}

/// The associated graded module `G(M) = ⊕ m^j M / m^(j+1) M` for the
/// maximal ideal filtration, presented with all generators in degree 0.
///
/// The initial form of a homogeneous relation keeps the components on the
/// generators of largest degree. A Gröbner basis in the order that ranks
/// generators by degree first has initial forms generating the initial module.
pub fn associated_graded(m: &Presentation) -> Presentation {
    let m = minimalize(m);
    let ring = m.ring().clone();
    let poly = ring.poly_ring().clone();
    let shifts = m.shifts().to_vec();
    if shifts.iter().all(|s| *s == shifts[0]) {
        let relations = m.relations().to_vec();
        let degrees = m
            .relation_degrees()
            .iter()
            .map(|d| d - shifts.first().copied().unwrap_or(0))
            .collect();
        return minimalize(&Presentation::from_parts(
            ring,
            vec![0; shifts.len()],
            relations,
            degrees,
            false,
        ));
    }
    let weighted = FreeModule::new(
        poly.clone(),
        shifts.clone(),
        ModuleOrder::Weighted(Arc::from(shifts.clone())),
    );
    let gens = m.lifted_generators(&weighted);
    let gb = GroebnerBasis::from_vectors(&weighted, gens);
    let flat = FreeModule::pot(poly.clone(), vec![0; shifts.len()]);
    let mut relations = Vec::new();
    let mut degrees = Vec::new();
    for g in gb.elements() {
        let top = g.iter().map(|t| shifts[t.comp as usize]).max().unwrap();
        let init: Vector = g
            .iter()
            .filter(|t| shifts[t.comp as usize] == top)
            .copied()
            .collect();
        let init = flat.collect(init);
        let col: Vec<Polynomial> = flat.to_columns(&init).iter().map(|p| ring.reduce(p)).collect();
        if col.iter().all(|p| p.is_zero()) {
            continue;
        }
        degrees.push(flat.degree_of(&init).unwrap());
        relations.push(col);
    }
    minimalize(&Presentation::from_parts(
        ring,
        vec![0; shifts.len()],
        relations,
        degrees,
        false,
    ))
}

/// Hilbert series of `G(M)`.
pub fn associated_graded_series(m: &Presentation) -> HilbertSeries {
    hilbert_series(&associated_graded(m))
}

/// `e_i(M)`, read off the Hilbert series of `G(M)`.
pub fn e_coefficient(m: &Presentation, i: usize) -> Result<i64> {
    associated_graded_series(m).e_coefficient(i)
}

/// The Hilbert-Samuel function `λ(M / m^(n+1) M)`.
pub fn hilbert_samuel(m: &Presentation, n: u32) -> i64 {
    associated_graded_series(m).cumulative(n as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PolyRing;
    use crate::cring::{present, CIRing};

    fn ring_x2y2() -> (Arc<PolyRing>, Arc<crate::cring::CIRing>) {
        let r = Arc::new(PolyRing::with_vars(101, &["x", "y"]).unwrap());
        let a = CIRing::new(r.clone(), vec![r.parse("x^2*y^2").unwrap()]).unwrap();
        (r, a)
    }

    #[test]
    fn series_of_the_ring() {
        let (_, a) = ring_x2y2();
        let s = hilbert_series(&Presentation::free(&a, vec![0]));
        assert_eq!(s.dim(), Some(1));
        assert_eq!(s.multiplicities(), vec![4, 6]);
        assert_eq!(s.dim_in_degree(0), 1);
        assert_eq!(s.dim_in_degree(3), 4);
        assert_eq!(s.dim_in_degree(10), 4);
        assert!(s.e_coefficient(2).is_err());
    }

    #[test]
    fn shifted_free_module() {
        let (_, a) = ring_x2y2();
        let s = hilbert_series(&Presentation::free(&a, vec![2]));
        assert_eq!(s.dim_in_degree(1), 0);
        assert_eq!(s.dim_in_degree(2), 1);
        // e_1 of the graded module sees the shift, G(M) does not
        assert_eq!(s.multiplicities(), vec![4, 14]);
        assert_eq!(
            associated_graded_series(&Presentation::free(&a, vec![2])).multiplicities(),
            vec![4, 6]
        );
    }

    #[test]
    fn associated_graded_of_mixed_degrees() {
        let (r, a) = ring_x2y2();
        let p = |s: &str| r.parse(s).unwrap();
        // generators in degrees 0 and 1, relations x^2 e_0 - y e_1 and x e_1
        let m = present(&a, vec![0, 1], vec![vec![p("x^2"), p("-y")], vec![p("0"), p("x")]]).unwrap();
        let g = associated_graded(&m);
        assert_eq!(g.shifts(), &[0, 0]);
        // G(M) and M have the same multiplicity but can differ in e_1
        let gm = hilbert_series(&g);
        let mm = hilbert_series(&m);
        assert_eq!(gm.dim(), mm.dim());
        assert_eq!(gm.e_coefficient(0).unwrap(), mm.e_coefficient(0).unwrap());
        for n in 0..6 {
            assert!(hilbert_samuel(&m, n) <= hilbert_samuel(&m, n + 1));
        }
    }
}
