//! Complete intersection rings `A = Q/(f_1, ..., f_c)` and finitely presented
//! graded modules over them.

mod matrix;
mod mcm;
mod presentation;

use std::sync::Arc;

use crate::arith::{Monomial, PolyRing, Polynomial};
use crate::error::{Error, Result};
use crate::groebner::{FreeModule, GroebnerBasis, Input, Term, Vector};
use crate::hilbert::{LaurentPoly, MonomialIdealSeries};

pub use matrix::GradedMatrix;
pub use mcm::{mcm_check, McmOptions, McmStatus};
pub use presentation::{a_syzygies, minimalize, present, subquotient, Presentation};

/// `A = Q/(f)` where `f` is a homogeneous regular sequence. With no
/// equations this is the polynomial ring itself.
#[derive(Clone, Debug)]
pub struct CIRing {
    poly: Arc<PolyRing>,
    equations: Vec<Polynomial>,
    ideal: GroebnerBasis,
    numerator: LaurentPoly,
}

impl CIRing {
    /// Builds `Q/(f)`, checking that `f` is a regular sequence by comparing
    /// Hilbert series with `∏ (1 - z^deg f_j)`.
    pub fn new(poly: Arc<PolyRing>, equations: Vec<Polynomial>) -> Result<Arc<CIRing>> {
        if equations.len() > poly.nvars() {
            return Err(Error::Usage(format!(
                "{} equations in {} variables cannot form a regular sequence",
                equations.len(),
                poly.nvars()
            )));
        }
        let mut expected = LaurentPoly::one();
        for f in &equations {
            poly.validate(f)?;
            if !f.is_homogeneous() {
                return Err(Error::Inhomogeneous(format!("ring relation {}", poly.format(f))));
            }
            match f.degree() {
                Some(d) if d >= 2 => expected = expected.mul(&LaurentPoly::one_minus_z_pow(d)),
                _ => {
                    return Err(Error::Usage(format!(
                        "ring relation {} must have degree at least 2",
                        poly.format(f)
                    )))
                }
            }
        }
        let ideal = ideal_basis(&poly, &equations);
        let numerator = MonomialIdealSeries::new().numerator(&ideal.lead_monomials(0));
        if numerator != expected {
            return Err(Error::NotRegularSequence {
                expected: dense_coeffs(&expected),
                found: dense_coeffs(&numerator),
            });
        }
        Ok(Arc::new(CIRing {
            poly,
            equations,
            ideal,
            numerator,
        }))
    }

    /// Same as [`CIRing::new`].
    pub fn make_ring(poly: Arc<PolyRing>, equations: Vec<Polynomial>) -> Result<Arc<CIRing>> {
        CIRing::new(poly, equations)
    }

    /// The polynomial ring `Q` viewed as a complete intersection of codimension 0.
    pub fn polynomial(poly: Arc<PolyRing>) -> Arc<CIRing> {
        CIRing::new(poly, Vec::new()).expect("empty sequence is regular")
    }

    /// `Q` itself, with no equations.
    pub fn ambient(&self) -> Arc<CIRing> {
        CIRing::polynomial(self.poly.clone())
    }

    pub fn poly_ring(&self) -> &Arc<PolyRing> {
        &self.poly
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn equation_degrees(&self) -> Vec<i32> {
        self.equations
            .iter()
            .map(|f| f.degree().unwrap() as i32)
            .collect()
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    /// Codimension `c`.
    pub fn codim(&self) -> usize {
        self.equations.len()
    }

    /// Krull dimension `n - c`.
    pub fn dim(&self) -> usize {
        self.nvars() - self.codim()
    }

    /// Numerator of the Hilbert series of `A` over `(1 - z)^n`.
    pub fn hilbert_numerator(&self) -> &LaurentPoly {
        &self.numerator
    }

    /// The Gröbner basis of `(f)`.
    pub fn ideal(&self) -> &GroebnerBasis {
        &self.ideal
    }

    pub fn same_ring(&self, other: &CIRing) -> bool {
        self.poly == other.poly && self.equations == other.equations
    }

    /// Normal form of `p` modulo `(f)`.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        if self.equations.is_empty() || p.is_zero() {
            return p.clone();
        }
        let m = self.ideal.module();
        let r = self.ideal.reduce(&m.from_columns(std::slice::from_ref(p)));
        m.to_columns(&r).pop().unwrap()
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.reduce(&self.poly.mul(a, b))
    }

    /// Writes `p = Σ f_j q_j`. Fails if `p` is not in `(f)`.
    pub fn divide_by_equations(&self, p: &Polynomial) -> Result<Vec<Polynomial>> {
        let c = self.codim();
        if p.is_zero() {
            return Ok(vec![Polynomial::zero(); c]);
        }
        let m = self.ideal.module();
        let div = self.ideal.divide(&m.from_columns(std::slice::from_ref(p)));
        if !div.remainder.is_empty() {
            return Err(Error::Consistency(format!(
                "{} is not in the ideal of the ring relations",
                self.poly.format(p)
            )));
        }
        let tracking = self.ideal.tracking().expect("tracked ideal basis");
        let rm = &tracking.module;
        let mut acc: Vector = Vec::new();
        for (q, rep) in div.quotients.iter().zip(&tracking.reps) {
            if !q.is_zero() {
                let part = rm.mul_poly(q, rep);
                acc = rm.collect(acc.into_iter().chain(part).collect());
            }
        }
        Ok(rm.to_columns(&acc))
    }
}

fn ideal_basis(poly: &Arc<PolyRing>, equations: &[Polynomial]) -> GroebnerBasis {
    let module = FreeModule::pot(poly.clone(), vec![0]);
    let degrees: Vec<i32> = equations
        .iter()
        .map(|f| f.degree().unwrap_or(0) as i32)
        .collect();
    let rep_module = FreeModule::pot(poly.clone(), degrees);
    let inputs = equations
        .iter()
        .enumerate()
        .map(|(j, f)| Input {
            vector: module.from_columns(std::slice::from_ref(f)),
            rep: vec![Term {
                mon: Monomial::ONE,
                comp: j as u32,
                coef: 1,
            }],
            rank: 0,
        })
        .collect();
    GroebnerBasis::tracked(&module, inputs, rep_module).0
}

fn dense_coeffs(p: &LaurentPoly) -> Vec<i64> {
    if p.is_zero() {
        return vec![0];
    }
    (p.low().min(0)..=p.high()).map(|e| p.coeff(e)).collect()
}
