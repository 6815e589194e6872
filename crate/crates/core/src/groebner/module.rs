use std::cmp::Ordering;
use std::sync::Arc;

use crate::arith::{ModuleElement, Monomial, PolyRing, Polynomial};
use crate::error::{Error, Result};

/// One term `coef * mon * e_comp` of a free-module vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub mon: Monomial,
    pub comp: u32,
    pub coef: u32,
}

/// Sparse vector: terms strictly descending in the module order, no zero coefficients.
pub type Vector = Vec<Term>;

/// Orders on the terms of a graded free module. Every variant compares the
/// total degree `deg(mon) + shift(comp)` first.
#[derive(Clone, Debug)]
pub enum ModuleOrder {
    /// Position over term: smaller basis index first, then the ring order.
    PositionOverTerm,
    /// Basis vectors with larger weight first, then the ring order, then position.
    Weighted(Arc<[i32]>),
    /// Order induced by the lead terms of a Gröbner basis (Schreyer's order).
    Schreyer(Arc<SchreyerFrame>),
}

#[derive(Clone, Debug)]
pub struct SchreyerFrame {
    pub base: FreeModule,
    pub leads: Vec<(Monomial, u32)>,
}

/// A graded free module `⊕ Q(-shift_i)` over a polynomial ring, with a term order.
#[derive(Clone, Debug)]
pub struct FreeModule {
    ring: Arc<PolyRing>,
    shifts: Arc<[i32]>,
    order: ModuleOrder,
}

impl FreeModule {
    pub fn new(ring: Arc<PolyRing>, shifts: Vec<i32>, order: ModuleOrder) -> FreeModule {
        if let ModuleOrder::Weighted(w) = &order {
            assert_eq!(w.len(), shifts.len(), "one weight per basis vector");
        }
        if let ModuleOrder::Schreyer(f) = &order {
            assert_eq!(f.leads.len(), shifts.len(), "one lead term per basis vector");
        }
        FreeModule {
            ring,
            shifts: shifts.into(),
            order,
        }
    }

    pub fn pot(ring: Arc<PolyRing>, shifts: Vec<i32>) -> FreeModule {
        FreeModule::new(ring, shifts, ModuleOrder::PositionOverTerm)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn shifts(&self) -> &[i32] {
        &self.shifts
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn order(&self) -> &ModuleOrder {
        &self.order
    }

    #[inline]
    pub fn term_degree(&self, mon: &Monomial, comp: u32) -> i32 {
        mon.degree() as i32 + self.shifts[comp as usize]
    }

    pub fn cmp_terms(&self, am: &Monomial, ac: u32, bm: &Monomial, bc: u32) -> Ordering {
        let da = self.term_degree(am, ac);
        let db = self.term_degree(bm, bc);
        da.cmp(&db).then_with(|| match &self.order {
            ModuleOrder::PositionOverTerm => bc.cmp(&ac).then_with(|| self.ring.cmp(am, bm)),
            ModuleOrder::Weighted(w) => w[ac as usize]
                .cmp(&w[bc as usize])
                .then_with(|| self.ring.cmp(am, bm))
                .then_with(|| bc.cmp(&ac)),
            ModuleOrder::Schreyer(frame) => {
                let (la, ca) = frame.leads[ac as usize];
                let (lb, cb) = frame.leads[bc as usize];
                frame
                    .base
                    .cmp_terms(&am.mul(&la), ca, &bm.mul(&lb), cb)
                    .then_with(|| bc.cmp(&ac))
            }
        })
    }

    #[inline]
    fn cmp_t(&self, a: &Term, b: &Term) -> Ordering {
        self.cmp_terms(&a.mon, a.comp, &b.mon, b.comp)
    }

    /// Sorts and merges arbitrary terms into a normalized vector.
    pub fn collect(&self, mut terms: Vec<Term>) -> Vector {
        let f = self.ring.field();
        terms.sort_by(|a, b| self.cmp_t(b, a));
        let mut out: Vector = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.mon == t.mon && last.comp == t.comp => {
                    last.coef = f.add(last.coef, t.coef);
                    if last.coef == 0 {
                        out.pop();
                    }
                }
                _ if t.coef == 0 => {}
                _ => out.push(t),
            }
        }
        out
    }

    /// `a + c * m * b`; multiplying by a monomial keeps `b` sorted.
    pub fn axpy(&self, a: &[Term], c: u32, m: &Monomial, b: &[Term]) -> Vector {
        if c == 0 || b.is_empty() {
            return a.to_vec();
        }
        let f = self.ring.field();
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while j < b.len() {
            let bt = Term {
                mon: b[j].mon.mul(m),
                comp: b[j].comp,
                coef: f.mul(c, b[j].coef),
            };
            while i < a.len() && self.cmp_t(&a[i], &bt) == Ordering::Greater {
                out.push(a[i]);
                i += 1;
            }
            if i < a.len() && a[i].mon == bt.mon && a[i].comp == bt.comp {
                let s = f.add(a[i].coef, bt.coef);
                if s != 0 {
                    out.push(Term { coef: s, ..bt });
                }
                i += 1;
            } else {
                out.push(bt);
            }
            j += 1;
        }
        out.extend_from_slice(&a[i..]);
        out
    }

    pub fn scale(&self, a: &[Term], c: u32) -> Vector {
        if c == 0 {
            return Vec::new();
        }
        let f = self.ring.field();
        a.iter()
            .map(|t| Term {
                coef: f.mul(t.coef, c),
                ..*t
            })
            .collect()
    }

    pub fn mul_monomial(&self, a: &[Term], m: &Monomial) -> Vector {
        a.iter()
            .map(|t| Term {
                mon: t.mon.mul(m),
                ..*t
            })
            .collect()
    }

    /// `poly * v` where `v` lives in `self`.
    pub fn mul_poly(&self, poly: &Polynomial, v: &[Term]) -> Vector {
        let f = self.ring.field();
        let mut terms = Vec::with_capacity(poly.len() * v.len());
        for (m, c) in poly.terms() {
            for t in v {
                terms.push(Term {
                    mon: t.mon.mul(m),
                    comp: t.comp,
                    coef: f.mul(*c, t.coef),
                });
            }
        }
        self.collect(terms)
    }

    pub fn degree_of(&self, v: &[Term]) -> Option<i32> {
        v.first().map(|t| self.term_degree(&t.mon, t.comp))
    }

    pub fn is_homogeneous(&self, v: &[Term]) -> bool {
        match self.degree_of(v) {
            None => true,
            Some(d) => v.iter().all(|t| self.term_degree(&t.mon, t.comp) == d),
        }
    }

    pub fn from_element(&self, e: &ModuleElement) -> Result<Vector> {
        if e.rank() != self.rank() {
            return Err(Error::RingMismatch(format!(
                "element of rank {} in a module of rank {}",
                e.rank(),
                self.rank()
            )));
        }
        let mut terms = Vec::new();
        for (i, p) in e.components.iter().enumerate() {
            self.ring.validate(p)?;
            for (m, c) in p.terms() {
                terms.push(Term {
                    mon: *m,
                    comp: i as u32,
                    coef: *c,
                });
            }
        }
        Ok(self.collect(terms))
    }

    pub fn from_columns(&self, column: &[Polynomial]) -> Vector {
        let mut terms = Vec::new();
        for (i, p) in column.iter().enumerate() {
            for (m, c) in p.terms() {
                terms.push(Term {
                    mon: *m,
                    comp: i as u32,
                    coef: *c,
                });
            }
        }
        self.collect(terms)
    }

    pub fn to_columns(&self, v: &[Term]) -> Vec<Polynomial> {
        let mut parts: Vec<Vec<(Monomial, i64)>> = vec![Vec::new(); self.rank()];
        for t in v {
            parts[t.comp as usize].push((t.mon, t.coef as i64));
        }
        parts
            .into_iter()
            .map(|p| self.ring.from_terms(p))
            .collect()
    }

    pub fn to_element(&self, v: &[Term]) -> ModuleElement {
        ModuleElement::new(self.to_columns(v), self.shifts.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e).unwrap()
    }

    #[test]
    fn pot_prefers_earlier_components_in_one_degree() {
        let ring = Arc::new(PolyRing::with_vars(101, &["x", "y"]).unwrap());
        let f = FreeModule::pot(ring, vec![0, 1]);
        assert_eq!(f.cmp_terms(&m(&[0, 2]), 0, &m(&[1, 0]), 1), Ordering::Greater);
        assert_eq!(f.cmp_terms(&m(&[0, 1]), 0, &m(&[1, 0]), 1), Ordering::Less);
        assert_eq!(f.cmp_terms(&m(&[0, 1]), 0, &m(&[1, 0]), 0), Ordering::Less);
    }

    #[test]
    fn weighted_prefers_heavier_components() {
        let ring = Arc::new(PolyRing::with_vars(101, &["x", "y"]).unwrap());
        let f = FreeModule::new(ring, vec![0, 2], ModuleOrder::Weighted(vec![0, 2].into()));
        assert_eq!(f.cmp_terms(&m(&[3, 0]), 0, &m(&[0, 1]), 1), Ordering::Less);
    }

    #[test]
    fn axpy_cancels() {
        let ring = Arc::new(PolyRing::with_vars(101, &["x", "y"]).unwrap());
        let f = FreeModule::pot(ring.clone(), vec![0, 0]);
        let a = f.from_columns(&[ring.parse("x^2").unwrap(), ring.parse("y^2").unwrap()]);
        let b = f.from_columns(&[ring.parse("x").unwrap(), ring.parse("y").unwrap()]);
        let r = f.axpy(&a, 100, &m(&[1, 0]), &b);
        assert_eq!(
            f.to_columns(&r),
            vec![Polynomial::zero(), ring.parse("y^2 - x*y").unwrap()]
        );
    }
}
