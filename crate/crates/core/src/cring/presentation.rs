use std::sync::{Arc, OnceLock};

use super::{CIRing, GradedMatrix};
use crate::arith::{ModuleElement, Monomial, PolyRing, Polynomial};
use crate::error::{Error, Result};
use crate::groebner::{
    generator_syzygies, run_buchberger, FreeModule, GroebnerBasis, Input, Term, Vector,
};

/// A graded module `M = coker(F_1 -> F_0)` over a complete intersection.
/// `F_0 = ⊕ A(-shifts[i])`, and each relation is a column of length `rank`
/// with entries reduced modulo the ring relations.
#[derive(Clone, Debug)]
pub struct Presentation {
    ring: Arc<CIRing>,
    shifts: Vec<i32>,
    relations: Vec<Vec<Polynomial>>,
    degrees: Vec<i32>,
    minimal: bool,
    basis: OnceLock<Arc<GroebnerBasis>>,
}

/// Builds a presentation, rejecting inhomogeneous relations. Relations that
/// vanish modulo the ring equations are dropped.
pub fn present(
    ring: &Arc<CIRing>,
    shifts: Vec<i32>,
    relations: Vec<Vec<Polynomial>>,
) -> Result<Presentation> {
    let poly = ring.poly_ring();
    let mut cols = Vec::new();
    let mut degrees = Vec::new();
    for (k, col) in relations.into_iter().enumerate() {
        if col.len() != shifts.len() {
            return Err(Error::Usage(format!(
                "relation {k} has {} entries, expected {}",
                col.len(),
                shifts.len()
            )));
        }
        for p in &col {
            poly.validate(p)?;
        }
        let elem = ModuleElement::new(col, shifts.clone());
        let deg = elem
            .homogeneous_degree()
            .map_err(|e| Error::Inhomogeneous(format!("relation {k}: {e}")))?;
        let Some(deg) = deg else { continue };
        let col: Vec<Polynomial> = elem.components.iter().map(|p| ring.reduce(p)).collect();
        if col.iter().all(|p| p.is_zero()) {
            continue;
        }
        cols.push(col);
        degrees.push(deg);
    }
    Ok(Presentation::from_parts(ring.clone(), shifts, cols, degrees, false))
}

impl Presentation {
    /// Rebuilds a presentation that was previously minimal, e.g. one read back
    /// from disk. The relations are validated as in [`present`]; the result is
    /// flagged minimal only if no entry has a unit term.
    pub fn restore(
        ring: &Arc<CIRing>,
        shifts: Vec<i32>,
        relations: Vec<Vec<Polynomial>>,
    ) -> Result<Presentation> {
        let mut p = present(ring, shifts, relations)?;
        p.minimal = !p.relations.iter().flatten().any(|e| e.constant() != 0);
        Ok(p)
    }

    pub(crate) fn from_parts(
        ring: Arc<CIRing>,
        shifts: Vec<i32>,
        relations: Vec<Vec<Polynomial>>,
        degrees: Vec<i32>,
        minimal: bool,
    ) -> Presentation {
        debug_assert_eq!(relations.len(), degrees.len());
        Presentation {
            ring,
            shifts,
            relations,
            degrees,
            minimal,
            basis: OnceLock::new(),
        }
    }

    /// The free module `⊕ A(-shifts[i])`.
    pub fn free(ring: &Arc<CIRing>, shifts: Vec<i32>) -> Presentation {
        Presentation::from_parts(ring.clone(), shifts, Vec::new(), Vec::new(), true)
    }

    /// The zero module.
    pub fn zero(ring: &Arc<CIRing>) -> Presentation {
        Presentation::free(ring, Vec::new())
    }

    pub fn ring(&self) -> &Arc<CIRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn shifts(&self) -> &[i32] {
        &self.shifts
    }

    pub fn relations(&self) -> &[Vec<Polynomial>] {
        &self.relations
    }

    /// Degree of each relation column.
    pub fn relation_degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    /// True when there are no relations; after minimalization this means `M` is free.
    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    /// The relation matrix `F_1 -> F_0`.
    pub fn matrix(&self) -> GradedMatrix {
        GradedMatrix::new(
            self.shifts.clone(),
            self.degrees.clone(),
            self.relations.clone(),
        )
    }

    /// `F_0` lifted to the polynomial ring, in position-over-term order.
    pub fn free_module(&self) -> FreeModule {
        FreeModule::pot(self.ring.poly_ring().clone(), self.shifts.clone())
    }

    /// Generators over the polynomial ring of the relation module plus `f F_0`:
    /// the relation columns first, then every `f_j e_i`.
    pub(crate) fn lifted_generators(&self, module: &FreeModule) -> Vec<Vector> {
        let mut gens: Vec<Vector> = self
            .relations
            .iter()
            .map(|c| module.from_columns(c))
            .collect();
        gens.extend(self.contraction_generators(module));
        gens
    }

    pub(crate) fn contraction_generators(&self, module: &FreeModule) -> Vec<Vector> {
        let mut gens = Vec::new();
        for i in 0..self.rank() {
            for f in self.ring.equations() {
                let e = vec![Term {
                    mon: Monomial::ONE,
                    comp: i as u32,
                    coef: 1,
                }];
                gens.push(module.mul_poly(f, &e));
            }
        }
        gens
    }

    /// Gröbner basis over the polynomial ring of the relations together with `f F_0`,
    /// in position-over-term order. Computed once.
    pub fn relation_basis(&self) -> &GroebnerBasis {
        self.basis.get_or_init(|| {
            let module = self.free_module();
            let gens = self.lifted_generators(&module);
            Arc::new(GroebnerBasis::from_vectors(&module, gens))
        })
    }

    /// Whether `column` (an element of `F_0`) lies in the relation submodule.
    pub fn contains(&self, column: &[Polynomial]) -> bool {
        let gb = self.relation_basis();
        gb.reduce(&gb.module().from_columns(column)).is_empty()
    }

    /// True if every generator is zero in `M`.
    pub fn is_zero_module(&self) -> bool {
        let gb = self.relation_basis();
        (0..self.rank()).all(|c| gb.lead_monomials(c).contains(&Monomial::ONE))
    }

    /// The same module presented over the ambient polynomial ring, with the
    /// columns `f_j e_i` appended.
    pub fn over_ambient(&self) -> Presentation {
        let q = self.ring.ambient();
        let mut relations = self.relations.clone();
        let mut degrees = self.degrees.clone();
        let degs = self.ring.equation_degrees();
        for i in 0..self.rank() {
            for (f, d) in self.ring.equations().iter().zip(&degs) {
                let mut col = vec![Polynomial::zero(); self.rank()];
                col[i] = f.clone();
                relations.push(col);
                degrees.push(self.shifts[i] + d);
            }
        }
        Presentation::from_parts(q, self.shifts.clone(), relations, degrees, false)
    }

    /// Appends relations, which must be homogeneous.
    pub fn with_relations(&self, extra: Vec<Vec<Polynomial>>) -> Result<Presentation> {
        let mut relations = self.relations.clone();
        relations.extend(extra);
        present(&self.ring, self.shifts.clone(), relations)
    }
}

/// Syzygies over `A` among `columns`, elements of `⊕ A(-target[i])` of the
/// given `degrees`. Each syzygy is a column indexed like `columns`, with
/// entries reduced modulo the ring relations.
pub fn a_syzygies(
    ring: &Arc<CIRing>,
    target: &[i32],
    columns: &[Vec<Polynomial>],
    degrees: &[i32],
) -> Result<Vec<Vec<Polynomial>>> {
    let frame = Presentation::free(ring, target.to_vec());
    let module = frame.free_module();
    let mut gens: Vec<Vector> = columns.iter().map(|c| module.from_columns(c)).collect();
    gens.extend(frame.contraction_generators(&module));
    let out = generator_syzygies(&module, &gens, degrees, columns.len())?;
    Ok(out
        .syzygies
        .iter()
        .map(|v| {
            out.rep_module
                .to_columns(v)
                .iter()
                .map(|p| ring.reduce(p))
                .collect::<Vec<_>>()
        })
        .filter(|c| c.iter().any(|p| !p.is_zero()))
        .collect())
}

/// Minimal presentation of the submodule generated by `gens` (of degrees
/// `gen_degrees`) inside `coker(relations)`, where all columns live in
/// `⊕ A(-target[i])`.
pub fn subquotient(
    ring: &Arc<CIRing>,
    target: &[i32],
    gens: &[Vec<Polynomial>],
    gen_degrees: &[i32],
    relations: &[Vec<Polynomial>],
) -> Result<Presentation> {
    let frame = Presentation::free(ring, target.to_vec());
    let module = frame.free_module();
    let mut all: Vec<Vector> = gens.iter().map(|c| module.from_columns(c)).collect();
    all.extend(relations.iter().map(|c| module.from_columns(c)));
    all.extend(frame.contraction_generators(&module));
    let out = generator_syzygies(&module, &all, gen_degrees, gens.len())?;
    let columns: Vec<Vec<Polynomial>> = out
        .syzygies
        .iter()
        .map(|v| out.rep_module.to_columns(v))
        .collect();
    Ok(minimalize(&present(ring, gen_degrees.to_vec(), columns)?))
}

/// Removes unit entries by Gaussian elimination, then drops relations that
/// are not needed to generate the relation module. The result is a minimal
/// presentation of the same module.
pub fn minimalize(p: &Presentation) -> Presentation {
    if p.minimal {
        return p.clone();
    }
    let ring = &p.ring;
    let poly = ring.poly_ring();
    let field = poly.field();
    let mut shifts = p.shifts.clone();
    let mut cols = p.relations.clone();
    let mut degrees = p.degrees.clone();

    loop {
        let pivot = cols.iter().enumerate().find_map(|(c, col)| {
            col.iter()
                .position(|e| !e.is_zero() && e.is_constant())
                .map(|r| (c, r))
        });
        let Some((c, r)) = pivot else { break };
        let pivot_col = cols.remove(c);
        degrees.remove(c);
        let uinv = field.inv(pivot_col[r].constant()).unwrap();
        for col in cols.iter_mut() {
            let a = col.remove(r);
            if a.is_zero() {
                continue;
            }
            let factor = poly.scale(&a, uinv);
            for (i, entry) in col.iter_mut().enumerate() {
                let src = &pivot_col[if i < r { i } else { i + 1 }];
                if !src.is_zero() {
                    let prod = poly.mul(&factor, src);
                    *entry = ring.reduce(&poly.sub(entry, &prod));
                }
            }
        }
        shifts.remove(r);
        let mut k = 0;
        while k < cols.len() {
            if cols[k].iter().all(|e| e.is_zero()) {
                cols.remove(k);
                degrees.remove(k);
            } else {
                k += 1;
            }
        }
    }

    let reduced = Presentation::from_parts(ring.clone(), shifts, cols, degrees, false);
    let module = reduced.free_module();
    let mut inputs: Vec<Input> = reduced
        .relations
        .iter()
        .map(|c| Input {
            vector: module.from_columns(c),
            rep: Vec::new(),
            rank: 1,
        })
        .collect();
    let m = inputs.len();
    inputs.extend(
        reduced
            .contraction_generators(&module)
            .into_iter()
            .map(|vector| Input {
                vector,
                rep: Vec::new(),
                rank: 0,
            }),
    );
    let (basis, essential) = run_buchberger(&module, inputs, None);
    let keep: Vec<usize> = (0..m).filter(|&k| essential[k]).collect();
    let out = Presentation::from_parts(
        ring.clone(),
        reduced.shifts,
        keep.iter()
            .map(|&k| monic_column(poly, &reduced.relations[k]))
            .collect(),
        keep.iter().map(|&k| reduced.degrees[k]).collect(),
        true,
    );
    let _ = out.basis.set(Arc::new(basis));
    out
}

/// Scales a column so its first nonzero entry has lead coefficient 1.
fn monic_column(poly: &PolyRing, col: &[Polynomial]) -> Vec<Polynomial> {
    match col.iter().find(|p| !p.is_zero()) {
        None => col.to_vec(),
        Some(p) => {
            let inv = poly.field().inv(p.lead().unwrap().1).unwrap();
            col.iter().map(|q| poly.scale(q, inv)).collect()
        }
    }
}
