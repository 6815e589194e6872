use std::sync::Arc;

use super::buchberger::{GroebnerBasis, Input};
use super::module::{FreeModule, ModuleOrder, SchreyerFrame, Term, Vector};
use crate::arith::{ModuleElement, Monomial};
use crate::error::{Error, Result};

/// Syzygies of a Gröbner basis, as vectors over a free module whose basis
/// maps to the basis elements. The module carries the Schreyer order, under
/// which the columns already form a Gröbner basis.
#[derive(Clone, Debug)]
pub struct SyzygyMatrix {
    module: FreeModule,
    columns: Vec<Vector>,
}

impl SyzygyMatrix {
    pub fn module(&self) -> &FreeModule {
        &self.module
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> Vec<ModuleElement> {
        self.columns
            .iter()
            .map(|c| self.module.to_element(c))
            .collect()
    }

    /// Reduced Gröbner basis of the syzygy module in the Schreyer order.
    pub fn groebner_basis(&self) -> GroebnerBasis {
        GroebnerBasis::from_vectors(&self.module, self.columns.clone())
    }
}

fn schreyer_module(gb: &GroebnerBasis) -> FreeModule {
    let frame = SchreyerFrame {
        base: gb.module().clone(),
        leads: gb.leads(),
    };
    FreeModule::new(
        gb.ring().clone(),
        gb.degrees(),
        ModuleOrder::Schreyer(Arc::new(frame)),
    )
}

/// Schreyer's syzygies of the basis elements: one per S-pair whose lead
/// monomial is minimal for its first index.
pub fn syzygies(gb: &GroebnerBasis) -> SyzygyMatrix {
    let module = schreyer_module(gb);
    let field = gb.ring().field();
    let elems = gb.elements();
    let mut columns = Vec::new();
    for comp in 0..gb.module().rank() {
        let idx: Vec<usize> = (0..elems.len())
            .filter(|&k| elems[k][0].comp as usize == comp)
            .collect();
        for (a, &k) in idx.iter().enumerate() {
            let lk = elems[k][0].mon;
            let cands: Vec<(usize, Monomial)> = idx[a + 1..]
                .iter()
                .map(|&l| (l, lk.lcm(&elems[l][0].mon).div(&lk).unwrap()))
                .collect();
            for (pos, &(l, mk)) in cands.iter().enumerate() {
                let redundant = cands.iter().enumerate().any(|(q, (_, other))| {
                    q != pos && other.divides(&mk) && (*other != mk || q < pos)
                });
                if redundant {
                    continue;
                }
                let ml = lk.mul(&mk).div(&elems[l][0].mon).unwrap();
                let s = gb.module().mul_monomial(&elems[k][1..], &mk);
                let s = gb.module().axpy(&s, field.neg(1), &ml, &elems[l][1..]);
                let div = gb.divide(&s);
                debug_assert!(div.remainder.is_empty(), "S-pair of a basis must reduce to zero");
                let mut terms = vec![
                    Term {
                        mon: mk,
                        comp: k as u32,
                        coef: 1,
                    },
                    Term {
                        mon: ml,
                        comp: l as u32,
                        coef: field.neg(1),
                    },
                ];
                for (u, q) in div.quotients.iter().enumerate() {
                    for (m, c) in q.terms() {
                        terms.push(Term {
                            mon: *m,
                            comp: u as u32,
                            coef: field.neg(*c),
                        });
                    }
                }
                columns.push(module.collect(terms));
            }
        }
    }
    SyzygyMatrix { module, columns }
}

/// Output of [`generator_syzygies`].
pub(crate) struct GeneratorSyzygies {
    /// Generators of the syzygy module, projected to the tracked inputs.
    pub syzygies: Vec<Vector>,
    pub rep_module: FreeModule,
}

/// Syzygies among `gens` in `module`, projected to the first `tracked`
/// generators. `degrees[i]` is the degree of generator `i < tracked`, which
/// must be given since tracked generators may be zero.
pub(crate) fn generator_syzygies(
    module: &FreeModule,
    gens: &[Vector],
    degrees: &[i32],
    tracked: usize,
) -> Result<GeneratorSyzygies> {
    if degrees.len() != tracked || tracked > gens.len() {
        return Err(Error::Usage("degree list does not match tracked generators".into()));
    }
    let rep_module = FreeModule::pot(module.ring().clone(), degrees.to_vec());
    let inputs: Vec<Input> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| Input {
            vector: g.clone(),
            rep: if i < tracked {
                vec![Term {
                    mon: Monomial::ONE,
                    comp: i as u32,
                    coef: 1,
                }]
            } else {
                Vec::new()
            },
            rank: if i < tracked { 1 } else { 0 },
        })
        .collect();
    let (basis, _) = GroebnerBasis::tracked(module, inputs, rep_module.clone());
    let reps = &basis.tracking().expect("tracked basis").reps;
    let field = module.ring().field();

    let expand = |coeffs: &[(usize, Monomial, u32)]| -> Vector {
        let mut terms = Vec::new();
        for &(k, m, c) in coeffs {
            for t in &reps[k] {
                terms.push(Term {
                    mon: t.mon.mul(&m),
                    comp: t.comp,
                    coef: field.mul(c, t.coef),
                });
            }
        }
        terms
    };

    let mut out: Vec<Vector> = Vec::new();
    let schreyer = syzygies(&basis);
    for col in schreyer.vectors() {
        let coeffs: Vec<(usize, Monomial, u32)> =
            col.iter().map(|t| (t.comp as usize, t.mon, t.coef)).collect();
        let v = rep_module.collect(expand(&coeffs));
        if !v.is_empty() {
            out.push(v);
        }
    }
    for (i, g) in gens.iter().enumerate() {
        let mut terms = Vec::new();
        if i < tracked {
            terms.push(Term {
                mon: Monomial::ONE,
                comp: i as u32,
                coef: 1,
            });
        }
        if !g.is_empty() {
            let div = basis.divide(g);
            if !div.remainder.is_empty() {
                return Err(Error::Consistency("generator not in its own submodule".into()));
            }
            let mut coeffs = Vec::new();
            for (k, q) in div.quotients.iter().enumerate() {
                for (m, c) in q.terms() {
                    coeffs.push((k, *m, field.neg(*c)));
                }
            }
            terms.extend(expand(&coeffs));
        }
        let v = rep_module.collect(terms);
        if !v.is_empty() {
            out.push(v);
        }
    }
    Ok(GeneratorSyzygies {
        syzygies: out,
        rep_module,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{PolyRing, Polynomial};
    use crate::groebner::buchberger;

    fn ring() -> Arc<PolyRing> {
        Arc::new(PolyRing::with_vars(101, &["x", "y"]).unwrap())
    }

    fn ideal(r: &Arc<PolyRing>, gens: &[&str]) -> GroebnerBasis {
        let gens: Vec<ModuleElement> = gens
            .iter()
            .map(|s| ModuleElement::new(vec![r.parse(s).unwrap()], vec![0]))
            .collect();
        buchberger(r, &[0], &gens).unwrap()
    }

    fn apply(gb: &GroebnerBasis, col: &ModuleElement) -> Polynomial {
        let r = gb.ring();
        let gens = gb.generators();
        let mut acc = Polynomial::zero();
        for (c, g) in col.components.iter().zip(&gens) {
            acc = r.add(&acc, &r.mul(c, &g.components[0]));
        }
        acc
    }

    #[test]
    fn koszul_relation() {
        let r = ring();
        let gb = ideal(&r, &["x", "y"]);
        let s = syzygies(&gb).columns();
        assert_eq!(s.len(), 1);
        let p = |t: &str| r.parse(t).unwrap();
        assert_eq!(s[0].components, vec![p("y"), p("-x")]);
    }

    #[test]
    fn principal_ideal_has_no_syzygies() {
        let r = ring();
        assert!(syzygies(&ideal(&r, &["x^2"])).is_empty());
    }

    #[test]
    fn monomial_pair_relation() {
        let r = ring();
        let gb = ideal(&r, &["x^2", "x*y"]);
        let s = syzygies(&gb).columns();
        assert_eq!(s.len(), 1);
        assert!(apply(&gb, &s[0]).is_zero());
        let p = |t: &str| r.parse(t).unwrap();
        assert_eq!(s[0].components, vec![p("y"), p("-x")]);
    }

    #[test]
    fn schreyer_columns_are_a_basis() {
        let r = Arc::new(PolyRing::with_vars(101, &["x", "y", "z"]).unwrap());
        let gb = ideal(&r, &["x*y - z^2", "y^2 - x*z", "x^2 - y*z"]);
        let syz = syzygies(&gb);
        for c in syz.columns() {
            assert!(apply(&gb, &c).is_zero());
        }
        let sgb = syz.groebner_basis();
        assert!(sgb.spairs_reduce_to_zero());
        assert_eq!(sgb.len(), syz.len());
    }
}
