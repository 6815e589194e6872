use std::sync::Arc;

use super::module::{FreeModule, Term, Vector};
use crate::arith::{ModuleElement, Monomial, PolyRing, Polynomial};
use crate::error::{Error, Result};

/// A reduced Gröbner basis of a homogeneous submodule of a graded free module.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    module: FreeModule,
    elements: Vec<Vector>,
    by_comp: Vec<Vec<usize>>,
    tracking: Option<Tracking>,
}

/// Representations of each basis element in terms of the input generators.
#[derive(Clone, Debug)]
pub(crate) struct Tracking {
    pub module: FreeModule,
    pub reps: Vec<Vector>,
}

pub(crate) struct Input {
    pub vector: Vector,
    pub rep: Vector,
    /// Processing priority inside one degree; lower goes first.
    pub rank: u8,
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    degree: i32,
}

struct Engine<'a> {
    module: &'a FreeModule,
    rep_module: Option<&'a FreeModule>,
    elements: Vec<Vector>,
    reps: Vec<Vector>,
    by_comp: Vec<Vec<usize>>,
    pairs: Vec<Pair>,
}

impl Engine<'_> {
    fn find_divisor(&self, t: &Term, skip: Option<usize>) -> Option<usize> {
        self.by_comp[t.comp as usize].iter().copied().find(|&k| {
            Some(k) != skip && self.elements[k][0].mon.divides(&t.mon)
        })
    }

    /// Full reduction of `v` (and its representation) against the current basis.
    fn reduce(&self, v: Vector, rep: Vector, skip: Option<usize>) -> (Vector, Vector) {
        let f = self.module.ring().field();
        let mut rest = v;
        let mut rep = rep;
        let mut done: Vector = Vec::new();
        let mut start = 0;
        while start < rest.len() {
            let t = rest[start];
            match self.find_divisor(&t, skip) {
                Some(k) => {
                    let g = &self.elements[k];
                    let mm = t.mon.div(&g[0].mon).unwrap();
                    let c = f.neg(t.coef);
                    rest = self.module.axpy(&rest[start + 1..], c, &mm, &g[1..]);
                    start = 0;
                    if let Some(rm) = self.rep_module {
                        rep = rm.axpy(&rep, c, &mm, &self.reps[k]);
                    }
                }
                None => {
                    done.push(t);
                    start += 1;
                }
            }
        }
        (done, rep)
    }

    fn insert(&mut self, v: Vector, rep: Vector) {
        let f = self.module.ring().field();
        let inv = f.inv(v[0].coef).unwrap();
        let v = self.module.scale(&v, inv);
        let rep = match self.rep_module {
            Some(rm) => rm.scale(&rep, inv),
            None => rep,
        };
        let t = self.elements.len();
        let comp = v[0].comp as usize;
        let lt = v[0].mon;
        self.elements.push(v);
        self.reps.push(rep);
        self.update_pairs(t, comp, lt);
        self.by_comp[comp].push(t);
    }

    /// Gebauer-Möller pair update for a new element `t`.
    fn update_pairs(&mut self, t: usize, comp: usize, lt: Monomial) {
        let product_ok = self.module.rank() == 1;
        // B-criterion on existing pairs.
        let elements = &self.elements;
        self.pairs.retain(|p| {
            if elements[p.i][0].comp as usize != comp || !lt.divides(&p.lcm) {
                return true;
            }
            let li = elements[p.i][0].mon.lcm(&lt);
            let lj = elements[p.j][0].mon.lcm(&lt);
            li == p.lcm || lj == p.lcm
        });

        let mut new: Vec<(Pair, bool)> = self.by_comp[comp]
            .iter()
            .map(|&i| {
                let li = self.elements[i][0].mon;
                let lcm = li.lcm(&lt);
                let degree = self.module.term_degree(&lcm, comp as u32);
                (
                    Pair {
                        i,
                        j: t,
                        lcm,
                        degree,
                    },
                    li.is_coprime(&lt),
                )
            })
            .collect();
        // M-criterion: drop pairs whose lcm is a proper multiple of another new lcm.
        let lcms: Vec<Monomial> = new.iter().map(|(p, _)| p.lcm).collect();
        new.retain(|(p, _)| !lcms.iter().any(|l| *l != p.lcm && l.divides(&p.lcm)));
        // F-criterion and product criterion, per group of equal lcm.
        let mut kept: Vec<Pair> = Vec::new();
        let mut seen: Vec<Monomial> = Vec::new();
        for (idx, (p, _)) in new.iter().enumerate() {
            if seen.contains(&p.lcm) {
                continue;
            }
            seen.push(p.lcm);
            let group_coprime = new[idx..]
                .iter()
                .any(|(q, coprime)| q.lcm == p.lcm && *coprime);
            if product_ok && group_coprime {
                continue;
            }
            kept.push(p.clone());
        }
        self.pairs.extend(kept);
    }

    fn spair(&self, p: &Pair) -> (Vector, Vector) {
        let gi = &self.elements[p.i];
        let gj = &self.elements[p.j];
        let ui = p.lcm.div(&gi[0].mon).unwrap();
        let uj = p.lcm.div(&gj[0].mon).unwrap();
        let f = self.module.ring().field();
        let minus = f.neg(1);
        let s = self.module.mul_monomial(&gi[1..], &ui);
        let s = self.module.axpy(&s, minus, &uj, &gj[1..]);
        let rep = match self.rep_module {
            Some(rm) => {
                let r = rm.mul_monomial(&self.reps[p.i], &ui);
                rm.axpy(&r, minus, &uj, &self.reps[p.j])
            }
            None => Vec::new(),
        };
        (s, rep)
    }
}

/// Homogeneous Buchberger with the normal selection strategy. Returns the
/// reduced basis and, per input, whether it was needed to generate the
/// submodule given everything processed before it.
pub(crate) fn run(
    module: &FreeModule,
    inputs: Vec<Input>,
    rep_module: Option<FreeModule>,
) -> (GroebnerBasis, Vec<bool>) {
    let mut essential = vec![false; inputs.len()];
    let mut order: Vec<(i32, u8, usize)> = inputs
        .iter()
        .enumerate()
        .filter_map(|(k, inp)| {
            debug_assert!(module.is_homogeneous(&inp.vector));
            module.degree_of(&inp.vector).map(|d| (d, inp.rank, k))
        })
        .collect();
    order.sort();
    let mut inputs: Vec<Option<Input>> = inputs.into_iter().map(Some).collect();

    let mut eng = Engine {
        module,
        rep_module: rep_module.as_ref(),
        elements: Vec::new(),
        reps: Vec::new(),
        by_comp: vec![Vec::new(); module.rank()],
        pairs: Vec::new(),
    };

    let mut next_input = 0;
    loop {
        let pair_deg = eng.pairs.iter().map(|p| p.degree).min();
        let in_deg = order.get(next_input).map(|o| o.0);
        let degree = match (pair_deg, in_deg) {
            (None, None) => break,
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => a.min(b),
        };

        let mut batch: Vec<Pair> = Vec::new();
        eng.pairs.retain(|p| {
            if p.degree == degree {
                batch.push(p.clone());
                false
            } else {
                true
            }
        });
        batch.sort_by(|a, b| {
            let ca = eng.elements[a.i][0].comp;
            let cb = eng.elements[b.i][0].comp;
            module
                .cmp_terms(&a.lcm, ca, &b.lcm, cb)
                .then(a.i.cmp(&b.i))
                .then(a.j.cmp(&b.j))
        });
        for p in &batch {
            let (s, rep) = eng.spair(p);
            let (h, rep) = eng.reduce(s, rep, None);
            if !h.is_empty() {
                eng.insert(h, rep);
            }
        }
        while next_input < order.len() && order[next_input].0 == degree {
            let k = order[next_input].2;
            next_input += 1;
            let inp = inputs[k].take().unwrap();
            let (h, rep) = eng.reduce(inp.vector, inp.rep, None);
            if !h.is_empty() {
                essential[k] = true;
                eng.insert(h, rep);
            }
        }
    }

    // Inter-reduce tails; lead terms are already pairwise non-divisible.
    for k in 0..eng.elements.len() {
        let g = std::mem::take(&mut eng.elements[k]);
        let rep = std::mem::take(&mut eng.reps[k]);
        let lead = g[0];
        let (tail, tail_rep) = eng.reduce(g[1..].to_vec(), rep, Some(k));
        let mut g = Vec::with_capacity(tail.len() + 1);
        g.push(lead);
        g.extend(tail);
        eng.elements[k] = g;
        eng.reps[k] = tail_rep;
    }

    let Engine {
        elements,
        reps,
        by_comp,
        ..
    } = eng;
    let tracking = rep_module.map(|module| Tracking { module, reps });
    (
        GroebnerBasis {
            module: module.clone(),
            elements,
            by_comp,
            tracking,
        },
        essential,
    )
}

/// Result of dividing a vector by a Gröbner basis.
#[derive(Clone, Debug)]
pub struct Division {
    /// One quotient per basis element.
    pub quotients: Vec<Polynomial>,
    pub remainder: Vector,
}

impl GroebnerBasis {
    /// Computes the reduced Gröbner basis of the submodule generated by
    /// `gens` in the free module `module`.
    pub fn from_vectors(module: &FreeModule, gens: Vec<Vector>) -> GroebnerBasis {
        let inputs = gens
            .into_iter()
            .map(|vector| Input {
                vector,
                rep: Vec::new(),
                rank: 0,
            })
            .collect();
        run(module, inputs, None).0
    }

    /// Like [`GroebnerBasis::from_vectors`], recording how each basis element is
    /// built from the inputs. Representations live in `rep_module`.
    pub(crate) fn tracked(
        module: &FreeModule,
        inputs: Vec<Input>,
        rep_module: FreeModule,
    ) -> (GroebnerBasis, Vec<bool>) {
        run(module, inputs, Some(rep_module))
    }

    pub fn module(&self) -> &FreeModule {
        &self.module
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.module.ring()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Vector] {
        &self.elements
    }

    pub(crate) fn tracking(&self) -> Option<&Tracking> {
        self.tracking.as_ref()
    }

    pub fn leads(&self) -> Vec<(Monomial, u32)> {
        self.elements.iter().map(|g| (g[0].mon, g[0].comp)).collect()
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.elements
            .iter()
            .map(|g| self.module.degree_of(g).unwrap())
            .collect()
    }

    /// Lead monomials of basis elements whose lead lies in component `comp`.
    pub fn lead_monomials(&self, comp: usize) -> Vec<Monomial> {
        self.by_comp[comp]
            .iter()
            .map(|&k| self.elements[k][0].mon)
            .collect()
    }

    fn find_divisor(&self, t: &Term) -> Option<usize> {
        self.by_comp[t.comp as usize]
            .iter()
            .copied()
            .find(|&k| self.elements[k][0].mon.divides(&t.mon))
    }

    /// Division with remainder; quotients are recorded per basis element.
    pub fn divide(&self, v: &[Term]) -> Division {
        let ring = self.ring();
        let f = ring.field();
        let mut q: Vec<Vec<(Monomial, i64)>> = vec![Vec::new(); self.len()];
        let mut rest = v.to_vec();
        let mut start = 0;
        let mut remainder = Vec::new();
        while start < rest.len() {
            let t = rest[start];
            match self.find_divisor(&t) {
                Some(k) => {
                    let g = &self.elements[k];
                    let mm = t.mon.div(&g[0].mon).unwrap();
                    q[k].push((mm, t.coef as i64));
                    rest = self.module.axpy(&rest[start + 1..], f.neg(t.coef), &mm, &g[1..]);
                    start = 0;
                }
                None => {
                    remainder.push(t);
                    start += 1;
                }
            }
        }
        Division {
            quotients: q.into_iter().map(|t| ring.from_terms(t)).collect(),
            remainder,
        }
    }

    pub fn reduce(&self, v: &[Term]) -> Vector {
        let f = self.ring().field();
        let mut rest = v.to_vec();
        let mut start = 0;
        let mut remainder = Vec::new();
        while start < rest.len() {
            let t = rest[start];
            match self.find_divisor(&t) {
                Some(k) => {
                    let g = &self.elements[k];
                    let mm = t.mon.div(&g[0].mon).unwrap();
                    rest = self.module.axpy(&rest[start + 1..], f.neg(t.coef), &mm, &g[1..]);
                    start = 0;
                }
                None => {
                    remainder.push(t);
                    start += 1;
                }
            }
        }
        remainder
    }

    pub fn normal_form(&self, v: &ModuleElement) -> Result<ModuleElement> {
        let vec = self.module.from_element(v)?;
        Ok(self.module.to_element(&self.reduce(&vec)))
    }

    pub fn contains(&self, v: &ModuleElement) -> Result<bool> {
        let vec = self.module.from_element(v)?;
        Ok(self.reduce(&vec).is_empty())
    }

    pub fn generators(&self) -> Vec<ModuleElement> {
        self.elements
            .iter()
            .map(|g| self.module.to_element(g))
            .collect()
    }

    /// Post-hoc check: every S-pair reduces to zero.
    pub fn spairs_reduce_to_zero(&self) -> bool {
        let f = self.ring().field();
        for comp_elems in &self.by_comp {
            for (a, &i) in comp_elems.iter().enumerate() {
                for &j in &comp_elems[a + 1..] {
                    let gi = &self.elements[i];
                    let gj = &self.elements[j];
                    let l = gi[0].mon.lcm(&gj[0].mon);
                    let s = self
                        .module
                        .mul_monomial(&gi[1..], &l.div(&gi[0].mon).unwrap());
                    let s = self
                        .module
                        .axpy(&s, f.neg(1), &l.div(&gj[0].mon).unwrap(), &gj[1..]);
                    if !self.reduce(&s).is_empty() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Monic, and no term of any element is divisible by another element's lead.
    pub fn is_interreduced(&self) -> bool {
        self.elements.iter().enumerate().all(|(k, g)| {
            g[0].coef == 1
                && g.iter().enumerate().all(|(pos, t)| {
                    self.by_comp[t.comp as usize].iter().all(|&o| {
                        (o == k && pos == 0) || !self.elements[o][0].mon.divides(&t.mon)
                    })
                })
        })
    }
}

/// Buchberger's algorithm over `ring` for homogeneous generators of a
/// submodule of `⊕ Q(-shifts[i])`, position-over-term order.
pub fn buchberger(
    ring: &Arc<PolyRing>,
    shifts: &[i32],
    gens: &[ModuleElement],
) -> Result<GroebnerBasis> {
    let module = FreeModule::pot(ring.clone(), shifts.to_vec());
    let mut vecs = Vec::with_capacity(gens.len());
    for g in gens {
        if g.shifts != shifts {
            return Err(Error::RingMismatch("generator shifts differ from ambient".into()));
        }
        g.homogeneous_degree()?;
        vecs.push(module.from_element(g)?);
    }
    Ok(GroebnerBasis::from_vectors(&module, vecs))
}

pub fn normal_form(v: &ModuleElement, gb: &GroebnerBasis) -> Result<ModuleElement> {
    gb.normal_form(v)
}
