//! Minimal free resolutions over complete intersections.

use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::arith::Polynomial;
use crate::cring::{a_syzygies, minimalize, present, CIRing, GradedMatrix, Presentation};
use crate::error::{Error, Result};
use crate::hilbert::oracle_image_rank;

/// Minimal presentation of the first syzygy module of `M`, i.e. of the
/// kernel of `F_0 -> M`'s relation map `F_1 -> F_0`. Its generators are the
/// columns of `∂_2`.
pub fn next_syzygy(m: &Presentation) -> Result<Presentation> {
    let m = minimalize(m);
    let ring = m.ring();
    if m.is_free() {
        return Ok(Presentation::zero(ring));
    }
    let tracked = m.relations().len();
    let columns = a_syzygies(ring, m.shifts(), m.relations(), m.relation_degrees())?;
    let next = present(ring, m.relation_degrees().to_vec(), columns)?;
    let next = minimalize(&next);
    if next.rank() != tracked {
        return Err(Error::Consistency(
            "relations of a minimal presentation became redundant".into(),
        ));
    }
    Ok(next)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ResolveOptions {
    /// Stop (with a truncated result) once this instant has passed.
    pub deadline: Option<Instant>,
}

/// `∂_{i+2} = ∂_i` up to a uniform degree shift and column scaling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Periodicity {
    pub start: usize,
    pub shift: i32,
}

/// A minimal free resolution `... -> F_2 -> F_1 -> F_0 -> M -> 0`, stored as
/// minimal presentations of the syzygy modules `M_0 = M, M_1, ..., M_N`.
/// The relation matrix of `M_i` is `∂_{i+1}`.
#[derive(Clone, Debug)]
pub struct Resolution {
    ring: Arc<CIRing>,
    modules: Vec<Presentation>,
    truncated: bool,
}

impl Resolution {
    /// Wraps modules that already form a resolution, e.g. read back from
    /// disk. Each module must be minimal and the rank of `M_{i+1}` must equal
    /// the number of relations of `M_i`.
    pub fn from_modules(ring: Arc<CIRing>, modules: Vec<Presentation>) -> Result<Resolution> {
        if modules.is_empty() {
            return Err(Error::Usage("a resolution needs at least M_0".into()));
        }
        for (i, m) in modules.iter().enumerate() {
            if !m.ring().same_ring(&ring) {
                return Err(Error::RingMismatch(format!("M_{i} lives over another ring")));
            }
            if !m.is_minimal() {
                return Err(Error::Consistency(format!("M_{i} is not minimal")));
            }
        }
        for (i, w) in modules.windows(2).enumerate() {
            if w[1].rank() != w[0].relations().len() || w[1].shifts() != w[0].relation_degrees() {
                return Err(Error::Consistency(format!(
                    "M_{} does not match the relations of M_{i}",
                    i + 1
                )));
            }
        }
        Ok(Resolution {
            ring,
            modules,
            truncated: false,
        })
    }

    /// Computes further syzygies until `M_steps` is present or the deadline passes.
    pub fn extend(&mut self, steps: usize, opts: &ResolveOptions) -> Result<()> {
        self.truncated = false;
        while self.modules.len() <= steps {
            if opts.deadline.is_some_and(|t| Instant::now() >= t) {
                self.truncated = true;
                break;
            }
            let next = next_syzygy(self.modules.last().unwrap())?;
            self.modules.push(next);
        }
        Ok(())
    }

    /// Keeps `M_0, ..., M_steps`.
    pub fn truncate(&mut self, steps: usize) {
        self.modules.truncate(steps + 1);
    }

    pub fn ring(&self) -> &Arc<CIRing> {
        &self.ring
    }

    /// Number of syzygy modules computed, `N + 1`.
    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn modules(&self) -> &[Presentation] {
        &self.modules
    }

    /// The `i`-th syzygy module `M_i`.
    pub fn syzygy(&self, i: usize) -> &Presentation {
        &self.modules[i]
    }

    /// True if the time budget ran out before all requested steps.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Degrees of the generators of `F_i`.
    pub fn shifts(&self, i: usize) -> &[i32] {
        self.modules[i].shifts()
    }

    pub fn betti(&self, i: usize) -> usize {
        self.modules.get(i).map_or(0, |m| m.rank())
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        self.modules.iter().map(|m| m.rank()).collect()
    }

    /// `∂_i : F_i -> F_{i-1}` for `1 <= i <= len`.
    pub fn differential(&self, i: usize) -> GradedMatrix {
        assert!(i >= 1 && i <= self.modules.len(), "no differential ∂_{i}");
        self.modules[i - 1].matrix()
    }

    /// First `i` with `∂_{i+2} = ∂_i` after normalizing columns and a uniform shift.
    pub fn periodicity(&self) -> Option<Periodicity> {
        let field = self.ring.poly_ring().field();
        let normalized = |m: &GradedMatrix| -> Vec<Vec<Polynomial>> {
            let poly = self.ring.poly_ring();
            m.columns
                .iter()
                .map(|col| {
                    let lead = col.iter().find(|p| !p.is_zero()).map(|p| p.lead().unwrap().1);
                    let inv = lead.map_or(1, |c| field.inv(c).unwrap());
                    col.iter().map(|p| poly.scale(p, inv)).collect()
                })
                .collect()
        };
        for i in 1..self.modules.len().saturating_sub(1) {
            let a = self.differential(i);
            let b = self.differential(i + 2);
            if a.ncols() == 0 || a.nrows() != b.nrows() || a.ncols() != b.ncols() {
                continue;
            }
            let shift = b.target[0] - a.target[0];
            let shifted = a.target.iter().zip(&b.target).all(|(x, y)| y - x == shift)
                && a.source.iter().zip(&b.source).all(|(x, y)| y - x == shift);
            if shifted && normalized(&a) == normalized(&b) {
                return Some(Periodicity { start: i, shift });
            }
        }
        None
    }

    /// Checks `∂_i ∂_{i+1} = 0` over `A` and that no differential has a unit entry.
    pub fn check_complex(&self) -> Result<()> {
        for i in 1..self.modules.len() {
            let prod = self.differential(i).mul(&self.ring, &self.differential(i + 1))?;
            if !prod.is_zero() {
                return Err(Error::Consistency(format!("∂_{i} ∂_{} is not zero", i + 1)));
            }
        }
        for i in 1..=self.modules.len() {
            let d = self.differential(i);
            if d.columns.iter().flatten().any(|p| !p.is_zero() && p.constant() != 0) {
                return Err(Error::Consistency(format!("∂_{i} has a unit entry")));
            }
        }
        Ok(())
    }

    /// Degreewise exactness at `F_1, ..., F_{N}` for degrees up to `max_degree`,
    /// using linear algebra only: `dim F_i - rank ∂_i = rank ∂_{i+1}`.
    pub fn check_exactness(&self, max_degree: i32) -> Result<()> {
        for i in 1..self.modules.len() {
            let lower = &self.modules[i - 1];
            let here = &self.modules[i];
            let lowest = here.shifts().iter().copied().min().unwrap_or(0);
            for d in lowest..=max_degree {
                let di = oracle_image_rank(
                    &self.ring,
                    lower.shifts(),
                    lower.relations(),
                    lower.relation_degrees(),
                    d,
                );
                let di1 = oracle_image_rank(
                    &self.ring,
                    here.shifts(),
                    here.relations(),
                    here.relation_degrees(),
                    d,
                );
                if di1.free_dim - di.image_rank != di1.image_rank {
                    return Err(Error::Consistency(format!(
                        "not exact at F_{i} in degree {d}: kernel {} vs image {}",
                        di1.free_dim - di.image_rank,
                        di1.image_rank
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Computes `M_0, ..., M_steps` of a minimal free resolution over `A`.
pub fn resolve(m: &Presentation, steps: usize, opts: &ResolveOptions) -> Result<Resolution> {
    let mut res = Resolution {
        ring: m.ring().clone(),
        modules: vec![minimalize(m)],
        truncated: false,
    };
    res.extend(steps, opts)?;
    Ok(res)
}

/// Minimal free resolution of `M` over the ambient polynomial ring. It is
/// finite of length at most the number of variables.
pub fn q_resolution(m: &Presentation) -> Result<Resolution> {
    let over_q = m.over_ambient();
    let n = m.ring().nvars();
    let mut res = resolve(&over_q, n + 1, &ResolveOptions::default())?;
    while res.modules.last().is_some_and(|p| p.rank() == 0) && res.modules.len() > 1 {
        res.modules.pop();
    }
    Ok(res)
}

/// Castelnuovo-Mumford regularity `max_i (max deg F_i - i)` from the
/// resolution over `Q`; `None` for the zero module.
pub fn regularity(m: &Presentation) -> Result<Option<i32>> {
    let res = q_resolution(m)?;
    Ok(res
        .modules
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.shifts().iter().max().map(|s| s - i as i32))
        .max())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PolyRing;

    fn setup(vars: &[&str], eqs: &[&str]) -> (Arc<PolyRing>, Arc<CIRing>) {
        let r = Arc::new(PolyRing::with_vars(101, vars).unwrap());
        let f = eqs.iter().map(|s| r.parse(s).unwrap()).collect();
        let a = CIRing::new(r.clone(), f).unwrap();
        (r, a)
    }

    #[test]
    fn hypersurface_resolution_is_periodic() {
        let (r, a) = setup(&["x", "y"], &["x^2*y^2"]);
        let m = present(&a, vec![0], vec![vec![r.parse("x^2").unwrap()]]).unwrap();
        let res = resolve(&m, 5, &ResolveOptions::default()).unwrap();
        assert_eq!(res.betti_numbers(), vec![1, 1, 1, 1, 1, 1]);
        assert_eq!(res.shifts(1), &[2]);
        assert_eq!(res.shifts(2), &[4]);
        assert_eq!(res.shifts(3), &[6]);
        res.check_complex().unwrap();
        res.check_exactness(9).unwrap();
        let per = res.periodicity().unwrap();
        assert_eq!(per, Periodicity { start: 1, shift: 4 });
    }

    #[test]
    fn residue_field_over_a_complete_intersection() {
        let (r, a) = setup(&["x", "y"], &["x^2", "y^2"]);
        let k = present(
            &a,
            vec![0],
            vec![vec![r.parse("x").unwrap()], vec![r.parse("y").unwrap()]],
        )
        .unwrap();
        let res = resolve(&k, 4, &ResolveOptions::default()).unwrap();
        // Poincaré series 1 / (1 - t)^2
        assert_eq!(res.betti_numbers(), vec![1, 2, 3, 4, 5]);
        res.check_complex().unwrap();
        res.check_exactness(8).unwrap();
    }

    #[test]
    fn koszul_resolution_over_q() {
        let (r, a) = setup(&["x", "y", "z"], &[]);
        let k = present(
            &a,
            vec![0],
            vec![
                vec![r.parse("x").unwrap()],
                vec![r.parse("y").unwrap()],
                vec![r.parse("z").unwrap()],
            ],
        )
        .unwrap();
        let res = q_resolution(&k).unwrap();
        assert_eq!(res.betti_numbers(), vec![1, 3, 3, 1]);
        assert_eq!(regularity(&k).unwrap(), Some(0));
    }

    #[test]
    fn regularity_of_quotients() {
        let (r, a) = setup(&["x", "y"], &["x^2*y^2"]);
        // A itself: Q/(x^2 y^2) has regularity 3
        assert_eq!(regularity(&Presentation::free(&a, vec![0])).unwrap(), Some(3));
        let zero = present(&a, vec![0], vec![vec![r.one()]]).unwrap();
        assert_eq!(regularity(&zero).unwrap(), None);
    }

    #[test]
    fn free_module_has_trivial_resolution() {
        let (_, a) = setup(&["x", "y"], &["x*y"]);
        let res = resolve(&Presentation::free(&a, vec![0, 1]), 3, &ResolveOptions::default())
            .unwrap();
        assert_eq!(res.betti_numbers(), vec![2, 0, 0, 0]);
    }
}
