//! Eisenbud operators of a resolution over a complete intersection, the maps
//! `M_{n+2} -> M_n` they induce on syzygy modules, and their kernels.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::Polynomial;
use crate::cring::{subquotient, CIRing, GradedMatrix, Presentation};
use crate::error::{Error, Result};
use crate::linalg::{dense_inverse, dense_rank};
use crate::resolve::Resolution;

/// The differentials `∂_1, ..., ∂_L` of a resolution over `A`, lifted to the
/// polynomial ring by taking normal forms modulo `(f)`.
#[derive(Clone, Debug)]
pub struct LiftedResolution {
    resolution: Resolution,
    matrices: Vec<GradedMatrix>,
}

impl LiftedResolution {
    pub fn resolution(&self) -> &Resolution {
        &self.resolution
    }

    pub fn ring(&self) -> &Arc<CIRing> {
        self.resolution.ring()
    }

    /// `∂̃_i` for `1 <= i <= len`.
    pub fn lift(&self, i: usize) -> &GradedMatrix {
        &self.matrices[i - 1]
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }
}

/// Lifts a resolution with at least three syzygy modules.
pub fn lift_resolution(res: &Resolution) -> Result<LiftedResolution> {
    if res.len() < 3 {
        return Err(Error::Usage(format!(
            "lifting needs at least 3 resolution steps, got {}",
            res.len()
        )));
    }
    let ring = res.ring();
    let matrices = (1..=res.len())
        .map(|i| res.differential(i).reduced(ring))
        .collect();
    Ok(LiftedResolution {
        resolution: res.clone(),
        matrices,
    })
}

/// The operators `t̃_j : F̃_i -> F̃_{i-2}` with `∂̃_{i-1} ∂̃_i = Σ f_j t̃_j`.
#[derive(Clone, Debug)]
pub struct EisenbudOperators {
    lifted: LiftedResolution,
    /// `ops[i - 2][j]` is `t̃_j` on `F_i`.
    ops: Vec<Vec<GradedMatrix>>,
}

/// Computes `t̃_j` at every step `2 <= i <= L` by dividing `∂̃_{i-1} ∂̃_i` by `(f)`.
pub fn operators(lifted: &LiftedResolution) -> Result<EisenbudOperators> {
    let ring = lifted.ring();
    let q = ring.ambient();
    let degs = ring.equation_degrees();
    let mut ops = Vec::new();
    for i in 2..=lifted.len() {
        let sq = lifted.lift(i - 1).mul(&q, lifted.lift(i))?;
        let mut per_j: Vec<Vec<Vec<Polynomial>>> =
            vec![vec![Vec::with_capacity(sq.nrows()); sq.ncols()]; ring.codim()];
        for (c, col) in sq.columns.iter().enumerate() {
            for entry in col {
                let qs = ring.divide_by_equations(entry).map_err(|_| {
                    Error::Consistency(format!("∂̃_{}∂̃_{i} is not zero modulo the ring relations", i - 1))
                })?;
                for (j, qj) in qs.into_iter().enumerate() {
                    per_j[j][c].push(qj);
                }
            }
        }
        let step = per_j
            .into_iter()
            .zip(&degs)
            .map(|(columns, d)| {
                let source = sq.source.iter().map(|s| s - d).collect();
                GradedMatrix::new(sq.target.clone(), source, columns)
            })
            .collect();
        ops.push(step);
    }
    Ok(EisenbudOperators {
        lifted: lifted.clone(),
        ops,
    })
}

impl EisenbudOperators {
    pub fn lifted(&self) -> &LiftedResolution {
        &self.lifted
    }

    pub fn ring(&self) -> &Arc<CIRing> {
        self.lifted.ring()
    }

    /// Largest `i` with operators on `F_i`.
    pub fn top(&self) -> usize {
        self.ops.len() + 1
    }

    /// `t̃_j` on `F_i` over the polynomial ring, for `2 <= i <= top`.
    pub fn operator(&self, i: usize, j: usize) -> &GradedMatrix {
        &self.ops[i - 2][j]
    }

    /// Exact check of `∂̃_{i-1} ∂̃_i = Σ f_j t̃_j` at every computed step.
    pub fn check_identity(&self) -> Result<()> {
        let ring = self.ring();
        let q = ring.ambient();
        for i in 2..=self.top() {
            let sq = self.lifted.lift(i - 1).mul(&q, self.lifted.lift(i))?;
            let mut sum = GradedMatrix::zero(sq.target.clone(), sq.source.clone());
            for (j, f) in ring.equations().iter().enumerate() {
                let fm = GradedMatrix::new(vec![0], vec![f.degree().unwrap() as i32], vec![vec![f.clone()]]);
                let t = self.operator(i, j);
                let ft = GradedMatrix::new(
                    t.target.clone(),
                    sq.source.clone(),
                    t.columns
                        .iter()
                        .map(|c| c.iter().map(|p| q.mul(p, &fm.columns[0][0])).collect())
                        .collect(),
                );
                sum = sum.add(&q, &ft);
            }
            if sum != sq {
                return Err(Error::Consistency(format!(
                    "∂̃_{}∂̃_{i} differs from Σ f_j t̃_j",
                    i - 1
                )));
            }
        }
        Ok(())
    }

    /// Over `A`, `∂_{i-1} t_{i+1} = t_i ∂_{i+1}` for every `j` and every
    /// step where both sides are defined.
    pub fn check_chain_maps(&self) -> Result<()> {
        let ring = self.ring();
        for i in 3..=self.top().min(self.lifted.len()) {
            for j in 0..ring.codim() {
                if i + 1 > self.top() {
                    continue;
                }
                let lhs = self.lifted.lift(i - 2).mul(ring, self.operator(i, j))?;
                let rhs = self.operator(i - 1, j).mul(ring, self.lifted.lift(i))?;
                if lhs.columns != rhs.columns {
                    return Err(Error::Consistency(format!(
                        "t_{j} does not commute with the differentials at F_{i}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// On a hypersurface, recovers the matrix factorization `(φ, ψ')` with
    /// `φ = ∂̃_i`, `ψ' = ∂̃_{i+1} t̃^{-1}` and checks `φψ' = ψ'φ = f I`.
    /// Requires `t̃` on `F_{i+1}` to be invertible.
    pub fn check_matrix_factorization(&self, i: usize) -> Result<()> {
        let ring = self.ring();
        if ring.codim() != 1 {
            return Err(Error::Usage("matrix factorizations need a hypersurface".into()));
        }
        if i + 1 > self.top() || i < 1 {
            return Err(Error::Usage(format!("no operator on F_{}", i + 1)));
        }
        let q = ring.ambient();
        let f = &ring.equations()[0];
        let phi = self.lifted.lift(i);
        let psi = self.lifted.lift(i + 1);
        let t = self.operator(i + 1, 0);
        let tinv = invert_graded(&q, t).ok_or_else(|| {
            Error::Consistency(format!("t̃ on F_{} is not invertible", i + 1))
        })?;
        let psi2 = psi.mul(&q, &tinv)?;
        let scalar = |shifts: &[i32], d: i32| {
            let mut m = GradedMatrix::identity(shifts.to_vec(), &q);
            for (k, col) in m.columns.iter_mut().enumerate() {
                col[k] = f.clone();
            }
            m.source = shifts.iter().map(|s| s + d).collect();
            m
        };
        let d = f.degree().unwrap() as i32;
        let left = phi.mul(&q, &psi2)?;
        let right = psi2.mul(&q, phi)?;
        if left.columns != scalar(&phi.target, d).columns
            || right.columns != scalar(&psi2.target, d).columns
        {
            return Err(Error::Consistency(format!(
                "∂̃_{i} and ∂̃_{} do not form a matrix factorization",
                i + 1
            )));
        }
        Ok(())
    }
}

/// Inverse of a square graded matrix whose constant part is invertible,
/// by a finite Neumann series.
fn invert_graded(q: &CIRing, t: &GradedMatrix) -> Option<GradedMatrix> {
    let n = t.nrows();
    if n != t.ncols() {
        return None;
    }
    let field = q.poly_ring().field();
    let c0 = t.constant_part();
    let c0inv = dense_inverse(field, &c0)?;
    let poly = q.poly_ring();
    let inv0 = GradedMatrix::new(
        t.source.clone(),
        t.target.clone(),
        (0..n)
            .map(|c| (0..n).map(|r| poly.constant(c0inv[r][c] as i64)).collect())
            .collect(),
    );
    // T = C (I + N) with N = C^{-1} (T - C) nilpotent.
    let constant = GradedMatrix::new(
        t.target.clone(),
        t.source.clone(),
        (0..n)
            .map(|c| (0..n).map(|r| poly.constant(c0[r][c] as i64)).collect())
            .collect(),
    );
    let rest = t.sub(q, &constant);
    let nmat = inv0.mul(q, &rest).ok()?;
    let mut term = GradedMatrix::identity(t.source.clone(), q);
    let mut sum = term.clone();
    for _ in 0..=4 * n + 64 {
        term = term.mul(q, &nmat).ok()?.scale(q, field.neg(1));
        if term.is_zero() {
            return sum.mul(q, &inv0).ok();
        }
        sum = sum.add(q, &term);
    }
    None
}

/// Whether `α` is onto `M_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Surjectivity {
    Surjective,
    /// A generator of `M_n` outside the image of `α`, even modulo `m M_n`.
    NotSurjective { witness: usize },
}

/// `α = Σ c_j t_j : M_{n+2} -> M_n` and, when onto, its kernel `K_n`.
#[derive(Clone, Debug)]
pub struct OperatorMap {
    pub n: usize,
    pub coeffs: Vec<u32>,
    /// Degree by which `α` lowers degrees, the common `deg f_j` of the used operators.
    pub degree: i32,
    /// `Σ c_j t_j : F_{n+2} -> F_n` over `A`.
    pub matrix: GradedMatrix,
    pub surjective: Surjectivity,
    pub kernel: Option<Presentation>,
}

/// Builds `α` from `coeffs` at `n`. Only operators with coefficient nonzero
/// and a common `deg f_j` may be combined.
pub fn operator_map(e: &EisenbudOperators, coeffs: &[u32], n: usize) -> Result<OperatorMap> {
    let ring = e.ring();
    if coeffs.len() != ring.codim() {
        return Err(Error::Usage(format!(
            "{} coefficients for {} operators",
            coeffs.len(),
            ring.codim()
        )));
    }
    let res = e.lifted.resolution();
    if n + 2 > e.top() {
        return Err(Error::Usage(format!(
            "step {n} is outside the computed window (operators up to F_{})",
            e.top()
        )));
    }
    let degs = ring.equation_degrees();
    let used: Vec<i32> = coeffs
        .iter()
        .zip(&degs)
        .filter(|(c, _)| **c != 0)
        .map(|(_, d)| *d)
        .collect();
    if used.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Usage(
            "operators of different degrees cannot be combined homogeneously".into(),
        ));
    }
    let degree = used.first().copied().unwrap_or(2);
    let target = res.shifts(n).to_vec();
    let source: Vec<i32> = res.shifts(n + 2).iter().map(|s| s - degree).collect();
    let mut matrix = GradedMatrix::zero(target.clone(), source.clone());
    for (j, c) in coeffs.iter().enumerate() {
        if *c != 0 {
            let t = e.operator(n + 2, j);
            let scaled = GradedMatrix::new(target.clone(), source.clone(), t.columns.clone());
            matrix = matrix.add(ring, &scaled.scale(ring, *c));
        }
    }

    // Nakayama: onto iff the constant part has full row rank.
    let field = ring.poly_ring().field();
    let consts = matrix.constant_part();
    let rank = dense_rank(field, &consts);
    let surjective = if rank == target.len() {
        Surjectivity::Surjective
    } else {
        let mut witness = 0;
        for r in 0..target.len() {
            let mut cols: Vec<Vec<u32>> = (0..matrix.ncols())
                .map(|c| consts.iter().map(|row| row[c]).collect())
                .collect();
            cols.push((0..target.len()).map(|k| u32::from(k == r)).collect());
            if dense_rank(field, &cols) > rank {
                witness = r;
                break;
            }
        }
        Surjectivity::NotSurjective { witness }
    };

    let kernel = if surjective == Surjectivity::Surjective && n + 3 <= res.len() {
        Some(kernel_of(e, &matrix, n)?)
    } else {
        None
    };
    Ok(OperatorMap {
        n,
        coeffs: coeffs.to_vec(),
        degree,
        matrix,
        surjective,
        kernel,
    })
}

/// `K_n = {u ∈ F_{n+2} : α u ∈ im ∂_{n+1}} / im ∂_{n+3}`, graded as a submodule of `M_{n+2}`.
fn kernel_of(e: &EisenbudOperators, alpha: &GradedMatrix, n: usize) -> Result<Presentation> {
    let ring = e.ring();
    let res = e.lifted.resolution();
    let lower = res.syzygy(n);
    let upper = res.syzygy(n + 2);
    let mut columns = alpha.columns.clone();
    columns.extend(lower.relations().iter().cloned());
    let mut degrees = alpha.source.clone();
    degrees.extend(lower.relation_degrees().iter().copied());
    let syz = crate::cring::a_syzygies(ring, lower.shifts(), &columns, &degrees)?;
    let k = alpha.ncols();
    let mut gens = Vec::new();
    let mut gen_degrees = Vec::new();
    for s in syz {
        let u: Vec<Polynomial> = s[..k].to_vec();
        if u.iter().all(|p| p.is_zero()) {
            continue;
        }
        let deg = u
            .iter()
            .zip(upper.shifts())
            .find(|(p, _)| !p.is_zero())
            .map(|(p, sh)| p.degree().unwrap() as i32 + sh)
            .unwrap();
        gens.push(u);
        gen_degrees.push(deg);
    }
    subquotient(ring, upper.shifts(), &gens, &gen_degrees, upper.relations())
}

/// Result of [`scan_operator`].
#[derive(Clone, Debug)]
pub struct ScanOutcome {
    pub found: Option<OperatorMap>,
    pub tried: usize,
}

/// Searches for a surjective `α` at step `n`: first each `t_j` alone, then
/// random combinations of operators of one degree drawn from a seeded generator.
pub fn scan_operator(
    e: &EisenbudOperators,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ScanOutcome> {
    if trials == 0 {
        return Err(Error::Usage("at least one trial is needed".into()));
    }
    let ring = e.ring();
    let c = ring.codim();
    if c == 0 {
        return Ok(ScanOutcome {
            found: None,
            tried: 0,
        });
    }
    let degs = ring.equation_degrees();
    let mut classes: Vec<i32> = degs.clone();
    classes.sort_unstable();
    classes.dedup();
    let p = ring.poly_ring().field().modulus();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let coeffs: Vec<u32> = if t < c {
            (0..c).map(|j| u32::from(j == t)).collect()
        } else {
            let d = classes[(t - c) % classes.len()];
            degs.iter()
                .map(|dj| if *dj == d { rng.gen_range(0..p) } else { 0 })
                .collect()
        };
        if coeffs.iter().all(|x| *x == 0) {
            continue;
        }
        let map = operator_map(e, &coeffs, n)?;
        if map.surjective == Surjectivity::Surjective {
            return Ok(ScanOutcome {
                found: Some(map),
                tried: t + 1,
            });
        }
    }
    Ok(ScanOutcome {
        found: None,
        tried: trials,
    })
}
