use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Presentation;
use crate::arith::{Monomial, Polynomial};
use crate::hilbert::{numerator, HilbertSeries, LaurentPoly};

/// Outcome of the maximal Cohen-Macaulay test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum McmStatus {
    Mcm,
    NotMcm,
    /// The dimension matches but no regular sequence of linear forms was found.
    NotVerified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McmOptions {
    /// Independent attempts with fresh random linear forms.
    pub retries: usize,
    pub seed: u64,
}

impl Default for McmOptions {
    fn default() -> Self {
        McmOptions {
            retries: 5,
            seed: 0,
        }
    }
}

/// Tests whether `M` is maximal Cohen-Macaulay: `dim M = dim A` and some
/// sequence of `dim A` linear forms is `M`-regular. A linear form `l` is
/// regular exactly when `H(M/lM) = (1 - z) H(M)`. The zero module counts as MCM.
pub fn mcm_check(m: &Presentation, opts: &McmOptions) -> McmStatus {
    let ring = m.ring();
    let n = ring.nvars();
    let num = numerator(m);
    let series = HilbertSeries::from_numerator(n, num.clone());
    let Some(dim) = series.dim() else {
        return McmStatus::Mcm;
    };
    if dim != ring.dim() {
        return McmStatus::NotMcm;
    }
    if dim == 0 {
        return McmStatus::Mcm;
    }
    let poly = ring.poly_ring();
    let field = poly.field();
    let one_minus_z = LaurentPoly::one_minus_z_pow(1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    'attempt: for _ in 0..opts.retries.max(1) {
        let mut current = m.clone();
        let mut current_num = num.clone();
        for _ in 0..dim {
            let form: Polynomial = poly.from_terms(
                (0..n).map(|v| (Monomial::var(v), rng.gen_range(0..field.modulus()) as i64)),
            );
            if form.is_zero() {
                continue 'attempt;
            }
            let extra: Vec<Vec<Polynomial>> = (0..current.rank())
                .map(|i| {
                    let mut col = vec![Polynomial::zero(); current.rank()];
                    col[i] = form.clone();
                    col
                })
                .collect();
            let next = current
                .with_relations(extra)
                .expect("linear multiples of generators are homogeneous");
            let next_num = numerator(&next);
            if next_num != current_num.mul(&one_minus_z) {
                continue 'attempt;
            }
            current = next;
            current_num = next_num;
        }
        return McmStatus::Mcm;
    }
    McmStatus::NotVerified
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PolyRing;
    use crate::cring::{present, CIRing};
    use std::sync::Arc;

    #[test]
    fn mcm_examples() {
        let r = Arc::new(PolyRing::with_vars(101, &["x", "y"]).unwrap());
        let a = CIRing::new(r.clone(), vec![r.parse("x^2*y^2").unwrap()]).unwrap();
        let opts = McmOptions::default();
        let free = Presentation::free(&a, vec![0]);
        assert_eq!(mcm_check(&free, &opts), McmStatus::Mcm);
        let ax2 = present(&a, vec![0], vec![vec![r.parse("x^2").unwrap()]]).unwrap();
        assert_eq!(mcm_check(&ax2, &opts), McmStatus::Mcm);
        let k = present(
            &a,
            vec![0],
            vec![vec![r.parse("x").unwrap()], vec![r.parse("y").unwrap()]],
        )
        .unwrap();
        assert_eq!(mcm_check(&k, &opts), McmStatus::NotMcm);
    }

    #[test]
    fn positive_depth_but_not_mcm() {
        // A = k[x,y,z]/(x^2), M = A/(y, z) ⊕ A: dimension 2 but depth 0
        let r = Arc::new(PolyRing::with_vars(101, &["x", "y", "z"]).unwrap());
        let a = CIRing::new(r.clone(), vec![r.parse("x^2").unwrap()]).unwrap();
        let p = |s: &str| r.parse(s).unwrap();
        let m = present(
            &a,
            vec![0, 0],
            vec![vec![p("y"), p("0")], vec![p("z"), p("0")]],
        )
        .unwrap();
        assert_ne!(mcm_check(&m, &McmOptions::default()), McmStatus::Mcm);
    }
}
