use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::Monomial;

/// Integer Laurent polynomial `Σ coeffs[k] z^(low + k)`, trimmed at both ends.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct LaurentPoly {
    low: i32,
    coeffs: Vec<i64>,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly::default()
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::monomial(0, 1)
    }

    pub fn monomial(exp: i32, c: i64) -> LaurentPoly {
        LaurentPoly::new(exp, vec![c])
    }

    pub fn new(low: i32, coeffs: Vec<i64>) -> LaurentPoly {
        let mut p = LaurentPoly { low, coeffs };
        p.trim();
        p
    }

    /// `1 - z^d`.
    pub fn one_minus_z_pow(d: u32) -> LaurentPoly {
        let mut c = vec![0; d as usize + 1];
        c[0] += 1;
        c[d as usize] -= 1;
        LaurentPoly::new(0, c)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn high(&self) -> i32 {
        self.low + self.coeffs.len() as i32 - 1
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        let k = exp - self.low;
        if k < 0 {
            0
        } else {
            self.coeffs.get(k as usize).copied().unwrap_or(0)
        }
    }

    /// `(exponent, coefficient)` pairs with nonzero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(move |(k, c)| (self.low + k as i32, *c))
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = self.high().max(other.high());
        let coeffs = (low..=high)
            .map(|e| self.coeff(e) + other.coeff(e))
            .collect();
        LaurentPoly::new(low, coeffs)
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly::new(self.low, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero();
        }
        let mut c = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        LaurentPoly::new(self.low + other.low, c)
    }

    pub fn shift(&self, by: i32) -> LaurentPoly {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly {
            low: self.low + by,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn eval_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Exact division by `1 - z`, if possible.
    pub fn div_one_minus_z(&self) -> Option<LaurentPoly> {
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        if self.eval_one() != 0 {
            return None;
        }
        // q(z)(1 - z) = p(z): q_k = Σ_{j<=k} p_j
        let mut acc = 0;
        let mut q = Vec::with_capacity(self.coeffs.len() - 1);
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            acc += c;
            q.push(acc);
        }
        Some(LaurentPoly::new(self.low, q))
    }

    /// `h^(i)(1) / i!`, via generalized binomials so negative exponents work.
    pub fn taylor_at_one(&self, i: usize) -> i64 {
        self.terms().map(|(k, c)| c * binomial(k as i64, i)).sum()
    }
}

/// Generalized binomial `n (n-1) ... (n-k+1) / k!` for any integer `n`.
pub fn binomial(n: i64, k: usize) -> i64 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for j in 0..k as i64 {
        num *= (n - j) as i128;
        den *= (j + 1) as i128;
    }
    (num / den) as i64
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match e {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}*")?;
                    }
                    if e == 1 {
                        write!(f, "z")?
                    } else {
                        write!(f, "z^{e}")?
                    }
                }
            }
        }
        Ok(())
    }
}

/// Minimal generators of the monomial ideal generated by `gens`, sorted.
pub fn minimal_monomials(gens: &[Monomial]) -> Vec<Monomial> {
    let mut v: Vec<Monomial> = gens.to_vec();
    v.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.cmp_degrevlex(a)));
    v.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for m in v {
        if !out.iter().any(|o| o.divides(&m)) {
            out.push(m);
        }
    }
    out
}

/// Numerator `N(z)` of the Hilbert series `N(z) / (1 - z)^n` of `Q / I` for a
/// monomial ideal `I`, by pivot recursion with memoization.
#[derive(Default)]
pub struct MonomialIdealSeries {
    memo: HashMap<Vec<Monomial>, LaurentPoly>,
}

impl MonomialIdealSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn numerator(&mut self, gens: &[Monomial]) -> LaurentPoly {
        let gens = minimal_monomials(gens);
        self.numerator_minimal(gens)
    }

    fn numerator_minimal(&mut self, gens: Vec<Monomial>) -> LaurentPoly {
        if gens.is_empty() {
            return LaurentPoly::one();
        }
        if let Some(hit) = self.memo.get(&gens) {
            return hit.clone();
        }
        // Pick the variable that occurs in the most generators.
        let mut best: Option<(usize, usize)> = None;
        for v in 0..crate::arith::MAX_VARS {
            let count = gens.iter().filter(|m| m.exponent(v) > 0).count();
            if count >= 2 && best.is_none_or(|(_, c)| count > c) {
                best = Some((v, count));
            }
        }
        let result = match best {
            None => gens
                .iter()
                .fold(LaurentPoly::one(), |acc, m| {
                    acc.mul(&LaurentPoly::one_minus_z_pow(m.degree()))
                }),
            Some((v, _)) => {
                let e = gens
                    .iter()
                    .map(|m| m.exponent(v))
                    .filter(|&e| e > 0)
                    .min()
                    .unwrap();
                let mut exps = [0u32; crate::arith::MAX_VARS];
                exps[v] = e;
                let pivot = Monomial::from_exponents(&exps).unwrap();
                let mut plus = gens.clone();
                plus.push(pivot);
                let plus = minimal_monomials(&plus);
                let colon: Vec<Monomial> = gens
                    .iter()
                    .map(|m| {
                        let g = m.gcd(&pivot);
                        m.div(&g).unwrap()
                    })
                    .collect();
                let colon = minimal_monomials(&colon);
                let a = self.numerator_minimal(plus);
                let b = self.numerator_minimal(colon);
                a.add(&b.shift(pivot.degree() as i32))
            }
        };
        self.memo.insert(gens, result.clone());
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e).unwrap()
    }

    #[test]
    fn laurent_arithmetic() {
        let p = LaurentPoly::one_minus_z_pow(4);
        let q = p.div_one_minus_z().unwrap();
        assert_eq!(q, LaurentPoly::new(0, vec![1, 1, 1, 1]));
        assert_eq!(q.taylor_at_one(0), 4);
        assert_eq!(q.taylor_at_one(1), 6);
        assert!(q.div_one_minus_z().is_none());
        assert_eq!(binomial(-2, 2), 3);
        assert_eq!(LaurentPoly::new(0, vec![2, -1]).taylor_at_one(1), -1);
    }

    #[test]
    fn numerators_of_small_ideals() {
        let mut s = MonomialIdealSeries::new();
        // (x^2 y^2) in two variables: 1 - z^4
        assert_eq!(s.numerator(&[m(&[2, 2])]), LaurentPoly::one_minus_z_pow(4));
        // (x^2, xy): 1 - 2z^2 + z^3
        assert_eq!(
            s.numerator(&[m(&[2, 0]), m(&[1, 1])]),
            LaurentPoly::new(0, vec![1, 0, -2, 1])
        );
        // the maximal ideal in three variables: (1 - z)^3
        let mx = s.numerator(&[m(&[1, 0, 0]), m(&[0, 1, 0]), m(&[0, 0, 1])]);
        assert_eq!(mx, LaurentPoly::new(0, vec![1, -3, 3, -1]));
        assert_eq!(s.numerator(&[Monomial::ONE]), LaurentPoly::zero());
    }

    #[test]
    fn numerator_matches_counting() {
        // (x^3, x y^2, y^4, x^2 y z) in three variables; count standard monomials by brute force.
        let gens = [m(&[3, 0, 0]), m(&[1, 2, 0]), m(&[0, 4, 0]), m(&[2, 1, 1])];
        let num = MonomialIdealSeries::new().numerator(&gens);
        for d in 0..10u32 {
            let count = Monomial::all_of_degree(3, d)
                .into_iter()
                .filter(|mono| !gens.iter().any(|g| g.divides(mono)))
                .count() as i64;
            let series: i64 = num
                .terms()
                .filter(|(e, _)| *e <= d as i32)
                .map(|(e, c)| c * binomial(d as i64 - e as i64 + 2, 2))
                .sum();
            assert_eq!(series, count, "degree {d}");
        }
    }
}
