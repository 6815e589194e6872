use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported number of ring variables.
pub const MAX_VARS: usize = 8;

/// A power product with a dense exponent vector. Unused slots stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    degree: u32,
}

/// Term orders on monomials. Both are graded; degrevlex is the default.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    #[default]
    DegRevLex,
    DegLex,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        exps: [0; MAX_VARS],
        degree: 0,
    };

    pub fn from_exponents(exps: &[u32]) -> Result<Monomial> {
        if exps.len() > MAX_VARS {
            return Err(Error::TooManyVariables {
                got: exps.len(),
                max: MAX_VARS,
            });
        }
        let mut m = Monomial::ONE;
        for (i, &e) in exps.iter().enumerate() {
            let e = u16::try_from(e)
                .map_err(|_| Error::Usage(format!("exponent {e} out of range")))?;
            m.exps[i] = e;
            m.degree += e as u32;
        }
        Ok(m)
    }

    pub fn var(i: usize) -> Monomial {
        let mut m = Monomial::ONE;
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        self.exps[..nvars].iter().map(|&e| e as u32).collect()
    }

    /// Index one past the last variable that occurs.
    pub fn support_len(&self) -> usize {
        self.exps.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1)
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e += *o;
        }
        Monomial {
            exps,
            degree: self.degree + other.degree,
        }
    }

    /// True if `self` divides `other`.
    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree
            && self
                .exps
                .iter()
                .zip(other.exps.iter())
                .all(|(a, b)| a <= b)
    }

    /// `self / other` when `other` divides `self`.
    #[inline]
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e -= *o;
        }
        Some(Monomial {
            exps,
            degree: self.degree - other.degree,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        let mut degree = 0;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e = (*e).max(*o);
            degree += *e as u32;
        }
        Monomial { exps, degree }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        let mut degree = 0;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e = (*e).min(*o);
            degree += *e as u32;
        }
        Monomial { exps, degree }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn cmp_with(&self, other: &Monomial, order: MonomialOrder) -> Ordering {
        match order {
            MonomialOrder::DegRevLex => self.cmp_degrevlex(other),
            MonomialOrder::DegLex => self.cmp_deglex(other),
        }
    }

    /// Higher degree first; ties go to the smaller exponent in the last
    /// differing variable.
    #[inline]
    pub fn cmp_degrevlex(&self, other: &Monomial) -> Ordering {
        match self.degree.cmp(&other.degree) {
            Ordering::Equal => {}
            o => return o,
        }
        for i in (0..MAX_VARS).rev() {
            match self.exps[i].cmp(&other.exps[i]) {
                Ordering::Equal => continue,
                o => return o.reverse(),
            }
        }
        Ordering::Equal
    }

    pub fn cmp_deglex(&self, other: &Monomial) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }

    /// All monomials of degree `d` in `nvars` variables, in descending degrevlex order.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; nvars];
        fn rec(pos: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if pos + 1 == exps.len() {
                exps[pos] = left;
                out.push(Monomial::from_exponents(exps).unwrap());
                return;
            }
            for e in (0..=left).rev() {
                exps[pos] = e;
                rec(pos + 1, left - e, exps, out);
            }
        }
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial::ONE);
            }
            return out;
        }
        rec(0, d, &mut exps, &mut out);
        out.sort_by(|a, b| b.cmp_degrevlex(a));
        out
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.exps[..self.support_len().max(1)])
    }
}

/// Compares monomials under `order`. Thin wrapper kept for call sites that
/// only have an order value at hand.
pub fn monomial_cmp(a: &Monomial, b: &Monomial, order: MonomialOrder) -> Ordering {
    a.cmp_with(b, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e).unwrap()
    }

    #[test]
    fn degrevlex_examples() {
        let o = MonomialOrder::DegRevLex;
        assert_eq!(monomial_cmp(&m(&[2, 0]), &m(&[1, 1]), o), Ordering::Greater);
        assert_eq!(monomial_cmp(&m(&[1, 1]), &m(&[0, 2]), o), Ordering::Greater);
        assert_eq!(monomial_cmp(&m(&[0, 3]), &m(&[2, 0]), o), Ordering::Greater);
        // x*z^... distinguishes degrevlex from deglex
        assert_eq!(
            monomial_cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0]), o),
            Ordering::Less
        );
        assert_eq!(
            monomial_cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0]), MonomialOrder::DegLex),
            Ordering::Greater
        );
    }

    #[test]
    fn divisibility_and_lcm() {
        assert!(m(&[1, 0]).divides(&m(&[2, 1])));
        assert!(!m(&[0, 2]).divides(&m(&[2, 1])));
        assert_eq!(m(&[2, 1]).div(&m(&[1, 1])), Some(m(&[1, 0])));
        assert_eq!(m(&[2, 0]).lcm(&m(&[1, 3])), m(&[2, 3]));
        assert!(m(&[2, 0]).is_coprime(&m(&[0, 3])));
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert!(Monomial::from_exponents(&[0; 9]).is_err());
    }

    fn small_monomials() -> Vec<Monomial> {
        let mut all = Vec::new();
        for nv in 1..=3 {
            for d in 0..=4 {
                for mono in Monomial::all_of_degree(nv, d) {
                    if !all.contains(&mono) {
                        all.push(mono);
                    }
                }
            }
        }
        all
    }

    #[test]
    fn order_axioms_exhaustive() {
        let all = small_monomials();
        for order in [MonomialOrder::DegRevLex, MonomialOrder::DegLex] {
            for a in &all {
                assert_ne!(a.cmp_with(&Monomial::ONE, order), Ordering::Less);
                for b in &all {
                    let ab = a.cmp_with(b, order);
                    assert_eq!(ab, b.cmp_with(a, order).reverse());
                    assert_eq!(ab == Ordering::Equal, a == b);
                    if a.divides(b) {
                        assert_ne!(ab, Ordering::Greater);
                    }
                    for c in &all {
                        if ab == Ordering::Greater {
                            assert_eq!(a.mul(c).cmp_with(&b.mul(c), order), Ordering::Greater);
                            if b.cmp_with(c, order) == Ordering::Greater {
                                assert_eq!(a.cmp_with(c, order), Ordering::Greater);
                            }
                        }
                    }
                }
            }
        }
    }
}
