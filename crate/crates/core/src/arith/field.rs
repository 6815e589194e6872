use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime field GF(p) for a prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u32,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(self.reduce(t0))
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// Symmetric representative in `(-p/2, p/2]`, used for printing.
    pub fn signed(&self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn element(&self, v: i64) -> FieldElement {
        FieldElement {
            value: self.reduce(v),
            field: *self,
        }
    }
}

/// A residue together with its field, for callers outside the polynomial kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    field: PrimeField,
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Option<FieldElement> {
        self.field.inv(self.value).map(|value| FieldElement {
            value,
            field: self.field,
        })
    }

    fn check(&self, other: &FieldElement) {
        assert_eq!(
            self.field, other.field,
            "field elements from different prime fields"
        );
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.check(&rhs);
        FieldElement {
            value: self.field.add(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.check(&rhs);
        FieldElement {
            value: self.field.sub(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.check(&rhs);
        FieldElement {
            value: self.field.mul(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_composite_moduli() {
        assert_eq!(PrimeField::new(4), Err(Error::NotPrime(4)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(101).is_ok());
        assert!(PrimeField::new(2147483647).is_ok());
        assert!(PrimeField::new(4294967291).is_err());
    }

    #[test]
    fn modular_reduction() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.element(3) + f.element(3), f.element(1));
        assert_eq!(f.element(-1).value(), 4);
        assert_eq!(f.signed(4), -1);
        assert_eq!(f.inv(0), None);
    }

    proptest! {
        #[test]
        fn field_axioms(a in 0i64..32003, b in 0i64..32003, c in 0i64..32003) {
            let f = PrimeField::new(32003).unwrap();
            let (a, b, c) = (f.element(a), f.element(b), f.element(c));
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a + b, b + a);
            prop_assert_eq!(a - a, f.element(0));
            if !a.is_zero() {
                prop_assert_eq!(a * a.inv().unwrap(), f.element(1));
            }
        }
    }
}
