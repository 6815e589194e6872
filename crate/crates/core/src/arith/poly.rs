use std::cmp::Ordering;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::field::PrimeField;
use super::monomial::{Monomial, MonomialOrder, MAX_VARS};
use crate::error::{Error, Result};

/// A polynomial as a list of terms, strictly descending in the ring's order,
/// with nonzero coefficients. The empty list is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: Vec<(Monomial, u32)>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, u32)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(Monomial, u32)> {
        self.terms.first()
    }

    /// Highest total degree of a term.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(t, _)| t.degree() == m.degree()),
        }
    }

    /// Coefficient of the monomial 1.
    pub fn constant(&self) -> u32 {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => *c,
            _ => 0,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Builds directly from sorted, nonzero terms. Callers must uphold the invariant.
    pub(crate) fn from_sorted(terms: Vec<(Monomial, u32)>) -> Polynomial {
        Polynomial { terms }
    }
}

/// A polynomial ring `GF(p)[x_1..x_n]` with standard grading and a fixed term order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyRing {
    field: PrimeField,
    vars: Vec<String>,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new(field: PrimeField, vars: Vec<String>, order: MonomialOrder) -> Result<PolyRing> {
        if vars.len() > MAX_VARS {
            return Err(Error::TooManyVariables {
                got: vars.len(),
                max: MAX_VARS,
            });
        }
        for (i, v) in vars.iter().enumerate() {
            let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::Usage(format!("invalid variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::Usage(format!("duplicate variable `{v}`")));
            }
        }
        Ok(PolyRing { field, vars, order })
    }

    /// `GF(p)[vars]` with degrevlex.
    pub fn with_vars(p: u64, vars: &[&str]) -> Result<PolyRing> {
        PolyRing::new(
            PrimeField::new(p)?,
            vars.iter().map(|s| s.to_string()).collect(),
            MonomialOrder::DegRevLex,
        )
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        a.cmp_with(b, self.order)
    }

    pub fn one(&self) -> Polynomial {
        self.constant(1)
    }

    pub fn constant(&self, c: i64) -> Polynomial {
        self.term(Monomial::ONE, self.field.reduce(c))
    }

    pub fn var(&self, i: usize) -> Polynomial {
        assert!(i < self.nvars(), "variable index out of range");
        self.term(Monomial::var(i), 1)
    }

    pub fn term(&self, m: Monomial, c: u32) -> Polynomial {
        if c == 0 {
            Polynomial::zero()
        } else {
            Polynomial::from_sorted(vec![(m, c)])
        }
    }

    /// Normalizes arbitrary terms: sorts, merges equal monomials, drops zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, i64)>>(&self, terms: I) -> Polynomial {
        let mut v: Vec<(Monomial, u32)> = terms
            .into_iter()
            .map(|(m, c)| (m, self.field.reduce(c)))
            .collect();
        v.sort_by(|a, b| self.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, u32)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = self.field.add(*lc, c),
                _ => out.push((m, c)),
            }
            if out.last().is_some_and(|(_, c)| *c == 0) {
                out.pop();
            }
        }
        Polynomial::from_sorted(out)
    }

    /// Checks that `f` is a normalized element of this ring.
    pub fn validate(&self, f: &Polynomial) -> Result<()> {
        let p = self.field.modulus();
        for (m, c) in f.terms() {
            if *c == 0 || *c >= p {
                return Err(Error::RingMismatch(format!(
                    "coefficient {c} is not a nonzero residue mod {p}"
                )));
            }
            if m.support_len() > self.nvars() {
                return Err(Error::RingMismatch(format!(
                    "term uses variable {} but the ring has {}",
                    m.support_len(),
                    self.nvars()
                )));
            }
        }
        for w in f.terms().windows(2) {
            if self.cmp(&w[0].0, &w[1].0) != Ordering::Greater {
                return Err(Error::RingMismatch(
                    "terms are not sorted for this ring's order".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn add(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.add_scaled(a, 1, &Monomial::ONE, b)
    }

    pub fn sub(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.add_scaled(a, self.field.neg(1), &Monomial::ONE, b)
    }

    /// `a + c * m * b`.
    pub fn add_scaled(&self, a: &Polynomial, c: u32, m: &Monomial, b: &Polynomial) -> Polynomial {
        if c == 0 || b.is_zero() {
            return a.clone();
        }
        let f = self.field;
        let (x, y) = (a.terms(), b.terms());
        let mut out = Vec::with_capacity(x.len() + y.len());
        let (mut i, mut j) = (0, 0);
        while i < x.len() || j < y.len() {
            if j == y.len() {
                out.extend_from_slice(&x[i..]);
                break;
            }
            let ym = y[j].0.mul(m);
            if i == x.len() {
                out.push((ym, f.mul(c, y[j].1)));
                j += 1;
                continue;
            }
            match self.cmp(&x[i].0, &ym) {
                Ordering::Greater => {
                    out.push(x[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push((ym, f.mul(c, y[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = f.add(x[i].1, f.mul(c, y[j].1));
                    if s != 0 {
                        out.push((ym, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial::from_sorted(out)
    }

    pub fn neg(&self, a: &Polynomial) -> Polynomial {
        self.scale(a, self.field.neg(1))
    }

    pub fn scale(&self, a: &Polynomial, c: u32) -> Polynomial {
        if c == 0 {
            return Polynomial::zero();
        }
        Polynomial::from_sorted(
            a.terms()
                .iter()
                .map(|(m, x)| (*m, self.field.mul(*x, c)))
                .collect(),
        )
    }

    pub fn mul_term(&self, a: &Polynomial, m: &Monomial, c: u32) -> Polynomial {
        if c == 0 {
            return Polynomial::zero();
        }
        Polynomial::from_sorted(
            a.terms()
                .iter()
                .map(|(t, x)| (t.mul(m), self.field.mul(*x, c)))
                .collect(),
        )
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        let mut acc = Polynomial::zero();
        for (m, c) in small.terms() {
            acc = self.add_scaled(&acc, *c, m, large);
        }
        acc
    }

    /// Makes the leading coefficient 1; returns the factor used.
    pub fn make_monic(&self, a: &Polynomial) -> (Polynomial, u32) {
        match a.lead() {
            None => (Polynomial::zero(), 1),
            Some((_, c)) => {
                let inv = self.field.inv(*c).expect("nonzero lead");
                (self.scale(a, inv), inv)
            }
        }
    }

    /// Parses `3*x^2*y - y + 1`. Integer coefficients are reduced mod p.
    pub fn parse(&self, src: &str) -> Result<Polynomial> {
        super::parse::parse_polynomial(self, src)
    }

    pub fn format(&self, f: &Polynomial) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in f.terms().iter().enumerate() {
            let sc = self.field.signed(*c);
            let (neg, abs) = (sc < 0, sc.unsigned_abs());
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if abs != 1 || m.is_one() {
                factors.push(abs.to_string());
            }
            for i in 0..self.nvars() {
                match m.exponent(i) {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    e => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            let _ = write!(s, "{}", factors.join("*"));
        }
        s
    }
}

/// An element of a graded free module: one polynomial per basis vector,
/// where basis vector `i` has degree `shifts[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleElement {
    pub components: Vec<Polynomial>,
    pub shifts: Vec<i32>,
}

impl ModuleElement {
    pub fn new(components: Vec<Polynomial>, shifts: Vec<i32>) -> ModuleElement {
        assert_eq!(components.len(), shifts.len());
        ModuleElement { components, shifts }
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// The degree `D` if every nonzero component `i` is homogeneous of degree
    /// `D - shifts[i]`; `Ok(None)` for zero.
    pub fn homogeneous_degree(&self) -> Result<Option<i32>> {
        let mut deg = None;
        for (c, s) in self.components.iter().zip(&self.shifts) {
            if c.is_zero() {
                continue;
            }
            if !c.is_homogeneous() {
                return Err(Error::Inhomogeneous("module element component".into()));
            }
            let d = c.degree().unwrap() as i32 + s;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(Error::Inhomogeneous(format!(
                        "components of degrees {e} and {d}"
                    )))
                }
                _ => {}
            }
        }
        Ok(deg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> PolyRing {
        PolyRing::with_vars(101, &["x", "y"]).unwrap()
    }

    #[test]
    fn addition_examples() {
        let r = ring();
        let p = |s: &str| r.parse(s).unwrap();
        assert_eq!(r.add(&p("x + y"), &p("-x")), p("y"));
        assert_eq!(r.add(&p("x^2 - 3*y"), &Polynomial::zero()), p("x^2 - 3*y"));
        let r5 = PolyRing::with_vars(5, &["x", "y"]).unwrap();
        let p5 = |s: &str| r5.parse(s).unwrap();
        assert_eq!(r5.add(&p5("3*x"), &p5("3*x")), p5("x"));
    }

    #[test]
    fn multiplication_examples() {
        let r = ring();
        let p = |s: &str| r.parse(s).unwrap();
        assert_eq!(r.mul(&p("x"), &p("y^2")), p("x*y^2"));
        assert_eq!(r.mul(&p("x + y"), &p("x - y")), p("x^2 - y^2"));
        assert_eq!(r.mul(&p("x*y + 7"), &r.one()), p("x*y + 7"));
        let a = p("x^2 + x*y");
        let b = p("y^3 - x*y^2");
        assert_eq!(r.mul(&a, &b).degree(), Some(5));
        assert!(r.mul(&a, &b).is_homogeneous());
    }

    #[test]
    fn validate_rejects_foreign_polynomials() {
        let r = ring();
        let r3 = PolyRing::with_vars(101, &["x", "y", "z"]).unwrap();
        let z = r3.parse("z").unwrap();
        assert!(matches!(r.validate(&z), Err(Error::RingMismatch(_))));
        let big = PolyRing::with_vars(103, &["x", "y"]).unwrap().constant(102);
        assert!(r.validate(&big).is_err());
        assert!(r.validate(&r.parse("x - y").unwrap()).is_ok());
    }

    #[test]
    fn module_element_degree() {
        let r = ring();
        let v = ModuleElement::new(
            vec![r.parse("x^2").unwrap(), r.parse("y").unwrap()],
            vec![0, 1],
        );
        assert_eq!(v.homogeneous_degree(), Ok(Some(2)));
        let w = ModuleElement::new(vec![r.parse("x^2").unwrap(), r.parse("y").unwrap()], vec![0, 0]);
        assert!(w.homogeneous_degree().is_err());
    }
}
