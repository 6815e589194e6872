//! Exact arithmetic: prime fields, monomials, polynomials and free-module elements.

mod field;
mod monomial;
mod parse;
mod poly;

pub use field::{is_prime, FieldElement, PrimeField};
pub use monomial::{monomial_cmp, Monomial, MonomialOrder, MAX_VARS};
pub use poly::{ModuleElement, PolyRing, Polynomial};
