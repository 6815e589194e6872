#![allow(dead_code)]

use std::sync::Arc;

use syzygy_core::arith::{PolyRing, Polynomial};
use syzygy_core::cring::{present, CIRing, Presentation};

pub fn ring(vars: &[&str], eqs: &[&str]) -> Arc<CIRing> {
    let r = Arc::new(PolyRing::with_vars(101, vars).unwrap());
    let f = eqs.iter().map(|s| r.parse(s).unwrap()).collect();
    CIRing::new(r, f).unwrap()
}

pub fn poly(a: &CIRing, s: &str) -> Polynomial {
    a.poly_ring().parse(s).unwrap()
}

/// A cyclic module `A/(gens)`.
pub fn cyclic(a: &Arc<CIRing>, gens: &[&str]) -> Presentation {
    let cols = gens.iter().map(|g| vec![poly(a, g)]).collect();
    present(a, vec![0], cols).unwrap()
}

/// Ring and module pairs used across the integration tests.
pub fn corpus() -> Vec<(&'static str, Presentation)> {
    let h1 = ring(&["x", "y"], &["x^2*y^2"]);
    let h2 = ring(&["x", "y"], &["x*y^2"]);
    let h3 = ring(&["x", "y"], &["x^3"]);
    let ci = ring(&["x", "y", "z"], &["x^2", "y^2"]);
    vec![
        ("x2y2_ax2", cyclic(&h1, &["x^2"])),
        ("xy2_ax", cyclic(&h2, &["x"])),
        ("x3_ax", cyclic(&h3, &["x"])),
        ("x2y2_k", cyclic(&h1, &["x", "y"])),
        ("ci_ax", cyclic(&ci, &["x"])),
        ("ci_axy", cyclic(&ci, &["x", "y"])),
    ]
}
