//! Period-2 quasi-polynomial fits of syzygy invariants and window-relative
//! checks of their asymptotic behavior.

mod fit;
mod harness;

pub use fit::{
    complexity_estimate, fit_quasi_polynomial, ClassFit, QuasiPolyFit, Rational, RationalPoly,
};
pub use harness::{
    analyze, check_additivity, check_e0_theorem, check_e1_theorem, check_inequality,
    check_reg_bounded, kernel_invariants, step_invariants, Analysis, AnalysisOptions, Check,
    Hypotheses, KernelInvariants, StepInvariants, Theorem, TheoremReport, Verdict,
};
