//! Buchberger's algorithm and Schreyer syzygies for submodules of graded
//! free modules over a polynomial ring.

mod buchberger;
mod module;
mod syzygy;

pub use buchberger::{buchberger, normal_form, Division, GroebnerBasis};
pub(crate) use buchberger::{run as run_buchberger, Input};
pub use module::{FreeModule, ModuleOrder, SchreyerFrame, Term, Vector};
pub use syzygy::{syzygies, SyzygyMatrix};

pub(crate) use syzygy::generator_syzygies;
