//! Smooth-infinitesimal arithmetic and finite-dimensional quantum mechanics.
//!
//! * [`weil`]: jets in Weil algebras, internal-truth predicates, derivatives
//!   and integrals read off nilpotent expansions.
//! * [`logic`]: propositional formulas over finite Heyting algebras.
//! * [`linalg`]: vectors and matrices over the smooth complex ring.
//! * [`lie`]: SO(3), U(n), the spin-1/2 representation, exponentials and
//!   product integrals.
//! * [`quantum`]: the two-spin system, its eigen-table and evolution.

pub mod quantum;
pub mod scalar;
pub mod syntax;
pub mod lie;
pub mod linalg;
pub mod logic;
pub mod weil;

pub use scalar::{Backend, Scalar};
