//! Coxeter systems, realizations, Bruhat order and Kazhdan–Lusztig polynomials.

pub mod group;
pub mod kl;
pub mod realization;
pub mod system;

pub use group::{coset_data, Coset, CoxeterElement, CoxeterGroup};
pub use kl::{KlPolynomial, KlTable};
pub use realization::{Mat, Realization};
pub use system::CoxeterSystem;
