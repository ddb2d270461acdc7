//! Exact scalars, polynomials and degreewise linear algebra over R = Sym(V*).

pub mod graded;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod scalar;

pub use graded::{kernel_in_degree, minimal_generators, Ambient, GradedFreeModule, PolyMatrix};
pub use linalg::{Echelon, SparseVec};
pub use poly::{Monomial, Poly};
pub use rational::Q;
pub use scalar::{Field, Scalar};
