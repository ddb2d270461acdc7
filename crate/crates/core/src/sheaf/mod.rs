//! Moment graphs, sheaves on them, sections, naive functors, Hom spaces and axiom checks.

pub mod graph;
pub mod hom;
pub mod ops;
#[allow(clippy::module_inception)]
pub mod sheaf;
pub mod verify;

pub use graph::{GraphMorphism, MomentGraph, Vertex};
pub use hom::{hom_dim, hom_space, HomSystem};
pub use ops::Section;
pub use sheaf::{EdgeModule, Sheaf, SheafMorphism};
pub use verify::{check_v, verify_bmp, BmpReport};

#[cfg(test)]
mod tests;
