//! The mixed homotopy category K^b(BMP): complexes, minimal models, recollement,
//! perversity, Hom computations and Rouquier complexes.

pub mod complex;
pub mod ctx;
pub mod khom;
pub mod perverse;
pub mod recollement;
pub mod rouquier;

pub use complex::{Additive, Block, ChainMap, Complex, Ops, Reduction};
pub use ctx::{BmpComplex, BmpCtx, FreeComplex, FreeCtx, Label};
pub use khom::{forget_hom, is_homotopy_equiv, khom, ForgetHom, Verdict, Witness};
pub use perverse::{perversity_check, truncate_stratum, PerversityReport};
pub use recollement::{costalk_complex, costandard, j_shriek, j_star, stalk_complex, standard};
pub use rouquier::{delta, e_letter, f_letter, nabla, rouquier, tilting_s, LetterKind};

#[cfg(test)]
mod tests;
