//! Bruhat graphs, the Braden–MacPherson construction, decomposition, localization and translation.

pub mod bruhat;
pub mod build;
pub mod category;
pub mod decompose;
pub mod localize;

pub use bruhat::{bruhat_graph, parabolic_graph, projection, BruhatGraph};
pub use build::{build_bmp, search_non_v, BmpObject, Normalization, WindowPolicy};
pub use category::BmpCategory;
pub use decompose::{decompose, Decomposition};
pub use localize::{localize, translate, translate_morphism, SectionsBimodule, Translated};

#[cfg(test)]
mod tests;
