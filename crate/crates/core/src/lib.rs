//! Sheaves on moment graphs, Braden–MacPherson sheaves, the mixed homotopy category
//! K^b(BMP) with its recollement and perverse t-structure, and Rouquier complexes on Bruhat
//! graphs, all in exact arithmetic.

pub mod bmp;
pub mod cli;
pub mod coxeter;
pub mod error;
pub mod homotopy;
pub mod polyalg;
pub mod sheaf;

pub use error::{Error, Result};
