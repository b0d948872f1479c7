//! Curved dg categories, curved coalgebras, bar and cobar constructions,
//! convolution categories and Hochschild cochains, computed exactly.

pub mod error;
pub mod exactla;
pub mod barcobar;
pub mod convmc;
pub mod dgcat;
pub mod grquiv;
pub mod hochschild;
pub mod ptdcoa;
pub mod random;

pub use error::{Error, Result};
