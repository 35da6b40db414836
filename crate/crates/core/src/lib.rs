//! Radon, Bargmann and hyperplane Bargmann transforms with the numerical
//! machinery needed to check their identities in two and three dimensions.

pub mod bargmann;
pub mod error;
pub mod grids;
pub mod io;
pub mod microlocal;
pub mod phantom;
pub mod quadrature;
pub mod special;
pub mod transforms;

pub use error::{Error, Result};
