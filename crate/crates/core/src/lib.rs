//! Exact K-stability analysis of Fano cone singularities of complexity at most one.

pub mod error;
pub mod exact;
pub mod convex;
pub mod pdivisor;
pub mod stability;
pub mod topology;
pub mod catalog;
pub mod io;

pub use error::{Error, Result};
