//! Exact colourful simplicial depth.
//!
//! A colourful configuration is `d+1` colour classes of `d+1` points in
//! `R^d`; its colourful simplicial depth counts the simplices with one vertex
//! of each colour that contain the origin. This crate computes that depth
//! exactly, decides whether families of colourful simplicial cones cover
//! space (deformed cross position), builds `⌊(d+2)²/4⌋` containing simplices
//! constructively, and searches for low-depth configurations.
//!
//! All predicates use exact rational and integer arithmetic.

pub mod arrangement;
pub mod cli;
pub mod config;
pub mod cross;
pub mod depth;
mod error;
pub mod exact;
pub mod search;
pub mod witness;

pub use config::{parse_configuration, validate, Configuration, Transversal, ValidationReport};
pub use depth::{colourful_depth, ColourSet, DepthReport};
pub use error::{Error, Result};
pub use exact::{Point, Rational, Sign};
