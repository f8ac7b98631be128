pub mod cli;
pub mod cones;
pub mod degree_reduction;
pub mod error;
pub mod exact_geometry;
pub mod instance_io;
pub mod spanner_builder;
pub mod verification;
pub mod visibility;

pub use error::{Error, Result};
