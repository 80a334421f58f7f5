//! Densities and moments of short uniform random walks in the plane.

pub mod error;
pub mod exact;
pub mod densities;
pub mod holonomic;
pub mod moments;
pub mod numerics;
pub mod oracle;
pub mod verify;

pub use error::{Result, WalkError};
