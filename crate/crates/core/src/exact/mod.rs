//! Exact polynomial arithmetic over big rationals.

pub mod bivar;
pub mod poly;

pub use bivar::BivarPoly;
pub use poly::{rat, ratio, Poly};
