//! Special-function kernels.

pub mod agm;
pub mod bessel;
pub mod clausen;
pub mod dd;
pub mod elliptic;
pub mod eta;
pub mod gamma;
pub mod hyper;
pub mod modbessel;
pub mod oscillatory;
pub mod precision;
pub mod quad;
pub mod real;
pub mod sum;

pub use agm::agm3;
pub use bessel::{bessel_j, j0, j1};
pub use clausen::clausen;
pub use dd::DD;
pub use elliptic::{elliptic_e, elliptic_k};
pub use eta::dedekind_eta;
pub use gamma::{digamma, gamma, harmonic, harmonic_half, li4_half, ln_gamma, trigamma, zeta3, EULER_GAMMA};
pub use hyper::{hyp32_log_continuation, hyp_pfq, HyperParams, HyperValue};
pub use modbessel::{modified_bessel, ModifiedKind};
pub use precision::{Precision, WorkingMode};
