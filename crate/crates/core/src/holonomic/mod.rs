//! Exact recurrence and differential-operator engine.

pub mod appendix;
pub mod recurrence;
pub mod series;
pub mod theta;

pub use appendix::{
    appendix_identities, fmk_poly, phi_poly, zagier_sides, AppendixReport, IdentityCheck,
};
pub use recurrence::{char_poly, char_poly_product, verrill_operator, RecurrenceOperator};
pub use series::{annihilation_residual, annihilation_residual_exact, ExactLogSeries, LogPowerSeries};
pub use theta::{
    generating_function_operator, mellin_translate, theta_to_dx, DxOperator, ThetaOperator,
};
