//! Moments `W_n(s)` of the n-step walk: exact even values, hypergeometric and
//! Bessel representations, continuation, residues and derivatives.

mod bessel_forms;
mod continuation;
mod convolution;
mod derivatives;
mod exact;
mod hyper_forms;
mod mahler;
mod residues;

use serde::{Deserialize, Serialize};

pub use bessel_forms::{bessel_moment, broadhurst_integral, kn_neg_odd, BroadhurstParts};
pub use continuation::{continue_by_functional_eq, direct_moment, is_pole};
pub use convolution::convolution_w4_from_w3;
pub(crate) use derivatives::{fd_first, fd_second};
pub use derivatives::{binomial_series_derivative, wn_doubleprime, wn_prime, DerivativeMethod};
pub use exact::{even_moment_exact, even_moments, MAX_EXACT_K, MAX_EXACT_N};
pub use hyper_forms::{w3, w3_neg_odd, w3_single, w3_two_term, w4_two_term};
pub use mahler::{mahler_eta_integral, MahlerWhich};
pub use residues::{
    r50_chowla_selberg, r50_gamma_form, r50_hypergeometric, r51_conjecture, residue_from_derivatives, residues,
    ResidueTable, ResidueWhich, MAX_RESIDUE_K,
};

pub use crate::holonomic::{char_poly, verrill_operator, RecurrenceOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    ExactCombinatorial,
    Recurrence,
    HypSingle,
    HypTwoTerm,
    BesselIntegral,
    FunctionalEq,
    Convolution,
    QuadratureOfDensity,
    MonteCarlo,
    /// Closed-form constants (derivative values).
    ClosedForm,
    /// Series in the exact even moments.
    MomentSeries,
}

impl MomentMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            MomentMethod::ExactCombinatorial => "exact_combinatorial",
            MomentMethod::Recurrence => "recurrence",
            MomentMethod::HypSingle => "hyp_single",
            MomentMethod::HypTwoTerm => "hyp_two_term",
            MomentMethod::BesselIntegral => "bessel_integral",
            MomentMethod::FunctionalEq => "functional_eq",
            MomentMethod::Convolution => "convolution",
            MomentMethod::QuadratureOfDensity => "quadrature_of_density",
            MomentMethod::MonteCarlo => "monte_carlo",
            MomentMethod::ClosedForm => "closed_form",
            MomentMethod::MomentSeries => "moment_series",
        }
    }
}

impl std::fmt::Display for MomentMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentValue {
    pub value: f64,
    /// Heuristic error bound.
    pub err: f64,
    pub method: MomentMethod,
}

impl MomentValue {
    pub fn new(value: f64, err: f64, method: MomentMethod) -> Self {
        MomentValue { value, err: err.abs(), method }
    }
}
