//! Radial densities `p_n(x)` of the n-step walk.

mod convolution;
mod elementary;
mod kluyver;
mod p3;
mod p4;
mod p5;
mod series;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use convolution::pn_convolution;
pub use elementary::{p2, p2_two_step, rayleigh};
pub use kluyver::pn_quadrature;
pub use p3::{p3, P3Method};
pub use p4::{p4, p4_asym4_terms, p4_at_two, p4_left_derivative_at_two, p4_modular_argument, p4_modular_check, P4Method, P4_SEAM_HALF_WIDTH};
pub use p5::{p5, P5Method};
pub use series::{series_at_zero, MAX_SERIES_K};

pub use crate::holonomic::LogPowerSeries;

/// Code path that produced a density value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMethod {
    ClosedForm,
    Series0,
    LogContinuation,
    Quadrature,
    Convolution,
    AsymEdge,
}

impl DensityMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            DensityMethod::ClosedForm => "closed_form",
            DensityMethod::Series0 => "series0",
            DensityMethod::LogContinuation => "log_continuation",
            DensityMethod::Quadrature => "quadrature",
            DensityMethod::Convolution => "convolution",
            DensityMethod::AsymEdge => "asym_edge",
        }
    }
}

impl fmt::Display for DensityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Non-fatal remarks attached to a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityFlag {
    /// Close to a point where `p_n` or one of its derivatives is singular.
    SingularPoint,
    /// The value is the `+∞` sentinel of an integrable endpoint singularity.
    InfiniteSentinel,
    OutsideSupport,
}

impl DensityFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            DensityFlag::SingularPoint => "singular_point",
            DensityFlag::InfiniteSentinel => "infinite_sentinel",
            DensityFlag::OutsideSupport => "outside_support",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub err: f64,
    pub method: DensityMethod,
    pub region: String,
    pub flags: Vec<DensityFlag>,
}

impl EvalResult {
    pub fn new(value: f64, err: f64, method: DensityMethod, region: impl Into<String>) -> Self {
        EvalResult { value, err: err.abs(), method, region: region.into(), flags: Vec::new() }
    }

    pub fn with_flag(mut self, flag: DensityFlag) -> Self {
        if !self.flags.contains(&flag) {
            self.flags.push(flag);
        }
        self
    }

    pub(crate) fn outside(method: DensityMethod) -> Self {
        EvalResult::new(0.0, 0.0, method, "outside").with_flag(DensityFlag::OutsideSupport)
    }

    pub fn has_flag(&self, flag: DensityFlag) -> bool {
        self.flags.contains(&flag)
    }
}

/// Abscissas in `[0, n]` where `p_n` is not analytic: integers of the same
/// parity as `n`, plus 0 for even `n ≥ 4` (logarithmic term).
pub fn singular_abscissas(n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..=n).filter(|m| (n - m) % 2 == 0).map(|m| m as f64).collect();
    if n % 2 == 1 {
        v.insert(0, 0.0);
    }
    v
}

/// Flags `x` when it lies within `width` of an interior singular abscissa.
pub(crate) fn near_singular(n: usize, x: f64, width: f64) -> bool {
    singular_abscissas(n).into_iter().any(|m| m > 0.0 && m < n as f64 && (x - m).abs() < width)
}
