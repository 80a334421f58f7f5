use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Arithmetic used by the series kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WorkingMode {
    #[default]
    Double,
    DoubleDouble,
}

/// Accuracy request handed to every numerical kernel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Precision {
    pub target_rel_error: f64,
    pub max_terms: usize,
    pub working_mode: WorkingMode,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            target_rel_error: 1e-13,
            max_terms: 100_000,
            working_mode: WorkingMode::Double,
        }
    }
}

impl Precision {
    pub fn new(target_rel_error: f64, max_terms: usize, working_mode: WorkingMode) -> Result<Self> {
        if !(target_rel_error > 0.0) || !target_rel_error.is_finite() {
            return Err(domain(format!("target_rel_error must be positive, got {target_rel_error}")));
        }
        if max_terms == 0 {
            return Err(domain("max_terms must be at least 1"));
        }
        Ok(Precision {
            target_rel_error,
            max_terms,
            working_mode,
        })
    }

    /// Double-double mode with a 1e-28 target.
    pub fn double_double() -> Self {
        Precision {
            target_rel_error: 1e-28,
            max_terms: 100_000,
            working_mode: WorkingMode::DoubleDouble,
        }
    }

    pub fn with_tol(self, target_rel_error: f64) -> Self {
        Precision {
            target_rel_error,
            ..self
        }
    }

    pub fn is_double_double(&self) -> bool {
        self.working_mode == WorkingMode::DoubleDouble
    }

    /// The effective tolerance after clamping to what the working mode can deliver.
    pub fn effective_tol(&self) -> f64 {
        let floor = match self.working_mode {
            WorkingMode::Double => 2.0 * f64::EPSILON,
            WorkingMode::DoubleDouble => 1e-31,
        };
        self.target_rel_error.max(floor)
    }
}
