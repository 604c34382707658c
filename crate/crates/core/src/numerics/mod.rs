//! Numerical kernel shared by every geometric routine: singular-endpoint
//! quadrature over the geodesic parameter, bracketed root finding and the
//! special functions needed by the power-law closed forms.

mod quadrature;
mod roots;
mod special;

pub use quadrature::{integrate_interval, integrate_sigma};
pub use roots::{find_root_monotone, try_find_root_monotone};
pub use special::{gamma_fn, hyp2f1, ln_gamma};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and iteration budgets used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericsConfig {
    pub quad_rel_tol: f64,
    pub quad_abs_tol: f64,
    pub root_tol: f64,
    /// Iteration cap for root finding and subdivision cap for quadrature.
    pub max_iter: usize,
    /// Surrogate upper limit for infinite sigma ranges when the mapped tail
    /// integrand cannot be evaluated.
    pub sigma_cap: f64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            quad_rel_tol: 1e-12,
            quad_abs_tol: 1e-14,
            root_tol: 1e-12,
            max_iter: 200,
            sigma_cap: 1e12,
        }
    }
}

impl NumericsConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("quad_rel_tol", self.quad_rel_tol),
            ("quad_abs_tol", self.quad_abs_tol),
            ("root_tol", self.root_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::domain("max_iter must be at least 1"));
        }
        if !(self.sigma_cap > 1.0) {
            return Err(Error::domain(format!(
                "sigma_cap must exceed 1, got {}",
                self.sigma_cap
            )));
        }
        Ok(())
    }
}

/// Inverse secant for arguments >= 1, computed as `acos(1/x)`.
pub fn arcsec(x: f64) -> f64 {
    (1.0 / x).acos()
}
