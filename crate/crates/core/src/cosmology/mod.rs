//! Scale-factor models and the cosmology wrapper that carries curvature.

mod tabulated;

pub use tabulated::{read_samples_csv, read_samples_json, Tabulated};

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Evaluators for an increasing scale factor `a(t)` and its inverse `b`.
///
/// `b_dot(a(t)) * a_dot(t) = 1` must hold on the domain.
pub trait ScaleFactor: fmt::Debug + Send + Sync {
    fn a(&self, t: f64) -> f64;
    fn a_dot(&self, t: f64) -> f64;
    fn b(&self, x: f64) -> f64;
    fn b_dot(&self, x: f64) -> f64;
    fn b_ddot(&self, x: f64) -> f64;
    /// `lim_{t -> 0+} a(t)`.
    fn a_inf(&self) -> f64;
    /// True iff `b_ddot >= 0` everywhere, i.e. the expansion is non inflationary
    /// and the Fermi chart is global.
    fn global_chart(&self) -> bool;
    /// Upper end of the time domain (`+inf` for analytic families).
    fn t_max(&self) -> f64 {
        f64::INFINITY
    }
}

/// `a(t) = t^alpha`, `0 < alpha <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLaw {
    alpha: f64,
}

impl PowerLaw {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl ScaleFactor for PowerLaw {
    fn a(&self, t: f64) -> f64 {
        t.powf(self.alpha)
    }
    fn a_dot(&self, t: f64) -> f64 {
        self.alpha * t.powf(self.alpha - 1.0)
    }
    fn b(&self, x: f64) -> f64 {
        x.powf(1.0 / self.alpha)
    }
    fn b_dot(&self, x: f64) -> f64 {
        let p = 1.0 / self.alpha;
        p * x.powf(p - 1.0)
    }
    fn b_ddot(&self, x: f64) -> f64 {
        let p = 1.0 / self.alpha;
        if p == 1.0 {
            0.0
        } else {
            p * (p - 1.0) * x.powf(p - 2.0)
        }
    }
    fn a_inf(&self) -> f64 {
        0.0
    }
    fn global_chart(&self) -> bool {
        true
    }
}

/// `a(t) = exp(h0 t)` (de Sitter).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exponential {
    h0: f64,
}

impl Exponential {
    pub fn h0(&self) -> f64 {
        self.h0
    }
}

impl ScaleFactor for Exponential {
    fn a(&self, t: f64) -> f64 {
        (self.h0 * t).exp()
    }
    fn a_dot(&self, t: f64) -> f64 {
        self.h0 * (self.h0 * t).exp()
    }
    fn b(&self, x: f64) -> f64 {
        x.ln() / self.h0
    }
    fn b_dot(&self, x: f64) -> f64 {
        1.0 / (self.h0 * x)
    }
    fn b_ddot(&self, x: f64) -> f64 {
        -1.0 / (self.h0 * x * x)
    }
    fn a_inf(&self) -> f64 {
        1.0
    }
    fn global_chart(&self) -> bool {
        false
    }
}

/// A scale-factor model: one of the built-in families or a user-supplied
/// implementation of [`ScaleFactor`].
#[derive(Debug, Clone)]
pub enum ScaleFactorModel {
    PowerLaw(PowerLaw),
    Exponential(Exponential),
    Tabulated(Arc<Tabulated>),
    Custom(Arc<dyn ScaleFactor>),
}

/// `a(t) = t^alpha` for `0 < alpha <= 1`.
pub fn make_power_law(alpha: f64) -> Result<ScaleFactorModel> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!(
            "power-law exponent must lie in (0, 1], got {alpha}"
        )));
    }
    Ok(ScaleFactorModel::PowerLaw(PowerLaw { alpha }))
}

/// `a(t) = exp(h0 t)` for `h0 > 0`.
pub fn make_exponential(h0: f64) -> Result<ScaleFactorModel> {
    if !(h0 > 0.0 && h0.is_finite()) {
        return Err(Error::domain(format!("h0 must be positive, got {h0}")));
    }
    Ok(ScaleFactorModel::Exponential(Exponential { h0 }))
}

/// Monotone piecewise-cubic model through `(t, a)` samples.
pub fn make_tabulated(samples: &[(f64, f64)]) -> Result<ScaleFactorModel> {
    Ok(ScaleFactorModel::Tabulated(Arc::new(Tabulated::new(samples)?)))
}

impl ScaleFactorModel {
    fn inner(&self) -> &dyn ScaleFactor {
        match self {
            ScaleFactorModel::PowerLaw(m) => m,
            ScaleFactorModel::Exponential(m) => m,
            ScaleFactorModel::Tabulated(m) => m.as_ref(),
            ScaleFactorModel::Custom(m) => m.as_ref(),
        }
    }

    /// Power-law exponent, if this is a power-law model.
    pub fn power_law_alpha(&self) -> Option<f64> {
        match self {
            ScaleFactorModel::PowerLaw(p) => Some(p.alpha),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ScaleFactorModel::PowerLaw(p) => format!("power-law(alpha={})", p.alpha),
            ScaleFactorModel::Exponential(e) => format!("exponential(h0={})", e.h0),
            ScaleFactorModel::Tabulated(t) => format!("tabulated({} samples)", t.len()),
            ScaleFactorModel::Custom(_) => "custom".to_string(),
        }
    }
}

impl ScaleFactor for ScaleFactorModel {
    fn a(&self, t: f64) -> f64 {
        self.inner().a(t)
    }
    fn a_dot(&self, t: f64) -> f64 {
        self.inner().a_dot(t)
    }
    fn b(&self, x: f64) -> f64 {
        self.inner().b(x)
    }
    fn b_dot(&self, x: f64) -> f64 {
        self.inner().b_dot(x)
    }
    fn b_ddot(&self, x: f64) -> f64 {
        self.inner().b_ddot(x)
    }
    fn a_inf(&self) -> f64 {
        self.inner().a_inf()
    }
    fn global_chart(&self) -> bool {
        self.inner().global_chart()
    }
    fn t_max(&self) -> f64 {
        self.inner().t_max()
    }
}

/// Sign of the spatial curvature. Closed (`k = +1`) slices are not supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Curvature {
    Flat,
    Open,
}

impl Curvature {
    pub fn k(self) -> i32 {
        match self {
            Curvature::Flat => 0,
            Curvature::Open => -1,
        }
    }
}

impl TryFrom<i32> for Curvature {
    type Error = Error;

    fn try_from(k: i32) -> Result<Self> {
        match k {
            0 => Ok(Curvature::Flat),
            -1 => Ok(Curvature::Open),
            other => Err(Error::UnsupportedCurvature(other)),
        }
    }
}

/// A Robertson-Walker spacetime: scale factor plus curvature.
#[derive(Debug, Clone)]
pub struct Cosmology {
    pub model: ScaleFactorModel,
    pub k: Curvature,
    pub name: String,
}

impl Cosmology {
    pub fn new(model: ScaleFactorModel, k: Curvature, name: impl Into<String>) -> Self {
        Cosmology {
            model,
            k,
            name: name.into(),
        }
    }

    /// `a(t) = t`, `k = -1`.
    pub fn milne() -> Self {
        Self::new(
            ScaleFactorModel::PowerLaw(PowerLaw { alpha: 1.0 }),
            Curvature::Open,
            "milne",
        )
    }

    /// `a(t) = exp(h0 t)`, `k = 0`.
    pub fn de_sitter(h0: f64) -> Result<Self> {
        Ok(Self::new(make_exponential(h0)?, Curvature::Flat, "de-sitter"))
    }

    /// `a(t) = sqrt(t)`, `k = 0`.
    pub fn radiation() -> Self {
        Self::new(
            ScaleFactorModel::PowerLaw(PowerLaw { alpha: 0.5 }),
            Curvature::Flat,
            "radiation",
        )
    }

    /// `a(t) = t^(2/3)`, `k = 0`.
    pub fn matter() -> Self {
        Self::new(
            ScaleFactorModel::PowerLaw(PowerLaw { alpha: 2.0 / 3.0 }),
            Curvature::Flat,
            "matter",
        )
    }

    pub fn power_law(alpha: f64, k: Curvature) -> Result<Self> {
        Ok(Self::new(make_power_law(alpha)?, k, "power-law"))
    }

    pub fn a(&self, t: f64) -> f64 {
        self.model.a(t)
    }

    pub fn global_chart(&self) -> bool {
        self.model.global_chart()
    }

    pub(crate) fn check_tau(&self, tau: f64) -> Result<()> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::domain(format!("tau must be positive, got {tau}")));
        }
        if tau > self.model.t_max() {
            return Err(Error::domain(format!(
                "tau={tau} exceeds the model's time domain (t_max={})",
                self.model.t_max()
            )));
        }
        Ok(())
    }
}

/// Hubble parameter `a_dot(tau) / a(tau)`.
pub fn hubble(cosmo: &Cosmology, tau: f64) -> Result<f64> {
    cosmo.check_tau(tau)?;
    Ok(cosmo.model.a_dot(tau) / cosmo.model.a(tau))
}

/// Upper end of the sigma range at `tau`: `(a(tau)/a_inf)^2`, or `+inf` when
/// the scale factor vanishes at the big bang.
pub fn sigma_infinity(cosmo: &Cosmology, tau: f64) -> Result<f64> {
    cosmo.check_tau(tau)?;
    let a_inf = cosmo.model.a_inf();
    if a_inf > 0.0 {
        let r = cosmo.model.a(tau) / a_inf;
        Ok(r * r)
    } else {
        Ok(f64::INFINITY)
    }
}
