//! Exact solutions for the Milne, de Sitter, radiation-dominated and
//! matter-dominated universes. They serve as oracles for the quadrature-based
//! routines and are cheap enough to use directly.

use std::f64::consts::PI;

use serde::Serialize;

use crate::cosmology::Cosmology;
use crate::error::{Error, Result};
use crate::numerics::{arcsec, gamma_fn, hyp2f1, try_find_root_monotone, NumericsConfig};

/// `sqrt(pi) Gamma(5/4) / Gamma(3/4)`, the value of `2F1(1/4, 1/2; 5/4; 1)`.
pub const MATTER_K: f64 = 1.311_028_777_146_059_9;

/// Supremum of the matter-dominated Fermi speed,
/// `(3/4) sqrt(pi) Gamma(5/4) / Gamma(7/4)`. Numerically equal to [`MATTER_K`].
pub fn matter_sup_speed() -> f64 {
    0.75 * PI.sqrt() * gamma_fn(1.25).unwrap() / gamma_fn(1.75).unwrap()
}

/// One of the four families with closed-form Fermi coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ClosedFormModel {
    Milne,
    DeSitter { h0: f64 },
    Radiation,
    Matter,
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::domain(format!("tau must be positive, got {tau}")));
    }
    Ok(())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma >= 1.0) || sigma.is_nan() {
        return Err(Error::domain(format!("sigma must be at least 1, got {sigma}")));
    }
    Ok(())
}

/// `∫_1^sigma s^(-p) (s-1)^(-1/2) ds` for `p > 1/2`, via
/// `B(p - 1/2, 1/2) - z^(p-1/2)/(p-1/2) 2F1(1/2, p-1/2; p+1/2; z)`, `z = 1/sigma`.
fn tail_beta_integral(p: f64, sigma: f64) -> Result<f64> {
    let q = p - 0.5;
    let z = 1.0 / sigma;
    let beta = gamma_fn(q)? * PI.sqrt() / gamma_fn(p)?;
    Ok(beta - z.powf(q) / q * hyp2f1(0.5, q, q + 1.0, z)?)
}

/// Bracket `K - 2F1(1/4, 1/2; 5/4; 1/sigma) / sigma^(1/4)` shared by the
/// matter-dominated chi and g_tau_tau.
fn matter_bracket(sigma: f64) -> Result<f64> {
    let z = 1.0 / sigma;
    Ok(MATTER_K - hyp2f1(0.25, 0.5, 1.25, z)? * z.powf(0.25))
}

/// Inverts a strictly increasing `f` with `f(1) = 0` by bracketing in
/// `u = sqrt(sigma - 1)`.
fn invert<F: Fn(f64) -> Result<f64>>(f: F, target: f64, u_cap: f64) -> Result<f64> {
    if target == 0.0 {
        return Ok(1.0);
    }
    let cfg = NumericsConfig::default();
    let (mut lo, mut hi) = (0.0, 1.0f64.min(u_cap));
    while f(1.0 + hi * hi)? < target {
        if hi >= u_cap {
            return Err(Error::domain(format!("target {target} not reached before u={u_cap}")));
        }
        lo = hi;
        hi = (2.0 * hi).min(u_cap);
    }
    let u = try_find_root_monotone(|u| Ok(f(1.0 + u * u)? - target), lo, hi, &cfg)?;
    Ok(1.0 + u * u)
}

const U_CAP: f64 = 1e12;

impl ClosedFormModel {
    pub fn milne() -> Self {
        ClosedFormModel::Milne
    }

    pub fn de_sitter(h0: f64) -> Result<Self> {
        if !(h0 > 0.0) || !h0.is_finite() {
            return Err(Error::domain(format!("h0 must be positive, got {h0}")));
        }
        Ok(ClosedFormModel::DeSitter { h0 })
    }

    pub fn radiation() -> Self {
        ClosedFormModel::Radiation
    }

    pub fn matter() -> Self {
        ClosedFormModel::Matter
    }

    /// The general-purpose cosmology this family describes.
    pub fn cosmology(&self) -> Cosmology {
        match *self {
            ClosedFormModel::Milne => Cosmology::milne(),
            ClosedFormModel::DeSitter { h0 } => Cosmology::de_sitter(h0).expect("h0 validated"),
            ClosedFormModel::Radiation => Cosmology::radiation(),
            ClosedFormModel::Matter => Cosmology::matter(),
        }
    }

    /// Checks `(tau, sigma)` against the chart; only de Sitter has a bound
    /// beyond `sigma >= 1`.
    fn check(&self, tau: f64, sigma: f64) -> Result<()> {
        check_tau(tau)?;
        check_sigma(sigma)?;
        if let ClosedFormModel::DeSitter { h0 } = *self {
            if !(0.5 * sigma.ln() < h0 * tau) {
                return Err(Error::OutOfChart(format!(
                    "sqrt(sigma)={} violates sqrt(sigma) < exp(H0 tau)={}",
                    sigma.sqrt(),
                    (h0 * tau).exp()
                )));
            }
        }
        Ok(())
    }

    pub fn t(&self, tau: f64, sigma: f64) -> Result<f64> {
        self.check(tau, sigma)?;
        Ok(match *self {
            ClosedFormModel::Milne => tau / sigma.sqrt(),
            ClosedFormModel::DeSitter { h0 } => tau - 0.5 * sigma.ln() / h0,
            ClosedFormModel::Radiation => tau / sigma,
            ClosedFormModel::Matter => tau * sigma.powf(-0.75),
        })
    }

    pub fn chi(&self, tau: f64, sigma: f64) -> Result<f64> {
        self.check(tau, sigma)?;
        Ok(match *self {
            ClosedFormModel::Milne => (sigma.sqrt() + (sigma - 1.0).sqrt()).ln(),
            ClosedFormModel::DeSitter { h0 } => (-h0 * tau).exp() * (sigma - 1.0).sqrt() / h0,
            ClosedFormModel::Radiation => 2.0 * tau.sqrt() * arcsec(sigma.sqrt()),
            ClosedFormModel::Matter => 3.0 * tau.cbrt() * matter_bracket(sigma)?,
        })
    }

    pub fn rho(&self, tau: f64, sigma: f64) -> Result<f64> {
        self.check(tau, sigma)?;
        Ok(match *self {
            ClosedFormModel::Milne => tau * ((sigma - 1.0) / sigma).sqrt(),
            ClosedFormModel::DeSitter { h0 } => arcsec(sigma.sqrt()) / h0,
            ClosedFormModel::Radiation => tau * ((sigma - 1.0).sqrt() / sigma + arcsec(sigma.sqrt())),
            ClosedFormModel::Matter => 0.75 * tau * tail_beta_integral(1.75, sigma)?,
        })
    }

    /// Proper radius of the slice at `tau`.
    pub fn rho_slice(&self, tau: f64) -> Result<f64> {
        check_tau(tau)?;
        Ok(match *self {
            ClosedFormModel::Milne => tau,
            ClosedFormModel::DeSitter { h0 } => arcsec((h0 * tau).exp()) / h0,
            ClosedFormModel::Radiation => 0.5 * PI * tau,
            ClosedFormModel::Matter => matter_sup_speed() * tau,
        })
    }

    pub fn sigma_of_rho(&self, tau: f64, rho: f64) -> Result<f64> {
        check_tau(tau)?;
        if !(rho >= 0.0) {
            return Err(Error::domain(format!("rho must be non-negative, got {rho}")));
        }
        if let ClosedFormModel::DeSitter { h0 } = *self {
            if !(h0 * rho < 0.5 * PI) {
                return Err(Error::OutOfChart(format!("H0*rho={} violates H0*rho < pi/2", h0 * rho)));
            }
            if !((-h0 * tau).exp() < (h0 * rho).cos()) {
                return Err(Error::OutOfChart(format!(
                    "exp(-H0 tau)={} violates exp(-H0 tau) < cos(H0 rho)={}",
                    (-h0 * tau).exp(),
                    (h0 * rho).cos()
                )));
            }
            let c = (h0 * rho).cos();
            return Ok(1.0 / (c * c));
        }
        let rho_max = self.rho_slice(tau)?;
        if rho >= rho_max {
            return Err(Error::OutOfSlice { tau, rho, rho_max });
        }
        match *self {
            ClosedFormModel::Milne => {
                let r = rho / tau;
                Ok(1.0 / (1.0 - r * r))
            }
            ClosedFormModel::Radiation => {
                // rho/tau = theta + sin(theta) cos(theta) with sqrt(sigma) = sec(theta)
                let target = rho / tau;
                let cfg = NumericsConfig::default();
                let theta =
                    crate::numerics::find_root_monotone(|th| th + th.sin() * th.cos() - target, 0.0, 0.5 * PI, &cfg)?;
                let c = theta.cos();
                Ok(1.0 / (c * c))
            }
            ClosedFormModel::Matter => invert(|s| self.rho(tau, s), rho, U_CAP),
            ClosedFormModel::DeSitter { .. } => unreachable!(),
        }
    }

    pub fn g_tau_tau(&self, tau: f64, rho: f64) -> Result<f64> {
        let sigma = self.sigma_of_rho(tau, rho)?;
        Ok(match *self {
            ClosedFormModel::Milne => -1.0,
            ClosedFormModel::DeSitter { h0 } => {
                let c = (h0 * rho).cos();
                -c * c
            }
            ClosedFormModel::Radiation => {
                let f = 1.0 + (sigma - 1.0).sqrt() * arcsec(sigma.sqrt());
                -f * f / sigma
            }
            ClosedFormModel::Matter => Self::matter_g_tau_tau_at_sigma(sigma)?,
        })
    }

    /// `-(1/sqrt(sigma)) [1 + (sqrt(sigma-1)/sigma^(1/4)) (K - 2F1(1/4,1/2;5/4;1/sigma)/sigma^(1/4))]^2`,
    /// independent of `tau`.
    pub fn matter_g_tau_tau_at_sigma(sigma: f64) -> Result<f64> {
        check_sigma(sigma)?;
        let f = 1.0 + (sigma - 1.0).sqrt() * sigma.powf(-0.25) * matter_bracket(sigma)?;
        Ok(-f * f / sigma.sqrt())
    }

    /// Coefficient of `dOmega^2` at `(tau, sigma)`.
    pub fn ang(&self, tau: f64, sigma: f64) -> Result<f64> {
        self.check(tau, sigma)?;
        Ok(match *self {
            ClosedFormModel::Milne => tau * tau * (sigma - 1.0) / sigma,
            ClosedFormModel::DeSitter { h0 } => (sigma - 1.0) / (sigma * h0 * h0),
            ClosedFormModel::Radiation => {
                let x = 2.0 * tau * arcsec(sigma.sqrt());
                x * x / sigma
            }
            ClosedFormModel::Matter => {
                let chi = self.chi(tau, sigma)?;
                tau.powf(4.0 / 3.0) * chi * chi / sigma
            }
        })
    }

    /// Fermi speed of the particle crossing the slice at `sigma`.
    pub fn v_f(&self, sigma: f64) -> Result<f64> {
        check_sigma(sigma)?;
        Ok(match *self {
            ClosedFormModel::Milne => ((sigma - 1.0) / sigma).sqrt(),
            ClosedFormModel::DeSitter { .. } => (sigma - 1.0).sqrt() / sigma,
            ClosedFormModel::Radiation => (sigma - 1.0).sqrt() / sigma + (sigma - 1.0) / sigma * arcsec(sigma.sqrt()),
            ClosedFormModel::Matter => {
                if sigma == 1.0 {
                    return Ok(0.0);
                }
                0.75 * (tail_beta_integral(1.75, sigma)? - tail_beta_integral(0.75, sigma)? / (3.0 * sigma))
            }
        })
    }

    /// Fermi speed of the comoving particle at `chi` seen at `tau`.
    pub fn v_f_of_chi(&self, tau: f64, chi: f64) -> Result<f64> {
        check_tau(tau)?;
        if !(chi >= 0.0) {
            return Err(Error::domain(format!("chi must be non-negative, got {chi}")));
        }
        match *self {
            ClosedFormModel::Milne => Ok(chi.tanh()),
            ClosedFormModel::DeSitter { h0 } => {
                let x = h0 * (h0 * tau).exp() * chi;
                if !(x < (h0 * tau).exp()) {
                    return Err(Error::OutOfChart(format!(
                        "chi={chi} is beyond the chart limit exp(-H0 tau)/H0={}",
                        (-h0 * tau).exp() / h0
                    )));
                }
                Ok(x / (1.0 + x * x))
            }
            ClosedFormModel::Radiation => {
                let y = chi / tau.sqrt();
                if !(y < PI) {
                    return Err(Error::domain(format!(
                        "chi={chi} is beyond the horizon pi*sqrt(tau)={}",
                        PI * tau.sqrt()
                    )));
                }
                Ok(0.5 * y.sin() + 0.25 * y * (1.0 - y.cos()))
            }
            ClosedFormModel::Matter => {
                let horizon = 3.0 * MATTER_K * tau.cbrt();
                if !(chi < horizon) {
                    return Err(Error::domain(format!("chi={chi} is beyond the horizon {horizon}")));
                }
                let sigma = invert(|s| self.chi(tau, s), chi, U_CAP)?;
                self.v_f(sigma)
            }
        }
    }
}

/// Milne: Robertson-Walker `(t, chi)` to Fermi `(tau, rho)`.
pub fn milne_to_fermi(t: f64, chi: f64) -> (f64, f64) {
    (t * chi.cosh(), t * chi.sinh())
}

/// Milne: Fermi `(tau, rho)` to Robertson-Walker `(t, chi)`.
pub fn milne_to_rw(tau: f64, rho: f64) -> Result<(f64, f64)> {
    check_tau(tau)?;
    if !(rho >= 0.0 && rho < tau) {
        return Err(Error::OutOfSlice { tau, rho, rho_max: tau });
    }
    Ok(((tau * tau - rho * rho).sqrt(), (rho / tau).atanh()))
}
