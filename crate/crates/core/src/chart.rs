//! Transforms between Robertson-Walker coordinates `(t, chi, theta, phi)` and
//! Fermi coordinates `(tau, rho, theta, phi)` of the comoving observer at
//! `chi = 0`.

use serde::{Deserialize, Serialize};

use crate::cosmology::{Cosmology, ScaleFactor, ScaleFactorModel};
use crate::error::{Error, Result};
use crate::geodesics::{b_ddot_integral, check_sigma, chi_of_sigma, invert_sigma_map, rho_of_sigma, t_of_sigma};
use crate::kinematics::proper_radius;
use crate::numerics::{try_find_root_monotone, NumericsConfig};

/// An event in Robertson-Walker coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RWEvent {
    pub t: f64,
    pub chi: f64,
    pub theta: f64,
    pub phi: f64,
}

impl RWEvent {
    pub fn new(t: f64, chi: f64) -> Self {
        RWEvent {
            t,
            chi,
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub fn with_angles(t: f64, chi: f64, theta: f64, phi: f64) -> Self {
        RWEvent { t, chi, theta, phi }
    }

    fn validate(&self) -> Result<()> {
        if !(self.t > 0.0) || !self.t.is_finite() {
            return Err(Error::domain(format!("t must be positive, got {}", self.t)));
        }
        if !(self.chi >= 0.0) || !self.chi.is_finite() {
            return Err(Error::domain(format!("chi must be non-negative, got {}", self.chi)));
        }
        Ok(())
    }
}

/// An event in Fermi coordinates, in polar form with optional Cartesian
/// components `(x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FermiEvent {
    pub tau: f64,
    pub rho: f64,
    pub theta: f64,
    pub phi: f64,
    pub cartesian: Option<[f64; 3]>,
}

impl FermiEvent {
    pub fn new(tau: f64, rho: f64) -> Self {
        FermiEvent {
            tau,
            rho,
            theta: 0.0,
            phi: 0.0,
            cartesian: None,
        }
    }

    pub fn with_angles(tau: f64, rho: f64, theta: f64, phi: f64) -> Self {
        FermiEvent {
            tau,
            rho,
            theta,
            phi,
            cartesian: None,
        }
    }

    pub fn from_cartesian(tau: f64, xyz: [f64; 3]) -> Self {
        let [x, y, z] = xyz;
        let rho = (x * x + y * y + z * z).sqrt();
        let theta = if rho > 0.0 {
            (z / rho).clamp(-1.0, 1.0).acos()
        } else {
            0.0
        };
        FermiEvent {
            tau,
            rho,
            theta,
            phi: y.atan2(x),
            cartesian: Some(xyz),
        }
    }

    /// Cartesian components, computed from the polar form when absent.
    pub fn to_cartesian(&self) -> [f64; 3] {
        self.cartesian.unwrap_or_else(|| {
            let (st, ct) = self.theta.sin_cos();
            let (sp, cp) = self.phi.sin_cos();
            [self.rho * st * cp, self.rho * st * sp, self.rho * ct]
        })
    }
}

/// The geodesic parameter at arc length `rho` on the slice at `tau`.
pub fn sigma_of_rho(cosmo: &Cosmology, tau: f64, rho: f64, cfg: &NumericsConfig) -> Result<f64> {
    cosmo.check_tau(tau)?;
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::domain(format!("rho must be finite and non-negative, got {rho}")));
    }
    if rho == 0.0 {
        return Ok(1.0);
    }
    let rho_max = proper_radius(cosmo, tau, cfg)?;
    if rho >= rho_max {
        return Err(Error::OutOfSlice { tau, rho, rho_max });
    }
    invert_sigma_map(cosmo, tau, rho, |s| rho_of_sigma(cosmo, tau, s, cfg), cfg)?.ok_or(Error::OutOfSlice {
        tau,
        rho,
        rho_max,
    })
}

fn check_local_chart(cosmo: &Cosmology, tau: f64, rho: f64) -> Result<()> {
    if let ScaleFactorModel::Exponential(e) = &cosmo.model {
        let h0 = e.h0();
        if !(h0 * rho < std::f64::consts::FRAC_PI_2) {
            return Err(Error::OutOfChart(format!(
                "H0*rho={} violates H0*rho < pi/2 at tau={tau}",
                h0 * rho
            )));
        }
    }
    Ok(())
}

/// Robertson-Walker coordinates of a Fermi event.
pub fn rw_from_fermi(cosmo: &Cosmology, ev: &FermiEvent, cfg: &NumericsConfig) -> Result<RWEvent> {
    check_local_chart(cosmo, ev.tau, ev.rho)?;
    let sigma = sigma_of_rho(cosmo, ev.tau, ev.rho, cfg)?;
    if sigma == 1.0 {
        return Ok(RWEvent::with_angles(ev.tau, 0.0, ev.theta, ev.phi));
    }
    Ok(RWEvent {
        t: t_of_sigma(cosmo, ev.tau, sigma)?,
        chi: chi_of_sigma(cosmo, ev.tau, sigma, cfg)?,
        theta: ev.theta,
        phi: ev.phi,
    })
}

/// Maximum number of times the upper end of the tau bracket is doubled.
pub const MAX_BRACKET_DOUBLINGS: usize = 60;

/// Fermi coordinates of a Robertson-Walker event.
///
/// The event lies on the orthogonal geodesic of exactly one `tau1 >= t1`;
/// along `tau -> chi(tau, (a(tau)/a(t1))^2)` the comoving coordinate grows
/// strictly, so `tau1` is found by bracketing and root finding.
pub fn fermi_from_rw(cosmo: &Cosmology, ev: &RWEvent, cfg: &NumericsConfig) -> Result<FermiEvent> {
    ev.validate()?;
    let m = &cosmo.model;
    let t1 = ev.t;
    let t_max = m.t_max();
    if t1 > t_max {
        return Err(Error::domain(format!("t={t1} exceeds the model's time range {t_max}")));
    }
    if ev.chi == 0.0 {
        return Ok(FermiEvent::with_angles(t1, 0.0, ev.theta, ev.phi));
    }
    let a1 = m.a(t1);
    let sigma_at = |tau: f64| {
        let r = m.a(tau) / a1;
        r * r
    };
    let excess = |tau: f64| -> Result<f64> {
        if tau == t1 {
            return Ok(-ev.chi);
        }
        Ok(chi_of_sigma(cosmo, tau, sigma_at(tau), cfg)? - ev.chi)
    };

    let mut lo = t1;
    let mut hi = (2.0 * t1).min(t_max);
    let mut found = false;
    for _ in 0..MAX_BRACKET_DOUBLINGS {
        if excess(hi)? >= 0.0 {
            found = true;
            break;
        }
        if hi >= t_max {
            return Err(Error::domain(format!(
                "event (t={t1}, chi={}) maps beyond the model's time range {t_max}",
                ev.chi
            )));
        }
        lo = hi;
        hi = (2.0 * hi).min(t_max);
    }
    if !found {
        let msg = format!(
            "no tau bracket for (t={t1}, chi={}) after {MAX_BRACKET_DOUBLINGS} doublings",
            ev.chi
        );
        return Err(if cosmo.global_chart() {
            Error::Accuracy {
                message: msg,
                estimate: hi,
                error_bound: f64::INFINITY,
            }
        } else {
            Error::domain(format!("{msg}; the event lies outside the local Fermi chart"))
        });
    }
    let tau1 = try_find_root_monotone(excess, lo, hi, cfg)?;
    let rho = rho_of_sigma(cosmo, tau1, sigma_at(tau1), cfg)?;
    Ok(FermiEvent::with_angles(tau1, rho, ev.theta, ev.phi))
}

/// Jacobian determinant of `(tau, sigma) -> (t, chi)`.
pub fn jacobian_f(cosmo: &Cosmology, tau: f64, sigma: f64, cfg: &NumericsConfig) -> Result<f64> {
    check_sigma(cosmo, tau, sigma)?;
    if !(sigma > 1.0) {
        return Err(Error::domain(format!("the Jacobian needs sigma > 1, got {sigma}")));
    }
    let m = &cosmo.model;
    let a = m.a(tau);
    let x = a / sigma.sqrt();
    let bd = m.b_dot(x);
    let integral = b_ddot_integral(cosmo, tau, sigma, 1.0, cfg)?;
    Ok(m.a_dot(tau) / (2.0 * sigma) * bd * (bd / (sigma - 1.0).sqrt() + a / (2.0 * sigma.sqrt()) * integral))
}

const FLOW_REL_STEP: f64 = 1e-5;

/// Components `(d tau/dt, d rho/dt)` of the comoving flow vector at `ev`.
pub fn comoving_flow_fermi(cosmo: &Cosmology, ev: &RWEvent, cfg: &NumericsConfig) -> Result<(f64, f64)> {
    comoving_flow_fermi_with_step(cosmo, ev, FLOW_REL_STEP * ev.t, cfg)
}

/// As [`comoving_flow_fermi`] with an explicit finite-difference step in `t`.
pub fn comoving_flow_fermi_with_step(
    cosmo: &Cosmology,
    ev: &RWEvent,
    h: f64,
    cfg: &NumericsConfig,
) -> Result<(f64, f64)> {
    ev.validate()?;
    if !(h > 0.0) || ev.t + h == ev.t || ev.t - h <= 0.0 {
        return Err(Error::Accuracy {
            message: format!("finite-difference step h={h} unusable at t={}", ev.t),
            estimate: f64::NAN,
            error_bound: f64::INFINITY,
        });
    }
    if ev.chi == 0.0 {
        return Ok((1.0, 0.0));
    }
    let plus = fermi_from_rw(cosmo, &RWEvent::new(ev.t + h, ev.chi), cfg)?;
    let minus = fermi_from_rw(cosmo, &RWEvent::new(ev.t - h, ev.chi), cfg)?;
    Ok(((plus.tau - minus.tau) / (2.0 * h), (plus.rho - minus.rho) / (2.0 * h)))
}
