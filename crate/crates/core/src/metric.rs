//! The spacetime metric in Fermi polar and Fermi Cartesian coordinates.
//!
//! In polar form the metric is diagonal,
//! `ds^2 = g_tau_tau dtau^2 + drho^2 + ang dOmega^2`, with `g_rho_rho = 1`
//! exactly. In Cartesian form the spatial block is
//! `delta_ij + lambda (rho^2 delta_ij - x_i x_j)`.

use serde::Serialize;

use crate::chart::sigma_of_rho;
use crate::cosmology::{hubble, Cosmology, Curvature, ScaleFactor};
use crate::error::{Error, Result};
use crate::geodesics::{b_ddot_integral, chi_of_sigma, rho_of_sigma};
use crate::kinematics::proper_radius;
use crate::numerics::NumericsConfig;

/// Components of the metric in Fermi polar coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarMetric {
    pub g_tau_tau: f64,
    pub g_rho_rho: f64,
    /// Coefficient of `dOmega^2`, `a(tau)^2 S_k(chi)^2 / sigma`.
    pub ang: f64,
}

/// `chi` for `k = 0`, `sinh(chi)` for `k = -1`.
pub fn s_k(chi: f64, k: i32) -> Result<f64> {
    Ok(match Curvature::try_from(k)? {
        Curvature::Flat => chi,
        Curvature::Open => chi.sinh(),
    })
}

fn s_k_curv(chi: f64, k: Curvature) -> f64 {
    match k {
        Curvature::Flat => chi,
        Curvature::Open => chi.sinh(),
    }
}

pub(crate) fn g_tau_tau_at_sigma(cosmo: &Cosmology, tau: f64, sigma: f64, cfg: &NumericsConfig) -> Result<f64> {
    let m = &cosmo.model;
    let a = m.a(tau);
    let a_dot = m.a_dot(tau);
    let mut bracket = m.b_dot(a / sigma.sqrt());
    if sigma > 1.0 {
        let integral = b_ddot_integral(cosmo, tau, sigma, 1.0, cfg)?;
        bracket += a * ((sigma - 1.0) / sigma).sqrt() * 0.5 * integral;
    }
    Ok(-(a_dot * bracket) * (a_dot * bracket))
}

fn ang_at_sigma(cosmo: &Cosmology, tau: f64, sigma: f64, cfg: &NumericsConfig) -> Result<f64> {
    let a = cosmo.model.a(tau);
    let sk = s_k_curv(chi_of_sigma(cosmo, tau, sigma, cfg)?, cosmo.k);
    Ok(a * a * sk * sk / sigma)
}

/// The `dtau^2` coefficient at arc length `rho` on the slice at `tau`.
pub fn g_tau_tau(cosmo: &Cosmology, tau: f64, rho: f64, cfg: &NumericsConfig) -> Result<f64> {
    let sigma = sigma_of_rho(cosmo, tau, rho, cfg)?;
    g_tau_tau_at_sigma(cosmo, tau, sigma, cfg)
}

/// Polar metric components at the geodesic parameter `sigma`.
pub fn metric_polar_at_sigma(cosmo: &Cosmology, tau: f64, sigma: f64, cfg: &NumericsConfig) -> Result<PolarMetric> {
    Ok(PolarMetric {
        g_tau_tau: g_tau_tau_at_sigma(cosmo, tau, sigma, cfg)?,
        g_rho_rho: 1.0,
        ang: ang_at_sigma(cosmo, tau, sigma, cfg)?,
    })
}

/// Polar metric components at arc length `rho` on the slice at `tau`.
pub fn metric_polar(cosmo: &Cosmology, tau: f64, rho: f64, cfg: &NumericsConfig) -> Result<PolarMetric> {
    let sigma = sigma_of_rho(cosmo, tau, rho, cfg)?;
    metric_polar_at_sigma(cosmo, tau, sigma, cfg)
}

/// Below this multiple of the Hubble length `lambda` is taken from a
/// quadratic fit in `rho` rather than the cancelling quotient.
const LAMBDA_EPS_HUBBLE: f64 = 1e-2;

fn lambda_direct(cosmo: &Cosmology, tau: f64, rho: f64, cfg: &NumericsConfig) -> Result<f64> {
    let sigma = sigma_of_rho(cosmo, tau, rho, cfg)?;
    // use the arc length of the solved sigma so that both terms of the
    // difference refer to the same point
    let r = rho_of_sigma(cosmo, tau, sigma, cfg)?;
    let ang = ang_at_sigma(cosmo, tau, sigma, cfg)?;
    let r2 = r * r;
    Ok((ang - r2) / (r2 * r2))
}

/// The smooth function `lambda_k = (ang - rho^2) / rho^4` of the Cartesian
/// metric.
///
/// The quotient cancels badly as `rho -> 0`, so below
/// `rho_eps = min(1e-2 / H(tau), rho_M / 8)` the value comes from the even
/// fit `lambda0 + c rho^2` through `rho_eps` and `2 rho_eps`; at `rho = 0`
/// this is the Richardson-extrapolated limit.
pub fn lambda_k(cosmo: &Cosmology, tau: f64, rho: f64, cfg: &NumericsConfig) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::domain(format!("rho must be non-negative, got {rho}")));
    }
    let h = hubble(cosmo, tau)?;
    let rho_eps = (LAMBDA_EPS_HUBBLE / h).min(proper_radius(cosmo, tau, cfg)? / 8.0);
    if rho >= rho_eps {
        return lambda_direct(cosmo, tau, rho, cfg);
    }
    let l1 = lambda_direct(cosmo, tau, rho_eps, cfg)?;
    let l2 = lambda_direct(cosmo, tau, 2.0 * rho_eps, cfg)?;
    let slope = (l2 - l1) / (3.0 * rho_eps * rho_eps);
    let l0 = l1 - slope * rho_eps * rho_eps;
    Ok(l0 + slope * rho * rho)
}

/// Dense symmetric metric in Fermi Cartesian coordinates `(tau, x, y, z)`.
pub fn metric_cartesian(cosmo: &Cosmology, tau: f64, xyz: [f64; 3], cfg: &NumericsConfig) -> Result<[[f64; 4]; 4]> {
    let rho2: f64 = xyz.iter().map(|x| x * x).sum();
    let rho = rho2.sqrt();
    let mut g = [[0.0; 4]; 4];
    g[0][0] = g_tau_tau(cosmo, tau, rho, cfg)?;
    let lambda = lambda_k(cosmo, tau, rho, cfg)?;
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            g[i + 1][j + 1] = delta + lambda * (rho2 * delta - xyz[i] * xyz[j]);
        }
    }
    Ok(g)
}
