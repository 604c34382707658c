//! Relative velocities of comoving test particles and the size of the
//! simultaneity slice.

use serde::Serialize;

use crate::cosmology::{hubble, sigma_infinity, Cosmology, Curvature, ScaleFactor};
use crate::error::{Error, Result};
use crate::geodesics::{b_ddot_integral, b_dot_integral, chi_of_sigma, invert_sigma_map, rho_of_sigma};
use crate::numerics::{integrate_sigma, ln_gamma, NumericsConfig};

/// Fermi and Hubble speeds of the comoving particle at `chi0`, seen by the
/// observer at proper time `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VelocityReport {
    pub tau: f64,
    pub chi0: f64,
    /// Geodesic parameter at which the particle crosses the slice.
    pub sigma0: f64,
    pub v_fermi: f64,
    pub v_hubble: f64,
    /// Proper distance to the particle within the slice.
    pub rho: f64,
}

/// Hubble-law recession speed `a'(tau) * chi0`.
pub fn hubble_speed(cosmo: &Cosmology, tau: f64, chi0: f64) -> Result<f64> {
    cosmo.check_tau(tau)?;
    if !(chi0 >= 0.0) {
        return Err(Error::domain(format!("chi0 must be non-negative, got {chi0}")));
    }
    Ok(cosmo.model.a_dot(tau) * chi0)
}

/// Solves `chi(tau, sigma) = chi0` for `sigma`.
pub(crate) fn sigma_of_chi(cosmo: &Cosmology, tau: f64, chi0: f64, cfg: &NumericsConfig) -> Result<f64> {
    cosmo.check_tau(tau)?;
    if !(chi0 >= 0.0) || !chi0.is_finite() {
        return Err(Error::domain(format!(
            "chi0 must be finite and non-negative, got {chi0}"
        )));
    }
    invert_sigma_map(cosmo, tau, chi0, |s| chi_of_sigma(cosmo, tau, s, cfg), cfg)?.ok_or_else(|| {
        Error::domain(format!(
            "chi0={chi0} is unreachable from the slice at tau={tau} (beyond the horizon)"
        ))
    })
}

/// Fermi speed of the particle whose world line crosses the slice at `sigma0`.
pub fn fermi_speed_at_sigma(cosmo: &Cosmology, tau: f64, sigma0: f64, cfg: &NumericsConfig) -> Result<VelocityReport> {
    let chi0 = chi_of_sigma(cosmo, tau, sigma0, cfg)?;
    let rho = rho_of_sigma(cosmo, tau, sigma0, cfg)?;
    let m = &cosmo.model;
    let a = m.a(tau);
    let v_fermi = if sigma0 == 1.0 {
        0.0
    } else {
        let i1 = b_dot_integral(cosmo, tau, sigma0, 1.5, cfg)?;
        let i2 = b_ddot_integral(cosmo, tau, sigma0, 2.0, cfg)?;
        let i3 = b_ddot_integral(cosmo, tau, sigma0, 1.0, cfg)?;
        0.5 * m.a_dot(tau) * (i1 + a * i2 - a / sigma0 * i3)
    };
    Ok(VelocityReport {
        tau,
        chi0,
        sigma0,
        v_fermi,
        v_hubble: m.a_dot(tau) * chi0,
        rho,
    })
}

/// Fermi speed of the comoving particle at `chi0` relative to the observer at `tau`.
pub fn fermi_speed(cosmo: &Cosmology, tau: f64, chi0: f64, cfg: &NumericsConfig) -> Result<VelocityReport> {
    let sigma0 = sigma_of_chi(cosmo, tau, chi0, cfg)?;
    let mut report = fermi_speed_at_sigma(cosmo, tau, sigma0, cfg)?;
    report.chi0 = chi0;
    Ok(report)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!(
            "power-law exponent must lie in (0, 1], got {alpha}"
        )));
    }
    Ok(())
}

fn power_integral(p: f64, sigma0: f64, cfg: &NumericsConfig) -> Result<f64> {
    integrate_sigma(|s| s.powf(-p), 1.0, sigma0, cfg)
}

/// Fermi speed for `a(t) = t^alpha`, which depends only on `sigma0`.
pub fn fermi_speed_power_law(alpha: f64, sigma0: f64, cfg: &NumericsConfig) -> Result<f64> {
    check_alpha(alpha)?;
    if !(sigma0 >= 1.0) {
        return Err(Error::domain(format!("sigma0 must be at least 1, got {sigma0}")));
    }
    let p = 0.5 / alpha;
    let first = power_integral(p + 1.0, sigma0, cfg)?;
    let second = if alpha == 1.0 {
        0.0
    } else {
        power_integral(p, sigma0, cfg)?
    };
    Ok(p * (first + (alpha - 1.0) / sigma0 * second))
}

/// Least upper bound of the Fermi speed for `a(t) = t^alpha`:
/// `sqrt(pi) Gamma(1/(2 alpha) + 1/2) / (2 alpha Gamma(1/(2 alpha) + 1))`.
pub fn fermi_speed_sup(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let p = 0.5 / alpha;
    let ratio = (ln_gamma(p + 0.5)? - ln_gamma(p + 1.0)?).exp();
    let sup = std::f64::consts::PI.sqrt() * p * ratio;
    debug_assert!(sup <= 1.0 / alpha * (1.0 + 1e-12));
    Ok(sup)
}

/// Proper radius of the Fermi space slice at `tau`: the arc length of the
/// orthogonal geodesic all the way to `sigma_infinity(tau)`.
pub fn proper_radius(cosmo: &Cosmology, tau: f64, cfg: &NumericsConfig) -> Result<f64> {
    cosmo.check_tau(tau)?;
    let s_inf = sigma_infinity(cosmo, tau)?;
    // the integrand is integrable at a finite sigma_inf; stopping just short
    // of it avoids evaluating b' exactly at a_inf
    let hi = if s_inf.is_finite() {
        s_inf * (1.0 - 1e-12)
    } else {
        f64::INFINITY
    };
    Ok(0.5 * cosmo.model.a(tau) * b_dot_integral(cosmo, tau, hi, 1.5, cfg)?)
}

/// Proper radius for `a(t) = t^alpha`, linear in `tau`.
pub fn proper_radius_power_law(alpha: f64, tau: f64) -> Result<f64> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::domain(format!("tau must be positive, got {tau}")));
    }
    Ok(fermi_speed_sup(alpha)? * tau)
}

/// Step used for the tau derivative in [`velocity_identity_residual`].
const IDENTITY_REL_STEP: f64 = 1e-4;

/// `|v_F - (H rho + a d/dtau(rho / a))|` at fixed `chi0`, with the derivative
/// taken by central differences. The bracket reduces to `d rho / d tau`, so
/// this measures how well the three-integral speed matches the rate of change
/// of proper distance.
pub fn velocity_identity_residual(cosmo: &Cosmology, tau: f64, chi0: f64, cfg: &NumericsConfig) -> Result<f64> {
    let report = fermi_speed(cosmo, tau, chi0, cfg)?;
    if chi0 == 0.0 {
        return Ok(report.v_fermi.abs());
    }
    let h = IDENTITY_REL_STEP * tau;
    if tau + h > cosmo.model.t_max() {
        return Err(Error::domain(format!(
            "tau+h={} exceeds the model's time range",
            tau + h
        )));
    }
    let scaled = |t: f64| -> Result<f64> {
        let r = fermi_speed(cosmo, t, chi0, cfg)?;
        Ok(r.rho / cosmo.model.a(t))
    };
    let d_scaled = (scaled(tau + h)? - scaled(tau - h)?) / (2.0 * h);
    let rhs = hubble(cosmo, tau)? * report.rho + cosmo.model.a(tau) * d_scaled;
    Ok((report.v_fermi - rhs).abs())
}

/// Both sides of the power-law relation
/// `v_F = rho/tau + (alpha-1)/(2 alpha sigma0) ∫_1^sigma0 s^(-1/(2 alpha)) (s-1)^(-1/2) ds`,
/// with `rho` from the general arc-length quadrature.
pub fn power_law_geometry_relation(alpha: f64, tau: f64, sigma0: f64, cfg: &NumericsConfig) -> Result<(f64, f64)> {
    let lhs = fermi_speed_power_law(alpha, sigma0, cfg)?;
    let cosmo = Cosmology::power_law(alpha, Curvature::Flat)?;
    let rho = rho_of_sigma(&cosmo, tau, sigma0, cfg)?;
    let correction = if alpha == 1.0 {
        0.0
    } else {
        (alpha - 1.0) / (2.0 * alpha * sigma0) * power_integral(0.5 / alpha, sigma0, cfg)?
    };
    Ok((lhs, rho / tau + correction))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> NumericsConfig {
        NumericsConfig::default()
    }

    #[test]
    fn hubble_speed_examples() {
        assert_eq!(hubble_speed(&Cosmology::matter(), 1.0, 0.0).unwrap(), 0.0);
        assert_eq!(hubble_speed(&Cosmology::milne(), 4.0, 2.0).unwrap(), 2.0);
        let ds = Cosmology::de_sitter(0.5).unwrap();
        let v = hubble_speed(&ds, 2.0, 3.0).unwrap();
        assert!((v - 0.5 * 1f64.exp() * 3.0).abs() < 1e-14);
        assert!(hubble_speed(&ds, 2.0, -1.0).is_err());
    }

    #[test]
    fn fermi_speed_examples() {
        let r = fermi_speed(&Cosmology::radiation(), 1.0, 0.0, &cfg()).unwrap();
        assert_eq!((r.v_fermi, r.sigma0, r.rho), (0.0, 1.0, 0.0));

        let chi = (2.0 + 3f64.sqrt()).ln();
        let r = fermi_speed(&Cosmology::milne(), 1.5, chi, &cfg()).unwrap();
        assert!((r.sigma0 - 4.0).abs() < 1e-10);
        assert!((r.v_fermi - 3f64.sqrt() / 2.0).abs() < 1e-10);
        assert!((r.v_fermi - chi.tanh()).abs() < 1e-10);

        let ds = Cosmology::de_sitter(1.0).unwrap();
        let r = fermi_speed_at_sigma(&ds, 1.0, 2.0, &cfg()).unwrap();
        assert!((r.v_fermi - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unreachable_particle() {
        // radiation: chi is bounded by pi sqrt(tau) on the slice
        let err = fermi_speed(&Cosmology::radiation(), 1.0, 3.2, &cfg()).unwrap_err();
        assert!(matches!(err, Error::Domain(_)), "{err}");
        let ds = Cosmology::de_sitter(1.0).unwrap();
        assert!(fermi_speed(&ds, 1.0, 1.0, &cfg()).is_err());
    }

    #[test]
    fn power_law_speed_examples() {
        assert_eq!(fermi_speed_power_law(0.5, 1.0, &cfg()).unwrap(), 0.0);
        let v = fermi_speed_power_law(0.5, 4.0, &cfg()).unwrap();
        assert!((v - (3f64.sqrt() / 4.0 + PI / 4.0)).abs() < 1e-12);
        let v = fermi_speed_power_law(2.0 / 3.0, 1e6, &cfg()).unwrap();
        assert!((v - 1.31103).abs() < 1e-3);
        assert!(fermi_speed_power_law(1.5, 2.0, &cfg()).is_err());
    }

    #[test]
    fn sup_examples() {
        assert!((fermi_speed_sup(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((fermi_speed_sup(0.5).unwrap() - PI / 2.0).abs() < 1e-14);
        assert!((fermi_speed_sup(2.0 / 3.0).unwrap() - 1.311_028_777_146_06).abs() < 1e-12);
        assert!(fermi_speed_sup(0.0).is_err());
        // tiny alpha must not overflow
        let v = fermi_speed_sup(1e-3).unwrap();
        assert!(v.is_finite() && v < 1e3);
    }

    #[test]
    fn proper_radius_examples() {
        let milne = Cosmology::milne();
        assert!((proper_radius(&milne, 3.0, &cfg()).unwrap() - 3.0).abs() < 1e-10);
        let rad = Cosmology::radiation();
        assert!((proper_radius(&rad, 2.0, &cfg()).unwrap() - PI).abs() < 1e-10);
        let ds = Cosmology::de_sitter(1.0).unwrap();
        let r = proper_radius(&ds, 1.0, &cfg()).unwrap();
        let exact = crate::numerics::arcsec(1f64.exp());
        assert!((r - exact).abs() < 1e-6, "{r} vs {exact}");
        assert!(r < PI / 2.0);
    }

    #[test]
    fn proper_radius_power_law_examples() {
        assert!((proper_radius_power_law(1.0, 5.0).unwrap() - 5.0).abs() < 1e-13);
        assert!((proper_radius_power_law(0.5, 1.0).unwrap() - PI / 2.0).abs() < 1e-14);
        assert!((proper_radius_power_law(2.0 / 3.0, 1.0).unwrap() - 1.31103).abs() < 1e-5);
    }

    #[test]
    fn identity_residual_examples() {
        let c = cfg();
        assert_eq!(
            velocity_identity_residual(&Cosmology::matter(), 1.0, 0.0, &c).unwrap(),
            0.0
        );
        assert!(velocity_identity_residual(&Cosmology::milne(), 1.0, 1.0, &c).unwrap() < 1e-6);
        assert!(velocity_identity_residual(&Cosmology::matter(), 1.0, 1.0, &c).unwrap() < 1e-5);
    }

    #[test]
    fn geometry_relation_examples() {
        let (l, r) = power_law_geometry_relation(1.0, 2.0, 5.0, &cfg()).unwrap();
        assert!((l - r).abs() < 1e-12);
        let rho = rho_of_sigma(&Cosmology::milne(), 2.0, 5.0, &cfg()).unwrap();
        assert!((l - rho / 2.0).abs() < 1e-12);
        for (alpha, s0) in [(0.5, 4.0), (2.0 / 3.0, 100.0)] {
            let (l, r) = power_law_geometry_relation(alpha, 1.3, s0, &cfg()).unwrap();
            assert!((l - r).abs() < 1e-9, "{alpha}: {l} vs {r}");
        }
    }
}
