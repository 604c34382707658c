//! Spacelike geodesics orthogonal to the comoving observer's world line.
//!
//! At the foot point `tau` the geodesic is parameterised by
//! `sigma = (a(tau)/a(t))^2`, running from 1 at the observer to
//! `sigma_infinity(tau)` at the big bang (or the chart edge):
//!
//! ```text
//! t(tau, sigma)   = b(a(tau) / sqrt(sigma))
//! chi(tau, sigma) = 1/2      ∫_1^sigma b'(a(tau)/sqrt(s)) s^(-1/2) (s-1)^(-1/2) ds
//! rho(tau, sigma) = a(tau)/2 ∫_1^sigma b'(a(tau)/sqrt(s)) s^(-3/2) (s-1)^(-1/2) ds
//! ```
//!
//! [`integrate_geodesic_ode`] integrates the geodesic equations directly and
//! serves as an independent check on these quadratures.

use serde::Serialize;

use crate::cosmology::{sigma_infinity, Cosmology, ScaleFactor};
use crate::error::{Error, Result};
use crate::kinematics::proper_radius;
use crate::numerics::{integrate_sigma, try_find_root_monotone, NumericsConfig};

/// One event on an orthogonal geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicPoint {
    /// Proper time of the Fermi observer at the foot point.
    pub tau: f64,
    pub sigma: f64,
    /// Synchronous (Robertson-Walker) time.
    pub t: f64,
    pub chi: f64,
    /// Proper arc length from the observer.
    pub rho: f64,
}

pub(crate) fn check_sigma(cosmo: &Cosmology, tau: f64, sigma: f64) -> Result<f64> {
    let s_inf = sigma_infinity(cosmo, tau)?;
    if !(sigma >= 1.0) || !(sigma < s_inf) {
        return Err(Error::domain(format!(
            "sigma={sigma} outside [1, sigma_inf) with sigma_inf(tau={tau})={s_inf}"
        )));
    }
    Ok(s_inf)
}

/// `∫_1^sigma b'(a(tau)/sqrt(s)) s^(-power) (s-1)^(-1/2) ds`
pub(crate) fn b_dot_integral(cosmo: &Cosmology, tau: f64, sigma: f64, power: f64, cfg: &NumericsConfig) -> Result<f64> {
    let a0 = cosmo.model.a(tau);
    integrate_sigma(|s| cosmo.model.b_dot(a0 / s.sqrt()) * s.powf(-power), 1.0, sigma, cfg)
}

/// `∫_1^sigma b''(a(tau)/sqrt(s)) s^(-power) (s-1)^(-1/2) ds`
pub(crate) fn b_ddot_integral(
    cosmo: &Cosmology,
    tau: f64,
    sigma: f64,
    power: f64,
    cfg: &NumericsConfig,
) -> Result<f64> {
    let a0 = cosmo.model.a(tau);
    integrate_sigma(|s| cosmo.model.b_ddot(a0 / s.sqrt()) * s.powf(-power), 1.0, sigma, cfg)
}

/// Synchronous time along the geodesic; strictly decreasing in `sigma`.
pub fn t_of_sigma(cosmo: &Cosmology, tau: f64, sigma: f64) -> Result<f64> {
    check_sigma(cosmo, tau, sigma)?;
    if sigma == 1.0 {
        return Ok(tau);
    }
    Ok(cosmo.model.b(cosmo.model.a(tau) / sigma.sqrt()))
}

/// Radial comoving coordinate along the geodesic.
pub fn chi_of_sigma(cosmo: &Cosmology, tau: f64, sigma: f64, cfg: &NumericsConfig) -> Result<f64> {
    check_sigma(cosmo, tau, sigma)?;
    Ok(0.5 * b_dot_integral(cosmo, tau, sigma, 0.5, cfg)?)
}

/// Proper arc length from the observer along the geodesic.
pub fn rho_of_sigma(cosmo: &Cosmology, tau: f64, sigma: f64, cfg: &NumericsConfig) -> Result<f64> {
    check_sigma(cosmo, tau, sigma)?;
    Ok(0.5 * cosmo.model.a(tau) * b_dot_integral(cosmo, tau, sigma, 1.5, cfg)?)
}

pub(crate) fn point_at_sigma(cosmo: &Cosmology, tau: f64, sigma: f64, cfg: &NumericsConfig) -> Result<GeodesicPoint> {
    Ok(GeodesicPoint {
        tau,
        sigma,
        t: t_of_sigma(cosmo, tau, sigma)?,
        chi: chi_of_sigma(cosmo, tau, sigma, cfg)?,
        rho: rho_of_sigma(cosmo, tau, sigma, cfg)?,
    })
}

/// Tabulates the geodesic at `n` geometrically spaced values of `sigma`
/// from 1 to `sigma_max`.
pub fn sample_geodesic(
    cosmo: &Cosmology,
    tau: f64,
    sigma_max: f64,
    n: usize,
    cfg: &NumericsConfig,
) -> Result<Vec<GeodesicPoint>> {
    if n < 2 {
        return Err(Error::domain(format!("need at least 2 samples, got {n}")));
    }
    check_sigma(cosmo, tau, sigma_max)?;
    if !(sigma_max > 1.0) {
        return Err(Error::domain(format!("sigma_max must exceed 1, got {sigma_max}")));
    }
    (0..n)
        .map(|i| {
            let sigma = if i == n - 1 {
                sigma_max
            } else {
                sigma_max.powf(i as f64 / (n - 1) as f64)
            };
            point_at_sigma(cosmo, tau, sigma, cfg)
        })
        .collect()
}

/// Largest `u = sqrt(sigma - 1)` tried when growing a bracket on an unbounded
/// slice, i.e. sigma of about 1.2e24.
const U_CAP: f64 = 1.099_511_627_776e12;

/// Solves `f(sigma) = target` for a map `f` strictly increasing from
/// `f(1) = 0`, searching in `u = sqrt(sigma - 1)` over a bracket that doubles
/// from `[0, 1]`. Returns `None` when `target` is not reached before
/// `sigma_infinity(tau)` (or the internal cap on unbounded slices).
pub(crate) fn invert_sigma_map<F>(
    cosmo: &Cosmology,
    tau: f64,
    target: f64,
    f: F,
    cfg: &NumericsConfig,
) -> Result<Option<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    if target == 0.0 {
        return Ok(Some(1.0));
    }
    let s_inf = sigma_infinity(cosmo, tau)?;
    let u_cap = if s_inf.is_finite() {
        ((s_inf - 1.0) * (1.0 - 1e-12)).sqrt()
    } else {
        U_CAP
    };
    let mut lo = 0.0;
    let mut hi = u_cap.min(1.0);
    loop {
        if f(1.0 + hi * hi)? >= target {
            break;
        }
        if hi >= u_cap {
            return Ok(None);
        }
        lo = hi;
        hi = (2.0 * hi).min(u_cap);
    }
    let u = try_find_root_monotone(|u| Ok(f(1.0 + u * u)? - target), lo, hi, cfg)?;
    Ok(Some(1.0 + u * u))
}

const RADICAND_CLAMP: f64 = 1e-13;

/// Integrates the geodesic equations from the observer outwards in arc length
/// with fixed-step classical RK4.
///
/// The state is `(t, u, chi)` with `u = sqrt((a0/a(t))^2 - 1) = -dt/drho`:
///
/// ```text
/// dt/drho   = -u
/// du/drho   = a0^2 a'(t) / a(t)^3
/// dchi/drho = a0 / a(t)^2
/// ```
///
/// which is the unit-speed orthogonal geodesic with `a(t)^2 dchi/drho = a0`.
/// Carrying `u` instead of taking the square root keeps the right-hand side
/// smooth at the observer, where the radicand vanishes. Returns one point per
/// step; `sigma` is reported as `1 + u^2`.
pub fn integrate_geodesic_ode(cosmo: &Cosmology, tau: f64, rho_max: f64, step: f64) -> Result<Vec<GeodesicPoint>> {
    cosmo.check_tau(tau)?;
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::domain(format!("step must be positive, got {step}")));
    }
    if !(rho_max >= 0.0) {
        return Err(Error::domain(format!("rho_max must be non-negative, got {rho_max}")));
    }
    let rho_slice = proper_radius(cosmo, tau, &NumericsConfig::default())?;
    if rho_max >= rho_slice {
        return Err(Error::OutOfSlice {
            tau,
            rho: rho_max,
            rho_max: rho_slice,
        });
    }

    let m = &cosmo.model;
    let a0 = m.a(tau);
    let rhs = |state: [f64; 3]| -> Result<[f64; 3]> {
        let [t, u, _] = state;
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::domain(format!(
                "geodesic left the model domain (t={t}) at tau={tau}"
            )));
        }
        let a = m.a(t);
        Ok([-u, a0 * a0 * m.a_dot(t) / (a * a * a), a0 / (a * a)])
    };
    let axpy = |s: [f64; 3], k: [f64; 3], h: f64| [s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2]];

    let mut state = [tau, 0.0, 0.0];
    let mut rho = 0.0;
    let mut points = vec![GeodesicPoint {
        tau,
        sigma: 1.0,
        t: tau,
        chi: 0.0,
        rho: 0.0,
    }];
    let n_steps = (rho_max / step).ceil() as usize;
    for i in 0..n_steps {
        let h = if i + 1 == n_steps { rho_max - rho } else { step };
        if h <= 0.0 {
            break;
        }
        let k1 = rhs(state)?;
        let k2 = rhs(axpy(state, k1, 0.5 * h))?;
        let k3 = rhs(axpy(state, k2, 0.5 * h))?;
        let k4 = rhs(axpy(state, k3, h))?;
        for j in 0..3 {
            state[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        rho = if i + 1 == n_steps { rho_max } else { rho + h };

        let [t, u, chi] = state;
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::domain(format!(
                "geodesic left the model domain (t={t}) at rho={rho}"
            )));
        }
        let ratio = a0 / m.a(t);
        let radicand = ratio * ratio - 1.0;
        if radicand < -RADICAND_CLAMP {
            return Err(Error::Consistency(format!("negative radicand {radicand} at rho={rho}")));
        }
        points.push(GeodesicPoint {
            tau,
            sigma: 1.0 + u * u,
            t,
            chi,
            rho,
        });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> NumericsConfig {
        NumericsConfig::default()
    }

    #[test]
    fn foot_point() {
        for c in [
            Cosmology::milne(),
            Cosmology::matter(),
            Cosmology::de_sitter(1.0).unwrap(),
        ] {
            assert_eq!(t_of_sigma(&c, 1.7, 1.0).unwrap(), 1.7);
            assert_eq!(chi_of_sigma(&c, 1.7, 1.0, &cfg()).unwrap(), 0.0);
            assert_eq!(rho_of_sigma(&c, 1.7, 1.0, &cfg()).unwrap(), 0.0);
        }
    }

    #[test]
    fn milne_values() {
        let c = Cosmology::milne();
        assert!((t_of_sigma(&c, 2.0, 4.0).unwrap() - 1.0).abs() < 1e-15);
        let chi = chi_of_sigma(&c, 3.3, 4.0, &cfg()).unwrap();
        assert!((chi - (2.0 + 3f64.sqrt()).ln()).abs() < 1e-12);
        let rho = rho_of_sigma(&c, 2.0, 4.0, &cfg()).unwrap();
        assert!((rho - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn radiation_values() {
        let c = Cosmology::radiation();
        assert!((t_of_sigma(&c, 3.0, 9.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let chi = chi_of_sigma(&c, 1.0, 4.0, &cfg()).unwrap();
        assert!((chi - 2.0 * PI / 3.0).abs() < 1e-12);
        let rho = rho_of_sigma(&c, 1.0, 2.0, &cfg()).unwrap();
        assert!((rho - (0.5 + PI / 4.0)).abs() < 1e-12);
    }

    #[test]
    fn sigma_out_of_range() {
        let ds = Cosmology::de_sitter(1.0).unwrap();
        let err = t_of_sigma(&ds, 1.0, 8.0).unwrap_err();
        assert!(err.to_string().contains("sigma_inf"), "{err}");
        assert!(t_of_sigma(&Cosmology::milne(), 1.0, 0.5).is_err());
        assert!(chi_of_sigma(&Cosmology::milne(), -1.0, 2.0, &cfg()).is_err());
    }

    #[test]
    fn sample_endpoints_and_monotonicity() {
        let c = Cosmology::matter();
        let pts = sample_geodesic(&c, 1.0, 7.5, 2, &cfg()).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].sigma, 1.0);
        assert_eq!(pts[1].sigma, 7.5);
        assert_eq!(pts[0].rho, 0.0);

        let pts = sample_geodesic(&c, 1.0, 10.0, 5, &cfg()).unwrap();
        for w in pts.windows(2) {
            assert!(w[1].t < w[0].t);
            assert!(w[1].chi > w[0].chi);
            assert!(w[1].rho > w[0].rho);
        }
        for p in &pts {
            assert!((p.t - p.sigma.powf(-0.75)).abs() < 1e-14);
        }

        let milne = sample_geodesic(&Cosmology::milne(), 1.0, 100.0, 5, &cfg()).unwrap();
        assert!((milne[4].rho - 0.99f64.sqrt()).abs() < 1e-12);
        assert!(sample_geodesic(&c, 1.0, 10.0, 1, &cfg()).is_err());
    }

    #[test]
    fn ode_start_and_milne() {
        let c = Cosmology::milne();
        let pts = integrate_geodesic_ode(&c, 1.0, 0.0, 1e-3).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!((pts[0].t, pts[0].chi), (1.0, 0.0));

        let pts = integrate_geodesic_ode(&c, 1.0, 0.9, 1e-3).unwrap();
        let last = pts.last().unwrap();
        assert_eq!(last.rho, 0.9);
        assert!((last.t - 0.19f64.sqrt()).abs() < 1e-6, "{}", last.t);
        assert!((last.chi - 0.9f64.atanh()).abs() < 1e-6);
    }

    #[test]
    fn ode_rejects_beyond_slice() {
        let c = Cosmology::milne();
        assert!(matches!(
            integrate_geodesic_ode(&c, 1.0, 1.0, 1e-3),
            Err(Error::OutOfSlice { .. })
        ));
        assert!(integrate_geodesic_ode(&c, 1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn ode_unit_speed_by_finite_differences() {
        let c = Cosmology::radiation();
        let h = 1e-3;
        let pts = integrate_geodesic_ode(&c, 1.0, 1.2, h).unwrap();
        let a0 = c.a(1.0);
        for w in pts.windows(3).step_by(50) {
            let dt = (w[2].t - w[0].t) / (2.0 * h);
            let r = a0 / c.a(w[1].t);
            assert!((dt * dt - (r * r - 1.0)).abs() < 1e-5, "{} vs {}", dt * dt, r * r - 1.0);
        }
    }
}
