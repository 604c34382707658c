//! Fermi coordinates for comoving observers in expanding Robertson-Walker
//! spacetimes with `k = 0` or `k = -1`.
//!
//! The orthogonal spacelike geodesics are parameterised by
//! `sigma = (a(tau)/a(t))^2`, which turns every map into a quadrature with a
//! known `(sigma - 1)^(-1/2)` endpoint singularity. On top of those maps the
//! crate builds the chart transforms, the metric in Fermi coordinates, the
//! proper radius of the simultaneity slices and Fermi relative velocities.

// `!(x > 0.0)` is used on purpose throughout: it rejects NaN along with the
// out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chart;
pub mod closed_forms;
pub mod cosmology;
pub mod error;
pub mod geodesics;
pub mod kinematics;
pub mod metric;
pub mod numerics;

pub use chart::{
    comoving_flow_fermi, comoving_flow_fermi_with_step, fermi_from_rw, jacobian_f, rw_from_fermi, sigma_of_rho,
    FermiEvent, RWEvent,
};
pub use closed_forms::ClosedFormModel;
pub use cosmology::{
    hubble, make_exponential, make_power_law, make_tabulated, sigma_infinity, Cosmology, Curvature, ScaleFactor,
    ScaleFactorModel,
};
pub use error::{Error, Result};
pub use geodesics::{chi_of_sigma, integrate_geodesic_ode, rho_of_sigma, sample_geodesic, t_of_sigma, GeodesicPoint};
pub use kinematics::{
    fermi_speed, fermi_speed_at_sigma, fermi_speed_power_law, fermi_speed_sup, hubble_speed,
    power_law_geometry_relation, proper_radius, proper_radius_power_law, velocity_identity_residual, VelocityReport,
};
pub use metric::{g_tau_tau, lambda_k, metric_cartesian, metric_polar, metric_polar_at_sigma, s_k, PolarMetric};
pub use numerics::NumericsConfig;
