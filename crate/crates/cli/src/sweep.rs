use fermi_core::{
    chi_of_sigma, fermi_speed, hubble, lambda_k, metric_polar, proper_radius, rho_of_sigma, sigma_of_rho, t_of_sigma,
};
use rayon::prelude::*;
use serde_json::json;

use crate::args::{Quantity, Spacing, SweepArgs};
use crate::error::{usage, CliError};
use crate::model::RunConfig;
use crate::table::{Cell, Column, Table};

const GEODESIC: &[Column] = &[
    ("sigma", "geodesic parameter (a(tau)/a(t))^2 (swept)"),
    ("t", "synchronous time"),
    ("chi", "comoving radial coordinate"),
    ("rho", "proper arc length from the observer"),
    ("error", "why the row could not be computed, empty on success"),
];

const METRIC: &[Column] = &[
    ("rho", "proper distance along the slice (swept)"),
    ("sigma", "geodesic parameter at rho"),
    ("g_tau_tau", "dtau^2 coefficient"),
    ("g_rho_rho", "drho^2 coefficient, identically 1"),
    ("ang", "dOmega^2 coefficient"),
    ("lambda", "(ang - rho^2)/rho^4, the Cartesian-metric function"),
    ("error", "why the row could not be computed, empty on success"),
];

const VELOCITY: &[Column] = &[
    ("chi0", "comoving coordinate of the particle (swept)"),
    ("sigma0", "geodesic parameter where the particle crosses the slice"),
    ("rho", "proper distance to the particle"),
    ("v_fermi", "Fermi relative speed"),
    ("v_hubble", "Hubble-law speed a'(tau) chi0"),
    ("error", "why the row could not be computed, empty on success"),
];

const RADIUS: &[Column] = &[
    ("tau", "observer proper time (swept)"),
    ("rho_max", "proper radius of the simultaneity slice"),
    ("hubble_radius", "1/H(tau)"),
    ("error", "why the row could not be computed, empty on success"),
];

pub fn grid(from: f64, to: f64, n: usize, spacing: Spacing) -> Result<Vec<f64>, CliError> {
    if n < 2 {
        return Err(usage(format!("--samples must be at least 2, got {n}")));
    }
    if !from.is_finite() || !to.is_finite() {
        return Err(usage("--from and --to must be finite"));
    }
    let last = (n - 1) as f64;
    let mut xs: Vec<f64> = match spacing {
        Spacing::Linear => (0..n).map(|i| from + (to - from) * (i as f64 / last)).collect(),
        Spacing::Log => {
            if !(from > 0.0 && to > 0.0) {
                return Err(usage("--spacing log needs positive --from and --to"));
            }
            let r = (to / from).ln();
            (0..n).map(|i| from * (r * i as f64 / last).exp()).collect()
        }
    };
    // pin the end points exactly so that boundary rows are reproducible
    xs[0] = from;
    xs[n - 1] = to;
    Ok(xs)
}

pub fn run(run: &RunConfig, args: &SweepArgs) -> Result<Table, CliError> {
    let xs = grid(args.from, args.to, args.samples, args.spacing)?;
    let tau = match (args.quantity, args.tau) {
        (Quantity::Radius, None) => 0.0,
        (Quantity::Radius, Some(_)) => return Err(usage("radius sweeps vary tau; drop --tau")),
        (_, Some(tau)) => tau,
        (_, None) => return Err(usage("--tau is required for this sweep")),
    };
    let RunConfig { cosmo, cfg, header } = run;
    let (name, columns): (&str, &[Column]) = match args.quantity {
        Quantity::Geodesic => ("sweep-geodesic", GEODESIC),
        Quantity::Metric => ("sweep-metric", METRIC),
        Quantity::Velocity => ("sweep-velocity", VELOCITY),
        Quantity::Radius => ("sweep-radius", RADIUS),
    };
    let row = |x: f64| -> fermi_core::Result<Vec<f64>> {
        match args.quantity {
            Quantity::Geodesic => Ok(vec![
                t_of_sigma(cosmo, tau, x)?,
                chi_of_sigma(cosmo, tau, x, cfg)?,
                rho_of_sigma(cosmo, tau, x, cfg)?,
            ]),
            Quantity::Metric => {
                let m = metric_polar(cosmo, tau, x, cfg)?;
                Ok(vec![
                    sigma_of_rho(cosmo, tau, x, cfg)?,
                    m.g_tau_tau,
                    m.g_rho_rho,
                    m.ang,
                    lambda_k(cosmo, tau, x, cfg)?,
                ])
            }
            Quantity::Velocity => {
                let v = fermi_speed(cosmo, tau, x, cfg)?;
                Ok(vec![v.sigma0, v.rho, v.v_fermi, v.v_hubble])
            }
            Quantity::Radius => Ok(vec![proper_radius(cosmo, x, cfg)?, 1.0 / hubble(cosmo, x)?]),
        }
    };
    // rows are independent; collect() keeps them in index order
    let values: Vec<_> = xs.par_iter().map(|&x| row(x)).collect();
    let mut table = Table::new(name, columns, json!(header));
    let width = columns.len() - 2;
    for (x, v) in xs.iter().zip(values) {
        let mut cells = vec![Cell::Num(*x)];
        match v {
            Ok(vals) => {
                cells.extend(vals.into_iter().map(Cell::Num));
                cells.push(Cell::Empty);
            }
            Err(e) => {
                cells.extend(std::iter::repeat_n(Cell::Empty, width));
                cells.push(Cell::Text(e.to_string()));
            }
        }
        table.push(cells);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_hit_their_end_points() {
        let g = grid(1.0, 100.0, 7, Spacing::Log).unwrap();
        assert_eq!((g[0], g[6]), (1.0, 100.0));
        assert!((g[3] - 10.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let g = grid(0.0, 1.0, 5, Spacing::Linear).unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn grids_reject_bad_ranges() {
        assert!(grid(0.0, 1.0, 1, Spacing::Linear).is_err());
        assert!(grid(0.0, 1.0, 5, Spacing::Log).is_err());
        assert!(grid(f64::NAN, 1.0, 5, Spacing::Linear).is_err());
    }
}
