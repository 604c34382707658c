use fermi_core::{fermi_from_rw, proper_radius, rw_from_fermi, sigma_of_rho, FermiEvent, RWEvent};
use serde_json::json;

use crate::args::{Direction, TransformArgs};
use crate::error::CliError;
use crate::model::RunConfig;
use crate::table::{Cell, Column, Table};

const TO_RW: &[Column] = &[
    ("tau", "observer proper time (input)"),
    ("rho", "proper distance along the slice (input)"),
    ("theta", "polar angle, carried through"),
    ("phi", "azimuth, carried through"),
    ("t", "synchronous time"),
    ("chi", "comoving radial coordinate"),
    ("sigma", "geodesic parameter (a(tau)/a(t))^2"),
    ("rho_max", "proper radius of the slice at tau"),
    ("global_chart", "whether the Fermi chart covers the whole spacetime"),
];

const TO_FERMI: &[Column] = &[
    ("t", "synchronous time (input)"),
    ("chi", "comoving radial coordinate (input)"),
    ("theta", "polar angle, carried through"),
    ("phi", "azimuth, carried through"),
    ("tau", "observer proper time"),
    ("rho", "proper distance along the slice"),
    ("sigma", "geodesic parameter (a(tau)/a(t))^2"),
    ("rho_max", "proper radius of the slice at tau"),
    ("global_chart", "whether the Fermi chart covers the whole spacetime"),
];

pub fn run(run: &RunConfig, args: &TransformArgs) -> Result<Table, CliError> {
    let RunConfig { cosmo, cfg, header } = run;
    let model = json!(header);
    match args.direction {
        Direction::ToRw { tau, rho, theta, phi } => {
            let fe = FermiEvent::with_angles(tau, rho, theta, phi);
            let rw = rw_from_fermi(cosmo, &fe, cfg)?;
            let sigma = sigma_of_rho(cosmo, tau, rho, cfg)?;
            let rho_max = proper_radius(cosmo, tau, cfg)?;
            let mut t = Table::new("transform-to-rw", TO_RW, model);
            t.push(vec![
                tau.into(),
                rho.into(),
                theta.into(),
                phi.into(),
                rw.t.into(),
                rw.chi.into(),
                sigma.into(),
                rho_max.into(),
                Cell::Bool(cosmo.global_chart()),
            ]);
            Ok(t)
        }
        Direction::ToFermi { t, chi, theta, phi } => {
            let rw = RWEvent::with_angles(t, chi, theta, phi);
            let fe = fermi_from_rw(cosmo, &rw, cfg)?;
            let sigma = (cosmo.a(fe.tau) / cosmo.a(t)).powi(2);
            let rho_max = proper_radius(cosmo, fe.tau, cfg)?;
            let mut table = Table::new("transform-to-fermi", TO_FERMI, model);
            table.push(vec![
                t.into(),
                chi.into(),
                theta.into(),
                phi.into(),
                fe.tau.into(),
                fe.rho.into(),
                sigma.into(),
                rho_max.into(),
                Cell::Bool(cosmo.global_chart()),
            ]);
            Ok(table)
        }
    }
}
