//! Verification suites: closed forms of the exactly solvable models, the
//! geodesic ODE as an independent oracle, and structural identities.

use std::f64::consts::{FRAC_PI_2, PI};

use fermi_core::closed_forms::ClosedFormModel;
use fermi_core::numerics::hyp2f1;
use fermi_core::{
    chi_of_sigma, fermi_from_rw, fermi_speed, fermi_speed_at_sigma, fermi_speed_sup, g_tau_tau, hubble,
    integrate_geodesic_ode, jacobian_f, metric_cartesian, metric_polar, power_law_geometry_relation, proper_radius,
    proper_radius_power_law, rho_of_sigma, rw_from_fermi, sigma_infinity, sigma_of_rho, t_of_sigma,
    velocity_identity_residual, Cosmology, Curvature, FermiEvent, NumericsConfig, ScaleFactor,
};
use serde_json::json;

use crate::args::{Suite, VerifyArgs};
use crate::error::CliError;
use crate::model::RunConfig;
use crate::table::{Cell, Column, Table};

const COLUMNS: &[Column] = &[
    ("suite", "suite the check belongs to"),
    ("check", "check name"),
    ("model", "cosmology the check ran on"),
    ("status", "PASS or FAIL"),
    ("max_residual", "largest residual over the sampled cases"),
    ("tolerance", "pass threshold for max_residual"),
    ("cases", "number of sampled cases"),
    (
        "worst_at",
        "where the largest residual occurred, or the error that stopped the check",
    ),
];

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub model: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub cases: u64,
    pub worst_at: String,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

#[derive(Debug, Default)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn into_table(self, run: Option<&RunConfig>, cfg: NumericsConfig) -> Table {
        let model = match run {
            Some(r) => json!(r.header),
            None => json!({ "family": "built-in set", "numerics": cfg }),
        };
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        eprintln!(
            "verify: {} checks, {} passed, {failed} failed",
            self.checks.len(),
            self.checks.len() - failed
        );
        let mut t = Table::new("verify", COLUMNS, model);
        for c in self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            t.push(vec![
                c.suite.into(),
                c.name.into(),
                c.model.into(),
                status.into(),
                Cell::Num(c.max_residual),
                Cell::Num(c.tolerance),
                Cell::Int(c.cases),
                c.worst_at.into(),
            ]);
        }
        t
    }
}

/// Running maximum of a residual. An error from the computation counts as an
/// infinite residual so that the check fails and the message is kept.
struct Tracker {
    suite: &'static str,
    name: &'static str,
    model: String,
    tol: f64,
    worst: f64,
    at: String,
    cases: u64,
}

impl Tracker {
    fn new(suite: &'static str, name: &'static str, model: impl Into<String>, tol: f64) -> Self {
        Tracker {
            suite,
            name,
            model: model.into(),
            tol,
            worst: 0.0,
            at: String::new(),
            cases: 0,
        }
    }

    fn record(&mut self, residual: fermi_core::Result<f64>, at: impl FnOnce() -> String) {
        self.cases += 1;
        match residual {
            Ok(r) if r <= self.worst => {}
            Ok(r) => {
                // NaN lands here too and fails the check
                self.worst = if r.is_nan() { f64::INFINITY } else { r };
                self.at = at();
            }
            Err(e) => {
                if self.worst.is_finite() {
                    self.at = format!("{}: {e}", at());
                }
                self.worst = f64::INFINITY;
            }
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            suite: self.suite,
            name: self.name,
            model: self.model,
            max_residual: self.worst,
            tolerance: self.tol,
            cases: self.cases,
            worst_at: self.at,
        }
    }
}

fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn label(cosmo: &Cosmology) -> String {
    if cosmo.name == "power-law" {
        cosmo.model.describe()
    } else {
        cosmo.name.clone()
    }
}

pub fn run(run: Option<&RunConfig>, cfg: NumericsConfig, args: &VerifyArgs) -> Result<Report, CliError> {
    let models: Vec<Cosmology> = match run {
        Some(r) => vec![r.cosmo.clone()],
        None => vec![
            Cosmology::milne(),
            Cosmology::radiation(),
            Cosmology::matter(),
            Cosmology::power_law(1.0 / 3.0, Curvature::Flat)?,
            Cosmology::de_sitter(1.0)?,
        ],
    };
    let mut report = Report::default();
    if matches!(args.suite, Suite::ClosedForms | Suite::All) {
        report.checks.extend(closed_forms(&cfg));
    }
    if matches!(args.suite, Suite::OdeOracle | Suite::All) {
        report.checks.extend(models.iter().map(|m| ode_oracle(m, &cfg)));
    }
    if matches!(args.suite, Suite::Invariants | Suite::All) {
        for m in &models {
            report.checks.extend(invariants(m, &cfg));
        }
    }
    Ok(report)
}

fn closed_forms(c: &NumericsConfig) -> Vec<CheckResult> {
    const S: &str = "closed-forms";
    let mut out = Vec::new();
    let taus = linspace(0.5, 5.0, 8);
    let sigmas = geomspace(1.01, 100.0, 10);

    let milne = Cosmology::milne();
    let cf = ClosedFormModel::milne();
    let mut maps = Tracker::new(S, "milne-geodesic-maps", "milne", 1e-9);
    let mut metric = Tracker::new(S, "milne-polar-metric", "milne", 1e-9);
    let mut radius = Tracker::new(S, "milne-radius", "milne", 1e-8);
    for &tau in &taus {
        for &s in &sigmas {
            let r = (|| {
                Ok((t_of_sigma(&milne, tau, s)? - cf.t(tau, s)?)
                    .abs()
                    .max((chi_of_sigma(&milne, tau, s, c)? - cf.chi(tau, s)?).abs())
                    .max((rho_of_sigma(&milne, tau, s, c)? - cf.rho(tau, s)?).abs()))
            })();
            maps.record(r, || format!("tau={tau} sigma={s}"));
            let rho = tau * ((s - 1.0) / s).sqrt();
            let r = metric_polar(&milne, tau, rho, c).map(|g| {
                (g.g_tau_tau + 1.0)
                    .abs()
                    .max((g.g_rho_rho - 1.0).abs())
                    .max((g.ang - rho * rho).abs())
            });
            metric.record(r, || format!("tau={tau} rho={rho}"));
        }
        radius.record(proper_radius(&milne, tau, c).map(|r| (r - tau).abs()), || {
            format!("tau={tau}")
        });
    }
    out.extend([maps.finish(), metric.finish(), radius.finish()]);

    let mut gtt = Tracker::new(S, "de-sitter-g-tau-tau", "de-sitter", 1e-8);
    for h0 in [0.5, 1.0, 2.0] {
        let ds = Cosmology::de_sitter(h0).expect("positive h0");
        let tau = 5.0 / h0;
        for f in linspace(0.0, 0.95, 20) {
            let rho = f * FRAC_PI_2 / h0;
            let r = g_tau_tau(&ds, tau, rho, c).map(|g| (g + (h0 * rho).cos().powi(2)).abs());
            gtt.record(r, || format!("H0={h0} rho={rho}"));
        }
    }
    out.push(gtt.finish());

    // the speed peaks at exactly 1/2, at sigma0 = 2
    let ds = Cosmology::de_sitter(1.0).expect("positive h0");
    let mut cap = Tracker::new(S, "de-sitter-speed-cap", "de-sitter(h0=1)", 1e-9);
    let speeds: fermi_core::Result<Vec<(f64, f64)>> = linspace(1.0, 5.0, 41)
        .into_iter()
        .map(|s| fermi_speed_at_sigma(&ds, 2.0, s, c).map(|v| (s, v.v_fermi)))
        .collect();
    let peak = speeds.map(|v| {
        v.into_iter()
            .fold((0.0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a })
    });
    let at = peak.as_ref().map(|p| p.0).unwrap_or(f64::NAN);
    cap.record(
        peak.map(|(s, v)| (v - 0.5).abs() + if s == 2.0 { 0.0 } else { 1.0 }),
        || format!("argmax sigma0={at}"),
    );
    out.push(cap.finish());

    let rad = Cosmology::radiation();
    let cf = ClosedFormModel::radiation();
    let mut radius = Tracker::new(S, "radiation-radius", "radiation", 1e-9);
    for tau in [1.0, 2.0, 5.0] {
        radius.record(proper_radius(&rad, tau, c).map(|r| (r - 0.5 * PI * tau).abs()), || {
            format!("tau={tau}")
        });
    }
    let mut speed = Tracker::new(S, "radiation-speed", "radiation", 1e-9);
    for tau in [0.5, 3.0] {
        for s in geomspace(1.0, 1e4, 30) {
            let r = (|| Ok((fermi_speed_at_sigma(&rad, tau, s, c)?.v_fermi - cf.v_f(s)?).abs()))();
            speed.record(r, || format!("tau={tau} sigma0={s}"));
        }
    }
    let mut limit = Tracker::new(S, "radiation-speed-limit", "radiation", 1e-5);
    limit.record(
        fermi_speed_at_sigma(&rad, 1.0, 1e6, c).map(|v| (v.v_fermi - FRAC_PI_2).abs()),
        || "sigma0=1e6".into(),
    );
    out.extend([radius.finish(), speed.finish(), limit.finish()]);

    let mat = Cosmology::matter();
    let cf = ClosedFormModel::matter();
    let mut chi = Tracker::new(S, "matter-chi", "matter", 1e-8);
    let mut rho = Tracker::new(S, "matter-rho", "matter", 1e-8);
    let mut gtt = Tracker::new(S, "matter-g-tau-tau", "matter", 1e-8);
    let mut speed = Tracker::new(S, "matter-speed", "matter", 1e-9);
    for &tau in &taus {
        for s in geomspace(1.01, 1e4, 10) {
            let at = || format!("tau={tau} sigma={s}");
            chi.record((|| Ok((chi_of_sigma(&mat, tau, s, c)? - cf.chi(tau, s)?).abs()))(), at);
            let r = rho_of_sigma(&mat, tau, s, c);
            let diff = r.clone().and_then(|r| Ok((r - cf.rho(tau, s)?).abs()));
            rho.record(diff, at);
            let g = r.and_then(|r| Ok((g_tau_tau(&mat, tau, r, c)? - cf.g_tau_tau(tau, r)?).abs()));
            gtt.record(g, at);
            speed.record(
                (|| Ok((fermi_speed_at_sigma(&mat, tau, s, c)?.v_fermi - cf.v_f(s)?).abs()))(),
                at,
            );
        }
    }
    let mut sup = Tracker::new(S, "matter-speed-supremum", "matter", 1e-5);
    sup.record(fermi_speed_sup(2.0 / 3.0).map(|v| (v - 1.31103).abs()), || {
        "alpha=2/3".into()
    });
    out.extend([chi.finish(), rho.finish(), gtt.finish(), speed.finish(), sup.finish()]);

    // quadrature radius against the Gamma-function law
    let mut law = Tracker::new(S, "power-law-radius", "power-law family", 1e-7);
    for alpha in [1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0] {
        let Ok(cosmo) = Cosmology::power_law(alpha, Curvature::Flat) else {
            continue;
        };
        for tau in [0.5, 2.0] {
            let r = (|| Ok((proper_radius(&cosmo, tau, c)? - proper_radius_power_law(alpha, tau)?).abs() / tau))();
            law.record(r, || format!("alpha={alpha} tau={tau}"));
        }
    }
    out.push(law.finish());

    // elementary reductions, including arguments close to z = 1
    let mut hyp = Tracker::new(S, "hypergeometric-elementary", "-", 1e-12);
    for z in [0.1, 0.5, 0.9, 0.99, 0.999] {
        let r = hyp2f1(1.0, 1.0, 2.0, z).map(|v| (v - (-(1.0 - z).ln() / z)).abs() / v.abs());
        hyp.record(r, || format!("2F1(1,1;2;{z})"));
        let x: f64 = z.sqrt();
        let r = hyp2f1(0.5, 0.5, 1.5, z).map(|v| (v - x.asin() / x).abs() / v.abs());
        hyp.record(r, || format!("2F1(1/2,1/2;3/2;{z})"));
    }
    out.push(hyp.finish());
    out
}

/// A representative observer time inside the model's time domain.
fn reference_tau(cosmo: &Cosmology) -> f64 {
    let t_max = cosmo.model.t_max();
    if t_max.is_finite() {
        0.25 * t_max
    } else {
        1.0
    }
}

fn ode_oracle(cosmo: &Cosmology, c: &NumericsConfig) -> CheckResult {
    let mut tr = Tracker::new("ode-oracle", "ode-vs-quadrature", label(cosmo), 1e-6);
    let tau = reference_tau(cosmo);
    // local charts end before the slice does; stay clear of the edge
    let frac = if cosmo.global_chart() { 0.99 } else { 0.95 };
    let points = proper_radius(cosmo, tau, c).and_then(|r| {
        let target = frac * r;
        integrate_geodesic_ode(cosmo, tau, target, 1e-4 * target.max(tau))
    });
    let points = match points {
        Ok(p) => p,
        Err(e) => {
            tr.record(Err(e), || format!("tau={tau}"));
            return tr.finish();
        }
    };
    let stride = (points.len() / 50).max(1);
    for p in points.iter().skip(1).step_by(stride).chain(points.last()) {
        let r = (|| {
            let s = sigma_of_rho(cosmo, tau, p.rho, c)?;
            Ok((t_of_sigma(cosmo, tau, s)? - p.t)
                .abs()
                .max((chi_of_sigma(cosmo, tau, s, c)? - p.chi).abs()))
        })();
        tr.record(r, || format!("tau={tau} rho={}", p.rho));
    }
    tr.finish()
}

fn invariants(cosmo: &Cosmology, c: &NumericsConfig) -> Vec<CheckResult> {
    const S: &str = "invariants";
    let name = label(cosmo);
    let tau0 = reference_tau(cosmo);
    let taus = [0.5 * tau0, tau0, 2.0 * tau0];
    let mut out = Vec::new();

    let mut trip = Tracker::new(S, "chart-round-trip", name.clone(), 1e-7);
    let mut diag = Tracker::new(S, "metric-diagonal", name.clone(), 1e-6);
    for &tau in &taus {
        let rho_m = match proper_radius(cosmo, tau, c) {
            Ok(r) => r,
            Err(e) => {
                trip.record(Err(e), || format!("tau={tau}"));
                continue;
            }
        };
        for f in linspace(0.05, 0.9, 8) {
            let rho = f * rho_m;
            let r = (|| {
                let ev = FermiEvent::new(tau, rho);
                let back = fermi_from_rw(cosmo, &rw_from_fermi(cosmo, &ev, c)?, c)?;
                Ok(((back.tau - tau) / tau).abs().max(((back.rho - rho) / rho).abs()))
            })();
            trip.record(r, || format!("tau={tau} rho={rho}"));
            diag.record(cross_term(cosmo, tau, rho, c), || format!("tau={tau} rho={rho}"));
        }
    }
    out.extend([trip.finish(), diag.finish()]);

    let mut reg = Tracker::new(S, "cartesian-regularity", name.clone(), 1e-5);
    let h = 1e-3;
    for &tau in &taus {
        let mut pairs = Vec::new();
        for axis in 0..3 {
            let mut p = [0.0; 3];
            p[axis] = h;
            pairs.push(((tau, p), (tau, p.map(|v| -v))));
        }
        pairs.push(((tau + h, [0.0; 3]), (tau - h, [0.0; 3])));
        for ((tp, xp), (tm, xm)) in pairs {
            let r = (|| {
                let gp = metric_cartesian(cosmo, tp, xp, c)?;
                let gm = metric_cartesian(cosmo, tm, xm, c)?;
                let worst = (0..16)
                    .map(|k| (gp[k / 4][k % 4] - gm[k / 4][k % 4]).abs())
                    .fold(0.0, f64::max);
                Ok(worst / (2.0 * h))
            })();
            reg.record(r, || format!("tau={tau} step to {xp:?}"));
        }
    }
    out.push(reg.finish());

    let mut ident = Tracker::new(S, "velocity-identity", name.clone(), 1e-5);
    for &tau in &taus {
        let s_inf = sigma_infinity(cosmo, tau).unwrap_or(f64::INFINITY);
        for s0 in [1.2, 1.5, 2.0, 3.0].into_iter().filter(|&s| s < s_inf) {
            let r = chi_of_sigma(cosmo, tau, s0, c).and_then(|chi| velocity_identity_residual(cosmo, tau, chi, c));
            ident.record(r, || format!("tau={tau} sigma0={s0}"));
        }
    }
    out.push(ident.finish());

    if cosmo.global_chart() {
        let mut jac = Tracker::new(S, "jacobian-positive", name.clone(), 0.0);
        let mut mono = Tracker::new(S, "speed-monotone-in-chi0", name.clone(), 0.0);
        let mut bound = Tracker::new(S, "radius-hubble-bound", name.clone(), 0.0);
        for &tau in &taus {
            let s_inf = sigma_infinity(cosmo, tau).unwrap_or(f64::INFINITY);
            let sigmas: Vec<f64> = geomspace(1.001, 1e8, 25).into_iter().filter(|&s| s < s_inf).collect();
            for &s in &sigmas {
                // residual is how far J falls short of being positive
                jac.record(
                    jacobian_f(cosmo, tau, s, c).map(|j| if j > 0.0 { 0.0 } else { 1.0 - j }),
                    || format!("tau={tau} sigma={s}"),
                );
            }
            let mut prev: Option<f64> = None;
            for &s in sigmas.iter().filter(|&&s| s <= 1e4) {
                let r = chi_of_sigma(cosmo, tau, s, c)
                    .and_then(|chi| fermi_speed(cosmo, tau, chi, c))
                    .map(|v| {
                        let drop = prev.map_or(0.0, |p| (p - v.v_fermi).max(0.0));
                        prev = Some(v.v_fermi);
                        drop
                    });
                mono.record(r, || format!("tau={tau} sigma0={s}"));
            }
            let r = (|| Ok((proper_radius(cosmo, tau, c)? * hubble(cosmo, tau)? - 1.0).max(0.0)))();
            bound.record(r, || format!("tau={tau}"));
        }
        out.extend([jac.finish(), mono.finish(), bound.finish()]);
    }

    if let Some(alpha) = cosmo.model.power_law_alpha() {
        let mut geom = Tracker::new(S, "power-law-geometry-relation", name, 1e-9);
        for &tau in &taus {
            for s0 in [1.5, 4.0, 100.0, 1e4] {
                let r = power_law_geometry_relation(alpha, tau, s0, c).map(|(l, r)| (l - r).abs());
                geom.record(r, || format!("tau={tau} sigma0={s0}"));
            }
        }
        out.push(geom.finish());
    }
    out
}

/// Central-difference `g_tau_rho` of the pulled-back Robertson-Walker metric.
fn cross_term(cosmo: &Cosmology, tau: f64, rho: f64, c: &NumericsConfig) -> fermi_core::Result<f64> {
    let h = 1e-5;
    let rw = |ta: f64, r: f64| rw_from_fermi(cosmo, &FermiEvent::new(ta, r), c);
    let (tp, tm) = (rw(tau + h, rho)?, rw(tau - h, rho)?);
    let (rp, rm) = (rw(tau, rho + h)?, rw(tau, rho - h)?);
    let a2 = cosmo.a(rw(tau, rho)?.t).powi(2);
    let g = -(tp.t - tm.t) * (rp.t - rm.t) + a2 * (tp.chi - tm.chi) * (rp.chi - rm.chi);
    Ok((g / (4.0 * h * h)).abs())
}
