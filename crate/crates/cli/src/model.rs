use std::fs::File;
use std::path::Path;

use fermi_core::cosmology::{read_samples_csv, read_samples_json};
use fermi_core::{make_tabulated, Cosmology, Curvature, NumericsConfig};
use serde::Serialize;

use crate::args::{ModelArgs, ModelKind, NumericsArgs};
use crate::error::{usage, CliError};

/// Subdivision budget per tabulated sample. Every knot is a kink in the
/// interpolated b'' so the adaptive quadrature needs a few panels per knot.
const TABULATED_ITER_PER_SAMPLE: usize = 16;

/// A resolved model plus numerics, ready to hand to the core routines.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub cosmo: Cosmology,
    pub cfg: NumericsConfig,
    pub header: ModelHeader,
}

/// The `model` object written alongside every table.
#[derive(Debug, Clone, Serialize)]
pub struct ModelHeader {
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    pub k: i32,
    pub scale_factor: String,
    pub numerics: NumericsConfig,
}

impl RunConfig {
    pub fn resolve(m: &ModelArgs, n: &NumericsArgs) -> Result<RunConfig, CliError> {
        Self::resolve_optional(m, n)?.ok_or_else(|| usage("--model is required for this command"))
    }

    /// `None` when no `--model` was given.
    pub fn resolve_optional(m: &ModelArgs, n: &NumericsArgs) -> Result<Option<RunConfig>, CliError> {
        let Some(kind) = m.model else {
            for (flag, given) in [
                ("--alpha", m.alpha.is_some()),
                ("--h0", m.h0.is_some()),
                ("--table", m.table.is_some()),
            ] {
                if given {
                    return Err(usage(format!("{flag} needs --model")));
                }
            }
            return Ok(None);
        };
        check_flags(kind, m)?;
        let default_k = if kind == ModelKind::Milne { -1 } else { 0 };
        let k = Curvature::try_from(m.k.unwrap_or(default_k))?;
        let mut max_iter_default = NumericsConfig::default().max_iter;
        let cosmo = match kind {
            ModelKind::Milne => {
                if k != Curvature::Open {
                    return Err(usage(
                        "the Milne model has k=-1; use --model power-law --alpha 1 for a flat a(t)=t",
                    ));
                }
                Cosmology::milne()
            }
            ModelKind::DeSitter => with_k(Cosmology::de_sitter(m.h0.unwrap_or(1.0))?, k),
            ModelKind::PowerLaw => {
                let alpha = m.alpha.ok_or_else(|| usage("--model power-law requires --alpha"))?;
                Cosmology::power_law(alpha, k)?
            }
            ModelKind::Radiation => with_k(Cosmology::radiation(), k),
            ModelKind::Matter => with_k(Cosmology::matter(), k),
            ModelKind::Tabulated => {
                let path = m
                    .table
                    .as_deref()
                    .ok_or_else(|| usage("--model tabulated requires --table"))?;
                let samples = read_table(path)?;
                max_iter_default = max_iter_default.max(TABULATED_ITER_PER_SAMPLE * samples.len());
                Cosmology::new(make_tabulated(&samples)?, k, "tabulated")
            }
        };
        let cfg = numerics(n, max_iter_default)?;
        let header = ModelHeader {
            family: cosmo.name.clone(),
            alpha: if kind == ModelKind::PowerLaw { m.alpha } else { None },
            h0: if kind == ModelKind::DeSitter {
                Some(m.h0.unwrap_or(1.0))
            } else {
                None
            },
            table: m.table.as_ref().map(|p| p.display().to_string()),
            k: k.k(),
            scale_factor: cosmo.model.describe(),
            numerics: cfg,
        };
        Ok(Some(RunConfig { cosmo, cfg, header }))
    }
}

fn with_k(mut cosmo: Cosmology, k: Curvature) -> Cosmology {
    cosmo.k = k;
    cosmo
}

fn check_flags(kind: ModelKind, m: &ModelArgs) -> Result<(), CliError> {
    let stray = [
        ("--alpha", m.alpha.is_some() && kind != ModelKind::PowerLaw),
        ("--h0", m.h0.is_some() && kind != ModelKind::DeSitter),
        ("--table", m.table.is_some() && kind != ModelKind::Tabulated),
    ];
    for (flag, bad) in stray {
        if bad {
            return Err(usage(format!("{flag} does not apply to this model")));
        }
    }
    Ok(())
}

fn read_table(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        let text = std::fs::read_to_string(path).map_err(io)?;
        Ok(read_samples_json(&text)?)
    } else {
        Ok(read_samples_csv(File::open(path).map_err(io)?)?)
    }
}

pub fn numerics(n: &NumericsArgs, max_iter_default: usize) -> Result<NumericsConfig, CliError> {
    let d = NumericsConfig::default();
    let cfg = NumericsConfig {
        quad_rel_tol: n.quad_rel_tol.unwrap_or(d.quad_rel_tol),
        quad_abs_tol: n.quad_abs_tol.unwrap_or(d.quad_abs_tol),
        root_tol: n.root_tol.unwrap_or(d.root_tol),
        max_iter: n.max_iter.unwrap_or(max_iter_default),
        sigma_cap: n.sigma_cap.unwrap_or(d.sigma_cap),
    };
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    Ok(cfg)
}
