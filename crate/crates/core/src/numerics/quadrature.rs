use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::NumericsConfig;
use crate::error::{Error, Result};

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15),
// digits as tabulated there.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Split point between the `sigma = 1 + u^2` map and the `sigma = v^-4` map.
const SIGMA_SPLIT: f64 = 2.0;

/// Largest relative size of the tail dropped by the `sigma_cap` fallback.
const TAIL_DROP_REL: f64 = 1e-6;

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Segment> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut res_abs = kronrod.abs();
    let mut fv = [(0.0, 0.0); 7];
    for (j, slot) in fv.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        *slot = (f1, f2);
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    if !kronrod.is_finite() {
        return Err(Error::Accuracy {
            message: format!("non-finite integrand on [{lo}, {hi}]"),
            estimate: f64::NAN,
            error_bound: f64::INFINITY,
        });
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for (j, &(f1, f2)) in fv.iter().enumerate() {
        res_asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();

    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment { lo, hi, value, error })
}

/// Globally adaptive Gauss-Kronrod quadrature of a smooth integrand on a
/// finite interval. Subdivides the segment with the largest error estimate
/// until the total estimate meets `max(abs_tol, rel_tol * |I|)`.
pub fn integrate_interval<F>(f: F, lo: f64, hi: f64, cfg: &NumericsConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if lo == hi {
        return Ok(0.0);
    }
    let first = gauss_kronrod(&f, lo, hi)?;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    let mut splits = 0;
    loop {
        let tol = cfg.quad_abs_tol.max(cfg.quad_rel_tol * total.abs());
        if total_err <= tol {
            return Ok(total);
        }
        if splits >= cfg.max_iter {
            return Err(Error::Accuracy {
                message: format!("quadrature on [{lo}, {hi}] did not converge in {splits} subdivisions"),
                estimate: total,
                error_bound: total_err,
            });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo.min(worst.hi) || mid >= worst.lo.max(worst.hi) {
            // interval exhausted at machine resolution; accept what we have
            return Err(Error::Accuracy {
                message: format!("quadrature on [{lo}, {hi}] hit machine resolution"),
                estimate: total,
                error_bound: total_err,
            });
        }
        let left = gauss_kronrod(&f, worst.lo, mid)?;
        let right = gauss_kronrod(&f, mid, worst.hi)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        splits += 1;
        if splits % 32 == 0 {
            // resum to shed accumulated cancellation in the running totals
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
}

/// Integrates `weight(σ) / sqrt(σ - 1)` over `[sigma_lo, sigma_hi]`.
///
/// The `(σ-1)^(-1/2)` factor is implicit: callers pass only the smooth part
/// `weight`. On `[1, 2]` the substitution `σ = 1 + u²` removes the
/// square-root singularity exactly; beyond `σ = 2` the map `σ = v⁻⁴`
/// compresses long and infinite tails onto a short interval and softens
/// integrable `s^(-1/2)`-type behaviour at `s = 1/√σ = 0`.
///
/// `sigma_hi` may be `f64::INFINITY`. If the mapped tail does not converge
/// the range is truncated at `cfg.sigma_cap`, provided the dropped piece,
/// estimated as `|h(v_cap)| * v_cap` for the mapped integrand `h`, is below
/// `1e-6` of the result. Otherwise the accuracy error is returned.
pub fn integrate_sigma<F>(weight: F, sigma_lo: f64, sigma_hi: f64, cfg: &NumericsConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(sigma_lo >= 1.0) || sigma_hi.is_nan() {
        return Err(Error::domain(format!(
            "integration range [{sigma_lo}, {sigma_hi}] must satisfy 1 <= lo"
        )));
    }
    if sigma_hi < sigma_lo {
        return integrate_sigma(weight, sigma_hi, sigma_lo, cfg).map(|v| -v);
    }
    if sigma_hi == sigma_lo {
        return Ok(0.0);
    }

    let mut total = 0.0;
    if sigma_lo < SIGMA_SPLIT {
        let u_lo = (sigma_lo - 1.0).sqrt();
        let u_hi = (sigma_hi.min(SIGMA_SPLIT) - 1.0).sqrt();
        total += integrate_interval(|u| 2.0 * weight(1.0 + u * u), u_lo, u_hi, cfg)?;
    }
    if sigma_hi > SIGMA_SPLIT {
        let lo = sigma_lo.max(SIGMA_SPLIT);
        let tail = |v: f64| {
            let v2 = v * v;
            let v4 = v2 * v2;
            4.0 * weight(1.0 / v4) / (v * v2 * (1.0 - v4).sqrt())
        };
        let v_hi = lo.powf(-0.25);
        let v_lo = if sigma_hi.is_infinite() {
            0.0
        } else {
            sigma_hi.powf(-0.25)
        };
        total += match integrate_interval(tail, v_lo, v_hi, cfg) {
            Ok(v) => v,
            Err(e) if sigma_hi.is_infinite() && e.is_accuracy() => {
                let v_cap = cfg.sigma_cap.max(lo).powf(-0.25);
                let truncated = integrate_interval(tail, v_cap, v_hi, cfg)?;
                // the dropped piece [0, v_cap] must be negligible, otherwise
                // the integral is genuinely divergent
                let dropped = (tail(v_cap) * v_cap).abs();
                if !(dropped <= TAIL_DROP_REL * truncated.abs().max(cfg.quad_abs_tol)) {
                    return Err(e);
                }
                truncated
            }
            Err(e) => return Err(e),
        };
    }
    Ok(total)
}
