use super::NumericsConfig;
use crate::error::{Error, Result};

/// Brent's method on a bracketing interval.
///
/// Never leaves `[lo, hi]`: inverse quadratic or secant steps are taken only
/// when they land well inside the current bracket, otherwise it bisects.
/// Terminates once the bracket is no wider than `root_tol * max(1, |x|)`.
pub fn find_root_monotone<F>(mut g: F, lo: f64, hi: f64, cfg: &NumericsConfig) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_find_root_monotone(|x| Ok(g(x)), lo, hi, cfg)
}

/// Same as [`find_root_monotone`] for functions that may fail (typically
/// because they are quadrature-valued).
pub fn try_find_root_monotone<F>(mut g: F, lo: f64, hi: f64, cfg: &NumericsConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo, hi);
    let mut fa = g(a)?;
    let mut fb = g(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::Bracket {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..cfg.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * cfg.root_tol * b.abs().max(1.0);
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = g(b)?;
        if fb.is_nan() {
            return Err(Error::Accuracy {
                message: format!("root function returned NaN at {b}"),
                estimate: b,
                error_bound: (c - b).abs(),
            });
        }
    }
    Err(Error::Accuracy {
        message: format!("root finder exhausted {} iterations", cfg.max_iter),
        estimate: b,
        error_bound: (c - b).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let x = find_root_monotone(|x| x * x - 2.0, 1.0, 2.0, &NumericsConfig::default()).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn tanh_half() {
        let x = find_root_monotone(|x| x.tanh() - 0.5, 0.0, 2.0, &NumericsConfig::default()).unwrap();
        assert!((x - 0.5f64.atanh()).abs() < 1e-12);
    }

    #[test]
    fn decreasing_function_and_exact_endpoint() {
        let cfg = NumericsConfig::default();
        let x = find_root_monotone(|x| 3.0 - x, 0.0, 10.0, &cfg).unwrap();
        assert!((x - 3.0).abs() < 1e-12);
        assert_eq!(find_root_monotone(|x| x - 1.0, 1.0, 4.0, &cfg).unwrap(), 1.0);
    }

    #[test]
    fn missing_sign_change() {
        let err = find_root_monotone(|x| x * x + 1.0, -1.0, 1.0, &NumericsConfig::default());
        assert!(matches!(err, Err(Error::Bracket { .. })));
    }

    #[test]
    fn iteration_cap() {
        let cfg = NumericsConfig {
            max_iter: 2,
            ..NumericsConfig::default()
        };
        let err = find_root_monotone(|x| x.powi(3) - 0.3, 0.0, 1.0, &cfg).unwrap_err();
        assert!(err.is_accuracy());
    }

    #[test]
    fn propagates_function_errors() {
        let cfg = NumericsConfig::default();
        let err = try_find_root_monotone(|_| Err(Error::Domain("nope".into())), 0.0, 1.0, &cfg);
        assert_eq!(err, Err(Error::Domain("nope".into())));
    }
}
