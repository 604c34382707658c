use std::io::Read;

use super::ScaleFactor;
use crate::error::{Error, Result};

/// Shape-preserving (Fritsch-Carlson/Butland) monotone cubic interpolant.
#[derive(Debug, Clone)]
struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl Pchip {
    fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut d = vec![0.0; n];
        for k in 1..n - 1 {
            if delta[k - 1] * delta[k] > 0.0 {
                let w1 = 2.0 * h[k] + h[k - 1];
                let w2 = h[k] + 2.0 * h[k - 1];
                d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
            }
        }
        d[0] = Self::end_slope(h[0], h[1], delta[0], delta[1]);
        d[n - 1] = Self::end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        Pchip { x, y, d }
    }

    fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s.signum() != d0.signum() {
            0.0
        } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    }

    fn first(&self) -> f64 {
        self.x[0]
    }

    fn last(&self) -> f64 {
        *self.x.last().unwrap()
    }

    /// (value, first derivative, second derivative) for `x` inside the knots.
    fn eval(&self, x: f64) -> (f64, f64, f64) {
        let k = match self.x.partition_point(|&xi| xi <= x) {
            0 => 0,
            i => (i - 1).min(self.x.len() - 2),
        };
        let h = self.x[k + 1] - self.x[k];
        let delta = (self.y[k + 1] - self.y[k]) / h;
        let (d0, d1) = (self.d[k], self.d[k + 1]);
        let c2 = (3.0 * delta - 2.0 * d0 - d1) / h;
        let c3 = (d0 + d1 - 2.0 * delta) / (h * h);
        let dx = x - self.x[k];
        (
            self.y[k] + dx * (d0 + dx * (c2 + dx * c3)),
            d0 + dx * (2.0 * c2 + 3.0 * c3 * dx),
            2.0 * c2 + 6.0 * c3 * dx,
        )
    }
}

/// Scale factor interpolated from samples `(t_i, a_i)`.
///
/// `b` is interpolated independently from the swapped pairs. Below the first
/// sample both are extended linearly to `(0, a_inf)`; above the last sample
/// they are extended linearly with the end slope, although callers treat
/// `t_max` as the end of the domain. The second derivative of `b` is only
/// first-order accurate in the knot spacing.
#[derive(Debug, Clone)]
pub struct Tabulated {
    a_of_t: Pchip,
    b_of_a: Pchip,
    a_inf: f64,
    global_chart: bool,
}

impl Tabulated {
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::Validation {
                index: samples.len(),
                message: format!("at least 4 samples required, got {}", samples.len()),
            });
        }
        for (i, &(t, a)) in samples.iter().enumerate() {
            if !(t.is_finite() && a.is_finite()) || t <= 0.0 || a <= 0.0 {
                return Err(Error::Validation {
                    index: i,
                    message: format!("sample (t={t}, a={a}) must be finite and positive"),
                });
            }
            if i > 0 {
                let (tp, ap) = samples[i - 1];
                if !(t > tp) {
                    return Err(Error::Validation {
                        index: i,
                        message: format!("t is not strictly increasing ({tp} then {t})"),
                    });
                }
                if !(a > ap) {
                    return Err(Error::Validation {
                        index: i,
                        message: format!("a is not strictly increasing ({ap} then {a})"),
                    });
                }
            }
        }
        let t: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let a: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let a_of_t = Pchip::new(t.clone(), a.clone());
        let b_of_a = Pchip::new(a, t);

        let (a0, slope0, _) = a_of_t.eval(a_of_t.first());
        let a_inf = (a0 - slope0 * a_of_t.first()).max(0.0);

        // b'' is piecewise linear, so its sign is decided at the knots
        let scale = b_of_a.d.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        let global_chart = b_of_a.x.windows(2).all(|w| {
            let lo = b_of_a.eval(w[0]).2;
            let hi = b_of_a.eval(w[1] - 1e-12 * (w[1] - w[0])).2;
            let tol = -1e-9 * scale / (w[1] - w[0]);
            lo >= tol && hi >= tol
        });
        Ok(Tabulated {
            a_of_t,
            b_of_a,
            a_inf,
            global_chart,
        })
    }

    pub fn len(&self) -> usize {
        self.a_of_t.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a_of_t.x.is_empty()
    }

    fn first_sample(&self) -> (f64, f64) {
        (self.a_of_t.x[0], self.a_of_t.y[0])
    }
}

impl ScaleFactor for Tabulated {
    fn a(&self, t: f64) -> f64 {
        let (t0, a0) = self.first_sample();
        if t < t0 {
            self.a_inf + (a0 - self.a_inf) * t / t0
        } else if t > self.a_of_t.last() {
            let tn = self.a_of_t.last();
            let (an, dn, _) = self.a_of_t.eval(tn);
            an + dn * (t - tn)
        } else {
            self.a_of_t.eval(t).0
        }
    }

    fn a_dot(&self, t: f64) -> f64 {
        let (t0, a0) = self.first_sample();
        if t < t0 {
            (a0 - self.a_inf) / t0
        } else {
            self.a_of_t.eval(t.min(self.a_of_t.last())).1
        }
    }

    fn b(&self, x: f64) -> f64 {
        let (t0, a0) = self.first_sample();
        if x < a0 {
            t0 * (x - self.a_inf) / (a0 - self.a_inf)
        } else if x > self.b_of_a.last() {
            let xn = self.b_of_a.last();
            let (tn, dn, _) = self.b_of_a.eval(xn);
            tn + dn * (x - xn)
        } else {
            self.b_of_a.eval(x).0
        }
    }

    fn b_dot(&self, x: f64) -> f64 {
        let (t0, a0) = self.first_sample();
        if x < a0 {
            t0 / (a0 - self.a_inf)
        } else {
            self.b_of_a.eval(x.min(self.b_of_a.last())).1
        }
    }

    fn b_ddot(&self, x: f64) -> f64 {
        if x < self.b_of_a.first() || x > self.b_of_a.last() {
            0.0
        } else {
            self.b_of_a.eval(x).2
        }
    }

    fn a_inf(&self) -> f64 {
        self.a_inf
    }

    fn global_chart(&self) -> bool {
        self.global_chart
    }

    fn t_max(&self) -> f64 {
        self.a_of_t.last()
    }
}

/// Reads `(t, a)` samples from CSV with a `t,a` header row.
pub fn read_samples_csv<R: Read>(reader: R) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Input(e.to_string()))?;
    if headers.len() != 2 || &headers[0] != "t" || &headers[1] != "a" {
        return Err(Error::Input(format!(
            "expected header `t,a`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Input(e.to_string()))?;
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|_| Error::Validation {
                index: i,
                message: format!("cannot parse `{s}` as a number"),
            })
        };
        if rec.len() != 2 {
            return Err(Error::Validation {
                index: i,
                message: format!("expected 2 columns, found {}", rec.len()),
            });
        }
        out.push((parse(&rec[0])?, parse(&rec[1])?));
    }
    Ok(out)
}

/// Reads `(t, a)` samples from a JSON array of `[t, a]` pairs.
pub fn read_samples_json(text: &str) -> Result<Vec<(f64, f64)>> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
    Ok(pairs.into_iter().map(|[t, a]| (t, a)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosmology::{make_power_law, make_tabulated, ScaleFactor};

    fn log_samples(alpha: f64, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
        (0..n)
            .map(|i| {
                let t = lo * (hi / lo).powf(i as f64 / (n - 1) as f64);
                (t, t.powf(alpha))
            })
            .collect()
    }

    #[test]
    fn linear_data_reproduced() {
        let samples: Vec<_> = (0..40)
            .map(|i| {
                let t = 0.1 + i as f64 * (9.9 / 39.0);
                (t, t)
            })
            .collect();
        let m = make_tabulated(&samples).unwrap();
        assert!((m.a(2.0) - 2.0).abs() < 1e-6);
        assert!((m.b(2.0) - 2.0).abs() < 1e-6);
    }

    #[test]
    fn radiation_table_against_analytic() {
        let samples = log_samples(0.5, 0.1, 16.0, 64);
        let tab = make_tabulated(&samples).unwrap();
        let exact = make_power_law(0.5).unwrap();
        assert!((tab.b(3.0) - exact.b(3.0)).abs() < 1e-4, "{}", tab.b(3.0));
        assert!((tab.b(3.0) - 9.0).abs() < 1e-4);
    }

    #[test]
    fn too_few_samples() {
        let err = make_tabulated(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]).unwrap_err();
        assert!(matches!(err, Error::Validation { .. }));
    }

    #[test]
    fn non_monotone_reports_index() {
        let samples = [(1.0, 1.0), (2.0, 2.0), (3.0, 1.5), (4.0, 4.0)];
        match make_tabulated(&samples).unwrap_err() {
            Error::Validation { index, .. } => assert_eq!(index, 2),
            e => panic!("unexpected {e:?}"),
        }
        let samples = [(1.0, 1.0), (2.0, 2.0), (3.0, 3.0), (3.0, 4.0)];
        match make_tabulated(&samples).unwrap_err() {
            Error::Validation { index, .. } => assert_eq!(index, 3),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn a_inf_extrapolated_and_clamped() {
        // linear a = t + 1 extrapolates to a_inf = 1
        let samples: Vec<_> = (1..10).map(|i| (i as f64, i as f64 + 1.0)).collect();
        let m = Tabulated::new(&samples).unwrap();
        assert!((m.a_inf() - 1.0).abs() < 1e-12);
        // sqrt(t) tangent at t0 crosses zero at t0/2 > 0, so a_inf stays positive;
        // a = t^2 would give a negative intercept which is clamped
        let samples = log_samples(1.0, 1.0, 4.0, 8)
            .into_iter()
            .map(|(t, _)| (t, t * t))
            .collect::<Vec<_>>();
        assert_eq!(Tabulated::new(&samples).unwrap().a_inf(), 0.0);
    }

    #[test]
    fn global_chart_detection() {
        let convex_b = Tabulated::new(&log_samples(0.5, 0.1, 10.0, 50)).unwrap();
        assert!(convex_b.global_chart());
        let ds: Vec<_> = (0..30)
            .map(|i| {
                let t = 0.1 + i as f64 * 0.1;
                (t, t.exp())
            })
            .collect();
        assert!(!Tabulated::new(&ds).unwrap().global_chart());
    }

    #[test]
    fn csv_and_json_ingest() {
        let csv = "t,a\n1,1\n2,1.5\n3, 1.9\n4,2.2\n";
        let s = read_samples_csv(csv.as_bytes()).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s[2], (3.0, 1.9));
        assert!(read_samples_csv("x,y\n1,2\n".as_bytes()).is_err());
        assert!(read_samples_csv("t,a\n1,abc\n".as_bytes()).is_err());

        let j = read_samples_json("[[1,1],[2,1.5],[3,1.9],[4,2.2]]").unwrap();
        assert_eq!(j, s);
        assert!(read_samples_json("[[1,2,3]]").is_err());
    }
}
