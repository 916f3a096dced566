//! Adaptive Gauss-Kronrod quadrature.
//!
//! A 7-point Gauss / 15-point Kronrod pair drives an adaptive bisection
//! scheme with worst-interval-first refinement. All nodes are interior, so
//! integrands only need to be defined on the open interval; bounded endpoint
//! singularities are resolved by subdivision.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance and budget for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Absolute tolerance on the integral.
    pub abs_tol: f64,
    /// Maximum number of interval subdivisions.
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-9,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && abs_tol.is_finite()) {
            return Err(Error::invalid("abs_tol", "must be positive and finite"));
        }
        if max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions", "must be positive"));
        }
        Ok(QuadratureSpec {
            abs_tol,
            max_subdivisions,
        })
    }
}

// 15-point Kronrod abscissae (positive half, descending); published values
// carry more digits than a double holds.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

// Kronrod weights matching XGK.
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// 7-point Gauss weights (for the odd-indexed Kronrod abscissae).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// QUADPACK-style conservative error rescaling.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

/// Apply the G7/K15 pair on `[a, b]`, returning the Kronrod estimate and a
/// conservative error bound.
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half_len = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_gauss = WG[3] * f_center;
    let mut res_kronrod = WGK[7] * f_center;
    let mut res_abs = res_kronrod.abs();

    let mut fv = [0.0f64; 15];
    fv[7] = f_center;

    for j in 0..7 {
        let abscissa = half_len * XGK[j];
        let f1 = f(center - abscissa);
        let f2 = f(center + abscissa);
        fv[j] = f1;
        fv[14 - j] = f2;
        let fsum = f1 + f2;
        res_kronrod += WGK[j] * fsum;
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * fsum;
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let err = ((res_kronrod - res_gauss) * half_len).abs();
    (
        res_kronrod * half_len,
        rescale_error(err, res_abs * half_len.abs(), res_asc * half_len.abs()),
    )
}

#[derive(Debug)]
struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrate `f` over `(a, b)` to the requested absolute tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    integrate_with_breakpoints(f, a, b, &[], spec)
}

/// Integrate `f` over `(a, b)`, pre-splitting the interval at the given
/// breakpoints (locations of known kinks or jumps). Breakpoints outside
/// `(a, b)` are ignored.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::invalid(
            "interval",
            format!("expected finite a < b, got [{a}, {b}]"),
        ));
    }

    let mut edges: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&t| t > a && t < b)
        .collect();
    edges.push(a);
    edges.push(b);
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    // Error contributed by intervals too narrow to subdivide further.
    let mut frozen_err = 0.0;
    let mut subdivisions = edges.len() - 1;

    for pair in edges.windows(2) {
        let (value, error) = kronrod15(&f, pair[0], pair[1]);
        total += value;
        total_err += error;
        heap.push(Interval {
            a: pair[0],
            b: pair[1],
            value,
            error,
        });
    }

    while total_err > spec.abs_tol {
        let worst = match heap.pop() {
            Some(iv) => iv,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Interval at machine resolution: accept its estimate as is.
            frozen_err += worst.error;
            total_err = frozen_err + heap.iter().map(|iv| iv.error).sum::<f64>();
            continue;
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::QuadratureNonConvergence {
                achieved: total_err,
                requested: spec.abs_tol,
            });
        }
        subdivisions += 1;

        let (lv, le) = kronrod15(&f, worst.a, mid);
        let (rv, re) = kronrod15(&f, mid, worst.b);
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Interval {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Interval {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
    }

    if !total.is_finite() {
        return Err(Error::Numerical(format!(
            "quadrature produced a non-finite value over [{a}, {b}]"
        )));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let spec = QuadratureSpec::default();
        let v = integrate(|x| 3.0 * x * x, 0.0, 1.0, &spec).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        // \int_0^1 x^{-1/2} dx = 2, singular at the left endpoint.
        let spec = QuadratureSpec::default();
        let v = integrate(|x| x.powf(-0.5), 0.0, 1.0, &spec).unwrap();
        assert!((v - 2.0).abs() < 1e-8, "got {v}");
    }

    #[test]
    fn oscillatory() {
        let spec = QuadratureSpec::default();
        let v = integrate(|x| (20.0 * x).sin(), 0.0, 1.0, &spec).unwrap();
        let exact = (1.0 - (20.0f64).cos()) / 20.0;
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn breakpoints_resolve_step_functions() {
        // Step function with 200 jumps: blind bisection would exhaust the
        // budget, seeding the known jumps must not.
        let steps: Vec<f64> = (1..200).map(|k| k as f64 / 200.0).collect();
        let f = |x: f64| (x * 200.0).floor();
        let spec = QuadratureSpec::default();
        let v = integrate_with_breakpoints(f, 0.0, 1.0, &steps, &spec).unwrap();
        let exact = (0..200).map(|k| k as f64 / 200.0).sum::<f64>();
        assert!((v - exact).abs() < 1e-9, "got {v}, want {exact}");
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let spec = QuadratureSpec::new(1e-13, 3).unwrap();
        let err = integrate(|x| x.powf(-0.9), 0.0, 1.0, &spec).unwrap_err();
        assert!(matches!(err, Error::QuadratureNonConvergence { .. }));
    }

    #[test]
    fn invalid_interval_rejected() {
        let spec = QuadratureSpec::default();
        assert!(integrate(|x| x, 1.0, 0.0, &spec).is_err());
        assert!(integrate(|x| x, 0.0, f64::INFINITY, &spec).is_err());
    }
}
