//! Asymptotic variances of the empirical qZI and qDI estimators.
//!
//! The limiting distributions of sqrt(n) (qZI_hat - qZI) and
//! sqrt(n) (qDI_hat - qDI) are centred normals whose variances are double
//! integrals of Brownian-bridge covariances against the weight functions
//! a, b (for qZI) and c, d (for qDI). This module evaluates those integrals
//! by iterated adaptive quadrature over the two triangles on which
//! min(p, q) and max(p, q) are smooth, and derives normal confidence
//! intervals for index estimates.

use serde::Serialize;

use crate::curves::{q_curve, CurveKind, QuantileSource};
use crate::distributions::ParametricDistribution;
use crate::error::{require_prob_open, Error, Result};
use crate::indices::IndexEstimate;
use crate::quadrature::{integrate, QuadratureSpec};

/// Which limiting variance: Z for the qZI estimator, D for qDI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VarianceKind {
    Z,
    D,
}

impl std::fmt::Display for VarianceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VarianceKind::Z => "sigma2_Z",
            VarianceKind::D => "sigma2_D",
        })
    }
}

/// An evaluated asymptotic variance.
#[derive(Debug, Clone, Serialize)]
pub struct VarianceResult {
    pub kind: VarianceKind,
    pub value: f64,
    pub dist: ParametricDistribution,
    pub quad: QuadratureSpec,
}

/// Integration domain margin: the square is truncated to [eps, 1 - eps]^2
/// because the weight functions blow up (integrably) at the corners. The
/// induced bias is far below the accuracy of interest for the families
/// handled here; widen via the `*_with_truncation` variants if needed.
pub const DEFAULT_TRUNCATION: f64 = 1e-6;

/// The limit-theorem weight functions (a, b, c, d) at `p`.
///
/// a(p) = [1 - qZ(p)] Q'(p/2)/Q(p/2), b(p) the same at (1+p)/2;
/// c(p) = [1 - qD(p)] Q'(p/2)/Q(p/2), d(p) the same at 1 - p/2;
/// with Q'(u) = 1/f(Q(u)).
pub fn weight_functions(dist: &ParametricDistribution, p: f64) -> Result<(f64, f64, f64, f64)> {
    require_prob_open("p", p)?;
    let src = QuantileSource::Distribution(dist);

    // Q'(u)/Q(u) = 1 / (f(Q(u)) Q(u)).
    let log_derivative = |u: f64| -> Result<f64> {
        let q = dist.quantile(u)?;
        let f = dist.density(q)?;
        let v = 1.0 / (f * q);
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::Numerical(format!(
                "density {f} at Q({u}) = {q} gives unusable Q'/Q = {v}"
            )));
        }
        Ok(v)
    };

    let one_minus_qz = 1.0 - q_curve(src, CurveKind::QZ, p)?;
    let one_minus_qd = 1.0 - q_curve(src, CurveKind::QD, p)?;
    let lower = log_derivative(p / 2.0)?;
    let a = one_minus_qz * lower;
    let b = one_minus_qz * log_derivative((1.0 + p) / 2.0)?;
    let c = one_minus_qd * lower;
    let d = one_minus_qd * log_derivative(1.0 - p / 2.0)?;
    Ok((a, b, c, d))
}

// Brownian-bridge covariance kernels of the reduced sigma^2_Z integrand.
fn integrand_z(wp: (f64, f64), wq: (f64, f64), p: f64, q: f64) -> f64 {
    let (a_p, b_p) = wp;
    let (a_q, b_q) = wq;
    let min_pq = p.min(q);
    a_p * a_q * (min_pq / 2.0 - p * q / 4.0)
        + b_p * b_q * (0.5 + min_pq / 2.0 - (1.0 + p) * (1.0 + q) / 4.0)
        + b_p * a_q * (q / 2.0) * ((p - 1.0) / 2.0)
        + a_p * b_q * (p / 2.0) * ((q - 1.0) / 2.0)
}

// Reduced sigma^2_D integrand.
fn integrand_d(wp: (f64, f64), wq: (f64, f64), p: f64, q: f64) -> f64 {
    let (c_p, d_p) = wp;
    let (c_q, d_q) = wq;
    let min_pq = p.min(q);
    let max_pq = p.max(q);
    c_p * c_q * (min_pq / 2.0 - p * q / 4.0)
        + d_p * d_q * (1.0 - max_pq / 2.0 - (1.0 - p / 2.0) * (1.0 - q / 2.0))
        - (p * q / 4.0) * (d_p * c_q + c_p * d_q)
}

fn weights_for(dist: &ParametricDistribution, kind: VarianceKind, p: f64) -> Result<(f64, f64)> {
    let (a, b, c, d) = weight_functions(dist, p)?;
    Ok(match kind {
        VarianceKind::Z => (a, b),
        VarianceKind::D => (c, d),
    })
}

/// Integral of the variance integrand over one triangle of [eps, 1-eps]^2;
/// `upper` selects {q > p} rather than {q < p}.
fn triangle_integral(
    dist: &ParametricDistribution,
    kind: VarianceKind,
    quad: &QuadratureSpec,
    eps: f64,
    upper: bool,
) -> Result<f64> {
    let hi = 1.0 - eps;
    integrate(
        |p| {
            let wp = match weights_for(dist, kind, p) {
                Ok(w) => w,
                Err(_) => return f64::NAN,
            };
            let (lo_q, hi_q) = if upper { (p, hi) } else { (eps, p) };
            if hi_q - lo_q <= 4.0 * f64::EPSILON {
                return 0.0;
            }
            let inner = integrate(
                |q| {
                    let wq = match weights_for(dist, kind, q) {
                        Ok(w) => w,
                        Err(_) => return f64::NAN,
                    };
                    match kind {
                        VarianceKind::Z => integrand_z(wp, wq, p, q),
                        VarianceKind::D => integrand_d(wp, wq, p, q),
                    }
                },
                lo_q,
                hi_q,
                quad,
            );
            inner.unwrap_or(f64::NAN)
        },
        eps,
        hi,
        quad,
    )
}

fn sigma2(
    dist: &ParametricDistribution,
    kind: VarianceKind,
    quad: &QuadratureSpec,
    eps: f64,
) -> Result<VarianceResult> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::invalid("eps", "truncation must lie in (0, 0.5)"));
    }
    let lower = triangle_integral(dist, kind, quad, eps, false)?;
    let upper = triangle_integral(dist, kind, quad, eps, true)?;
    let value = lower + upper;
    if !value.is_finite() {
        return Err(Error::Numerical(format!("{kind} evaluated to {value}")));
    }
    if value < -1e-8 {
        return Err(Error::Numerical(format!(
            "{kind} variance is negative ({value}); the integrand decomposition is broken"
        )));
    }
    Ok(VarianceResult {
        kind,
        value: value.max(0.0),
        dist: *dist,
        quad: *quad,
    })
}

/// Asymptotic variance of the empirical qZI estimator.
pub fn sigma2_z(dist: &ParametricDistribution, quad: &QuadratureSpec) -> Result<VarianceResult> {
    sigma2(dist, VarianceKind::Z, quad, DEFAULT_TRUNCATION)
}

/// Asymptotic variance of the empirical qDI estimator.
pub fn sigma2_d(dist: &ParametricDistribution, quad: &QuadratureSpec) -> Result<VarianceResult> {
    sigma2(dist, VarianceKind::D, quad, DEFAULT_TRUNCATION)
}

/// [`sigma2_z`] with an explicit domain truncation margin.
pub fn sigma2_z_with_truncation(
    dist: &ParametricDistribution,
    quad: &QuadratureSpec,
    eps: f64,
) -> Result<VarianceResult> {
    sigma2(dist, VarianceKind::Z, quad, eps)
}

/// [`sigma2_d`] with an explicit domain truncation margin.
pub fn sigma2_d_with_truncation(
    dist: &ParametricDistribution,
    quad: &QuadratureSpec,
    eps: f64,
) -> Result<VarianceResult> {
    sigma2(dist, VarianceKind::D, quad, eps)
}

/// Both triangle integrals separately; they agree up to quadrature error
/// because the integrand is symmetric in (p, q).
pub fn sigma2_triangles(
    dist: &ParametricDistribution,
    kind: VarianceKind,
    quad: &QuadratureSpec,
) -> Result<(f64, f64)> {
    Ok((
        triangle_integral(dist, kind, quad, DEFAULT_TRUNCATION, false)?,
        triangle_integral(dist, kind, quad, DEFAULT_TRUNCATION, true)?,
    ))
}

/// Quantile of the standard normal distribution (Wichura's PPND16).
#[allow(clippy::excessive_precision)] // published coefficient tables
pub fn standard_normal_quantile(p: f64) -> Result<f64> {
    require_prob_open("p", p)?;
    const A: [f64; 8] = [
        3.3871328727963666080e0,
        1.3314166789178437745e2,
        1.9715909503065514427e3,
        1.3731693765509461125e4,
        4.5921953931549871457e4,
        6.7265770927008700853e4,
        3.3430575583588128105e4,
        2.5090809287301226727e3,
    ];
    const B: [f64; 8] = [
        1.0,
        4.2313330701600911252e1,
        6.8718700749205790830e2,
        5.3941960214247511077e3,
        2.1213794301586595867e4,
        3.9307895800092710610e4,
        2.8729085735721942674e4,
        5.2264952788528545610e3,
    ];
    const C: [f64; 8] = [
        1.42343711074968357734e0,
        4.63033784615654529590e0,
        5.76949722146069140550e0,
        3.64784832476320460504e0,
        1.27045825245236838258e0,
        2.41780725177450611770e-1,
        2.27238449892691845833e-2,
        7.74545014278341407640e-4,
    ];
    const D: [f64; 8] = [
        1.0,
        2.05319162663775882187e0,
        1.67638483018380384940e0,
        6.89767334985100004550e-1,
        1.48103976427480074590e-1,
        1.51986665636164571966e-2,
        5.47593808499534494600e-4,
        1.05075007164441684324e-9,
    ];
    const E: [f64; 8] = [
        6.65790464350110377720e0,
        5.46378491116411436990e0,
        1.78482653991729133580e0,
        2.96560571828504891230e-1,
        2.65321895265761230930e-2,
        1.24266094738807843860e-3,
        2.71155556874348757815e-5,
        2.01033439929228813265e-7,
    ];
    const F: [f64; 8] = [
        1.0,
        5.99832206555887937690e-1,
        1.36929880922735805310e-1,
        1.48753612908506148525e-2,
        7.86869131145613259100e-4,
        1.84631831751005468180e-5,
        1.42151175831644588870e-7,
        2.04426310338993978564e-15,
    ];
    let poly = |coef: &[f64; 8], x: f64| coef.iter().rev().fold(0.0, |acc, &c| acc * x + c);

    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return Ok(q * poly(&A, r) / poly(&B, r));
    }
    let r = if q < 0.0 { p } else { 1.0 - p };
    let mut r = (-r.ln()).sqrt();
    let value = if r <= 5.0 {
        r -= 1.6;
        poly(&C, r) / poly(&D, r)
    } else {
        r -= 5.0;
        poly(&E, r) / poly(&F, r)
    };
    Ok(if q < 0.0 { -value } else { value })
}

/// Normal confidence interval for an index estimate at the given level,
/// truncated to [0, 1].
pub fn normal_ci(
    estimate: &IndexEstimate,
    sigma2: &VarianceResult,
    level: f64,
) -> Result<(f64, f64)> {
    if estimate.n == 0 {
        return Err(Error::invalid(
            "estimate",
            "confidence intervals need a sample-based estimate (n > 0)",
        ));
    }
    require_prob_open("level", level)?;
    let z = standard_normal_quantile((1.0 + level) / 2.0)?;
    let half_width = z * (sigma2.value / estimate.n as f64).sqrt();
    Ok((
        (estimate.value - half_width).max(0.0),
        (estimate.value + half_width).min(1.0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indices::{EstimationMethod, IndexKind};

    fn dagum(sigma: f64, a: f64, b: f64) -> ParametricDistribution {
        ParametricDistribution::dagum(sigma, a, b).unwrap()
    }

    fn pareto(xm: f64, alpha: f64) -> ParametricDistribution {
        ParametricDistribution::pareto(xm, alpha).unwrap()
    }

    #[test]
    fn weights_are_positive() {
        for dist in [dagum(1.0, 2.0, 1.0), dagum(1.0, 0.5, 0.5), pareto(1.0, 2.0)] {
            for p in [0.01, 0.2, 0.5, 0.8, 0.99] {
                let (a, b, c, d) = weight_functions(&dist, p).unwrap();
                assert!(a > 0.0 && b > 0.0 && c > 0.0 && d > 0.0, "{dist} at {p}");
            }
        }
    }

    #[test]
    fn pareto_one_minus_qz_factor() {
        // For Pareto(1, 2) at p = 1/2: 1 - qZ = Q(1/4)/Q(3/4) = (1/3)^(1/2).
        let dist = pareto(1.0, 2.0);
        let qz = q_curve((&dist).into(), CurveKind::QZ, 0.5).unwrap();
        assert!((1.0 - qz - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn quantile_derivative_matches_finite_differences() {
        let h = 1e-6;
        for dist in [dagum(1.0, 2.0, 1.0), dagum(1.0, 0.8, 1.5), pareto(1.0, 2.0)] {
            for p in [0.2, 0.5, 0.8] {
                let numeric =
                    (dist.quantile(p + h).unwrap() - dist.quantile(p - h).unwrap()) / (2.0 * h);
                let analytic = 1.0 / dist.density(dist.quantile(p).unwrap()).unwrap();
                assert!(
                    (numeric - analytic).abs() / analytic < 1e-5,
                    "{dist} at {p}: {numeric} vs {analytic}"
                );
            }
        }
    }

    #[test]
    fn triangles_agree_by_symmetry() {
        let quad = QuadratureSpec::default();
        let dist = dagum(1.0, 2.0, 1.0);
        for kind in [VarianceKind::Z, VarianceKind::D] {
            let (lower, upper) = sigma2_triangles(&dist, kind, &quad).unwrap();
            assert!(
                (lower - upper).abs() < 1e-8,
                "{kind}: lower {lower} vs upper {upper}"
            );
        }
    }

    #[test]
    fn variance_nonnegative_and_scale_invariant() {
        let quad = QuadratureSpec::default();
        let reference = sigma2_z(&dagum(1.0, 2.0, 1.0), &quad).unwrap().value;
        assert!(reference > 0.0);
        for sigma in [0.5, 2.0] {
            let v = sigma2_z(&dagum(sigma, 2.0, 1.0), &quad).unwrap().value;
            assert!(
                (v - reference).abs() < 1e-8,
                "sigma = {sigma}: {v} vs {reference}"
            );
        }
    }

    #[test]
    fn variance_peaks_at_interior_index_values() {
        // Over the Dagum(1, a, 1) family the index runs from near 1
        // (a = 0.5) to near 0 (large a); both variances fall off toward the
        // ends of that range and peak in the interior.
        let quad = QuadratureSpec::new(1e-7, 2000).unwrap();
        let at = |a: f64, kind: VarianceKind| {
            sigma2(&dagum(1.0, a, 1.0), kind, &quad, DEFAULT_TRUNCATION)
                .unwrap()
                .value
        };
        for kind in [VarianceKind::Z, VarianceKind::D] {
            let low = at(0.5, kind);
            let peak = at(2.0, kind);
            let high = at(10.0, kind);
            assert!(low < peak && high < peak, "{kind}: {low} / {peak} / {high}");
        }
    }

    #[test]
    fn near_degenerate_index_has_smaller_variance() {
        // qZI is 0.9932 at a = 0.5 and 0.7344 at a = 2 (b = 1); the closer
        // the index sits to the ends of [0, 1] the smaller the variance.
        let quad = QuadratureSpec::default();
        let at_half = sigma2_z(&dagum(1.0, 0.5, 1.0), &quad).unwrap().value;
        let at_two = sigma2_z(&dagum(1.0, 2.0, 1.0), &quad).unwrap().value;
        assert!(at_half < at_two, "{at_half} vs {at_two}");
    }

    #[test]
    fn normal_quantile_reference_values() {
        // scipy.stats.norm.ppf oracles.
        let cases = [
            (0.5, 0.0),
            (0.975, 1.959963984540054),
            (0.995, 2.5758293035489004),
            (0.9995, 3.2905267314919255),
            (0.025, -1.959963984540054),
            (1e-10, -6.361340902404056),
            (0.6, 0.2533471031357997),
        ];
        for (p, want) in cases {
            let got = standard_normal_quantile(p).unwrap();
            assert!(
                (got - want).abs() <= 1e-13 * (1.0 + want.abs()),
                "ppf({p}) = {got}, want {want}"
            );
        }
        assert!(standard_normal_quantile(0.0).is_err());
    }

    #[test]
    fn confidence_interval_arithmetic() {
        let estimate = IndexEstimate {
            kind: IndexKind::QZI,
            value: 0.5,
            scheme: Some(crate::quantile::QuantileScheme::E),
            method: EstimationMethod::ClosedForm,
            n: 100,
            std_error: None,
        };
        let quad = QuadratureSpec::default();
        let sigma2 = VarianceResult {
            kind: VarianceKind::Z,
            value: 0.04,
            dist: dagum(1.0, 2.0, 1.0),
            quad,
        };
        let (lo, hi) = normal_ci(&estimate, &sigma2, 0.95).unwrap();
        let half = (hi - lo) / 2.0;
        assert!((half - 0.0392).abs() < 1e-4, "half width {half}");

        // Zero variance collapses the interval.
        let zero = VarianceResult {
            value: 0.0,
            ..sigma2.clone()
        };
        let (lo, hi) = normal_ci(&estimate, &zero, 0.95).unwrap();
        assert_eq!((lo, hi), (0.5, 0.5));

        // Truncation to the unit interval.
        let wide = VarianceResult {
            value: 25.0,
            ..sigma2.clone()
        };
        let near_one = IndexEstimate {
            value: 0.99,
            ..estimate.clone()
        };
        let (lo, hi) = normal_ci(&near_one, &wide, 0.95).unwrap();
        assert_eq!(hi, 1.0);
        assert!((lo - 0.01).abs() < 1e-4, "lo = {lo}");

        // Exact estimates (n = 0) have no sampling interval.
        let exact = IndexEstimate {
            n: 0,
            ..estimate.clone()
        };
        assert!(normal_ci(&exact, &sigma2, 0.95).is_err());
        assert!(normal_ci(&estimate, &sigma2, 1.0).is_err());
    }
}
