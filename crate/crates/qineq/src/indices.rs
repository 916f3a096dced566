//! Scalar inequality indices.
//!
//! Exact values for parametric distributions come from adaptive quadrature of
//! the corresponding curve. Sample estimates of qZI and qDI have two routes:
//! the plug-in curves are ratios of piecewise-linear functions of p, so they
//! integrate analytically piece by piece (the closed form used everywhere by
//! default), and a quadrature route over the same plug-in curve serves as an
//! independent numerical cross-check. A Monte Carlo oracle evaluates the
//! expectation representations of qZI and qDI directly.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Serialize, Serializer};

use crate::curves::{classical_curve, q_curve, CurveKind, QuantileSource};
use crate::distributions::ParametricDistribution;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_with_breakpoints, QuadratureSpec};
use crate::quantile::{QuantileEstimate, QuantileScheme, Sample};

/// Scalar index families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum IndexKind {
    /// Quantile Zenga index, the integral of qZ.
    #[serde(rename = "qZI")]
    QZI,
    /// Quantile D index, the integral of qD.
    #[serde(rename = "qDI")]
    QDI,
    /// Quantile Gini index over L1.
    G1,
    /// Quantile Gini index over L2.
    G2,
    /// Quantile Gini index over L3.
    G3,
    /// Classical Gini index.
    GI,
    /// Classical Bonferroni index.
    BI,
    /// Classical Zenga-07 index.
    ZI,
    /// Classical D index.
    DI,
}

impl IndexKind {
    pub const QUANTILE_KINDS: [IndexKind; 5] = [
        IndexKind::QZI,
        IndexKind::QDI,
        IndexKind::G1,
        IndexKind::G2,
        IndexKind::G3,
    ];

    pub const CLASSICAL_KINDS: [IndexKind; 4] =
        [IndexKind::GI, IndexKind::BI, IndexKind::ZI, IndexKind::DI];

    pub fn is_classical(self) -> bool {
        matches!(
            self,
            IndexKind::GI | IndexKind::BI | IndexKind::ZI | IndexKind::DI
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            IndexKind::QZI => "qZI",
            IndexKind::QDI => "qDI",
            IndexKind::G1 => "G1",
            IndexKind::G2 => "G2",
            IndexKind::G3 => "G3",
            IndexKind::GI => "GI",
            IndexKind::BI => "BI",
            IndexKind::ZI => "ZI",
            IndexKind::DI => "DI",
        }
    }
}

impl std::fmt::Display for IndexKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for IndexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qZI" => Ok(IndexKind::QZI),
            "qDI" => Ok(IndexKind::QDI),
            "G1" => Ok(IndexKind::G1),
            "G2" => Ok(IndexKind::G2),
            "G3" => Ok(IndexKind::G3),
            "GI" => Ok(IndexKind::GI),
            "BI" => Ok(IndexKind::BI),
            "ZI" => Ok(IndexKind::ZI),
            "DI" => Ok(IndexKind::DI),
            other => Err(Error::Parse(format!("unknown index kind `{other}`"))),
        }
    }
}

/// How an [`IndexEstimate`] was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimationMethod {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

fn serialize_scheme<S: Serializer>(
    scheme: &Option<QuantileScheme>,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    match scheme {
        Some(s) => ser.serialize_str(s.name()),
        None => ser.serialize_str("exact"),
    }
}

/// An index value together with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexEstimate {
    pub kind: IndexKind,
    pub value: f64,
    /// Estimator scheme; `None` serializes as `"exact"`.
    #[serde(serialize_with = "serialize_scheme")]
    pub scheme: Option<QuantileScheme>,
    pub method: EstimationMethod,
    /// Sample size, 0 for exact and Monte Carlo values.
    pub n: usize,
    /// Standard error of the Monte Carlo mean, when applicable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
}

// Indices live in [0, 1]; tolerate quadrature noise just past the ends.
fn finalize_unit(kind: IndexKind, value: f64) -> Result<f64> {
    if !value.is_finite() || !(-1e-9..=1.0 + 1e-9).contains(&value) {
        return Err(Error::Numerical(format!(
            "{kind} evaluated to {value}, outside [0, 1]"
        )));
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Exact index of a parametric distribution by quadrature of its curve.
pub fn index_exact(
    dist: &ParametricDistribution,
    kind: IndexKind,
    quad: &QuadratureSpec,
) -> Result<IndexEstimate> {
    if kind.is_classical() {
        dist.mean()?;
    }
    let src = QuantileSource::Distribution(dist);
    let value = match kind {
        IndexKind::QZI => integrate(
            |p| q_curve(src, CurveKind::QZ, p).unwrap_or(f64::NAN),
            0.0,
            1.0,
            quad,
        )?,
        IndexKind::QDI => integrate(
            |p| q_curve(src, CurveKind::QD, p).unwrap_or(f64::NAN),
            0.0,
            1.0,
            quad,
        )?,
        IndexKind::G1 | IndexKind::G2 | IndexKind::G3 => {
            let curve = match kind {
                IndexKind::G1 => CurveKind::L1,
                IndexKind::G2 => CurveKind::L2,
                _ => CurveKind::L3,
            };
            integrate(
                |p| 2.0 * (p - q_curve(src, curve, p).unwrap_or(f64::NAN)),
                0.0,
                1.0,
                quad,
            )?
        }
        IndexKind::GI => integrate(
            |p| 2.0 * (p - classical_curve(dist, CurveKind::L, p, quad).unwrap_or(f64::NAN)),
            0.0,
            1.0,
            quad,
        )?,
        IndexKind::BI => {
            1.0 - integrate(
                |p| classical_curve(dist, CurveKind::B, p, quad).unwrap_or(f64::NAN),
                0.0,
                1.0,
                quad,
            )?
        }
        IndexKind::ZI => integrate(
            |p| classical_curve(dist, CurveKind::Z, p, quad).unwrap_or(f64::NAN),
            0.0,
            1.0,
            quad,
        )?,
        IndexKind::DI => integrate(
            |p| classical_curve(dist, CurveKind::D, p, quad).unwrap_or(f64::NAN),
            0.0,
            1.0,
            quad,
        )?,
    };
    Ok(IndexEstimate {
        kind,
        value: finalize_unit(kind, value)?,
        scheme: None,
        method: EstimationMethod::Quadrature,
        n: 0,
        std_error: None,
    })
}

/// Classical index of a finite-mean distribution (GI, BI, ZI, DI).
pub fn classical_index(
    dist: &ParametricDistribution,
    kind: IndexKind,
    quad: &QuadratureSpec,
) -> Result<IndexEstimate> {
    if !kind.is_classical() {
        return Err(Error::invalid(
            "kind",
            format!("{kind} is not a classical index"),
        ));
    }
    index_exact(dist, kind, quad)
}

// ln(1 + r)/r, the mean of 1/D over a piece relative to 1/D(l).
fn g1(rho: f64) -> f64 {
    if rho == 0.0 {
        1.0
    } else {
        rho.ln_1p() / rho
    }
}

// (r - ln(1 + r))/r^2; series below |r| = 0.01 where the direct form
// cancels catastrophically.
fn g2(rho: f64) -> f64 {
    if rho.abs() < 0.01 {
        let mut acc = 0.0;
        // 1/2 - r/3 + r^2/4 - ... + r^6/8
        for k in (2..=8u32).rev() {
            acc = 1.0 / k as f64 - rho * acc;
        }
        acc
    } else {
        (rho - rho.ln_1p()) / (rho * rho)
    }
}

// Interpolation knots of the estimator in the quantile argument u: the
// plotting positions, or the EDF jump locations k/n for scheme E.
fn scheme_knots(est: &QuantileEstimate) -> Vec<f64> {
    match est.scheme() {
        QuantileScheme::E => {
            let n = est.sample().len();
            (1..n).map(|k| k as f64 / n as f64).collect()
        }
        _ => est.knots().map(|(p, _)| p).collect(),
    }
}

/// Breakpoints in p at which the plug-in curve of `kind` can kink: images of
/// the estimator knots under u = p/2 and under the denominator argument.
fn plugin_breakpoints(est: &QuantileEstimate, kind: IndexKind) -> Result<Vec<f64>> {
    let knots = scheme_knots(est);
    let mut edges: Vec<f64> = Vec::with_capacity(2 * knots.len() + 2);
    for &u in &knots {
        let from_num = 2.0 * u;
        if from_num > 0.0 && from_num < 1.0 {
            edges.push(from_num);
        }
        let from_den = match kind {
            IndexKind::QZI => 2.0 * u - 1.0,
            IndexKind::QDI => 2.0 - 2.0 * u,
            _ => return Err(Error::invalid("kind", "expected qZI or qDI")),
        };
        if from_den > 0.0 && from_den < 1.0 {
            edges.push(from_den);
        }
    }
    edges.push(0.0);
    edges.push(1.0);
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    Ok(edges)
}

/// Analytic integral of the plug-in qZ or qD curve of `est` over (0, 1).
///
/// Between consecutive breakpoints both quantile arguments are linear in p
/// (constant for scheme E), so the integrand 1 - N(p)/D(p) has the explicit
/// antiderivative of a Moebius ratio on each piece. The piece integral is
/// computed in the cancellation-free form
/// `w * [ (M_l/D_l) g1(rho) + (dM/D_l) g2(rho) ]` with M = D - N and
/// rho = dD/D_l, which degrades gracefully to the constant-denominator and
/// linear-through-zero cases.
pub fn closed_form_index(est: &QuantileEstimate, kind: IndexKind) -> Result<f64> {
    if !matches!(kind, IndexKind::QZI | IndexKind::QDI) {
        return Err(Error::invalid(
            "kind",
            format!("closed form exists for qZI and qDI only, not {kind}"),
        ));
    }
    if !est.sample().has_positive() {
        return Err(Error::DegenerateSample("all observations are zero".into()));
    }

    let x = est.sample().values();
    let n = x.len();
    // Clamped evaluation that tolerates boundary arguments.
    let qhat = |u: f64| -> Result<f64> {
        if u <= 0.0 {
            Ok(x[0])
        } else if u >= 1.0 {
            Ok(x[n - 1])
        } else {
            est.quantile_at(u)
        }
    };
    let den_arg = |p: f64| match kind {
        IndexKind::QZI => (1.0 + p) / 2.0,
        _ => 1.0 - p / 2.0,
    };

    let edges = plugin_breakpoints(est, kind)?;
    let mut total = 0.0;
    for pair in edges.windows(2) {
        let (l, r) = (pair[0], pair[1]);
        let w = r - l;
        if w <= 0.0 {
            continue;
        }
        let piece = if est.scheme() == QuantileScheme::E {
            // Both arguments sit inside one EDF step: constants.
            let mid = 0.5 * (l + r);
            let num = qhat(mid / 2.0)?;
            let den = qhat(den_arg(mid))?;
            if den <= 0.0 {
                return Err(Error::DegenerateSample(format!(
                    "denominator quantile is zero on ({l}, {r})"
                )));
            }
            w * ((den - num) / den)
        } else {
            let (n_l, n_r) = (qhat(l / 2.0)?, qhat(r / 2.0)?);
            let (d_l, d_r) = (qhat(den_arg(l))?, qhat(den_arg(r))?);
            let (dn, dd) = (n_r - n_l, d_r - d_l);
            if d_l <= 0.0 && d_r <= 0.0 {
                return Err(Error::DegenerateSample(format!(
                    "denominator quantile is zero on ({l}, {r})"
                )));
            }
            if d_l <= 0.0 {
                // N and D both rise linearly from zero: constant ratio dn/dd.
                w * (1.0 - dn / dd)
            } else if d_r <= 0.0 {
                // Both vanish at r: constant ratio N_l/D_l.
                w * (1.0 - n_l / d_l)
            } else {
                let (m_l, dm) = (d_l - n_l, dd - dn);
                if dd == 0.0 {
                    w * (m_l + 0.5 * dm) / d_l
                } else {
                    let rho = dd / d_l;
                    w * ((m_l / d_l) * g1(rho) + (dm / d_l) * g2(rho))
                }
            }
        };
        total += piece;
    }
    finalize_unit(kind, total)
}

/// Plug-in estimate of qZI or qDI by the analytic piecewise integration.
pub fn index_estimate_closed_form(
    sample: &Sample,
    scheme: QuantileScheme,
    kind: IndexKind,
) -> Result<IndexEstimate> {
    let est = QuantileEstimate::new(sample.clone(), scheme);
    let value = closed_form_index(&est, kind)?;
    Ok(IndexEstimate {
        kind,
        value,
        scheme: Some(scheme),
        method: EstimationMethod::ClosedForm,
        n: sample.len(),
        std_error: None,
    })
}

/// Plug-in estimate by adaptive quadrature of the plug-in curve.
///
/// Supports qZI, qDI and the quantile Gini family G1-G3. The integrator is
/// seeded with the curve's kink locations and refines adaptively, so it
/// reaches quadrature accuracy even for the step-function curves of scheme E.
pub fn index_estimate_quadrature(
    sample: &Sample,
    scheme: QuantileScheme,
    kind: IndexKind,
    quad: &QuadratureSpec,
) -> Result<IndexEstimate> {
    if kind.is_classical() {
        return Err(Error::invalid(
            "kind",
            format!("{kind} is a classical index; sample estimation covers quantile kinds"),
        ));
    }
    if !sample.has_positive() {
        return Err(Error::DegenerateSample("all observations are zero".into()));
    }
    let est = QuantileEstimate::new(sample.clone(), scheme);
    let src = QuantileSource::Estimate(&est);

    let breakpoints = match kind {
        IndexKind::QZI | IndexKind::QDI => plugin_breakpoints(&est, kind)?,
        _ => {
            // L1-L3 involve Q(p/2), Q(1/2) and Q(1 - p/2).
            let mut edges: Vec<f64> = Vec::new();
            for u in scheme_knots(&est) {
                for t in [2.0 * u, 2.0 - 2.0 * u] {
                    if t > 0.0 && t < 1.0 {
                        edges.push(t);
                    }
                }
            }
            edges.sort_by(f64::total_cmp);
            edges.dedup();
            edges
        }
    };

    let value = match kind {
        IndexKind::QZI => integrate_with_breakpoints(
            |p| q_curve(src, CurveKind::QZ, p).unwrap_or(f64::NAN),
            0.0,
            1.0,
            &breakpoints,
            quad,
        )?,
        IndexKind::QDI => integrate_with_breakpoints(
            |p| q_curve(src, CurveKind::QD, p).unwrap_or(f64::NAN),
            0.0,
            1.0,
            &breakpoints,
            quad,
        )?,
        _ => {
            let curve = match kind {
                IndexKind::G1 => CurveKind::L1,
                IndexKind::G2 => CurveKind::L2,
                _ => CurveKind::L3,
            };
            integrate_with_breakpoints(
                |p| 2.0 * (p - q_curve(src, curve, p).unwrap_or(f64::NAN)),
                0.0,
                1.0,
                &breakpoints,
                quad,
            )?
        }
    };
    Ok(IndexEstimate {
        kind,
        value: finalize_unit(kind, value)?,
        scheme: Some(scheme),
        method: EstimationMethod::Quadrature,
        n: sample.len(),
        std_error: None,
    })
}

/// Monte Carlo evaluation of qZI or qDI from their expectation forms.
///
/// Draws r uniform on (0, 1/2) and averages (Y - X)/Y with X = Q(r) and
/// Y = Q(1/2 + r) for qZI, Y = Q(1 - r) for qDI.
pub fn mc_index_oracle(
    dist: &ParametricDistribution,
    kind: IndexKind,
    reps: usize,
    seed: u64,
) -> Result<IndexEstimate> {
    if !matches!(kind, IndexKind::QZI | IndexKind::QDI) {
        return Err(Error::invalid(
            "kind",
            format!("Monte Carlo oracle covers qZI and qDI, not {kind}"),
        ));
    }
    if reps == 0 {
        return Err(Error::invalid("reps", "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..reps {
        let u = ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0);
        let r = u / 2.0;
        let x = dist.quantile(r)?;
        let y = match kind {
            IndexKind::QZI => dist.quantile(0.5 + r)?,
            _ => dist.quantile(1.0 - r)?,
        };
        let value = (y - x) / y;
        let delta = value - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (value - mean);
    }
    let std_error = if reps > 1 {
        Some((m2 / (reps - 1) as f64 / reps as f64).sqrt())
    } else {
        None
    };
    Ok(IndexEstimate {
        kind,
        value: finalize_unit(kind, mean)?,
        scheme: None,
        method: EstimationMethod::MonteCarlo,
        n: 0,
        std_error,
    })
}
