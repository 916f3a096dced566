//! Inequality curves.
//!
//! Quantile-based curves (qZ, qD, qB, the three quantile Lorenz variants and
//! the symmetric quantile ratio R) are built purely from a quantile function,
//! so they evaluate on samples and on distributions alike, with or without a
//! finite mean. The classical curves (L, B, Z, D, M) integrate the quantile
//! function and are provided for finite-mean parametric distributions only.

use serde::{Deserialize, Serialize};

use crate::distributions::ParametricDistribution;
use crate::error::{require_prob_open, Error, Result};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::quantile::QuantileEstimate;

/// Where quantiles come from: a sample-based estimator or an exact
/// parametric quantile function.
#[derive(Debug, Clone, Copy)]
pub enum QuantileSource<'a> {
    Estimate(&'a QuantileEstimate),
    Distribution(&'a ParametricDistribution),
}

impl QuantileSource<'_> {
    pub fn quantile(&self, p: f64) -> Result<f64> {
        match self {
            QuantileSource::Estimate(est) => est.quantile_at(p),
            QuantileSource::Distribution(dist) => dist.quantile(p),
        }
    }
}

impl<'a> From<&'a QuantileEstimate> for QuantileSource<'a> {
    fn from(est: &'a QuantileEstimate) -> Self {
        QuantileSource::Estimate(est)
    }
}

impl<'a> From<&'a ParametricDistribution> for QuantileSource<'a> {
    fn from(dist: &'a ParametricDistribution) -> Self {
        QuantileSource::Distribution(dist)
    }
}

/// Every curve in the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveKind {
    /// Quantile Zenga curve: 1 - Q(p/2)/Q((1+p)/2).
    #[serde(rename = "qZ")]
    QZ,
    /// Quantile D curve: 1 - Q(p/2)/Q(1-p/2).
    #[serde(rename = "qD")]
    QD,
    /// Quantile Bonferroni curve: Q(p/2)/Q(1/2).
    #[serde(rename = "qB")]
    QB,
    /// Quantile Lorenz curve p Q(p/2)/Q(1/2).
    L1,
    /// Quantile Lorenz curve p Q(p/2)/Q(1-p/2).
    L2,
    /// Quantile Lorenz curve 2p Q(p/2)/(Q(p/2)+Q(1-p/2)).
    L3,
    /// Symmetric quantile ratio Q(p/2)/Q(1-p/2).
    R,
    /// Classical Lorenz curve.
    L,
    /// Classical Bonferroni curve L(p)/p.
    B,
    /// Zenga-07 curve.
    Z,
    /// The D curve 1 - L(p)/M(p).
    D,
    /// Upper income share M(p) = 1 - L(1-p).
    M,
}

impl CurveKind {
    pub const QUANTILE_KINDS: [CurveKind; 7] = [
        CurveKind::QZ,
        CurveKind::QD,
        CurveKind::QB,
        CurveKind::L1,
        CurveKind::L2,
        CurveKind::L3,
        CurveKind::R,
    ];

    pub const CLASSICAL_KINDS: [CurveKind; 5] = [
        CurveKind::L,
        CurveKind::B,
        CurveKind::Z,
        CurveKind::D,
        CurveKind::M,
    ];

    /// True for the quantile-based kinds that need no finite mean.
    pub fn is_quantile(self) -> bool {
        !self.is_classical()
    }

    pub fn is_classical(self) -> bool {
        matches!(
            self,
            CurveKind::L | CurveKind::B | CurveKind::Z | CurveKind::D | CurveKind::M
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            CurveKind::QZ => "qZ",
            CurveKind::QD => "qD",
            CurveKind::QB => "qB",
            CurveKind::L1 => "L1",
            CurveKind::L2 => "L2",
            CurveKind::L3 => "L3",
            CurveKind::R => "R",
            CurveKind::L => "L",
            CurveKind::B => "B",
            CurveKind::Z => "Z",
            CurveKind::D => "D",
            CurveKind::M => "M",
        }
    }
}

impl std::fmt::Display for CurveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qZ" => Ok(CurveKind::QZ),
            "qD" => Ok(CurveKind::QD),
            "qB" => Ok(CurveKind::QB),
            "L1" => Ok(CurveKind::L1),
            "L2" => Ok(CurveKind::L2),
            "L3" => Ok(CurveKind::L3),
            "R" => Ok(CurveKind::R),
            "L" => Ok(CurveKind::L),
            "B" => Ok(CurveKind::B),
            "Z" => Ok(CurveKind::Z),
            "D" => Ok(CurveKind::D),
            "M" => Ok(CurveKind::M),
            other => Err(Error::Parse(format!("unknown curve kind `{other}`"))),
        }
    }
}

/// Evaluate a quantile-based curve at `p`.
///
/// When the lower-group quantile is exactly zero against a positive
/// denominator, the curve takes its perfect-inequality value (1 for qZ/qD,
/// 0 for the rest); a zero denominator is a degenerate-sample error.
pub fn q_curve(src: QuantileSource<'_>, kind: CurveKind, p: f64) -> Result<f64> {
    if kind.is_classical() {
        return Err(Error::invalid(
            "kind",
            format!("{kind} is a classical curve; use classical_curve"),
        ));
    }
    require_prob_open("p", p)?;

    let num = src.quantile(p / 2.0)?;
    let ratio_to = |den: f64| -> Result<f64> {
        if den <= 0.0 {
            return Err(Error::DegenerateSample(format!(
                "zero denominator quantile evaluating {kind} at p = {p}"
            )));
        }
        Ok(num / den)
    };

    Ok(match kind {
        CurveKind::QZ => 1.0 - ratio_to(src.quantile((1.0 + p) / 2.0)?)?,
        CurveKind::QD => 1.0 - ratio_to(src.quantile(1.0 - p / 2.0)?)?,
        CurveKind::R => ratio_to(src.quantile(1.0 - p / 2.0)?)?,
        CurveKind::QB => ratio_to(src.quantile(0.5)?)?,
        CurveKind::L1 => p * ratio_to(src.quantile(0.5)?)?,
        CurveKind::L2 => p * ratio_to(src.quantile(1.0 - p / 2.0)?)?,
        CurveKind::L3 => {
            let upper = src.quantile(1.0 - p / 2.0)?;
            let den = num + upper;
            if den <= 0.0 {
                return Err(Error::DegenerateSample(format!(
                    "zero denominator quantile evaluating {kind} at p = {p}"
                )));
            }
            2.0 * p * num / den
        }
        _ => unreachable!(),
    })
}

/// Evaluate a classical curve of a finite-mean distribution at `p`.
pub fn classical_curve(
    dist: &ParametricDistribution,
    kind: CurveKind,
    p: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if !kind.is_classical() {
        return Err(Error::invalid(
            "kind",
            format!("{kind} is a quantile curve; use q_curve"),
        ));
    }
    require_prob_open("p", p)?;
    let mean = dist.mean()?;

    let lorenz = |p: f64| -> Result<f64> {
        Ok(integrate(|u| dist.quantile(u).unwrap_or(f64::NAN), 0.0, p, quad)? / mean)
    };

    Ok(match kind {
        CurveKind::L => lorenz(p)?,
        CurveKind::B => lorenz(p)? / p,
        CurveKind::M => 1.0 - lorenz(1.0 - p)?,
        CurveKind::Z => {
            let l = lorenz(p)?;
            1.0 - (l / p) * ((1.0 - p) / (1.0 - l))
        }
        CurveKind::D => {
            let l = lorenz(p)?;
            let m = 1.0 - lorenz(1.0 - p)?;
            1.0 - l / m
        }
        _ => unreachable!(),
    })
}

/// A curve evaluated on a probability grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveTable {
    pub kind: CurveKind,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl CurveTable {
    /// `(p, value)` rows.
    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.iter().copied().zip(self.values.iter().copied())
    }

    /// CSV with a `p,value` header; numbers are shortest round-trip doubles.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,value\n");
        for (p, v) in self.pairs() {
            out.push_str(&format!("{p},{v}\n"));
        }
        out
    }

    /// JSON array of `[p, value]` pairs.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.pairs().collect::<Vec<_>>()).expect("plain floats")
    }
}

/// The uniform interior grid used for curve export and MISE quadrature:
/// midpoints (j - 1/2)/len of `len` equal subintervals of (0, 1).
pub fn midpoint_grid(len: usize) -> Vec<f64> {
    (1..=len).map(|j| (j as f64 - 0.5) / len as f64).collect()
}

/// Evaluate `kind` on a strictly increasing grid in (0, 1).
///
/// `quad` is consulted only for classical kinds, which must come from a
/// finite-mean distribution source.
pub fn tabulate(
    src: QuantileSource<'_>,
    kind: CurveKind,
    grid: &[f64],
    quad: &QuadratureSpec,
) -> Result<CurveTable> {
    if grid.is_empty() {
        return Err(Error::invalid("grid", "must be non-empty"));
    }
    if !(grid[0] > 0.0 && grid[grid.len() - 1] < 1.0) {
        return Err(Error::invalid("grid", "must lie inside (0, 1)"));
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::invalid("grid", "must be strictly increasing"));
    }
    let values: Vec<f64> = if kind.is_classical() {
        let dist = match src {
            QuantileSource::Distribution(d) => d,
            QuantileSource::Estimate(_) => {
                return Err(Error::invalid(
                    "src",
                    "classical curves are defined here only for parametric sources",
                ))
            }
        };
        grid.iter()
            .map(|&p| classical_curve(dist, kind, p, quad))
            .collect::<Result<_>>()?
    } else {
        grid.iter()
            .map(|&p| q_curve(src, kind, p))
            .collect::<Result<_>>()?
    };
    Ok(CurveTable {
        kind,
        grid: grid.to_vec(),
        values,
    })
}
