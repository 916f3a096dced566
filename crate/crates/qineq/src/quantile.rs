//! Samples, plotting positions and sample-quantile estimators.
//!
//! Four estimators of the quantile function are provided: the left-continuous
//! inverse of the empirical distribution function (`E`) and three estimators
//! that interpolate linearly between plotting positions, after Hazen (`H`),
//! Hyndman-Fan (`HF`) and Weibull-Gumbel (`WG`). They reproduce the `quantile`
//! function of R's stats package with `type` 1, 5, 8 and 6 respectively,
//! bit for bit, including its fuzzed index arithmetic and tail clamping.

use serde::{Deserialize, Serialize};

use crate::error::{require_prob_open, Error, Result};

/// A validated, sorted sample of non-negative observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    zero_count: usize,
}

impl Sample {
    /// Validate and sort raw observations.
    ///
    /// Entries must be finite and non-negative and at least one observation
    /// is required. Zeros are accepted and counted.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSample("sample is empty".into()));
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidSample(format!(
                    "entry {i} is not finite ({v})"
                )));
            }
            if v < 0.0 {
                return Err(Error::InvalidSample(format!("entry {i} is negative ({v})")));
            }
        }
        values.sort_by(f64::total_cmp);
        let zero_count = values.iter().take_while(|&&v| v == 0.0).count();
        Ok(Sample { values, zero_count })
    }

    /// Observations in non-decreasing order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction
    }

    /// Number of exact zeros in the sample.
    pub fn zero_count(&self) -> usize {
        self.zero_count
    }

    /// Whether the sample carries at least one strictly positive entry,
    /// required by all curve and index operations.
    pub fn has_positive(&self) -> bool {
        self.zero_count < self.values.len()
    }

    /// Sample with every observation multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::invalid("c", "scale factor must be positive"));
        }
        Sample::new(self.values.iter().map(|v| c * v).collect())
    }

    /// Empirical distribution function at `t`: the fraction of observations
    /// not exceeding `t`.
    pub fn edf(&self, t: f64) -> Result<f64> {
        if t.is_nan() {
            return Err(Error::invalid("t", "must not be NaN"));
        }
        let count = self.values.partition_point(|&v| v <= t);
        Ok(count as f64 / self.values.len() as f64)
    }
}

/// Quantile estimator family.
///
/// `E` is the empirical quantile (R type 1); `H`, `WG` and `HF` interpolate
/// between the Hazen, Weibull-Gumbel and Hyndman-Fan plotting positions
/// (R types 5, 6 and 8).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuantileScheme {
    E,
    H,
    HF,
    WG,
}

impl QuantileScheme {
    pub const ALL: [QuantileScheme; 4] = [
        QuantileScheme::E,
        QuantileScheme::H,
        QuantileScheme::WG,
        QuantileScheme::HF,
    ];

    /// The corresponding `type` argument of R's `quantile`.
    pub fn r_type(self) -> u8 {
        match self {
            QuantileScheme::E => 1,
            QuantileScheme::H => 5,
            QuantileScheme::WG => 6,
            QuantileScheme::HF => 8,
        }
    }

    pub fn from_r_type(t: u8) -> Result<Self> {
        match t {
            1 => Ok(QuantileScheme::E),
            5 => Ok(QuantileScheme::H),
            6 => Ok(QuantileScheme::WG),
            8 => Ok(QuantileScheme::HF),
            _ => Err(Error::Parse(format!("unsupported quantile type {t}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QuantileScheme::E => "E",
            QuantileScheme::H => "H",
            QuantileScheme::HF => "HF",
            QuantileScheme::WG => "WG",
        }
    }

    // Plotting-position offsets: p_k solves a + p_k (n + 1 - a - b) = k.
    fn offsets(self) -> Option<(f64, f64)> {
        match self {
            QuantileScheme::E => None,
            QuantileScheme::H => Some((0.5, 0.5)),
            QuantileScheme::WG => Some((0.0, 0.0)),
            QuantileScheme::HF => Some((1.0 / 3.0, 1.0 / 3.0)),
        }
    }
}

impl std::fmt::Display for QuantileScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for QuantileScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E" => Ok(QuantileScheme::E),
            "H" => Ok(QuantileScheme::H),
            "HF" => Ok(QuantileScheme::HF),
            "WG" => Ok(QuantileScheme::WG),
            other => Err(Error::Parse(format!(
                "unknown quantile scheme `{other}` (expected E, H, HF or WG)"
            ))),
        }
    }
}

/// Plotting positions `p_1 < ... < p_n` for an interpolated scheme.
///
/// H: (k - 1/2)/n, HF: (k - 1/3)/(n + 1/3), WG: k/(n + 1).
pub fn plotting_positions(scheme: QuantileScheme, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("n", "must be at least 1"));
    }
    let nf = n as f64;
    let positions = match scheme {
        QuantileScheme::E => {
            return Err(Error::invalid(
                "scheme",
                "the empirical scheme E has no plotting positions",
            ))
        }
        QuantileScheme::H => (1..=n).map(|k| (k as f64 - 0.5) / nf).collect(),
        QuantileScheme::HF => (1..=n)
            .map(|k| (k as f64 - 1.0 / 3.0) / (nf + 1.0 / 3.0))
            .collect(),
        QuantileScheme::WG => (1..=n).map(|k| k as f64 / (nf + 1.0)).collect(),
    };
    Ok(positions)
}

/// A sample paired with a quantile scheme, ready for repeated evaluation.
///
/// Immutable after construction and shareable across threads.
#[derive(Debug, Clone)]
pub struct QuantileEstimate {
    sample: Sample,
    scheme: QuantileScheme,
    /// Plotting positions of the order statistics; empty for scheme `E`.
    knots: Vec<f64>,
}

impl QuantileEstimate {
    pub fn new(sample: Sample, scheme: QuantileScheme) -> Self {
        let knots = match scheme {
            QuantileScheme::E => Vec::new(),
            _ => plotting_positions(scheme, sample.len()).expect("non-empty sample"),
        };
        QuantileEstimate {
            sample,
            scheme,
            knots,
        }
    }

    pub fn sample(&self) -> &Sample {
        &self.sample
    }

    pub fn scheme(&self) -> QuantileScheme {
        self.scheme
    }

    /// `(p_k, X_{k:n})` interpolation knots; empty for scheme `E`.
    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.knots
            .iter()
            .copied()
            .zip(self.sample.values.iter().copied())
    }

    /// Evaluate the quantile estimator at `p`.
    ///
    /// Matches R's `quantile(x, p, type = 1 | 5 | 6 | 8)` exactly on double
    /// precision inputs, including the `4 * eps` fuzz applied to the
    /// fractional index and the clamping to the extreme order statistics
    /// outside the plotting-position range.
    pub fn quantile_at(&self, p: f64) -> Result<f64> {
        require_prob_open("p", p)?;
        let x = &self.sample.values;
        let n = x.len();
        let nf = n as f64;

        match self.scheme.offsets() {
            None => {
                // Type 1: left-continuous inverse of the EDF.
                let nppm = nf * p;
                let j = nppm.floor();
                let idx = if nppm > j { j as usize + 1 } else { j as usize };
                Ok(x[idx.clamp(1, n) - 1])
            }
            Some((a, b)) => {
                let fuzz = 4.0 * f64::EPSILON;
                let nppm = a + p * (nf + 1.0 - a - b);
                let j = (nppm + fuzz).floor();
                let mut h = nppm - j;
                if h.abs() < fuzz {
                    h = 0.0;
                }
                let j = j as i64;
                let lo = x[(j.clamp(1, n as i64) - 1) as usize];
                let hi = x[((j + 1).clamp(1, n as i64) - 1) as usize];
                if h == 0.0 || lo == hi {
                    Ok(lo)
                } else {
                    Ok((1.0 - h) * lo + h * hi)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(v: &[f64]) -> Sample {
        Sample::new(v.to_vec()).unwrap()
    }

    #[test]
    fn sample_validation() {
        assert!(Sample::new(vec![]).is_err());
        assert!(Sample::new(vec![1.0, f64::NAN]).is_err());
        assert!(Sample::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(Sample::new(vec![-0.5, 1.0]).is_err());
        let s = sample(&[3.0, 0.0, 1.0, 0.0]);
        assert_eq!(s.values(), &[0.0, 0.0, 1.0, 3.0]);
        assert_eq!(s.zero_count(), 2);
        assert!(s.has_positive());
        assert!(!sample(&[0.0, 0.0]).has_positive());
    }

    #[test]
    fn edf_counts() {
        let s = sample(&[1.0, 2.0, 3.0]);
        assert_eq!(s.edf(2.0).unwrap(), 2.0 / 3.0);
        assert_eq!(s.edf(0.5).unwrap(), 0.0);
        assert_eq!(s.edf(3.0).unwrap(), 1.0);
        assert_eq!(s.edf(10.0).unwrap(), 1.0);
        assert!(s.edf(f64::NAN).is_err());
    }

    #[test]
    fn plotting_position_formulas() {
        assert_eq!(
            plotting_positions(QuantileScheme::H, 4).unwrap(),
            vec![0.125, 0.375, 0.625, 0.875]
        );
        assert_eq!(
            plotting_positions(QuantileScheme::WG, 4).unwrap(),
            vec![0.2, 0.4, 0.6, 0.8]
        );
        let hf = plotting_positions(QuantileScheme::HF, 2).unwrap();
        assert!((hf[0] - 2.0 / 7.0).abs() < 1e-15);
        assert!((hf[1] - 5.0 / 7.0).abs() < 1e-15);
        assert!(plotting_positions(QuantileScheme::E, 4).is_err());
        assert!(plotting_positions(QuantileScheme::H, 0).is_err());
    }

    #[test]
    fn plotting_positions_strictly_increasing_in_unit_interval() {
        for scheme in [QuantileScheme::H, QuantileScheme::HF, QuantileScheme::WG] {
            for n in [1usize, 2, 7, 100, 1000] {
                let pp = plotting_positions(scheme, n).unwrap();
                assert!(pp[0] > 0.0 && pp[n - 1] < 1.0);
                assert!(pp.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn empirical_quantile_is_order_statistic() {
        let est = QuantileEstimate::new(sample(&[1.0, 2.0, 3.0]), QuantileScheme::E);
        assert_eq!(est.quantile_at(0.5).unwrap(), 2.0); // ceil(1.5) = 2nd
        assert_eq!(est.quantile_at(1.0 / 3.0).unwrap(), 1.0); // exactly k/n
        assert_eq!(est.quantile_at(0.34).unwrap(), 2.0);
        assert_eq!(est.quantile_at(0.999).unwrap(), 3.0);
        assert_eq!(est.quantile_at(0.001).unwrap(), 1.0);
    }

    #[test]
    fn hazen_interpolates_between_knots() {
        // Knots at (0.375, 2) and (0.625, 3): p = 0.5 lands midway.
        let est = QuantileEstimate::new(sample(&[1.0, 2.0, 3.0, 4.0]), QuantileScheme::H);
        assert_eq!(est.quantile_at(0.5).unwrap(), 2.5);
    }

    #[test]
    fn weibull_clamps_outside_plotting_range() {
        let est = QuantileEstimate::new(sample(&[10.0, 20.0]), QuantileScheme::WG);
        assert_eq!(est.quantile_at(0.9).unwrap(), 20.0); // above p_2 = 2/3
        assert_eq!(est.quantile_at(0.05).unwrap(), 10.0); // below p_1 = 1/3
    }

    #[test]
    fn evaluation_at_knots_recovers_order_statistics() {
        // The fuzzed index arithmetic (same as R's) recovers X_{k:n} at the
        // plotting positions up to interpolation noise of a few ulps; with
        // n + 1 a power of two the WG positions are exact and so is the
        // recovery.
        let values = [0.7, 1.3, 2.9, 4.2, 8.8, 9.1, 12.0];
        for scheme in [QuantileScheme::H, QuantileScheme::HF, QuantileScheme::WG] {
            let est = QuantileEstimate::new(sample(&values), scheme);
            for (pk, xk) in est.knots() {
                let v = est.quantile_at(pk).unwrap();
                assert!(
                    (v - xk).abs() <= 64.0 * f64::EPSILON * xk,
                    "{scheme} at {pk}"
                );
            }
        }
        let est = QuantileEstimate::new(sample(&values), QuantileScheme::WG);
        for (pk, xk) in est.knots() {
            assert_eq!(est.quantile_at(pk).unwrap(), xk);
        }
    }

    #[test]
    fn ties_collapse_interpolation() {
        let est = QuantileEstimate::new(sample(&[1.0, 5.0, 5.0, 9.0]), QuantileScheme::WG);
        // Between the tied knots the estimator is constant.
        assert_eq!(est.quantile_at(0.5).unwrap(), 5.0);
    }

    #[test]
    fn rejects_p_outside_open_interval() {
        let est = QuantileEstimate::new(sample(&[1.0, 2.0]), QuantileScheme::H);
        for p in [0.0, 1.0, -0.3, 1.5, f64::NAN] {
            assert!(est.quantile_at(p).is_err(), "p = {p}");
        }
    }
}
