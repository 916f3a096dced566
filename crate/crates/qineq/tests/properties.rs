//! Cross-module statistical properties: estimator monotonicity and
//! equivariance, plug-in consistency in n, and the three-way agreement of
//! exact quadrature, Monte Carlo expectation and large-sample estimates.

use proptest::prelude::*;

use qineq::asymptotics::{sigma2_d, sigma2_z};
use qineq::curves::{q_curve, CurveKind, QuantileSource};
use qineq::indices::{index_estimate_closed_form, index_exact, mc_index_oracle, IndexKind};
use qineq::{ParametricDistribution, QuadratureSpec, QuantileEstimate, QuantileScheme, Sample};

fn dagum(sigma: f64, a: f64, b: f64) -> ParametricDistribution {
    ParametricDistribution::dagum(sigma, a, b).unwrap()
}

fn scheme_of(idx: usize) -> QuantileScheme {
    QuantileScheme::ALL[idx % 4]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quantile_estimators_monotone_on_dense_grid(
        values in prop::collection::vec(0.0f64..1e6, 1..60),
        scheme_idx in 0usize..4,
    ) {
        let est = QuantileEstimate::new(Sample::new(values).unwrap(), scheme_of(scheme_idx));
        let mut prev = f64::NEG_INFINITY;
        for k in 1..1000 {
            let v = est.quantile_at(k as f64 / 1000.0).unwrap();
            prop_assert!(v >= prev, "decreased at k = {k}: {v} < {prev}");
            prev = v;
        }
    }

    #[test]
    fn quantile_estimators_affine_equivariant(
        values in prop::collection::vec(0.0f64..1e3, 2..40),
        scheme_idx in 0usize..4,
        c in 0.5f64..20.0,
        d in 0.0f64..50.0,
        p in 0.001f64..0.999,
    ) {
        let scheme = scheme_of(scheme_idx);
        let base = QuantileEstimate::new(Sample::new(values.clone()).unwrap(), scheme);
        let mapped = QuantileEstimate::new(
            Sample::new(values.iter().map(|v| c * v + d).collect()).unwrap(),
            scheme,
        );
        let left = mapped.quantile_at(p).unwrap();
        let right = c * base.quantile_at(p).unwrap() + d;
        let scale = right.abs().max(1.0);
        prop_assert!((left - right).abs() <= 1e-12 * scale, "{left} vs {right}");
    }

    #[test]
    fn index_estimates_scale_invariant_for_power_of_two(
        values in prop::collection::vec(0.01f64..1e4, 3..40),
        scheme_idx in 0usize..4,
        pow in -3i32..6,
    ) {
        let scheme = scheme_of(scheme_idx);
        let sample = Sample::new(values).unwrap();
        let scaled = sample.scaled(2.0f64.powi(pow)).unwrap();
        for kind in [IndexKind::QZI, IndexKind::QDI] {
            let a = index_estimate_closed_form(&sample, scheme, kind).unwrap().value;
            let b = index_estimate_closed_form(&scaled, scheme, kind).unwrap().value;
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn index_estimates_scale_invariant_for_general_factors(
        values in prop::collection::vec(0.01f64..1e4, 3..40),
        scheme_idx in 0usize..4,
        c in 0.3f64..30.0,
    ) {
        let scheme = scheme_of(scheme_idx);
        let sample = Sample::new(values).unwrap();
        let scaled = sample.scaled(c).unwrap();
        for kind in [IndexKind::QZI, IndexKind::QDI] {
            let a = index_estimate_closed_form(&sample, scheme, kind).unwrap().value;
            let b = index_estimate_closed_form(&scaled, scheme, kind).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-12, "{a} vs {b} under c = {c}");
        }
    }

    #[test]
    fn qz_qd_curves_stay_in_unit_interval(
        values in prop::collection::vec(0.0f64..1e6, 2..50),
        scheme_idx in 0usize..4,
        p in 0.001f64..0.999,
    ) {
        let sample = Sample::new(values).unwrap();
        prop_assume!(sample.zero_count() * 2 < sample.len());
        let est = QuantileEstimate::new(sample, scheme_of(scheme_idx));
        for kind in [CurveKind::QZ, CurveKind::QD] {
            let v = q_curve(QuantileSource::Estimate(&est), kind, p).unwrap();
            prop_assert!((0.0..=1.0).contains(&v), "{kind}({p}) = {v}");
        }
    }
}

// Median of |quantile_at(p) - Q(p)| over seeded replicates.
fn median_abs_error(
    dist: &ParametricDistribution,
    scheme: QuantileScheme,
    n: usize,
    p: f64,
    replicates: usize,
    seed_base: u64,
) -> f64 {
    let truth = dist.quantile(p).unwrap();
    let mut errors: Vec<f64> = (0..replicates)
        .map(|i| {
            let sample = dist.sample(n, seed_base + i as u64).unwrap();
            let est = QuantileEstimate::new(sample, scheme);
            (est.quantile_at(p).unwrap() - truth).abs()
        })
        .collect();
    errors.sort_by(f64::total_cmp);
    errors[replicates / 2]
}

#[test]
fn quantile_estimates_converge_with_sample_size() {
    let dist = dagum(1.0, 2.0, 1.0);
    for scheme in QuantileScheme::ALL {
        for p in [0.1, 0.5, 0.9] {
            let errs: Vec<f64> = [100usize, 1000, 10000]
                .iter()
                .map(|&n| median_abs_error(&dist, scheme, n, p, 200, 0x5eed))
                .collect();
            assert!(
                errs[0] > errs[1] && errs[1] > errs[2],
                "{scheme} at p = {p}: {errs:?}"
            );
        }
    }
}

#[test]
fn plug_in_curves_converge_uniformly() {
    let dist = dagum(1.0, 2.0, 1.0);
    let grid: Vec<f64> = (1..100).map(|k| k as f64 / 100.0).collect();
    let exact: Vec<f64> = grid
        .iter()
        .map(|&p| q_curve(QuantileSource::Distribution(&dist), CurveKind::QZ, p).unwrap())
        .collect();

    let sup_error_median = |n: usize| -> f64 {
        let mut sups: Vec<f64> = (0..200)
            .map(|i| {
                let sample = dist.sample(n, 7_777 + i as u64).unwrap();
                let est = QuantileEstimate::new(sample, QuantileScheme::HF);
                grid.iter()
                    .zip(&exact)
                    .map(|(&p, &truth)| {
                        (q_curve(QuantileSource::Estimate(&est), CurveKind::QZ, p).unwrap() - truth)
                            .abs()
                    })
                    .fold(0.0f64, f64::max)
            })
            .collect();
        sups.sort_by(f64::total_cmp);
        sups[100]
    };

    let sups: Vec<f64> = [100usize, 1000, 10000]
        .iter()
        .map(|&n| sup_error_median(n))
        .collect();
    assert!(sups[0] > sups[1] && sups[1] > sups[2], "{sups:?}");
}

#[test]
fn n500_hf_estimate_lands_in_the_sampling_band() {
    // The exact qZI of Dagum(1, 2, 0.5) is 0.8288 (4 published decimals);
    // a single n = 500 HF estimate sits within four asymptotic standard
    // errors of it.
    let dist = dagum(1.0, 2.0, 0.5);
    let quad = QuadratureSpec::default();
    let sample = dist.sample(500, 2024).unwrap();
    let est = index_estimate_closed_form(&sample, QuantileScheme::HF, IndexKind::QZI)
        .unwrap()
        .value;
    let band = 4.0 * (sigma2_z(&dist, &quad).unwrap().value / 500.0).sqrt();
    assert!(
        (est - 0.8288).abs() < band,
        "estimate {est} vs 0.8288 (band {band})"
    );
}

#[test]
fn exact_monte_carlo_and_large_sample_routes_agree() {
    let quad = QuadratureSpec::default();
    let n = 100_000usize;
    for (dist, seed) in [(dagum(1.0, 2.0, 1.0), 11u64), (dagum(1.0, 0.8, 0.5), 12)] {
        let sample = dist.sample(n, seed).unwrap();
        for kind in [IndexKind::QZI, IndexKind::QDI] {
            let exact = index_exact(&dist, kind, &quad).unwrap().value;
            let mc = mc_index_oracle(&dist, kind, 1_000_000, seed + 100).unwrap();
            let estimate = index_estimate_closed_form(&sample, QuantileScheme::E, kind)
                .unwrap()
                .value;

            let mc_budget = 4.0 * mc.std_error.unwrap();
            assert!(
                (mc.value - exact).abs() < mc_budget,
                "{dist} {kind}: mc {} vs exact {exact}",
                mc.value
            );

            let sigma2 = match kind {
                IndexKind::QZI => sigma2_z(&dist, &quad).unwrap().value,
                _ => sigma2_d(&dist, &quad).unwrap().value,
            };
            let sampling_budget = 4.0 * (sigma2 / n as f64).sqrt();
            assert!(
                (estimate - exact).abs() < sampling_budget,
                "{dist} {kind}: estimate {estimate} vs exact {exact} (budget {sampling_budget})"
            );
            assert!(
                (estimate - mc.value).abs() < sampling_budget + mc_budget,
                "{dist} {kind}: estimate {estimate} vs mc {}",
                mc.value
            );
        }
    }
}
