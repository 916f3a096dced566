//! Helpers shared between integration test binaries.

use std::collections::HashMap;

use qineq::{QuantileEstimate, QuantileScheme, Sample};

pub fn parse_hex_f64(s: &str) -> f64 {
    f64::from_bits(u64::from_str_radix(s, 16).expect("hex double"))
}

/// Replay the reference quantile fixture; returns the number of cases checked.
/// Panics on the first mismatching bit pattern.
pub fn check_reference_quantiles(fixture: &str) -> usize {
    let mut estimates: HashMap<(usize, u8), QuantileEstimate> = HashMap::new();
    let mut samples: HashMap<usize, Sample> = HashMap::new();
    let mut checked = 0usize;

    for line in fixture.lines() {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("S") => {
                let id: usize = parts.next().unwrap().parse().unwrap();
                let values: Vec<f64> = parts.map(parse_hex_f64).collect();
                samples.insert(id, Sample::new(values).unwrap());
            }
            Some("Q") => {
                let id: usize = parts.next().unwrap().parse().unwrap();
                let r_type: u8 = parts.next().unwrap().parse().unwrap();
                let p = parse_hex_f64(parts.next().unwrap());
                let expected = parse_hex_f64(parts.next().unwrap());

                let est = estimates.entry((id, r_type)).or_insert_with(|| {
                    let scheme = QuantileScheme::from_r_type(r_type).unwrap();
                    QuantileEstimate::new(samples[&id].clone(), scheme)
                });
                let got = est.quantile_at(p).unwrap();
                assert_eq!(
                    got.to_bits(),
                    expected.to_bits(),
                    "sample {id}, type {r_type}, p = {p:?}: got {got:?}, want {expected:?}"
                );
                checked += 1;
            }
            _ => {}
        }
    }
    checked
}
