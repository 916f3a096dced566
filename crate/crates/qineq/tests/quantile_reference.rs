//! Byte-identical agreement with the reference quantile implementations.
//!
//! The fixture holds (sample, p, type, value) tuples for R's `quantile`
//! types 1, 5, 6 and 8, generated by `scripts/gen_quantile_fixture.py` and
//! cross-checked there against numpy and scipy. All doubles travel as
//! big-endian hex so equality means identical bit patterns.

mod common;

#[test]
fn matches_reference_quantiles_bit_for_bit() {
    let checked = common::check_reference_quantiles(include_str!("data/r_quantile_types.txt"));
    assert!(checked >= 200, "fixture must hold at least 200 cases");
    println!("checked {checked} reference quantile cases");
}
