//! Shared fixtures for the benchmarks.

use simplectra::lm::{centered_scaled, sample_lm, CenteredMatrix, LMParams};

/// H_n for a fixed seed.
pub fn centered_fixture(n: usize, d: usize, p: f64) -> CenteredMatrix {
    let sample = sample_lm(LMParams::new(n, d, p, 0xBE7C).expect("valid params")).expect("sample");
    centered_scaled(&sample).expect("p inside (0, 1)")
}
