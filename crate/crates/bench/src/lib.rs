//! Fixtures shared by the benchmarks in `benches/`.

use nff_core::{ArrayConfig, ElementSet};

pub const LAMBDA: f64 = 0.2;

/// Full circle, N = 120, r_c = 1.5 m.
pub fn reference_array() -> ElementSet {
    ArrayConfig::full(120, 1.5, LAMBDA)
        .and_then(|c| c.build())
        .expect("reference array is valid")
}
