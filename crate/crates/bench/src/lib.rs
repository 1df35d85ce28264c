//! Market fixtures shared by the benchmarks.

use muda_core::experiments::{generate_uniform_market, UniformSpec};
use muda_core::{Market, Money};

/// A uniform market with `traders` traders of `max_units` distinct marginals each.
pub fn uniform_market(traders: usize, max_units: u64, seed: u64) -> Market {
    generate_uniform_market(&UniformSpec {
        num_traders: traders,
        group_size: 1,
        max_units,
        center: Money::from_int(500),
        amplitude: Money::from_int(250),
        seed,
    })
    .expect("fixture spec is valid")
}
