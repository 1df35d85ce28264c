//! Simulation harness: market generators, order-book ingestion, competitive
//! ratio sweeps and the truthfulness fuzzer.

mod fuzz;
pub mod orderbook;
mod ratio;
mod uniform;

pub use fuzz::{fuzz_dsic, true_net_gain, DeviationKind, FuzzCase, FuzzReport};
pub use orderbook::{
    ingest_orderbook, synthetic_orderbook, OrderRecord, OrderSide, SyntheticOrderbook,
};
pub use ratio::{run_ratio_experiment, write_rows_csv, ExperimentRow, MarketSource, CSV_HEADER};
pub use uniform::{generate_uniform_market, UniformSpec};
