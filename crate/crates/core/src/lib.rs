//! A prior-free, truthful, budget-balanced double auction for traders who
//! buy or sell multiple units of one good, together with the optimal-trade
//! benchmark and the simulation harness used to measure how close the
//! mechanism gets to it.
//!
//! ```
//! use muda_core::{run_muda, Market, Money, Trader, Valuation, Variant};
//!
//! let v = |xs: &[i64]| Valuation::from_marginals(
//!     &xs.iter().map(|&x| Money::from_int(x)).collect::<Vec<_>>()).unwrap();
//! let market = Market::new(vec![
//!     Trader::buyer("b", v(&[10, 8])),
//!     Trader::seller("s", v(&[6, 3])),
//! ], 2).unwrap();
//! let outcome = run_muda(&market, Variant::Lottery, 0);
//! assert!(outcome.total_gft <= outcome.benchmark.max_gft);
//! ```

pub mod clearing;
mod error;
pub mod experiments;
pub mod mechanisms;
pub mod valuations;

pub use clearing::{
    aggregate_demand, aggregate_supply, equilibrium_price, optimal_trade, AggregateCurve,
    Equilibrium, OptimalTrade,
};
pub use error::{Error, Result};
pub use mechanisms::{
    resolve_side, resolve_side_lottery, resolve_side_vickrey, run_muda, split_market, MudaOutcome,
    SideOutcome, Variant,
};
pub use valuations::{Market, Money, Run, Side, Trader, TraderId, Valuation};
