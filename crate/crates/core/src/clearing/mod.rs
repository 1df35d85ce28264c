//! Aggregate demand and supply, Walrasian equilibrium prices and the
//! maximum gain-from-trade benchmark.

mod curve;
mod equilibrium;
mod optimal;

pub use curve::AggregateCurve;
pub use equilibrium::{equilibrium_price, Equilibrium};
pub use optimal::{optimal_trade, OptimalTrade};

use std::cmp::Reverse;

use crate::{Market, Money, Side, Trader};

/// Total demand of all buyers at `price`.
pub fn aggregate_demand(market: &Market, price: Money) -> u64 {
    market.buyers().map(|t| t.valuation.demand(price)).sum()
}

/// Total supply of all sellers at `price`.
pub fn aggregate_supply(market: &Market, price: Money) -> u64 {
    market.sellers().map(|t| t.valuation.supply(price)).sum()
}

/// A block of identical virtual traders belonging to one trader.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct VirtualRun {
    /// Index into the trader slice the run was built from.
    pub trader: usize,
    pub value: Money,
    pub count: u64,
}

/// Runs of one side ranked by preference under the tie-breaking order
/// `(value, side, trader id, unit index)`: buyers from the top of that
/// order down, sellers from the bottom up.
pub(crate) fn ranked_runs<'a>(
    traders: impl IntoIterator<Item = &'a Trader>,
    side: Side,
    keep: impl Fn(Money) -> bool,
) -> Vec<VirtualRun> {
    let traders: Vec<&Trader> = traders.into_iter().collect();
    let mut runs: Vec<VirtualRun> = traders
        .iter()
        .enumerate()
        .filter(|(_, t)| t.side == side)
        .flat_map(|(i, t)| {
            t.valuation
                .runs()
                .iter()
                .filter(|r| keep(r.value))
                .map(move |r| VirtualRun {
                    trader: i,
                    value: r.value,
                    count: r.count,
                })
        })
        .collect();
    match side {
        Side::Buyer => runs.sort_by_key(|r| Reverse((r.value, &traders[r.trader].id))),
        Side::Seller => runs.sort_by_key(|r| (r.value, &traders[r.trader].id)),
    }
    runs
}
