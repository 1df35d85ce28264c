use std::collections::BTreeMap;

use serde::Serialize;

use super::{SplitAssignment, Variant};
use crate::clearing::{Equilibrium, OptimalTrade};
use crate::{Market, Money, Side, TraderId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LongSide {
    Buyers,
    Sellers,
    Balanced,
}

/// One trader's result in a sub-market.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TraderResult {
    pub side: Side,
    pub units: u64,
    /// Money paid to other traders; negative when received.
    pub payment: Money,
    /// Trading fee paid to the market maker.
    pub fee: Money,
    /// Gain from the trade under the reported valuation, before the fee.
    pub gain: Money,
    pub net_gain: Money,
}

/// Result of posted-price trade in one sub-market.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SideOutcome {
    /// Price taken from the other sub-market.
    pub cross_price: Money,
    pub demand: u64,
    pub supply: u64,
    pub long_side: LongSide,
    pub traders: BTreeMap<TraderId, TraderResult>,
}

impl SideOutcome {
    /// Assembles an outcome from per-trader units and fees, indexed like
    /// `market.traders()`.
    pub(crate) fn assemble(
        market: &Market,
        cross_price: Money,
        demand: u64,
        supply: u64,
        units: &[u64],
        fees: &[Money],
    ) -> SideOutcome {
        let long_side = match demand.cmp(&supply) {
            std::cmp::Ordering::Greater => LongSide::Buyers,
            std::cmp::Ordering::Less => LongSide::Sellers,
            std::cmp::Ordering::Equal => LongSide::Balanced,
        };
        let traders = market
            .traders()
            .iter()
            .zip(units.iter().zip(fees))
            .map(|(trader, (&units, &fee))| {
                let gain = trader.gain_unchecked(units, cross_price);
                let amount = cross_price.times(units);
                let payment = match trader.side {
                    Side::Buyer => amount,
                    Side::Seller => -amount,
                };
                let result = TraderResult {
                    side: trader.side,
                    units,
                    payment,
                    fee,
                    gain,
                    net_gain: gain - fee,
                };
                (trader.id.clone(), result)
            })
            .collect();
        SideOutcome {
            cross_price,
            demand,
            supply,
            long_side,
            traders,
        }
    }

    pub fn units_bought(&self) -> u64 {
        self.units_on(Side::Buyer)
    }

    pub fn units_sold(&self) -> u64 {
        self.units_on(Side::Seller)
    }

    fn units_on(&self, side: Side) -> u64 {
        self.traders
            .values()
            .filter(|r| r.side == side)
            .map(|r| r.units)
            .sum()
    }

    /// Sum of all traders' gains before fees.
    pub fn total_gain(&self) -> Money {
        self.traders.values().map(|r| r.gain).sum()
    }

    pub fn total_fees(&self) -> Money {
        self.traders.values().map(|r| r.fee).sum()
    }

    /// Net money flowing from traders to each other; zero under material
    /// balance.
    pub fn payment_sum(&self) -> Money {
        self.traders.values().map(|r| r.payment).sum()
    }
}

/// Full result of one mechanism run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MudaOutcome {
    pub variant: Variant,
    pub seed: u64,
    pub split: SplitAssignment,
    /// Equilibrium computed in the left half (the price the right half trades at).
    pub left_equilibrium: Equilibrium,
    pub right_equilibrium: Equilibrium,
    pub left: SideOutcome,
    pub right: SideOutcome,
    pub total_gft: Money,
    pub agents_gft: Money,
    pub market_maker_revenue: Money,
    pub benchmark: OptimalTrade,
}

impl MudaOutcome {
    pub fn trader(&self, id: &TraderId) -> Option<&TraderResult> {
        self.left
            .traders
            .get(id)
            .or_else(|| self.right.traders.get(id))
    }

    /// `total_gft / max_gft`, or `None` when no gain from trade is possible.
    pub fn total_ratio(&self) -> Option<f64> {
        self.ratio(self.total_gft)
    }

    pub fn agents_ratio(&self) -> Option<f64> {
        self.ratio(self.agents_gft)
    }

    fn ratio(&self, gft: Money) -> Option<f64> {
        (self.benchmark.max_gft > Money::ZERO)
            .then(|| gft.atoms() as f64 / self.benchmark.max_gft.atoms() as f64)
    }
}
