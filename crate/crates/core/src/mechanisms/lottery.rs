use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{long_side_of, posted_quantities, SideOutcome};
use crate::{Error, Market, Money, Result, TraderId};

/// Posted-price trade where the long side is served in random order.
///
/// The short side trades its full optimum. Long-side traders, ordered by a
/// uniformly random permutation drawn from `seed`, each trade as many units
/// as they want until the short side's quantity is exhausted; at most one of
/// them is partially filled.
pub fn resolve_side_lottery(market: &Market, cross_price: Money, seed: u64) -> SideOutcome {
    // The permutation covers every trader in the half, so it does not depend
    // on which side ends up long.
    let mut order: Vec<usize> = (0..market.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    lottery_in_order(market, cross_price, &order)
}

/// As [`resolve_side_lottery`] with an explicit service order. Traders missing
/// from `order` are served last, in market order.
pub fn resolve_side_lottery_ordered(
    market: &Market,
    cross_price: Money,
    order: &[TraderId],
) -> Result<SideOutcome> {
    let mut indices = Vec::with_capacity(market.len());
    for id in order {
        let index = market
            .traders()
            .iter()
            .position(|t| &t.id == id)
            .ok_or_else(|| Error::UnknownTrader(id.0.clone()))?;
        if !indices.contains(&index) {
            indices.push(index);
        }
    }
    for index in 0..market.len() {
        if !indices.contains(&index) {
            indices.push(index);
        }
    }
    Ok(lottery_in_order(market, cross_price, &indices))
}

fn lottery_in_order(market: &Market, price: Money, order: &[usize]) -> SideOutcome {
    let (mut units, demand, supply) = posted_quantities(market, price);
    if let Some(long) = long_side_of(demand, supply) {
        let mut remaining = demand.min(supply);
        for &i in order {
            if market.traders()[i].side != long {
                continue;
            }
            let take = units[i].min(remaining);
            units[i] = take;
            remaining -= take;
        }
    }
    let fees = vec![Money::ZERO; market.len()];
    SideOutcome::assemble(market, price, demand, supply, &units, &fees)
}
