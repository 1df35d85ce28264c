use std::collections::HashMap;

use super::{long_side_of, posted_quantities, SideOutcome};
use crate::clearing::{ranked_runs, VirtualRun};
use crate::{Market, Money, Side};

/// Posted-price trade where the long side is chosen by value, with
/// Vickrey-style trading fees.
///
/// Among the long side's willing virtual traders, the `min(demand, supply)`
/// most profitable are selected. A trader with selected units pays the gain
/// of the virtual traders of others that its presence crowds out: those that
/// would be selected if all of its willing virtual traders were removed.
pub fn resolve_side_vickrey(market: &Market, cross_price: Money) -> SideOutcome {
    let (mut units, demand, supply) = posted_quantities(market, cross_price);
    let mut fees = vec![Money::ZERO; market.len()];
    if let Some(long) = long_side_of(demand, supply) {
        let target = demand.min(supply);
        let willing = |v: Money| match long {
            Side::Buyer => v > cross_price,
            Side::Seller => v < cross_price,
        };
        let surplus = |run: &VirtualRun| match long {
            Side::Buyer => run.value - cross_price,
            Side::Seller => cross_price - run.value,
        };
        let ranked = ranked_runs(market.traders(), long, willing);

        for (i, trader) in market.traders().iter().enumerate() {
            if trader.side == long {
                units[i] = 0;
            }
        }
        // Select the best `target` units; the rest form the tail.
        let mut needed = target;
        let mut tail: Vec<VirtualRun> = Vec::new();
        for run in &ranked {
            let take = run.count.min(needed);
            units[run.trader] += take;
            needed -= take;
            if take < run.count {
                tail.push(VirtualRun {
                    count: run.count - take,
                    ..*run
                });
            }
        }

        // Removing trader j promotes the first k_j tail units not owned by j.
        let selected: HashMap<usize, u64> = units
            .iter()
            .enumerate()
            .filter(|&(i, &u)| u > 0 && market.traders()[i].side == long)
            .map(|(i, &u)| (i, u))
            .collect();
        for (&trader, &k) in &selected {
            let mut left = k;
            let mut fee = Money::ZERO;
            for run in tail.iter().filter(|r| r.trader != trader) {
                if left == 0 {
                    break;
                }
                let take = run.count.min(left);
                fee += surplus(run).times(take);
                left -= take;
            }
            fees[trader] = fee;
        }
    }
    SideOutcome::assemble(market, cross_price, demand, supply, &units, &fees)
}
