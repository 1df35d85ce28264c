use std::collections::BTreeMap;

use serde::Serialize;

use super::{equilibrium_price, ranked_runs, Equilibrium};
use crate::{Market, Money, Side, TraderId};

/// The maximum gain-from-trade allocation of a market.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OptimalTrade {
    /// Units traded in the optimum.
    pub k: u64,
    pub max_gft: Money,
    pub equilibrium: Equilibrium,
    /// Efficient virtual buyers per trader. A trader's efficient units are
    /// always its highest marginals, so a count identifies them.
    pub efficient_buyers: BTreeMap<TraderId, u64>,
    /// Efficient virtual sellers per trader (their lowest marginals).
    pub efficient_sellers: BTreeMap<TraderId, u64>,
}

/// Greedy matching of the highest buyer marginals against the lowest seller
/// marginals while the buyer value strictly exceeds the seller value.
pub fn optimal_trade(market: &Market) -> OptimalTrade {
    let traders = market.traders();
    let buyers = ranked_runs(traders, Side::Buyer, |_| true);
    let sellers = ranked_runs(traders, Side::Seller, |_| true);

    let mut k = 0u64;
    let mut max_gft = Money::ZERO;
    let mut efficient_buyers: BTreeMap<TraderId, u64> = BTreeMap::new();
    let mut efficient_sellers: BTreeMap<TraderId, u64> = BTreeMap::new();
    let (mut bi, mut si) = (0, 0);
    let (mut b_left, mut s_left) = (
        buyers.first().map_or(0, |r| r.count),
        sellers.first().map_or(0, |r| r.count),
    );
    while bi < buyers.len() && si < sellers.len() {
        let (b, s) = (buyers[bi], sellers[si]);
        if b.value <= s.value {
            break;
        }
        let take = b_left.min(s_left);
        k += take;
        max_gft += (b.value - s.value).times(take);
        *efficient_buyers
            .entry(traders[b.trader].id.clone())
            .or_default() += take;
        *efficient_sellers
            .entry(traders[s.trader].id.clone())
            .or_default() += take;
        b_left -= take;
        s_left -= take;
        if b_left == 0 {
            bi += 1;
            b_left = buyers.get(bi).map_or(0, |r| r.count);
        }
        if s_left == 0 {
            si += 1;
            s_left = sellers.get(si).map_or(0, |r| r.count);
        }
    }

    OptimalTrade {
        k,
        max_gft,
        equilibrium: equilibrium_price(market),
        efficient_buyers,
        efficient_sellers,
    }
}
