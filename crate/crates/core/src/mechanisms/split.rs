use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::{stream_rng, Stream};
use crate::{Market, TraderId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Half {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitAssignment {
    pub seed: u64,
    pub halves: BTreeMap<TraderId, Half>,
}

/// Sends each trader to the left or right half by an independent fair coin.
///
/// Coins are drawn in market order from a stream that depends only on
/// `seed`, so the split never depends on anyone's report.
pub fn split_market(market: &Market, seed: u64) -> (Market, Market, SplitAssignment) {
    let mut rng = stream_rng(seed, Stream::Split);
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut halves = BTreeMap::new();
    for trader in market.traders() {
        if rng.gen_bool(0.5) {
            halves.insert(trader.id.clone(), Half::Left);
            left.push(trader.clone());
        } else {
            halves.insert(trader.id.clone(), Half::Right);
            right.push(trader.clone());
        }
    }
    (
        market.subset(left),
        market.subset(right),
        SplitAssignment { seed, halves },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Money, Trader, Valuation};

    fn abc() -> Market {
        let v = Valuation::from_marginals(&[Money::from_int(1)]).unwrap();
        Market::new(
            ["A", "B", "C"]
                .iter()
                .map(|id| Trader::buyer(*id, v.clone()))
                .collect(),
            1,
        )
        .unwrap()
    }

    #[test]
    fn empty_market_splits_into_empty_halves() {
        let (l, r, s) = split_market(&Market::empty(4), 7);
        assert!(l.is_empty() && r.is_empty() && s.halves.is_empty());
        assert_eq!(l.max_units(), 4);
    }

    #[test]
    fn deterministic_per_seed() {
        let market = abc();
        let first = split_market(&market, 42);
        for _ in 0..5 {
            assert_eq!(split_market(&market, 42), first);
        }
        assert_eq!(first.0.len() + first.1.len(), 3);
        assert_eq!(first.2.halves.len(), 3);
    }

    #[test]
    fn coins_are_fair() {
        // 10_000 draws: sd of the frequency is 0.005, so 0.02 is four sigma.
        let market = abc();
        let mut left = [0u32; 3];
        for seed in 0..10_000 {
            let (_, _, split) = split_market(&market, seed);
            for (i, id) in ["A", "B", "C"].iter().enumerate() {
                if split.halves[&TraderId::from(*id)] == Half::Left {
                    left[i] += 1;
                }
            }
        }
        for count in left {
            let freq = count as f64 / 10_000.0;
            assert!((freq - 0.5).abs() <= 0.02, "{freq}");
        }
    }
}
