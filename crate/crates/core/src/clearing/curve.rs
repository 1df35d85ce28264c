use serde::Serialize;

use crate::{Market, Money, Side};

/// Step function giving one side's aggregate quantity as a function of price.
///
/// `breakpoints[i] = (v_i, q_i)` with `v_i` ascending; `q_i` is the quantity
/// once the price has moved past `v_i` (demand for `p >= v_i`, supply for
/// `p > v_i`). Units valued exactly at the price are never counted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AggregateCurve {
    pub side: Side,
    /// Quantity before the first breakpoint.
    pub initial: u64,
    pub breakpoints: Vec<(Money, u64)>,
}

impl AggregateCurve {
    pub fn demand(market: &Market) -> AggregateCurve {
        Self::build(market, Side::Buyer)
    }

    pub fn supply(market: &Market) -> AggregateCurve {
        Self::build(market, Side::Seller)
    }

    fn build(market: &Market, side: Side) -> AggregateCurve {
        let mut runs: Vec<(Money, u64)> = market
            .traders()
            .iter()
            .filter(|t| t.side == side)
            .flat_map(|t| t.valuation.runs().iter().map(|r| (r.value, r.count)))
            .collect();
        runs.sort_unstable();
        let total: u64 = runs.iter().map(|r| r.1).sum();
        let mut breakpoints: Vec<(Money, u64)> = Vec::new();
        let mut passed = 0u64;
        for (value, count) in runs {
            passed += count;
            let quantity = match side {
                Side::Buyer => total - passed,
                Side::Seller => passed,
            };
            match breakpoints.last_mut() {
                Some(last) if last.0 == value => last.1 = quantity,
                _ => breakpoints.push((value, quantity)),
            }
        }
        let initial = match side {
            Side::Buyer => total,
            Side::Seller => 0,
        };
        AggregateCurve {
            side,
            initial,
            breakpoints,
        }
    }

    pub fn quantity_at(&self, price: Money) -> u64 {
        let passed = match self.side {
            Side::Buyer => self.breakpoints.partition_point(|&(v, _)| v <= price),
            Side::Seller => self.breakpoints.partition_point(|&(v, _)| v < price),
        };
        match passed {
            0 => self.initial,
            i => self.breakpoints[i - 1].1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clearing::{aggregate_demand, aggregate_supply};
    use crate::{Trader, Valuation};

    #[test]
    fn curves_agree_with_direct_counts() {
        let val = |xs: &[i64]| {
            Valuation::from_marginals(&xs.iter().map(|&x| Money::from_int(x)).collect::<Vec<_>>())
                .unwrap()
        };
        let market = Market::new(
            vec![
                Trader::buyer("b1", val(&[9, 7, 7])),
                Trader::buyer("b2", val(&[7, 3])),
                Trader::seller("s1", val(&[8, 4, 2])),
                Trader::seller("s2", val(&[4, 4])),
            ],
            3,
        )
        .unwrap();
        let demand = AggregateCurve::demand(&market);
        let supply = AggregateCurve::supply(&market);
        for p in 0..=20 {
            let price = Money::from_atoms(p * 5_000);
            assert_eq!(
                demand.quantity_at(price),
                aggregate_demand(&market, price),
                "{price}"
            );
            assert_eq!(
                supply.quantity_at(price),
                aggregate_supply(&market, price),
                "{price}"
            );
        }
    }
}
