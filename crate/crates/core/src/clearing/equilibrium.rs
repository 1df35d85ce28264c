use std::collections::BTreeMap;

use serde::Serialize;

use crate::{Market, Money, Side};

/// A Walrasian price together with the set of prices that clear the market.
///
/// The zero-excess set `{p : demand(p) = supply(p)}` is an interval because
/// excess demand is non-increasing; `low`/`high` are its endpoints (`high`
/// is `None` when unbounded). When ties make the excess jump over zero, the
/// set is empty and the price is the value at which the sign changes, with
/// `low == high == price` and `clears == false`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Equilibrium {
    pub price: Money,
    pub low: Money,
    pub high: Option<Money>,
    /// Whether aggregate demand equals aggregate supply at `price`.
    pub clears: bool,
}

/// Open gap between breakpoints or a single breakpoint.
#[derive(Clone, Copy, Debug)]
enum Piece {
    Gap(Option<Money>, Option<Money>),
    Point(Money),
}

impl Piece {
    fn lower(self) -> (Option<Money>, bool) {
        match self {
            Piece::Gap(lo, _) => (lo, false),
            Piece::Point(v) => (Some(v), true),
        }
    }

    fn upper(self) -> (Option<Money>, bool) {
        match self {
            Piece::Gap(_, hi) => (hi, false),
            Piece::Point(v) => (Some(v), true),
        }
    }
}

/// Equilibrium price of `market`: the midpoint of the zero-excess interval.
///
/// Degenerate markets: with no sellers the price is one tick above the
/// highest buyer value; with no buyers it is one tick below the lowest seller
/// value (floored at zero); an empty market is priced at zero.
pub fn equilibrium_price(market: &Market) -> Equilibrium {
    let max_buyer = market.buyers().map(|t| t.valuation.max_value()).max();
    let min_seller = market.sellers().map(|t| t.valuation.min_value()).min();
    match (max_buyer, min_seller) {
        (None, None) => {
            return Equilibrium {
                price: Money::ZERO,
                low: Money::ZERO,
                high: None,
                clears: true,
            }
        }
        (Some(top), None) => {
            return Equilibrium {
                price: top + Money::TICK,
                low: top,
                high: None,
                clears: true,
            }
        }
        (None, Some(bottom)) => {
            return Equilibrium {
                price: (bottom - Money::TICK).max(Money::ZERO),
                low: Money::ZERO,
                high: Some(bottom),
                clears: true,
            }
        }
        (Some(_), Some(_)) => {}
    }

    // value -> (buyer units, seller units)
    let mut levels: BTreeMap<Money, (u64, u64)> = BTreeMap::new();
    for trader in market.traders() {
        for run in trader.valuation.runs() {
            let level = levels.entry(run.value).or_default();
            match trader.side {
                Side::Buyer => level.0 += run.count,
                Side::Seller => level.1 += run.count,
            }
        }
    }

    // Walk the price axis left to right as alternating gaps and points.
    let mut above: u64 = levels.values().map(|l| l.0).sum();
    let mut below: u64 = 0;
    let mut pieces: Vec<(Piece, i128)> = Vec::with_capacity(2 * levels.len() + 1);
    let excess = |d: u64, s: u64| d as i128 - s as i128;
    let mut prev: Option<Money> = None;
    for (&value, &(buyers, sellers)) in &levels {
        pieces.push((Piece::Gap(prev, Some(value)), excess(above, below)));
        above -= buyers;
        pieces.push((Piece::Point(value), excess(above, below)));
        below += sellers;
        prev = Some(value);
    }
    pieces.push((Piece::Gap(prev, None), excess(above, below)));

    let first_zero = pieces.iter().position(|&(_, e)| e == 0);
    let Some(first) = first_zero else {
        // Excess jumps from positive to negative at a single value.
        let crossing = pieces
            .iter()
            .position(|&(_, e)| e < 0)
            .expect("excess ends negative");
        let price = match pieces[crossing].0 {
            Piece::Point(v) => v,
            Piece::Gap(lo, _) => lo.expect("excess starts positive"),
        };
        return Equilibrium {
            price,
            low: price,
            high: Some(price),
            clears: false,
        };
    };
    let last = first + pieces[first..].iter().take_while(|&&(_, e)| e == 0).count() - 1;
    let (low, low_closed) = pieces[first].0.lower();
    let (high, high_closed) = pieces[last].0.upper();
    let low = low.expect("zero excess below every value requires no buyers");
    let high = high.expect("zero excess above every value requires no sellers");

    let contains = |p: Money| {
        (p > low || (p == low && low_closed)) && (p < high || (p == high && high_closed))
    };
    let (mid, _) = low.midpoint(high);
    let price = [mid, mid + Money::TICK]
        .into_iter()
        .find(|&p| contains(p))
        .unwrap_or(mid);
    Equilibrium {
        price,
        low,
        high: Some(high),
        clears: contains(price),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clearing::{aggregate_demand, aggregate_supply};
    use crate::{Trader, Valuation};

    fn m(x: i64) -> Money {
        Money::from_int(x)
    }

    fn market(buyers: &[&[i64]], sellers: &[&[i64]]) -> Market {
        let val = |xs: &[i64]| {
            Valuation::from_marginals(&xs.iter().map(|&x| m(x)).collect::<Vec<_>>()).unwrap()
        };
        let mut traders = Vec::new();
        for (i, b) in buyers.iter().enumerate() {
            traders.push(Trader::buyer(format!("b{i}"), val(b)));
        }
        for (i, s) in sellers.iter().enumerate() {
            traders.push(Trader::seller(format!("s{i}"), val(s)));
        }
        Market::new(traders, 10).unwrap()
    }

    #[test]
    fn single_crossing_midpoint() {
        let eq = equilibrium_price(&market(&[&[10]], &[&[5]]));
        assert_eq!(
            (eq.low, eq.high, eq.price),
            (m(5), Some(m(10)), Money::from_atoms(75_000))
        );
        assert!(eq.clears);
    }

    #[test]
    fn three_by_three() {
        let mk = market(&[&[9, 7, 3]], &[&[8, 4, 2]]);
        let eq = equilibrium_price(&mk);
        assert_eq!(
            (eq.low, eq.high, eq.price),
            (m(4), Some(m(7)), Money::from_atoms(55_000))
        );
        assert_eq!(aggregate_demand(&mk, eq.price), 2);
        assert_eq!(aggregate_supply(&mk, eq.price), 2);
    }

    #[test]
    fn degenerate_markets() {
        assert_eq!(equilibrium_price(&Market::empty(1)).price, Money::ZERO);
        let only_buyers = equilibrium_price(&market(&[&[9, 7]], &[]));
        assert_eq!(only_buyers.price, m(9) + Money::TICK);
        assert_eq!(only_buyers.high, None);
        let only_sellers = equilibrium_price(&market(&[], &[&[8, 4]]));
        assert_eq!(only_sellers.price, m(4) - Money::TICK);
        let zero_seller = equilibrium_price(&market(&[], &[&[0]]));
        assert_eq!(zero_seller.price, Money::ZERO);
    }

    #[test]
    fn no_overlap_prices_between_sides() {
        let eq = equilibrium_price(&market(&[&[3]], &[&[8]]));
        assert_eq!(
            (eq.low, eq.high, eq.price),
            (m(3), Some(m(8)), Money::from_atoms(55_000))
        );
        assert!(eq.clears);
    }

    #[test]
    fn tie_between_sides_gives_point_interval() {
        let eq = equilibrium_price(&market(&[&[10, 6]], &[&[6, 2]]));
        assert_eq!((eq.low, eq.high, eq.price), (m(6), Some(m(6)), m(6)));
        assert!(eq.clears);
    }

    #[test]
    fn jump_over_zero_uses_crossing_value() {
        let eq = equilibrium_price(&market(&[&[10, 10]], &[&[5]]));
        assert_eq!(eq.price, m(10));
        assert!(!eq.clears);
    }

    #[test]
    fn unrepresentable_midpoint_falls_back() {
        let mk = Market::new(
            vec![
                Trader::buyer(
                    "b",
                    Valuation::from_marginals(&[Money::from_atoms(2)]).unwrap(),
                ),
                Trader::seller(
                    "s",
                    Valuation::from_marginals(&[Money::from_atoms(1)]).unwrap(),
                ),
            ],
            1,
        )
        .unwrap();
        let eq = equilibrium_price(&mk);
        assert_eq!(
            (eq.low, eq.high),
            (Money::from_atoms(1), Some(Money::from_atoms(2)))
        );
        assert!(!eq.clears);
    }
}
