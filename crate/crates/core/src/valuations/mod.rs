//! Decreasing-marginal-returns valuations and the per-trader demand, supply
//! and gain primitives.
//!
//! A valuation over `L` units is kept as its marginal values, sorted
//! non-increasingly and run-length encoded: `[(v, c), ...]` means `c`
//! consecutive units each worth `v`. Each unit is one single-unit "virtual
//! trader". Order-book traders can hold millions of identical units, so the
//! encoded form keeps every primitive proportional to the number of distinct
//! values rather than the number of units.

mod market;
mod money;

pub use market::{Market, MarketFile, Side, Trader, TraderFile, TraderId};
pub use money::{Money, DECIMALS, SCALE};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `count` consecutive units sharing one marginal value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Run {
    pub value: Money,
    pub count: u64,
}

/// Non-increasing sequence of non-negative marginal values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Valuation {
    runs: Vec<Run>,
    units: u64,
}

impl Valuation {
    /// Builds a valuation from marginals that must already be non-increasing.
    pub fn from_marginals(marginals: &[Money]) -> Result<Valuation> {
        if let Some(index) = marginals.windows(2).position(|w| w[1] > w[0]) {
            return Err(Error::DmrViolation {
                index: index + 1,
                previous: marginals[index],
                next: marginals[index + 1],
            });
        }
        Valuation::from_runs(marginals.iter().map(|&value| (value, 1)))
    }

    /// Builds a valuation from marginals in any order; they are sorted.
    pub fn from_unsorted_marginals(
        marginals: impl IntoIterator<Item = Money>,
    ) -> Result<Valuation> {
        Valuation::from_runs(marginals.into_iter().map(|value| (value, 1)))
    }

    /// Builds a valuation from `(value, count)` groups in any order.
    /// Zero-count groups are dropped and equal values are merged.
    pub fn from_runs(groups: impl IntoIterator<Item = (Money, u64)>) -> Result<Valuation> {
        let mut groups: Vec<(Money, u64)> = groups.into_iter().filter(|&(_, c)| c > 0).collect();
        if let Some(&(value, _)) = groups.iter().find(|(v, _)| v.is_negative()) {
            return Err(Error::NegativeValue(value));
        }
        groups.sort_by_key(|g| std::cmp::Reverse(g.0));
        let mut runs: Vec<Run> = Vec::with_capacity(groups.len());
        for (value, count) in groups {
            match runs.last_mut() {
                Some(last) if last.value == value => last.count += count,
                _ => runs.push(Run { value, count }),
            }
        }
        let units = runs.iter().map(|r| r.count).sum();
        if units == 0 {
            return Err(Error::EmptyValuation);
        }
        Ok(Valuation { runs, units })
    }

    /// Builds a valuation from cumulative values `v(1), ..., v(L)` with
    /// `v(0) = 0` implied, rejecting anything without decreasing marginal
    /// returns.
    pub fn from_cumulative(values: &[Money]) -> Result<Valuation> {
        if values.is_empty() {
            return Err(Error::EmptyValuation);
        }
        let marginals: Vec<Money> = std::iter::once(Money::ZERO)
            .chain(values.iter().copied())
            .collect::<Vec<_>>()
            .windows(2)
            .map(|w| w[1] - w[0])
            .collect();
        Valuation::from_marginals(&marginals)
    }

    /// Total number of units (virtual traders).
    pub fn units(&self) -> u64 {
        self.units
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    /// Every marginal value, highest first.
    pub fn marginals(&self) -> impl Iterator<Item = Money> + '_ {
        self.runs
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.count as usize))
    }

    pub fn max_value(&self) -> Money {
        self.runs[0].value
    }

    pub fn min_value(&self) -> Money {
        self.runs[self.runs.len() - 1].value
    }

    /// `v(t)`: value of holding the first `t` units. Saturates at `units()`.
    pub fn cumulative(&self, t: u64) -> Money {
        take_sum(self.runs.iter(), t)
    }

    /// Sum of the `t` lowest marginals. Saturates at `units()`.
    pub fn bottom_sum(&self, t: u64) -> Money {
        take_sum(self.runs.iter().rev(), t)
    }

    /// Number of marginals strictly above `price`: a buyer's demand.
    pub fn demand(&self, price: Money) -> u64 {
        self.runs
            .iter()
            .take_while(|r| r.value > price)
            .map(|r| r.count)
            .sum()
    }

    /// Number of marginals strictly below `price`: a seller's supply.
    pub fn supply(&self, price: Money) -> u64 {
        self.runs
            .iter()
            .rev()
            .take_while(|r| r.value < price)
            .map(|r| r.count)
            .sum()
    }
}

fn take_sum<'a>(runs: impl Iterator<Item = &'a Run>, mut t: u64) -> Money {
    let mut total = Money::ZERO;
    for run in runs {
        if t == 0 {
            break;
        }
        let take = run.count.min(t);
        total += run.value.times(take);
        t -= take;
    }
    total
}
