use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Money, Valuation};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TraderId(pub String);

impl TraderId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TraderId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for TraderId {
    fn from(s: &str) -> Self {
        TraderId(s.to_string())
    }
}

impl From<String> for TraderId {
    fn from(s: String) -> Self {
        TraderId(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Buyer,
    Seller,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trader {
    pub id: TraderId,
    pub side: Side,
    pub valuation: Valuation,
}

impl Trader {
    pub fn new(id: impl Into<TraderId>, side: Side, valuation: Valuation) -> Trader {
        Trader {
            id: id.into(),
            side,
            valuation,
        }
    }

    pub fn buyer(id: impl Into<TraderId>, valuation: Valuation) -> Trader {
        Trader::new(id, Side::Buyer, valuation)
    }

    pub fn seller(id: impl Into<TraderId>, valuation: Valuation) -> Trader {
        Trader::new(id, Side::Seller, valuation)
    }

    pub fn is_buyer(&self) -> bool {
        self.side == Side::Buyer
    }

    /// Units initially held (`M_j`); sellers only.
    pub fn endowment(&self) -> Option<u64> {
        match self.side {
            Side::Seller => Some(self.valuation.units()),
            Side::Buyer => None,
        }
    }

    /// Demand for a buyer, supply for a seller.
    pub fn desired_units(&self, price: Money) -> u64 {
        match self.side {
            Side::Buyer => self.valuation.demand(price),
            Side::Seller => self.valuation.supply(price),
        }
    }

    /// Gain from buying (or selling) `units` at `price`.
    pub fn gain(&self, units: u64, price: Money) -> Result<Money> {
        let cap = self.valuation.units();
        if units > cap {
            return Err(Error::UnitsOutOfRange {
                trader: self.id.0.clone(),
                units,
                cap,
            });
        }
        Ok(self.gain_unchecked(units, price))
    }

    pub(crate) fn gain_unchecked(&self, units: u64, price: Money) -> Money {
        match self.side {
            Side::Buyer => self.valuation.cumulative(units) - price.times(units),
            Side::Seller => price.times(units) - self.valuation.bottom_sum(units),
        }
    }
}

/// A set of traders with distinct ids plus the per-trader unit cap `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Market {
    traders: Vec<Trader>,
    max_units: u64,
}

impl Market {
    pub fn new(traders: Vec<Trader>, max_units: u64) -> Result<Market> {
        if max_units == 0 {
            return Err(Error::ZeroMaxUnits);
        }
        let mut seen = HashSet::with_capacity(traders.len());
        for trader in &traders {
            if !seen.insert(&trader.id) {
                return Err(Error::DuplicateTrader(trader.id.0.clone()));
            }
            if trader.valuation.units() > max_units {
                return Err(Error::TooManyUnits {
                    trader: trader.id.0.clone(),
                    units: trader.valuation.units(),
                    max_units,
                });
            }
        }
        Ok(Market { traders, max_units })
    }

    pub fn empty(max_units: u64) -> Market {
        Market {
            traders: Vec::new(),
            max_units: max_units.max(1),
        }
    }

    /// Sub-market over a subset of traders; keeps the cap.
    pub(crate) fn subset(&self, traders: Vec<Trader>) -> Market {
        Market {
            traders,
            max_units: self.max_units,
        }
    }

    pub fn traders(&self) -> &[Trader] {
        &self.traders
    }

    pub fn max_units(&self) -> u64 {
        self.max_units
    }

    pub fn len(&self) -> usize {
        self.traders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traders.is_empty()
    }

    pub fn buyers(&self) -> impl Iterator<Item = &Trader> {
        self.traders.iter().filter(|t| t.side == Side::Buyer)
    }

    pub fn sellers(&self) -> impl Iterator<Item = &Trader> {
        self.traders.iter().filter(|t| t.side == Side::Seller)
    }

    pub fn trader(&self, id: &TraderId) -> Option<&Trader> {
        self.traders.iter().find(|t| &t.id == id)
    }

    /// The same market with one trader's report replaced.
    pub fn with_valuation(&self, id: &TraderId, valuation: Valuation) -> Result<Market> {
        let mut traders = self.traders.clone();
        let slot = traders
            .iter_mut()
            .find(|t| &t.id == id)
            .ok_or_else(|| Error::UnknownTrader(id.0.clone()))?;
        slot.valuation = valuation;
        Market::new(traders, self.max_units)
    }

    pub fn from_json(text: &str) -> Result<Market> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: MarketFile =
            serde_path_to_error::deserialize(de).map_err(|e| Error::JsonField {
                path: e.path().to_string(),
                source: e.into_inner(),
            })?;
        file.into_market()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Market> {
        Market::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_file(&self) -> MarketFile {
        MarketFile {
            max_units: self.max_units,
            traders: self
                .traders
                .iter()
                .map(|t| TraderFile {
                    id: t.id.0.clone(),
                    side: t.side,
                    marginals: t.valuation.marginals().collect(),
                })
                .collect(),
        }
    }
}

/// On-disk market: `{"max_units": M, "traders": [{"id", "side", "marginals"}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketFile {
    pub max_units: u64,
    pub traders: Vec<TraderFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraderFile {
    pub id: String,
    pub side: Side,
    pub marginals: Vec<Money>,
}

impl MarketFile {
    pub fn into_market(self) -> Result<Market> {
        let traders = self
            .traders
            .into_iter()
            .map(|t| {
                Valuation::from_marginals(&t.marginals)
                    .map(|v| Trader::new(t.id.clone(), t.side, v))
                    .map_err(|e| Error::Trader {
                        trader: t.id,
                        source: Box::new(e),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Market::new(traders, self.max_units)
    }
}
