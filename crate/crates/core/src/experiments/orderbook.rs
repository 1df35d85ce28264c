//! Start-of-day order records and their conversion into trader pools.
//!
//! Orders sharing `(symbol, date, order_date, side)` are assumed to come from
//! one trader. Each order contributes `quantity` units at `price`; a merged
//! trader's marginals are the union sorted in decreasing order. All traders of
//! a symbol, across every date, form that symbol's pool.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Money, Result, Side, Trader, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OrderSide {
    #[serde(rename = "BUY")]
    Buy,
    #[serde(rename = "SELL")]
    Sell,
}

impl OrderSide {
    fn parse(s: &str) -> Option<OrderSide> {
        match s.trim().to_ascii_uppercase().as_str() {
            "BUY" => Some(OrderSide::Buy),
            "SELL" => Some(OrderSide::Sell),
            _ => None,
        }
    }

    fn label(self) -> &'static str {
        match self {
            OrderSide::Buy => "BUY",
            OrderSide::Sell => "SELL",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderRecord {
    pub symbol: String,
    pub date: String,
    pub order_date: String,
    pub side: OrderSide,
    pub price: Money,
    pub quantity: u64,
}

pub const CSV_HEADER: [&str; 6] = ["symbol", "date", "order_date", "side", "price", "quantity"];

/// Parses order records, reporting the line of the first bad row.
pub fn read_orders(input: impl Read) -> Result<Vec<OrderRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: format!("missing column `{name}`"),
            })
    };
    let cols = [
        column("symbol")?,
        column("date")?,
        column("order_date")?,
        column("side")?,
        column("price")?,
        column("quantity")?,
    ];

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let field = |i: usize| row.get(cols[i]).unwrap_or("");
        let parse_err = |message: String| Error::Parse { line, message };

        let side = OrderSide::parse(field(3))
            .ok_or_else(|| parse_err(format!("side `{}` is not BUY or SELL", field(3))))?;
        let price: Money = field(4)
            .parse()
            .map_err(|e: Error| parse_err(format!("price: {e}")))?;
        let quantity: i64 = field(5)
            .parse()
            .map_err(|_| parse_err(format!("quantity `{}` is not an integer", field(5))))?;
        if quantity <= 0 {
            return Err(Error::NonPositiveQuantity { line });
        }
        if price <= Money::ZERO {
            return Err(Error::NonPositivePrice { line });
        }
        records.push(OrderRecord {
            symbol: field(0).to_string(),
            date: field(1).to_string(),
            order_date: field(2).to_string(),
            side,
            price,
            quantity: quantity as u64,
        });
    }
    Ok(records)
}

pub fn write_orders(records: &[OrderRecord], output: impl Write) -> Result<()> {
    let mut writer = csv::Writer::from_writer(output);
    writer.write_record(CSV_HEADER)?;
    for r in records {
        writer.write_record([
            r.symbol.as_str(),
            r.date.as_str(),
            r.order_date.as_str(),
            r.side.label(),
            &r.price.to_string(),
            &r.quantity.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

type TraderKey<'a> = (&'a str, &'a str, &'a str, OrderSide);

/// Merges records into traders and pools them per symbol.
pub fn merge_orders(records: &[OrderRecord]) -> Result<BTreeMap<String, Vec<Trader>>> {
    let mut groups: BTreeMap<TraderKey<'_>, Vec<(Money, u64)>> = BTreeMap::new();
    for r in records {
        groups
            .entry((&r.symbol, &r.date, &r.order_date, r.side))
            .or_default()
            .push((r.price, r.quantity));
    }
    let mut pools: BTreeMap<String, Vec<Trader>> = BTreeMap::new();
    for ((symbol, date, order_date, side), orders) in groups {
        let id = format!("{symbol}/{date}/{order_date}/{}", side.label());
        let side = match side {
            OrderSide::Buy => Side::Buyer,
            OrderSide::Sell => Side::Seller,
        };
        let trader = Trader::new(id, side, Valuation::from_runs(orders)?);
        pools.entry(symbol.to_string()).or_default().push(trader);
    }
    Ok(pools)
}

/// Parses a CSV stream and returns the per-symbol trader pools.
pub fn ingest_orderbook(input: impl Read) -> Result<BTreeMap<String, Vec<Trader>>> {
    merge_orders(&read_orders(input)?)
}

/// Shape of a synthetic start-of-day order book.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticOrderbook {
    pub symbols: usize,
    pub days: usize,
    pub traders_per_day: usize,
    /// Orders per merged trader are drawn from `[mean/2, 3*mean/2]`.
    pub mean_orders_per_trader: usize,
    pub seed: u64,
}

impl Default for SyntheticOrderbook {
    fn default() -> Self {
        SyntheticOrderbook {
            symbols: 3,
            days: 5,
            traders_per_day: 20,
            mean_orders_per_trader: 10,
            seed: 0,
        }
    }
}

/// Generates records in the start-of-day format: quantities are multiples of
/// 100 in `[100, 99000]`, prices are eighths around a per-symbol level, and
/// each `(symbol, date, order_date, side)` key gets one batch of orders.
pub fn synthetic_orderbook(shape: &SyntheticOrderbook) -> Vec<OrderRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(shape.seed);
    let eighth = Money::from_atoms(1_250);
    let mut records = Vec::new();
    for s in 0..shape.symbols {
        let symbol = format!("S{s:02}");
        let level_eighths: i64 = rng.gen_range(80..=800);
        for d in 0..shape.days {
            let date = format!("1990-11-{:02}", d + 1);
            let mut used = std::collections::HashSet::new();
            for _ in 0..shape.traders_per_day {
                let side = if rng.gen_bool(0.5) {
                    OrderSide::Buy
                } else {
                    OrderSide::Sell
                };
                let back = rng.gen_range(0..=d.min(2));
                let order_date = format!("1990-11-{:02}", d + 1 - back);
                if !used.insert((order_date.clone(), side)) {
                    continue;
                }
                let mean = shape.mean_orders_per_trader.max(1);
                let orders = rng.gen_range(mean.div_ceil(2)..=mean + mean / 2);
                for _ in 0..orders {
                    let offset: i64 = rng.gen_range(-40..=40);
                    let price = eighth.times((level_eighths + offset) as u64);
                    records.push(OrderRecord {
                        symbol: symbol.clone(),
                        date: date.clone(),
                        order_date: order_date.clone(),
                        side,
                        price,
                        quantity: 100 * rng.gen_range(1..=990),
                    });
                }
            }
        }
    }
    records
}
