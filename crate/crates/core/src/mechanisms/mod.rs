//! The random-halving double auction.
//!
//! The market is split into two halves by fair coins. Each half computes an
//! equilibrium price, and trades at the price computed by the *other* half,
//! so no trader can move the price it faces. Each half then has a long and a
//! short side at that price; the short side trades its optimum and the long
//! side is rationed either by a random serial order ([`Variant::Lottery`],
//! strongly budget balanced) or by value with Vickrey trading fees
//! ([`Variant::Vickrey`], weakly budget balanced).

mod lottery;
mod outcome;
mod split;
mod vickrey;

pub use lottery::{resolve_side_lottery, resolve_side_lottery_ordered};
pub use outcome::{LongSide, MudaOutcome, SideOutcome, TraderResult};
pub use split::{split_market, Half, SplitAssignment};
pub use vickrey::resolve_side_vickrey;

use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clearing::{equilibrium_price, optimal_trade};
use crate::{Market, Money, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Lottery,
    Vickrey,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Lottery => "lottery",
            Variant::Vickrey => "vickrey",
        })
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "lottery" => Ok(Variant::Lottery),
            "vickrey" => Ok(Variant::Vickrey),
            other => Err(format!(
                "unknown variant `{other}` (expected lottery or vickrey)"
            )),
        }
    }
}

/// Independent random streams derived from one seed.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Stream {
    Split = 1,
    PermutationLeft = 2,
    PermutationRight = 3,
}

pub(crate) fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Resolves one half at an externally given price.
pub fn resolve_side(
    market: &Market,
    cross_price: Money,
    variant: Variant,
    seed: u64,
) -> SideOutcome {
    match variant {
        Variant::Lottery => resolve_side_lottery(market, cross_price, seed),
        Variant::Vickrey => resolve_side_vickrey(market, cross_price),
    }
}

/// Runs the full mechanism. Deterministic in `(market, variant, seed)`; both
/// variants see the same split and permutations for the same seed.
pub fn run_muda(market: &Market, variant: Variant, seed: u64) -> MudaOutcome {
    let (left, right, split) = split_market(market, seed);
    let left_equilibrium = equilibrium_price(&left);
    let right_equilibrium = equilibrium_price(&right);
    let left_seed = stream_rng(seed, Stream::PermutationLeft).next_u64();
    let right_seed = stream_rng(seed, Stream::PermutationRight).next_u64();
    let left_out = resolve_side(&left, right_equilibrium.price, variant, left_seed);
    let right_out = resolve_side(&right, left_equilibrium.price, variant, right_seed);

    let total_gft = left_out.total_gain() + right_out.total_gain();
    let fees = left_out.total_fees() + right_out.total_fees();
    MudaOutcome {
        variant,
        seed,
        split,
        left_equilibrium,
        right_equilibrium,
        left: left_out,
        right: right_out,
        total_gft,
        agents_gft: total_gft - fees,
        market_maker_revenue: fees,
        benchmark: optimal_trade(market),
    }
}

/// Each trader's desired quantity at `price`, plus aggregate demand and supply.
pub(crate) fn posted_quantities(market: &Market, price: Money) -> (Vec<u64>, u64, u64) {
    let units: Vec<u64> = market
        .traders()
        .iter()
        .map(|t| t.desired_units(price))
        .collect();
    let (mut demand, mut supply) = (0, 0);
    for (trader, &u) in market.traders().iter().zip(&units) {
        match trader.side {
            Side::Buyer => demand += u,
            Side::Seller => supply += u,
        }
    }
    (units, demand, supply)
}

pub(crate) fn long_side_of(demand: u64, supply: u64) -> Option<Side> {
    match demand.cmp(&supply) {
        std::cmp::Ordering::Greater => Some(Side::Buyer),
        std::cmp::Ordering::Less => Some(Side::Seller),
        std::cmp::Ordering::Equal => None,
    }
}
