//! Test-only oracles and generators. Nothing here calls into the clearing or
//! mechanism code it is used to check.
#![allow(dead_code)]

use muda_core::mechanisms::{LongSide, MudaOutcome, SideOutcome, Variant};
use muda_core::{Market, Money, Side, Trader, Valuation};
use rand::Rng;

pub fn m(x: i64) -> Money {
    Money::from_int(x)
}

pub fn val(xs: &[i64]) -> Valuation {
    Valuation::from_marginals(&xs.iter().map(|&x| m(x)).collect::<Vec<_>>()).unwrap()
}

/// The worked example's sub-market: one buyer block and sellers Alice and Bob.
pub fn example_market() -> Market {
    Market::new(
        vec![
            Trader::buyer("buyers", val(&[100, 90, 80, 60, 40, 20])),
            Trader::seller("alice", val(&[70, 60, 40, 20, 10])),
            Trader::seller("bob", val(&[65, 45, 35, 25, 15])),
        ],
        6,
    )
    .unwrap()
}

/// Random market. Coarse values (whole units in `0..=20`) produce many ties;
/// fine values rarely tie.
pub fn random_market(rng: &mut impl Rng, max_traders: usize, max_units: u64) -> Market {
    let n = rng.gen_range(0..=max_traders);
    let cap = rng.gen_range(1..=max_units);
    let coarse = rng.gen_bool(0.5);
    let traders = (0..n)
        .map(|i| {
            let side = if rng.gen_bool(0.5) {
                Side::Buyer
            } else {
                Side::Seller
            };
            let len = rng.gen_range(1..=cap);
            let values = (0..len).map(|_| {
                if coarse {
                    m(rng.gen_range(0..=20))
                } else {
                    Money::from_atoms(rng.gen_range(0..=1_000_000))
                }
            });
            Trader::new(
                format!("t{i:02}"),
                side,
                Valuation::from_unsorted_marginals(values).unwrap(),
            )
        })
        .collect();
    Market::new(traders, cap).unwrap()
}

/// Random market with at most `max_virtual` virtual traders in total.
pub fn small_market(rng: &mut impl Rng, max_virtual: u64) -> Market {
    loop {
        let market = random_market(rng, 8, 4);
        let units: u64 = market.traders().iter().map(|t| t.valuation.units()).sum();
        if units <= max_virtual {
            return market;
        }
    }
}

/// Brute-force argmax of `gain(t, price)` over `t`; smallest maximizer.
pub fn argmax_gain(trader: &Trader, price: Money) -> u64 {
    let mut best = (Money::ZERO, 0);
    for t in 0..=trader.valuation.units() {
        let g = trader.gain(t, price).unwrap();
        if g > best.0 {
            best = (g, t);
        }
    }
    best.1
}

/// Maximum total gain over every materially balanced allocation, found by
/// enumerating all per-trader unit counts.
pub fn brute_force_max_gft(market: &Market) -> Money {
    let traders = market.traders();
    let mut counts = vec![0u64; traders.len()];
    let mut best = Money::ZERO;
    loop {
        let bought: u64 = traders
            .iter()
            .zip(&counts)
            .filter(|(t, _)| t.is_buyer())
            .map(|(_, c)| c)
            .sum();
        let sold: u64 = traders
            .iter()
            .zip(&counts)
            .filter(|(t, _)| !t.is_buyer())
            .map(|(_, c)| c)
            .sum();
        if bought == sold {
            // Price is irrelevant once balanced; use zero.
            let gft: Money = traders
                .iter()
                .zip(&counts)
                .map(|(t, &c)| t.gain(c, Money::ZERO).unwrap())
                .sum();
            best = best.max(gft);
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == counts.len() {
                return best;
            }
            if counts[i] < traders[i].valuation.units() {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

/// Every strategic and balance property that must hold for one run, checked
/// from first principles. Returns a description of the first failure.
pub fn check_run(market: &Market, out: &MudaOutcome) -> Result<(), String> {
    for (name, side) in [("left", &out.left), ("right", &out.right)] {
        check_side(market, side, out.variant).map_err(|e| format!("{name}: {e}"))?;
    }
    let gains: Money = out.left.total_gain() + out.right.total_gain();
    if gains != out.total_gft {
        return Err("total gft is not the sum of gains".into());
    }
    let fees = out.left.total_fees() + out.right.total_fees();
    if out.agents_gft != out.total_gft - fees || out.market_maker_revenue != fees {
        return Err("agents gft / revenue mismatch".into());
    }
    if out.market_maker_revenue < Money::ZERO {
        return Err("market maker pays in".into());
    }
    if out.variant == Variant::Lottery && out.market_maker_revenue != Money::ZERO {
        return Err("lottery collects fees".into());
    }
    if out.total_gft > out.benchmark.max_gft {
        return Err("gft above optimum".into());
    }
    Ok(())
}

fn check_side(market: &Market, side: &SideOutcome, variant: Variant) -> Result<(), String> {
    if side.units_bought() != side.units_sold() {
        return Err(format!(
            "material balance {} vs {}",
            side.units_bought(),
            side.units_sold()
        ));
    }
    if variant == Variant::Lottery && side.payment_sum() != Money::ZERO {
        return Err("lottery payments do not net to zero".into());
    }
    let mut partial = 0;
    for (id, r) in &side.traders {
        let trader = market.trader(id).ok_or("unknown trader in outcome")?;
        let price = side.cross_price;
        let gain = trader.gain(r.units, price).map_err(|e| e.to_string())?;
        if gain != r.gain {
            return Err(format!(
                "{id}: reported gain {} but formula gives {gain}",
                r.gain
            ));
        }
        if r.net_gain != gain - r.fee || r.net_gain < Money::ZERO {
            return Err(format!("{id}: not individually rational ({})", r.net_gain));
        }
        if r.fee < Money::ZERO || r.fee > gain || (r.units == 0 && r.fee != Money::ZERO) {
            return Err(format!("{id}: fee {} out of bounds (gain {gain})", r.fee));
        }
        let expected_payment = match trader.side {
            Side::Buyer => price.times(r.units),
            Side::Seller => -price.times(r.units),
        };
        if r.payment != expected_payment {
            return Err(format!("{id}: payment inconsistent"));
        }
        let desired = trader.desired_units(price);
        if r.units > desired {
            return Err(format!("{id}: trades {} beyond desired {desired}", r.units));
        }
        let long = match side.long_side {
            LongSide::Buyers => Some(Side::Buyer),
            LongSide::Sellers => Some(Side::Seller),
            LongSide::Balanced => None,
        };
        if long != Some(trader.side) && r.units != desired {
            return Err(format!("{id}: short side rationed"));
        }
        if variant == Variant::Lottery && r.units > 0 && r.units < desired {
            partial += 1;
        }
        if variant == Variant::Lottery && r.fee != Money::ZERO {
            return Err(format!("{id}: lottery fee"));
        }
    }
    if partial > 1 {
        return Err(format!("{partial} partially filled traders"));
    }
    Ok(())
}
