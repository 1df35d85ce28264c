//! Randomized search for profitable misreports.
//!
//! All mechanism randomness (split and permutations) is fixed by the seed, so
//! each deviation is compared against the truthful run under exactly the same
//! coin flips. Gains are always evaluated with the trader's true valuation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::mechanisms::{run_muda, MudaOutcome, Variant};
use crate::{Error, Market, Money, Result, Side, Trader, TraderId, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviationKind {
    Truthful,
    Perturb,
    Truncate,
    Extend,
    Scale,
    Shift,
    /// Values within two ticks of the price the trader faces.
    Straddle,
    /// A report that wants to trade nothing at any positive price.
    Abstain,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzCase {
    pub variant: Variant,
    pub kind: DeviationKind,
    pub report: Vec<Money>,
    pub truthful_net_gain: Money,
    pub deviating_net_gain: Money,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub trader: TraderId,
    pub seed: u64,
    pub deviations: usize,
    /// Truthful net gain per variant, lottery first.
    pub truthful_net_gain: [Money; 2],
    /// Largest deviating-minus-truthful net gain seen per variant.
    pub max_improvement: [Money; 2],
    pub violations: Vec<FuzzCase>,
}

/// Tries `num_deviations` random misreports for `trader` under both variants.
pub fn fuzz_dsic(
    market: &Market,
    trader: &TraderId,
    num_deviations: usize,
    seed: u64,
) -> Result<FuzzReport> {
    let truth = market
        .trader(trader)
        .ok_or_else(|| Error::UnknownTrader(trader.0.clone()))?
        .clone();
    let variants = [Variant::Lottery, Variant::Vickrey];
    let truthful: Vec<(MudaOutcome, Money)> = variants
        .iter()
        .map(|&v| {
            let out = run_muda(market, v, seed);
            let net = true_net_gain(&truth, &out);
            (out, net)
        })
        .collect();
    let faced_price = truthful[0].0.trader_price(trader);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0x5eed);
    let mut max_improvement = [Money::ZERO; 2];
    let mut violations = Vec::new();
    for i in 0..num_deviations {
        let kind = if i == 0 {
            DeviationKind::Truthful
        } else {
            random_kind(&mut rng)
        };
        let report = misreport(&truth, market.max_units(), kind, faced_price, &mut rng)?;
        let deviated = market.with_valuation(trader, report.clone())?;
        for (vi, &variant) in variants.iter().enumerate() {
            let out = run_muda(&deviated, variant, seed);
            let net = true_net_gain(&truth, &out);
            let truthful_net = truthful[vi].1;
            max_improvement[vi] = max_improvement[vi].max(net - truthful_net);
            if net > truthful_net {
                violations.push(FuzzCase {
                    variant,
                    kind,
                    report: report.marginals().collect(),
                    truthful_net_gain: truthful_net,
                    deviating_net_gain: net,
                });
            }
        }
    }
    Ok(FuzzReport {
        trader: trader.clone(),
        seed,
        deviations: num_deviations,
        truthful_net_gain: [truthful[0].1, truthful[1].1],
        max_improvement,
        violations,
    })
}

impl MudaOutcome {
    /// Price faced by a trader: the one computed in the other half.
    pub fn trader_price(&self, id: &TraderId) -> Money {
        if self.left.traders.contains_key(id) {
            self.left.cross_price
        } else {
            self.right.cross_price
        }
    }
}

/// Net gain of the trader's allocation under its true valuation. A buyer's
/// units beyond its true valuation length are worth nothing to it.
pub fn true_net_gain(truth: &Trader, outcome: &MudaOutcome) -> Money {
    let Some(result) = outcome.trader(&truth.id) else {
        return Money::ZERO;
    };
    truth.gain_unchecked(result.units, outcome.trader_price(&truth.id)) - result.fee
}

fn random_kind(rng: &mut impl Rng) -> DeviationKind {
    use DeviationKind::*;
    [Perturb, Truncate, Extend, Scale, Shift, Straddle, Abstain][rng.gen_range(0..7)]
}

/// A random DMR report for `truth`. Sellers never report more units than
/// they hold; buyers never exceed `max_units`.
fn misreport(
    truth: &Trader,
    max_units: u64,
    kind: DeviationKind,
    price: Money,
    rng: &mut impl Rng,
) -> Result<Valuation> {
    let values: Vec<Money> = truth.valuation.marginals().collect();
    let len = values.len();
    let spread = values[0]
        .atoms()
        .max(price.atoms())
        .max(Money::from_int(1).atoms());
    let cap = match truth.side {
        Side::Buyer => max_units as usize,
        Side::Seller => len,
    };
    let clamp = |a: i64| Money::from_atoms(a.max(0));
    let report: Vec<Money> = match kind {
        DeviationKind::Truthful => values,
        DeviationKind::Perturb => values
            .iter()
            .map(|v| clamp(v.atoms() + rng.gen_range(-spread / 2..=spread / 2)))
            .collect(),
        DeviationKind::Truncate => {
            let keep = rng.gen_range(1..=len);
            if truth.side == Side::Seller && rng.gen_bool(0.5) {
                values[len - keep..].to_vec()
            } else {
                values[..keep].to_vec()
            }
        }
        DeviationKind::Extend => {
            let target = rng.gen_range(len..=cap.max(len));
            let mut out = values;
            while out.len() < target {
                out.push(clamp(rng.gen_range(0..=2 * spread)));
            }
            out
        }
        DeviationKind::Scale => {
            let factor = rng.gen_range(0.0..3.0);
            values
                .iter()
                .map(|v| clamp((v.atoms() as f64 * factor) as i64))
                .collect()
        }
        DeviationKind::Shift => {
            let shift = rng.gen_range(-spread..=spread);
            values.iter().map(|v| clamp(v.atoms() + shift)).collect()
        }
        DeviationKind::Straddle => {
            let n = rng.gen_range(1..=cap.max(1));
            (0..n)
                .map(|_| {
                    let delta = rng.gen_range(-2..=2);
                    clamp(price.atoms() + delta)
                })
                .collect()
        }
        DeviationKind::Abstain => {
            let value = match truth.side {
                Side::Buyer => Money::ZERO,
                Side::Seller => Money::from_atoms(spread).times(4) + price,
            };
            vec![value; rng.gen_range(1..=len)]
        }
    };
    Valuation::from_unsorted_marginals(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(x: i64) -> Money {
        Money::from_int(x)
    }

    fn val(xs: &[i64]) -> Valuation {
        Valuation::from_marginals(&xs.iter().map(|&x| m(x)).collect::<Vec<_>>()).unwrap()
    }

    fn market() -> Market {
        Market::new(
            vec![
                Trader::buyer("b1", val(&[100, 90, 80])),
                Trader::buyer("b2", val(&[60, 40, 20])),
                Trader::seller("alice", val(&[70, 60, 40, 20, 10])),
                Trader::seller("bob", val(&[65, 45, 35, 25, 15])),
                Trader::seller("carol", val(&[55, 30])),
                Trader::buyer("dave", val(&[75, 50, 45])),
            ],
            5,
        )
        .unwrap()
    }

    #[test]
    fn truthful_report_changes_nothing() {
        let report = fuzz_dsic(&market(), &TraderId::from("alice"), 1, 3).unwrap();
        assert!(report.violations.is_empty());
        assert_eq!(report.max_improvement, [Money::ZERO; 2]);
    }

    #[test]
    fn no_profitable_deviation_found() {
        let mk = market();
        for id in ["alice", "b1", "dave", "carol"] {
            for seed in 0..4 {
                let report = fuzz_dsic(&mk, &TraderId::from(id), 100, seed).unwrap();
                assert!(report.violations.is_empty(), "{:?}", report.violations);
            }
        }
    }

    #[test]
    fn abstaining_buyer_gets_nothing() {
        let mk = market();
        let id = TraderId::from("b2");
        let abstain = mk.with_valuation(&id, val(&[0, 0])).unwrap();
        let truth = mk.trader(&id).unwrap();
        for seed in 0..10 {
            for variant in [Variant::Lottery, Variant::Vickrey] {
                let out = run_muda(&abstain, variant, seed);
                assert_eq!(true_net_gain(truth, &out), Money::ZERO);
                let honest = true_net_gain(truth, &run_muda(&mk, variant, seed));
                assert!(honest >= Money::ZERO);
            }
        }
    }

    #[test]
    fn unknown_trader() {
        assert!(fuzz_dsic(&market(), &TraderId::from("zed"), 5, 0).is_err());
    }
}
