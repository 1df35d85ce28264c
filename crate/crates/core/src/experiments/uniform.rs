use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Market, Money, Result, Side, Trader, Valuation};

/// Synthetic market: every trader draws `max_units / group_size` values
/// uniformly from `[center - amplitude, center + amplitude]` and holds (or
/// wants) `group_size` units at each value. Buyer or seller is a fair coin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformSpec {
    pub num_traders: usize,
    /// `m`: units sharing each drawn value.
    pub group_size: u64,
    /// `M`: units per trader.
    pub max_units: u64,
    pub center: Money,
    pub amplitude: Money,
    pub seed: u64,
}

impl UniformSpec {
    /// Number of values drawn per trader.
    pub fn groups(&self) -> u64 {
        self.max_units / self.group_size.max(1)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::SpecInvalid(msg.to_string()));
        if self.group_size == 0 {
            return fail("group size must be positive");
        }
        if self.max_units < self.group_size {
            return fail("max units must be at least the group size");
        }
        if self.amplitude.is_negative() {
            return fail("amplitude must be non-negative");
        }
        if self.amplitude >= self.center {
            return fail("amplitude must be below the center value");
        }
        Ok(())
    }
}

pub fn generate_uniform_market(spec: &UniformSpec) -> Result<Market> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let low = (spec.center - spec.amplitude).atoms();
    let high = (spec.center + spec.amplitude).atoms();
    let traders = (0..spec.num_traders)
        .map(|i| {
            let side = if rng.gen_bool(0.5) {
                Side::Buyer
            } else {
                Side::Seller
            };
            let groups = (0..spec.groups()).map(|_| {
                (
                    Money::from_atoms(rng.gen_range(low..=high)),
                    spec.group_size,
                )
            });
            let valuation = Valuation::from_runs(groups.collect::<Vec<_>>())?;
            Ok(Trader::new(format!("t{i}"), side, valuation))
        })
        .collect::<Result<Vec<_>>>()?;
    Market::new(traders, spec.max_units)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> UniformSpec {
        UniformSpec {
            num_traders: 1,
            group_size: 100,
            max_units: 100_000,
            center: Money::from_int(500),
            amplitude: Money::from_int(250),
            seed: 9,
        }
    }

    #[test]
    fn reported_setting_shape() {
        let market = generate_uniform_market(&spec()).unwrap();
        let trader = &market.traders()[0];
        assert_eq!(trader.valuation.units(), 100_000);
        assert!(trader.valuation.runs().iter().all(|r| r.count % 100 == 0));
        assert!(trader.valuation.max_value() <= Money::from_int(750));
        assert!(trader.valuation.min_value() >= Money::from_int(250));
        // 1000 draws from ~5 million values: collisions are rare.
        assert!(trader.valuation.runs().len() > 990);
    }

    #[test]
    fn zero_amplitude_is_constant() {
        let market = generate_uniform_market(&UniformSpec {
            amplitude: Money::ZERO,
            num_traders: 5,
            ..spec()
        })
        .unwrap();
        for t in market.traders() {
            assert_eq!(
                t.valuation.runs(),
                &[crate::Run {
                    value: Money::from_int(500),
                    count: 100_000
                }]
            );
        }
    }

    #[test]
    fn empirical_mean_near_center() {
        let s = UniformSpec {
            num_traders: 200,
            group_size: 1,
            max_units: 50,
            ..spec()
        };
        let market = generate_uniform_market(&s).unwrap();
        let samples = 200.0 * 50.0;
        let mean = market
            .traders()
            .iter()
            .flat_map(|t| t.valuation.marginals())
            .map(Money::to_f64)
            .sum::<f64>()
            / samples;
        let bound = 3.0 * 250.0 / f64::sqrt(samples);
        assert!((mean - 500.0).abs() <= bound, "{mean}");
    }

    #[test]
    fn invalid_specs() {
        for bad in [
            UniformSpec {
                group_size: 0,
                ..spec()
            },
            UniformSpec {
                max_units: 10,
                ..spec()
            },
            UniformSpec {
                amplitude: Money::from_int(500),
                ..spec()
            },
        ] {
            assert!(matches!(
                generate_uniform_market(&bad),
                Err(Error::SpecInvalid(_))
            ));
        }
    }
}
