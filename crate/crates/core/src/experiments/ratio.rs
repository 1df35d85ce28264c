use std::io::Write;

use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::uniform::{generate_uniform_market, UniformSpec};
use crate::mechanisms::{run_muda, Variant};
use crate::{Error, Market, Result, Trader};

/// Where the markets of a ratio experiment come from, and what the swept
/// value `x` means.
#[derive(Clone, Copy, Debug)]
pub enum MarketSource<'a> {
    /// `x` is the number of traders.
    UniformTraders(UniformSpec),
    /// `x` is the per-trader unit cap `M`; the trader count is
    /// `2 * total_units / M`, so sellers hold `total_units` in expectation.
    UniformConcentration { spec: UniformSpec, total_units: u64 },
    /// `x` traders drawn with replacement from an empirical pool.
    Pool(&'a [Trader]),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub x: u64,
    pub mean_lottery: f64,
    pub sd_lottery: f64,
    pub mean_vickrey_total: f64,
    pub sd_vickrey_total: f64,
    pub mean_vickrey_agents: f64,
    pub sd_vickrey_agents: f64,
    /// Repetitions with a positive optimum, i.e. those averaged.
    pub reps: usize,
    pub skipped_zero_gft: usize,
}

pub const CSV_HEADER: &str = "x,mean_lottery,sd_lottery,mean_vickrey_total,sd_vickrey_total,mean_vickrey_agents,sd_vickrey_agents,reps,skipped_zero_gft";

/// Ratios of one repetition: (lottery, vickrey total, vickrey agents).
type Ratios = Option<(f64, f64, f64)>;

/// Runs both variants on `repetitions` markets per sweep value, with the same
/// mechanism seed for both, and averages the competitive ratios.
///
/// Every repetition derives its own seeds from `(seed, sweep index,
/// repetition)`, so results do not depend on scheduling.
pub fn run_ratio_experiment(
    source: MarketSource<'_>,
    sweep: &[u64],
    repetitions: usize,
    seed: u64,
) -> Result<Vec<ExperimentRow>> {
    sweep
        .iter()
        .enumerate()
        .map(|(xi, &x)| {
            let ratios = (0..repetitions)
                .into_par_iter()
                .map(|rep| {
                    let mut rng = repetition_rng(seed, xi as u64, rep as u64);
                    let market = build_market(source, x, &mut rng)?;
                    Ok(ratios(&market, rng.next_u64()))
                })
                .collect::<Result<Vec<Ratios>>>()?;
            Ok(summarize(x, &ratios))
        })
        .collect()
}

fn repetition_rng(seed: u64, sweep_index: u64, rep: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&sweep_index.to_le_bytes());
    key[16..24].copy_from_slice(&rep.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

fn build_market(source: MarketSource<'_>, x: u64, rng: &mut ChaCha8Rng) -> Result<Market> {
    match source {
        MarketSource::UniformTraders(spec) => generate_uniform_market(&UniformSpec {
            num_traders: x as usize,
            seed: rng.next_u64(),
            ..spec
        }),
        MarketSource::UniformConcentration { spec, total_units } => {
            if x == 0 {
                return Err(Error::SpecInvalid("max units must be positive".into()));
            }
            generate_uniform_market(&UniformSpec {
                num_traders: (2 * total_units / x) as usize,
                max_units: x,
                group_size: spec.group_size.min(x),
                seed: rng.next_u64(),
                ..spec
            })
        }
        MarketSource::Pool(pool) => {
            if pool.is_empty() {
                return Err(Error::SpecInvalid("empty trader pool".into()));
            }
            let traders: Vec<Trader> = (0..x)
                .map(|i| {
                    let t = pool.choose(rng).expect("pool is not empty");
                    Trader::new(format!("{}#{i}", t.id), t.side, t.valuation.clone())
                })
                .collect();
            let max_units = traders
                .iter()
                .map(|t| t.valuation.units())
                .max()
                .unwrap_or(1);
            Market::new(traders, max_units)
        }
    }
}

fn ratios(market: &Market, mechanism_seed: u64) -> Ratios {
    let lottery = run_muda(market, Variant::Lottery, mechanism_seed);
    let vickrey = run_muda(market, Variant::Vickrey, mechanism_seed);
    Some((
        lottery.total_ratio()?,
        vickrey.total_ratio()?,
        vickrey.agents_ratio()?,
    ))
}

fn mean_sd(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

fn summarize(x: u64, ratios: &[Ratios]) -> ExperimentRow {
    let valid: Vec<(f64, f64, f64)> = ratios.iter().flatten().copied().collect();
    let (mean_lottery, sd_lottery) = mean_sd(valid.iter().map(|r| r.0));
    let (mean_vickrey_total, sd_vickrey_total) = mean_sd(valid.iter().map(|r| r.1));
    let (mean_vickrey_agents, sd_vickrey_agents) = mean_sd(valid.iter().map(|r| r.2));
    ExperimentRow {
        x,
        mean_lottery,
        sd_lottery,
        mean_vickrey_total,
        sd_vickrey_total,
        mean_vickrey_agents,
        sd_vickrey_agents,
        reps: valid.len(),
        skipped_zero_gft: ratios.len() - valid.len(),
    }
}

/// Writes rows as CSV with six decimals.
pub fn write_rows_csv(rows: &[ExperimentRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{},{}",
            r.x,
            r.mean_lottery,
            r.sd_lottery,
            r.mean_vickrey_total,
            r.sd_vickrey_total,
            r.mean_vickrey_agents,
            r.sd_vickrey_agents,
            r.reps,
            r.skipped_zero_gft
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Money;

    fn spec() -> UniformSpec {
        UniformSpec {
            num_traders: 0,
            group_size: 1,
            max_units: 10,
            center: Money::from_int(500),
            amplitude: Money::from_int(250),
            seed: 0,
        }
    }

    #[test]
    fn deterministic_rows() {
        let a = run_ratio_experiment(MarketSource::UniformTraders(spec()), &[40], 5, 11).unwrap();
        let b = run_ratio_experiment(MarketSource::UniformTraders(spec()), &[40], 5, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].reps + a[0].skipped_zero_gft, 5);
    }

    #[test]
    fn ratios_are_bounded() {
        let rows = run_ratio_experiment(MarketSource::UniformTraders(spec()), &[2, 10, 30], 20, 3)
            .unwrap();
        for row in rows {
            for v in [
                row.mean_lottery,
                row.mean_vickrey_total,
                row.mean_vickrey_agents,
            ] {
                assert!(v.is_nan() || (0.0..=1.0).contains(&v), "{row:?}");
            }
        }
    }

    #[test]
    fn zero_gain_markets_are_skipped() {
        let rows =
            run_ratio_experiment(MarketSource::UniformTraders(spec()), &[0, 1], 4, 0).unwrap();
        for row in rows {
            assert_eq!((row.reps, row.skipped_zero_gft), (0, 4));
            assert!(row.mean_lottery.is_nan());
        }
    }

    #[test]
    fn csv_layout() {
        let rows = vec![summarize(5, &[Some((0.5, 1.0, 0.25)), None])];
        let mut buf = Vec::new();
        write_rows_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            format!("{CSV_HEADER}\n5,0.500000,0.000000,1.000000,0.000000,0.250000,0.000000,1,1\n")
        );
    }
}
