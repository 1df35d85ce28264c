use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use muda_core::experiments::{
    fuzz_dsic, ingest_orderbook, orderbook::write_orders, run_ratio_experiment,
    synthetic_orderbook, write_rows_csv, MarketSource, SyntheticOrderbook, UniformSpec,
};
use muda_core::{optimal_trade, resolve_side, run_muda, Market, Money, TraderId, Variant};

/// Truthful multi-unit double auction by random market halving.
#[derive(Parser)]
#[command(name = "muda", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the mechanism on a market file and print the outcome as JSON.
    Run(RunArgs),
    /// Print the efficient allocation and the equilibrium interval.
    Optimal(InputArgs),
    /// Competitive ratios on uniform markets, sweeping the trader count.
    ExperimentUniform(UniformArgs),
    /// Competitive ratios with fixed total units, sweeping the unit cap M.
    ExperimentConcentration(ConcentrationArgs),
    /// Competitive ratios on traders resampled from an order-book CSV.
    ExperimentOrderbook(OrderbookArgs),
    /// Search for profitable misreports by one trader.
    Fuzz(FuzzArgs),
    /// Write a synthetic start-of-day order-book CSV.
    GenOrderbook(GenArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Market JSON file.
    market: PathBuf,
    /// Output file (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SeedArg {
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "lottery")]
    variant: Variant,
    #[command(flatten)]
    seed: SeedArg,
    /// Resolve the whole market as one side facing `--price`, skipping the split.
    #[arg(long, requires = "price")]
    side_only: bool,
    #[arg(long, requires = "side_only")]
    price: Option<Money>,
}

#[derive(Args)]
struct ValueArgs {
    /// Units per group of equal marginal values.
    #[arg(long = "m", default_value_t = 1)]
    group_size: u64,
    /// Centre of the value distribution.
    #[arg(long = "V", default_value = "500")]
    center: Money,
    /// Half-width of the value distribution.
    #[arg(long = "A", default_value = "250")]
    amplitude: Money,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[command(flatten)]
    seed: SeedArg,
    /// Output CSV (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct UniformArgs {
    #[arg(long, value_delimiter = ',', default_value = "10,50,100,500,1000")]
    n_list: Vec<u64>,
    /// Maximum units per trader.
    #[arg(long = "M", default_value_t = 10)]
    max_units: u64,
    #[command(flatten)]
    values: ValueArgs,
}

#[derive(Args)]
struct ConcentrationArgs {
    #[arg(
        long = "M-list",
        value_delimiter = ',',
        default_value = "100,1000,10000,100000"
    )]
    m_list: Vec<u64>,
    #[arg(long, default_value_t = 100_000)]
    total_units: u64,
    #[command(flatten)]
    values: ValueArgs,
}

#[derive(Args)]
struct OrderbookArgs {
    /// Order-book CSV with header `symbol,date,order_date,side,price,quantity`.
    orders: PathBuf,
    /// Symbol whose trader pool is sampled; optional if the file has one symbol.
    #[arg(long)]
    symbol: Option<String>,
    #[arg(long, value_delimiter = ',', default_value = "10,20,40,80,160")]
    n_list: Vec<u64>,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FuzzArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    trader: String,
    #[arg(long, default_value_t = 200)]
    deviations: usize,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 3)]
    symbols: usize,
    #[arg(long, default_value_t = 5)]
    days: usize,
    #[arg(long, default_value_t = 20)]
    traders_per_day: usize,
    #[arg(long, default_value_t = 10)]
    orders_per_trader: usize,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Run(args) => run(args)?,
        Command::Optimal(args) => {
            let market = load(&args.market)?;
            write_json(&optimal_trade(&market), args.out.as_deref())?;
        }
        Command::ExperimentUniform(args) => experiment_uniform(args)?,
        Command::ExperimentConcentration(args) => experiment_concentration(args)?,
        Command::ExperimentOrderbook(args) => experiment_orderbook(args)?,
        Command::Fuzz(args) => return fuzz(args),
        Command::GenOrderbook(args) => {
            let seed = announce(&args.seed);
            let records = synthetic_orderbook(&SyntheticOrderbook {
                symbols: args.symbols,
                days: args.days,
                traders_per_day: args.traders_per_day,
                mean_orders_per_trader: args.orders_per_trader,
                seed,
            });
            write_orders(&records, output(args.out.as_deref())?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn announce(seed: &SeedArg) -> u64 {
    eprintln!("seed: {}", seed.seed);
    seed.seed
}

fn load(path: &Path) -> Result<Market> {
    Market::load(path).with_context(|| format!("reading market {}", path.display()))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json(value: &impl serde::Serialize, path: Option<&Path>) -> Result<()> {
    let mut out = output(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn run(args: RunArgs) -> Result<()> {
    let market = load(&args.input.market)?;
    let seed = announce(&args.seed);
    match args.price {
        Some(price) if args.side_only => {
            let side = resolve_side(&market, price, args.variant, seed);
            write_json(&side, args.input.out.as_deref())
        }
        _ => write_json(
            &run_muda(&market, args.variant, seed),
            args.input.out.as_deref(),
        ),
    }
}

/// Writes `# key=value` lines followed by the CSV rows.
fn write_experiment(
    config: &[(&str, String)],
    source: MarketSource<'_>,
    sweep: &[u64],
    reps: usize,
    seed: u64,
    path: Option<&Path>,
) -> Result<()> {
    let rows = run_ratio_experiment(source, sweep, reps, seed)?;
    let mut out = output(path)?;
    for (key, value) in config {
        writeln!(out, "# {key}={value}")?;
    }
    write_rows_csv(&rows, &mut out)?;
    out.flush()?;
    Ok(())
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn value_config(v: &ValueArgs, seed: u64) -> Vec<(&'static str, String)> {
    vec![
        ("m", v.group_size.to_string()),
        ("V", v.center.to_string()),
        ("A", v.amplitude.to_string()),
        ("reps", v.reps.to_string()),
        ("seed", seed.to_string()),
    ]
}

fn uniform_spec(v: &ValueArgs, max_units: u64) -> Result<UniformSpec> {
    let spec = UniformSpec {
        num_traders: 0,
        group_size: v.group_size,
        max_units,
        center: v.center,
        amplitude: v.amplitude,
        seed: 0,
    };
    spec.validate()?;
    Ok(spec)
}

fn experiment_uniform(args: UniformArgs) -> Result<()> {
    let seed = announce(&args.values.seed);
    let spec = uniform_spec(&args.values, args.max_units)?;
    let mut config = vec![
        ("experiment", "uniform".to_string()),
        ("n_list", join(&args.n_list)),
        ("M", args.max_units.to_string()),
    ];
    config.extend(value_config(&args.values, seed));
    write_experiment(
        &config,
        MarketSource::UniformTraders(spec),
        &args.n_list,
        args.values.reps,
        seed,
        args.values.out.as_deref(),
    )
}

fn experiment_concentration(args: ConcentrationArgs) -> Result<()> {
    let seed = announce(&args.values.seed);
    let largest = args.m_list.iter().copied().max().unwrap_or(1);
    let spec = uniform_spec(&args.values, largest)?;
    let mut config = vec![
        ("experiment", "concentration".to_string()),
        ("M_list", join(&args.m_list)),
        ("total_units", args.total_units.to_string()),
    ];
    config.extend(value_config(&args.values, seed));
    write_experiment(
        &config,
        MarketSource::UniformConcentration {
            spec,
            total_units: args.total_units,
        },
        &args.m_list,
        args.values.reps,
        seed,
        args.values.out.as_deref(),
    )
}

fn experiment_orderbook(args: OrderbookArgs) -> Result<()> {
    let seed = announce(&args.seed);
    let file =
        File::open(&args.orders).with_context(|| format!("opening {}", args.orders.display()))?;
    let mut pools = ingest_orderbook(io::BufReader::new(file))?;
    let symbol = match args.symbol {
        Some(s) => s,
        None if pools.len() == 1 => pools.keys().next().cloned().unwrap_or_default(),
        None => bail!(
            "the file has {} symbols; choose one with --symbol ({})",
            pools.len(),
            pools.keys().cloned().collect::<Vec<_>>().join(", ")
        ),
    };
    let pool = pools
        .remove(&symbol)
        .with_context(|| format!("symbol `{symbol}` not found in {}", args.orders.display()))?;
    let config = [
        ("experiment", "orderbook".to_string()),
        ("orders", args.orders.display().to_string()),
        ("symbol", symbol),
        ("pool_size", pool.len().to_string()),
        ("n_list", join(&args.n_list)),
        ("reps", args.reps.to_string()),
        ("seed", seed.to_string()),
    ];
    write_experiment(
        &config,
        MarketSource::Pool(&pool),
        &args.n_list,
        args.reps,
        seed,
        args.out.as_deref(),
    )
}

fn fuzz(args: FuzzArgs) -> Result<ExitCode> {
    let market = load(&args.input.market)?;
    let seed = announce(&args.seed);
    let report = fuzz_dsic(
        &market,
        &TraderId::from(args.trader.as_str()),
        args.deviations,
        seed,
    )?;
    write_json(&report, args.input.out.as_deref())?;
    if report.violations.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{} profitable deviations found", report.violations.len());
        Ok(ExitCode::FAILURE)
    }
}
