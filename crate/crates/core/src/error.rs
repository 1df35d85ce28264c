use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid money literal `{0}`")]
    MoneyParse(String),
    #[error("money literal `{0}` has more than 4 decimal places")]
    TooManyDecimals(String),
    #[error("valuation must contain at least one unit")]
    EmptyValuation,
    #[error("marginal values increase at unit {index}: {previous} then {next}")]
    DmrViolation {
        index: usize,
        previous: crate::Money,
        next: crate::Money,
    },
    #[error("negative marginal value {0}")]
    NegativeValue(crate::Money),
    #[error("{units} units requested but trader `{trader}` holds or wants at most {cap}")]
    UnitsOutOfRange {
        trader: String,
        units: u64,
        cap: u64,
    },
    #[error("duplicate trader id `{0}`")]
    DuplicateTrader(String),
    #[error("trader `{trader}` has {units} units, above the market cap of {max_units}")]
    TooManyUnits {
        trader: String,
        units: u64,
        max_units: u64,
    },
    #[error("max_units must be positive")]
    ZeroMaxUnits,
    #[error("trader `{trader}`: {source}")]
    Trader {
        trader: String,
        #[source]
        source: Box<Error>,
    },
    #[error("unknown trader `{0}`")]
    UnknownTrader(String),
    #[error("invalid experiment spec: {0}")]
    SpecInvalid(String),
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: quantity must be positive")]
    NonPositiveQuantity { line: u64 },
    #[error("line {line}: price must be positive")]
    NonPositivePrice { line: u64 },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    JsonField {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
