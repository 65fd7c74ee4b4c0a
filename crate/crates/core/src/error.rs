use std::io;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(thiserror::Error, Debug)]
pub enum Error {
    #[error("cannot parse group {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid group parameters: {0}")]
    InvalidSpec(String),

    #[error("element is not a canonical element of {spec}")]
    VariantMismatch { spec: String },

    #[error("generator index {index} out of range for {spec}")]
    GeneratorOutOfRange { spec: String, index: usize },

    #[error("sphere of radius {radius} for {spec} exceeds the element cap of {cap}")]
    BudgetExceeded { spec: String, radius: u32, cap: u64 },

    #[error("{pairs} pairs exceed the pair budget of {budget}")]
    PairBudgetExceeded { pairs: u128, budget: u128 },

    #[error("sphere count overflows at radius {radius} for {spec}")]
    CountOverflow { spec: String, radius: u32 },

    #[error("no uniform sampler for {spec} at radius {radius}")]
    NoSampler { spec: String, radius: u32 },

    #[error("dataset for {spec} at radius {radius} is counts-only")]
    CountsOnly { spec: String, radius: u32 },

    #[error("a seed is required for sampled estimates")]
    SeedRequired,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{0} is not supported by the free-product diagnostics")]
    Unsupported(String),

    #[error("cache checksum mismatch (stored {stored:016x}, computed {computed:016x})")]
    ChecksumMismatch { stored: u64, computed: u64 },

    #[error("cache format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u16, expected: u16 },

    #[error("cache holds {found}, expected {expected}")]
    SpecMismatch { found: String, expected: String },

    #[error("malformed cache file: {0}")]
    MalformedCache(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
