use crate::extremal::ExtremalRecord;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type. Variant names double as stable identifiers for the
/// CLI exit path, so renaming one is a breaking change.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("modulus must be at least 1")]
    ZeroModulus,

    #[error("modulus {0} exceeds the capacity cap 2^24")]
    CapacityExceeded(u64),

    #[error("element {x} out of range for {context}")]
    ElementOutOfRange { x: u64, context: String },

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("no prime found in [{lo}, {hi}]")]
    NoPrimeInRange { lo: u64, hi: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("modulus {0} is divisible by 3, so w -> 3w is not a bijection")]
    NonPrimeModulus(u64),

    #[error("relative density against an empty base set")]
    EmptyBase,

    #[error("almost-period base set T is empty")]
    EmptyT,

    #[error("sampling probability {0} exceeds 1")]
    ProbabilityOverflow(f64),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(&'static str),

    #[error("no regular dilate found at step {step}; worst violation: delta={delta}, perturbation={perturbation}, ratio={ratio}")]
    NoRegularRadius {
        step: f64,
        delta: f64,
        perturbation: f64,
        ratio: f64,
    },

    #[error("invalid radius {0}; radii must be finite and nonnegative")]
    InvalidRadius(f64),

    #[error("convolution output {0} is further than 0.25 from an integer")]
    RoundingDrift(f64),

    #[error("node budget exhausted; best known size {}", .0.max_size)]
    BudgetExceeded(Box<ExtremalRecord>),

    #[error("iteration did not terminate within {0} steps")]
    NonTermination(u64),

    #[error("density {0} is outside the step's admissible range")]
    DegenerateDensity(f64),

    #[error("{0}")]
    Domain(String),
}

impl Error {
    /// Stable name used by the CLI when reporting failures.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ZeroModulus => "ZeroModulus",
            Error::CapacityExceeded(_) => "CapacityExceeded",
            Error::ElementOutOfRange { .. } => "ElementOutOfRange",
            Error::ModulusMismatch(..) => "ModulusMismatch",
            Error::NoPrimeInRange { .. } => "NoPrimeInRange",
            Error::Parse(_) => "Parse",
            Error::NonPrimeModulus(_) => "NonPrimeModulus",
            Error::EmptyBase => "EmptyBase",
            Error::EmptyT => "EmptyT",
            Error::ProbabilityOverflow(_) => "ProbabilityOverflow",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::NoRegularRadius { .. } => "NoRegularRadius",
            Error::InvalidRadius(_) => "InvalidRadius",
            Error::RoundingDrift(_) => "RoundingDrift",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::NonTermination(_) => "NonTermination",
            Error::DegenerateDensity(_) => "DegenerateDensity",
            Error::Domain(_) => "Domain",
        }
    }
}
