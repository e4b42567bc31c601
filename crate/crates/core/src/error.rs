use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid bath #{index}: {reason}")]
    InvalidBath { index: usize, reason: String },

    #[error("environment has no baths")]
    EmptyEnvironment,

    #[error("detuning {0} is only meaningful when the two splittings are equal")]
    DetuningOutsideIdenticalMode(f64),

    #[error("invalid splittings: {0}")]
    InvalidSplitting(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("level splitting must be positive for the transverse channel, got {0}")]
    NonPositiveDelta(f64),

    #[error("rates of the two TLS differ; symmetric coupling J_n^(1) = J_n^(2) required")]
    AsymmetricCoupling,

    #[error("downward rate gamma vanishes")]
    ZeroGamma,

    #[error("beta_4 vanishes while beta_1 does not; eta' is undefined")]
    UndefinedEtaPrime,

    #[error("unsupported bath dimension {0} (expected 1, 2 or 3)")]
    UnsupportedDimension(u32),

    #[error("splittings are identical; use the identical-splitting solvers")]
    IdenticalSplittings,

    #[error("splittings differ; operation requires identical splittings")]
    DifferentSplittings,

    #[error("total rate of TLS {0} vanishes; its marginal is undetermined")]
    ZeroTotalRate(usize),

    #[error("the stationarity system has no unique steady state")]
    NonUniqueSteadyState,

    #[error("kernel vector is not a physical state: {0}")]
    NoPhysicalState(String),

    #[error("population block eigenvalues do not match the golden-rule rates: {0}")]
    EigenstructureMismatch(String),

    #[error("oracle not applicable: {0}")]
    InapplicableRegime(String),

    #[error("invalid rates: {0}")]
    InvalidRates(String),

    #[error("limiting state undefined at |kappa| = 1, theta = 0")]
    DegenerateLimit,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Errors caused by the input configuration rather than by the solve.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidBath { .. }
                | Error::EmptyEnvironment
                | Error::DetuningOutsideIdenticalMode(_)
                | Error::InvalidSplitting(_)
                | Error::InvalidConfig(_)
        )
    }

    pub fn is_degeneracy(&self) -> bool {
        matches!(self, Error::NonUniqueSteadyState)
    }
}
