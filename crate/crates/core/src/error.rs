use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter sets differ: [{left}] vs [{right}]")]
    ParamSetMismatch { left: String, right: String },

    #[error("parameter `{0}` is not declared")]
    UndeclaredParam(String),

    #[error("parameter `{0}` is unbound")]
    UnboundParam(String),

    #[error("residual spans channels {0:?}; expected the single channel 1")]
    MultiChannelResidual(Vec<u32>),

    #[error("procedure needs {needed} parameter entries, got {given}")]
    InsufficientParams { needed: usize, given: usize },

    #[error("invalid procedure: {0}")]
    InvalidProcedure(String),

    #[error("functional is not univariate in `{param}`: also depends on {others:?}")]
    NotUnivariate { param: String, others: Vec<String> },

    #[error("functional exceeds degree 2 in `{0}`")]
    NotBiquadratic(String),

    #[error("empty search box [{lo}, {hi}]")]
    EmptyBox { lo: String, hi: String },

    #[error("coordinate descent did not converge from any start")]
    NoConvergence,

    #[error("minimizer check failed: {0}")]
    MinimizerCheck(String),

    #[error("optimization failed at step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
