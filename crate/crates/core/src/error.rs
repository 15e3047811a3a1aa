use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid gas parameters: {0}")]
    InvalidGas(String),

    #[error("total density must be positive (rho1 = {rho1}, rho2 = {rho2})")]
    ZeroDensity { rho1: f64, rho2: f64 },

    #[error("partial density of component {component} is negative: {value}")]
    NegativePartialDensity { component: usize, value: f64 },

    #[error("pressure discriminant is not positive: d = {d}")]
    NegativeDiscriminant { d: f64 },

    #[error("physical pressure root is not positive: p = {p}")]
    NonpositivePressure { p: f64 },

    #[error("temperature is not positive: theta = {theta}")]
    NonpositiveTemperature { theta: f64 },

    #[error("squared speed of sound is not positive: cs2 = {cs2}")]
    NonpositiveSoundSpeed { cs2: f64 },

    #[error("pressure {p} sits on the pole p = -p_star of component {component}")]
    PoleAtP { p: f64, component: usize },

    #[error("invalid primitive state: {0}")]
    InvalidPrimitive(String),

    #[error("field length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("averaged density of component {component} vanishes at half node {half_node}")]
    ZeroAveragedDensity { component: usize, half_node: usize },

    #[error("non-finite {quantity} at node {node}, t = {time:e}")]
    StateBlowup {
        node: usize,
        time: f64,
        quantity: &'static str,
    },

    #[error("admissibility lost at node {node}, t = {time:e}: {cause}")]
    AdmissibilityLost { node: usize, time: f64, cause: Box<Error> },

    #[error("invalid scheme configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown case '{0}' (expected one of A..G)")]
    UnknownCase(String),

    #[error("mesh with {n} cells is not nested in the reference mesh with {n_ref} cells")]
    NonNestedMesh { n: usize, n_ref: usize },

    #[error("config parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
