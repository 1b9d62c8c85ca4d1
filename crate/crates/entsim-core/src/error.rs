use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid reservoir parameters: {0}")]
    InvalidParams(String),

    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),

    #[error("spectral density needs the atomic transition frequency omega_a")]
    MissingOmegaA,

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("time grid too coarse for the integrator: h*rate = {0:.3e} exceeds 0.01")]
    GridTooCoarse(f64),

    #[error("amplitude is not physical: |nu|^2 = {nu_sq}")]
    NonPhysicalAmplitude { nu_sq: f64 },

    #[error("duplicate qubit label {0}")]
    DuplicateLabel(String),

    #[error("label {0} not present in the register")]
    UnknownLabel(String),

    #[error("state vector length {got} does not match 2^{qubits}")]
    BadDimension { got: usize, qubits: usize },

    #[error("state norm^2 = {0} is not 1 within tolerance")]
    NotNormalized(f64),

    #[error("matrix is not a valid density operator: {0}")]
    InvalidDensityMatrix(String),

    #[error("reservoir qubit carries excitation before the pair map is applied")]
    ReservoirNotVacuum,

    #[error("invalid qubit subset: {0}")]
    InvalidSubset(String),

    #[error("bipartition does not match the register: {0}")]
    DimensionMismatch(String),

    #[error("the bipartition-averaged measure supports 4 to 6 parties, got {0}")]
    UnsupportedPartyCount(usize),

    #[error("unknown initial state '{0}'")]
    UnknownState(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),

    #[error("gamma column is missing from the input")]
    MissingGammaColumn,

    #[error("malformed csv input: {0}")]
    CsvParse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
