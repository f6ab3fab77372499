use thiserror::Error;

/// Errors raised by profile construction, geometry, comparison and distance routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed profile pieces: {0}")]
    MalformedPieces(String),

    #[error("profile is not admissible: {0}")]
    Inadmissible(String),

    #[error("argument {value} outside the domain {domain}")]
    OutOfDomain { value: f64, domain: String },

    #[error("derivative requested exactly at the kink r = {r}; ask for a one-sided value")]
    CornerDerivative { r: f64 },

    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),

    #[error("negative radicand {radicand} at r = {r}: profile is supercritical")]
    NumericalDomain { r: f64, radicand: f64 },

    #[error("quantity is singular at the horizon r = {r}")]
    SingularAtHorizon { r: f64 },

    #[error("quadrature did not reach tolerance {tol} on [{a}, {b}] (error estimate {estimate})")]
    QuadratureFailure {
        a: f64,
        b: f64,
        tol: f64,
        estimate: f64,
    },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("profile tail is unbounded, no finite ADM mass")]
    UnboundedTail,

    #[error("Penrose ratio delta = {delta} outside [0, 1)")]
    DeltaOutOfRange { delta: f64 },

    #[error("tube around the sphere of area {area} leaves the sphere-preserving region (needs area > {a_delta})")]
    TubeEscapesRegion { area: f64, a_delta: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cannot parse document: {0}")]
    Parse(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

pub type Result<V> = std::result::Result<V, Error>;
