//! Error type shared by every module in the crate.

use crate::experiment::SweepResult;

/// Everything that can go wrong, from malformed graph files to solver
/// breakdowns. Variants carry enough context to be actionable without
/// holding references into the structures that produced them.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A construction or semantic error attributed to a line of a graph file.
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("expected `vertex <id> <mu> <a>` or `edge <id1> <id2> <w>`: {0}")]
    Syntax(String),

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),

    #[error("self-loop at `{0}`")]
    SelfLoop(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("vertex index {index} out of range for a graph with {len} vertices")]
    VertexOutOfRange { index: usize, len: usize },

    #[error("vertex measure must be positive: mu({id}) = {value}")]
    NonPositiveMeasure { id: String, value: f64 },

    #[error("edge weight must be positive: w({a},{b}) = {value}")]
    NonPositiveWeight { a: String, b: String, value: f64 },

    #[error("potential must be nonnegative: a({id}) = {value}")]
    NegativePotential { id: String, value: f64 },

    #[error("graph is not connected")]
    Disconnected,

    #[error("domain interior is empty")]
    EmptyInterior,

    #[error("potential well is empty: a(x) > 0 everywhere")]
    EmptyWell,

    #[error("potential well is not connected")]
    DisconnectedWell,

    #[error("function has {got} values but the graph has {expected} vertices")]
    LengthMismatch { got: usize, expected: usize },

    #[error("non-finite value {value} at vertex `{vertex}`")]
    NonFinite { vertex: String, value: f64 },

    #[error("function must vanish outside the domain interior: u({vertex}) = {value}")]
    SupportViolation { vertex: String, value: f64 },

    #[error("L^q norms require q >= 1, got q = {0}")]
    BadExponent(f64),

    #[error("coupling constant lambda must be positive, got {0}")]
    NonPositiveLambda(f64),

    #[error("nonlinearity exponent must satisfy p >= 2, got {0}")]
    BadPower(f64),

    #[error("the zero function cannot be projected onto the Nehari manifold")]
    ZeroFunction,

    #[error("nonlinear mass vanishes; nothing balances the quadratic part")]
    ZeroNonlinearMass,

    #[error("invalid solver configuration: {0}")]
    BadConfig(String),

    #[error("Newton step has a singular Jacobian")]
    SingularJacobian,

    #[error("Newton iteration diverged: residual would not decrease at the smallest damping")]
    NewtonDiverged,

    #[error("no start converged: best residuals el = {best_el:.3e}, nehari = {best_nehari:.3e}")]
    NoStartConverged { best_el: f64, best_nehari: f64 },

    #[error("every start collapsed to the zero function")]
    ZeroCollapse,

    #[error("exhaustive search is limited to {max} vertices, got {got}")]
    OracleTooLarge { got: usize, max: usize },

    #[error("exhaustive search found no nontrivial solution")]
    OracleEmpty,

    #[error("lambda grid must be positive and strictly increasing")]
    BadLambdaGrid,

    #[error("sweep requires a potential that is not identically zero")]
    TrivialPotential,

    /// A sweep failed partway; the metrics gathered before the failure are
    /// kept so callers can still inspect the completed prefix.
    #[error("sweep aborted at lambda = {lambda}: {source}")]
    SweepAborted {
        lambda: f64,
        partial: Box<SweepResult>,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at_line(self, line: usize) -> Error {
        Error::AtLine {
            line,
            source: Box::new(self),
        }
    }

    /// Unwraps the line-number wrapper, if any, exposing the underlying cause.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::AtLine { source, .. } => source.root_cause(),
            Error::SweepAborted { source, .. } => source.root_cause(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
