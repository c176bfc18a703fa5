use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested quantity is undefined for this model kind.
    #[error("model error: {0}")]
    Model(String),

    /// Adaptive quadrature ran out of subdivisions.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error bound {error_bound:e})"
    )]
    Convergence {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },

    /// Malformed or inconsistent input data. `line` is 1-based when known.
    #[error("{}", match .line { Some(l) => format!("data error at line {l}: {message}"), None => format!("data error: {message}") })]
    Data { line: Option<usize>, message: String },

    /// The trap curvature became non-positive.
    #[error("trap destabilized: m·ω² + U'' = {0:e} N/m")]
    Instability(f64),

    /// A user-supplied nonspecular amplitude provider failed.
    #[error("provider error: {0}")]
    Provider(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn model(msg: impl Into<String>) -> Self {
        Error::Model(msg.into())
    }

    pub(crate) fn data(line: Option<usize>, msg: impl Into<String>) -> Self {
        Error::Data {
            line,
            message: msg.into(),
        }
    }
}
