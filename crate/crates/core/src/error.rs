use thiserror::Error;

/// Which tail of the lattice sum a truncation event refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{side} tail reached {cap} terms without meeting the truncation rule")]
    TermCapExceeded { side: Side, cap: usize },

    #[error("integrand returned a non-finite value at argument {arg}")]
    NonFiniteTerm { arg: f64 },

    #[error("imaginary residual {residual:e} exceeds bound {bound:e}")]
    Accuracy { residual: f64, bound: f64 },

    #[error("overflow guard: {0}")]
    Overflow(String),

    #[error("pole: 1/Gamma({s}) vanishes, Gamma is infinite")]
    Pole { s: f64 },

    #[error("refinement level {level} (h = {h}): {source}")]
    AtLevel {
        level: usize,
        h: f64,
        #[source]
        source: Box<Error>,
    },
}

/// Coarse classification used for process exit codes and C error codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Domain,
    Accuracy,
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Strips refinement-level annotations.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtLevel { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self.root() {
            Error::Domain(_) | Error::Pole { .. } => ErrorKind::Domain,
            _ => ErrorKind::Accuracy,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
