use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{op}: argument {value} is outside the domain")]
    Domain { op: &'static str, value: f64 },

    #[error("quadrature did not converge: error estimate {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error("integration unstable at t = {time} ps: |m| drifted by {drift:.3e} within one step")]
    Unstable { time: f64, drift: f64 },

    #[error("analysis window [{start}, {end}] ps is not covered by the trajectory [{first}, {last}] ps")]
    WindowNotCovered { start: f64, end: f64, first: f64, last: f64 },

    #[error("expansion order {m_max} is not supported for the {kernel} kernel (maximum {max})")]
    UnsupportedOrder { kernel: &'static str, m_max: usize, max: usize },

    #[error("polynomial is degenerate: leading coefficient vanishes")]
    DegeneratePolynomial,

    #[error("eigenvalue iteration failed to converge")]
    NoConvergence,
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
