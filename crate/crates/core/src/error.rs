use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Domain(String),

    #[error("parameters must be in reduced units (hbar = mass = 1), got hbar = {hbar}, mass = {mass}")]
    NotReduced { hbar: f64, mass: f64 },

    #[error("invalid frequency omega_tilde = {omega_tilde}: {reason}")]
    Frequency { omega_tilde: f64, reason: String },

    #[error("expansion order {order} outside 0..={max}")]
    OrderOutOfRange { order: usize, max: usize },

    #[error("precision exhausted at order {order}: non-finite coefficient")]
    PrecisionExhausted { order: usize },

    #[error("no stationary point in [{lo}, {hi}]; widen the omega_tilde bracket")]
    NoStationaryPoint { lo: f64, hi: f64 },

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("wave function: {0}")]
    Profile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
