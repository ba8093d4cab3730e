//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the operation's mathematical domain.
    Domain(&'static str),
    /// Parameter violates a family's constraints.
    BadParam { family: &'static str, msg: &'static str },
    /// Family name not in the catalog.
    UnknownFamily(String),
    /// Model lacks the metadata required by the requested regime.
    Regime(&'static str),
    /// Pairing or branch the theory does not cover.
    Unsupported(&'static str),
    /// Input outside a documented smallness guard.
    Guard(&'static str),
    /// Iterative scheme exhausted its budget.
    NoConverge { achieved: f64, requested: f64 },
    /// Root finder could not bracket a sign change.
    NoBracket(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::BadParam { family, msg } => write!(f, "invalid parameter for {family}: {msg}"),
            Error::UnknownFamily(name) => write!(f, "unknown family: {name}"),
            Error::Regime(msg) => write!(f, "regime mismatch: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::Guard(msg) => write!(f, "outside validity guard: {msg}"),
            Error::NoConverge { achieved, requested } => write!(
                f,
                "did not converge: achieved error {achieved:e}, requested {requested:e}"
            ),
            Error::NoBracket(msg) => write!(f, "no sign change bracketed: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
