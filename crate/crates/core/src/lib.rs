//! Tail asymptotics for deflated risks X = R·S, where R is a risk with a
//! heavy, light, or bounded tail and S is an independent deflator on (0,1).
//!
//! The crate provides:
//!
//! * a catalog of parametric tail models with hard-coded second-order
//!   metadata ([`dist`]),
//! * first- and second-order expansions of P(X > x) in all three
//!   max-domains of attraction ([`expand`]),
//! * quadrature ground truth and deterministic sampling ([`oracle`]),
//! * Value-at-Risk approximations ([`var`]),
//! * sample-based tail probability estimators ([`estimate`]),
//! * aggregated bivariate scale mixtures ([`agg`]).
//!
//! The crate is `no_std`-compatible (with `alloc`); enable the `libm`
//! feature for float math without the standard library.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(test, not(feature = "std")))]
extern crate std;

pub mod agg;
pub mod dist;
pub mod error;
pub mod estimate;
pub mod expand;
pub mod oracle;
pub mod quad;
pub mod rng;
pub mod root;
pub mod specfun;
pub mod var;

pub use dist::{Family, Mda, TailModel};
pub use error::{Error, Result};
