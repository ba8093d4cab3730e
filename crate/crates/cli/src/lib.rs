//! Command-line front end for the deflated-risk tail library.
//!
//! Six commands over a shared configuration record:
//!
//! * `approx`     — first- and second-order tail approximations on a grid
//! * `compare`    — approximations against quadrature ground truth
//! * `var`        — Value-at-Risk approximations on probability levels
//! * `estimate`   — tail probability estimator paths over k
//! * `aggregate`  — aggregated two-risk tail with optional Monte Carlo
//! * `simulate`   — reproducible (r, s, x) samples
//!
//! Every run is deterministic in (config, seed): identical invocations
//! produce byte-identical output. CSV output carries the tool version
//! and the normalized config in `#` header lines; JSON output embeds
//! them in the document.

pub mod commands;
pub mod config;
pub mod table;

pub use commands::{execute, run, Failure, Output};
pub use config::{Format, RunConfig};
