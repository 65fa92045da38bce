//! Online scheduling to minimize total weighted completion time.
//!
//! Time is cut into geometrically growing intervals. At the start of each
//! interval a minimum-unscheduled-weight (MUWP) solver picks which pending jobs
//! to run, and an offline scheduler orders them inside a stretched copy of the
//! interval. The crate provides the framework ([`framework`]), MUWP solvers
//! ([`muwp`]), within-interval schedulers ([`offline`]), an exact rational LP
//! solver ([`lp`]), and brute-force references ([`oracle`]) for concurrent open
//! shop, coflow and concurrent cluster scheduling.

pub mod error;
pub mod framework;
pub mod lp;
pub mod model;
pub mod muwp;
pub mod offline;
pub mod oracle;

pub use error::{Error, Result};
pub use model::{Instance, Model, Rational, Schedule};
