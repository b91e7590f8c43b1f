//! Matroid algorithms for packing and covering coloured matroids with
//! transversal bases.
//!
//! The crate is layered bottom-up: [`matroid`] holds the oracles, [`exchange`]
//! the exchange and injection primitives, [`partition`] matroid union and
//! deadlocks, [`rainbow`] rainbow families and switching, and [`cover`] /
//! [`pack`] the two solvers. [`oracle`] has brute-force references used to
//! arbitrate everything at small scale.

pub mod audit;
pub mod cover;
mod error;
pub mod exchange;
pub mod format;
pub mod generate;
pub mod instance;
pub mod matching;
pub mod matroid;
pub mod oracle;
pub mod pack;
pub mod partition;
pub mod rainbow;
pub mod solution;

pub use error::{Error, Result};
pub use instance::{build_instance, ColouredInstance};
pub use matroid::{AnyMatroid, Elem, Matroid, SpanTester};

