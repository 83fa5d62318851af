//! Probabilistic metric spaces, the Lévy metric, ideal convergence and
//! finite-window diagnostics for double sequences.

pub mod ddf;
pub mod error;
pub mod ideals;
pub mod pmspace;
pub mod seqlab;

pub use ddf::{Ddf, Interp};
pub use error::{Error, Result};
pub use ideals::{IdealModel, IdealVerdict, IndexSet2D, Verdict};
pub use pmspace::{EquilateralSpace, PmSpace, Point, SimpleSpace};
pub use seqlab::{DoubleSequence, IndicatorRecord, IndicatorTrajectory, Mode, QuadOptions};

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
