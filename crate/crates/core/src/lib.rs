//! Two-qubit quantum correlations: quantum discord, geometric discord and
//! concurrence for Bell-diagonal and related states, decoherence through
//! local Kraus channels, and level-surface extraction of the discord fields.

pub mod channels;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod qstate;
pub mod sampling;

pub use error::{Error, Result};
