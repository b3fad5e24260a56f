//! Two-qubit Heisenberg XYZ thermal states under generalized amplitude
//! damping and hybrid flip noise.
//!
//! The crate builds the thermal X-state of the XYZ model in a field, pushes it
//! through Kraus channels and measures what is left of its correlations:
//! Wootters concurrence and three flavours of measurement-induced nonlocality
//! (Hilbert-Schmidt, trace and fidelity based). Each closed-form result has a
//! brute-force counterpart (eigensolver, operator sum, measurement-axis
//! search) and [`verify`] runs the two against each other.

pub mod channels;
pub mod error;
pub mod experiments;
pub mod matcore;
pub mod measures;
pub mod sampling;
pub mod spinmodel;
pub mod verify;

pub use channels::{FlipKind, GadParams, HybridParams, KrausSet};
pub use error::{Error, Result};
pub use experiments::{ChannelSpec, SweepAxis, SweepRow, SweepSpec};
pub use matcore::{CMat, HermEigen};
pub use measures::{CorrelationReport, MeasurementAxis, MinKind, XElements};
pub use spinmodel::{DensityMatrix, ModelParams, ThermalElements};
