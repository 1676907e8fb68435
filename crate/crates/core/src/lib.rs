//! Phase-error analysis of symplectic splitting integrators on the harmonic
//! oscillator.
//!
//! A scheme is a sequence of drift, kick and gradient-kick steps. Applied to
//! the oscillator it becomes a constant 2x2 map whose rotation angle,
//! invariant ellipse and power-series expansion in `εω` yield the modified
//! frequency, effective mass and spring constant, phase error and order
//! coefficients.

pub mod analysis;
pub mod phasemap;
pub mod scalar;
pub mod scheme;
pub mod series;
pub mod sim;

pub use analysis::{
    convergence_study, effective_param_series, normalized_coefficient, omega_a_series, order_coefficient,
    phase_error, phase_error_report, stability_limit, AnalysisError, PhaseErrorReport,
};
pub use phasemap::{scheme_matrix, spectral, PhaseMap, PhaseMapError, PhaseMatrix, Regime, SpectralData};
pub use scheme::{load_scheme, registry, Scheme, SchemeError, Step, StepKind};
pub use series::{Series, SeriesError};
pub use sim::{iterate, phase_drift, portrait, SimError, TrajectoryRecord};
