//! Ground state of the quartic anharmonic oscillator from a three-scale
//! delta expansion optimized over an artificial frequency, with an
//! independent finite-difference eigensolver for comparison.

pub mod error;
pub mod expansion;
pub mod params;
pub mod pms;
pub mod polynomial;
pub mod reference;
pub mod report;
pub mod validate;
pub mod wavefunction;

pub use error::{Error, Result};
pub use expansion::{expand, next_order, order_zero, residual_check, third_order_closed_form, DeltaExpansion, K_MAX};
pub use params::{AnsatzScales, OscillatorParams, ReducedUnits};
pub use pms::{optimize, select_pms, stationary_points, strong_coupling_alpha0, Candidate, CandidateKind, PmsResult, StrongCouplingResult};
pub use polynomial::Polynomial;
pub use reference::{ground_energy, ground_wavefunction, SolverConfig};
pub use wavefunction::{assemble, compare, Comparison, WaveProfile};
