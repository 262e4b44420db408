//! Multi-photon, multi-path interference on fixed-photon-number Fock states.
//!
//! The crate models the state of N photons behind an L-pinhole screen as a
//! normalized superposition of path occupations, and computes:
//!
//! - the l1 norm of coherence on the path basis and its decomposition into
//!   local (single-photon) and collective (multi-photon) pair-wise parts
//!   ([`coherence`]);
//! - the interference intensity behind adjustable per-path phase shifts,
//!   fringe curves, and the fringe visibility obtained by extremizing the
//!   intensity over the torus of relative phases ([`interference`]);
//! - phase and input-coefficient optimization, including the balanced
//!   product states that reach unit visibility, plus finite-difference
//!   stationarity and extremum tests ([`optimize`]);
//! - independent dense-matrix oracles used as ground truth in tests
//!   ([`oracle`]).
//!
//! States are immutable values and every operation is a pure function, so
//! everything here is safe to use from multiple threads.

pub mod coherence;
pub mod error;
pub mod fock;
pub mod interference;
pub mod optimize;
pub mod oracle;
pub mod sampling;

pub use num_complex::Complex64;

pub use coherence::{CoherenceReport, PairKind, PairwiseEntry, StateClass};
pub use error::{Error, Result};
pub use fock::{FieldScale, OccupationVector, PhaseConfig, PhotonState, StateTerm};
pub use interference::{FringeCurve, SearchMethod, VisibilityResult};
pub use optimize::{CoeffOptConfig, ExtremumClass, OptimizationOutcome, TorusSearchConfig};
pub use oracle::FockBasis;
