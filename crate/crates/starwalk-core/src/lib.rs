//! Scattering quantum walks on star graphs and the equivalent multivalued
//! Grover search.
//!
//! A star graph has one hub connected to `N` rim vertices. The walk lives on
//! the `2N` directed edge states: `toward_hub[j]` is the amplitude for moving
//! from rim vertex `j` into the hub, `toward_rim[j]` for moving back out. Rim
//! vertex `j` reflects with a phase `exp(i*phi_j)` drawn from a small set of
//! classes, and the hub scatters with the Grover coin `(2/N)J - I`. One class
//! is a marked target; a walk started uniformly localizes on the marked edges
//! after `O(sqrt(N))` steps with peak probability `3/(d+1)` when `d` distinct
//! phases are spread evenly around the unit circle.
//!
//! The same dynamics arise from an `N`-dimensional search iteration
//! `G = D * O`, where `O` multiplies each amplitude by a `d`-th root of unity
//! determined by an oracle function `f` with `f(marked) = 0` and `D` is
//! inversion about the mean. One application of `G` corresponds to two walk
//! steps.
//!
//! Modules:
//! - [`phase`]: rim phase profiles (class layout, per-vertex lookup).
//! - [`walk`]: state vectors, the `O(N)` step, evolution, localization traces.
//! - [`poly`]: complex polynomials and a simultaneous-iteration root finder.
//! - [`spectral`]: grouped eigenvalue conditions, principal and degenerate
//!   branches, perturbative double-root analysis.
//! - [`dense`]: dense unitaries and a Schur-based eigendecomposition used as
//!   an independent verification path for everything above.
//! - [`oracle`]: multivalued oracle instances, the search iteration, closed
//!   form predictions, and the reduced eigensystem.
//! - [`trace`]: probability traces with detected and predicted peaks.
//! - [`harness`]: seeded instance generation, parameter sweeps, scaling fits,
//!   walk/oracle comparison, CSV and JSON output.

pub mod dense;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod phase;
pub mod poly;
pub mod spectral;
pub mod tolerances;
pub mod trace;
pub mod walk;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use phase::{PhaseClass, PhaseProfile};
pub use trace::{PredictionRecord, SearchTrace};
pub use walk::{InitialKind, WalkState};
