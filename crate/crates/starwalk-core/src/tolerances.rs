//! Central numerical tolerances.
//!
//! Every threshold used by the library is defined here with its rationale, so
//! the test suite and the CLI report the same numbers. Functions take these
//! as defaults; the few routines where tuning is meaningful accept an options
//! struct built from them.

/// Maximum deviation from unit norm accepted by state constructors.
///
/// One step is a diagonal phase times a reflection, both norm preserving;
/// round-off per step is a few ulps, so freshly built states must be unit to
/// near machine precision.
pub const UNIT_NORM: f64 = 1e-12;

/// Edge or register probabilities must sum to one within this bound.
pub const PROBABILITY_SUM: f64 = 1e-10;

/// Accumulated norm drift allowed over 10_000 steps of the fast update.
pub const NORM_DRIFT_10K_STEPS: f64 = 1e-8;

/// Eigenvalues of a unitary must sit on the unit circle within this bound.
pub const UNIT_CIRCLE: f64 = 1e-9;

/// Certified bound on the grouped-condition residual of a principal root.
pub const PRINCIPAL_RESIDUAL: f64 = 1e-9;

/// Denominators smaller than this in the grouped condition count as poles.
pub const POLE_GUARD: f64 = 1e-14;

/// Root residual bound relative to the largest coefficient magnitude.
pub const ROOT_RESIDUAL_FACTOR: f64 = 1e-10;

/// Iteration cap for the simultaneous root finder.
pub const MAX_ROOT_ITERATIONS: usize = 1000;

/// `|f0(z)|` bound for double-root detection in the reduced polynomial.
pub const DOUBLE_ROOT_VALUE: f64 = 1e-10;

/// `|f0'(z)|` bound for double-root detection in the reduced polynomial.
pub const DOUBLE_ROOT_DERIVATIVE: f64 = 1e-8;

/// Two reduced-polynomial roots closer than this form one cluster.
pub const ROOT_CLUSTER: f64 = 1e-6;

/// Combined fraction of perturbation classes must stay at or below this.
pub const SMALL_CLASS_MAX_FRACTION: f64 = 0.1;

/// Max-entry bound for `U^H U - I` on constructed dense unitaries.
pub const DENSE_UNITARITY: f64 = 1e-12;

/// Dense and analytic spectra must match within this after pairing.
pub const DENSE_MATCH: f64 = 1e-8;

/// Orthonormality bound for dense eigenvector bases.
pub const ORTHONORMALITY: f64 = 1e-9;

/// Largest rim count for which dense constructions are allowed by default.
pub const DENSE_DIMENSION_CAP: usize = 2048;

/// Pointwise bound when the two oracle modes must agree at `d = 2`.
pub const MODE_EQUIVALENCE: f64 = 1e-12;

/// Regime guard: predictions are tagged when `M/N` exceeds this.
pub const REGIME_MAX_MARKED_FRACTION: f64 = 0.1;

/// Smallest window used by the sweep harness regardless of predictions.
pub const MIN_SWEEP_WINDOW: usize = 32;
