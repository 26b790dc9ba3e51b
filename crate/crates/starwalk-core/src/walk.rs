//! State vectors and dynamics of the scattering walk.
//!
//! One step maps the directed-edge amplitudes as
//!
//! ```text
//! toward_hub'[j] = exp(i*phi_j) * toward_rim[j]
//! toward_rim'[j] = (2/N) * sum_k(toward_hub[k]) - toward_hub[j]
//! ```
//!
//! which is the hub's Grover scattering `r = (N-2)/N`, `t = 2/N` followed by
//! the rim reflections. The shared sum makes a step `O(N)`.

use crate::error::{Error, Result};
use crate::phase::PhaseProfile;
use crate::tolerances;
use crate::trace::SearchTrace;
use num_complex::Complex64;

/// Initial state kinds for a walk started from a uniform superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialKind {
    /// Equal amplitude `1/sqrt(N)` on every rim-to-hub edge.
    RimToHub,
    /// Equal amplitude `1/sqrt(2N)` on all `2N` directed edges.
    BothDirections,
}

/// Amplitudes over the `2N` directed edges of the star graph.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    toward_hub: Vec<Complex64>,
    toward_rim: Vec<Complex64>,
}

/// Per-edge occupation probabilities `|toward_hub[j]|^2 + |toward_rim[j]|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeDistribution {
    probabilities: Vec<f64>,
}

impl WalkState {
    /// Wraps explicit amplitude vectors.
    ///
    /// # Errors
    ///
    /// `InvalidDimension` when the vectors are empty or of unequal length,
    /// `InvalidArgument` when the total norm deviates from one by more than
    /// [`tolerances::UNIT_NORM`].
    pub fn new(toward_hub: Vec<Complex64>, toward_rim: Vec<Complex64>) -> Result<Self> {
        if toward_hub.is_empty() || toward_hub.len() != toward_rim.len() {
            return Err(Error::InvalidDimension(format!(
                "need equal nonzero edge counts, got {} and {}",
                toward_hub.len(),
                toward_rim.len()
            )));
        }
        let state = Self {
            toward_hub,
            toward_rim,
        };
        let norm = state.norm();
        if (norm - 1.0).abs() > tolerances::UNIT_NORM {
            return Err(Error::InvalidArgument(format!(
                "state norm {norm} is not 1 within {}",
                tolerances::UNIT_NORM
            )));
        }
        Ok(state)
    }

    /// Uniform initial state over `n` rim vertices.
    ///
    /// # Errors
    ///
    /// `InvalidDimension` when `n` is zero.
    pub fn uniform_initial(n: usize, kind: InitialKind) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(
                "a star graph needs at least one rim vertex".into(),
            ));
        }
        let state = match kind {
            InitialKind::RimToHub => {
                let a = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
                Self {
                    toward_hub: vec![a; n],
                    toward_rim: vec![Complex64::new(0.0, 0.0); n],
                }
            }
            InitialKind::BothDirections => {
                let a = Complex64::new(1.0 / (2.0 * n as f64).sqrt(), 0.0);
                Self {
                    toward_hub: vec![a; n],
                    toward_rim: vec![a; n],
                }
            }
        };
        Ok(state)
    }

    /// Number of rim vertices.
    pub fn n(&self) -> usize {
        self.toward_hub.len()
    }

    /// Amplitudes on rim-to-hub edges.
    pub fn toward_hub(&self) -> &[Complex64] {
        &self.toward_hub
    }

    /// Amplitudes on hub-to-rim edges.
    pub fn toward_rim(&self) -> &[Complex64] {
        &self.toward_rim
    }

    /// Euclidean norm over all `2N` amplitudes.
    pub fn norm(&self) -> f64 {
        let s: f64 = self
            .toward_hub
            .iter()
            .chain(self.toward_rim.iter())
            .map(|a| a.norm_sqr())
            .sum();
        s.sqrt()
    }

    /// Applies one walk step. `O(N)` via the shared hub sum.
    ///
    /// # Errors
    ///
    /// `InvalidDimension` when the profile size differs from the state size.
    pub fn step(&self, profile: &PhaseProfile) -> Result<Self> {
        self.check_profile(profile)?;
        let mut next = self.clone();
        step_in_place(
            &mut next.toward_hub,
            &mut next.toward_rim,
            profile.phase_factors(),
        );
        Ok(next)
    }

    /// Applies `m` walk steps; `m = 0` returns the state unchanged.
    ///
    /// # Errors
    ///
    /// `InvalidDimension` when the profile size differs from the state size.
    pub fn evolve(&self, profile: &PhaseProfile, m: usize) -> Result<Self> {
        self.check_profile(profile)?;
        let mut next = self.clone();
        for _ in 0..m {
            step_in_place(
                &mut next.toward_hub,
                &mut next.toward_rim,
                profile.phase_factors(),
            );
        }
        Ok(next)
    }

    /// Per-edge occupation probabilities.
    pub fn edge_probabilities(&self) -> EdgeDistribution {
        EdgeDistribution {
            probabilities: self
                .toward_hub
                .iter()
                .zip(&self.toward_rim)
                .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
                .collect(),
        }
    }

    fn check_profile(&self, profile: &PhaseProfile) -> Result<()> {
        if profile.n() != self.n() {
            return Err(Error::InvalidDimension(format!(
                "profile has {} vertices, state has {}",
                profile.n(),
                self.n()
            )));
        }
        Ok(())
    }
}

/// The fast step kernel shared by `step`, `evolve` and the trace loop.
fn step_in_place(
    toward_hub: &mut [Complex64],
    toward_rim: &mut [Complex64],
    phase_factors: &[Complex64],
) {
    let n = toward_hub.len();
    let t = 2.0 / n as f64;
    let hub_sum: Complex64 = toward_hub.iter().sum();
    let feed = hub_sum * t;
    for j in 0..n {
        let reflected = phase_factors[j] * toward_rim[j];
        toward_rim[j] = feed - toward_hub[j];
        toward_hub[j] = reflected;
    }
}

impl EdgeDistribution {
    /// Probability of edge `j`.
    pub fn probability(&self, j: usize) -> f64 {
        self.probabilities[j]
    }

    /// All per-edge probabilities in vertex order.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Total probability; one up to round-off for a unit state.
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Total probability on the vertices of one phase class.
    pub fn class_probability(&self, profile: &PhaseProfile, class_index: usize) -> f64 {
        profile
            .class_vertices(class_index)
            .map(|j| self.probabilities[j])
            .sum()
    }
}

/// Records the probability on one phase class over `0..=m_max` walk steps,
/// starting from the uniform rim-to-hub state.
///
/// # Errors
///
/// `InvalidArgument` when `target_class` is out of range.
pub fn localization_curve(
    profile: &PhaseProfile,
    target_class: usize,
    m_max: usize,
) -> Result<SearchTrace> {
    if target_class >= profile.classes().len() {
        return Err(Error::InvalidArgument(format!(
            "target class {target_class} out of range, profile has {} classes",
            profile.classes().len()
        )));
    }
    let n = profile.n();
    let mut toward_hub = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    let mut toward_rim = vec![Complex64::new(0.0, 0.0); n];
    let members: Vec<usize> = profile.class_vertices(target_class).collect();
    let mut probabilities = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        if m > 0 {
            step_in_place(&mut toward_hub, &mut toward_rim, profile.phase_factors());
        }
        let p: f64 = members
            .iter()
            .map(|&j| toward_hub[j].norm_sqr() + toward_rim[j].norm_sqr())
            .sum();
        probabilities.push(p);
    }
    Ok(SearchTrace::from_probabilities(probabilities, None, None))
}
