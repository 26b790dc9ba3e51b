//! Multivalued-function search: a Grover iteration whose oracle returns one
//! of `d` values instead of a bit.
//!
//! The function `f : {0..N-1} -> {0..d-1}` marks the items with `f(j) = 0`.
//! One search iteration is `G = D O`: the oracle multiplies amplitude `j` by
//! a phase determined by `f(j)`, then the diffusion `D = (2/N) J - I`
//! reflects all amplitudes about their mean. Two oracle styles are
//! supported:
//!
//! * multi-phase: amplitude `j` picks up `beta^{-f(j)}` with
//!   `beta = e^{2 pi i / d}`, one oracle query per iteration;
//! * sign-flip: amplitude `j` flips sign iff `f(j) = 0`. The flip is
//!   realized from the multivalued oracle as `O^{-1} (I - 2 I (x) |0><0|) O`
//!   with `O^{-1} = O^{d-1}`, so each iteration accounts for `d` queries.
//!
//! The register is simulated in its `N`-dimensional effective space; the
//! ancilla that justifies this reduction is checked explicitly in the
//! joint-space validators at small `N`.

use crate::error::{Error, Result};
use crate::phase::{normalize_phase, PhaseProfile};
use crate::spectral;
use crate::tolerances;
use crate::trace::{PredictionRecord, SearchTrace};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// How the multivalued oracle acts on the register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// Diagonal phase `beta^{-f(j)}`; one query per iteration.
    MultiPhase,
    /// Sign flip on marked items; `d` queries per iteration (one `O` plus
    /// `O^{d-1}`).
    SignFlip,
}

impl OracleMode {
    /// Oracle queries consumed by one `G` application.
    pub fn queries_per_iteration(self, d: u32) -> usize {
        match self {
            OracleMode::MultiPhase => 1,
            OracleMode::SignFlip => d as usize,
        }
    }

    /// Stable lowercase name used in output files.
    pub fn as_str(self) -> &'static str {
        match self {
            OracleMode::MultiPhase => "multi-phase",
            OracleMode::SignFlip => "sign-flip",
        }
    }
}

impl std::fmt::Display for OracleMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl serde::Serialize for OracleMode {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// A concrete search problem: the value table of `f`, its range size `d`,
/// and the oracle mode to use. Items are indexed from 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleInstance {
    d: u32,
    table: Vec<u32>,
    marked: Vec<usize>,
    mode: OracleMode,
}

impl OracleInstance {
    /// Validates and wraps a value table.
    ///
    /// # Errors
    ///
    /// `InvalidArgument` for `d < 2`, `InvalidDimension` for an empty table,
    /// `InvalidInstance` for out-of-range values or an empty marked set.
    pub fn new(table: Vec<u32>, d: u32, mode: OracleMode) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!(
                "the function range needs d >= 2, got {d}"
            )));
        }
        if table.is_empty() {
            return Err(Error::InvalidDimension(
                "the value table must cover at least one item".into(),
            ));
        }
        if let Some((j, &v)) = table.iter().enumerate().find(|(_, &v)| v >= d) {
            return Err(Error::InvalidInstance(format!(
                "f({j}) = {v} is outside the range 0..{d}"
            )));
        }
        let marked: Vec<usize> = table
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == 0)
            .map(|(j, _)| j)
            .collect();
        if marked.is_empty() {
            return Err(Error::InvalidInstance(
                "no item has f(j) = 0; the search target set is empty".into(),
            ));
        }
        Ok(Self {
            d,
            table,
            marked,
            mode,
        })
    }

    /// Number of items.
    pub fn n(&self) -> usize {
        self.table.len()
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn mode(&self) -> OracleMode {
        self.mode
    }

    /// Same table and range with a different oracle mode.
    pub fn with_mode(&self, mode: OracleMode) -> Self {
        Self {
            mode,
            ..self.clone()
        }
    }

    /// The value table of `f`.
    pub fn table(&self) -> &[u32] {
        &self.table
    }

    /// Indices of the marked items, ascending.
    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    pub fn marked_count(&self) -> usize {
        self.marked.len()
    }

    /// How many items map to each value `0..d`.
    pub fn value_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.d as usize];
        for &v in &self.table {
            counts[v as usize] += 1;
        }
        counts
    }

    /// Whether every unmarked value `1..d-1` occurs equally often.
    pub fn is_even_distribution(&self) -> bool {
        let counts = self.value_counts();
        counts[1..].iter().all(|&c| c == counts[1])
    }

    /// Multi-phase oracle factors `beta^{-f(j)}`, one per item.
    pub fn phase_factors(&self) -> Vec<Complex64> {
        let per_value: Vec<Complex64> = (0..self.d)
            .map(|v| Complex64::from_polar(1.0, -TAU * v as f64 / self.d as f64))
            .collect();
        self.table.iter().map(|&v| per_value[v as usize]).collect()
    }

    /// The star-graph phase profile whose walk this search is equivalent to:
    /// vertex `j` reflects with phase `-2 pi f(j) / d`, so marked items sit
    /// in the phase-0 class.
    pub fn walk_profile(&self) -> Result<PhaseProfile> {
        let per_value: Vec<f64> = (0..self.d)
            .map(|v| normalize_phase(-TAU * v as f64 / self.d as f64) + 0.0)
            .collect();
        let phases: Vec<f64> = self.table.iter().map(|&v| per_value[v as usize]).collect();
        PhaseProfile::from_vertex_phases(&phases)
    }
}

/// Unit-norm amplitude vector over the `N` items.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterState {
    amplitudes: Vec<Complex64>,
}

impl RegisterState {
    /// Wraps amplitudes, enforcing unit norm within
    /// [`tolerances::UNIT_NORM`].
    ///
    /// # Errors
    ///
    /// `InvalidDimension` for an empty vector, `InvalidArgument` off norm.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension(
                "a register needs at least one amplitude".into(),
            ));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tolerances::UNIT_NORM {
            return Err(Error::InvalidArgument(format!(
                "register norm {norm} deviates from 1 beyond {}",
                tolerances::UNIT_NORM
            )));
        }
        Ok(Self { amplitudes })
    }

    /// The uniform superposition `(1/sqrt(N)) sum_j |j>`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(
                "a register needs at least one amplitude".into(),
            ));
        }
        let a = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        Ok(Self {
            amplitudes: vec![a; n],
        })
    }

    pub fn n(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Probability of measuring item `j`.
    pub fn probability_of(&self, j: usize) -> f64 {
        self.amplitudes[j].norm_sqr()
    }

    /// Total probability on the instance's marked items.
    pub fn marked_probability(&self, instance: &OracleInstance) -> f64 {
        instance
            .marked
            .iter()
            .map(|&j| self.amplitudes[j].norm_sqr())
            .sum()
    }
}

/// One search iteration `G = D O` in diagonal-action form.
#[derive(Debug, Clone)]
pub struct GroverOperator {
    factors: Vec<Complex64>,
    queries_per_iteration: usize,
}

impl GroverOperator {
    pub fn n(&self) -> usize {
        self.factors.len()
    }

    /// The diagonal the oracle applies before diffusion.
    pub fn factors(&self) -> &[Complex64] {
        &self.factors
    }

    pub fn queries_per_iteration(&self) -> usize {
        self.queries_per_iteration
    }

    /// Applies `G` once: oracle phases, then reflection about the mean.
    ///
    /// # Errors
    ///
    /// `InvalidDimension` when the state size does not match.
    pub fn apply(&self, state: &mut RegisterState) -> Result<()> {
        if state.n() != self.n() {
            return Err(Error::InvalidDimension(format!(
                "state over {} items does not fit an operator over {}",
                state.n(),
                self.n()
            )));
        }
        let n = self.n() as f64;
        let mut sum = Complex64::new(0.0, 0.0);
        for (a, &w) in state.amplitudes.iter_mut().zip(&self.factors) {
            *a *= w;
            sum += *a;
        }
        let feed = sum * (2.0 / n);
        for a in state.amplitudes.iter_mut() {
            *a = feed - *a;
        }
        Ok(())
    }
}

/// Builds the search iterate for an instance in its configured mode.
///
/// # Errors
///
/// None beyond the instance's own validity; the instance cannot be
/// constructed in an invalid state.
pub fn build_oracle(instance: &OracleInstance) -> GroverOperator {
    let factors = match instance.mode {
        OracleMode::MultiPhase => instance.phase_factors(),
        OracleMode::SignFlip => instance
            .table
            .iter()
            .map(|&v| {
                if v == 0 {
                    Complex64::new(-1.0, 0.0)
                } else {
                    Complex64::new(1.0, 0.0)
                }
            })
            .collect(),
    };
    GroverOperator {
        factors,
        queries_per_iteration: instance.mode.queries_per_iteration(instance.d),
    }
}

/// Applies `G` exactly `k` times to a copy of `state`.
///
/// # Errors
///
/// `InvalidDimension` on a size mismatch.
pub fn grover_iterate(
    state: &RegisterState,
    op: &GroverOperator,
    k: usize,
) -> Result<RegisterState> {
    let mut out = state.clone();
    for _ in 0..k {
        op.apply(&mut out)?;
    }
    Ok(out)
}

/// Runs the search from the uniform state and records the marked-set
/// probability after each iteration, `k = 0..=window`.
///
/// `window = None` scans `ceil(2 * k_max_pred)` iterations so the first
/// probability peak is always inside the window.
///
/// # Errors
///
/// Propagates register construction failures (effectively none for a valid
/// instance).
pub fn run_search(instance: &OracleInstance, window: Option<usize>) -> Result<SearchTrace> {
    let prediction = PredictionRecord::new(instance.n(), instance.d, instance.marked_count());
    let window = window.unwrap_or_else(|| (2.0 * prediction.k_max).ceil().max(1.0) as usize);
    let op = build_oracle(instance);
    let mut state = RegisterState::uniform(instance.n())?;
    let mut probabilities = Vec::with_capacity(window + 1);
    probabilities.push(state.marked_probability(instance));
    for _ in 0..window {
        op.apply(&mut state)?;
        probabilities.push(state.marked_probability(instance));
    }
    Ok(SearchTrace::from_probabilities(
        probabilities,
        Some(prediction),
        Some(op.queries_per_iteration()),
    ))
}

/// Closed-form probability curve `P_k = (3/(d+1)) sin^2(2 k theta)` over
/// `k = 0..=window`, with the prediction record it derives from.
pub fn predicted_trace(n: usize, d: u32, m: usize, window: usize) -> (PredictionRecord, Vec<f64>) {
    let prediction = PredictionRecord::new(n, d, m);
    let curve = (0..=window).map(|k| prediction.p_at(k)).collect();
    (prediction, curve)
}

/// Outcome of checking a candidate solution against the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionCheck {
    /// Whether `f(j) = 0`.
    pub is_marked: bool,
    /// Expected number of full search repetitions until a marked item is
    /// measured, `1 / P_max_pred = (d + 1) / 3`.
    pub expected_repetitions: f64,
}

/// Evaluates `f` at a candidate index, as the final classical step of the
/// search loop.
///
/// # Errors
///
/// `InvalidArgument` when `j` is out of range.
pub fn verify_solution(instance: &OracleInstance, j: usize) -> Result<SolutionCheck> {
    if j >= instance.n() {
        return Err(Error::InvalidArgument(format!(
            "candidate index {j} out of range 0..{}",
            instance.n()
        )));
    }
    let prediction = PredictionRecord::new(instance.n(), instance.d, instance.marked_count());
    Ok(SolutionCheck {
        is_marked: instance.table[j] == 0,
        expected_repetitions: 1.0 / prediction.p_max,
    })
}

/// Principal eigenpair data of the search iterate, computed from the
/// equivalent walk's grouped polynomial.
#[derive(Debug, Clone)]
pub struct OracleEigensystem {
    /// Squared-eigenvalue root closest to -1 with positive imaginary part,
    /// `z1 = -e^{-2 i theta}`.
    pub z1: Complex64,
    /// Its conjugate partner `z2 = -e^{2 i theta}`.
    pub z2: Complex64,
    /// Rotation half-angle, `sin(2 theta) ~ sqrt(12 M / (N (d + 1)))`.
    pub theta: f64,
    /// Normalization of the `z1` eigenvector, close to
    /// `sqrt(6 / (N (d + 1)))` for even single-marked instances.
    pub eta1: f64,
    /// Eigenvector for `z1`: `chi1[j] = eta1 / (beta^{-f(j)} + z1)`.
    pub chi1: Vec<Complex64>,
    /// Eigenvector for `z2`, same construction.
    pub chi2: Vec<Complex64>,
    /// `<j0|chi1>` for the first marked item; close to `-i / sqrt(2)`.
    pub marked_overlap: Complex64,
    /// `<chi1|psi0>` against the uniform state; close to
    /// `-sqrt(3 / (2 (d + 1)))`.
    pub initial_overlap: Complex64,
    /// Largest normalization among the remaining principal eigenvectors.
    pub max_other_eta: f64,
    /// The bound those normalizations are expected to obey, `2 / sqrt(N)`.
    pub eta_bound: f64,
    /// Set when the closed-form comparisons are outside their regime
    /// (multiple marked items, uneven distribution, or `d` not far below
    /// `N`).
    pub regime_warning: bool,
}

fn eta_for_root(counts: &[usize], d: u32, z: Complex64) -> f64 {
    let mut inv = 0.0f64;
    for (v, &count) in counts.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let denom = Complex64::from_polar(1.0, -TAU * v as f64 / d as f64) + z;
        inv += count as f64 / denom.norm_sqr();
    }
    inv.powf(-0.5)
}

/// Solves the search iterate's principal eigensystem through the grouped
/// polynomial and reports the closed-form comparison scalars.
///
/// # Errors
///
/// Propagates root-finding failures; `Numerical` when no conjugate root
/// pair lies near `-1`.
pub fn oracle_eigensystem(instance: &OracleInstance) -> Result<OracleEigensystem> {
    let profile = instance.walk_profile()?;
    let roots = spectral::principal_roots(&profile)?;
    let minus_one = Complex64::new(-1.0, 0.0);
    let mut by_distance: Vec<Complex64> = roots.clone();
    by_distance.sort_by(|a, b| {
        (a - minus_one)
            .norm()
            .partial_cmp(&(b - minus_one).norm())
            .unwrap()
    });
    if by_distance.len() < 2 {
        return Err(Error::Numerical(
            "the grouped polynomial has fewer than two roots; no rotating pair exists".into(),
        ));
    }
    let pair = [by_distance[0], by_distance[1]];
    if pair[0].im * pair[1].im >= 0.0 {
        return Err(Error::Numerical(format!(
            "the two roots nearest -1 ({} and {}) are not a conjugate pair",
            pair[0], pair[1]
        )));
    }
    let z1 = if pair[0].im > 0.0 { pair[0] } else { pair[1] };
    let z2 = if pair[0].im > 0.0 { pair[1] } else { pair[0] };
    let theta = -(-z1).arg() / 2.0;

    let counts = instance.value_counts();
    let n = instance.n();
    let eta1 = eta_for_root(&counts, instance.d, z1);
    let eta2 = eta_for_root(&counts, instance.d, z2);
    let factors = instance.phase_factors();
    let chi1: Vec<Complex64> = factors.iter().map(|&w| eta1 / (w + z1)).collect();
    let chi2: Vec<Complex64> = factors.iter().map(|&w| eta2 / (w + z2)).collect();

    let marked_overlap = chi1[instance.marked[0]];
    let sqrt_n = (n as f64).sqrt();
    let initial_overlap = chi1.iter().map(|c| c.conj()).sum::<Complex64>() / sqrt_n;

    let max_other_eta = roots
        .iter()
        .filter(|&&z| (z - z1).norm() > 1e-12 && (z - z2).norm() > 1e-12)
        .map(|&z| eta_for_root(&counts, instance.d, z))
        .fold(0.0, f64::max);

    let prediction = PredictionRecord::new(n, instance.d, instance.marked_count());
    let regime_warning = prediction.regime_warning
        || instance.marked_count() != 1
        || !instance.is_even_distribution();

    Ok(OracleEigensystem {
        z1,
        z2,
        theta,
        eta1,
        chi1,
        chi2,
        marked_overlap,
        initial_overlap,
        max_other_eta,
        eta_bound: 2.0 / sqrt_n,
        regime_warning,
    })
}

/// The `d`-dimensional discrete Fourier analogue of the Hadamard gate,
/// entries `beta^{jk} / sqrt(d)` with `beta = e^{2 pi i / d}`.
///
/// # Errors
///
/// `InvalidArgument` for `d < 2`.
pub fn hadamard_d(d: u32) -> Result<DMatrix<Complex64>> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "the Fourier gate needs d >= 2, got {d}"
        )));
    }
    let du = d as usize;
    let scale = 1.0 / (d as f64).sqrt();
    Ok(DMatrix::from_fn(du, du, |j, k| {
        Complex64::from_polar(scale, TAU * ((j * k) % du) as f64 / d as f64)
    }))
}

/// Ancilla preparation for the joint-space validators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AncillaPreparation {
    /// Computational basis state `|0>`.
    Zero,
    /// Fourier state `H_d |1> = (1/sqrt(d)) sum_a beta^a |a>`.
    FourierOne,
}

fn ancilla_vector(d: u32, preparation: AncillaPreparation) -> Vec<Complex64> {
    let du = d as usize;
    match preparation {
        AncillaPreparation::Zero => {
            let mut v = vec![Complex64::new(0.0, 0.0); du];
            v[0] = Complex64::new(1.0, 0.0);
            v
        }
        AncillaPreparation::FourierOne => {
            let scale = 1.0 / (d as f64).sqrt();
            (0..du)
                .map(|a| Complex64::from_polar(scale, TAU * a as f64 / d as f64))
                .collect()
        }
    }
}

fn check_joint_dimension(instance: &OracleInstance) -> Result<usize> {
    let dim = instance.n() * instance.d as usize;
    if dim > tolerances::DENSE_DIMENSION_CAP {
        return Err(Error::ResourceLimit(format!(
            "joint-space validation is capped at {} basis states, got {dim}",
            tolerances::DENSE_DIMENSION_CAP
        )));
    }
    Ok(dim)
}

/// Applies the joint addition oracle `|j, a> -> |j, a + f(j) mod d>` (or its
/// inverse) to a joint state indexed as `j * d + a`.
fn joint_addition(instance: &OracleInstance, state: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let d = instance.d as usize;
    let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
    for (j, &v) in instance.table.iter().enumerate() {
        let shift = v as usize;
        for a in 0..d {
            let target = if inverse {
                (a + d - shift) % d
            } else {
                (a + shift) % d
            };
            out[j * d + target] = state[j * d + a];
        }
    }
    out
}

/// Verifies on the full `N * d` joint space that the addition oracle acting
/// on ancilla `H_d |1>` kicks back exactly the multi-phase factors
/// `beta^{-f(j)}` while leaving the ancilla in place.
///
/// # Errors
///
/// `ResourceLimit` when the joint space exceeds the dense cap.
pub fn joint_multiphase_kickback_check(instance: &OracleInstance) -> Result<bool> {
    let dim = check_joint_dimension(instance)?;
    let d = instance.d as usize;
    let n = instance.n();
    let ancilla = ancilla_vector(instance.d, AncillaPreparation::FourierOne);
    // Deterministic non-uniform main register so a per-item phase error
    // cannot hide behind symmetry.
    let mut main: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0 + j as f64, 0.3 * j as f64))
        .collect();
    let norm = main.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut main {
        *a /= norm;
    }

    let mut joint = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..n {
        for a in 0..d {
            joint[j * d + a] = main[j] * ancilla[a];
        }
    }
    let after = joint_addition(instance, &joint, false);

    let factors = instance.phase_factors();
    let mut max_diff = 0.0f64;
    for j in 0..n {
        for a in 0..d {
            let expected = factors[j] * main[j] * ancilla[a];
            max_diff = max_diff.max((after[j * d + a] - expected).norm());
        }
    }
    Ok(max_diff <= tolerances::MODE_EQUIVALENCE)
}

/// Verifies on the full joint space that the composite
/// `O^{-1} (I - 2 I (x) |0><0|) O` acts on the main register as the exact
/// diagonal `-1` on marked, `+1` elsewhere, with the ancilla returned to its
/// preparation. Holds for the `|0>` ancilla; fails for `H_d |1>`, whose
/// components are disturbed by the middle reflection.
///
/// # Errors
///
/// `ResourceLimit` when the joint space exceeds the dense cap.
pub fn joint_sign_flip_check(
    instance: &OracleInstance,
    preparation: AncillaPreparation,
) -> Result<bool> {
    check_joint_dimension(instance)?;
    let d = instance.d as usize;
    let n = instance.n();
    let ancilla = ancilla_vector(instance.d, preparation);

    for j in 0..n {
        let mut joint = vec![Complex64::new(0.0, 0.0); n * d];
        for a in 0..d {
            joint[j * d + a] = ancilla[a];
        }
        let mut mid = joint_addition(instance, &joint, false);
        for jj in 0..n {
            mid[jj * d] = -mid[jj * d];
        }
        let back = joint_addition(instance, &mid, true);

        let sign = if instance.table[j] == 0 { -1.0 } else { 1.0 };
        for jj in 0..n {
            for a in 0..d {
                let expected = if jj == j {
                    ancilla[a] * sign
                } else {
                    Complex64::new(0.0, 0.0)
                };
                if (back[jj * d + a] - expected).norm() > tolerances::MODE_EQUIVALENCE {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
