//! Instance generation, parameter sweeps, scaling fits, and file output.
//!
//! Everything here is deterministic given the configured seed: instances come
//! from a counter-based generator, each sweep cell derives its own seed from
//! the cell key, cells run in parallel but aggregate in canonical order, and
//! wall-clock timing is recorded as zero unless explicitly enabled so output
//! files are byte-identical across runs.

use crate::error::{Error, Result};
use crate::oracle::{run_search, OracleInstance, OracleMode};
use crate::trace::SearchTrace;
use crate::walk;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

/// Grid of search problems to run, with the sweep-wide settings.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Item counts to sweep.
    pub n_values: Vec<usize>,
    /// Function range sizes to sweep.
    pub d_values: Vec<u32>,
    /// Marked-set sizes to sweep.
    pub m_values: Vec<usize>,
    pub mode: OracleMode,
    /// Require exactly equal counts for the unmarked values.
    pub even: bool,
    /// Base seed; every cell derives its own seed from this and its key.
    pub seed: u64,
    /// Iteration window per cell; `None` sizes it from the prediction.
    pub window: Option<usize>,
    /// Record real wall-clock times. Off by default: timing varies run to
    /// run, and the determinism contract promises byte-identical files.
    pub timing: bool,
}

impl SweepConfig {
    /// A single-mode sweep over the given grid with library defaults.
    pub fn new(n_values: Vec<usize>, d_values: Vec<u32>, m_values: Vec<usize>) -> Self {
        Self {
            n_values,
            d_values,
            m_values,
            mode: OracleMode::MultiPhase,
            even: true,
            seed: 0,
            window: None,
            timing: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() || self.d_values.is_empty() || self.m_values.is_empty() {
            return Err(Error::InvalidConfig(
                "each of the N, d, and M lists needs at least one entry".into(),
            ));
        }
        Ok(())
    }
}

/// One completed sweep cell, in the on-disk column schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    #[serde(rename = "N")]
    pub n: usize,
    pub d: u32,
    #[serde(rename = "M")]
    pub m: usize,
    pub mode: OracleMode,
    /// The cell-derived seed the instance was generated from.
    pub seed: u64,
    pub k_max_sim: usize,
    #[serde(rename = "P_max_sim")]
    pub p_max_sim: f64,
    pub k_max_pred: f64,
    #[serde(rename = "P_max_pred")]
    pub p_max_pred: f64,
    /// Total oracle queries up to the simulated peak.
    pub queries: usize,
    /// Zero unless timing was enabled in the config.
    pub wall_ms: u64,
    pub regime_warn: bool,
}

/// A cell that failed, with the reason; failures never abort the sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepFailure {
    #[serde(rename = "N")]
    pub n: usize,
    pub d: u32,
    #[serde(rename = "M")]
    pub m: usize,
    pub mode: OracleMode,
    pub seed: u64,
    pub message: String,
}

/// Records and failures of one sweep, each in canonical cell order.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSweepResult {
    pub records: Vec<SweepRecord>,
    pub failures: Vec<SweepFailure>,
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable per-cell seed: the base seed mixed with every component of the
/// cell key, so reordering the sweep grid never changes a cell's instance.
pub fn cell_seed(base: u64, n: usize, d: u32, m: usize, mode: OracleMode, even: bool) -> u64 {
    let mode_tag = match mode {
        OracleMode::MultiPhase => 1u64,
        OracleMode::SignFlip => 2u64,
    };
    let mut s = splitmix64(base);
    for v in [n as u64, d as u64, m as u64, mode_tag, even as u64] {
        s = splitmix64(s ^ v);
    }
    s
}

/// Generates a search instance: `m` marked positions drawn uniformly, the
/// remaining items assigned values `1..d` and shuffled. With `even` set the
/// unmarked values get exactly equal counts, which requires `d - 1` to
/// divide `N - M`; otherwise counts are balanced to within one.
///
/// Deterministic given the seed.
///
/// # Errors
///
/// `InvalidConfig` for `m = 0`, `m > N`, or an impossible even split;
/// instance-level validation errors propagate from construction.
pub fn generate_instance(
    n: usize,
    d: u32,
    m: usize,
    even: bool,
    seed: u64,
    mode: OracleMode,
) -> Result<OracleInstance> {
    if m == 0 {
        return Err(Error::InvalidConfig(
            "at least one marked item is required".into(),
        ));
    }
    if m > n {
        return Err(Error::InvalidConfig(format!(
            "cannot mark {m} of {n} items"
        )));
    }
    if d < 2 {
        return Err(Error::InvalidConfig(format!(
            "the function range needs d >= 2, got {d}"
        )));
    }
    let background = n - m;
    let values = d as usize - 1;
    if even && background % values != 0 {
        return Err(Error::InvalidConfig(format!(
            "even distribution impossible: {values} values cannot evenly cover {background} unmarked items"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let marked = rand::seq::index::sample(&mut rng, n, m);
    let mut is_marked = vec![false; n];
    for j in marked.iter() {
        is_marked[j] = true;
    }

    let mut pool: Vec<u32> = (0..background).map(|i| 1 + (i % values) as u32).collect();
    pool.shuffle(&mut rng);

    let mut table = vec![0u32; n];
    let mut next = pool.into_iter();
    for (j, flag) in is_marked.iter().enumerate() {
        if !flag {
            table[j] = next.next().expect("pool sized to unmarked count");
        }
    }
    OracleInstance::new(table, d, mode)
}

/// Runs every cell of the grid, in parallel, and aggregates results in
/// canonical cell order (`N` outermost, then `d`, then `M`). A failing cell
/// lands in `failures` with its message; the sweep always completes.
///
/// # Errors
///
/// `InvalidConfig` when the grid itself is invalid.
pub fn run_sweep(config: &SweepConfig) -> Result<RunSweepResult> {
    config.validate()?;
    let mut cells = Vec::new();
    for &n in &config.n_values {
        for &d in &config.d_values {
            for &m in &config.m_values {
                cells.push((n, d, m));
            }
        }
    }

    let outcomes: Vec<std::result::Result<SweepRecord, SweepFailure>> = cells
        .par_iter()
        .map(|&(n, d, m)| {
            let seed = cell_seed(config.seed, n, d, m, config.mode, config.even);
            run_cell(n, d, m, seed, config).map_err(|e| SweepFailure {
                n,
                d,
                m,
                mode: config.mode,
                seed,
                message: e.to_string(),
            })
        })
        .collect();

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(r) => records.push(r),
            Err(f) => failures.push(f),
        }
    }
    Ok(RunSweepResult { records, failures })
}

fn run_cell(n: usize, d: u32, m: usize, seed: u64, config: &SweepConfig) -> Result<SweepRecord> {
    let started = std::time::Instant::now();
    let instance = generate_instance(n, d, m, config.even, seed, config.mode)?;
    let trace = run_search(&instance, config.window)?;
    let prediction = trace
        .prediction
        .as_ref()
        .expect("run_search always attaches a prediction");
    let queries_per_iteration = trace
        .queries_per_iteration
        .expect("run_search always records query cost");
    let wall_ms = if config.timing {
        started.elapsed().as_millis() as u64
    } else {
        0
    };
    Ok(SweepRecord {
        n,
        d,
        m,
        mode: config.mode,
        seed,
        k_max_sim: trace.k_max,
        p_max_sim: trace.p_max,
        k_max_pred: prediction.k_max,
        p_max_pred: prediction.p_max,
        queries: trace.k_max * queries_per_iteration,
        wall_ms,
        regime_warn: prediction.regime_warning,
    })
}

/// Power-law fit `y = e^intercept * x^exponent` by least squares on
/// `ln y` vs `ln x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub exponent: f64,
    pub intercept: f64,
    /// Standard error of the exponent estimate.
    pub exponent_stderr: f64,
    /// Root-mean-square residual in log space.
    pub rms_residual: f64,
}

/// Fits a power law through `(x, y)` points.
///
/// # Errors
///
/// `InvalidData` for fewer than three points, nonpositive coordinates, or a
/// degenerate (constant) x range.
pub fn fit_scaling(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(Error::InvalidData(format!(
            "a scaling fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::InvalidData(
            "power-law fitting needs strictly positive coordinates".into(),
        ));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx < 1e-18 {
        return Err(Error::InvalidData(
            "all x values coincide; the exponent is undetermined".into(),
        ));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let exponent = sxy / sxx;
    let intercept = mean_y - exponent * mean_x;
    let sse: f64 = logs
        .iter()
        .map(|p| (p.1 - (intercept + exponent * p.0)).powi(2))
        .sum();
    let dof = (logs.len() - 2) as f64;
    let exponent_stderr = if dof > 0.0 {
        (sse / dof / sxx).sqrt()
    } else {
        0.0
    };
    Ok(ScalingFit {
        exponent,
        intercept,
        exponent_stderr,
        rms_residual: (sse / n).sqrt(),
    })
}

/// Record column selectable as a fit axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitField {
    N,
    D,
    M,
    KMaxSim,
    PMaxSim,
}

impl FitField {
    fn value(self, record: &SweepRecord) -> f64 {
        match self {
            FitField::N => record.n as f64,
            FitField::D => record.d as f64,
            FitField::M => record.m as f64,
            FitField::KMaxSim => record.k_max_sim as f64,
            FitField::PMaxSim => record.p_max_sim,
        }
    }
}

/// Power-law fit across sweep records. Regime-warned records are excluded
/// unless `include_warned` is set.
///
/// # Errors
///
/// As [`fit_scaling`] once the records are filtered.
pub fn fit_records(
    records: &[SweepRecord],
    x: FitField,
    y: FitField,
    include_warned: bool,
) -> Result<ScalingFit> {
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| include_warned || !r.regime_warn)
        .map(|r| (x.value(r), y.value(r)))
        .collect();
    fit_scaling(&points)
}

/// Peak alignment between a search run and the equivalent walk.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkOracleComparison {
    pub n: usize,
    pub d: u32,
    /// Iteration of the search probability peak.
    pub oracle_k_max: usize,
    /// Step of the walk marked-class probability peak.
    pub walk_m_max: usize,
    /// `|walk_m_max - 2 * oracle_k_max|`; one search iteration corresponds
    /// to two walk steps.
    pub step_difference: usize,
    pub oracle_p_max: f64,
    pub walk_p_max: f64,
    pub probability_difference: f64,
}

/// Runs the canonical single-marked even instance at `(N, d)` through both
/// the search iterate and the equivalent star-graph walk and compares the
/// peaks. The walk window covers twice the search window.
///
/// # Errors
///
/// `InvalidConfig` when `d - 1` does not divide `N - 1`; propagates
/// simulation errors.
pub fn compare_walk_oracle(n: usize, d: u32) -> Result<WalkOracleComparison> {
    let values = d as usize - 1;
    if n == 0 || (n - 1) % values != 0 {
        return Err(Error::InvalidConfig(format!(
            "no even single-marked instance exists at N = {n}, d = {d}"
        )));
    }
    let per = (n - 1) / values;
    let mut table = vec![0u32];
    for v in 1..d {
        table.extend(std::iter::repeat(v).take(per));
    }
    let instance = OracleInstance::new(table, d, OracleMode::MultiPhase)?;
    let oracle_trace = run_search(&instance, None)?;

    let profile = instance.walk_profile()?;
    let marked_class = profile
        .class_with_phase(0.0)
        .expect("marked items map to the zero-phase class");
    let m_max = 2 * (oracle_trace.len() - 1) + 1;
    let walk_trace = walk::localization_curve(&profile, marked_class, m_max)?;

    let step_difference = walk_trace.k_max.abs_diff(2 * oracle_trace.k_max);
    Ok(WalkOracleComparison {
        n,
        d,
        oracle_k_max: oracle_trace.k_max,
        walk_m_max: walk_trace.k_max,
        step_difference,
        oracle_p_max: oracle_trace.p_max,
        walk_p_max: walk_trace.p_max,
        probability_difference: (oracle_trace.p_max - walk_trace.p_max).abs(),
    })
}

/// Writes sweep records as CSV with the stable column header
/// `N,d,M,mode,seed,k_max_sim,P_max_sim,k_max_pred,P_max_pred,queries,wall_ms,regime_warn`.
///
/// # Errors
///
/// I/O and serialization failures.
pub fn write_records_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    for record in records {
        writer
            .serialize(record)
            .map_err(|e| Error::InvalidData(format!("failed to serialize record: {e}")))?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes sweep records as a JSON array mirroring the CSV schema.
///
/// # Errors
///
/// I/O and serialization failures.
pub fn write_records_json(records: &[SweepRecord], path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut file, records)
        .map_err(|e| Error::InvalidData(format!("failed to serialize records: {e}")))?;
    file.write_all(b"\n")?;
    Ok(())
}

/// Writes a trace as CSV: `k,P_k` plus a `P_pred` column whenever the trace
/// carries a prediction.
///
/// # Errors
///
/// I/O failures.
pub fn write_trace_csv(trace: &SearchTrace, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    match &trace.prediction {
        Some(prediction) => {
            writer.write_record(["k", "P_k", "P_pred"])?;
            for (k, &p) in trace.probabilities.iter().enumerate() {
                writer.write_record([
                    k.to_string(),
                    format_float(p),
                    format_float(prediction.p_at(k)),
                ])?;
            }
        }
        None => {
            writer.write_record(["k", "P_k"])?;
            for (k, &p) in trace.probabilities.iter().enumerate() {
                writer.write_record([k.to_string(), format_float(p)])?;
            }
        }
    }
    writer.flush()?;
    Ok(())
}

/// Shortest round-trip float formatting; deterministic across runs.
fn format_float(v: f64) -> String {
    let mut s = format!("{v}");
    if s == "-0" {
        s = "0".into();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_instance_is_deterministic_and_even() {
        let a = generate_instance(243, 3, 1, true, 7, OracleMode::MultiPhase).unwrap();
        let b = generate_instance(243, 3, 1, true, 7, OracleMode::MultiPhase).unwrap();
        assert_eq!(a, b);
        let counts = a.value_counts();
        assert_eq!(counts, vec![1, 121, 121]);
        assert!(a.is_even_distribution());
        let c = generate_instance(243, 3, 1, true, 8, OracleMode::MultiPhase).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn smallest_even_instance() {
        let inst = generate_instance(4, 2, 1, true, 1, OracleMode::MultiPhase).unwrap();
        assert_eq!(inst.value_counts(), vec![1, 3]);
    }

    #[test]
    fn even_split_requires_divisibility() {
        assert!(matches!(
            generate_instance(10, 4, 2, true, 1, OracleMode::MultiPhase),
            Err(Error::InvalidConfig(_))
        ));
        let inst = generate_instance(10, 4, 2, false, 1, OracleMode::MultiPhase).unwrap();
        let counts = inst.value_counts();
        assert_eq!(counts[0], 2);
        let max = counts[1..].iter().max().unwrap();
        let min = counts[1..].iter().min().unwrap();
        assert!(max - min <= 1);
    }

    #[test]
    fn marked_count_is_exact() {
        let inst = generate_instance(100, 3, 7, false, 3, OracleMode::MultiPhase).unwrap();
        assert_eq!(inst.marked_count(), 7);
    }

    #[test]
    fn invalid_generation_requests_are_rejected() {
        assert!(generate_instance(10, 3, 0, false, 1, OracleMode::MultiPhase).is_err());
        assert!(generate_instance(10, 3, 11, false, 1, OracleMode::MultiPhase).is_err());
        assert!(generate_instance(10, 1, 1, false, 1, OracleMode::MultiPhase).is_err());
    }

    #[test]
    fn exact_square_root_data_fits_exponent_half() {
        let points: Vec<(f64, f64)> = [1.0, 4.0, 9.0, 16.0]
            .iter()
            .map(|&x: &f64| (x, x.sqrt()))
            .collect();
        let fit = fit_scaling(&points).unwrap();
        assert!((fit.exponent - 0.5).abs() < 1e-12);
        assert!(fit.rms_residual < 1e-12);
        assert!(fit.exponent_stderr < 1e-12);
    }

    #[test]
    fn degenerate_fits_are_rejected() {
        assert!(matches!(
            fit_scaling(&[(1.0, 1.0), (2.0, 2.0)]),
            Err(Error::InvalidData(_))
        ));
        assert!(matches!(
            fit_scaling(&[(2.0, 1.0), (2.0, 2.0), (2.0, 3.0)]),
            Err(Error::InvalidData(_))
        ));
        assert!(matches!(
            fit_scaling(&[(0.0, 1.0), (2.0, 2.0), (3.0, 3.0)]),
            Err(Error::InvalidData(_))
        ));
    }

    #[test]
    fn single_cell_sweep_matches_prediction() {
        let config = SweepConfig {
            seed: 7,
            ..SweepConfig::new(vec![243], vec![3], vec![1])
        };
        let result = run_sweep(&config).unwrap();
        assert!(result.failures.is_empty());
        assert_eq!(result.records.len(), 1);
        let r = &result.records[0];
        assert!((r.p_max_sim - 0.75).abs() < 0.05);
        assert!((r.k_max_sim as f64 - r.k_max_pred).abs() <= 2.0);
        assert_eq!(r.queries, r.k_max_sim);
        assert_eq!(r.wall_ms, 0);
        assert!(!r.regime_warn);

        let again = run_sweep(&config).unwrap();
        assert_eq!(result, again);
    }

    #[test]
    fn failing_cells_are_recorded_not_fatal() {
        // Only (243, 3, 1) satisfies the even split; (243, 3, 20) and
        // (10, 3, 1) leave an odd unmarked count for two values, and
        // (10, 3, 20) marks more items than exist.
        let config = SweepConfig {
            m_values: vec![1, 20],
            ..SweepConfig::new(vec![243, 10], vec![3], vec![1])
        };
        let result = run_sweep(&config).unwrap();
        assert_eq!(result.records.len(), 1);
        assert_eq!(result.failures.len(), 3);
        assert_eq!(result.records[0].n, 243);
    }

    #[test]
    fn sweep_rejects_empty_grid() {
        let config = SweepConfig::new(vec![], vec![3], vec![1]);
        assert!(matches!(run_sweep(&config), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn walk_and_oracle_peaks_align() {
        let cmp = compare_walk_oracle(243, 3).unwrap();
        assert!(
            cmp.step_difference <= 2,
            "step diff {}",
            cmp.step_difference
        );
        assert!(
            cmp.probability_difference <= 0.03,
            "probability diff {}",
            cmp.probability_difference
        );
        assert!(compare_walk_oracle(10, 3).is_err());
    }

    #[test]
    fn csv_output_is_stable_and_has_the_pinned_header() {
        let dir = std::env::temp_dir().join(format!("starwalk-harness-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("records.csv");
        let config = SweepConfig {
            seed: 11,
            ..SweepConfig::new(vec![81], vec![3], vec![1])
        };
        let result = run_sweep(&config).unwrap();
        write_records_csv(&result.records, &path).unwrap();
        let first = std::fs::read(&path).unwrap();
        write_records_csv(&result.records, &path).unwrap();
        let second = std::fs::read(&path).unwrap();
        assert_eq!(first, second);
        let text = String::from_utf8(first).unwrap();
        assert!(text.starts_with(
            "N,d,M,mode,seed,k_max_sim,P_max_sim,k_max_pred,P_max_pred,queries,wall_ms,regime_warn\n"
        ));
        assert!(text.contains("multi-phase"));

        let json_path = dir.join("records.json");
        write_records_json(&result.records, &json_path).unwrap();
        let parsed: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
        assert_eq!(parsed.as_array().unwrap().len(), 1);
        assert_eq!(parsed[0]["N"], 81);

        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn trace_files_carry_prediction_column() {
        let dir = std::env::temp_dir().join(format!("starwalk-trace-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("trace.csv");
        let instance = generate_instance(81, 3, 1, true, 3, OracleMode::MultiPhase).unwrap();
        let trace = run_search(&instance, None).unwrap();
        write_trace_csv(&trace, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("k,P_k,P_pred"));
        assert_eq!(text.lines().count(), trace.len() + 1);
        std::fs::remove_dir_all(&dir).ok();
    }
}
