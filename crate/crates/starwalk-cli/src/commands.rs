//! Subcommand implementations and the exit-code mapping.

use crate::output::{sig, sig_complex};
use crate::{
    phases, svg, Cli, Command, FormatArg, GroverArgs, PredictArgs, SpectrumArgs, SweepArgs,
    WalkArgs,
};
use starwalk_core::harness::{self, FitField, SweepConfig};
use starwalk_core::oracle::{self, OracleMode};
use starwalk_core::spectral::{self, BranchKind};
use starwalk_core::{dense, tolerances, walk};
use starwalk_core::{Complex64, Error, PhaseProfile, PredictionRecord, SearchTrace};
use std::fmt;
use std::path::{Path, PathBuf};

/// A command failure carrying its exit code: usage 2, runtime 3, refused 4.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(String),
    Refused(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 3,
            Failure::Refused(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) | Failure::Runtime(msg) => write!(f, "error: {msg}"),
            Failure::Refused(msg) => write!(f, "refused: {msg}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::InvalidDimension(_)
            | Error::InvalidArgument(_)
            | Error::InvalidInstance(_)
            | Error::InvalidConfig(_)
            | Error::InvalidData(_) => Failure::Usage(err.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Walk(args) => cmd_walk(args, &resolve_out_dir(cli.out_dir.clone())?),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Grover(args) => cmd_grover(args, &resolve_out_dir(cli.out_dir.clone())?),
        Command::Predict(args) => cmd_predict(args),
        Command::Sweep(args) => cmd_sweep(args, &resolve_out_dir(cli.out_dir.clone())?),
    }
}

/// Flag value, then `STARWALK_OUT_DIR`, then the working directory; the
/// directory is created when missing.
fn resolve_out_dir(flag: Option<PathBuf>) -> Result<PathBuf, Failure> {
    let dir = flag
        .or_else(|| std::env::var_os("STARWALK_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)
        .map_err(|err| Failure::Runtime(format!("cannot create {}: {err}", dir.display())))?;
    Ok(dir)
}

fn write_svg(trace: &SearchTrace, trace_path: &Path, title: &str) -> Result<PathBuf, Failure> {
    let path = trace_path.with_extension("svg");
    std::fs::write(&path, svg::line_chart(&trace.probabilities, title))
        .map_err(|err| Failure::Runtime(format!("cannot write {}: {err}", path.display())))?;
    Ok(path)
}

fn cmd_walk(args: &WalkArgs, out_dir: &Path) -> Result<(), Failure> {
    let classes = phases::parse_classes(&args.phases).map_err(Failure::Usage)?;
    let profile = PhaseProfile::from_classes(&classes)?;
    let target = match args.target {
        Some(index) => {
            let (phase, _) = *classes.get(index).ok_or_else(|| {
                Failure::Usage(format!(
                    "target {index} out of range, {} classes listed",
                    classes.len()
                ))
            })?;
            profile
                .class_with_phase(phase)
                .expect("every listed phase owns a class")
        }
        None => smallest_class(&profile),
    };
    let (class_phase, class_count) = {
        let class = &profile.classes()[target];
        (class.phase, class.count)
    };
    let steps = args
        .steps
        .unwrap_or_else(|| default_steps(&profile, target));

    let class_trace = walk::localization_curve(&profile, target, steps)?;
    let per_edge = class_count as f64;
    let trace = SearchTrace::from_probabilities(
        class_trace
            .probabilities
            .iter()
            .map(|p| p / per_edge)
            .collect(),
        None,
        None,
    );

    let path = out_dir.join(&args.trace);
    harness::write_trace_csv(&trace, &path)?;

    println!(
        "# walk: N={}, classes={}, target={} (phase {}, count {}), steps={}",
        profile.n(),
        profile.classes().len(),
        target,
        sig(class_phase),
        class_count,
        steps
    );
    println!("# tolerances: unit_norm={:e}", tolerances::UNIT_NORM);
    println!("# trace: {}", path.display());
    if args.svg {
        let svg_path = write_svg(
            &trace,
            &path,
            &format!("walk N={} per-edge probability", profile.n()),
        )?;
        println!("# svg: {}", svg_path.display());
    }
    println!(
        "peak per-edge probability {} at step {}",
        sig(trace.p_max),
        trace.k_max
    );
    Ok(())
}

/// Class with the fewest edges; the first listed on ties.
fn smallest_class(profile: &PhaseProfile) -> usize {
    profile
        .classes()
        .iter()
        .enumerate()
        .min_by_key(|(_, c)| c.count)
        .map(|(i, _)| i)
        .expect("a profile always has at least one class")
}

/// Twice the crest length `pi / (2 theta0)` of the slowest rotation mode
/// seeded by the target class; `max(32, 2N)` when no such mode exists.
fn default_steps(profile: &PhaseProfile, target: usize) -> usize {
    let fallback = (2 * profile.n()).max(32);
    match spectral::perturbative_double_root(profile, &[target]) {
        Ok(expansions) => expansions
            .iter()
            .map(|e| e.theta0)
            .filter(|t| *t > 0.0)
            .map(|t| 2 * (std::f64::consts::PI / (2.0 * t)).ceil() as usize)
            .max()
            .unwrap_or(fallback),
        Err(_) => fallback,
    }
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<(), Failure> {
    let classes = phases::parse_classes(&args.phases).map_err(Failure::Usage)?;
    let profile = PhaseProfile::from_classes(&classes)?;
    println!(
        "# spectrum: N={}, classes={}",
        profile.n(),
        profile.classes().len()
    );
    println!(
        "# tolerances: unit_circle={:e} principal_residual={:e}",
        tolerances::UNIT_CIRCLE,
        tolerances::PRINCIPAL_RESIDUAL
    );
    let solution = spectral::analytic_spectrum(&profile)?;
    for branch in solution.branches() {
        match branch.kind {
            BranchKind::Principal => {
                let residual = spectral::eigen_residual(&profile, branch.z)?;
                println!(
                    "principal   z = {}  lambda = {} {}  residual = {}",
                    sig_complex(branch.z),
                    sig_complex(branch.eigenvalues[0]),
                    sig_complex(branch.eigenvalues[1]),
                    sig(residual)
                );
            }
            BranchKind::Degenerate => {
                println!(
                    "degenerate  z = {}  lambda = {} {}  multiplicity = {}",
                    sig_complex(branch.z),
                    sig_complex(branch.eigenvalues[0]),
                    sig_complex(branch.eigenvalues[1]),
                    branch.multiplicity
                );
            }
        }
    }
    print_perturbative(&profile, args.small.as_deref());
    if args.dense_check {
        let unitary = dense::dense_unitary(&profile)?;
        let dense_values = dense::dense_spectrum(&unitary)?;
        let mismatch = max_matching_distance(&solution.sorted_eigenvalues(), &dense_values);
        println!(
            "max eigenvalue mismatch = {} (bound {:e})",
            sig(mismatch),
            tolerances::DENSE_MATCH
        );
    }
    Ok(())
}

/// Prints the double-root expansions for the selected small classes, or a
/// note when no valid perturbation exists. Informational: never fails the
/// command.
fn print_perturbative(profile: &PhaseProfile, small: Option<&[usize]>) {
    let auto: Vec<usize>;
    let small = match small {
        Some(list) => list,
        None => {
            auto = profile
                .classes()
                .iter()
                .enumerate()
                .filter(|(_, c)| {
                    c.count as f64 / profile.n() as f64 <= tolerances::SMALL_CLASS_MAX_FRACTION
                })
                .map(|(i, _)| i)
                .collect();
            &auto
        }
    };
    if small.is_empty() || small.len() == profile.classes().len() {
        println!("perturbative: no small-class perturbation applies");
        return;
    }
    match spectral::perturbative_double_root(profile, small) {
        Ok(expansions) => {
            for e in &expansions {
                println!(
                    "perturbative z0 = {}  split = {} / {}  theta0 = {}",
                    sig_complex(e.z0),
                    sig_complex(e.delta_refined[0]),
                    sig_complex(e.delta_refined[1]),
                    sig(e.theta0)
                );
            }
        }
        Err(err) => println!("perturbative: {err}"),
    }
}

/// Largest greedy nearest-neighbor match distance between two equally
/// sized eigenvalue multisets.
fn max_matching_distance(analytic: &[Complex64], dense: &[Complex64]) -> f64 {
    let mut used = vec![false; dense.len()];
    let mut worst = 0.0f64;
    for &a in analytic {
        let mut best = f64::INFINITY;
        let mut best_index = usize::MAX;
        for (i, &d) in dense.iter().enumerate() {
            if !used[i] {
                let dist = (a - d).norm();
                if dist < best {
                    best = dist;
                    best_index = i;
                }
            }
        }
        if best_index != usize::MAX {
            used[best_index] = true;
            worst = worst.max(best);
        }
    }
    worst
}

fn refusal(n: usize, d: u32, m: usize) -> Failure {
    Failure::Refused(format!(
        "N={n}, d={d}, M={m} is outside the asymptotic regime (needs M/N <= {} and d < N); drop --strict to run anyway",
        sig(tolerances::REGIME_MAX_MARKED_FRACTION)
    ))
}

fn cmd_grover(args: &GroverArgs, out_dir: &Path) -> Result<(), Failure> {
    let mode = OracleMode::from(args.mode);
    let prediction = PredictionRecord::new(args.n, args.d, args.m);
    if args.strict && prediction.regime_warning {
        return Err(refusal(args.n, args.d, args.m));
    }
    let instance = harness::generate_instance(args.n, args.d, args.m, args.even, args.seed, mode)?;
    let trace = oracle::run_search(&instance, args.window)?;
    let path = out_dir.join(&args.trace);
    harness::write_trace_csv(&trace, &path)?;

    println!(
        "# grover: N={}, d={}, M={}, mode={}, even={}, seed={}, window={}",
        args.n,
        args.d,
        args.m,
        mode.as_str(),
        args.even,
        args.seed,
        trace.len().saturating_sub(1)
    );
    println!(
        "# tolerances: unit_norm={:e} regime_max_marked_fraction={:e}",
        tolerances::UNIT_NORM,
        tolerances::REGIME_MAX_MARKED_FRACTION
    );
    println!("# trace: {}", path.display());
    if args.svg {
        let svg_path = write_svg(
            &trace,
            &path,
            &format!("grover N={} d={} success probability", args.n, args.d),
        )?;
        println!("# svg: {}", svg_path.display());
    }
    println!(
        "P_max_sim {} at k_max_sim {}",
        sig(trace.p_max),
        trace.k_max
    );
    println!(
        "P_max_pred {} at k_max_pred {}",
        sig(prediction.p_max),
        sig(prediction.k_max)
    );
    let per_iteration = trace.queries_per_iteration.unwrap_or(0);
    println!(
        "queries {} ({} per iteration)",
        trace.k_max * per_iteration,
        per_iteration
    );
    if prediction.regime_warning {
        println!(
            "regime warning: outside M/N <= {} and d < N",
            sig(tolerances::REGIME_MAX_MARKED_FRACTION)
        );
    }
    Ok(())
}

fn cmd_predict(args: &PredictArgs) -> Result<(), Failure> {
    let prediction = PredictionRecord::new(args.n, args.d, args.m);
    if args.strict && prediction.regime_warning {
        return Err(refusal(args.n, args.d, args.m));
    }
    println!("# predict: N={}, d={}, M={}", args.n, args.d, args.m);
    println!("theta {}", sig(prediction.theta));
    println!("P_max_pred {}", sig(prediction.p_max));
    println!("k_max_pred {}", sig(prediction.k_max));
    if prediction.regime_warning {
        println!(
            "regime warning: outside M/N <= {} and d < N",
            sig(tolerances::REGIME_MAX_MARKED_FRACTION)
        );
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, out_dir: &Path) -> Result<(), Failure> {
    if args.strict {
        for &n in &args.n {
            for &d in &args.d {
                for &m in &args.m {
                    if PredictionRecord::new(n, d, m).regime_warning {
                        return Err(refusal(n, d, m));
                    }
                }
            }
        }
    }
    let mut config = SweepConfig::new(args.n.clone(), args.d.clone(), args.m.clone());
    config.mode = OracleMode::from(args.mode);
    config.even = args.even;
    config.seed = args.seed;
    config.window = args.window;
    config.timing = args.timing;
    let result = harness::run_sweep(&config)?;

    println!(
        "# sweep: N={:?}, d={:?}, M={:?}, mode={}, even={}, seed={}",
        args.n,
        args.d,
        args.m,
        config.mode.as_str(),
        args.even,
        args.seed
    );
    println!(
        "# tolerances: regime_max_marked_fraction={:e}",
        tolerances::REGIME_MAX_MARKED_FRACTION
    );
    if matches!(args.format, FormatArg::Csv | FormatArg::Both) {
        let path = out_dir.join(format!("{}.csv", args.name));
        harness::write_records_csv(&result.records, &path)?;
        println!("# records: {}", path.display());
    }
    if matches!(args.format, FormatArg::Json | FormatArg::Both) {
        let path = out_dir.join(format!("{}.json", args.name));
        harness::write_records_json(&result.records, &path)?;
        println!("# records: {}", path.display());
    }
    println!(
        "cells {} ({} records, {} failures)",
        result.records.len() + result.failures.len(),
        result.records.len(),
        result.failures.len()
    );
    for failure in &result.failures {
        println!(
            "failed N={} d={} M={}: {}",
            failure.n, failure.d, failure.m, failure.message
        );
    }
    match harness::fit_records(
        &result.records,
        FitField::N,
        FitField::KMaxSim,
        args.include_warned,
    ) {
        Ok(fit) => println!(
            "fit k_max_sim ~ N^{} (stderr {}, rms residual {})",
            sig(fit.exponent),
            sig(fit.exponent_stderr),
            sig(fit.rms_residual)
        ),
        Err(err) => println!("fit skipped: {err}"),
    }
    if result.records.is_empty() {
        return Err(Failure::Runtime("every sweep cell failed".into()));
    }
    Ok(())
}
