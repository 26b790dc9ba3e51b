//! Analytic spectrum of the star-graph walk from its grouped phase profile.
//!
//! Every walk eigenvalue squares to either a root of a monic degree-`m`
//! polynomial (`m` = number of phase classes) or to `-e^{i phi_c}` for a
//! class with two or more edges. The polynomial arises from clearing
//! denominators in the scalar eigenvalue condition
//!
//! ```text
//! (2/N) * sum_c n_c / (z e^{-i phi_c} + 1) = 1,      z = lambda^2,
//! ```
//!
//! which gives `P(z) = prod_c (z + v_c) - 2 sum_c x_c v_c prod_{c' != c}
//! (z + v_{c'})` with `v_c = e^{i phi_c}` and `x_c = n_c / N`. Each root
//! feeds two walk eigenvalues `+sqrt(z)` and `-sqrt(z)`; each class with
//! `n_c >= 2` contributes `+/- i e^{i phi_c / 2}` with multiplicity
//! `n_c - 1`. Together that accounts for all `2N` eigenvalues.
//!
//! The perturbative expansion in [`perturbative_double_root`] tracks how a
//! double root of the large-class polynomial splits when small classes are
//! restored with their true weights; the split angle sets the localization
//! period of the walk.

use crate::error::{Error, Result};
use crate::phase::PhaseProfile;
use crate::poly::{self, Polynomial};
use crate::tolerances;
use num_complex::Complex64;

/// Origin of an eigenvalue branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchKind {
    /// Squared eigenvalue is a root of the grouped polynomial.
    Principal,
    /// Squared eigenvalue is `-e^{i phi_c}` for a class with `n_c >= 2`.
    Degenerate,
}

/// One squared-eigenvalue branch and the two walk eigenvalues above it.
#[derive(Debug, Clone)]
pub struct EigenBranch {
    /// Squared walk eigenvalue.
    pub z: Complex64,
    /// The pair `[sqrt(z), -sqrt(z)]`.
    pub eigenvalues: [Complex64; 2],
    /// Multiplicity of each member of the pair.
    pub multiplicity: usize,
    pub kind: BranchKind,
}

/// Complete analytic eigenvalue set of a walk.
#[derive(Debug, Clone)]
pub struct EigenSolution {
    branches: Vec<EigenBranch>,
    n: usize,
}

impl EigenSolution {
    pub fn branches(&self) -> &[EigenBranch] {
        &self.branches
    }

    /// Number of edges of the underlying star.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total eigenvalue count including multiplicity; always `2 n`.
    pub fn eigenvalue_count(&self) -> usize {
        self.branches.iter().map(|b| 2 * b.multiplicity).sum()
    }

    /// All eigenvalues repeated by multiplicity, sorted by argument then
    /// modulus.
    pub fn sorted_eigenvalues(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.eigenvalue_count());
        for b in &self.branches {
            for &ev in &b.eigenvalues {
                for _ in 0..b.multiplicity {
                    out.push(ev);
                }
            }
        }
        sort_canonical(&mut out);
        out
    }
}

/// Sorts complex values by argument, then modulus.
pub fn sort_canonical(values: &mut [Complex64]) {
    values.sort_by(|a, b| {
        a.arg()
            .partial_cmp(&b.arg())
            .unwrap()
            .then(a.norm().partial_cmp(&b.norm()).unwrap())
    });
}

fn grouped_polynomial_from_parts(phases: &[f64], fractions: &[f64]) -> Polynomial {
    let m = phases.len();
    let factors: Vec<Complex64> = phases
        .iter()
        .map(|&p| Complex64::from_polar(1.0, p))
        .collect();
    let zero = Complex64::new(0.0, 0.0);

    // prod_c (z + v_c), ascending coefficients.
    let mut coeffs = vec![zero; m + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    for (degree, &v) in factors.iter().enumerate() {
        for k in (0..=degree).rev() {
            let prev = coeffs[k];
            coeffs[k + 1] += prev;
            coeffs[k] *= v;
        }
    }

    // -2 x_c v_c * prod_{c' != c} (z + v_{c'}) for each class.
    for c in 0..m {
        let mut partial = vec![zero; m];
        partial[0] = Complex64::new(1.0, 0.0);
        let mut deg = 0usize;
        for (cc, &v) in factors.iter().enumerate() {
            if cc == c {
                continue;
            }
            for k in (0..=deg).rev() {
                let prev = partial[k];
                partial[k + 1] += prev;
                partial[k] *= v;
            }
            deg += 1;
        }
        let scale = factors[c] * (-2.0 * fractions[c]);
        for k in 0..m {
            coeffs[k] += scale * partial[k];
        }
    }

    Polynomial::new(coeffs).expect("monic by construction")
}

/// Monic polynomial whose roots are the squared principal eigenvalues.
pub fn grouped_polynomial(profile: &PhaseProfile) -> Polynomial {
    let n = profile.n() as f64;
    let (phases, fractions): (Vec<f64>, Vec<f64>) = profile
        .classes()
        .iter()
        .map(|c| (c.phase, c.count as f64 / n))
        .unzip();
    grouped_polynomial_from_parts(&phases, &fractions)
}

/// Grouped polynomial with the listed classes' weights removed and the
/// remaining weights rescaled to sum to one. All linear factors are kept, so
/// the degree is unchanged; this is the infinite-size limit in which the
/// excluded classes keep their phases but lose their weight.
///
/// # Errors
///
/// `InvalidArgument` for out-of-range or repeated indices, or when no class
/// would retain weight.
pub fn renormalized_polynomial(profile: &PhaseProfile, excluded: &[usize]) -> Result<Polynomial> {
    let m = profile.classes().len();
    let mut keep = vec![true; m];
    for &c in excluded {
        if c >= m {
            return Err(Error::InvalidArgument(format!(
                "class index {c} out of range for {m} classes"
            )));
        }
        if !keep[c] {
            return Err(Error::InvalidArgument(format!(
                "class index {c} listed twice"
            )));
        }
        keep[c] = false;
    }
    let n = profile.n() as f64;
    let retained: f64 = profile
        .classes()
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(c, _)| c.count as f64 / n)
        .sum();
    if retained <= 0.0 {
        return Err(Error::InvalidArgument(
            "at least one class must retain weight".into(),
        ));
    }
    let phases: Vec<f64> = profile.classes().iter().map(|c| c.phase).collect();
    let fractions: Vec<f64> = profile
        .classes()
        .iter()
        .zip(&keep)
        .map(|(c, &k)| {
            if k {
                c.count as f64 / n / retained
            } else {
                0.0
            }
        })
        .collect();
    Ok(grouped_polynomial_from_parts(&phases, &fractions))
}

/// Residual of the scalar eigenvalue condition at squared eigenvalue `z`:
/// `|(2/N) sum_c n_c / (z e^{-i phi_c} + 1) - 1|`. Zero exactly on the
/// principal branch.
///
/// # Errors
///
/// `PoleEvaluation` when `z` sits on a pole `-e^{i phi_c}` of the condition.
pub fn eigen_residual(profile: &PhaseProfile, z: Complex64) -> Result<f64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for (index, class) in profile.classes().iter().enumerate() {
        let denom = z * Complex64::from_polar(1.0, -class.phase) + 1.0;
        if denom.norm() < tolerances::POLE_GUARD {
            return Err(Error::PoleEvaluation {
                class_index: index,
                phase: class.phase,
            });
        }
        sum += Complex64::new(class.count as f64, 0.0) / denom;
    }
    Ok((sum * (2.0 / profile.n() as f64) - 1.0).norm())
}

/// Roots of the grouped polynomial, each certified against the scalar
/// eigenvalue condition. Sorted by argument then modulus.
///
/// # Errors
///
/// Propagates solver failures; `Numerical` when a root fails certification.
pub fn principal_roots(profile: &PhaseProfile) -> Result<Vec<Complex64>> {
    let p = grouped_polynomial(profile);
    let roots = poly::solve_default(&p)?;
    for &z in &roots {
        if (z.norm() - 1.0).abs() > tolerances::UNIT_CIRCLE {
            return Err(Error::Numerical(format!(
                "principal root {z} is off the unit circle by {:.3e}",
                (z.norm() - 1.0).abs()
            )));
        }
        let residual = eigen_residual(profile, z)?;
        if residual > tolerances::PRINCIPAL_RESIDUAL {
            return Err(Error::Numerical(format!(
                "principal root {z} fails the eigenvalue condition: residual {residual:.3e}"
            )));
        }
    }
    Ok(roots)
}

/// Branches contributed by classes with two or more edges: squared
/// eigenvalue `-e^{i phi_c}`, eigenvalues `+/- i e^{i phi_c / 2}`, each with
/// multiplicity `n_c - 1`.
pub fn degenerate_branches(profile: &PhaseProfile) -> Vec<EigenBranch> {
    profile
        .classes()
        .iter()
        .filter(|c| c.count >= 2)
        .map(|c| {
            let half = Complex64::from_polar(1.0, c.phase / 2.0);
            let i = Complex64::new(0.0, 1.0);
            EigenBranch {
                z: -Complex64::from_polar(1.0, c.phase),
                eigenvalues: [i * half, -(i * half)],
                multiplicity: c.count - 1,
                kind: BranchKind::Degenerate,
            }
        })
        .collect()
}

/// Full analytic spectrum: certified principal roots plus degenerate
/// branches, `2N` eigenvalues in total.
pub fn analytic_spectrum(profile: &PhaseProfile) -> Result<EigenSolution> {
    let mut branches: Vec<EigenBranch> = principal_roots(profile)?
        .into_iter()
        .map(|z| EigenBranch {
            z,
            eigenvalues: [z.sqrt(), -z.sqrt()],
            multiplicity: 1,
            kind: BranchKind::Principal,
        })
        .collect();
    branches.extend(degenerate_branches(profile));
    Ok(EigenSolution {
        branches,
        n: profile.n(),
    })
}

/// Splitting of a large-class double root when small classes regain weight.
#[derive(Debug, Clone)]
pub struct DoubleRootExpansion {
    /// Double root of the weight-renormalized large-class polynomial.
    pub z0: Complex64,
    /// Leading-order split `+/- sqrt(-2 f(z0) / f0''(z0))`, where `f` is the
    /// full polynomial and `f0` the renormalized one.
    pub delta_leading: [Complex64; 2],
    /// Roots of the local quadratic model
    /// `(f''(z0)/2) d^2 + f'(z0) d + f(z0) = 0`, ordered to match
    /// `delta_leading`.
    pub delta_refined: [Complex64; 2],
    /// Half rotation angle `|arg((z0 + d) / z0)| / 2` from the leading split,
    /// averaged over the pair.
    pub theta0_leading: f64,
    /// Same angle from the refined split.
    pub theta0: f64,
    /// Total weight fraction of the excluded small classes.
    pub small_fraction: f64,
}

/// Expands each double root of the large-class polynomial to first order in
/// the small-class weights. `small_classes` lists the class indices whose
/// weights are treated as the perturbation; their combined fraction must not
/// exceed [`tolerances::SMALL_CLASS_MAX_FRACTION`].
///
/// Returns one expansion per double root, sorted by the root's argument.
///
/// # Errors
///
/// `InvalidArgument` for an empty or invalid small-class set or an oversized
/// perturbation; `NoSpeedup` when the large-class polynomial has no double
/// root, in which case no eigenvalue pair coalesces and the walk has no slow
/// rotation mode to exploit.
pub fn perturbative_double_root(
    profile: &PhaseProfile,
    small_classes: &[usize],
) -> Result<Vec<DoubleRootExpansion>> {
    if small_classes.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one small class is required".into(),
        ));
    }
    let n = profile.n() as f64;
    let f0 = renormalized_polynomial(profile, small_classes)?;
    let small_fraction: f64 = small_classes
        .iter()
        .map(|&c| profile.classes()[c].count as f64 / n)
        .sum();
    if small_fraction > tolerances::SMALL_CLASS_MAX_FRACTION {
        return Err(Error::InvalidArgument(format!(
            "small-class fraction {small_fraction:.4} exceeds {}; the expansion parameter is not small",
            tolerances::SMALL_CLASS_MAX_FRACTION
        )));
    }
    let f = grouped_polynomial(profile);

    let roots0 = poly::solve_default(&f0)?;
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for &r in &roots0 {
        match clusters
            .iter_mut()
            .find(|cl| (cl[0] - r).norm() <= tolerances::ROOT_CLUSTER)
        {
            Some(cl) => cl.push(r),
            None => clusters.push(vec![r]),
        }
    }

    let mut expansions = Vec::new();
    for cluster in clusters.iter().filter(|cl| cl.len() == 2) {
        let z0 = (cluster[0] + cluster[1]) / 2.0;
        let (v0, d0) = f0.eval_with_derivative(z0);
        let dd0 = f0.second_derivative_at(z0);
        if v0.norm() > tolerances::DOUBLE_ROOT_VALUE
            || d0.norm() > tolerances::DOUBLE_ROOT_DERIVATIVE
            || dd0.norm() <= tolerances::DOUBLE_ROOT_DERIVATIVE
        {
            continue;
        }

        let (fv, fd) = f.eval_with_derivative(z0);
        let fdd = f.second_derivative_at(z0);
        let lead = (fv * (-2.0) / dd0).sqrt();
        let delta_leading = [lead, -lead];

        let a = fdd / 2.0;
        let delta_refined = if a.norm() > 0.0 {
            let disc = fd * fd - a * fv * 4.0;
            let sq = disc.sqrt();
            let q1 = (-fd + sq) / (a * 2.0);
            let q2 = (-fd - sq) / (a * 2.0);
            if (q1 - lead).norm() + (q2 + lead).norm() <= (q1 + lead).norm() + (q2 - lead).norm() {
                [q1, q2]
            } else {
                [q2, q1]
            }
        } else {
            delta_leading
        };

        let angle = |d: Complex64| ((z0 + d) / z0).arg().abs() / 2.0;
        expansions.push(DoubleRootExpansion {
            z0,
            delta_leading,
            delta_refined,
            theta0_leading: (angle(delta_leading[0]) + angle(delta_leading[1])) / 2.0,
            theta0: (angle(delta_refined[0]) + angle(delta_refined[1])) / 2.0,
            small_fraction,
        });
    }

    if expansions.is_empty() {
        return Err(Error::NoSpeedup(format!(
            "the large-class polynomial of degree {} has only simple roots; no eigenvalue pair coalesces, so restoring the small classes produces no slow rotation mode",
            f0.degree()
        )));
    }
    expansions.sort_by(|a, b| a.z0.arg().partial_cmp(&b.z0.arg()).unwrap());
    Ok(expansions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::PhaseProfile;
    use std::f64::consts::PI;

    const THIRD: f64 = 2.0 * PI / 3.0;

    fn profile(classes: &[(f64, usize)]) -> PhaseProfile {
        PhaseProfile::from_classes(classes).unwrap()
    }

    #[test]
    fn flat_profile_polynomial_is_z_minus_one() {
        let p = grouped_polynomial(&profile(&[(0.0, 8)]));
        assert_eq!(p.degree(), 1);
        assert!((p.coeffs()[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((p.coeffs()[1] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn two_phase_polynomial_matches_closed_form() {
        // Marked phase 0 (1 edge), background phase pi (99 edges):
        // z^2 + 2 r z + 1 with r = 1 - 2/N.
        let p = grouped_polynomial(&profile(&[(0.0, 1), (PI, 99)]));
        let r = 1.0 - 2.0 / 100.0;
        assert_eq!(p.degree(), 2);
        assert!((p.coeffs()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((p.coeffs()[1] - Complex64::new(2.0 * r, 0.0)).norm() < 1e-12);
        assert!((p.coeffs()[2] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn three_phase_cubic_matches_closed_form() {
        // One marked edge at phase 0 plus two balanced classes at +/- 2pi/3:
        // z^3 + (1 - 3x) z^2 + (3x - 1) z - 1 with x = 1/N.
        let p = grouped_polynomial(&profile(&[(0.0, 1), (THIRD, 50), (-THIRD, 50)]));
        let x = 1.0 / 101.0;
        let expect = [-1.0, 3.0 * x - 1.0, 1.0 - 3.0 * x, 1.0];
        for (k, &e) in expect.iter().enumerate() {
            assert!(
                (p.coeffs()[k] - Complex64::new(e, 0.0)).norm() < 1e-12,
                "coefficient {k}"
            );
        }
    }

    #[test]
    fn two_phase_principal_roots_match_closed_form() {
        let prof = profile(&[(0.0, 1), (PI, 99)]);
        let roots = principal_roots(&prof).unwrap();
        let r = 1.0 - 2.0 / 100.0;
        let expect = Complex64::new(-r, (1.0 - r * r).sqrt());
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().any(|z| (z - expect).norm() < 1e-10));
        assert!(roots.iter().any(|z| (z - expect.conj()).norm() < 1e-10));
    }

    #[test]
    fn residual_is_zero_on_roots_and_large_off_them() {
        let prof = profile(&[(0.0, 1), (THIRD, 50), (-THIRD, 50)]);
        for z in principal_roots(&prof).unwrap() {
            assert!(eigen_residual(&prof, z).unwrap() < 1e-12);
        }
        let off = eigen_residual(&prof, Complex64::new(0.5, 0.0)).unwrap();
        assert!(off > 0.01, "off-root residual {off}");
    }

    #[test]
    fn residual_reports_pole() {
        let prof = profile(&[(0.0, 4)]);
        let err = eigen_residual(&prof, Complex64::new(-1.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::PoleEvaluation { class_index: 0, .. }));
    }

    #[test]
    fn degenerate_branch_of_flat_profile() {
        let branches = degenerate_branches(&profile(&[(0.0, 8)]));
        assert_eq!(branches.len(), 1);
        let b = &branches[0];
        assert!((b.z - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((b.eigenvalues[0] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((b.eigenvalues[1] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(b.multiplicity, 7);
    }

    #[test]
    fn spectrum_counts_all_eigenvalues() {
        let prof = profile(&[(0.0, 1), (THIRD, 50), (-THIRD, 50)]);
        let solution = analytic_spectrum(&prof).unwrap();
        assert_eq!(solution.eigenvalue_count(), 2 * 101);
        assert_eq!(solution.sorted_eigenvalues().len(), 2 * 101);
        for ev in solution.sorted_eigenvalues() {
            assert!((ev.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn three_phase_expansion_matches_closed_form() {
        let prof = profile(&[(0.0, 1), (THIRD, 50), (-THIRD, 50)]);
        let expansions = perturbative_double_root(&prof, &[0]).unwrap();
        assert_eq!(expansions.len(), 1);
        let e = &expansions[0];
        assert!((e.z0 - Complex64::new(-1.0, 0.0)).norm() < 1e-6);
        // delta = +/- i sqrt(3/N)
        let mag = (3.0_f64 / 101.0).sqrt();
        assert!((e.delta_leading[0].norm() - mag).abs() < 1e-8);
        assert!(e.delta_leading[0].re.abs() < 1e-8);
        assert!((e.small_fraction - 1.0 / 101.0).abs() < 1e-15);
        assert!((2.0 * e.theta0_leading - mag.atan()).abs() < 1e-8);
    }

    #[test]
    fn d_phase_expansion_matches_closed_form() {
        // Marked edge plus two background classes of 121 edges: the split is
        // +/- i sqrt(12 / (N (d + 1))) = +/- i / 9 for N = 243, d = 3.
        let prof = profile(&[(0.0, 1), (-THIRD, 121), (THIRD, 121)]);
        let expansions = perturbative_double_root(&prof, &[0]).unwrap();
        assert_eq!(expansions.len(), 1);
        let e = &expansions[0];
        assert!((e.z0 - Complex64::new(-1.0, 0.0)).norm() < 1e-6);
        assert!((e.delta_leading[0].norm() - 1.0 / 9.0).abs() < 1e-8);
    }

    #[test]
    fn refined_split_is_exact_for_quadratic() {
        // For a two-class profile the full polynomial is quadratic, so the
        // local quadratic model reproduces its roots exactly.
        let prof = profile(&[(0.0, 1), (PI, 255)]);
        let e = &perturbative_double_root(&prof, &[0]).unwrap()[0];
        let exact = principal_roots(&prof).unwrap();
        for &d in &e.delta_refined {
            let root = e.z0 + d;
            assert!(
                exact.iter().any(|z| (z - root).norm() < 1e-10),
                "refined root {root} not among exact roots"
            );
        }
    }

    #[test]
    fn simple_spectrum_reports_no_speedup() {
        let prof = profile(&[(0.0, 1), (PI / 2.0, 99)]);
        let err = perturbative_double_root(&prof, &[0]).unwrap_err();
        assert!(matches!(err, Error::NoSpeedup(_)));
    }

    #[test]
    fn oversized_perturbation_is_rejected() {
        let prof = profile(&[(0.0, 30), (THIRD, 35), (-THIRD, 35)]);
        let err = perturbative_double_root(&prof, &[0]).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn renormalized_polynomial_validates_indices() {
        let prof = profile(&[(0.0, 1), (PI, 99)]);
        assert!(renormalized_polynomial(&prof, &[2]).is_err());
        assert!(renormalized_polynomial(&prof, &[0, 0]).is_err());
        assert!(renormalized_polynomial(&prof, &[0, 1]).is_err());
    }
}
