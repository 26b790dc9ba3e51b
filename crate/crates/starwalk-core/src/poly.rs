//! Complex polynomials and a simultaneous-iteration root finder.
//!
//! Roots are found with Aberth's method: all approximations are updated
//! together, which keeps clustered and symmetric root sets (the norm here,
//! since eigenvalue polynomials have all roots on the unit circle) from
//! stalling the way independent Newton runs do. Initial guesses sit on a
//! circle slightly off the estimated root modulus with an irrational angular
//! offset so no guess starts on a symmetry axis.

use crate::error::{Error, Result};
use crate::tolerances;
use num_complex::Complex64;

/// Dense univariate polynomial, coefficients in ascending degree order.
///
/// `coeffs[k]` multiplies `z^k`; the leading coefficient is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

/// Options for [`solve`]; defaults come from [`tolerances`].
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Iteration cap before giving up with a convergence error.
    pub max_iterations: usize,
    /// Residual bound as a multiple of the largest coefficient magnitude.
    pub residual_factor: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_iterations: tolerances::MAX_ROOT_ITERATIONS,
            residual_factor: tolerances::ROOT_RESIDUAL_FACTOR,
        }
    }
}

impl Polynomial {
    /// Wraps ascending coefficients, trimming trailing zeros.
    ///
    /// # Errors
    ///
    /// `InvalidArgument` when all coefficients are zero or any is not finite.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidArgument(
                "polynomial coefficients must be finite".into(),
            ));
        }
        while coeffs.len() > 1 && coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() || coeffs.iter().all(|c| c.norm_sqr() == 0.0) {
            return Err(Error::InvalidArgument(
                "the zero polynomial has no defined root set".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    /// Degree after trailing-zero trimming.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Ascending coefficients.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial {
                coeffs: vec![Complex64::new(0.0, 0.0); 1],
            };
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Polynomial { coeffs }
    }

    /// Second derivative evaluated at `z`.
    pub fn second_derivative_at(&self, z: Complex64) -> Complex64 {
        self.derivative().eval_with_derivative(z).1
    }

    /// Largest coefficient magnitude, the scale for residual bounds.
    pub fn coefficient_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Multiplies by the monic linear factor `(z + a)`.
    pub fn mul_linear(&self, a: Complex64) -> Polynomial {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k] += c * a;
            out[k + 1] += c;
        }
        Polynomial { coeffs: out }
    }
}

/// Finds all `degree` roots with Aberth simultaneous iteration.
///
/// Roots are returned sorted by argument, then modulus; a root of
/// multiplicity `m` appears as `m` nearby entries. Convergence is declared
/// when every correction falls below machine scale; the result is then
/// residual-checked against `options.residual_factor` times the coefficient
/// scale.
///
/// # Errors
///
/// `InvalidArgument` for a constant polynomial, `Convergence` with the best
/// iterate when the cap is hit, `Numerical` when the converged roots fail the
/// residual bound.
pub fn solve(poly: &Polynomial, options: &SolveOptions) -> Result<Vec<Complex64>> {
    let n = poly.degree();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "cannot solve a constant polynomial".into(),
        ));
    }
    let scale = poly.coefficient_scale();
    let lead = poly.coeffs[n];
    if n == 1 {
        return Ok(vec![-poly.coeffs[0] / lead]);
    }

    let mut roots = initial_guesses(poly);
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    let mut converged = false;
    let mut iterations = 0usize;
    while iterations < options.max_iterations {
        iterations += 1;
        let mut max_step = 0.0f64;
        for i in 0..n {
            let zi = roots[i];
            let (p, dp) = poly.eval_with_derivative(zi);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm_sqr() > 0.0 {
                p / dp
            } else {
                // Flat spot: nudge off it instead of dividing by zero.
                roots[i] += Complex64::new(1e-6, 1e-6);
                max_step = f64::INFINITY;
                continue;
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, &zj) in roots.iter().enumerate() {
                if j != i {
                    repulsion += (zi - zj).finv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm_sqr() > 0.0 {
                newton / denom
            } else {
                newton
            };
            roots[i] = zi - step;
            max_step = max_step.max(step.norm() / (1.0 + roots[i].norm()));
        }
        let residual = max_residual(poly, &roots);
        if best.as_ref().map_or(true, |(r, _)| residual < *r) {
            best = Some((residual, roots.clone()));
        }
        if max_step <= 1e-14 {
            converged = true;
            break;
        }
    }

    let (best_residual, mut roots) = best.expect("at least one iteration ran");
    if !converged && best_residual > options.residual_factor * scale {
        return Err(Error::Convergence {
            iterations,
            best_residual,
            best_roots: roots,
        });
    }
    polish(poly, &mut roots);
    let final_residual = max_residual(poly, &roots);
    if final_residual > options.residual_factor * scale {
        return Err(Error::Numerical(format!(
            "root residual {final_residual:.3e} exceeds {:.3e}",
            options.residual_factor * scale
        )));
    }
    roots.sort_by(|a, b| {
        a.arg()
            .partial_cmp(&b.arg())
            .unwrap()
            .then(a.norm().partial_cmp(&b.norm()).unwrap())
    });
    Ok(roots)
}

/// [`solve`] with default options.
pub fn solve_default(poly: &Polynomial) -> Result<Vec<Complex64>> {
    solve(poly, &SolveOptions::default())
}

/// Guesses on a circle of radius `1.05 * |a_0/a_n|^(1/n)` (the geometric mean
/// of the root moduli), angularly offset so no guess falls onto the real axis
/// or another symmetry line of typical eigenvalue polynomials.
fn initial_guesses(poly: &Polynomial) -> Vec<Complex64> {
    let n = poly.degree();
    let lead = poly.coeffs[n].norm();
    let tail = poly.coeffs[0].norm();
    let mean_modulus = if tail > 0.0 {
        (tail / lead).powf(1.0 / n as f64)
    } else {
        1.0
    };
    let radius = 1.05 * mean_modulus.clamp(0.1, 10.0);
    (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + 0.7;
            Complex64::from_polar(radius, angle)
        })
        .collect()
}

fn max_residual(poly: &Polynomial, roots: &[Complex64]) -> f64 {
    roots
        .iter()
        .map(|&z| poly.eval(z).norm())
        .fold(0.0, f64::max)
}

/// One safeguarded Newton step per root; kept only when the residual drops.
fn polish(poly: &Polynomial, roots: &mut [Complex64]) {
    for z in roots.iter_mut() {
        let (p, dp) = poly.eval_with_derivative(*z);
        if dp.norm_sqr() == 0.0 {
            continue;
        }
        let candidate = *z - p / dp;
        if poly.eval(candidate).norm() < p.norm() {
            *z = candidate;
        }
    }
}
