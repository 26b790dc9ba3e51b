//! Dense matrix backend for independent verification.
//!
//! Builds explicit matrices for the walk step and the search iterate and
//! extracts their spectra through a Schur decomposition. This route shares no
//! code with the analytic spectrum or the in-place evolution kernels, so
//! agreement between the two is a real cross-check rather than a tautology.
//!
//! Dimensions are capped at [`tolerances::DENSE_DIMENSION_CAP`] basis states;
//! the dense route exists to certify small and medium instances, not to run
//! production sizes.

use crate::error::{Error, Result};
use crate::phase::PhaseProfile;
use crate::tolerances;
use crate::walk::WalkState;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

fn check_dimension(dim: usize) -> Result<()> {
    if dim > tolerances::DENSE_DIMENSION_CAP {
        return Err(Error::ResourceLimit(format!(
            "dense backend is capped at {} basis states, got {dim}",
            tolerances::DENSE_DIMENSION_CAP
        )));
    }
    Ok(())
}

/// Dense `2N x 2N` walk step in the basis `[toward_hub_0..N, toward_rim_0..N]`.
///
/// Row `j` picks up `e^{i phi_j}` times the old rim amplitude `j`; row `N+j`
/// holds `2/N` against every hub amplitude with an extra `-1` on hub
/// amplitude `j`.
///
/// # Errors
///
/// `ResourceLimit` when `2N` exceeds the dense cap.
pub fn dense_unitary(profile: &PhaseProfile) -> Result<DMatrix<Complex64>> {
    let n = profile.n();
    check_dimension(2 * n)?;
    let zero = Complex64::new(0.0, 0.0);
    let t = Complex64::new(2.0 / n as f64, 0.0);
    let mut u = DMatrix::from_element(2 * n, 2 * n, zero);
    for j in 0..n {
        u[(j, n + j)] = profile.phase_factor(j);
        for k in 0..n {
            u[(n + j, k)] = t;
        }
        u[(n + j, j)] -= Complex64::new(1.0, 0.0);
    }
    Ok(u)
}

/// Dense `N x N` search iterate: reflection about the mean composed onto a
/// diagonal of oracle phase factors, `G[j][k] = (2/N - delta_jk) w_k`.
///
/// # Errors
///
/// `ResourceLimit` when `N` exceeds the dense cap.
pub fn dense_grover(oracle_factors: &[Complex64]) -> Result<DMatrix<Complex64>> {
    let n = oracle_factors.len();
    check_dimension(n)?;
    let t = 2.0 / n as f64;
    let mut g = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for k in 0..n {
        for j in 0..n {
            g[(j, k)] = oracle_factors[k] * t;
        }
        g[(k, k)] -= oracle_factors[k];
    }
    Ok(g)
}

/// Flattens a walk state into the dense basis ordering.
pub fn state_to_vector(state: &WalkState) -> DVector<Complex64> {
    DVector::from_iterator(
        2 * state.n(),
        state.toward_hub().iter().chain(state.toward_rim()).copied(),
    )
}

/// Largest entry of `U* U - I`; zero for a unitary matrix.
pub fn unitarity_defect(matrix: &DMatrix<Complex64>) -> f64 {
    let identity = DMatrix::identity(matrix.nrows(), matrix.ncols());
    (matrix.adjoint() * matrix - identity)
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

/// Eigenvalues and orthonormal eigenvectors of a unitary matrix via Schur
/// decomposition. Eigenvalue `k` belongs to column `k` of the returned
/// matrix; the order is whatever the decomposition produces.
///
/// # Errors
///
/// `ResourceLimit` over the dense cap, `InvalidArgument` when the matrix is
/// not unitary to [`tolerances::DENSE_UNITARITY`], `Numerical` when the
/// iteration fails or leaves significant off-diagonal weight.
pub fn dense_eigensystem(
    matrix: &DMatrix<Complex64>,
) -> Result<(Vec<Complex64>, DMatrix<Complex64>)> {
    check_dimension(matrix.nrows())?;
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::InvalidArgument(format!(
            "matrix must be square, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    let defect = unitarity_defect(matrix);
    if defect > tolerances::DENSE_UNITARITY {
        return Err(Error::InvalidArgument(format!(
            "matrix is not unitary: defect {defect:.3e} exceeds {:.3e}",
            tolerances::DENSE_UNITARITY
        )));
    }
    let schur = matrix
        .clone()
        .try_schur(1.0e-14, 100_000)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    // A unitary matrix is normal, so its Schur form must be diagonal and the
    // Schur basis is then an eigenbasis.
    let mut offdiag = 0.0f64;
    for i in 0..t.nrows() {
        for j in 0..t.ncols() {
            if i != j {
                offdiag = offdiag.max(t[(i, j)].norm());
            }
        }
    }
    if offdiag > tolerances::DENSE_MATCH {
        return Err(Error::Numerical(format!(
            "Schur form is not diagonal: off-diagonal weight {offdiag:.3e}"
        )));
    }
    let eigenvalues = (0..t.nrows()).map(|i| t[(i, i)]).collect();
    Ok((eigenvalues, q))
}

/// Eigenvalues of a unitary matrix, sorted by argument then modulus.
///
/// # Errors
///
/// Same conditions as [`dense_eigensystem`].
pub fn dense_spectrum(matrix: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let (mut eigenvalues, _) = dense_eigensystem(matrix)?;
    crate::spectral::sort_canonical(&mut eigenvalues);
    Ok(eigenvalues)
}
