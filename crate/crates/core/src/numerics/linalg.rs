use nalgebra::{DMatrix, DVector, FullPivLU, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

const SCHUR_MAX_ITER: usize = 10_000;

/// Full complex spectrum of a real square matrix (real Schur decomposition).
pub fn eigenvalues(a: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension {
            expected: a.nrows(),
            actual: a.ncols(),
        });
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::param("matrix", "entries must be finite"));
    }
    let schur = Schur::try_new(a.clone(), f64::EPSILON, SCHUR_MAX_ITER).ok_or(Error::EigenConvergence)?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Largest real part over the spectrum.
pub fn spectral_abscissa(a: &DMatrix<f64>) -> Result<f64> {
    Ok(eigenvalues(a)?
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Solves `Z X + X Zᵀ = -Q` through the vectorized Kronecker-sum system.
///
/// One round of iterative refinement is applied; the result is symmetrized
/// when `Q` is symmetric.
pub fn lyapunov_solve(z: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = z.nrows();
    if z.ncols() != n {
        return Err(Error::Dimension {
            expected: n,
            actual: z.ncols(),
        });
    }
    if q.shape() != (n, n) {
        return Err(Error::Dimension {
            expected: n,
            actual: q.nrows(),
        });
    }
    let eye = DMatrix::<f64>::identity(n, n);
    let k = eye.kronecker(z) + z.kronecker(&eye);
    let lu = FullPivLU::new(k);
    if !lu.is_invertible() {
        return Err(Error::Singular("Lyapunov operator (marginal spectrum)"));
    }
    let solve = |rhs: &DMatrix<f64>| -> Result<DMatrix<f64>> {
        let b = DVector::from_column_slice(rhs.as_slice());
        let x = lu
            .solve(&b)
            .ok_or(Error::Singular("Lyapunov operator (marginal spectrum)"))?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singular("Lyapunov operator (non-finite solution)"));
        }
        Ok(DMatrix::from_column_slice(n, n, x.as_slice()))
    };
    let mut x = solve(&(-q))?;
    let r = -(q + z * &x + &x * z.transpose());
    x += solve(&r)?;
    if (q - q.transpose()).amax() == 0.0 {
        x = (&x + x.transpose()) * 0.5;
    }
    Ok(x)
}

/// `max |Z X + X Zᵀ + Q|`.
pub fn lyapunov_residual(z: &DMatrix<f64>, x: &DMatrix<f64>, q: &DMatrix<f64>) -> f64 {
    (z * x + x * z.transpose() + q).amax()
}
