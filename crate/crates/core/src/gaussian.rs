//! Gaussian continuous-variable states.
//!
//! Quadratures are ordered `(x1, p1, x2, p2, ...)` with `x = (a + a†)/√2` and
//! `p = i(a† - a)/√2`, so the vacuum covariance is `I/2`. All entries are the
//! symmetrized second moments `<{R_i, R_j}>/2 - <R_i><R_j>`.

use std::fmt;

use nalgebra::{DMatrix, Matrix2, Matrix4, SymmetricEigen};

use crate::error::{Error, Result};

/// Relative symmetry tolerance accepted on construction.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Slack below 1/2 allowed for symplectic eigenvalues of a physical state.
pub const PHYSICAL_TOL: f64 = 1e-9;
/// Relative slack on the radicand `σ² - 4 det V` before it is treated as an error.
pub const RADICAND_TOL: f64 = 1e-12;

/// Real symmetric `2n × 2n` covariance matrix of an `n`-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    data: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Validates symmetry and the uncertainty principle, then symmetrizes.
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        let cm = Self::symmetric(data)?;
        let nu = cm.symplectic_eigenvalues()?;
        if let Some(&min) = nu.first() {
            if min < 0.5 - PHYSICAL_TOL {
                return Err(Error::Unphysical(format!(
                    "smallest symplectic eigenvalue {min} < 1/2"
                )));
            }
        }
        Ok(cm)
    }

    /// Checks shape and symmetry only. Physicality is left to the caller.
    pub fn symmetric(data: DMatrix<f64>) -> Result<Self> {
        let (r, c) = data.shape();
        if r != c {
            return Err(Error::Dimension {
                expected: r,
                actual: c,
            });
        }
        if r == 0 || r % 2 != 0 {
            return Err(Error::Dimension {
                expected: r + r % 2,
                actual: r,
            });
        }
        let asym = asymmetry(&data);
        if asym > SYMMETRY_TOL * data.amax().max(f64::MIN_POSITIVE) {
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
        let data = (&data + data.transpose()) * 0.5;
        Ok(Self { data })
    }

    pub fn vacuum(modes: usize) -> Self {
        Self::thermal(modes, 0.0)
    }

    /// Product of identical thermal states with mean occupancy `nbar`.
    pub fn thermal(modes: usize, nbar: f64) -> Self {
        Self {
            data: DMatrix::identity(2 * modes, 2 * modes) * (nbar + 0.5),
        }
    }

    pub fn modes(&self) -> usize {
        self.data.nrows() / 2
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.data
    }

    /// Symplectic spectrum in ascending order, one value per mode.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_eigenvalues(&self.data)
    }

    /// Flips the sign of `p` of `mode` (partial transposition at covariance level).
    pub fn partial_transpose(&self, mode: usize) -> Result<Self> {
        let n = self.modes();
        if mode >= n {
            return Err(Error::ModeIndex {
                i: mode,
                j: mode,
                modes: n,
            });
        }
        let mut data = self.data.clone();
        let k = 2 * mode + 1;
        for idx in 0..2 * n {
            if idx != k {
                data[(k, idx)] = -data[(k, idx)];
                data[(idx, k)] = -data[(idx, k)];
            }
        }
        Ok(Self { data })
    }

    /// Reduced covariance of modes `i` and `j`, in that order.
    pub fn extract_pair(&self, i: usize, j: usize) -> Result<TwoModeCM> {
        let n = self.modes();
        if i == j || i >= n || j >= n {
            return Err(Error::ModeIndex { i, j, modes: n });
        }
        let block = |r: usize, c: usize| {
            Matrix2::new(
                self.data[(2 * r, 2 * c)],
                self.data[(2 * r, 2 * c + 1)],
                self.data[(2 * r + 1, 2 * c)],
                self.data[(2 * r + 1, 2 * c + 1)],
            )
        };
        Ok(TwoModeCM {
            a: block(i, i),
            b: block(j, j),
            c: block(i, j),
        })
    }
}

/// Two-mode covariance in block form `[[A, C], [Cᵀ, B]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCM {
    a: Matrix2<f64>,
    b: Matrix2<f64>,
    c: Matrix2<f64>,
}

impl TwoModeCM {
    /// Builds from blocks, rejecting asymmetric `A`/`B` or an unphysical result.
    pub fn new(a: Matrix2<f64>, b: Matrix2<f64>, c: Matrix2<f64>) -> Result<Self> {
        let scale = a.amax().max(b.amax()).max(c.amax()).max(f64::MIN_POSITIVE);
        for m in [&a, &b] {
            let asym = (m[(0, 1)] - m[(1, 0)]).abs();
            if asym > SYMMETRY_TOL * scale {
                return Err(Error::NotSymmetric { asymmetry: asym });
            }
        }
        let cm = Self::from_blocks_unchecked(a, b, c);
        CovarianceMatrix::new(cm.to_dmatrix())?;
        Ok(cm)
    }

    /// Builds from a 4×4 matrix without physicality checks; symmetrizes `A` and `B`.
    pub fn from_matrix(m: &Matrix4<f64>) -> Self {
        let s = (m + m.transpose()) * 0.5;
        Self {
            a: s.fixed_view::<2, 2>(0, 0).into_owned(),
            b: s.fixed_view::<2, 2>(2, 2).into_owned(),
            c: s.fixed_view::<2, 2>(0, 2).into_owned(),
        }
    }

    pub(crate) fn from_blocks_unchecked(a: Matrix2<f64>, b: Matrix2<f64>, c: Matrix2<f64>) -> Self {
        let sym = |m: Matrix2<f64>| (m + m.transpose()) * 0.5;
        Self {
            a: sym(a),
            b: sym(b),
            c,
        }
    }

    pub fn vacuum() -> Self {
        Self::from_matrix(&(Matrix4::identity() * 0.5))
    }

    /// Two-mode squeezed vacuum with squeezing parameter `r`.
    pub fn two_mode_squeezed(r: f64) -> Self {
        let ch = (2.0 * r).cosh() / 2.0;
        let sh = (2.0 * r).sinh() / 2.0;
        Self {
            a: Matrix2::identity() * ch,
            b: Matrix2::identity() * ch,
            c: Matrix2::new(sh, 0.0, 0.0, -sh),
        }
    }

    pub fn a(&self) -> &Matrix2<f64> {
        &self.a
    }

    pub fn b(&self) -> &Matrix2<f64> {
        &self.b
    }

    pub fn c(&self) -> &Matrix2<f64> {
        &self.c
    }

    pub fn to_matrix(&self) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&self.a);
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&self.b);
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(&self.c);
        m.fixed_view_mut::<2, 2>(2, 0).copy_from(&self.c.transpose());
        m
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        let m = self.to_matrix();
        DMatrix::from_fn(4, 4, |i, j| m[(i, j)])
    }

    /// Exchanges the two modes.
    pub fn swapped(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
            c: self.c.transpose(),
        }
    }

    /// Smallest symplectic eigenvalue of the partially transposed state.
    pub fn symplectic_min_pt(&self) -> Result<f64> {
        let sigma = self.a.determinant() + self.b.determinant() - 2.0 * self.c.determinant();
        let det = self.to_matrix().determinant();
        let mut radicand = sigma * sigma - 4.0 * det;
        if radicand < 0.0 {
            if radicand >= -RADICAND_TOL * sigma * sigma {
                radicand = 0.0;
            } else {
                return Err(Error::Unphysical(format!(
                    "negative radicand σ² - 4 det V = {radicand:e}"
                )));
            }
        }
        let nu2 = 0.5 * (sigma - radicand.sqrt());
        if !(nu2 > 0.0) {
            return Err(Error::Unphysical(format!(
                "partially transposed symplectic eigenvalue² = {nu2:e}"
            )));
        }
        Ok(nu2.sqrt())
    }

    pub fn log_negativity(&self) -> Result<NegativityValue> {
        log_negativity(self)
    }
}

impl From<TwoModeCM> for CovarianceMatrix {
    fn from(v: TwoModeCM) -> Self {
        CovarianceMatrix { data: v.to_dmatrix() }
    }
}

/// Logarithmic negativity in nats, always `>= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct NegativityValue(f64);

impl NegativityValue {
    pub const ZERO: NegativityValue = NegativityValue(0.0);

    pub fn from_nu(nu_minus: f64) -> Self {
        NegativityValue((-(2.0 * nu_minus).ln()).max(0.0))
    }

    /// Wraps an already computed negativity; negative inputs are clamped to zero.
    pub fn from_value(value: f64) -> Self {
        NegativityValue(value.max(0.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_entangled(self) -> bool {
        self.0 > 0.0
    }
}

impl fmt::Display for NegativityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<NegativityValue> for f64 {
    fn from(v: NegativityValue) -> f64 {
        v.0
    }
}

pub fn extract_pair(v: &CovarianceMatrix, i: usize, j: usize) -> Result<TwoModeCM> {
    v.extract_pair(i, j)
}

pub fn symplectic_min_pt(v: &TwoModeCM) -> Result<f64> {
    v.symplectic_min_pt()
}

/// `E_N = max(0, -ln 2ν̃₋)`.
pub fn log_negativity(v: &TwoModeCM) -> Result<NegativityValue> {
    Ok(NegativityValue::from_nu(v.symplectic_min_pt()?))
}

/// Block-diagonal symplectic form `⊕ [[0, 1], [-1, 0]]`.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        j[(2 * k, 2 * k + 1)] = 1.0;
        j[(2 * k + 1, 2 * k)] = -1.0;
    }
    j
}

/// Symplectic eigenvalues of a positive-definite `2n × 2n` matrix, ascending.
///
/// Uses `K = V^{1/2} Ω V^{1/2}`: `KᵀK` is symmetric with each `ν²` appearing twice.
pub fn symplectic_eigenvalues(v: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = v.nrows();
    if !dim.is_multiple_of(2) || v.ncols() != dim {
        return Err(Error::Dimension {
            expected: dim + dim % 2,
            actual: v.ncols(),
        });
    }
    let eig = SymmetricEigen::new(v.clone());
    let min = eig.eigenvalues.min();
    if !(min > 0.0) {
        return Err(Error::Unphysical(format!(
            "covariance is not positive definite (eigenvalue {min:e})"
        )));
    }
    let root = &eig.eigenvectors
        * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt))
        * eig.eigenvectors.transpose();
    let k = &root * symplectic_form(dim / 2) * &root;
    let s = k.transpose() * &k;
    let mut nu2: Vec<f64> = SymmetricEigen::new(s).eigenvalues.iter().copied().collect();
    nu2.sort_by(f64::total_cmp);
    Ok(nu2
        .chunks(2)
        .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
        .collect())
}

fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_pair_extraction() {
        let v = CovarianceMatrix::vacuum(4);
        let p = v.extract_pair(0, 1).unwrap();
        assert_eq!(*p.a(), Matrix2::identity() * 0.5);
        assert_eq!(*p.b(), Matrix2::identity() * 0.5);
        assert_eq!(*p.c(), Matrix2::zeros());
    }

    #[test]
    fn extract_pair_picks_cross_block() {
        let mut m = DMatrix::identity(8, 8) * 2.0;
        m[(0, 4)] = 0.1;
        m[(4, 0)] = 0.1;
        m[(1, 5)] = -0.2;
        m[(5, 1)] = -0.2;
        m[(0, 5)] = 0.05;
        m[(5, 0)] = 0.05;
        let v = CovarianceMatrix::new(m).unwrap();
        let p = v.extract_pair(0, 2).unwrap();
        assert_eq!(*p.c(), Matrix2::new(0.1, 0.05, 0.0, -0.2));
        let q = v.extract_pair(2, 0).unwrap();
        assert_eq!(*q.c(), p.c().transpose());
    }

    #[test]
    fn extract_pair_rejects_bad_indices() {
        let v = CovarianceMatrix::vacuum(2);
        assert!(matches!(v.extract_pair(0, 0), Err(Error::ModeIndex { .. })));
        assert!(matches!(v.extract_pair(0, 2), Err(Error::ModeIndex { .. })));
    }

    #[test]
    fn rejects_asymmetric_and_unphysical() {
        let mut m = DMatrix::identity(2, 2) * 0.5;
        m[(0, 1)] = 1e-3;
        assert!(matches!(
            CovarianceMatrix::new(m),
            Err(Error::NotSymmetric { .. })
        ));
        let m = DMatrix::identity(2, 2) * 0.4;
        assert!(matches!(CovarianceMatrix::new(m), Err(Error::Unphysical(_))));
        let m = DMatrix::identity(3, 3);
        assert!(matches!(CovarianceMatrix::new(m), Err(Error::Dimension { .. })));
    }

    #[test]
    fn squeezed_single_mode_is_physical() {
        let r: f64 = 0.7;
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            0.5 * (-2.0 * r).exp(),
            0.5 * (2.0 * r).exp(),
        ]));
        let nu = CovarianceMatrix::new(m).unwrap().symplectic_eigenvalues().unwrap();
        assert_abs_diff_eq!(nu[0], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn min_pt_reference_states() {
        assert_abs_diff_eq!(TwoModeCM::vacuum().symplectic_min_pt().unwrap(), 0.5, epsilon = 1e-15);
        let tmsv = TwoModeCM::two_mode_squeezed(0.5);
        assert_abs_diff_eq!(
            tmsv.symplectic_min_pt().unwrap(),
            (-1.0f64).exp() / 2.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(tmsv.symplectic_min_pt().unwrap(), 0.183_939_720_585_721_2, epsilon = 1e-12);
        let thermal = TwoModeCM::from_matrix(&(Matrix4::identity() * 1.5));
        assert_abs_diff_eq!(thermal.symplectic_min_pt().unwrap(), 1.5, epsilon = 1e-12);
    }

    #[test]
    fn negativity_reference_states() {
        assert_eq!(TwoModeCM::vacuum().log_negativity().unwrap().value(), 0.0);
        let e = TwoModeCM::two_mode_squeezed(0.5).log_negativity().unwrap();
        assert_abs_diff_eq!(e.value(), 1.0, epsilon = 1e-12);
        let thermal = TwoModeCM::from_matrix(&(Matrix4::identity() * 1.5));
        assert_eq!(thermal.log_negativity().unwrap().value(), 0.0);
    }

    #[test]
    fn large_thermal_radicand_is_clamped_not_rejected() {
        let big = TwoModeCM::from_matrix(&(Matrix4::identity() * 2.0e4 + Matrix4::from_element(1e-3)));
        let nu = big.symplectic_min_pt().unwrap();
        assert!(nu > 1e4);
    }

    #[test]
    fn grossly_unphysical_inputs_error() {
        // radicand σ² - 4 det V ≈ -8.7
        let bad = TwoModeCM::from_blocks_unchecked(
            Matrix2::new(-1.5, -0.6, -0.6, 1.2),
            Matrix2::new(0.1, -1.1, -1.1, -0.5),
            Matrix2::new(0.0, -0.3, 1.3, 1.0),
        );
        assert!(matches!(bad.symplectic_min_pt(), Err(Error::Unphysical(_))));
        assert!(TwoModeCM::new(*bad.a(), *bad.b(), *bad.c()).is_err());

        // real radicand but ν̃₋² < 0
        let indefinite = TwoModeCM::from_blocks_unchecked(
            Matrix2::new(1.0, 0.0, 0.0, -1.0),
            Matrix2::identity(),
            Matrix2::zeros(),
        );
        assert!(matches!(indefinite.symplectic_min_pt(), Err(Error::Unphysical(_))));
    }

    #[test]
    fn partial_transpose_flips_momentum_rows() {
        let v: CovarianceMatrix = TwoModeCM::two_mode_squeezed(0.3).into();
        let pt = v.partial_transpose(1).unwrap();
        let m = pt.as_matrix();
        assert_abs_diff_eq!(m[(1, 3)], (0.6f64).sinh() / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(3, 3)], (0.6f64).cosh() / 2.0, epsilon = 1e-15);
        let nu = symplectic_eigenvalues(m).unwrap();
        assert_abs_diff_eq!(nu[0], (-0.6f64).exp() / 2.0, epsilon = 1e-12);
    }
}
