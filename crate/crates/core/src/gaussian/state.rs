use nalgebra::{DMatrix, DVector};

use super::{max_asymmetry, min_hermitian_eigenvalue, PSD_TOL, SYMMETRY_TOL};
use crate::error::{Error, Result};

/// The symplectic form `Ω = ⊕ [[0, 1], [-1, 0]]` on `modes` modes.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * modes, 2 * modes);
    for j in 0..modes {
        omega[(2 * j, 2 * j + 1)] = 1.0;
        omega[(2 * j + 1, 2 * j)] = -1.0;
    }
    omega
}

/// A Gaussian state given by its first moments and covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    first_moments: DVector<f64>,
    covariance: DMatrix<f64>,
}

impl GaussianState {
    /// Builds a state after checking shapes and symmetry.
    ///
    /// Physicality is not enforced here; see [`GaussianState::is_physical`].
    pub fn new(first_moments: DVector<f64>, covariance: DMatrix<f64>) -> Result<Self> {
        let n = first_moments.len();
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                context: "first moments (must be 2 per mode)",
                expected: n + n % 2,
                actual: n,
            });
        }
        if covariance.nrows() != n {
            return Err(Error::DimensionMismatch {
                context: "covariance rows",
                expected: n,
                actual: covariance.nrows(),
            });
        }
        if covariance.ncols() != n {
            return Err(Error::DimensionMismatch {
                context: "covariance columns",
                expected: n,
                actual: covariance.ncols(),
            });
        }
        let asymmetry = max_asymmetry(&covariance);
        if asymmetry > SYMMETRY_TOL {
            return Err(Error::NotSymmetric { asymmetry });
        }
        Ok(Self {
            first_moments,
            covariance,
        })
    }

    pub fn vacuum(modes: usize) -> Self {
        Self::thermal(modes, 1.0)
    }

    /// Product of identical thermal states with covariance `n * I`.
    pub fn thermal(modes: usize, n: f64) -> Self {
        Self {
            first_moments: DVector::zeros(2 * modes),
            covariance: DMatrix::identity(2 * modes, 2 * modes) * n,
        }
    }

    /// Single-mode coherent state with first moments `(x, p)`.
    pub fn coherent(x: f64, p: f64) -> Self {
        Self {
            first_moments: DVector::from_vec(vec![x, p]),
            covariance: DMatrix::identity(2, 2),
        }
    }

    pub fn modes(&self) -> usize {
        self.first_moments.len() / 2
    }

    pub fn first_moments(&self) -> &DVector<f64> {
        &self.first_moments
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    /// Smallest eigenvalue of `Γ + iΩ`.
    pub fn uncertainty_margin(&self) -> f64 {
        min_hermitian_eigenvalue(&self.covariance, &symplectic_form(self.modes()))
    }

    /// Robertson-Schrödinger uncertainty relation `Γ + iΩ ≥ 0`.
    pub fn is_physical(&self) -> bool {
        self.uncertainty_margin() >= -PSD_TOL
    }

    pub(crate) fn from_parts_unchecked(
        first_moments: DVector<f64>,
        covariance: DMatrix<f64>,
    ) -> Self {
        Self {
            first_moments,
            covariance,
        }
    }
}

/// Tensor product: block-diagonal covariance, `s1`'s modes first.
pub fn tensor(s1: &GaussianState, s2: &GaussianState) -> GaussianState {
    let n1 = s1.first_moments.len();
    let n2 = s2.first_moments.len();
    let mut v = DVector::zeros(n1 + n2);
    v.rows_mut(0, n1).copy_from(&s1.first_moments);
    v.rows_mut(n1, n2).copy_from(&s2.first_moments);
    let mut cov = DMatrix::zeros(n1 + n2, n1 + n2);
    cov.view_mut((0, 0), (n1, n1)).copy_from(&s1.covariance);
    cov.view_mut((n1, n1), (n2, n2)).copy_from(&s2.covariance);
    GaussianState::from_parts_unchecked(v, cov)
}

/// Reduced state on `keep`, extracted in ascending mode order.
pub fn partial_trace(state: &GaussianState, keep: &[usize]) -> Result<GaussianState> {
    if keep.is_empty() {
        return Err(Error::EmptySelection);
    }
    let modes = state.modes();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&index) = kept.iter().find(|&&k| k >= modes) {
        return Err(Error::InvalidMode { index, modes });
    }
    let rows: Vec<usize> = kept.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
    let n = rows.len();
    let v = DVector::from_fn(n, |i, _| state.first_moments[rows[i]]);
    let cov = DMatrix::from_fn(n, n, |i, j| state.covariance[(rows[i], rows[j])]);
    Ok(GaussianState::from_parts_unchecked(v, cov))
}
