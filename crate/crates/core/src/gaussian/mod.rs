//! Gaussian states and channels in the covariance-matrix picture.
//!
//! Quadratures are ordered `(x1, p1, ..., xm, pm)` and the vacuum has
//! covariance equal to the identity.

mod map;
mod resource;
mod state;
mod symplectic;

pub use map::{apply_map, GaussianMap};
pub use resource::{resource_to_state, ChannelSpec, ResourceTriplet};
pub use state::{partial_trace, symplectic_form, tensor, GaussianState};
pub use symplectic::{log_negativity, symplectic_eigenvalues};

use nalgebra::DMatrix;

/// Maximum tolerated asymmetry `max |M_ij - M_ji|`.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Eigenvalues down to `-PSD_TOL` count as non-negative.
pub const PSD_TOL: f64 = 1e-9;

pub(crate) fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Smallest eigenvalue of the Hermitian matrix `sym + i * antisym`.
///
/// Uses the real embedding `[[S, -A], [A, S]]`, whose spectrum is that of
/// the Hermitian matrix with every eigenvalue doubled.
pub(crate) fn min_hermitian_eigenvalue(sym: &DMatrix<f64>, antisym: &DMatrix<f64>) -> f64 {
    let n = sym.nrows();
    let mut real = DMatrix::zeros(2 * n, 2 * n);
    real.view_mut((0, 0), (n, n)).copy_from(sym);
    real.view_mut((n, n), (n, n)).copy_from(sym);
    real.view_mut((0, n), (n, n)).copy_from(&(-antisym));
    real.view_mut((n, 0), (n, n)).copy_from(antisym);
    let real = symmetrize(&real);
    real.symmetric_eigenvalues().min()
}
