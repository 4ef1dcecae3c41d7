use nalgebra::DMatrix;

use super::{
    max_asymmetry, min_hermitian_eigenvalue, symmetrize, symplectic_form, GaussianState, PSD_TOL,
    SYMMETRY_TOL,
};
use crate::error::{Error, Result};

/// A Gaussian channel `v -> X v`, `Γ -> X Γ Xᵀ + Y`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMap {
    x: DMatrix<f64>,
    y: DMatrix<f64>,
}

impl GaussianMap {
    pub fn new(x: DMatrix<f64>, y: DMatrix<f64>) -> Result<Self> {
        if x.nrows() == 0 || !x.nrows().is_multiple_of(2) || !x.ncols().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                context: "map X (even dimensions)",
                expected: x.nrows() + x.nrows() % 2,
                actual: x.nrows(),
            });
        }
        if y.nrows() != x.nrows() || y.ncols() != x.nrows() {
            return Err(Error::DimensionMismatch {
                context: "map Y (square, matching X rows)",
                expected: x.nrows(),
                actual: if y.nrows() != x.nrows() {
                    y.nrows()
                } else {
                    y.ncols()
                },
            });
        }
        let asymmetry = max_asymmetry(&y);
        if asymmetry > SYMMETRY_TOL {
            return Err(Error::NotSymmetric { asymmetry });
        }
        Ok(Self { x, y })
    }

    /// Noiseless map `X` with `Y = 0`.
    pub fn unitary(x: DMatrix<f64>) -> Result<Self> {
        let n = x.nrows();
        Self::new(x, DMatrix::zeros(n, n))
    }

    pub fn identity(modes: usize) -> Self {
        let n = 2 * modes;
        Self {
            x: DMatrix::identity(n, n),
            y: DMatrix::zeros(n, n),
        }
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DMatrix<f64> {
        &self.y
    }

    pub fn input_modes(&self) -> usize {
        self.x.ncols() / 2
    }

    pub fn output_modes(&self) -> usize {
        self.x.nrows() / 2
    }

    /// Parallel application: `self` on the first modes, `other` on the rest.
    pub fn direct_sum(&self, other: &GaussianMap) -> GaussianMap {
        let (r1, c1) = self.x.shape();
        let (r2, c2) = other.x.shape();
        let mut x = DMatrix::zeros(r1 + r2, c1 + c2);
        x.view_mut((0, 0), (r1, c1)).copy_from(&self.x);
        x.view_mut((r1, c1), (r2, c2)).copy_from(&other.x);
        let mut y = DMatrix::zeros(r1 + r2, r1 + r2);
        y.view_mut((0, 0), (r1, r1)).copy_from(&self.y);
        y.view_mut((r1, r1), (r2, r2)).copy_from(&other.y);
        GaussianMap { x, y }
    }

    /// Lifts a square map onto the listed modes of a `total`-mode system,
    /// acting as the identity elsewhere. `targets[k]` receives the map's
    /// k-th mode.
    pub fn embed(&self, targets: &[usize], total: usize) -> Result<GaussianMap> {
        if self.input_modes() != self.output_modes() {
            return Err(Error::DimensionMismatch {
                context: "embedding requires a square map",
                expected: self.input_modes(),
                actual: self.output_modes(),
            });
        }
        if targets.len() != self.input_modes() {
            return Err(Error::DimensionMismatch {
                context: "embedding target count",
                expected: self.input_modes(),
                actual: targets.len(),
            });
        }
        for (k, &t) in targets.iter().enumerate() {
            if t >= total {
                return Err(Error::InvalidMode {
                    index: t,
                    modes: total,
                });
            }
            if targets[..k].contains(&t) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate embedding target {t}"
                )));
            }
        }
        let n = 2 * total;
        let mut x = DMatrix::identity(n, n);
        let mut y = DMatrix::zeros(n, n);
        let rows: Vec<usize> = targets.iter().flat_map(|&t| [2 * t, 2 * t + 1]).collect();
        for &r in &rows {
            x[(r, r)] = 0.0;
        }
        for (i, &ri) in rows.iter().enumerate() {
            for (j, &rj) in rows.iter().enumerate() {
                x[(ri, rj)] = self.x[(i, j)];
                y[(ri, rj)] = self.y[(i, j)];
            }
        }
        Ok(GaussianMap { x, y })
    }

    /// `X Ω Xᵀ = Ω` to `tol`, entrywise.
    pub fn is_symplectic(&self, tol: f64) -> bool {
        if self.input_modes() != self.output_modes() {
            return false;
        }
        let omega = symplectic_form(self.input_modes());
        let d = &self.x * &omega * self.x.transpose() - &omega;
        d.amax() <= tol
    }

    /// Smallest eigenvalue of `Y + iΩ - i X Ω Xᵀ`.
    pub fn complete_positivity_margin(&self) -> f64 {
        let omega_in = symplectic_form(self.input_modes());
        let omega_out = symplectic_form(self.output_modes());
        let antisym = omega_out - &self.x * omega_in * self.x.transpose();
        min_hermitian_eigenvalue(&self.y, &antisym)
    }

    /// `Y + iΩ ≥ i X Ω Xᵀ`.
    pub fn is_completely_positive(&self) -> bool {
        self.complete_positivity_margin() >= -PSD_TOL
    }

    /// Single-mode form of the CP test: `sqrt(det Y) ≥ |1 - det X|`, `Y ≥ 0`.
    pub fn single_mode_cp(&self) -> Option<bool> {
        if self.x.shape() != (2, 2) {
            return None;
        }
        let det_y = self.y.determinant();
        let y_min = symmetrize(&self.y).symmetric_eigenvalues().min();
        Some(
            y_min >= -PSD_TOL
                && det_y.max(0.0).sqrt() >= (1.0 - self.x.determinant()).abs() - PSD_TOL,
        )
    }
}

/// Applies `map` to `state`; the output covariance is re-symmetrized.
pub fn apply_map(map: &GaussianMap, state: &GaussianState) -> Result<GaussianState> {
    let n = state.first_moments().len();
    if map.x.ncols() != n {
        return Err(Error::DimensionMismatch {
            context: "apply_map: map input vs state",
            expected: map.x.ncols(),
            actual: n,
        });
    }
    let v = &map.x * state.first_moments();
    let cov = &map.x * state.covariance() * map.x.transpose() + &map.y;
    Ok(GaussianState::from_parts_unchecked(v, symmetrize(&cov)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::ChannelSpec;
    use nalgebra::DVector;

    #[test]
    fn identity_map_is_noop() {
        let s = GaussianState::new(
            DVector::from_vec(vec![1.0, 2.0, -1.0, 0.5]),
            DMatrix::from_row_slice(
                4,
                4,
                &[
                    2.0, 0.1, 0.3, 0.0, 0.1, 2.0, 0.0, -0.3, 0.3, 0.0, 2.0, 0.0, 0.0, -0.3, 0.0,
                    2.0,
                ],
            ),
        )
        .unwrap();
        assert_eq!(apply_map(&GaussianMap::identity(2), &s).unwrap(), s);
    }

    #[test]
    fn pure_loss_fixes_vacuum() {
        let loss = ChannelSpec::new(0.5, 0.5).unwrap().to_map();
        let out = apply_map(&loss, &GaussianState::vacuum(1)).unwrap();
        assert!((out.covariance() - DMatrix::<f64>::identity(2, 2)).amax() < 1e-15);
        assert_eq!(out.first_moments().amax(), 0.0);
    }

    #[test]
    fn classical_noise_on_vacuum() {
        let noise = ChannelSpec::new(1.0, 2.0).unwrap().to_map();
        let out = apply_map(&noise, &GaussianState::vacuum(1)).unwrap();
        assert_eq!(out.covariance(), &(DMatrix::<f64>::identity(2, 2) * 3.0));
    }

    #[test]
    fn dimension_mismatch_names_sizes() {
        let err = apply_map(&GaussianMap::identity(2), &GaussianState::vacuum(1)).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                context: "apply_map: map input vs state",
                expected: 4,
                actual: 2
            }
        );
    }

    #[test]
    fn single_mode_cp_agrees_with_general_test() {
        for &(x, y) in &[
            (0.5, 0.5),
            (0.5, 0.4),
            (2.0, 1.0),
            (2.0, 0.9),
            (1.0, 0.0),
            (1.0, -0.1),
            (0.3, 2.0),
        ] {
            let m = GaussianMap::new(
                DMatrix::identity(2, 2) * f64::sqrt(x),
                DMatrix::identity(2, 2) * y,
            )
            .unwrap();
            assert_eq!(
                m.single_mode_cp(),
                Some(m.is_completely_positive()),
                "x={x} y={y}"
            );
        }
    }

    #[test]
    fn embed_places_blocks() {
        let ch = ChannelSpec::new(0.25, 0.75).unwrap().to_map();
        let lifted = ch.embed(&[1], 3).unwrap();
        let out = apply_map(&lifted, &GaussianState::thermal(3, 3.0)).unwrap();
        let cov = out.covariance();
        assert_eq!(cov[(0, 0)], 3.0);
        assert!((cov[(2, 2)] - (0.25 * 3.0 + 0.75)).abs() < 1e-15);
        assert_eq!(cov[(4, 4)], 3.0);
        assert!(ch.embed(&[3], 3).is_err());
        assert!(GaussianMap::identity(2).embed(&[1, 1], 3).is_err());
    }
}
