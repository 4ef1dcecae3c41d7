use nalgebra::DMatrix;

use super::{max_asymmetry, symplectic_form, GaussianState, SYMMETRY_TOL};
use crate::error::{Error, Result};

/// Symplectic spectrum of a covariance matrix, ascending.
///
/// The eigenvalues of `iΩΓ` come in pairs `±ν`; the moduli are sorted and
/// each adjacent pair is averaged into one value per mode.
pub fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = cov.nrows();
    if n == 0 || !n.is_multiple_of(2) || cov.ncols() != n {
        return Err(Error::DimensionMismatch {
            context: "symplectic_eigenvalues: square 2m x 2m matrix",
            expected: n + n % 2,
            actual: cov.ncols(),
        });
    }
    let asymmetry = max_asymmetry(cov);
    if asymmetry > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { asymmetry });
    }
    // eigenvalues of iΩΓ are i times those of ΩΓ; only moduli matter
    let omega_cov = symplectic_form(n / 2) * cov;
    let mut moduli: Vec<f64> = omega_cov
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .collect();
    if moduli.iter().any(|m| !m.is_finite()) {
        return Err(Error::Eigen);
    }
    moduli.sort_by(f64::total_cmp);
    Ok(moduli
        .chunks_exact(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect())
}

/// Logarithmic negativity `max{0, -ln ν₋}` of a two-mode state, with `ν₋`
/// the smallest symplectic eigenvalue of the partially transposed
/// covariance `(I ⊕ σz) Γ (I ⊕ σz)`.
pub fn log_negativity(state: &GaussianState) -> Result<f64> {
    if state.modes() != 2 {
        return Err(Error::ModeCount {
            expected: 2,
            actual: state.modes(),
        });
    }
    let mut transposed = state.covariance().clone();
    // flipping p of the second mode negates its row and column
    for k in 0..4 {
        transposed[(3, k)] = -transposed[(3, k)];
        transposed[(k, 3)] = -transposed[(k, 3)];
    }
    let nu_min = symplectic_eigenvalues(&transposed)?[0];
    Ok((-nu_min.ln()).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{resource_to_state, ResourceTriplet};

    /// Two-mode shortcut: ν±² = (Δ ± sqrt(Δ² - 4 det Γ)) / 2 with
    /// Δ = det A + det B + 2 det C.
    fn two_mode_shortcut(cov: &DMatrix<f64>) -> [f64; 2] {
        let a = cov.view((0, 0), (2, 2)).determinant();
        let b = cov.view((2, 2), (2, 2)).determinant();
        let c = cov.view((0, 2), (2, 2)).determinant();
        let delta = a + b + 2.0 * c;
        let disc = (delta * delta - 4.0 * cov.determinant()).max(0.0).sqrt();
        [((delta - disc) / 2.0).sqrt(), ((delta + disc) / 2.0).sqrt()]
    }

    fn triplet_cov(a: f64, b: f64, c: f64) -> DMatrix<f64> {
        ResourceTriplet::new_unchecked(a, b, c)
            .state_unchecked()
            .covariance()
            .clone()
    }

    #[test]
    fn vacuum_and_thermal() {
        let nu = symplectic_eigenvalues(&DMatrix::identity(4, 4)).unwrap();
        assert!((nu[0] - 1.0).abs() < 1e-12 && (nu[1] - 1.0).abs() < 1e-12);
        let nu = symplectic_eigenvalues(&(DMatrix::identity(2, 2) * 2.5)).unwrap();
        assert!((nu[0] - 2.5).abs() < 1e-12);
    }

    #[test]
    fn tmsv_is_pure() {
        let r: f64 = 0.3466;
        let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
        let nu = symplectic_eigenvalues(&triplet_cov(ch, ch, sh)).unwrap();
        assert!((nu[0] - 1.0).abs() < 1e-9 && (nu[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn matches_two_mode_shortcut() {
        for &(a, b, c) in &[(2.0, 3.0, 1.5), (1.2, 1.2, 0.5), (5.0, 2.0, 2.2)] {
            let cov = triplet_cov(a, b, c);
            let nu = symplectic_eigenvalues(&cov).unwrap();
            let sc = two_mode_shortcut(&cov);
            assert!((nu[0] - sc[0]).abs() < 1e-9 && (nu[1] - sc[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_asymmetric_input() {
        let mut m = DMatrix::identity(2, 2);
        m[(1, 0)] = 0.1;
        assert!(matches!(
            symplectic_eigenvalues(&m),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn log_negativity_examples() {
        let two_r = 2.0_f64.ln();
        let s = resource_to_state(&ResourceTriplet::two_mode_squeezed(two_r / 2.0)).unwrap();
        assert!((log_negativity(&s).unwrap() - two_r).abs() < 1e-10);

        let sep = GaussianState::vacuum(2);
        assert_eq!(log_negativity(&sep).unwrap(), 0.0);

        assert_eq!(
            log_negativity(&GaussianState::vacuum(3)),
            Err(Error::ModeCount {
                expected: 2,
                actual: 3
            })
        );
    }
}
