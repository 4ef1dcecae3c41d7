use nalgebra::{DMatrix, DVector};

use super::{GaussianMap, GaussianState, PSD_TOL};
use crate::error::{Error, Result};

/// Parameters `(a, b, c)` of the two-mode resource
/// `Γ = [[a I, -c σz], [-c σz, b I]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResourceTriplet {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl ResourceTriplet {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let t = Self { a, b, c };
        t.validate()?;
        Ok(t)
    }

    /// Skips validation, for constructing deliberately unphysical inputs.
    pub fn new_unchecked(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// Product of two vacua.
    pub fn vacuum() -> Self {
        Self::new_unchecked(1.0, 1.0, 0.0)
    }

    /// Pure symmetric two-mode squeezed vacuum with log-negativity `2r`.
    pub fn two_mode_squeezed(r: f64) -> Self {
        Self::new_unchecked((2.0 * r).cosh(), (2.0 * r).cosh(), (2.0 * r).sinh())
    }

    /// Largest admissible correlation `sqrt(ab - 1 - |a - b|)`.
    pub fn max_correlation(&self) -> f64 {
        (self.a * self.b - 1.0 - (self.a - self.b).abs())
            .max(0.0)
            .sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        let Self { a, b, c } = *self;
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::UnphysicalResource(format!(
                "non-finite triplet ({a}, {b}, {c})"
            )));
        }
        if a < 1.0 - PSD_TOL || b < 1.0 - PSD_TOL {
            return Err(Error::UnphysicalResource(format!(
                "a = {a}, b = {b}: requires a, b >= 1"
            )));
        }
        if c < -PSD_TOL {
            return Err(Error::UnphysicalResource(format!(
                "c = {c}: requires c >= 0"
            )));
        }
        let bound = self.max_correlation();
        // absolute 1e-9, relaxed proportionally for large c
        if c > bound + PSD_TOL * c.max(1.0) {
            return Err(Error::UnphysicalResource(format!(
                "c = {c} exceeds sqrt(ab - 1 - |a - b|) = {bound}"
            )));
        }
        Ok(())
    }

    pub fn is_physical(&self) -> bool {
        self.validate().is_ok()
    }

    /// The resource state without the physicality check.
    pub fn state_unchecked(&self) -> GaussianState {
        GaussianState::from_parts_unchecked(DVector::zeros(4), self.covariance())
    }

    pub(crate) fn covariance(&self) -> DMatrix<f64> {
        let Self { a, b, c } = *self;
        DMatrix::from_row_slice(
            4,
            4,
            &[
                a, 0.0, -c, 0.0, //
                0.0, a, 0.0, c, //
                -c, 0.0, b, 0.0, //
                0.0, c, 0.0, b,
            ],
        )
    }
}

/// Two-mode state with zero first moments built from a physical triplet.
pub fn resource_to_state(t: &ResourceTriplet) -> Result<GaussianState> {
    t.validate()?;
    Ok(t.state_unchecked())
}

/// Phase-insensitive channel `X = sqrt(x) I`, `Y = y I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub x: f64,
    pub y: f64,
}

impl ChannelSpec {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let ch = Self { x, y };
        ch.validate()?;
        Ok(ch)
    }

    pub fn new_unchecked(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Quantum-limited attenuator `(x, 1 - x)`.
    pub fn attenuator(x: f64) -> Result<Self> {
        if !(x > 0.0 && x <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "attenuator transmissivity x = {x} outside (0, 1]"
            )));
        }
        Ok(Self { x, y: 1.0 - x })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x > 0.0 && self.x.is_finite()) || !self.y.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "channel (x = {}, y = {}) requires finite x > 0",
                self.x, self.y
            )));
        }
        if !self.is_completely_positive() {
            return Err(Error::NotCompletelyPositive(format!(
                "y = {} < |1 - x| = {}",
                self.y,
                (1.0 - self.x).abs()
            )));
        }
        Ok(())
    }

    pub fn is_completely_positive(&self) -> bool {
        self.y >= (1.0 - self.x).abs() - PSD_TOL
    }

    /// `y ≥ 1 + x`.
    pub fn is_entanglement_breaking(&self) -> bool {
        self.y >= 1.0 + self.x
    }

    pub fn to_map(&self) -> GaussianMap {
        GaussianMap::new(
            DMatrix::identity(2, 2) * self.x.sqrt(),
            DMatrix::identity(2, 2) * self.y,
        )
        .expect("2x2 diagonal map is well formed")
    }
}
