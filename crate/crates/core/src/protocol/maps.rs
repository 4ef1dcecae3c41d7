use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::gaussian::GaussianMap;

/// Two-mode squeezer with linear gain `d` acting on (input, Alice's arm):
/// `X = [[√d I, √(d-1) σz], [√(d-1) σz, √d I]]`, `Y = 0`.
pub fn encoder(d: f64) -> Result<GaussianMap> {
    if !(d >= 1.0) || !d.is_finite() {
        return Err(invalid(format!("encoding gain d = {d} must be >= 1")));
    }
    let s = d.sqrt();
    let t = (d - 1.0).sqrt();
    let x = DMatrix::from_row_slice(
        4,
        4,
        &[
            s, 0.0, t, 0.0, //
            0.0, s, 0.0, -t, //
            t, 0.0, s, 0.0, //
            0.0, -t, 0.0, s,
        ],
    );
    GaussianMap::unitary(x)
}

/// Beamsplitter on (received mode, Bob's arm):
/// `X = [[√τ I, √(1-τ) I], [-√(1-τ) I, √τ I]]`, `Y = 0`.
pub fn decoder(tau: f64) -> Result<GaussianMap> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(invalid(format!(
            "decoder transmissivity tau = {tau} outside (0, 1]"
        )));
    }
    let s = tau.sqrt();
    let t = (1.0 - tau).sqrt();
    let x = DMatrix::from_row_slice(
        4,
        4,
        &[
            s, 0.0, t, 0.0, //
            0.0, s, 0.0, t, //
            -t, 0.0, s, 0.0, //
            0.0, -t, 0.0, s,
        ],
    );
    GaussianMap::unitary(x)
}
