//! Average fidelities for Gaussian codebooks of coherent states.
//!
//! The closed forms for the three protocols assume a quantum-limited
//! attenuator `(x, 1 - x)`, unit gain, and the minimal-energy resource
//! `(cosh 2r, cosh 2r, sinh 2r)`.

use crate::error::{invalid, Error, Result};

/// Gaussian codebook `λ/π exp(-λ|α|²)`; `λ = 0` is the uniform limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodebookSpec {
    pub lambda: f64,
}

impl CodebookSpec {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(invalid(format!(
                "codebook width lambda = {lambda} must be >= 0"
            )));
        }
        Ok(Self { lambda })
    }

    pub fn uniform() -> Self {
        Self { lambda: 0.0 }
    }
}

/// No-cloning threshold for uniform coherent-state codebooks.
pub const NO_CLONING_FIDELITY: f64 = 2.0 / 3.0;

const UNIT_GAIN_TOL: f64 = 1e-12;

/// Codebook-averaged fidelity of the channel `(g, G)`:
/// `2λ / [2(1 - √g)² + λ(1 + g + G)]`, and `2/(2 + G)` (or 0 if `g ≠ 1`)
/// in the uniform limit.
pub fn avg_fidelity(g: f64, noise: f64, codebook: CodebookSpec) -> Result<f64> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(invalid(format!("gain g = {g} must be > 0")));
    }
    if !(noise >= (1.0 - g).abs() - crate::gaussian::PSD_TOL) {
        return Err(Error::NotCompletelyPositive(format!(
            "noise G = {noise} < |1 - g| = {}",
            (1.0 - g).abs()
        )));
    }
    let lambda = codebook.lambda;
    if lambda == 0.0 {
        return Ok(if (g - 1.0).abs() <= UNIT_GAIN_TOL {
            2.0 / (2.0 + noise)
        } else {
            0.0
        });
    }
    let mismatch = 1.0 - g.sqrt();
    Ok(2.0 * lambda / (2.0 * mismatch * mismatch + lambda * (1.0 + g + noise)))
}

/// Teleportation with the minimal-energy resource: `1 / (1 + e^{-2r})`.
pub fn fidelity_qt(r: f64) -> f64 {
    1.0 / (1.0 + (-2.0 * r).exp())
}

fn check_transmissivity(x: f64) -> Result<()> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(invalid(format!("transmissivity x = {x} outside (0, 1]")));
    }
    Ok(())
}

/// Analog protocol optimized over the encoding gain.
pub fn fidelity_an(r: f64, x: f64) -> Result<f64> {
    check_transmissivity(x)?;
    if x <= r.tanh() {
        return Ok(fidelity_qt(r));
    }
    let loss = 1.0 - x;
    Ok(2.0 * x / (1.0 + x * (2.0 - x) - loss * loss * (2.0 * r).cosh()))
}

/// Entanglement-free transfer: `1 / (2 - x)`.
pub fn fidelity_ef(x: f64) -> f64 {
    1.0 / (2.0 - x)
}

/// Infidelity ratios `(1 - F_ef) / (1 - F_qt)` and `(1 - F_ef) / (1 - F_an)`.
pub fn infidelity_ratio(r: f64, x: f64) -> Result<(f64, f64)> {
    let ef = 1.0 - fidelity_ef(x);
    let qt = 1.0 - fidelity_qt(r);
    let an = 1.0 - fidelity_an(r, x)?;
    if qt <= 0.0 || an <= 0.0 {
        return Err(invalid(format!(
            "infidelity ratio undefined at r = {r}, x = {x}: perfect transfer"
        )));
    }
    Ok((ef / qt, ef / an))
}

/// Log-negativity `2r` the optimized analog protocol needs to reach the
/// no-cloning threshold over an attenuator of transmissivity `x`.
pub fn no_cloning_entanglement(x: f64) -> f64 {
    if x <= 1.0 / 3.0 {
        2.0_f64.ln()
    } else if x < 0.5 {
        let loss = 1.0 - x;
        2.0 * (x * (1.0 - 2.0 * x) / (2.0 * loss * loss)).sqrt().asinh()
    } else {
        0.0
    }
}
