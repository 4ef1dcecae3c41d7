//! When finite encoding gain beats teleportation at fixed entanglement.

use crate::error::{invalid, Result};
use crate::gaussian::{ChannelSpec, ResourceTriplet};

/// `G_qt* = e^{-2r}(1 + g)`: the least teleportation noise reachable with a
/// resource of log-negativity `2r`.
pub fn teleportation_noise_floor(r: f64, g: f64) -> f64 {
    (-2.0 * r).exp() * (1.0 + g)
}

/// Resource with log-negativity `2r` that attains [`teleportation_noise_floor`]
/// at gain `g`. `b` defaults to the minimal-energy value `b*`.
pub fn optimal_teleport_triplet(r: f64, g: f64, b: Option<f64>) -> Result<ResourceTriplet> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(invalid(format!("r = {r} must be finite and > 0")));
    }
    let (lo, hi) = (r.tanh(), 1.0 / r.tanh());
    if !(g >= lo && g <= hi) {
        return Err(invalid(format!(
            "g = {g} outside [tanh r, coth r] = [{lo}, {hi}]"
        )));
    }
    let e_plus = (2.0 * r).exp();
    let e_minus = (-2.0 * r).exp();
    let spread = (g - 1.0).abs();
    let denominator = g + 1.0 - e_plus * spread;
    if !(denominator > 0.0) {
        return Err(invalid(format!(
            "g = {g} at the edge of [tanh r, coth r]: minimal-energy b* diverges"
        )));
    }
    let b_star = (e_plus * g + e_minus - spread) / denominator;
    let b = match b {
        None => b_star,
        Some(b) if b >= b_star * (1.0 - 1e-12) => b,
        Some(b) => return Err(invalid(format!("b = {b} below the minimum b* = {b_star}"))),
    };
    let a = (b + e_minus * (g - 1.0)) / g;
    let c = (b - e_minus) / g.sqrt();
    Ok(ResourceTriplet::new_unchecked(a, b, c))
}

/// Whether some finite encoding gain beats the best teleportation protocol
/// at log-negativity `2r`: `y < e^{-2r}(1 + x)`.
pub fn htdt_beats_teleportation(r: f64, channel: &ChannelSpec) -> bool {
    channel.y < (-2.0 * r).exp() * (1.0 + channel.x)
}
