//! Closed-form added noise for the analog protocol and its baselines.

use super::{check_gain_constraint, ProtocolParams, SimulatedChannel};
use crate::error::{invalid, Result};
use crate::gaussian::{ChannelSpec, ResourceTriplet};

/// Added noise `G` of the analog protocol at overall gain `g` and encoding
/// gain `d`.
pub fn added_noise(
    resource: &ResourceTriplet,
    channel: &ChannelSpec,
    g: f64,
    d: f64,
) -> Result<f64> {
    check_gain_constraint(g, d, channel)?;
    Ok(added_noise_unchecked(resource, channel, g, 1.0 / d))
}

/// `G` as a function of `u = 1/d`, without admissibility checks.
pub(crate) fn added_noise_unchecked(
    t: &ResourceTriplet,
    channel: &ChannelSpec,
    g: f64,
    u: f64,
) -> f64 {
    let x = channel.x;
    let transmitted = (g - g * u).max(0.0);
    let mixed = (1.0 - g * u / x).max(0.0);
    transmitted * t.a + mixed * t.b - 2.0 * t.c * (mixed * transmitted).sqrt()
        + g * channel.y * u / x
}

/// `dG/du` with `u = 1/d`. `G` is convex in `u`, so this is non-decreasing.
pub(crate) fn added_noise_slope(t: &ResourceTriplet, channel: &ChannelSpec, g: f64, u: f64) -> f64 {
    let x = channel.x;
    let transmitted = g * (1.0 - u);
    let mixed = 1.0 - g * u / x;
    let linear = -g * t.a - g * t.b / x + g * channel.y / x;
    let product = transmitted * mixed;
    if t.c == 0.0 {
        return linear;
    }
    if product <= 0.0 {
        return f64::INFINITY;
    }
    let product_slope = -g * mixed - (g / x) * transmitted;
    linear - t.c * product_slope / product.sqrt()
}

/// The realized channel `(g, G)` for a full parameter set.
pub fn simulated_channel(
    resource: &ResourceTriplet,
    channel: &ChannelSpec,
    params: &ProtocolParams,
) -> Result<SimulatedChannel> {
    params.validate(channel)?;
    Ok(SimulatedChannel {
        gain: params.g,
        noise: added_noise(resource, channel, params.g, params.d)?,
    })
}

/// Teleportation noise `G_qt = g a + b - 2 √g c`, the `d → ∞` limit.
pub fn noise_qt(resource: &ResourceTriplet, g: f64) -> f64 {
    g * resource.a + resource.b - 2.0 * g.sqrt() * resource.c
}

/// Noise of teleporting with only Alice's discarded encoder output.
pub fn noise_discarded(resource: &ResourceTriplet, g: f64, d: f64) -> Result<f64> {
    if !(d > 1.0) || !d.is_finite() {
        return Err(invalid(format!(
            "discarded-mode teleportation requires d > 1, got d = {d}"
        )));
    }
    let k = g * d / (d - 1.0);
    Ok(k * resource.a + resource.b - 2.0 * resource.c * k.sqrt() + g / (d - 1.0))
}

/// Entanglement-free noise: quantum-limited amplification then direct
/// transmission, `G_ef = 1 + g + [(y - (1 + x)) / x] g / d`.
pub fn noise_ef(channel: &ChannelSpec, g: f64, d: f64) -> Result<f64> {
    check_gain_constraint(g, d, channel)?;
    let x = channel.x;
    Ok(1.0 + g + ((channel.y - (1.0 + x)) / x) * (g / d))
}

/// First-order coefficient of `G = G_qt + G'/d + o(1/d)`.
pub fn g_prime(resource: &ResourceTriplet, channel: &ChannelSpec, g: f64) -> f64 {
    let ResourceTriplet { a, b, c } = *resource;
    let (x, y) = (channel.x, channel.y);
    -g * (a + b / x) + c * g.sqrt() * (g + x) / x + g * y / x
}
