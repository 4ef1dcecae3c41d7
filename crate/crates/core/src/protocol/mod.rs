//! The analog encode / transmit / decode protocol and its baselines.
//!
//! Alice two-mode squeezes the unknown input with her share of the resource
//! (linear gain `d`), sends one output through the channel and discards the
//! conjugate output. Bob mixes the received mode with his share on a
//! beamsplitter of transmissivity `tau`. The net effect on the input is a
//! phase-insensitive channel with gain `g = d x tau` and added noise `G`.

mod maps;
mod noise;
mod optimize;
mod oracle;
mod pipeline;
mod theorem;

pub use maps::{decoder, encoder};
pub use noise::{added_noise, g_prime, noise_discarded, noise_ef, noise_qt, simulated_channel};
pub use optimize::{
    optimize_d, optimize_d_default, optimize_ef, optimize_with_limit, DOptimum, DEFAULT_D_MAX,
};
pub use oracle::{monte_carlo_oracle, MonteCarloEstimate, MIN_SAMPLES};
pub use pipeline::run_protocol_matrix;
pub use theorem::{htdt_beats_teleportation, optimal_teleport_triplet, teleportation_noise_floor};

use crate::error::{invalid, Result};
use crate::gaussian::ChannelSpec;

/// Tolerance on the admissibility constraint `d ≥ max{g/x, 1}`.
pub const GAIN_TOL: f64 = 1e-12;

/// Encoding gain, decoding transmissivity and the resulting overall gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    pub d: f64,
    pub tau: f64,
    pub g: f64,
}

impl ProtocolParams {
    /// Parameters realizing overall gain `g` at encoding gain `d`, with
    /// `tau = g / (d x)`.
    pub fn for_gain(g: f64, d: f64, channel: &ChannelSpec) -> Result<Self> {
        check_gain_constraint(g, d, channel)?;
        let tau = (g / (d * channel.x)).min(1.0);
        let p = Self { d, tau, g };
        p.validate(channel)?;
        Ok(p)
    }

    pub fn validate(&self, channel: &ChannelSpec) -> Result<()> {
        check_gain_constraint(self.g, self.d, channel)?;
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return Err(invalid(format!("tau = {} outside (0, 1]", self.tau)));
        }
        let implied = self.d * channel.x * self.tau;
        if (implied - self.g).abs() > GAIN_TOL * self.g.max(1.0) {
            return Err(invalid(format!(
                "g = {} inconsistent with d x tau = {implied}",
                self.g
            )));
        }
        Ok(())
    }
}

/// The phase-insensitive channel realized by the protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulatedChannel {
    pub gain: f64,
    pub noise: f64,
}

impl SimulatedChannel {
    pub fn is_completely_positive(&self) -> bool {
        self.noise >= (1.0 - self.gain).abs() - crate::gaussian::PSD_TOL
    }
}

/// Smallest admissible encoding gain `max{g/x, 1}`.
pub fn min_encoding_gain(g: f64, channel: &ChannelSpec) -> f64 {
    (g / channel.x).max(1.0)
}

pub(crate) fn check_gain_constraint(g: f64, d: f64, channel: &ChannelSpec) -> Result<()> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(invalid(format!("gain g = {g} must be finite and > 0")));
    }
    if !(channel.x > 0.0) {
        return Err(invalid(format!(
            "channel transmissivity x = {} must be > 0",
            channel.x
        )));
    }
    let d_min = min_encoding_gain(g, channel);
    if !(d >= d_min - GAIN_TOL * d_min) || !d.is_finite() {
        return Err(invalid(format!(
            "d = {d} violates d >= max{{g/x, 1}} = {d_min}"
        )));
    }
    Ok(())
}
