//! Entanglement distribution from a central source over lossy links.
//!
//! Charlie sits on the perpendicular bisector of the Alice-Bob segment at
//! height `h_C`, sends each half of a pure two-mode squeezed vacuum through a
//! pure-loss link, and Alice then uses the resulting mixed resource for the
//! analog protocol over the Alice-Bob link.

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::fidelity::{avg_fidelity, CodebookSpec};
use crate::gaussian::{apply_map, log_negativity, resource_to_state, ChannelSpec, ResourceTriplet};
use crate::protocol::{htdt_beats_teleportation, noise_qt, optimize_ef, optimize_with_limit};

/// Power transmission `10^{-γ D / 10}` for distance `D` in meters, loss
/// rate `γ` in dB/m.
pub fn transmissivity(distance: f64, gamma: f64) -> f64 {
    10f64.powf(-gamma * distance / 10.0)
}

/// Alice-Bob separation, Charlie's offset from the Alice-Bob axis and the
/// common loss rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryConfig {
    /// Alice-Bob distance, m.
    pub d_ab: f64,
    /// Charlie's perpendicular offset, m.
    pub h_c: f64,
    /// dB/m.
    pub gamma: f64,
}

impl GeometryConfig {
    pub fn new(d_ab: f64, h_c: f64, gamma: f64) -> Result<Self> {
        let g = Self { d_ab, h_c, gamma };
        g.validate()?;
        Ok(g)
    }

    /// Geometry whose Alice-Bob transmissivity is `x_ab`.
    pub fn from_transmissivity(x_ab: f64, h_c: f64, gamma: f64) -> Result<Self> {
        if !(x_ab > 0.0 && x_ab <= 1.0) {
            return Err(invalid(format!("x_AB = {x_ab} outside (0, 1]")));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(invalid(format!(
                "gamma = {gamma} must be > 0 to infer a distance from x_AB"
            )));
        }
        Self::new(-10.0 * x_ab.log10() / gamma, h_c, gamma)
    }

    /// Geometry from the three pairwise distances. Only placements with
    /// Charlie equidistant from Alice and Bob are supported.
    pub fn from_distances(d_ab: f64, d_ca: f64, d_cb: f64, gamma: f64) -> Result<Self> {
        if (d_ca - d_cb).abs() > 1e-9 * d_ca.abs().max(1.0) {
            return Err(invalid(format!(
                "asymmetric placement D_CA = {d_ca} != D_CB = {d_cb} is not supported"
            )));
        }
        let half = 0.5 * d_ab;
        if d_ca < half {
            return Err(invalid(format!(
                "triangle inequality violated: D_C = {d_ca} < D_AB / 2 = {half}"
            )));
        }
        Self::new(d_ab, (d_ca * d_ca - half * half).max(0.0).sqrt(), gamma)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d_ab > 0.0 && self.d_ab.is_finite()) {
            return Err(invalid(format!("D_AB = {} must be > 0", self.d_ab)));
        }
        if !(self.h_c >= 0.0 && self.h_c.is_finite()) {
            return Err(invalid(format!("h_C = {} must be >= 0", self.h_c)));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(invalid(format!("gamma = {} must be >= 0", self.gamma)));
        }
        Ok(())
    }

    /// Charlie's distance to either node.
    pub fn charlie_distance(&self) -> f64 {
        (0.25 * self.d_ab * self.d_ab + self.h_c * self.h_c).sqrt()
    }

    pub fn x_ab(&self) -> f64 {
        transmissivity(self.d_ab, self.gamma)
    }

    pub fn x_c(&self) -> f64 {
        transmissivity(self.charlie_distance(), self.gamma)
    }

    pub fn with_offset(&self, h_c: f64) -> Result<Self> {
        Self::new(self.d_ab, h_c, self.gamma)
    }
}

/// Pure symmetric source with log-negativity `2 r_C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceSpec {
    pub r_c: f64,
}

impl SourceSpec {
    pub fn new(r_c: f64) -> Result<Self> {
        if !(r_c >= 0.0 && r_c.is_finite()) {
            return Err(invalid(format!("r_C = {r_c} must be >= 0")));
        }
        Ok(Self { r_c })
    }
}

fn check_link(x_c: f64) -> Result<()> {
    if !(x_c > 0.0 && x_c <= 1.0) {
        return Err(invalid(format!("x_C = {x_c} outside (0, 1]")));
    }
    Ok(())
}

/// Resource shared by Alice and Bob after both halves of the source cross a
/// pure-loss link of transmissivity `x_c`. Computed by map application.
pub fn distribute_resource(source: &SourceSpec, x_c: f64) -> Result<ResourceTriplet> {
    check_link(x_c)?;
    let tmsv = resource_to_state(&ResourceTriplet::two_mode_squeezed(source.r_c))?;
    let link = ChannelSpec::attenuator(x_c)?.to_map();
    let out = apply_map(&link.direct_sum(&link), &tmsv)?;
    let cov = out.covariance();
    Ok(ResourceTriplet::new_unchecked(
        cov[(0, 0)],
        cov[(2, 2)],
        -cov[(0, 2)],
    ))
}

/// Closed form `-ln(1 - x_C + x_C e^{-2 r_C})`.
pub fn distributed_log_negativity(source: &SourceSpec, x_c: f64) -> f64 {
    -(1.0 - x_c + x_c * (-2.0 * source.r_c).exp()).ln()
}

/// Half the distributed log-negativity computed from the propagated state.
pub fn distributed_r(source: &SourceSpec, x_c: f64) -> Result<f64> {
    let t = distribute_resource(source, x_c)?;
    Ok(0.5 * log_negativity(&resource_to_state(&t)?)?)
}

/// Whether a finite encoding gain beats teleportation with the distributed
/// resource over the attenuator `(x_AB, 1 - x_AB)`:
/// `2 r_C < -ln(1 - 2 x_AB / (x_C (1 + x_AB)))`, always true when the
/// logarithm's argument is non-positive.
pub fn htdt_condition_distributed(source: &SourceSpec, x_c: f64, x_ab: f64) -> Result<bool> {
    check_link(x_c)?;
    if !(x_ab > 0.0 && x_ab <= 1.0) {
        return Err(invalid(format!("x_AB = {x_ab} outside (0, 1]")));
    }
    if x_ab < x_c * x_c - 1e-12 {
        return Err(invalid(format!(
            "geometry violates x_AB >= x_C^2 ({x_ab} < {})",
            x_c * x_c
        )));
    }
    let arg = 1.0 - 2.0 * x_ab / (x_c * (1.0 + x_ab));
    if arg <= 0.0 {
        return Ok(true);
    }
    Ok(2.0 * source.r_c < -arg.ln())
}

/// Same decision through the general criterion with the distributed
/// log-negativity.
pub fn htdt_condition_via_theorem(source: &SourceSpec, x_c: f64, x_ab: f64) -> Result<bool> {
    let r = 0.5 * distributed_log_negativity(source, x_c);
    Ok(htdt_beats_teleportation(r, &ChannelSpec::attenuator(x_ab)?))
}

/// One point of the position sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub h_c: f64,
    pub r_c: f64,
    pub x_c: f64,
    pub two_r_distributed: f64,
    pub f_an: f64,
    pub f_qt: f64,
    pub f_ef: f64,
    pub d_opt: f64,
}

/// Uniform-codebook fidelities at unit gain for one geometry and source.
///
/// `F_qt` uses the same distributed resource as the analog protocol, not
/// the teleportation-optimal one.
pub fn evaluate_point(
    geometry: &GeometryConfig,
    source: &SourceSpec,
    d_max: f64,
) -> Result<SweepPoint> {
    geometry.validate()?;
    let x_c = geometry.x_c();
    let x_ab = geometry.x_ab();
    let resource = distribute_resource(source, x_c)?;
    let channel = ChannelSpec::attenuator(x_ab)?;
    let uniform = CodebookSpec::uniform();
    let g = 1.0;

    let analog = optimize_with_limit(&resource, &channel, g, d_max)?;
    let ef = optimize_ef(&channel, g)?;
    Ok(SweepPoint {
        h_c: geometry.h_c,
        r_c: source.r_c,
        x_c,
        two_r_distributed: distributed_log_negativity(source, x_c),
        f_an: avg_fidelity(g, analog.noise, uniform)?,
        f_qt: avg_fidelity(g, noise_qt(&resource, g), uniform)?,
        f_ef: avg_fidelity(g, ef.noise, uniform)?,
        d_opt: analog.d,
    })
}

/// Sweep over Charlie's offset and source entanglement, ordered by
/// `(h_C, r_C)` in the order given.
pub fn sweep_fig5(
    base: &GeometryConfig,
    h_c: &[f64],
    r_c: &[f64],
    d_max: f64,
) -> Result<Vec<SweepPoint>> {
    let points: Vec<(f64, f64)> = h_c
        .iter()
        .flat_map(|&h| r_c.iter().map(move |&r| (h, r)))
        .collect();
    points
        .par_iter()
        .map(|&(h, r)| evaluate_point(&base.with_offset(h)?, &SourceSpec::new(r)?, d_max))
        .collect()
}
