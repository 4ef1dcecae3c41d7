//! Minimization of the added noise over the encoding gain.
//!
//! `G` is convex in `u = 1/d` (a linear function minus a multiple of the
//! geometric mean of two non-negative linear functions), so a golden-section
//! search over `u ∈ [1/d_max, 1/d_min]` brackets the unique minimum. The
//! bracket is then tightened by bisecting on the sign of `dG/du`, which is
//! monotone.

use super::min_encoding_gain;
use super::noise::{added_noise_slope, added_noise_unchecked};
use crate::error::{invalid, Result};
use crate::gaussian::{ChannelSpec, ResourceTriplet};

/// Default search ceiling standing in for `d → ∞`.
pub const DEFAULT_D_MAX: f64 = 1e6;

const GOLDEN_REL_TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 400;
const FLAT_TOL: f64 = 1e-13;

/// Minimizer of `G` over the admissible encoding gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DOptimum {
    pub d: f64,
    pub noise: f64,
    /// `d == d_max`: the teleportation limit is (numerically) optimal.
    pub at_ceiling: bool,
}

pub fn optimize_d_default(
    resource: &ResourceTriplet,
    channel: &ChannelSpec,
    g: f64,
) -> Result<DOptimum> {
    optimize_d(resource, channel, g, DEFAULT_D_MAX)
}

/// Minimizes `G(d)` over `d ∈ [max{g/x, 1}, d_max]`.
///
/// When `G` is flat the smallest admissible `d` is returned.
pub fn optimize_d(
    resource: &ResourceTriplet,
    channel: &ChannelSpec,
    g: f64,
    d_max: f64,
) -> Result<DOptimum> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(invalid(format!("gain g = {g} must be finite and > 0")));
    }
    channel.validate()?;
    let d_min = min_encoding_gain(g, channel);
    if !(d_max >= d_min) || !d_max.is_finite() {
        return Err(invalid(format!(
            "d_max = {d_max} below the admissible minimum max{{g/x, 1}} = {d_min}"
        )));
    }
    let noise = |u: f64| added_noise_unchecked(resource, channel, g, u);
    let (u_lo, u_hi) = (1.0 / d_max, 1.0 / d_min);

    let at = |d: f64, at_ceiling: bool| DOptimum {
        d,
        noise: noise(1.0 / d),
        at_ceiling,
    };
    if d_max == d_min {
        return Ok(at(d_min, true));
    }

    let (g_lo, g_hi) = (noise(u_lo), noise(u_hi));
    let (a, b) = golden_section(&noise, u_lo, u_hi);
    let (a, b) = refine_by_slope(resource, channel, g, a, b, u_lo, u_hi);
    let u_star = 0.5 * (a + b);
    let g_star = noise(u_star);

    let scale = g_lo.abs().max(g_hi.abs()).max(1.0);
    if (g_lo - g_hi).abs() <= FLAT_TOL * scale && (g_star - g_hi).abs() <= FLAT_TOL * scale {
        return Ok(at(d_min, false));
    }
    // endpoints win ties so a boundary optimum is reported exactly
    if g_lo <= g_star && g_lo <= g_hi {
        return Ok(at(d_max, true));
    }
    if g_hi <= g_star {
        return Ok(at(d_min, false));
    }
    Ok(DOptimum {
        d: 1.0 / u_star,
        noise: g_star,
        at_ceiling: false,
    })
}

/// [`optimize_d`], with the exact `d → ∞` limit `G_qt` as an extra
/// candidate. When the limit wins, `d` is reported as `d_max`.
pub fn optimize_with_limit(
    resource: &ResourceTriplet,
    channel: &ChannelSpec,
    g: f64,
    d_max: f64,
) -> Result<DOptimum> {
    let finite = optimize_d(resource, channel, g, d_max)?;
    let limit = super::noise_qt(resource, g);
    if limit < finite.noise {
        return Ok(DOptimum {
            d: d_max,
            noise: limit,
            at_ceiling: true,
        });
    }
    Ok(finite)
}

/// Entanglement-free optimum. `G_ef` is linear in `1/d`, so the best `d` is
/// `max{g/x, 1}` unless the channel is entanglement-breaking, in which
/// case it is the `d → ∞` value `1 + g`.
pub fn optimize_ef(channel: &ChannelSpec, g: f64) -> Result<DOptimum> {
    channel.validate()?;
    let d_min = min_encoding_gain(g, channel);
    let at_min = super::noise_ef(channel, g, d_min)?;
    let limit = 1.0 + g;
    if channel.is_entanglement_breaking() && limit < at_min {
        return Ok(DOptimum {
            d: f64::INFINITY,
            noise: limit,
            at_ceiling: true,
        });
    }
    Ok(DOptimum {
        d: d_min,
        noise: at_min,
        at_ceiling: false,
    })
}

fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..MAX_ITERATIONS {
        if (b - a) <= GOLDEN_REL_TOL * 0.5 * (a + b) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (a, b)
}

/// Bisects on the sign of `dG/du`. The golden bracket is only as good as
/// the flatness of `G` allows, so it is widened geometrically (within the
/// domain where the slope is defined) until the slope changes sign.
fn refine_by_slope(
    resource: &ResourceTriplet,
    channel: &ChannelSpec,
    g: f64,
    a: f64,
    b: f64,
    u_lo: f64,
    u_hi: f64,
) -> (f64, f64) {
    let slope = |u: f64| added_noise_slope(resource, channel, g, u);
    let mut width = (b - a).max(f64::EPSILON * b);
    let (mut lo, mut hi) = (a, b);
    while !(slope(lo) < 0.0) && lo > u_lo {
        lo = (lo - width).max(u_lo);
        width *= 2.0;
    }
    while !(slope(hi) > 0.0) && hi < u_hi {
        hi = (hi + width).min(u_hi);
        width *= 2.0;
    }
    if !(slope(lo) < 0.0 && slope(hi) > 0.0) {
        return (a, b);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}
