//! Tabulated sweeps and their CSV encoding.
//!
//! Numbers are written with 10 significant digits, `.` as decimal
//! separator, one header row, fixed column and row order.

use std::io::Write;

use crate::distribution::{sweep_fig5, GeometryConfig, SweepPoint};
use crate::error::{invalid, Result};
use crate::fidelity::{
    fidelity_an, fidelity_ef, fidelity_qt, infidelity_ratio, no_cloning_entanglement,
};
use crate::gaussian::ChannelSpec;
use crate::protocol::{optimal_teleport_triplet, optimize_with_limit};

pub const FIG3_HEADER: &[&str] = &[
    "x", "F_qt", "F_an", "F_ef", "delta_qt", "delta_an", "d_opt", "r_nc",
];
pub const FIG5_HEADER: &[&str] = &[
    "h_C",
    "r_C",
    "x_C",
    "two_r_distributed",
    "F_an",
    "F_qt",
    "F_ef",
    "d_opt",
];

const SIG_DIGITS: usize = 10;

/// Formats `v` with [`SIG_DIGITS`] significant digits: positional notation
/// for decimal exponents in `[-5, 10)`, scientific otherwise.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    let exponent: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..10).contains(&exponent) {
        let decimals = (SIG_DIGITS as i32 - 1 - exponent).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    }
}

/// One row of the transmissivity sweep at fixed entanglement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig3Row {
    pub x: f64,
    pub f_qt: f64,
    pub f_an: f64,
    pub f_ef: f64,
    pub delta_qt: f64,
    pub delta_an: f64,
    pub d_opt: f64,
    pub r_nc: f64,
}

impl Fig3Row {
    fn fields(&self) -> [f64; 8] {
        [
            self.x,
            self.f_qt,
            self.f_an,
            self.f_ef,
            self.delta_qt,
            self.delta_an,
            self.d_opt,
            self.r_nc,
        ]
    }

    fn check(&self) -> Result<()> {
        check_fidelities(&[self.f_qt, self.f_an, self.f_ef])
    }
}

fn check_fidelities(values: &[f64]) -> Result<()> {
    for &f in values {
        if !(0.0..=1.0 + 1e-12).contains(&f) {
            return Err(invalid(format!("fidelity {f} outside [0, 1]")));
        }
    }
    Ok(())
}

/// Grid `x = k / steps` for `k = 1, ..., steps - 1`.
///
/// `x = 1` is excluded: both infidelities vanish there and the ratios are
/// undefined.
pub fn fig3_grid(steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(invalid(format!(
            "x grid needs at least 2 steps, got {steps}"
        )));
    }
    Ok((1..steps).map(|k| k as f64 / steps as f64).collect())
}

/// Fidelities over a quantum-limited attenuator with the minimal-energy
/// resource at log-negativity `2r`. `d_opt` comes from the numerical
/// optimizer on that resource; `d_max` marks the teleportation regime.
pub fn fig3_table(r: f64, xs: &[f64], d_max: f64) -> Result<Vec<Fig3Row>> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(invalid(format!("r = {r} must be > 0")));
    }
    let resource = optimal_teleport_triplet(r, 1.0, None)?;
    xs.iter()
        .map(|&x| {
            let (delta_qt, delta_an) = infidelity_ratio(r, x)?;
            let channel = ChannelSpec::attenuator(x)?;
            let opt = optimize_with_limit(&resource, &channel, 1.0, d_max)?;
            let row = Fig3Row {
                x,
                f_qt: fidelity_qt(r),
                f_an: fidelity_an(r, x)?,
                f_ef: fidelity_ef(x),
                delta_qt,
                delta_an,
                d_opt: opt.d,
                r_nc: no_cloning_entanglement(x),
            };
            row.check()?;
            Ok(row)
        })
        .collect()
}

pub fn fig5_table(
    base: &GeometryConfig,
    h_c: &[f64],
    r_c: &[f64],
    d_max: f64,
) -> Result<Vec<SweepPoint>> {
    let rows = sweep_fig5(base, h_c, r_c, d_max)?;
    for p in &rows {
        check_fidelities(&[p.f_an, p.f_qt, p.f_ef])?;
    }
    Ok(rows)
}

fn sweep_fields(p: &SweepPoint) -> [f64; 8] {
    [
        p.h_c,
        p.r_c,
        p.x_c,
        p.two_r_distributed,
        p.f_an,
        p.f_qt,
        p.f_ef,
        p.d_opt,
    ]
}

fn write_csv<const N: usize>(
    out: &mut impl Write,
    header: &[&str],
    rows: impl Iterator<Item = [f64; N]>,
) -> std::io::Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| format_sig(v)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn write_fig3_csv(out: &mut impl Write, rows: &[Fig3Row]) -> std::io::Result<()> {
    write_csv(out, FIG3_HEADER, rows.iter().map(Fig3Row::fields))
}

pub fn write_fig5_csv(out: &mut impl Write, rows: &[SweepPoint]) -> std::io::Result<()> {
    write_csv(out, FIG5_HEADER, rows.iter().map(sweep_fields))
}
