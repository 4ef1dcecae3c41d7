//! The `htdt` command line.
//!
//! Every subcommand accepts `--config <file.toml>`: a flat table whose keys
//! are the long flag names (dashes become underscores). Flags given on the
//! command line win over the file.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use thiserror::Error;

use crate::distribution::GeometryConfig;
use crate::fidelity::{avg_fidelity, CodebookSpec};
use crate::gaussian::{ChannelSpec, GaussianState, ResourceTriplet};
use crate::protocol::{
    added_noise, htdt_beats_teleportation, monte_carlo_oracle, noise_discarded, noise_ef, noise_qt,
    optimal_teleport_triplet, optimize_d, run_protocol_matrix, teleportation_noise_floor,
    ProtocolParams, DEFAULT_D_MAX,
};
use crate::report::{
    fig3_grid, fig3_table, fig5_table, format_sig, write_fig3_csv, write_fig5_csv,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Validation(#[from] crate::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for rejected input, 1 for internal failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Config(_) => 2,
            CliError::Io { .. } => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "htdt",
    version,
    about = "Hybrid analog teleportation / direct transmission toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the protocol for one resource, channel, gain and encoding gain.
    Simulate(SimulateArgs),
    /// Fidelity sweep over attenuator transmissivity (CSV).
    Fig3(Fig3Args),
    /// Fidelity sweep over the source position (CSV).
    Fig5(Fig5Args),
    /// Evaluate the finite-gain optimality criterion.
    CheckTheorem(CheckTheoremArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub y: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<f64>,
    /// Codebook width for the reported average fidelity (0 = uniform).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Also run the Monte-Carlo moment oracle on a vacuum input.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Fig3Args {
    /// Half log-negativity of the resource (default ln(2)/2).
    #[arg(long)]
    pub r: Option<f64>,
    /// Grid x = k / N for k = 1..N-1 (default N = 30).
    #[arg(long)]
    pub x_steps: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Fig5Args {
    /// Loss rate in dB/m (default 1e-3).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Alice-Bob distance in m.
    #[arg(long, conflicts_with = "xab")]
    pub dab: Option<f64>,
    /// Alice-Bob transmissivity (default 0.7 when neither is given).
    #[arg(long)]
    pub xab: Option<f64>,
    #[arg(long)]
    pub hc_min: Option<f64>,
    #[arg(long)]
    pub hc_max: Option<f64>,
    #[arg(long)]
    pub hc_steps: Option<usize>,
    /// Comma-separated source r_C values (half log-negativities).
    #[arg(long, value_delimiter = ',')]
    pub rc: Option<Vec<f64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckTheoremArgs {
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub y: Option<f64>,
    /// Gain used for the numerical confirmation (default 1).
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Keys accepted in a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub g: Option<f64>,
    pub d: Option<f64>,
    pub r: Option<f64>,
    pub rc: Option<Vec<f64>>,
    pub gamma: Option<f64>,
    pub dab: Option<f64>,
    pub xab: Option<f64>,
    pub hc_min: Option<f64>,
    pub hc_max: Option<f64>,
    pub hc_steps: Option<usize>,
    pub x_steps: Option<usize>,
    pub lambda: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub oracle: Option<bool>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: Option<&PathBuf>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

fn required(name: &str, flag: Option<f64>, file: Option<f64>) -> CliResult<f64> {
    flag.or(file)
        .ok_or_else(|| CliError::Config(format!("missing required parameter --{name}")))
}

fn emit(out: Option<&PathBuf>, stdout: &mut dyn Write, body: &[u8]) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, body).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => stdout.write_all(body).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Simulate(args) => cmd_simulate(args, stdout),
        Command::Fig3(args) => cmd_fig3(args, stdout),
        Command::Fig5(args) => cmd_fig5(args, stdout),
        Command::CheckTheorem(args) => cmd_check_theorem(args, stdout),
    }
}

fn line(report: &mut String, key: &str, value: f64) {
    report.push_str(&format!("{key} = {}\n", format_sig(value)));
}

pub fn cmd_simulate(args: SimulateArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let file = FileConfig::load(args.config.as_ref())?;
    let resource = ResourceTriplet::new(
        required("a", args.a, file.a)?,
        required("b", args.b, file.b)?,
        required("c", args.c, file.c)?,
    )?;
    let channel = ChannelSpec::new(
        required("x", args.x, file.x)?,
        required("y", args.y, file.y)?,
    )?;
    let g = required("g", args.g, file.g)?;
    let d = required("d", args.d, file.d)?;
    let params = ProtocolParams::for_gain(g, d, &channel)?;
    let codebook = CodebookSpec::new(args.lambda.or(file.lambda).unwrap_or(0.0))?;
    let oracle = args.oracle || file.oracle.unwrap_or(false);
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let samples = args.samples.or(file.samples).unwrap_or(1_000_000);

    let noise = added_noise(&resource, &channel, g, d)?;
    let mut report = String::new();
    line(&mut report, "g", g);
    line(&mut report, "d", d);
    line(&mut report, "tau", params.tau);
    line(&mut report, "G", noise);
    line(&mut report, "G_qt", noise_qt(&resource, g));
    match noise_discarded(&resource, g, d) {
        Ok(v) => line(&mut report, "G_dis", v),
        Err(_) => report.push_str("G_dis = undefined (requires d > 1)\n"),
    }
    line(&mut report, "G_ef", noise_ef(&channel, g, d)?);
    line(&mut report, "F", avg_fidelity(g, noise, codebook)?);

    if oracle {
        let input = GaussianState::vacuum(1);
        let exact = run_protocol_matrix(&input, &resource, &channel, &params)?;
        let est = monte_carlo_oracle(&input, &resource, &channel, &params, samples, seed)?;
        report.push_str(&format!(
            "oracle_samples = {samples}\noracle_seed = {seed}\n"
        ));
        for (i, q) in ["x", "p"].iter().enumerate() {
            line(&mut report, &format!("mc_mean_{q}"), est.first_moments[i]);
            line(
                &mut report,
                &format!("mc_mean_{q}_stderr"),
                est.first_moments_stderr[i],
            );
        }
        for (i, j, name) in [(0, 0, "xx"), (0, 1, "xp"), (1, 1, "pp")] {
            line(
                &mut report,
                &format!("mc_cov_{name}"),
                est.covariance[(i, j)],
            );
            line(
                &mut report,
                &format!("mc_cov_{name}_stderr"),
                est.covariance_stderr[(i, j)],
            );
            line(
                &mut report,
                &format!("exact_cov_{name}"),
                exact.covariance()[(i, j)],
            );
        }
        line(&mut report, "mc_max_z", est.max_z_score(&exact));
    }
    emit(
        args.out.as_ref().or(file.out.as_ref()),
        stdout,
        report.as_bytes(),
    )
}

pub fn cmd_fig3(args: Fig3Args, stdout: &mut dyn Write) -> CliResult<()> {
    let file = FileConfig::load(args.config.as_ref())?;
    let r = args.r.or(file.r).unwrap_or(std::f64::consts::LN_2 / 2.0);
    let steps = args.x_steps.or(file.x_steps).unwrap_or(30);
    let rows = fig3_table(r, &fig3_grid(steps)?, DEFAULT_D_MAX)?;
    let mut buf = Vec::new();
    write_fig3_csv(&mut buf, &rows).expect("writing to a Vec cannot fail");
    emit(args.out.as_ref().or(file.out.as_ref()), stdout, &buf)
}

fn linspace(min: f64, max: f64, steps: usize) -> CliResult<Vec<f64>> {
    if steps == 0 {
        return Err(CliError::Config("--hc-steps must be >= 1".into()));
    }
    if !(max >= min) {
        return Err(CliError::Config(format!(
            "--hc-max {max} below --hc-min {min}"
        )));
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    Ok((0..steps)
        .map(|i| min + (max - min) * i as f64 / (steps - 1) as f64)
        .collect())
}

pub fn cmd_fig5(args: Fig5Args, stdout: &mut dyn Write) -> CliResult<()> {
    let file = FileConfig::load(args.config.as_ref())?;
    let gamma = args.gamma.or(file.gamma).unwrap_or(1e-3);
    // a flag on either distance parameter overrides both file values
    let (dab, xab) = if args.dab.is_some() || args.xab.is_some() {
        (args.dab, args.xab)
    } else {
        (file.dab, file.xab)
    };
    let base = match (dab, xab) {
        (Some(_), Some(_)) => {
            return Err(CliError::Config("give only one of dab / xab".into()));
        }
        (Some(dab), None) => GeometryConfig::new(dab, 0.0, gamma)?,
        (None, xab) => GeometryConfig::from_transmissivity(xab.unwrap_or(0.7), 0.0, gamma)?,
    };
    let h_c = linspace(
        args.hc_min.or(file.hc_min).unwrap_or(0.0),
        args.hc_max.or(file.hc_max).unwrap_or(2000.0),
        args.hc_steps.or(file.hc_steps).unwrap_or(21),
    )?;
    let r_c = args
        .rc
        .or(file.rc)
        .unwrap_or_else(|| vec![0.5, 1.05, 1.5, 2.0]);
    if r_c.is_empty() {
        return Err(CliError::Config("--rc needs at least one value".into()));
    }
    let rows = fig5_table(&base, &h_c, &r_c, DEFAULT_D_MAX)?;
    let mut buf = Vec::new();
    write_fig5_csv(&mut buf, &rows).expect("writing to a Vec cannot fail");
    emit(args.out.as_ref().or(file.out.as_ref()), stdout, &buf)
}

pub fn cmd_check_theorem(args: CheckTheoremArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let file = FileConfig::load(args.config.as_ref())?;
    let r = required("r", args.r, file.r)?;
    if !(r >= 0.0 && r.is_finite()) {
        return Err(crate::Error::InvalidParameter(format!("r = {r} must be >= 0")).into());
    }
    let channel = ChannelSpec::new(
        required("x", args.x, file.x)?,
        required("y", args.y, file.y)?,
    )?;
    let g_flag = args.g.or(file.g);
    let holds = htdt_beats_teleportation(r, &channel);
    let boundary = (-2.0 * r).exp() * (1.0 + channel.x);

    let mut report = String::new();
    report.push_str(&format!("condition = {holds}\n"));
    line(&mut report, "y", channel.y);
    line(&mut report, "boundary", boundary);
    if r > 0.0 {
        let g = g_flag.unwrap_or(1.0);
        let triplet = optimal_teleport_triplet(r, g, None)?;
        let opt = optimize_d(&triplet, &channel, g, DEFAULT_D_MAX)?;
        let floor = teleportation_noise_floor(r, g);
        let beats = opt.noise < floor - 1e-9;
        line(&mut report, "g", g);
        line(&mut report, "G_min", opt.noise);
        line(&mut report, "G_qt_star", floor);
        line(&mut report, "d_opt", opt.d);
        report.push_str(&format!("numerical_beats_teleportation = {beats}\n"));
        report.push_str(&format!("consistent = {}\n", beats == holds));
    } else {
        if let Some(g) = g_flag {
            return Err(crate::Error::InvalidParameter(format!(
                "g = {g} outside [tanh r, coth r] = [0, inf] at r = 0"
            ))
            .into());
        }
        report.push_str("numerical_check = skipped (r = 0 has no entangled resource)\n");
    }
    emit(
        args.out.as_ref().or(file.out.as_ref()),
        stdout,
        report.as_bytes(),
    )
}
