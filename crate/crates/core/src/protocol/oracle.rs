//! Phase-space Monte-Carlo check of the moment propagation.
//!
//! Classical points are drawn with mean `v` and covariance `Γ/2`, pushed
//! through each map's `X`, and perturbed by Gaussian noise of covariance
//! `Y/2`. This reproduces first and second moments of Gaussian channels on
//! Gaussian inputs; it checks moments only, not quantum behaviour.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::pipeline::{Pipeline, Stage};
use super::ProtocolParams;
use crate::error::{invalid, Result};
use crate::gaussian::{ChannelSpec, GaussianState, ResourceTriplet};

pub const MIN_SAMPLES: usize = 10_000;
/// Fixed shard count so results do not depend on the thread pool size.
const SHARDS: u64 = 16;

/// Estimated output moments with their standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloEstimate {
    pub first_moments: DVector<f64>,
    pub covariance: DMatrix<f64>,
    pub first_moments_stderr: DVector<f64>,
    pub covariance_stderr: DMatrix<f64>,
    pub samples: usize,
}

impl MonteCarloEstimate {
    /// Largest deviation from the given moments, in units of standard error.
    pub fn max_z_score(&self, state: &GaussianState) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.first_moments.len() {
            let z = (self.first_moments[i] - state.first_moments()[i]).abs()
                / self.first_moments_stderr[i];
            worst = worst.max(z);
            for j in 0..self.first_moments.len() {
                let z = (self.covariance[(i, j)] - state.covariance()[(i, j)]).abs()
                    / self.covariance_stderr[(i, j)];
                worst = worst.max(z);
            }
        }
        worst
    }

    pub fn agrees_with(&self, state: &GaussianState, sigmas: f64) -> bool {
        self.max_z_score(state) <= sigmas
    }
}

/// Matrix square root of a symmetric PSD matrix, negative eigenvalues clipped.
fn psd_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = crate::gaussian::symmetrize(m).symmetric_eigen();
    let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    &eig.eigenvectors * DMatrix::from_diagonal(&roots)
}

enum CompiledStage {
    Map {
        x: DMatrix<f64>,
        noise: Option<DMatrix<f64>>,
    },
    Keep(Vec<usize>),
}

fn compile(pipeline: &Pipeline) -> Vec<CompiledStage> {
    pipeline
        .stages
        .iter()
        .map(|stage| match stage {
            Stage::Map(map) => {
                let noise = (map.y().amax() > 0.0).then(|| psd_sqrt(&(map.y() * 0.5)));
                CompiledStage::Map {
                    x: map.x().clone(),
                    noise,
                }
            }
            Stage::Keep(modes) => {
                CompiledStage::Keep(modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect())
            }
        })
        .collect()
}

fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| StandardNormal.sample(rng))
}

/// Raw sums over one shard: count, Σ s, Σ s sᵀ for the 2-component output.
struct Sums {
    count: usize,
    first: DVector<f64>,
    second: DMatrix<f64>,
}

fn run_shard(
    stages: &[CompiledStage],
    mean: &DVector<f64>,
    root: &DMatrix<f64>,
    count: usize,
    seed: u64,
    shard: u64,
) -> Sums {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    let mut first = DVector::zeros(2);
    let mut second = DMatrix::zeros(2, 2);
    for _ in 0..count {
        let mut s = mean + root * gaussian_vector(&mut rng, mean.len());
        for stage in stages {
            s = match stage {
                CompiledStage::Map { x, noise } => {
                    let mut out = x * &s;
                    if let Some(l) = noise {
                        out += l * gaussian_vector(&mut rng, l.ncols());
                    }
                    out
                }
                CompiledStage::Keep(rows) => DVector::from_fn(rows.len(), |i, _| s[rows[i]]),
            };
        }
        first += &s;
        second += &s * s.transpose();
    }
    Sums {
        count,
        first,
        second,
    }
}

/// Estimates the protocol output moments by sampling. Deterministic for a
/// fixed `(seed, n_samples)`.
pub fn monte_carlo_oracle(
    input: &GaussianState,
    resource: &ResourceTriplet,
    channel: &ChannelSpec,
    params: &ProtocolParams,
    n_samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if n_samples < MIN_SAMPLES {
        return Err(invalid(format!(
            "n_samples = {n_samples} below the minimum {MIN_SAMPLES}"
        )));
    }
    channel.validate()?;
    let pipeline = Pipeline::build(channel, params)?;
    let initial = Pipeline::initial_state(input, resource)?;
    let stages = compile(&pipeline);
    let mean = initial.first_moments().clone();
    let root = psd_sqrt(&(initial.covariance() * 0.5));

    let base = n_samples / SHARDS as usize;
    let extra = n_samples % SHARDS as usize;
    let shards: Vec<Sums> = (0..SHARDS)
        .into_par_iter()
        .map(|k| {
            let count = base + usize::from((k as usize) < extra);
            run_shard(&stages, &mean, &root, count, seed, k)
        })
        .collect();

    // merged in shard order
    let mut first = DVector::zeros(2);
    let mut second = DMatrix::zeros(2, 2);
    for s in &shards {
        debug_assert!(s.count > 0 || n_samples < SHARDS as usize);
        first += &s.first;
        second += &s.second;
    }
    let n = n_samples as f64;
    let mean_out = first / n;
    let classical = (second - &mean_out * mean_out.transpose() * n) / (n - 1.0);

    let first_moments_stderr = DVector::from_fn(2, |i, _| (classical[(i, i)] / n).sqrt());
    let covariance_stderr = DMatrix::from_fn(2, 2, |i, j| {
        let var = classical[(i, i)] * classical[(j, j)] + classical[(i, j)].powi(2);
        2.0 * (var / (n - 1.0)).sqrt()
    });
    Ok(MonteCarloEstimate {
        first_moments: mean_out,
        covariance: classical * 2.0,
        first_moments_stderr,
        covariance_stderr,
        samples: n_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::run_protocol_matrix;

    #[test]
    fn vacuum_through_identity() {
        let ch = ChannelSpec::new(1.0, 0.0).unwrap();
        let p = ProtocolParams::for_gain(1.0, 1.0, &ch).unwrap();
        let vac = GaussianState::vacuum(1);
        let est =
            monte_carlo_oracle(&vac, &ResourceTriplet::vacuum(), &ch, &p, 200_000, 7).unwrap();
        assert!(est.agrees_with(&vac, 3.0), "z = {}", est.max_z_score(&vac));
    }

    #[test]
    fn coherent_mean_scales_with_root_gain() {
        let t = ResourceTriplet::new(2.0, 2.0, 1.5).unwrap();
        let ch = ChannelSpec::new(0.5, 0.6).unwrap();
        let p = ProtocolParams::for_gain(1.0, 2.5, &ch).unwrap();
        let input = GaussianState::coherent(3.0, 1.0);
        let est = monte_carlo_oracle(&input, &t, &ch, &p, 100_000, 11).unwrap();
        let exact = run_protocol_matrix(&input, &t, &ch, &p).unwrap();
        assert!((exact.first_moments()[0] - 3.0).abs() < 1e-12);
        for i in 0..2 {
            let z = (est.first_moments[i] - exact.first_moments()[i]).abs()
                / est.first_moments_stderr[i];
            assert!(z < 3.0, "component {i}: z = {z}");
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let t = ResourceTriplet::new(2.0, 2.0, 1.5).unwrap();
        let ch = ChannelSpec::new(0.5, 0.6).unwrap();
        let p = ProtocolParams::for_gain(0.8, 2.0, &ch).unwrap();
        let input = GaussianState::thermal(1, 2.0);
        let a = monte_carlo_oracle(&input, &t, &ch, &p, 20_000, 3).unwrap();
        let b = monte_carlo_oracle(&input, &t, &ch, &p, 20_000, 3).unwrap();
        let c = monte_carlo_oracle(&input, &t, &ch, &p, 20_000, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_small_sample_counts() {
        let ch = ChannelSpec::new(1.0, 0.0).unwrap();
        let p = ProtocolParams::for_gain(1.0, 1.0, &ch).unwrap();
        assert!(monte_carlo_oracle(
            &GaussianState::vacuum(1),
            &ResourceTriplet::vacuum(),
            &ch,
            &p,
            9_999,
            0
        )
        .is_err());
    }
}
