#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use htdt_core::gaussian::{ChannelSpec, GaussianState, ResourceTriplet};

pub fn rotation(modes: usize, k: usize, theta: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * modes, 2 * modes);
    let (c, sn) = (theta.cos(), theta.sin());
    s[(2 * k, 2 * k)] = c;
    s[(2 * k, 2 * k + 1)] = sn;
    s[(2 * k + 1, 2 * k)] = -sn;
    s[(2 * k + 1, 2 * k + 1)] = c;
    s
}

pub fn squeezer(modes: usize, k: usize, q: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * modes, 2 * modes);
    s[(2 * k, 2 * k)] = q.exp();
    s[(2 * k + 1, 2 * k + 1)] = (-q).exp();
    s
}

pub fn beam_splitter(modes: usize, i: usize, j: usize, theta: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * modes, 2 * modes);
    let (c, sn) = (theta.cos(), theta.sin());
    for q in 0..2 {
        let (a, b) = (2 * i + q, 2 * j + q);
        s[(a, a)] = c;
        s[(a, b)] = sn;
        s[(b, a)] = -sn;
        s[(b, b)] = c;
    }
    s
}

/// Symplectic matrix from `modes` rotation / squeezing / mixing layers.
pub fn symplectic(modes: usize, params: &[f64]) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * modes, 2 * modes);
    let mut it = params.iter().copied().cycle();
    for _ in 0..2 {
        for k in 0..modes {
            s = rotation(modes, k, it.next().unwrap() * 3.0) * s;
            s = squeezer(modes, k, it.next().unwrap() * 0.6) * s;
        }
        for k in 0..modes.saturating_sub(1) {
            s = beam_splitter(modes, k, k + 1, it.next().unwrap() * 3.0) * s;
        }
    }
    s
}

pub fn symplectic_strategy(modes: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-1.0..1.0_f64, 6 * modes).prop_map(move |p| symplectic(modes, &p))
}

pub fn state_strategy(modes: usize) -> impl Strategy<Value = GaussianState> {
    (
        symplectic_strategy(modes),
        prop::collection::vec(1.0..3.0_f64, modes),
        prop::collection::vec(-2.0..2.0_f64, 2 * modes),
    )
        .prop_map(move |(s, nu, v)| {
            let diag = DVector::from_iterator(2 * modes, nu.iter().flat_map(|&n| [n, n]));
            let cov = &s * DMatrix::from_diagonal(&diag) * s.transpose();
            let cov = (&cov + cov.transpose()) * 0.5;
            GaussianState::new(DVector::from_vec(v), cov).unwrap()
        })
}

pub fn triplet_strategy() -> impl Strategy<Value = ResourceTriplet> {
    (1.0..6.0_f64, 1.0..6.0_f64, 0.0..=1.0_f64).prop_map(|(a, b, f)| {
        let c = f * ResourceTriplet::new_unchecked(a, b, 0.0).max_correlation();
        ResourceTriplet::new(a, b, c).unwrap()
    })
}

pub fn channel_strategy() -> impl Strategy<Value = ChannelSpec> {
    (0.05..2.0_f64, 0.0..2.0_f64)
        .prop_map(|(x, extra)| ChannelSpec::new(x, (1.0 - x).abs() + extra).unwrap())
}

/// `(resource, channel, g, d)` with `d >= max{g/x, 1}`.
pub fn config_strategy() -> impl Strategy<Value = (ResourceTriplet, ChannelSpec, f64, f64)> {
    (
        triplet_strategy(),
        channel_strategy(),
        0.1..3.0_f64,
        1.0..30.0_f64,
    )
        .prop_map(|(t, ch, g, f)| (t, ch, g, (g / ch.x).max(1.0) * f))
}
