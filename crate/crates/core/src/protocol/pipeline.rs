//! Brute-force covariance-matrix path through the protocol.

use nalgebra::{DMatrix, Matrix2};

use super::{decoder, encoder, ProtocolParams};
use crate::error::{Error, Result};
use crate::gaussian::{
    apply_map, partial_trace, tensor, ChannelSpec, GaussianMap, GaussianState, ResourceTriplet,
};

/// One step acting on the current joint system.
#[derive(Debug, Clone)]
pub(crate) enum Stage {
    Map(GaussianMap),
    /// Keep these modes (ascending) and drop the rest.
    Keep(Vec<usize>),
}

/// The protocol unrolled into maps and traces over the three-mode system
/// (input, Alice's arm, Bob's arm). Ends with a single mode.
#[derive(Debug, Clone)]
pub(crate) struct Pipeline {
    pub stages: Vec<Stage>,
}

const BLOCK_TOL: f64 = 1e-12;

/// Among `candidates`, the output mode whose 2x2 block of `x` on input mode
/// `from` equals `block`.
fn locate_mode(
    x: &DMatrix<f64>,
    from: usize,
    block: &Matrix2<f64>,
    candidates: &[usize],
) -> Result<usize> {
    let hits: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&m| {
            let b = x.view((2 * m, 2 * from), (2, 2));
            (b - block).amax() <= BLOCK_TOL * block.amax().max(1.0)
        })
        .collect();
    match hits.as_slice() {
        [m] => Ok(*m),
        _ => Err(Error::InvalidParameter(format!(
            "could not identify a unique output arm ({} candidates)",
            hits.len()
        ))),
    }
}

impl Pipeline {
    pub fn build(channel: &ChannelSpec, params: &ProtocolParams) -> Result<Self> {
        params.validate(channel)?;
        const INPUT: usize = 0;
        const ALICE: usize = 1;
        const BOB: usize = 2;
        let sigma_z = Matrix2::new(1.0, 0.0, 0.0, -1.0);

        let enc = encoder(params.d)?.embed(&[INPUT, ALICE], 3)?;
        // the transmitted arm carries √d v_T, the conjugate √(d-1) σz v_T
        let transmitted = locate_mode(
            enc.x(),
            INPUT,
            &(Matrix2::identity() * params.d.sqrt()),
            &[INPUT, ALICE],
        )?;
        let conjugate = locate_mode(
            enc.x(),
            INPUT,
            &(sigma_z * (params.d - 1.0).sqrt()),
            &[INPUT, ALICE],
        )?;
        if conjugate == transmitted {
            return Err(Error::InvalidParameter("encoder arms coincide".into()));
        }
        let kept: Vec<usize> = (0..3).filter(|&m| m != conjugate).collect();
        // indices after the trace
        let sent = kept.iter().position(|&m| m == transmitted).unwrap();
        let bob = kept.iter().position(|&m| m == BOB).unwrap();

        let link = channel.to_map().embed(&[sent], 2)?;
        let dec = decoder(params.tau)?.embed(&[sent, bob], 2)?;
        let output = locate_mode(
            dec.x(),
            sent,
            &(Matrix2::identity() * params.tau.sqrt()),
            &[sent, bob],
        )?;

        Ok(Self {
            stages: vec![
                Stage::Map(enc),
                Stage::Keep(kept),
                Stage::Map(link),
                Stage::Map(dec),
                Stage::Keep(vec![output]),
            ],
        })
    }

    pub fn initial_state(
        input: &GaussianState,
        resource: &ResourceTriplet,
    ) -> Result<GaussianState> {
        if input.modes() != 1 {
            return Err(Error::ModeCount {
                expected: 1,
                actual: input.modes(),
            });
        }
        let shared = crate::gaussian::resource_to_state(resource)?;
        Ok(tensor(input, &shared))
    }
}

/// Runs the full protocol by explicit map application and mode tracing.
///
/// Does not use the closed-form noise; it is the reference the closed form
/// is checked against.
pub fn run_protocol_matrix(
    input: &GaussianState,
    resource: &ResourceTriplet,
    channel: &ChannelSpec,
    params: &ProtocolParams,
) -> Result<GaussianState> {
    channel.validate()?;
    let pipeline = Pipeline::build(channel, params)?;
    let mut state = Pipeline::initial_state(input, resource)?;
    for stage in &pipeline.stages {
        state = match stage {
            Stage::Map(map) => apply_map(map, &state)?,
            Stage::Keep(modes) => partial_trace(&state, modes)?,
        };
    }
    Ok(state)
}
