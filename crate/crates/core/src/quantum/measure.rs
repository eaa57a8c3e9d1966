use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::bits::BitString;
use crate::coins::{CoinSource, ZERO_WEIGHT};
use crate::error::{Error, Result};

use super::density::{gather, CMatrix, DensityMatrix};

/// Outcome probabilities of a computational-basis measurement of `target`,
/// one per register value (index = outcome as an integer).
fn outcome_weights(state: &DensityMatrix, target: &str) -> Result<(Vec<f64>, Vec<usize>)> {
    let qubits = state.register_qubits(target)?;
    let positions = state.positions(&[target])?;
    let n = state.num_qubits();
    let reg: Vec<usize> = (0..state.dim()).map(|i| gather(i, &positions, n)).collect();
    let mut probs = vec![0.0; 1usize << qubits];
    for (i, &r) in reg.iter().enumerate() {
        probs[r] += state.matrix()[(i, i)].re;
    }
    Ok((probs, reg))
}

/// Exact outcome distribution of measuring `target` in the computational basis.
/// Outcomes of probability zero are omitted.
pub fn measurement_distribution(state: &DensityMatrix, target: &str) -> Result<BTreeMap<BitString, f64>> {
    let qubits = state.register_qubits(target)?;
    let (probs, _) = outcome_weights(state, target)?;
    Ok(probs
        .into_iter()
        .enumerate()
        .filter(|(_, p)| *p > ZERO_WEIGHT)
        .map(|(i, p)| (BitString::from_u64(i as u64, qubits), p))
        .collect())
}

/// Projects `target` onto outcome `outcome` and renormalizes.
pub fn project(state: &DensityMatrix, target: &str, outcome: &BitString) -> Result<DensityMatrix> {
    let qubits = state.register_qubits(target)?;
    if outcome.len() != qubits {
        return Err(Error::LengthMismatch { expected: qubits, actual: outcome.len() });
    }
    let (probs, reg) = outcome_weights(state, target)?;
    let o = outcome.to_u64() as usize;
    let p = probs[o];
    if p <= ZERO_WEIGHT {
        return Err(Error::ZeroProbability);
    }
    let dim = state.dim();
    let src = state.matrix();
    let m = CMatrix::from_fn(dim, dim, |i, j| {
        if reg[i] == o && reg[j] == o {
            src[(i, j)] / p
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(state.with_matrix(m))
}

/// Measures `target` in the computational basis. The register stays in the
/// post-measurement state, so measuring it again repeats the outcome.
pub fn measure_computational(
    state: &DensityMatrix,
    target: &str,
    coins: &mut dyn CoinSource,
) -> Result<(BitString, DensityMatrix)> {
    let qubits = state.register_qubits(target)?;
    let (probs, _) = outcome_weights(state, target)?;
    if probs.iter().all(|p| *p <= ZERO_WEIGHT) {
        return Err(Error::ZeroProbability);
    }
    let o = coins.weighted(&probs);
    let outcome = BitString::from_u64(o as u64, qubits);
    let post = project(state, target, &outcome)?;
    Ok((outcome, post))
}

/// Measures `target` and discards it, returning the outcome and the state of
/// the remaining registers.
pub fn measure_and_discard(
    state: &DensityMatrix,
    target: &str,
    coins: &mut dyn CoinSource,
) -> Result<(BitString, DensityMatrix)> {
    let (outcome, post) = measure_computational(state, target, coins)?;
    Ok((outcome, post.partial_trace(target)?))
}
