use num_complex::Complex64;

use crate::coins::{for_each_branch, CoinSource};
use crate::error::{Error, Result};

use super::density::{CMatrix, DensityMatrix};

/// Half the trace norm of `a - b`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!("trace distance of {}x{0} and {}x{1}", a.dim(), b.dim())));
    }
    let diff: CMatrix = a.matrix() - b.matrix();
    let norm: f64 = diff.symmetric_eigenvalues().iter().map(|l| l.abs()).sum();
    Ok((0.5 * norm).clamp(0.0, 1.0))
}

/// A possibly randomized map acting on one named register of a joint state.
/// Randomness must come from `coins` so the map can be averaged exactly.
pub trait Channel {
    fn apply(&self, state: &DensityMatrix, target: &str, coins: &mut dyn CoinSource) -> Result<DensityMatrix>;
}

impl<F> Channel for F
where
    F: Fn(&DensityMatrix, &str, &mut dyn CoinSource) -> Result<DensityMatrix>,
{
    fn apply(&self, state: &DensityMatrix, target: &str, coins: &mut dyn CoinSource) -> Result<DensityMatrix> {
        self(state, target, coins)
    }
}

pub struct IdentityChannel;

impl Channel for IdentityChannel {
    fn apply(&self, state: &DensityMatrix, target: &str, _coins: &mut dyn CoinSource) -> Result<DensityMatrix> {
        state.register_qubits(target)?;
        Ok(state.clone())
    }
}

/// Branch cap used when averaging a channel over its coins.
const CHOI_BRANCH_CAP: u64 = 1 << 20;

/// Choi state of `channel` on `qubits` qubits: the channel, averaged exactly
/// over its internal coins, applied to register `A` of a maximally entangled
/// state on `R x A`.
pub fn choi_state(channel: &dyn Channel, qubits: usize) -> Result<DensityMatrix> {
    let input = DensityMatrix::maximally_entangled("R", "A", qubits)?;
    let mut acc: Option<(DensityMatrix, CMatrix)> = None;
    let mut shape_changed = false;
    for_each_branch(
        CHOI_BRANCH_CAP,
        |coins| channel.apply(&input, "A", coins),
        |w, out| match acc.as_mut() {
            Some((first, m)) if first.layout() == out.layout() => *m += out.matrix() * Complex64::new(w, 0.0),
            Some(_) => shape_changed = true,
            None => {
                let m = out.matrix() * Complex64::new(w, 0.0);
                acc = Some((out, m));
            }
        },
    )?;
    if shape_changed {
        return Err(Error::DimensionMismatch("channel output layout varies between branches".into()));
    }
    let (first, m) = acc.expect("enumeration visits at least one branch");
    if first.num_qubits() != 2 * qubits {
        return Err(Error::DimensionMismatch(format!(
            "channel output has {} qubits, expected {}",
            first.num_qubits(),
            2 * qubits
        )));
    }
    Ok(first.with_matrix(m))
}

/// Trace distance between the Choi states of two channels; zero iff the
/// channels are equal.
pub fn channel_choi_distance(channel: &dyn Channel, reference: &dyn Channel, qubits: usize) -> Result<f64> {
    let a = choi_state(channel, qubits)?;
    let b = choi_state(reference, qubits)?;
    trace_distance(&a, &b)
}
