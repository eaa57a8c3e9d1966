use num_complex::Complex64;

use crate::bits::BitString;
use crate::error::{Error, Result};

use super::density::{gather, CMatrix, DensityMatrix};
use super::{N_MAX_EXHAUSTIVE, TOL_ALGEBRA};

/// Key `r` of length `2n` selecting the Pauli operator
/// `X_1^{r_1} Z_1^{r_2} ... X_n^{r_{2n-1}} Z_n^{r_{2n}}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliKey(BitString);

impl PauliKey {
    pub fn new(bits: BitString) -> Result<Self> {
        if !bits.len().is_multiple_of(2) {
            return Err(Error::MalformedKey(format!("Pauli key has odd length {}", bits.len())));
        }
        Ok(PauliKey(bits))
    }

    pub fn identity(qubits: usize) -> Self {
        PauliKey(BitString::zeros(2 * qubits))
    }

    pub fn qubits(&self) -> usize {
        self.0.len() / 2
    }

    pub fn bits(&self) -> &BitString {
        &self.0
    }

    /// X and Z exponent masks over `qubits()` bits, qubit 1 most significant.
    pub fn masks(&self) -> (usize, usize) {
        let n = self.qubits();
        let (mut x, mut z) = (0usize, 0usize);
        for j in 0..n {
            let shift = n - 1 - j;
            x |= (self.0.get(2 * j) as usize) << shift;
            z |= (self.0.get(2 * j + 1) as usize) << shift;
        }
        (x, z)
    }
}

impl std::str::FromStr for PauliKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PauliKey::new(s.parse()?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    matrix: CMatrix,
}

impl UnitaryMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let u = UnitaryMatrix { matrix };
        if !u.matrix.is_square() || !u.matrix.nrows().is_power_of_two() {
            return Err(Error::DimensionMismatch("unitary must be square with power-of-two size".into()));
        }
        if !u.is_unitary(super::TOL_PSD) {
            return Err(Error::InvalidState("matrix is not unitary".into()));
        }
        Ok(u)
    }

    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        UnitaryMatrix {
            matrix: CMatrix::from_row_slice(
                2,
                2,
                &[h.into(), h.into(), h.into(), (-h).into()],
            ),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = &self.matrix * self.matrix.adjoint();
        let id = CMatrix::identity(self.dim(), self.dim());
        (prod - id).iter().all(|z| z.norm() <= tol)
    }

    /// True if `self = e^{i phi} other` for some phase.
    pub fn equals_up_to_phase(&self, other: &UnitaryMatrix, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let Some((idx, _)) = other.matrix.iter().enumerate().find(|(_, z)| z.norm() > 0.5 / other.dim() as f64)
        else {
            return false;
        };
        let phase = self.matrix.as_slice()[idx] / other.matrix.as_slice()[idx];
        if (phase.norm() - 1.0).abs() > tol {
            return false;
        }
        (&self.matrix - &other.matrix * phase).iter().all(|z| z.norm() <= tol)
    }

    pub fn mul(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix { matrix: &self.matrix * &other.matrix }
    }
}

/// The Pauli operator named by `key`, as the literal product `X^a Z^b` per
/// qubit (so key `11` gives `XZ = -iY`).
pub fn pauli_from_key(key: &PauliKey) -> Result<UnitaryMatrix> {
    if key.qubits() == 0 {
        return Err(Error::MalformedKey("Pauli key must act on at least one qubit".into()));
    }
    let (x, z) = key.masks();
    let dim = 1usize << key.qubits();
    let mut m = CMatrix::zeros(dim, dim);
    // P|k> = (-1)^{z.k} |k xor x>
    for k in 0..dim {
        m[(k ^ x, k)] = Complex64::new(sign(z & k), 0.0);
    }
    Ok(UnitaryMatrix { matrix: m })
}

fn sign(v: usize) -> f64 {
    if v.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Conjugates register `target` by `P_key`, leaving every other register alone.
pub fn apply_pauli(key: &PauliKey, state: &DensityMatrix, target: &str) -> Result<DensityMatrix> {
    let qubits = state.register_qubits(target)?;
    if key.qubits() != qubits {
        return Err(Error::DimensionMismatch(format!(
            "key of length {} for a {qubits}-qubit register `{target}`",
            key.bits().len()
        )));
    }
    let (x_local, z_local) = key.masks();
    let positions = state.positions(&[target])?;
    let n = state.num_qubits();
    let x = scatter(x_local, &positions, n);
    let z = scatter(z_local, &positions, n);
    let dim = state.dim();
    let src = state.matrix();
    // (P rho P^dag)[a][b] = (-1)^{z.a + z.b} rho[a^x][b^x]
    let m = CMatrix::from_fn(dim, dim, |a, b| src[(a ^ x, b ^ x)] * sign((z & a) ^ (z & b)));
    Ok(state.with_matrix(m))
}

/// Places the bits of a register-local value onto the global positions.
fn scatter(local: usize, positions: &[usize], n: usize) -> usize {
    let q = positions.len();
    positions
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &p)| acc | (((local >> (q - 1 - j)) & 1) << (n - 1 - p)))
}

/// Applies `unitary` to register `target`: `(U x 1) rho (U x 1)^dagger`.
pub fn apply_unitary(unitary: &UnitaryMatrix, state: &DensityMatrix, target: &str) -> Result<DensityMatrix> {
    let qubits = state.register_qubits(target)?;
    if unitary.dim() != 1usize << qubits {
        return Err(Error::DimensionMismatch(format!(
            "{}-dimensional unitary on {qubits}-qubit register `{target}`",
            unitary.dim()
        )));
    }
    let positions = state.positions(&[target])?;
    let others: Vec<usize> = (0..state.num_qubits()).filter(|p| !positions.contains(p)).collect();
    let n = state.num_qubits();
    let dim = state.dim();
    let reg: Vec<usize> = (0..dim).map(|i| gather(i, &positions, n)).collect();
    let rest: Vec<usize> = (0..dim).map(|i| gather(i, &others, n)).collect();
    let u = unitary.matrix();
    let full = CMatrix::from_fn(dim, dim, |i, j| {
        if rest[i] == rest[j] {
            u[(reg[i], reg[j])]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(state.with_matrix(&full * state.matrix() * full.adjoint()))
}

/// `2^{-2n} sum_r P_r rho P_r` over every key of the state's full width.
pub fn qotp_average(state: &DensityMatrix) -> Result<DensityMatrix> {
    qotp_average_with_limit(state, N_MAX_EXHAUSTIVE)
}

pub fn qotp_average_with_limit(state: &DensityMatrix, limit: usize) -> Result<DensityMatrix> {
    let n = state.num_qubits();
    if n > limit {
        return Err(Error::TooLarge { qubits: n, limit });
    }
    // single-register view so one key addresses every qubit
    let flat = DensityMatrix::from_parts(state.matrix().clone(), vec![super::Subsystem::new("all", n)])?;
    let keys = 1u64 << (2 * n);
    let mut acc = CMatrix::zeros(state.dim(), state.dim());
    for r in 0..keys {
        let key = PauliKey::new(BitString::from_u64(r, 2 * n))?;
        acc += apply_pauli(&key, &flat, "all")?.matrix();
    }
    acc /= Complex64::new(keys as f64, 0.0);
    Ok(state.with_matrix(acc))
}

/// `P^2 = e^{i phi} I` within `TOL_ALGEBRA`.
pub fn squares_to_identity(p: &UnitaryMatrix) -> bool {
    let id = UnitaryMatrix { matrix: CMatrix::identity(p.dim(), p.dim()) };
    p.mul(p).equals_up_to_phase(&id, TOL_ALGEBRA)
}
