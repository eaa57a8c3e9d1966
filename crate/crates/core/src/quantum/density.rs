use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::coins::DetRng;
use crate::error::{Error, Result};

use super::TOL_PSD;

pub type CMatrix = DMatrix<Complex64>;

/// A named register of qubits inside a joint state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subsystem {
    pub name: String,
    pub qubits: usize,
}

impl Subsystem {
    pub fn new(name: impl Into<String>, qubits: usize) -> Self {
        Subsystem { name: name.into(), qubits }
    }
}

/// Density matrix over an ordered list of named registers.
///
/// Basis index bits are laid out register by register in layout order, and
/// within a register the first qubit is the most significant bit. A state
/// with no registers is the 1x1 matrix `[1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    layout: Vec<Subsystem>,
}

impl DensityMatrix {
    /// Wraps `matrix`, checking the layout and the density-matrix invariants.
    pub fn new(matrix: CMatrix, layout: Vec<Subsystem>) -> Result<Self> {
        let state = Self::from_parts(matrix, layout)?;
        state.validate()?;
        Ok(state)
    }

    /// Layout checks only; the caller guarantees positivity and unit trace.
    pub(crate) fn from_parts(matrix: CMatrix, layout: Vec<Subsystem>) -> Result<Self> {
        let qubits: usize = layout.iter().map(|s| s.qubits).sum();
        if !matrix.is_square() || matrix.nrows() != 1usize << qubits {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a {qubits}-qubit layout",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        for (i, s) in layout.iter().enumerate() {
            if layout[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::InvalidState(format!("duplicate register `{}`", s.name)));
            }
        }
        Ok(DensityMatrix { matrix, layout })
    }

    /// Checks Hermiticity, unit trace and positivity within `TOL_PSD`.
    pub fn validate(&self) -> Result<()> {
        let m = &self.matrix;
        let herm = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > TOL_PSD {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TOL_PSD || tr.im.abs() > TOL_PSD {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min_eig = m.clone().symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eig < -TOL_PSD {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(())
    }

    /// The state with no registers.
    pub fn scalar() -> Self {
        DensityMatrix { matrix: CMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)), layout: vec![] }
    }

    /// Computational basis state `|bits><bits|` on a single register.
    pub fn basis(name: &str, bits: &BitString) -> Self {
        let dim = 1usize << bits.len();
        let mut m = CMatrix::zeros(dim, dim);
        let idx = bits.to_u64() as usize;
        m[(idx, idx)] = Complex64::new(1.0, 0.0);
        DensityMatrix { matrix: m, layout: vec![Subsystem::new(name, bits.len())] }
    }

    /// `|0...0><0...0|` on `qubits` qubits.
    pub fn zero(name: &str, qubits: usize) -> Self {
        Self::basis(name, &BitString::zeros(qubits))
    }

    pub fn maximally_mixed(name: &str, qubits: usize) -> Self {
        let dim = 1usize << qubits;
        let m = CMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0);
        DensityMatrix { matrix: m, layout: vec![Subsystem::new(name, qubits)] }
    }

    /// Pure state from (not necessarily normalized) amplitudes over a layout.
    pub fn pure_with_layout(amplitudes: &[Complex64], layout: Vec<Subsystem>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v = nalgebra::DVector::from_iterator(amplitudes.len(), amplitudes.iter().map(|a| a / norm));
        Self::from_parts(&v * v.adjoint(), layout)
    }

    pub fn pure(name: &str, qubits: usize, amplitudes: &[Complex64]) -> Result<Self> {
        Self::pure_with_layout(amplitudes, vec![Subsystem::new(name, qubits)])
    }

    /// `|+><+|` on one qubit.
    pub fn plus(name: &str) -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::pure(name, 1, &[h, h]).expect("non-zero vector")
    }

    /// `|-><-|` on one qubit.
    pub fn minus(name: &str) -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::pure(name, 1, &[h, -h]).expect("non-zero vector")
    }

    /// Maximally entangled state `sum_i |i>|i> / sqrt(2^n)` on registers `a` and `b`.
    pub fn maximally_entangled(a: &str, b: &str, qubits: usize) -> Result<Self> {
        let d = 1usize << qubits;
        let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            amps[i * d + i] = Complex64::new(1.0, 0.0);
        }
        Self::pure_with_layout(&amps, vec![Subsystem::new(a, qubits), Subsystem::new(b, qubits)])
    }

    /// The Bell pair `(|00> + |11>)/sqrt(2)` on registers `A` and `B`.
    pub fn bell() -> Self {
        Self::maximally_entangled("A", "B", 1).expect("valid layout")
    }

    /// Haar-random pure state (Gaussian amplitudes, normalized).
    pub fn random_pure(name: &str, qubits: usize, rng: &mut DetRng) -> Self {
        let d = 1usize << qubits;
        let amps: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        Self::pure(name, qubits, &amps).expect("gaussian vector is non-zero")
    }

    /// Random mixed state `G G^dagger / tr(G G^dagger)` with a `d x rank` Ginibre matrix.
    pub fn random_mixed(name: &str, qubits: usize, rank: usize, rng: &mut DetRng) -> Self {
        let d = 1usize << qubits;
        let g = CMatrix::from_fn(d, rank.max(1), |_, _| {
            Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
        });
        let mut m = &g * g.adjoint();
        let tr = m.trace();
        m /= tr;
        DensityMatrix { matrix: m, layout: vec![Subsystem::new(name, qubits)] }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn layout(&self) -> &[Subsystem] {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn num_qubits(&self) -> usize {
        self.layout.iter().map(|s| s.qubits).sum()
    }

    pub fn has_register(&self, name: &str) -> bool {
        self.layout.iter().any(|s| s.name == name)
    }

    /// Qubit count of register `name`.
    pub fn register_qubits(&self, name: &str) -> Result<usize> {
        self.layout
            .iter()
            .find(|s| s.name == name)
            .map(|s| s.qubits)
            .ok_or_else(|| Error::UnknownSubsystem(name.into()))
    }

    /// Bit positions (0 = most significant) occupied by the named registers, in
    /// the order given.
    pub(crate) fn positions(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for name in names {
            let mut offset = 0;
            let mut found = false;
            for s in &self.layout {
                if s.name == *name {
                    out.extend(offset..offset + s.qubits);
                    found = true;
                    break;
                }
                offset += s.qubits;
            }
            if !found {
                return Err(Error::UnknownSubsystem((*name).into()));
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Kronecker product; the layouts are concatenated and must not share names.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let mut layout = self.layout.clone();
        layout.extend(other.layout.iter().cloned());
        Self::from_parts(self.matrix.kronecker(&other.matrix), layout)
    }

    pub fn rename(&self, from: &str, to: &str) -> Result<DensityMatrix> {
        if !self.has_register(from) {
            return Err(Error::UnknownSubsystem(from.into()));
        }
        let layout = self
            .layout
            .iter()
            .map(|s| if s.name == from { Subsystem::new(to, s.qubits) } else { s.clone() })
            .collect();
        Self::from_parts(self.matrix.clone(), layout)
    }

    /// Reorders the registers; `order` must name every register exactly once.
    pub fn reorder(&self, order: &[&str]) -> Result<DensityMatrix> {
        if order.len() != self.layout.len() {
            return Err(Error::DimensionMismatch(format!(
                "reorder lists {} registers, state has {}",
                order.len(),
                self.layout.len()
            )));
        }
        let positions = self.positions(order)?;
        let n = self.num_qubits();
        let map: Vec<usize> = (0..self.dim()).map(|i| gather(i, &positions, n)).collect();
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                m[(map[i], map[j])] = self.matrix[(i, j)];
            }
        }
        let layout = order
            .iter()
            .map(|name| self.layout.iter().find(|s| s.name == *name).cloned().expect("checked"))
            .collect();
        Self::from_parts(m, layout)
    }

    /// Traces out register `drop`.
    pub fn partial_trace(&self, drop: &str) -> Result<DensityMatrix> {
        self.partial_trace_many(&[drop])
    }

    /// Traces out every listed register.
    pub fn partial_trace_many(&self, drop: &[&str]) -> Result<DensityMatrix> {
        for name in drop {
            if !self.has_register(name) {
                return Err(Error::UnknownSubsystem((*name).into()));
            }
        }
        let keep: Vec<&str> =
            self.layout.iter().map(|s| s.name.as_str()).filter(|n| !drop.contains(n)).collect();
        self.reduce_to(&keep)
    }

    /// Reduced state on `keep` (in the given order), tracing out the rest.
    pub fn reduce_to(&self, keep: &[&str]) -> Result<DensityMatrix> {
        let kept_pos = self.positions(keep)?;
        let dropped: Vec<&str> =
            self.layout.iter().map(|s| s.name.as_str()).filter(|n| !keep.contains(n)).collect();
        let dropped_pos = self.positions(&dropped)?;
        let n = self.num_qubits();
        let dk = 1usize << kept_pos.len();
        let kept_of: Vec<usize> = (0..self.dim()).map(|i| gather(i, &kept_pos, n)).collect();
        let drop_of: Vec<usize> = (0..self.dim()).map(|i| gather(i, &dropped_pos, n)).collect();
        let mut m = CMatrix::zeros(dk, dk);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if drop_of[i] == drop_of[j] {
                    m[(kept_of[i], kept_of[j])] += self.matrix[(i, j)];
                }
            }
        }
        let layout = keep
            .iter()
            .map(|name| self.layout.iter().find(|s| s.name == *name).cloned().expect("checked"))
            .collect();
        Self::from_parts(m, layout)
    }

    /// Traces out `name` and puts `replacement` (a single-register state with
    /// the same name) in its place, keeping the layout order.
    pub fn replace_register(&self, name: &str, replacement: &DensityMatrix) -> Result<DensityMatrix> {
        if replacement.layout.len() != 1 || replacement.layout[0].name != name {
            return Err(Error::DimensionMismatch(format!(
                "replacement must be a single register named `{name}`"
            )));
        }
        let order: Vec<&str> = self.layout.iter().map(|s| s.name.as_str()).collect();
        let rest = self.partial_trace(name)?;
        replacement.tensor(&rest)?.reorder(&order)
    }

    /// Element-wise map over the matrix for internal operations that preserve
    /// the layout.
    pub(crate) fn with_matrix(&self, matrix: CMatrix) -> DensityMatrix {
        debug_assert_eq!(matrix.shape(), self.matrix.shape());
        DensityMatrix { matrix, layout: self.layout.clone() }
    }

    /// Convex combination `sum_i w_i rho_i` of states with identical layouts.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
        let first = parts.first().ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        let mut m = CMatrix::zeros(first.1.dim(), first.1.dim());
        for (w, s) in parts {
            if s.layout != first.1.layout {
                return Err(Error::DimensionMismatch("mixture of different layouts".into()));
            }
            m += &s.matrix * Complex64::new(*w, 0.0);
        }
        Ok(first.1.with_matrix(m))
    }
}

/// Collects the bits of `index` (an `n`-bit number) found at `positions`,
/// most significant first.
pub(crate) fn gather(index: usize, positions: &[usize], n: usize) -> usize {
    positions.iter().fold(0, |acc, &p| (acc << 1) | ((index >> (n - 1 - p)) & 1))
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixJson {
    layout: Vec<Subsystem>,
    dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| [self.matrix[(i, j)].re, self.matrix[(i, j)].im]).collect())
            .collect();
        DensityMatrixJson { layout: self.layout.clone(), dim: self.dim(), entries }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = DensityMatrixJson::deserialize(deserializer)?;
        if raw.entries.len() != raw.dim || raw.entries.iter().any(|row| row.len() != raw.dim) {
            return Err(serde::de::Error::custom("entries do not match dim"));
        }
        let m = CMatrix::from_fn(raw.dim, raw.dim, |i, j| {
            Complex64::new(raw.entries[i][j][0], raw.entries[i][j][1])
        });
        DensityMatrix::new(m, raw.layout).map_err(serde::de::Error::custom)
    }
}
