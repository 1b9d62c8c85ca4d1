//! Dense labeled qubit registers and reduced states.
//!
//! A register holds an ordered list of labels, one per qubit, and a dense
//! complex amplitude vector of length `2^n`. Bit indexing is big-endian by
//! position in the label list: the qubit at position `p` of an `n`-qubit
//! register owns bit `n - 1 - p` of the basis index, so the leftmost label is
//! the most significant bit. This is the single place that convention is
//! defined; everything else goes through [`bit_of`].

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::amplitude::AmplitudeState;
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigenvalues;

/// Tolerance on norm, Hermiticity and trace checks.
pub const STATE_TOLERANCE: f64 = 1e-10;

/// Eigenvalue floor for positive-semidefiniteness checks.
pub const PSD_TOLERANCE: f64 = -1e-10;

/// Largest admissible amplitude on an already-excited reservoir qubit fed to
/// the pair map.
const VACUUM_TOLERANCE: f64 = 1e-12;

/// Which half of a system-reservoir pair a qubit belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QubitRole {
    Atom,
    Reservoir,
}

/// Identity of one qubit: its role and its pair index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitLabel {
    pub role: QubitRole,
    pub index: usize,
}

impl QubitLabel {
    pub fn atom(index: usize) -> Self {
        Self { role: QubitRole::Atom, index }
    }

    pub fn reservoir(index: usize) -> Self {
        Self { role: QubitRole::Reservoir, index }
    }
}

impl std::fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.role {
            QubitRole::Atom => write!(f, "a{}", self.index),
            QubitRole::Reservoir => write!(f, "r{}", self.index),
        }
    }
}

/// Bit position (from the least significant bit) owned by label position
/// `pos` in an `n`-qubit register.
#[inline]
fn bit_of(n: usize, pos: usize) -> usize {
    n - 1 - pos
}

fn check_unique(labels: &[QubitLabel]) -> Result<()> {
    for (i, a) in labels.iter().enumerate() {
        if labels[i + 1..].contains(a) {
            return Err(Error::DuplicateLabel(a.to_string()));
        }
    }
    Ok(())
}

/// Positions (in `labels`) of each entry of `subset`, verifying membership
/// and uniqueness.
fn positions_of(labels: &[QubitLabel], subset: &[QubitLabel]) -> Result<Vec<usize>> {
    check_unique(subset)?;
    subset
        .iter()
        .map(|l| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))
        })
        .collect()
}

/// A normalized pure state over a labeled register.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    labels: Vec<QubitLabel>,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Build from labels and amplitudes, checking dimension, label
    /// uniqueness, and normalization.
    pub fn new(labels: Vec<QubitLabel>, amps: Vec<Complex64>) -> Result<Self> {
        check_unique(&labels)?;
        if amps.len() != 1 << labels.len() {
            return Err(Error::BadDimension { got: amps.len(), qubits: labels.len() });
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > STATE_TOLERANCE {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Self { labels, amps })
    }

    /// The computational basis state `|index>` over `labels`.
    pub fn basis(labels: Vec<QubitLabel>, index: usize) -> Result<Self> {
        check_unique(&labels)?;
        let dim = 1usize << labels.len();
        if index >= dim {
            return Err(Error::OutOfRange(format!("basis index {index} out of 0..{dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { labels, amps })
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn n_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Kronecker composition; the result carries `self`'s labels followed by
    /// `other`'s. Fails on overlapping label sets.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        check_unique(&labels)?;
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for &a in &self.amps {
            for &b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(PureState { labels, amps })
    }

    /// The single-excitation exchange map on one (atom, reservoir) pair:
    ///
    /// ```text
    /// |0>_a |0>_r -> |0>_a |0>_r
    /// |1>_a |0>_r -> nu |1>_a |0>_r + mu |0>_a |1>_r
    /// ```
    ///
    /// All other qubits are untouched. The reservoir qubit must be in the
    /// vacuum on input; any amplitude above 1e-12 on an excited-reservoir
    /// component is rejected. Norm is preserved because `|nu|^2 + mu^2 = 1`.
    pub fn apply_pair_isometry(
        &self,
        atom: QubitLabel,
        reservoir: QubitLabel,
        amp: &AmplitudeState,
    ) -> Result<PureState> {
        let pos = positions_of(&self.labels, &[atom, reservoir])?;
        let n = self.n_qubits();
        let atom_bit = 1usize << bit_of(n, pos[0]);
        let res_bit = 1usize << bit_of(n, pos[1]);
        let mu = Complex64::from(amp.mu);

        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (idx, &a) in self.amps.iter().enumerate() {
            if idx & res_bit != 0 {
                if a.norm() > VACUUM_TOLERANCE {
                    return Err(Error::ReservoirNotVacuum);
                }
                continue;
            }
            if idx & atom_bit != 0 {
                out[idx] += amp.nu * a;
                out[(idx & !atom_bit) | res_bit] += mu * a;
            } else {
                out[idx] += a;
            }
        }
        Ok(PureState { labels: self.labels.clone(), amps: out })
    }

    /// `|psi><psi|` over the full register.
    pub fn to_density(&self) -> DensityMatrix {
        let dim = self.amps.len();
        let mat = DMatrix::from_fn(dim, dim, |i, j| self.amps[i] * self.amps[j].conj());
        DensityMatrix { labels: self.labels.clone(), mat }
    }

    /// Reduced density matrix over `keep` (labels in the order they appear in
    /// the register), tracing out everything else.
    pub fn partial_trace(&self, keep: &[QubitLabel]) -> Result<DensityMatrix> {
        let (keep_sorted, env_bits, keep_bits) = self.trace_layout(keep)?;
        let k = keep_bits.len();
        let dim = 1usize << k;
        let mut mat = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        let env_dim = 1usize << env_bits.len();
        for i in 0..dim {
            for j in 0..=i {
                let mut acc = Complex64::new(0.0, 0.0);
                for e in 0..env_dim {
                    let base = scatter(e, &env_bits);
                    let row = base | scatter(i, &keep_bits);
                    let col = base | scatter(j, &keep_bits);
                    acc += self.amps[row] * self.amps[col].conj();
                }
                mat[(i, j)] = acc;
                if i != j {
                    mat[(j, i)] = acc.conj();
                }
            }
        }
        Ok(DensityMatrix { labels: keep_sorted, mat })
    }

    /// Shared layout work for partial traces: induced keep order, bit masks of
    /// environment and kept qubits (most significant first within each group).
    fn trace_layout(
        &self,
        keep: &[QubitLabel],
    ) -> Result<(Vec<QubitLabel>, Vec<usize>, Vec<usize>)> {
        if keep.is_empty() {
            return Err(Error::InvalidSubset("keep set must be nonempty".into()));
        }
        positions_of(&self.labels, keep)?;
        let n = self.n_qubits();
        let mut keep_sorted = Vec::new();
        let mut keep_bits = Vec::new();
        let mut env_bits = Vec::new();
        for (pos, label) in self.labels.iter().enumerate() {
            if keep.contains(label) {
                keep_sorted.push(*label);
                keep_bits.push(bit_of(n, pos));
            } else {
                env_bits.push(bit_of(n, pos));
            }
        }
        Ok((keep_sorted, env_bits, keep_bits))
    }
}

/// Spread the low bits of `value` onto the (descending) bit positions in
/// `bits`, most significant first.
#[inline]
fn scatter(value: usize, bits: &[usize]) -> usize {
    let mut out = 0usize;
    let m = bits.len();
    for (pos, &bit) in bits.iter().enumerate() {
        out |= ((value >> (m - 1 - pos)) & 1) << bit;
    }
    out
}

/// A Hermitian, trace-one, positive-semidefinite operator over a labeled
/// register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    labels: Vec<QubitLabel>,
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Build from raw data, enforcing Hermiticity, unit trace, and positive
    /// semidefiniteness (eigenvalues above [`PSD_TOLERANCE`]).
    pub fn new(labels: Vec<QubitLabel>, mat: DMatrix<Complex64>) -> Result<Self> {
        check_unique(&labels)?;
        let dim = 1usize << labels.len();
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::BadDimension { got: mat.nrows(), qubits: labels.len() });
        }
        let mut herm_err: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                herm_err = herm_err.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
            }
        }
        if herm_err > STATE_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {herm_err:.3e})"
            )));
        }
        let trace = mat.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > STATE_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("trace = {trace} is not 1")));
        }
        let out = Self { labels, mat };
        let min = out.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < PSD_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(out)
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn n_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    /// Real spectrum, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.mat)
    }

    /// Reduced density matrix over `keep`, tracing out the rest.
    pub fn partial_trace(&self, keep: &[QubitLabel]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::InvalidSubset("keep set must be nonempty".into()));
        }
        positions_of(&self.labels, keep)?;
        let n = self.n_qubits();
        let mut keep_sorted = Vec::new();
        let mut keep_bits = Vec::new();
        let mut env_bits = Vec::new();
        for (pos, label) in self.labels.iter().enumerate() {
            if keep.contains(label) {
                keep_sorted.push(*label);
                keep_bits.push(bit_of(n, pos));
            } else {
                env_bits.push(bit_of(n, pos));
            }
        }
        let dim = 1usize << keep_bits.len();
        let env_dim = 1usize << env_bits.len();
        let mut mat = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for i in 0..dim {
            for j in 0..=i {
                let mut acc = Complex64::new(0.0, 0.0);
                for e in 0..env_dim {
                    let base = scatter(e, &env_bits);
                    acc += self.mat[(base | scatter(i, &keep_bits), base | scatter(j, &keep_bits))];
                }
                mat[(i, j)] = acc;
                if i != j {
                    mat[(j, i)] = acc.conj();
                }
            }
        }
        Ok(DensityMatrix { labels: keep_sorted, mat })
    }

    /// Transpose the indices of `subset` only. The result is Hermitian with
    /// the same trace but need not be positive, so it comes back as a
    /// [`HermitianOp`]. `subset` must be a proper nonempty subset of the
    /// register.
    pub fn partial_transpose(&self, subset: &[QubitLabel]) -> Result<HermitianOp> {
        if subset.is_empty() {
            return Err(Error::InvalidSubset("transpose subset must be nonempty".into()));
        }
        let pos = positions_of(&self.labels, subset)?;
        if pos.len() == self.labels.len() {
            return Err(Error::InvalidSubset(
                "transpose subset must be a proper subset".into(),
            ));
        }
        let n = self.n_qubits();
        let mask: usize = pos.iter().map(|&p| 1usize << bit_of(n, p)).sum();
        let dim = self.dim();
        let mat = DMatrix::from_fn(dim, dim, |i, j| {
            self.mat[((i & !mask) | (j & mask), (j & !mask) | (i & mask))]
        });
        Ok(HermitianOp { labels: self.labels.clone(), mat })
    }

}

/// A Hermitian operator over a labeled register that is not necessarily
/// positive; what a partial transpose returns.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOp {
    labels: Vec<QubitLabel>,
    mat: DMatrix<Complex64>,
}

impl HermitianOp {
    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    /// Real spectrum, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.mat)
    }

    /// Undo/redo: transposing the same subset twice is the identity.
    pub fn partial_transpose(&self, subset: &[QubitLabel]) -> Result<HermitianOp> {
        let tmp = DensityMatrix { labels: self.labels.clone(), mat: self.mat.clone() };
        tmp.partial_transpose(subset)
    }
}
