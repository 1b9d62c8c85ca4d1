//! Bipartition-averaged negativity.
//!
//! The multipartite measure used throughout the crate: for each split of the
//! `N` parties into `m` and `N - m` qubits, take the normalized negativity
//! `E(i) = 2/(2^m - 1) * sum |negative eigenvalues of the partial transpose|`,
//! average over all nonequivalent splits of a given `m`, then average those
//! size averages over `m = 1..floor(N/2)`. Closed forms for the damped W
//! state serve as oracles for the whole numeric pipeline.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::qstate::DensityMatrix;

/// Eigenvalues below this count as genuinely negative in the negativity sum;
/// anything above is eigensolver noise on a PPT state.
pub const NEGATIVE_EIGENVALUE_THRESHOLD: f64 = -1e-12;

/// One split of `n_parties` qubits into a small side of `m` and the rest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    small_side: Vec<usize>,
    n_parties: usize,
}

impl Bipartition {
    /// Build from the small-side party indices. Requires
    /// `1 <= m <= floor(n/2)`, indices unique and in `0..n_parties`.
    pub fn new(mut small_side: Vec<usize>, n_parties: usize) -> Result<Self> {
        small_side.sort_unstable();
        let m = small_side.len();
        if m == 0 || 2 * m > n_parties {
            return Err(Error::InvalidSubset(format!(
                "side size {m} out of range for {n_parties} parties"
            )));
        }
        if small_side.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubset("repeated party index".into()));
        }
        if small_side.iter().any(|&i| i >= n_parties) {
            return Err(Error::InvalidSubset("party index out of range".into()));
        }
        Ok(Self { small_side, n_parties })
    }

    pub fn m(&self) -> usize {
        self.small_side.len()
    }

    pub fn small_side(&self) -> &[usize] {
        &self.small_side
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    /// Column name used in CSV output, e.g. `E_b_02` for parties {0, 2}.
    pub fn column_name(&self) -> String {
        let mut s = String::from("E_b_");
        for i in &self.small_side {
            s.push_str(&i.to_string());
        }
        s
    }
}

impl std::fmt::Display for Bipartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let small: String = self.small_side.iter().map(|i| i.to_string()).collect();
        let rest: String = (0..self.n_parties)
            .filter(|i| !self.small_side.contains(i))
            .map(|i| i.to_string())
            .collect();
        write!(f, "{small}|{rest}")
    }
}

/// All nonequivalent `m | n-m` splits. A split and its complement are the
/// same cut, so at the symmetric point `m = n/2` only the representative
/// containing party 0 is kept (half of the raw subset count).
pub fn enumerate_bipartitions(n: usize, m: usize) -> Result<Vec<Bipartition>> {
    if m == 0 || 2 * m > n {
        return Err(Error::InvalidSubset(format!(
            "side size {m} out of range for {n} parties"
        )));
    }
    Ok((0..n)
        .combinations(m)
        .filter(|s| 2 * m < n || s.contains(&0))
        .map(|s| Bipartition { small_side: s, n_parties: n })
        .collect())
}

/// Normalized negativity of `rho` across one bipartition: the small side is
/// partially transposed, the Hermitian result eigendecomposed, and the
/// absolute values of the negative eigenvalues summed and scaled by
/// `2/(2^m - 1)` so that a maximally entangled cut scores 1.
pub fn negativity(rho: &DensityMatrix, part: &Bipartition) -> Result<f64> {
    if rho.n_qubits() != part.n_parties {
        return Err(Error::DimensionMismatch(format!(
            "state has {} parties, bipartition expects {}",
            rho.n_qubits(),
            part.n_parties
        )));
    }
    let labels: Vec<_> = part.small_side.iter().map(|&i| rho.labels()[i]).collect();
    let pt = rho.partial_transpose(&labels)?;
    let neg_sum: f64 = pt
        .eigenvalues()
        .into_iter()
        .filter(|&e| e < NEGATIVE_EIGENVALUE_THRESHOLD)
        .map(f64::abs)
        .sum();
    Ok(2.0 / ((1usize << part.m()) as f64 - 1.0) * neg_sum)
}

/// Negativities of every nonequivalent bipartition, their per-size averages,
/// and the overall bipartition-averaged measure.
#[derive(Debug, Clone)]
pub struct EntanglementReport {
    pub per_bipartition: Vec<(Bipartition, f64)>,
    /// `(m, average over the m-sized cuts)`, ascending in `m`.
    pub per_size: Vec<(usize, f64)>,
    pub total: f64,
}

/// Evaluate the full measure for a state of 4 to 6 parties.
pub fn measure(rho: &DensityMatrix) -> Result<EntanglementReport> {
    let n = rho.n_qubits();
    if !(4..=6).contains(&n) {
        return Err(Error::UnsupportedPartyCount(n));
    }
    let half = n / 2;
    let mut per_bipartition = Vec::new();
    let mut per_size = Vec::new();
    for m in 1..=half {
        let parts = enumerate_bipartitions(n, m)?;
        let mut acc = 0.0;
        for part in parts {
            let e = negativity(rho, &part)?;
            acc += e;
            per_bipartition.push((part, e));
        }
        let count = per_bipartition.iter().filter(|(p, _)| p.m() == m).count();
        per_size.push((m, acc / count as f64));
    }
    let total = per_size.iter().map(|(_, e)| e).sum::<f64>() / half as f64;
    Ok(EntanglementReport { per_bipartition, per_size, total })
}

fn check_unit_interval(u: f64) -> Result<f64> {
    // Allow the same round-off slack the amplitude physicality bound does.
    if !u.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&u) {
        return Err(Error::OutOfRange(format!("|nu|^2 must lie in [0, 1], got {u}")));
    }
    Ok(u.clamp(0.0, 1.0))
}

/// Closed form for the atomic-side measure of the damped 4-qubit W state as a
/// function of `u = |nu(t)|^2`:
///
/// `E_a = |16 - 16u - (6 sqrt(7u^2 - 8u + 4) + 4 sqrt(2u^2 - 2u + 1))| / 24`.
pub fn w_closed_form_ea(nu_sq: f64) -> Result<f64> {
    let u = check_unit_interval(nu_sq)?;
    let bracket = 16.0 - 16.0 * u
        - (6.0 * (7.0 * u * u - 8.0 * u + 4.0).sqrt() + 4.0 * (2.0 * u * u - 2.0 * u + 1.0).sqrt());
    Ok(bracket.abs() / 24.0)
}

/// Closed form for the reservoir-side measure of the damped 4-qubit W state:
///
/// `E_r = |16u - (6 sqrt(7u^2 - 6u + 3) + 4 sqrt(2u^2 - 2u + 1))| / 24`.
///
/// Algebraically `E_r(u) = E_a(1 - u)`.
pub fn w_closed_form_er(nu_sq: f64) -> Result<f64> {
    let u = check_unit_interval(nu_sq)?;
    let bracket = 16.0 * u
        - (6.0 * (7.0 * u * u - 6.0 * u + 3.0).sqrt() + 4.0 * (2.0 * u * u - 2.0 * u + 1.0).sqrt());
    Ok(bracket.abs() / 24.0)
}

/// The shared `t = 0` value `E_a = (6 sqrt(3) + 4) / 24` of the pure 4-qubit
/// W state.
pub fn w4_pure_measure() -> f64 {
    (6.0 * 3f64.sqrt() + 4.0) / 24.0
}
