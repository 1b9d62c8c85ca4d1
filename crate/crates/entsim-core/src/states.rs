//! Initial multiqubit states and their evolution under independent pair maps.
//!
//! Ket strings follow the register convention of [`crate::qstate`]: the
//! leftmost character is atom 0 and the most significant bit.

use num_complex::Complex64;

use crate::amplitude::AmplitudeState;
use crate::error::{Error, Result};
use crate::qstate::{PureState, QubitLabel};

/// The supported initial atomic states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitialStateKind {
    /// Single-excitation W state on `n` atoms, `n` in 4..=6.
    W(usize),
    Ghz4,
    Dicke4,
    Cluster4,
}

impl InitialStateKind {
    pub fn n_atoms(&self) -> usize {
        match self {
            InitialStateKind::W(n) => *n,
            _ => 4,
        }
    }

    /// The CLI-facing name.
    pub fn name(&self) -> &'static str {
        match self {
            InitialStateKind::W(4) => "w4",
            InitialStateKind::W(5) => "w5",
            InitialStateKind::W(6) => "w6",
            InitialStateKind::W(_) => unreachable!("constructor enforces n in 4..=6"),
            InitialStateKind::Ghz4 => "ghz4",
            InitialStateKind::Dicke4 => "dicke4",
            InitialStateKind::Cluster4 => "cluster4",
        }
    }

    pub fn all() -> [InitialStateKind; 6] {
        [
            InitialStateKind::W(4),
            InitialStateKind::W(5),
            InitialStateKind::W(6),
            InitialStateKind::Ghz4,
            InitialStateKind::Dicke4,
            InitialStateKind::Cluster4,
        ]
    }

    /// The four 4-atom states compared throughout the robustness analyses.
    pub fn four_qubit_family() -> [InitialStateKind; 4] {
        [
            InitialStateKind::W(4),
            InitialStateKind::Ghz4,
            InitialStateKind::Dicke4,
            InitialStateKind::Cluster4,
        ]
    }
}

impl std::str::FromStr for InitialStateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "w4" => Ok(InitialStateKind::W(4)),
            "w5" => Ok(InitialStateKind::W(5)),
            "w6" => Ok(InitialStateKind::W(6)),
            "ghz4" => Ok(InitialStateKind::Ghz4),
            "dicke4" => Ok(InitialStateKind::Dicke4),
            "cluster4" => Ok(InitialStateKind::Cluster4),
            other => Err(Error::UnknownState(other.to_string())),
        }
    }
}

impl std::fmt::Display for InitialStateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn atom_labels(n: usize) -> Vec<QubitLabel> {
    (0..n).map(QubitLabel::atom).collect()
}

/// `(|0..01> + |0..10> + ... + |10..0>) / sqrt(n)` on `n` atoms.
pub fn w_state(n: usize) -> Result<PureState> {
    if !(4..=6).contains(&n) {
        return Err(Error::UnknownState(format!("w{n}")));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    let a = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    for i in 0..n {
        amps[1usize << i] = a;
    }
    PureState::new(atom_labels(n), amps)
}

/// `(|0000> + |1111>) / sqrt(2)`.
pub fn ghz4() -> PureState {
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[0b0000] = a;
    amps[0b1111] = a;
    PureState::new(atom_labels(4), amps).expect("ghz4 is normalized")
}

/// The six two-excitation kets of four qubits, equally weighted:
/// `(|0011> + |0101> + |1001> + |1100> + |0110> + |1010>) / sqrt(6)`.
pub fn dicke4() -> PureState {
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    let a = Complex64::new(1.0 / 6f64.sqrt(), 0.0);
    for idx in [0b0011, 0b0101, 0b1001, 0b1100, 0b0110, 0b1010] {
        amps[idx] = a;
    }
    PureState::new(atom_labels(4), amps).expect("dicke4 is normalized")
}

/// `(|0000> + |0011> + |1100> - |1111>) / 2`.
pub fn cluster4() -> PureState {
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    amps[0b0000] = Complex64::new(0.5, 0.0);
    amps[0b0011] = Complex64::new(0.5, 0.0);
    amps[0b1100] = Complex64::new(0.5, 0.0);
    amps[0b1111] = Complex64::new(-0.5, 0.0);
    PureState::new(atom_labels(4), amps).expect("cluster4 is normalized")
}

/// Construct the initial atomic state for `kind`.
pub fn initial_state(kind: InitialStateKind) -> Result<PureState> {
    match kind {
        InitialStateKind::W(n) => w_state(n),
        InitialStateKind::Ghz4 => Ok(ghz4()),
        InitialStateKind::Dicke4 => Ok(dicke4()),
        InitialStateKind::Cluster4 => Ok(cluster4()),
    }
}

/// The full atom+reservoir state at one instant: the initial atomic state is
/// tensored with all-vacuum reservoirs and the pair map is applied once per
/// `(atom_i, reservoir_i)` pair with the same amplitude (identical
/// independent reservoirs). Register order: atoms 0..n, then reservoirs 0..n.
pub fn evolved_state(kind: InitialStateKind, amp: &AmplitudeState) -> Result<PureState> {
    let n = kind.n_atoms();
    let atoms = initial_state(kind)?;
    let vacuum = PureState::basis((0..n).map(QubitLabel::reservoir).collect(), 0)?;
    let mut state = atoms.tensor(&vacuum)?;
    for i in 0..n {
        state = state.apply_pair_isometry(QubitLabel::atom(i), QubitLabel::reservoir(i), amp)?;
    }
    Ok(state)
}
