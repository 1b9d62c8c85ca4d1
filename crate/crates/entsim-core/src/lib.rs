//! Exact decoherence dynamics of multiqubit entanglement in independent
//! lossy structured reservoirs.
//!
//! Each of `N` two-level emitters exchanges a single excitation with its own
//! zero-temperature reservoir whose coupling spectrum is a detuned
//! Lorentzian. The exchange is exactly solvable: the excited-state amplitude
//! `nu(t)` obeys a memory-kernel equation with closed solution, and each
//! reservoir collapses to one effective qubit holding the collective
//! single-excitation mode. The crate evaluates that amplitude, builds the
//! evolved `2N`-qubit register, reduces it to either subsystem, and scores
//! multipartite entanglement by negativity averaged over all nonequivalent
//! bipartitions.
//!
//! Modules:
//!
//! - [`amplitude`]: the closed-form amplitude, decay rate, memory kernel,
//!   spectral density, and an independent integro-differential integrator.
//! - [`qstate`]: labeled dense registers, the pair exchange map, partial
//!   trace and partial transpose.
//! - [`states`]: the W / GHZ / Dicke / cluster initial states and the evolved
//!   total state.
//! - [`entanglement`]: bipartition enumeration, normalized negativity, the
//!   averaged measure, and the damped-W closed forms.
//! - [`sweep`]: regime presets, time sweeps, CSV emission.
//! - [`analysis`]: revival detection, robustness ranking, decay-rate sign
//!   correlation.
//! - [`verify`]: the oracle suite wired to `simcli verify`.

pub mod amplitude;
pub mod analysis;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod qstate;
pub mod states;
pub mod sweep;
pub mod verify;

pub use amplitude::{
    chi, decay_exponent, decay_rate, kernel, nu, nu_dot, spectral_density, volterra_oracle,
    AmplitudeState, ChiParam, ReservoirParams,
};
pub use analysis::{
    gamma_sign_correlation, revival_metrics, robustness_ordering, Revival, RobustnessEntry,
    RobustnessReport,
};
pub use entanglement::{
    enumerate_bipartitions, measure, negativity, w_closed_form_ea, w_closed_form_er, Bipartition,
    EntanglementReport,
};
pub use error::{Error, Result};
pub use qstate::{DensityMatrix, HermitianOp, PureState, QubitLabel, QubitRole};
pub use states::{cluster4, dicke4, evolved_state, ghz4, initial_state, w_state, InitialStateKind};
pub use sweep::{read_csv, run_sweep, write_csv, EmitSet, Preset, SweepConfig, SweepOutput, SweepRow};
