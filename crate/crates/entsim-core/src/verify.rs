//! The built-in oracle suite behind `simcli verify`.
//!
//! Two independent routes exist for every load-bearing quantity: the closed
//! amplitude against the integro-differential integrator, and the numeric
//! entanglement pipeline against the damped-W closed forms and the pure-state
//! values. This module runs all of them and reports per-check outcomes.

use crate::amplitude::{self, oracle_grid, volterra_oracle};
use crate::entanglement::{self, w4_pure_measure, w_closed_form_ea, w_closed_form_er};
use crate::error::Result;
use crate::qstate::QubitLabel;
use crate::states::{evolved_state, InitialStateKind};
use crate::sweep::Preset;

/// Tolerance on closed-form vs integrator amplitude agreement.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-6;

/// Tolerance on pipeline vs closed-form measure agreement.
pub const MEASURE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: String) -> Self {
        Self { name: name.into(), passed, detail }
    }
}

/// Closed-form amplitude vs the integro-differential integrator on one
/// preset's parameters, over a stability-compliant refinement of the preset
/// grid.
fn check_amplitude_oracle(preset: Preset) -> Result<CheckOutcome> {
    let params = preset.reservoir_params();
    let grid = oracle_grid(&params, preset.t_max(), 2000);
    let oracle = volterra_oracle(&params, &grid)?;
    let mut worst = 0.0f64;
    for (&t, &o) in grid.iter().zip(&oracle) {
        let diff = (amplitude::nu(t, &params)?.nu - o).norm();
        worst = worst.max(diff);
    }
    Ok(CheckOutcome::new(
        format!("amplitude-oracle {}", preset.name()),
        worst < AMPLITUDE_TOLERANCE,
        format!("max |closed - integrated| = {worst:.3e} over {} points", grid.len()),
    ))
}

fn measure_both(kind: InitialStateKind, nu_sq: f64) -> Result<(f64, f64)> {
    let amp = amplitude::AmplitudeState::from_nu(0.0, nu_sq.sqrt().into())?;
    let n = kind.n_atoms();
    let state = evolved_state(kind, &amp)?;
    let atoms: Vec<QubitLabel> = (0..n).map(QubitLabel::atom).collect();
    let reservoirs: Vec<QubitLabel> = (0..n).map(QubitLabel::reservoir).collect();
    let e_a = entanglement::measure(&state.partial_trace(&atoms)?)?.total;
    let e_r = entanglement::measure(&state.partial_trace(&reservoirs)?)?.total;
    Ok((e_a, e_r))
}

/// Numeric pipeline vs the damped-W closed forms at 50 populations.
fn check_w_closed_forms() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for k in 0..50 {
        let u = k as f64 / 49.0;
        let (e_a, e_r) = measure_both(InitialStateKind::W(4), u)?;
        worst = worst.max((e_a - w_closed_form_ea(u)?).abs());
        worst = worst.max((e_r - w_closed_form_er(u)?).abs());
    }
    Ok(CheckOutcome::new(
        "w-closed-forms",
        worst < MEASURE_TOLERANCE,
        format!("max |pipeline - closed| = {worst:.3e} at 50 populations"),
    ))
}

/// Pipeline values of the four pure initial states against their exact
/// measures.
fn check_pure_state_values() -> Result<Vec<CheckOutcome>> {
    let expected = [
        (InitialStateKind::W(4), w4_pure_measure()),
        (InitialStateKind::Ghz4, 2.0 / 3.0),
        (InitialStateKind::Dicke4, 7.0 / 9.0),
        (InitialStateKind::Cluster4, 8.0 / 9.0),
    ];
    let mut out = Vec::new();
    for (kind, expect) in expected {
        let (e_a, e_r) = measure_both(kind, 1.0)?;
        let err = (e_a - expect).abs().max(e_r.abs());
        out.push(CheckOutcome::new(
            format!("pure-measure {kind}"),
            err < MEASURE_TOLERANCE,
            format!("E_a = {e_a:.12}, expected {expect:.12}, E_r = {e_r:.3e}"),
        ));
    }
    Ok(out)
}

/// Run the whole suite.
pub fn run_all() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for preset in [Preset::Fig1, Preset::Fig2, Preset::Fig3, Preset::Fig4, Preset::Fig5] {
        out.push(check_amplitude_oracle(preset)?);
    }
    out.push(check_w_closed_forms()?);
    out.extend(check_pure_state_values()?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_suite_passes() {
        let outcomes = run_all().unwrap();
        assert_eq!(outcomes.len(), 10);
        for o in &outcomes {
            assert!(o.passed, "{}: {}", o.name, o.detail);
        }
    }
}
