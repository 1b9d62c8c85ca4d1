//! Derived analyses on sweep output: revival detection, robustness ranking
//! of the initial states, and the correlation between the sign of the decay
//! rate and the slope of the atomic entanglement.

use crate::error::{Error, Result};
use crate::states::InitialStateKind;
use crate::sweep::{run_sweep, EmitSet, Preset, SweepConfig, SweepRow};

/// Hysteresis threshold of the valley/peak detector.
pub const REVIVAL_HYSTERESIS: f64 = 1e-3;

/// `|gamma|` must exceed this (in `gamma0` units) for a point to count in the
/// sign correlation.
pub const GAMMA_MIN: f64 = 1e-3;

/// `E_a` must exceed this for a point to count in the sign correlation.
pub const EA_MIN: f64 = 1e-4;

/// `|dE_a/dt|` must exceed this for a point to count in the sign correlation.
pub const SLOPE_MIN: f64 = 1e-6;

/// One detected revival: the valley it starts from, the peak it reaches, and
/// the height climbed between them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Revival {
    pub t_min: f64,
    pub t_peak: f64,
    pub amplitude: f64,
}

/// Scan the `E_a` series for valleys followed by rises of at least
/// [`REVIVAL_HYSTERESIS`]. A revival closes when the curve falls back by the
/// same threshold (or the series ends while still risen). Rows without an
/// `E_a` value are skipped; a monotone decay yields the empty list.
pub fn revival_metrics(rows: &[SweepRow]) -> Vec<Revival> {
    let series: Vec<(f64, f64)> =
        rows.iter().filter_map(|r| r.e_a.map(|e| (r.t, e))).collect();
    let mut out = Vec::new();
    if series.is_empty() {
        return out;
    }

    enum Phase {
        Descending,
        Ascending,
    }
    let mut phase = Phase::Descending;
    let (mut min_t, mut min_v) = series[0];
    let (mut max_t, mut max_v) = series[0];
    for &(t, e) in &series[1..] {
        match phase {
            Phase::Descending => {
                if e < min_v {
                    min_v = e;
                    min_t = t;
                } else if e - min_v >= REVIVAL_HYSTERESIS {
                    phase = Phase::Ascending;
                    max_v = e;
                    max_t = t;
                }
            }
            Phase::Ascending => {
                if e > max_v {
                    max_v = e;
                    max_t = t;
                } else if max_v - e >= REVIVAL_HYSTERESIS {
                    out.push(Revival { t_min: min_t, t_peak: max_t, amplitude: max_v - min_v });
                    phase = Phase::Descending;
                    min_v = e;
                    min_t = t;
                }
            }
        }
    }
    if let Phase::Ascending = phase {
        out.push(Revival { t_min: min_t, t_peak: max_t, amplitude: max_v - min_v });
    }
    out
}

/// Per-state summary built by [`robustness_ordering`].
#[derive(Debug, Clone, Copy)]
pub struct RobustnessEntry {
    pub state: InitialStateKind,
    /// Raw measure at `t = 0`.
    pub e_a0: f64,
    /// First time the normalized curve `E_a(t)/E_a(0)` falls below 1/2
    /// (interpolated between grid points); `None` if it never does.
    pub half_life: Option<f64>,
    /// Normalized value at the last grid point.
    pub final_normalized: f64,
}

/// Robustness ranking of the four 4-qubit states on a common grid.
#[derive(Debug, Clone)]
pub struct RobustnessReport {
    /// Most robust first.
    pub ranking: Vec<RobustnessEntry>,
    /// All states indistinguishable on this grid (e.g. the single point
    /// `t = 0`, where every normalized curve is 1).
    pub tied: bool,
    /// Whether the cluster state's normalized curve stays at or above every
    /// other state's at every grid point past `t = 0` (margin `-1e-9`).
    pub cluster_dominates: bool,
}

fn half_life(grid: &[f64], normalized: &[f64]) -> Option<f64> {
    for i in 1..normalized.len() {
        if normalized[i] < 0.5 {
            let (t0, t1) = (grid[i - 1], grid[i]);
            let (v0, v1) = (normalized[i - 1], normalized[i]);
            return Some(t0 + (0.5 - v0) / (v1 - v0) * (t1 - t0));
        }
    }
    None
}

/// Rank the four 4-qubit initial states by how slowly their normalized
/// atomic entanglement decays on `t_grid` under the preset's reservoir.
///
/// States are ordered by the half-life of the normalized curve (longer is
/// more robust; states that never cross 1/2 rank above all that do, ordered
/// by their final normalized value). The report also carries the strict
/// pointwise-dominance verdict for the cluster state.
pub fn robustness_ordering(preset: Preset, t_grid: &[f64]) -> Result<RobustnessReport> {
    if t_grid.is_empty() {
        return Err(Error::InvalidGrid("empty time grid".into()));
    }
    if t_grid[0] != 0.0 {
        return Err(Error::InvalidGrid("grid must start at 0".into()));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("grid must be strictly ascending".into()));
    }

    let params = preset.reservoir_params();
    let mut curves = Vec::new();
    for state in InitialStateKind::four_qubit_family() {
        // The measure depends on t only through |nu(t)|^2, so reuse the grid
        // amplitudes across states via a direct sweep at matching points.
        let config = SweepConfig {
            state,
            lambda_over_gamma0: params.lambda,
            delta_over_gamma0: params.delta,
            t_max: *t_grid.last().unwrap(),
            n_points: t_grid.len().max(2),
            emit: EmitSet::parse("Ea")?,
        };
        let e_a: Vec<f64> = if t_grid.len() == 1 {
            vec![measure_at(state, 0.0, &params)?]
        } else if grid_is_uniform(t_grid) {
            run_sweep(&config)?.rows.into_iter().map(|r| r.e_a.unwrap()).collect()
        } else {
            t_grid.iter().map(|&t| measure_at(state, t, &params)).collect::<Result<_>>()?
        };
        let e_a0 = e_a[0];
        let normalized: Vec<f64> = e_a.iter().map(|e| e / e_a0).collect();
        curves.push((state, e_a0, normalized));
    }

    let entries: Vec<RobustnessEntry> = curves
        .iter()
        .map(|(state, e_a0, normalized)| RobustnessEntry {
            state: *state,
            e_a0: *e_a0,
            half_life: half_life(t_grid, normalized),
            final_normalized: *normalized.last().unwrap(),
        })
        .collect();

    let mut ranking = entries.clone();
    ranking.sort_by(|a, b| match (a.half_life, b.half_life) {
        (None, None) => b.final_normalized.partial_cmp(&a.final_normalized).unwrap(),
        (None, Some(_)) => std::cmp::Ordering::Less,
        (Some(_), None) => std::cmp::Ordering::Greater,
        (Some(x), Some(y)) => y.partial_cmp(&x).unwrap(),
    });

    let tied = entries.iter().all(|e| e.half_life.is_none())
        && entries
            .iter()
            .all(|e| (e.final_normalized - entries[0].final_normalized).abs() <= 1e-12);

    let cluster = &curves
        .iter()
        .find(|(s, _, _)| *s == InitialStateKind::Cluster4)
        .expect("cluster is in the family")
        .2;
    let cluster_dominates = curves.iter().all(|(state, _, normalized)| {
        *state == InitialStateKind::Cluster4
            || normalized
                .iter()
                .zip(cluster.iter())
                .skip(1)
                .all(|(other, cl)| cl - other >= -1e-9)
    });

    Ok(RobustnessReport { ranking, tied, cluster_dominates })
}

fn grid_is_uniform(grid: &[f64]) -> bool {
    if grid.len() < 2 {
        return false;
    }
    let h = grid[1] - grid[0];
    let span = grid.last().unwrap().abs().max(1.0);
    grid.iter().enumerate().all(|(i, &t)| (t - i as f64 * h).abs() <= 1e-9 * span)
}

fn measure_at(
    state: InitialStateKind,
    t: f64,
    params: &crate::amplitude::ReservoirParams,
) -> Result<f64> {
    let amp = crate::amplitude::nu(t, params)?;
    let evolved = crate::states::evolved_state(state, &amp)?;
    let atoms: Vec<crate::qstate::QubitLabel> =
        (0..state.n_atoms()).map(crate::qstate::QubitLabel::atom).collect();
    Ok(crate::entanglement::measure(&evolved.partial_trace(&atoms)?)?.total)
}

/// Fraction of qualifying grid points at which the atomic entanglement moves
/// against the decay rate: `sign(dE_a/dt) == -sign(gamma)`.
///
/// Interior points qualify when `gamma` is defined with `|gamma| > 1e-3`,
/// `E_a > 1e-4`, and the central-difference slope exceeds `1e-6` in
/// magnitude. Returns `Ok(None)` when no point qualifies (e.g. the
/// zero-coupling limit where `gamma` vanishes identically), and an error when
/// the rows carry no decay-rate values at all.
pub fn gamma_sign_correlation(rows: &[SweepRow]) -> Result<Option<f64>> {
    if rows.iter().all(|r| r.gamma_t.is_none()) {
        return Err(Error::MissingGammaColumn);
    }
    let mut qualifying = 0usize;
    let mut matching = 0usize;
    for i in 1..rows.len().saturating_sub(1) {
        let (Some(gamma), Some(ea)) = (rows[i].gamma_t, rows[i].e_a) else {
            continue;
        };
        if gamma.abs() <= GAMMA_MIN || ea <= EA_MIN {
            continue;
        }
        let (Some(ea_prev), Some(ea_next)) = (rows[i - 1].e_a, rows[i + 1].e_a) else {
            continue;
        };
        let slope = (ea_next - ea_prev) / (rows[i + 1].t - rows[i - 1].t);
        if slope.abs() <= SLOPE_MIN {
            continue;
        }
        qualifying += 1;
        if slope.signum() == -gamma.signum() {
            matching += 1;
        }
    }
    if qualifying == 0 {
        return Ok(None);
    }
    Ok(Some(matching as f64 / qualifying as f64))
}
