//! Time sweeps and their CSV form.
//!
//! A sweep walks a uniform time grid (times in units of `1/gamma0`), and for
//! every instant evaluates the amplitude, the decay rate, the evolved
//! register, the reduced states of both subsystems, and the entanglement
//! measure of each. Identical configurations produce byte-identical CSV.

use std::io::{BufRead, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::amplitude::{self, ReservoirParams};
use crate::entanglement;
use crate::error::{Error, Result};
use crate::qstate::QubitLabel;
use crate::states::{evolved_state, InitialStateKind};

/// The fixed leading CSV columns.
pub const CSV_HEADER: &str = "t,nu_re,nu_im,nu_abs2,gamma_t,E_a,E_r";

/// Named parameter sets, one per figure of the companion analysis. The time
/// extents are sized so each regime's qualitative features fit in frame; the
/// physics is pinned by `lambda` and `delta` alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Markovian: `lambda = 10 gamma0`, resonant.
    Fig1,
    /// Weak memory: `lambda = 0.1 gamma0`, resonant.
    Fig2,
    /// Strong memory: `lambda = 0.01 gamma0`, resonant.
    Fig3,
    /// Weak memory, detuned: `delta = 8 lambda`.
    Fig4,
    /// Strong memory, detuned: `delta = 8 lambda`.
    Fig5,
    /// The Fig3 grid again, used for decay-rate sign analyses.
    Fig6,
}

impl Preset {
    pub fn all() -> [Preset; 6] {
        [Preset::Fig1, Preset::Fig2, Preset::Fig3, Preset::Fig4, Preset::Fig5, Preset::Fig6]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
        }
    }

    /// Spectral width over `gamma0`.
    pub fn lambda(&self) -> f64 {
        match self {
            Preset::Fig1 => 10.0,
            Preset::Fig2 | Preset::Fig4 => 0.1,
            Preset::Fig3 | Preset::Fig5 | Preset::Fig6 => 0.01,
        }
    }

    /// Detuning over `gamma0`.
    pub fn delta(&self) -> f64 {
        match self {
            Preset::Fig1 | Preset::Fig2 | Preset::Fig3 | Preset::Fig6 => 0.0,
            Preset::Fig4 => 0.8,
            Preset::Fig5 => 0.08,
        }
    }

    /// Sweep extent in units of `1/gamma0`.
    pub fn t_max(&self) -> f64 {
        match self {
            Preset::Fig1 => 5.0,
            Preset::Fig2 => 100.0,
            Preset::Fig3 | Preset::Fig6 => 1000.0,
            Preset::Fig4 => 200.0,
            Preset::Fig5 => 2000.0,
        }
    }

    pub fn reservoir_params(&self) -> ReservoirParams {
        ReservoirParams::new(1.0, self.lambda(), self.delta())
            .expect("preset parameters are valid")
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Preset::Fig1),
            "fig2" => Ok(Preset::Fig2),
            "fig3" => Ok(Preset::Fig3),
            "fig4" => Ok(Preset::Fig4),
            "fig5" => Ok(Preset::Fig5),
            "fig6" => Ok(Preset::Fig6),
            other => Err(Error::InvalidConfig(format!("unknown preset '{other}'"))),
        }
    }
}

/// Which column groups a sweep computes. Columns that are switched off stay
/// in the header but are left empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmitSet {
    pub nu: bool,
    pub gamma: bool,
    pub ea: bool,
    pub er: bool,
    pub per_bipartition: bool,
}

impl Default for EmitSet {
    fn default() -> Self {
        Self { nu: true, gamma: true, ea: true, er: true, per_bipartition: false }
    }
}

impl EmitSet {
    /// Parse a comma-separated list of column groups: any subset of
    /// `nu`, `gamma`, `Ea`, `Er`, `per_bipartition`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut set = Self { nu: false, gamma: false, ea: false, er: false, per_bipartition: false };
        for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match token {
                "nu" => set.nu = true,
                "gamma" => set.gamma = true,
                "Ea" => set.ea = true,
                "Er" => set.er = true,
                "per_bipartition" => set.per_bipartition = true,
                other => {
                    return Err(Error::InvalidConfig(format!("unknown emit column '{other}'")))
                }
            }
        }
        Ok(set)
    }
}

impl std::fmt::Display for EmitSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.nu {
            parts.push("nu");
        }
        if self.gamma {
            parts.push("gamma");
        }
        if self.ea {
            parts.push("Ea");
        }
        if self.er {
            parts.push("Er");
        }
        if self.per_bipartition {
            parts.push("per_bipartition");
        }
        f.write_str(&parts.join(","))
    }
}

/// Everything a sweep needs. Times and rates are in `gamma0` units.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub state: InitialStateKind,
    pub lambda_over_gamma0: f64,
    pub delta_over_gamma0: f64,
    pub t_max: f64,
    pub n_points: usize,
    pub emit: EmitSet,
}

impl SweepConfig {
    pub const DEFAULT_N_POINTS: usize = 2000;

    pub fn from_preset(preset: Preset, state: InitialStateKind) -> Self {
        Self {
            state,
            lambda_over_gamma0: preset.lambda(),
            delta_over_gamma0: preset.delta(),
            t_max: preset.t_max(),
            n_points: Self::DEFAULT_N_POINTS,
            emit: EmitSet::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_over_gamma0 > 0.0) || !self.lambda_over_gamma0.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "lambda_over_gamma0 must be positive, got {}",
                self.lambda_over_gamma0
            )));
        }
        if !(self.delta_over_gamma0 >= 0.0) || !self.delta_over_gamma0.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "delta_over_gamma0 must be nonnegative, got {}",
                self.delta_over_gamma0
            )));
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(Error::InvalidConfig(format!("t_max must be positive, got {}", self.t_max)));
        }
        if self.n_points < 2 {
            return Err(Error::InvalidConfig(format!(
                "n_points must be at least 2, got {}",
                self.n_points
            )));
        }
        Ok(())
    }

    pub fn reservoir_params(&self) -> Result<ReservoirParams> {
        ReservoirParams::new(1.0, self.lambda_over_gamma0, self.delta_over_gamma0)
    }

    pub fn time_grid(&self) -> Vec<f64> {
        amplitude::time_grid(self.t_max, self.n_points)
    }
}

/// One grid instant of a sweep. `None` marks a value that is either undefined
/// there (the decay rate at a zero of `nu`) or not requested by the emit set.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub nu_re: Option<f64>,
    pub nu_im: Option<f64>,
    pub nu_abs2: Option<f64>,
    pub gamma_t: Option<f64>,
    pub e_a: Option<f64>,
    pub e_r: Option<f64>,
    pub per_bipartition: Vec<f64>,
}

/// A completed sweep: the rows plus the bipartition column labels when
/// per-bipartition output was requested.
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub bipartition_columns: Vec<String>,
}

/// Run the sweep. Rows are independent and evaluated in parallel, then
/// assembled in grid order, so output is deterministic.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutput> {
    config.validate()?;
    let params = config.reservoir_params()?;
    let grid = config.time_grid();
    let emit = config.emit;
    let kind = config.state;

    let bipartition_columns = if emit.per_bipartition {
        let n = kind.n_atoms();
        let mut cols = Vec::new();
        for m in 1..=n / 2 {
            for part in entanglement::enumerate_bipartitions(n, m)? {
                cols.push(part.column_name());
            }
        }
        cols
    } else {
        Vec::new()
    };

    let rows: Result<Vec<SweepRow>> = grid
        .par_iter()
        .map(|&t| -> Result<SweepRow> {
            let amp = amplitude::nu(t, &params)?;
            let mut row = SweepRow {
                t,
                nu_re: None,
                nu_im: None,
                nu_abs2: None,
                gamma_t: None,
                e_a: None,
                e_r: None,
                per_bipartition: Vec::new(),
            };
            if emit.nu {
                row.nu_re = Some(amp.nu.re);
                row.nu_im = Some(amp.nu.im);
                row.nu_abs2 = Some(amp.nu_abs2());
            }
            if emit.gamma {
                row.gamma_t = amplitude::decay_rate(t, &params)?;
            }
            if emit.ea || emit.er || emit.per_bipartition {
                let n = kind.n_atoms();
                let state = evolved_state(kind, &amp)?;
                if emit.ea || emit.per_bipartition {
                    let atoms: Vec<QubitLabel> = (0..n).map(QubitLabel::atom).collect();
                    let rho_a = state.partial_trace(&atoms)?;
                    let report = entanglement::measure(&rho_a)?;
                    if emit.ea {
                        row.e_a = Some(report.total);
                    }
                    if emit.per_bipartition {
                        row.per_bipartition =
                            report.per_bipartition.iter().map(|(_, e)| *e).collect();
                    }
                }
                if emit.er {
                    let reservoirs: Vec<QubitLabel> =
                        (0..n).map(QubitLabel::reservoir).collect();
                    let rho_r = state.partial_trace(&reservoirs)?;
                    row.e_r = Some(entanglement::measure(&rho_r)?.total);
                }
            }
            Ok(row)
        })
        .collect();

    Ok(SweepOutput { rows: rows?, bipartition_columns })
}

fn format_value(v: Option<f64>) -> String {
    match v {
        // 12 significant digits
        Some(x) => format!("{x:.11e}"),
        None => String::new(),
    }
}

/// Write the sweep as CSV. The leading seven columns are fixed; bipartition
/// columns, when present, are appended after them.
pub fn write_csv<W: Write>(out: &SweepOutput, w: &mut W) -> Result<()> {
    let mut header = String::from(CSV_HEADER);
    for col in &out.bipartition_columns {
        header.push(',');
        header.push_str(col);
    }
    writeln!(w, "{header}")?;
    for row in &out.rows {
        let mut line = format!(
            "{},{},{},{},{},{},{}",
            format_value(Some(row.t)),
            format_value(row.nu_re),
            format_value(row.nu_im),
            format_value(row.nu_abs2),
            format_value(row.gamma_t),
            format_value(row.e_a),
            format_value(row.e_r),
        );
        for v in &row.per_bipartition {
            line.push(',');
            line.push_str(&format_value(Some(*v)));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

fn parse_field(field: &str, line_no: usize) -> Result<Option<f64>> {
    let field = field.trim();
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse::<f64>()
        .map(Some)
        .map_err(|_| Error::CsvParse(format!("bad number '{field}' on line {line_no}")))
}

/// Read a sweep back from CSV produced by [`write_csv`].
pub fn read_csv<R: BufRead>(r: R) -> Result<SweepOutput> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::CsvParse("empty input".into()))??;
    let names: Vec<&str> = header.trim().split(',').collect();
    let fixed: Vec<&str> = CSV_HEADER.split(',').collect();
    if names.len() < fixed.len() || names[..fixed.len()] != fixed[..] {
        return Err(Error::CsvParse(format!("unexpected header '{header}'")));
    }
    let bipartition_columns: Vec<String> =
        names[fixed.len()..].iter().map(|s| s.to_string()).collect();

    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let line_no = i + 2;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != names.len() {
            return Err(Error::CsvParse(format!(
                "line {line_no} has {} fields, expected {}",
                fields.len(),
                names.len()
            )));
        }
        let t = parse_field(fields[0], line_no)?
            .ok_or_else(|| Error::CsvParse(format!("missing t on line {line_no}")))?;
        let mut per_bipartition = Vec::new();
        for f in &fields[fixed.len()..] {
            per_bipartition.push(parse_field(f, line_no)?.ok_or_else(|| {
                Error::CsvParse(format!("missing bipartition value on line {line_no}"))
            })?);
        }
        rows.push(SweepRow {
            t,
            nu_re: parse_field(fields[1], line_no)?,
            nu_im: parse_field(fields[2], line_no)?,
            nu_abs2: parse_field(fields[3], line_no)?,
            gamma_t: parse_field(fields[4], line_no)?,
            e_a: parse_field(fields[5], line_no)?,
            e_r: parse_field(fields[6], line_no)?,
            per_bipartition,
        });
    }
    Ok(SweepOutput { rows, bipartition_columns })
}

/// Convenience for analyses that only need `nu(t)` on a grid.
pub fn nu_on_grid(params: &ReservoirParams, grid: &[f64]) -> Result<Vec<Complex64>> {
    grid.iter().map(|&t| Ok(amplitude::nu(t, params)?.nu)).collect()
}
