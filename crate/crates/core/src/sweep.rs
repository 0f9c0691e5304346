//! Grid sweeps over `(pair, dx, t)` with CSV/JSONL output.
//!
//! Records are produced in a deterministic order (pair-major, then dx, then
//! t ascending); grid points are evaluated in parallel but emitted in that
//! order, and identical re-runs are bit-identical. Numbers serialize as
//! shortest round-trip decimals, so parsing an emitted file reproduces the
//! records exactly.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closedform::{report_against, DiscrepancyReport};
use crate::error::{Error, Result};
use crate::network::{DmVector, NetworkEvolution, NodePair};
use crate::steering::{negativity, steering_parameter, PauliAxis};

/// Fixed CSV header for sweep records.
pub const CSV_HEADER: &str = "pair,dx,t,h_x,h_y,h_z,i_s,negativity,steerable";

/// Fixed CSV header for discrepancy reports.
pub const DISCREPANCY_CSV_HEADER: &str = "pair,dx,t,trace_defect,max_entry_delta,min_eigenvalue";

/// Serialization format for sweep output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" => Ok(OutputFormat::Jsonl),
            other => Err(Error::Config(format!("unknown format `{other}`"))),
        }
    }
}

/// One grid point's outputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub pair: NodePair,
    pub dx: f64,
    pub t: f64,
    pub h_x: f64,
    pub h_y: f64,
    pub h_z: f64,
    /// Steering parameter `I_s = h_x + h_y + h_z` (bits).
    pub i_s: f64,
    pub negativity: f64,
    pub steerable: bool,
}

/// Sweep definition: which channels, which coupling strengths, which times.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub pairs: Vec<NodePair>,
    pub dx_values: Vec<f64>,
    pub t_min: f64,
    pub t_max: f64,
    /// Number of grid points including both endpoints (linspace semantics).
    pub t_steps: usize,
    /// Axis the DM vector points along; `x` for every figure preset.
    pub d_axis: PauliAxis,
    pub format: OutputFormat,
    /// Output file, or stdout when `None`.
    pub output: Option<PathBuf>,
    /// Also emit closed-form discrepancy reports for supported pairs.
    pub include_discrepancy: bool,
}

impl SweepConfig {
    /// Sweep over the given pairs and grids, CSV to stdout.
    pub fn new(pairs: Vec<NodePair>, dx_values: Vec<f64>, t_min: f64, t_max: f64, t_steps: usize) -> Self {
        Self {
            pairs,
            dx_values,
            t_min,
            t_max,
            t_steps,
            d_axis: PauliAxis::X,
            format: OutputFormat::Csv,
            output: None,
            include_discrepancy: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pairs.is_empty() {
            return Err(Error::Config("no node pairs given".into()));
        }
        if self.dx_values.is_empty() {
            return Err(Error::Config("dx grid is empty".into()));
        }
        for &dx in &self.dx_values {
            if !dx.is_finite() || dx < 0.0 {
                return Err(Error::Config(format!("dx must be finite and >= 0, got {dx}")));
            }
        }
        if !self.t_min.is_finite() || !self.t_max.is_finite() {
            return Err(Error::Config("time range must be finite".into()));
        }
        match self.t_steps {
            0 => return Err(Error::Config("t_steps must be at least 1".into())),
            1 => {
                if self.t_min != self.t_max {
                    return Err(Error::Config(
                        "a single-point time grid needs t_min == t_max".into(),
                    ));
                }
            }
            _ => {
                if self.t_min >= self.t_max {
                    return Err(Error::Config(format!(
                        "need t_min < t_max, got {} >= {}",
                        self.t_min, self.t_max
                    )));
                }
            }
        }
        Ok(())
    }

    /// The time grid, both endpoints included.
    pub fn t_grid(&self) -> Vec<f64> {
        linspace(self.t_min, self.t_max, self.t_steps)
    }

    /// Exact number of records a run will produce.
    pub fn record_count(&self) -> usize {
        self.pairs.len() * self.dx_values.len() * self.t_steps
    }

    fn dm_vector(&self, strength: f64) -> DmVector {
        match self.d_axis {
            PauliAxis::X => DmVector::x(strength),
            PauliAxis::Y => DmVector::y(strength),
            PauliAxis::Z => DmVector::z(strength),
        }
    }

    /// Single metadata line recording the grid actually used.
    fn metadata(&self) -> String {
        let pairs = self
            .pairs
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(";");
        let dx_min = self.dx_values.iter().cloned().fold(f64::INFINITY, f64::min);
        let dx_max = self.dx_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        format!(
            "pairs={pairs} dx_count={} dx_min={dx_min} dx_max={dx_max} t_min={} t_max={} t_steps={} axis={}",
            self.dx_values.len(),
            self.t_min,
            self.t_max,
            self.t_steps,
            self.d_axis
        )
    }
}

/// Evenly spaced grid with both endpoints landed exactly; a single point
/// when `n == 1`.
pub fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![min];
    }
    let step = (max - min) / (n - 1) as f64;
    (0..n)
        .map(|k| if k == n - 1 { max } else { min + step * k as f64 })
        .collect()
}

/// Figure presets: fixed grids for the four reference plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigurePreset {
    /// (2,3) surface: dx in (0,1] x 100, t in [0,50] x 200.
    Fig2,
    /// (2,3) line scans at dx = 0.03, 0.05, 0.1 over t in [0,300] x 3001.
    Fig3,
    /// (2,4) surface, same grid as fig2.
    Fig4,
    /// (2,4) line scans, same grid as fig3.
    Fig5,
}

impl FromStr for FigurePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fig2" => Ok(FigurePreset::Fig2),
            "fig3" => Ok(FigurePreset::Fig3),
            "fig4" => Ok(FigurePreset::Fig4),
            "fig5" => Ok(FigurePreset::Fig5),
            other => Err(Error::UnknownPreset(other.into())),
        }
    }
}

/// Line-scan coupling strengths shared by fig3 and fig5.
pub const LINE_SCAN_DX: [f64; 3] = [0.03, 0.05, 0.1];

/// Build the sweep configuration for a figure preset.
///
/// The reference plots carry no numeric axis ranges, so the surface grids
/// default to dx in (0,1] with 100 points and t in [0,50] with 200 points,
/// and the line scans cover t in [0,300] with 3001 points (step 0.1). The
/// grid in force is recorded in the output metadata line.
pub fn figure_preset(preset: FigurePreset) -> SweepConfig {
    let surface_dx: Vec<f64> = (1..=100).map(|k| k as f64 / 100.0).collect();
    let pair23 = NodePair::new(2, 3).expect("valid pair");
    let pair24 = NodePair::new(2, 4).expect("valid pair");
    match preset {
        FigurePreset::Fig2 => SweepConfig::new(vec![pair23], surface_dx, 0.0, 50.0, 200),
        FigurePreset::Fig3 => {
            SweepConfig::new(vec![pair23], LINE_SCAN_DX.to_vec(), 0.0, 300.0, 3001)
        }
        FigurePreset::Fig4 => SweepConfig::new(vec![pair24], surface_dx, 0.0, 50.0, 200),
        FigurePreset::Fig5 => {
            SweepConfig::new(vec![pair24], LINE_SCAN_DX.to_vec(), 0.0, 300.0, 3001)
        }
    }
}

/// Witnesses for one `(pair, dx, t)` grid point using a shared evolution.
pub fn evaluate_point(
    evolution: &NetworkEvolution,
    pair: NodePair,
    dx: f64,
    t: f64,
) -> SweepRecord {
    let channel = evolution.channel(pair, t);
    let breakdown = steering_parameter(&channel).expect("channel is two-qubit");
    let negativity = negativity(&channel).expect("channel is two-qubit");
    SweepRecord {
        pair,
        dx,
        t,
        h_x: breakdown.h_x,
        h_y: breakdown.h_y,
        h_z: breakdown.h_z,
        i_s: breakdown.total,
        negativity,
        steerable: breakdown.steerable,
    }
}

/// Compute all records for a config, in deterministic pair-major order.
///
/// Rows (one per `(pair, dx)`) are evaluated in parallel; each row shares a
/// single Hamiltonian eigendecomposition across its time grid.
pub fn sweep_records(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let t_grid = config.t_grid();
    let rows: Vec<(NodePair, f64)> = config
        .pairs
        .iter()
        .flat_map(|&pair| config.dx_values.iter().map(move |&dx| (pair, dx)))
        .collect();
    let nested: Vec<Vec<SweepRecord>> = rows
        .par_iter()
        .map(|&(pair, dx)| {
            let evolution = NetworkEvolution::new(&config.dm_vector(dx));
            t_grid
                .iter()
                .map(|&t| evaluate_point(&evolution, pair, dx, t))
                .collect()
        })
        .collect();
    Ok(nested.into_iter().flatten().collect())
}

/// Discrepancy reports over the same grid, for the pairs that have closed
/// forms ((2,3) and (2,4)); other pairs are skipped.
pub fn discrepancy_records(config: &SweepConfig) -> Result<Vec<DiscrepancyReport>> {
    config.validate()?;
    let t_grid = config.t_grid();
    let rows: Vec<(NodePair, f64)> = config
        .pairs
        .iter()
        .filter(|p| matches!((p.a(), p.b()), (2, 3) | (2, 4)))
        .flat_map(|&pair| config.dx_values.iter().map(move |&dx| (pair, dx)))
        .collect();
    let nested: Vec<Vec<DiscrepancyReport>> = rows
        .par_iter()
        .map(|&(pair, dx)| {
            let evolution = NetworkEvolution::new(&DmVector::x(dx));
            t_grid
                .iter()
                .map(|&t| {
                    let exact = evolution.channel(pair, t);
                    report_against(pair, dx, t, &exact).expect("pair was filtered to supported")
                })
                .collect()
        })
        .collect();
    Ok(nested.into_iter().flatten().collect())
}

/// Compute records and write them to the configured destination.
///
/// With `include_discrepancy`, reports go to a `.disc`-suffixed sidecar file
/// when writing to a file, or follow the records (after a blank line, with
/// their own header) on stdout.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    let records = sweep_records(config)?;
    let discrepancies = if config.include_discrepancy {
        Some(discrepancy_records(config)?)
    } else {
        None
    };

    match &config.output {
        Some(path) => {
            let mut writer = BufWriter::new(File::create(path)?);
            write_records(&mut writer, &records, config.format, Some(&config.metadata()))?;
            writer.flush()?;
            if let Some(reports) = &discrepancies {
                let mut sidecar = PathBuf::from(path);
                let mut name = sidecar.file_name().unwrap_or_default().to_os_string();
                name.push(".disc");
                sidecar.set_file_name(name);
                let mut writer = BufWriter::new(File::create(&sidecar)?);
                write_discrepancies(&mut writer, reports, config.format)?;
                writer.flush()?;
            }
        }
        None => {
            let stdout = io::stdout();
            let mut writer = stdout.lock();
            write_records(&mut writer, &records, config.format, Some(&config.metadata()))?;
            if let Some(reports) = &discrepancies {
                if config.format == OutputFormat::Csv {
                    writeln!(writer)?;
                }
                write_discrepancies(&mut writer, reports, config.format)?;
            }
            writer.flush()?;
        }
    }
    Ok(records)
}

fn csv_row(record: &SweepRecord) -> String {
    let mut line = String::new();
    let _ = write!(
        line,
        "{},{},{},{},{},{},{},{},{}",
        record.pair,
        record.dx,
        record.t,
        record.h_x,
        record.h_y,
        record.h_z,
        record.i_s,
        record.negativity,
        record.steerable
    );
    line
}

/// Write records in the chosen format. The optional metadata string becomes
/// a `#` comment line (CSV) or a `{"_meta": ...}` first line (JSONL).
pub fn write_records(
    writer: &mut impl Write,
    records: &[SweepRecord],
    format: OutputFormat,
    metadata: Option<&str>,
) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            if let Some(meta) = metadata {
                writeln!(writer, "# {meta}")?;
            }
            writeln!(writer, "{CSV_HEADER}")?;
            for record in records {
                writeln!(writer, "{}", csv_row(record))?;
            }
        }
        OutputFormat::Jsonl => {
            if let Some(meta) = metadata {
                writeln!(writer, "{}", serde_json::json!({ "_meta": meta }))?;
            }
            for record in records {
                writeln!(
                    writer,
                    "{}",
                    serde_json::to_string(record).expect("record serializes")
                )?;
            }
        }
    }
    Ok(())
}

/// Write discrepancy reports in the chosen format.
pub fn write_discrepancies(
    writer: &mut impl Write,
    reports: &[DiscrepancyReport],
    format: OutputFormat,
) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            writeln!(writer, "{DISCREPANCY_CSV_HEADER}")?;
            for r in reports {
                writeln!(
                    writer,
                    "{},{},{},{},{},{}",
                    r.pair, r.dx, r.t, r.trace_defect, r.max_entry_delta, r.min_eigenvalue
                )?;
            }
        }
        OutputFormat::Jsonl => {
            for r in reports {
                writeln!(writer, "{}", serde_json::to_string(r).expect("report serializes"))?;
            }
        }
    }
    Ok(())
}

/// Parse records back from an emitted stream. Comment and metadata lines are
/// skipped; CSV input must carry the exact [`CSV_HEADER`].
pub fn parse_records(reader: impl Read, format: OutputFormat) -> Result<Vec<SweepRecord>> {
    let reader = BufReader::new(reader);
    let mut records = Vec::new();
    match format {
        OutputFormat::Csv => {
            let mut saw_header = false;
            for line in reader.lines() {
                let line = line?;
                let trimmed = line.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    continue;
                }
                if !saw_header {
                    if trimmed != CSV_HEADER {
                        return Err(Error::Config(format!("unexpected CSV header `{trimmed}`")));
                    }
                    saw_header = true;
                    continue;
                }
                records.push(parse_csv_row(trimmed)?);
            }
        }
        OutputFormat::Jsonl => {
            for line in reader.lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let value: serde_json::Value = serde_json::from_str(&line)
                    .map_err(|e| Error::Config(format!("bad JSONL line: {e}")))?;
                if value.get("_meta").is_some() {
                    continue;
                }
                let record: SweepRecord = serde_json::from_value(value)
                    .map_err(|e| Error::Config(format!("bad JSONL record: {e}")))?;
                records.push(record);
            }
        }
    }
    Ok(records)
}

fn parse_csv_row(line: &str) -> Result<SweepRecord> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 9 {
        return Err(Error::Config(format!(
            "expected 9 CSV fields, got {} in `{line}`",
            fields.len()
        )));
    }
    let number = |s: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|_| Error::Config(format!("bad number `{s}` in `{line}`")))
    };
    let steerable = match fields[8] {
        "true" => true,
        "false" => false,
        other => return Err(Error::Config(format!("bad bool `{other}` in `{line}`"))),
    };
    Ok(SweepRecord {
        pair: fields[0].parse()?,
        dx: number(fields[1])?,
        t: number(fields[2])?,
        h_x: number(fields[3])?,
        h_y: number(fields[4])?,
        h_z: number(fields[5])?,
        i_s: number(fields[6])?,
        negativity: number(fields[7])?,
        steerable,
    })
}

/// Parse discrepancy reports back from an emitted stream.
pub fn parse_discrepancies(
    reader: impl Read,
    format: OutputFormat,
) -> Result<Vec<DiscrepancyReport>> {
    let reader = BufReader::new(reader);
    let mut reports = Vec::new();
    match format {
        OutputFormat::Csv => {
            let mut saw_header = false;
            for line in reader.lines() {
                let line = line?;
                let trimmed = line.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    continue;
                }
                if !saw_header {
                    if trimmed != DISCREPANCY_CSV_HEADER {
                        return Err(Error::Config(format!(
                            "unexpected discrepancy header `{trimmed}`"
                        )));
                    }
                    saw_header = true;
                    continue;
                }
                let fields: Vec<&str> = trimmed.split(',').collect();
                if fields.len() != 6 {
                    return Err(Error::Config(format!("expected 6 fields in `{trimmed}`")));
                }
                let number = |s: &str| -> Result<f64> {
                    s.parse::<f64>()
                        .map_err(|_| Error::Config(format!("bad number `{s}`")))
                };
                reports.push(DiscrepancyReport {
                    pair: fields[0].parse()?,
                    dx: number(fields[1])?,
                    t: number(fields[2])?,
                    trace_defect: number(fields[3])?,
                    max_entry_delta: number(fields[4])?,
                    min_eigenvalue: number(fields[5])?,
                });
            }
        }
        OutputFormat::Jsonl => {
            for line in reader.lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let value: serde_json::Value = serde_json::from_str(&line)
                    .map_err(|e| Error::Config(format!("bad JSONL line: {e}")))?;
                if value.get("_meta").is_some() {
                    continue;
                }
                reports.push(
                    serde_json::from_value(value)
                        .map_err(|e| Error::Config(format!("bad JSONL report: {e}")))?,
                );
            }
        }
    }
    Ok(reports)
}

/// Convenience for tests and the self-check: records of a figure preset.
pub fn preset_records(preset: FigurePreset) -> Vec<SweepRecord> {
    sweep_records(&figure_preset(preset)).expect("presets are valid configs")
}
