//! Plain comma-separated tables with mandatory unit-suffixed headers.
//!
//! Parsers tolerate a UTF-8 BOM and CRLF endings, reject everything the
//! schemas forbid, and report path, line, and column (1-based field number)
//! on failure.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{NvError, Result};
use crate::ramsey::RamseyTrace;
use crate::thermo::{ExpansionTable, PhononMode, PhononModeTable};

/// One measured temperature point for one nucleus of one NV center.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub nv_id: String,
    pub nucleus: String,
    pub temperature_k: f64,
    pub omega_plus_hz: f64,
    pub omega_minus_hz: f64,
    pub sigma_hz: f64,
}

impl MeasurementRecord {
    /// Two-frequency mean, the quantity regressed against temperature.
    pub fn mean_hz(&self) -> f64 {
        0.5 * (self.omega_plus_hz + self.omega_minus_hz)
    }
}

struct Table {
    path: String,
    /// (line number, fields)
    rows: Vec<(usize, Vec<String>)>,
}

fn read_table(path: &Path, expected_header: &[&str]) -> Result<Table> {
    let raw = std::fs::read_to_string(path)?;
    let text = raw.strip_prefix('\u{feff}').unwrap_or(&raw);
    let path_str = path.display().to_string();

    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<String> = line.split(',').map(|f| f.trim().to_string()).collect();
        rows.push((idx + 1, fields));
    }
    if rows.is_empty() {
        return Err(NvError::Parse {
            path: path_str,
            line: 1,
            col: 1,
            msg: "empty file".into(),
        });
    }
    let (hline, header) = &rows[0];
    if header.len() != expected_header.len()
        || header.iter().zip(expected_header).any(|(a, b)| a != b)
    {
        return Err(NvError::Parse {
            path: path_str,
            line: *hline,
            col: 1,
            msg: format!(
                "expected header {:?}, found {:?}",
                expected_header.join(","),
                header.join(",")
            ),
        });
    }
    for (line, fields) in &rows[1..] {
        if fields.len() != expected_header.len() {
            return Err(NvError::Parse {
                path: path_str,
                line: *line,
                col: fields.len().min(expected_header.len()) + 1,
                msg: format!(
                    "expected {} columns, found {}",
                    expected_header.len(),
                    fields.len()
                ),
            });
        }
    }
    rows.remove(0);
    Ok(Table {
        path: path_str,
        rows,
    })
}

fn parse_f64(table: &Table, line: usize, col: usize, field: &str) -> Result<f64> {
    field.parse::<f64>().map_err(|_| NvError::Parse {
        path: table.path.clone(),
        line,
        col,
        msg: format!("malformed number {field:?}"),
    })
}

fn parse_u32(table: &Table, line: usize, col: usize, field: &str) -> Result<u32> {
    field.parse::<u32>().map_err(|_| NvError::Parse {
        path: table.path.clone(),
        line,
        col,
        msg: format!("malformed integer {field:?}"),
    })
}

/// Header: nvId,nucleus,T_K,omegaPlus_Hz,omegaMinus_Hz,sigma_Hz
pub fn parse_measurements(path: impl AsRef<Path>) -> Result<Vec<MeasurementRecord>> {
    let header = ["nvId", "nucleus", "T_K", "omegaPlus_Hz", "omegaMinus_Hz", "sigma_Hz"];
    let table = read_table(path.as_ref(), &header)?;
    let mut records = Vec::with_capacity(table.rows.len());
    for (line, f) in &table.rows {
        let t = parse_f64(&table, *line, 3, &f[2])?;
        let omega_plus = parse_f64(&table, *line, 4, &f[3])?;
        let omega_minus = parse_f64(&table, *line, 5, &f[4])?;
        let sigma = parse_f64(&table, *line, 6, &f[5])?;
        if !(sigma > 0.0) {
            return Err(NvError::Parse {
                path: table.path.clone(),
                line: *line,
                col: 6,
                msg: format!("sigma must be positive, got {sigma}"),
            });
        }
        if !(t > 0.0) {
            return Err(NvError::Parse {
                path: table.path.clone(),
                line: *line,
                col: 3,
                msg: format!("temperature must be positive, got {t}"),
            });
        }
        records.push(MeasurementRecord {
            nv_id: f[0].clone(),
            nucleus: f[1].clone(),
            temperature_k: t,
            omega_plus_hz: omega_plus,
            omega_minus_hz: omega_minus,
            sigma_hz: sigma,
        });
    }
    Ok(records)
}

/// Header: index,energy_meV,b_Hz,c_Hz
pub fn parse_phonon_table(path: impl AsRef<Path>) -> Result<PhononModeTable> {
    let header = ["index", "energy_meV", "b_Hz", "c_Hz"];
    let table = read_table(path.as_ref(), &header)?;
    let mut modes = Vec::with_capacity(table.rows.len());
    let mut seen = std::collections::HashSet::new();
    for (line, f) in &table.rows {
        let index = parse_u32(&table, *line, 1, &f[0])?;
        if !seen.insert(index) {
            return Err(NvError::Parse {
                path: table.path.clone(),
                line: *line,
                col: 1,
                msg: format!("duplicate mode index {index}"),
            });
        }
        let energy = parse_f64(&table, *line, 2, &f[1])?;
        if !(energy > 0.0) {
            return Err(NvError::Parse {
                path: table.path.clone(),
                line: *line,
                col: 2,
                msg: format!("mode energy must be positive, got {energy}"),
            });
        }
        modes.push(PhononMode {
            index,
            energy_mev: energy,
            b_hz: parse_f64(&table, *line, 3, &f[2])?,
            c_hz: parse_f64(&table, *line, 4, &f[3])?,
        });
    }
    let out = PhononModeTable { modes };
    out.validate()?;
    Ok(out)
}

/// Header: T_K,rel_expansion
pub fn parse_expansion_table(path: impl AsRef<Path>) -> Result<ExpansionTable> {
    let header = ["T_K", "rel_expansion"];
    let table = read_table(path.as_ref(), &header)?;
    let mut temps = Vec::with_capacity(table.rows.len());
    let mut rels = Vec::with_capacity(table.rows.len());
    for (line, f) in &table.rows {
        let t = parse_f64(&table, *line, 1, &f[0])?;
        if let Some(&prev) = temps.last() {
            if t <= prev {
                return Err(NvError::Parse {
                    path: table.path.clone(),
                    line: *line,
                    col: 1,
                    msg: format!("temperatures must be strictly increasing ({prev} then {t})"),
                });
            }
        }
        temps.push(t);
        rels.push(parse_f64(&table, *line, 2, &f[1])?);
    }
    let out = ExpansionTable {
        temperatures_k: temps,
        relative_expansion: rels,
    };
    out.validate()?;
    Ok(out)
}

fn fmt_num(v: f64) -> String {
    // round-trippable and byte-stable
    format!("{v:.10e}")
}

/// Two-column trace emission, header t_s,signal.
pub fn write_trace(trace: &RamseyTrace) -> String {
    let mut out = String::from("t_s,signal\n");
    for (t, s) in trace.times_s.iter().zip(&trace.signal) {
        let _ = writeln!(out, "{},{}", fmt_num(*t), fmt_num(*s));
    }
    out
}

/// Parse a trace written by [`write_trace`].
pub fn parse_trace(path: impl AsRef<Path>) -> Result<RamseyTrace> {
    let header = ["t_s", "signal"];
    let table = read_table(path.as_ref(), &header)?;
    let mut times = Vec::with_capacity(table.rows.len());
    let mut signal = Vec::with_capacity(table.rows.len());
    for (line, f) in &table.rows {
        times.push(parse_f64(&table, *line, 1, &f[0])?);
        signal.push(parse_f64(&table, *line, 2, &f[1])?);
    }
    let trace = RamseyTrace {
        times_s: times,
        signal,
        noise_sigma: 0.0,
    };
    trace.validate()?;
    Ok(trace)
}

pub fn write_phonon_table(table: &PhononModeTable) -> String {
    let mut out = String::from("index,energy_meV,b_Hz,c_Hz\n");
    for m in &table.modes {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            m.index,
            fmt_num(m.energy_mev),
            fmt_num(m.b_hz),
            fmt_num(m.c_hz)
        );
    }
    out
}

pub fn write_expansion_table(table: &ExpansionTable) -> String {
    let mut out = String::from("T_K,rel_expansion\n");
    for (t, r) in table.temperatures_k.iter().zip(&table.relative_expansion) {
        let _ = writeln!(out, "{},{}", fmt_num(*t), fmt_num(*r));
    }
    out
}
