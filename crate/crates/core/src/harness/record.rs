//! Run artifacts: per-sample rows, per-jump audit entries, and the CSV
//! format they are published in.

use crate::error::{Error, Result};
use crate::gain::SwitchingParameters;
use crate::observers::monitor::LyapunovMonitor;

/// One recorded sample at hybrid time `(t, jumps)`.
///
/// `cost_excess` and `attitude_storage` are the switching-cost excess
/// and the truth-side attitude storage function; `vector_storages`
/// holds the countdown-weighted vector storages, one per vector. For
/// observers without a switching state, `theta` and `cost_excess` are
/// zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub t: f64,
    pub jumps: u64,
    pub attitude_error_deg: f64,
    pub vector_error_norm: f64,
    pub theta: f64,
    pub cost_excess: f64,
    pub attitude_storage: f64,
    pub vector_storages: Vec<f64>,
    pub innovation_norm: f64,
    /// Semicolon-joined markers: `m3` for a measurement jump of vector
    /// 3, `th` for a switch jump. Empty on flow-only samples.
    pub events: String,
}

/// What happened at one measurement jump, from the truth's vantage
/// point. Storage entries are `None` for the baseline filter, which
/// has no vector-estimate state to audit.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementJumpAudit {
    pub t: f64,
    /// Jump count after this jump.
    pub jumps: u64,
    pub vector_index: usize,
    /// Whether the attitude estimate was bitwise untouched by the jump.
    pub attitude_unchanged: bool,
    /// Vector storage just before the jump, at countdown zero.
    pub storage_before: Option<f64>,
    /// Vector storage just after, under the freshly drawn countdown.
    pub storage_after: Option<f64>,
    pub error_sq_before: Option<f64>,
    pub error_sq_after: Option<f64>,
}

/// What happened at one switch jump.
#[derive(Clone, Debug, PartialEq)]
pub struct SwitchJumpAudit {
    pub t: f64,
    /// Jump count after this jump.
    pub jumps: u64,
    pub attitude_unchanged: bool,
    pub excess_before: f64,
    pub excess_after: f64,
    /// Attitude storage after minus before, at the frozen true attitude.
    pub storage_change: f64,
    /// Weighted vector error `sum_i rho_i |r_tilde_i|^2` at the jump.
    pub weighted_error_sq: f64,
}

/// Everything a simulation run produces.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub rows: Vec<Row>,
    pub measurement_audits: Vec<MeasurementJumpAudit>,
    pub switch_audits: Vec<SwitchJumpAudit>,
    /// `|r_tilde_i(0)|^2` per vector, before any jump.
    pub initial_error_sq: Vec<f64>,
    /// Measurement jumps delivered per vector.
    pub measurement_counts: Vec<u64>,
    pub monitor: LyapunovMonitor,
    /// Designed switching parameters, present for the switching observer.
    pub switching: Option<SwitchingParameters>,
}

fn prefix_columns() -> [&'static str; 7] {
    ["t", "j", "att_err_deg", "vec_err_norm", "theta", "mu_phi", "V_R"]
}

/// Renders the rows as CSV. Columns: `t`, `j`, `att_err_deg`,
/// `vec_err_norm`, `theta`, `mu_phi`, `V_R`, `Vr1..VrN`, `sigma_norm`,
/// `events`. Floats are printed in shortest round-trip form, so a
/// parsed-back file reproduces the run bit for bit.
pub fn emit_csv(record: &RunRecord) -> String {
    let n = record.initial_error_sq.len();
    let mut out = String::new();
    for name in prefix_columns() {
        out.push_str(name);
        out.push(',');
    }
    for i in 1..=n {
        out.push_str(&format!("Vr{i},"));
    }
    out.push_str("sigma_norm,events\n");
    for row in &record.rows {
        assert_eq!(
            row.vector_storages.len(),
            n,
            "row width must match the vector count"
        );
        debug_assert!(!row.events.contains(','), "event markers must stay comma-free");
        out.push_str(&format!(
            "{},{},{},{},{},{},{}",
            row.t,
            row.jumps,
            row.attitude_error_deg,
            row.vector_error_norm,
            row.theta,
            row.cost_excess,
            row.attitude_storage
        ));
        for v in &row.vector_storages {
            out.push_str(&format!(",{v}"));
        }
        out.push_str(&format!(",{},{}\n", row.innovation_norm, row.events));
    }
    out
}

/// Writes [`emit_csv`] output to `path`, tagging I/O failures with the
/// path.
pub fn write_csv(record: &RunRecord, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, emit_csv(record)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses rows back out of [`emit_csv`] output.
pub fn read_rows(text: &str) -> Result<Vec<Row>> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(Error::LogFormat {
            line: 1,
            message: "empty CSV".into(),
        });
    };
    let columns: Vec<&str> = header.split(',').collect();
    let prefix = prefix_columns();
    if columns.len() < prefix.len() + 2 || columns[..prefix.len()] != prefix {
        return Err(Error::LogFormat {
            line: 1,
            message: format!("unexpected CSV header '{header}'"),
        });
    }
    let n = columns.len() - prefix.len() - 2;
    let mut rows = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != columns.len() {
            return Err(Error::LogFormat {
                line,
                message: format!(
                    "{} fields where the header promises {}",
                    fields.len(),
                    columns.len()
                ),
            });
        }
        let num = |k: usize| -> Result<f64> {
            fields[k].parse().map_err(|_| Error::LogFormat {
                line,
                message: format!("'{}' is not a number", fields[k]),
            })
        };
        let jumps: u64 = fields[1].parse().map_err(|_| Error::LogFormat {
            line,
            message: format!("'{}' is not a jump count", fields[1]),
        })?;
        let mut vector_storages = Vec::with_capacity(n);
        for k in 0..n {
            vector_storages.push(num(prefix.len() + k)?);
        }
        rows.push(Row {
            t: num(0)?,
            jumps,
            attitude_error_deg: num(2)?,
            vector_error_norm: num(3)?,
            theta: num(4)?,
            cost_excess: num(5)?,
            attitude_storage: num(6)?,
            vector_storages,
            innovation_norm: num(prefix.len() + n)?,
            events: fields[prefix.len() + n + 1].to_string(),
        });
    }
    Ok(rows)
}
