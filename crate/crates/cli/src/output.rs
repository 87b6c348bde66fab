//! CSV and metadata emission.
//!
//! Every data file is built fully in memory and written in one call, with
//! floats printed at 17 significant digits, so identical inputs yield
//! byte-identical files. Each `<name>.csv` comes with a `<name>.meta.txt`
//! sidecar listing every effective parameter, including the defaults the
//! config file left implicit.

use std::fs;
use std::path::Path;

use ctap_sim::analysis::{ComparisonTable, Faster, SweepParam, SweepResult};
use ctap_sim::{basis_label, SpectrumSample, Trajectory};

use crate::error::{CliError, Result};

/// Full round-trip precision: one leading digit plus 16 after the point.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Quote a CSV field if it holds a delimiter, a quote, or a newline.
fn csv_field(raw: &str) -> String {
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    let mut line = fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",");
    line.push('\n');
    line
}

/// Column name for one sweep axis; `t_max` coordinates are stored in
/// `pi / omega_max` units, so the header says so.
fn axis_column(param: SweepParam) -> &'static str {
    match param {
        SweepParam::TMax => "t_max_pi",
        SweepParam::Gamma => "gamma",
        SweepParam::OmegaMax => "omega_max",
        SweepParam::NDqd => "n_dqd",
    }
}

/// Sampled populations, trace, and purity over the full window.
pub fn trajectory_csv(trajectory: &Trajectory, n_dqd: usize) -> String {
    let dim = trajectory.dim();
    let mut header = vec!["t".to_string()];
    for flat in 0..dim {
        header.push(basis_label(n_dqd, flat).expect("index in range"));
    }
    header.push("trace".to_string());
    header.push("purity".to_string());

    let mut out = csv_line(&header);
    for (row, &t) in trajectory.times.iter().enumerate() {
        let mut fields = Vec::with_capacity(dim + 3);
        fields.push(format_float(t));
        for col in 0..dim {
            fields.push(format_float(trajectory.populations[[row, col]]));
        }
        fields.push(format_float(trajectory.traces[row]));
        fields.push(format_float(trajectory.purities[row]));
        out.push_str(&csv_line(&fields));
    }
    out
}

/// Instantaneous eigenvalues and zero-eigenvalue multiplicity.
pub fn spectrum_csv(samples: &[SpectrumSample]) -> String {
    let dim = samples.first().map_or(0, |s| s.eigenvalues.len());
    let mut header = vec!["t".to_string()];
    for k in 1..=dim {
        header.push(format!("lambda_{k}"));
    }
    header.push("zero_multiplicity".to_string());

    let mut out = csv_line(&header);
    for sample in samples {
        let mut fields = Vec::with_capacity(dim + 2);
        fields.push(format_float(sample.time));
        fields.extend(sample.eigenvalues.iter().map(|&v| format_float(v)));
        fields.push(sample.zero_multiplicity.to_string());
        out.push_str(&csv_line(&fields));
    }
    out
}

/// Long-format grid: one row per point, axis coordinates first, then the
/// observable value and a status column. Failed points keep their row with
/// an empty value and the error text in the status.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut header: Vec<String> = result
        .axes
        .iter()
        .map(|a| axis_column(a.param).to_string())
        .collect();
    header.push("value".to_string());
    header.push("status".to_string());

    let mut out = csv_line(&header);
    for point in &result.points {
        let mut fields: Vec<String> = point.coords.iter().map(|&c| format_float(c)).collect();
        match (&point.value, &point.error) {
            (Some(v), None) => {
                fields.push(format_float(*v));
                fields.push("ok".to_string());
            }
            (_, Some(message)) => {
                fields.push(String::new());
                fields.push(format!("error: {message}"));
            }
            (None, None) => unreachable!("a sweep point is either a value or an error"),
        }
        out.push_str(&csv_line(&fields));
    }
    out
}

/// Single-row optimizer verdict.
pub fn optimize_csv(t_opt_pi: f64, transfer: f64) -> String {
    let mut out = csv_line(&["t_opt_pi".to_string(), "transfer_probability".to_string()]);
    out.push_str(&csv_line(&[format_float(t_opt_pi), format_float(transfer)]));
    out
}

/// Control-error cost against pulse time.
pub fn miscalibrate_csv(curve: &[(f64, f64)]) -> String {
    let mut out = csv_line(&["t_max_pi".to_string(), "delta".to_string()]);
    for &(t_pi, delta) in curve {
        out.push_str(&csv_line(&[format_float(t_pi), format_float(delta)]));
    }
    out
}

fn faster_name(faster: Faster) -> &'static str {
    match faster {
        Faster::Ctap => "ctap",
        Faster::Swap => "swap",
        Faster::Unknown => "unknown",
    }
}

/// Per-chain-length transfer times; `t_ctap` is empty when the threshold
/// was never reached inside the scan range.
pub fn comparison_csv(table: &ComparisonTable) -> String {
    let mut out = csv_line(&[
        "N".to_string(),
        "t_ctap".to_string(),
        "t_swap".to_string(),
        "faster".to_string(),
    ]);
    for row in &table.rows {
        out.push_str(&csv_line(&[
            row.n_dqd.to_string(),
            row.t_ctap.map_or_else(String::new, format_float),
            format_float(row.t_swap),
            faster_name(row.faster).to_string(),
        ]));
    }
    out
}

/// Ordered `key = value` sidecar; insertion order is the file order.
#[derive(Debug, Default)]
pub struct Metadata {
    entries: Vec<(String, String)>,
}

impl Metadata {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn push_float(&mut self, key: &str, value: f64) {
        self.entries.push((key.to_string(), format_float(value)));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.entries {
            out.push_str(key);
            out.push_str(" = ");
            out.push_str(value);
            out.push('\n');
        }
        out
    }
}

/// Write a whole file in one call.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::Io {
        context: format!("writing {}", path.display()),
        source: e,
    })
}
