//! Data files: `#`-commented CSV and JSON reports.
//!
//! Every file opens with the format version, a timestamp and the run
//! configuration as one line of JSON. Floats are written with 17 significant
//! digits so they round-trip exactly. Apart from the timestamp line, output is
//! a pure function of the configuration.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::canonical::ZeroModePair;
use crate::dot::DotSweepResult;
use crate::phase::PhasePoint;
use crate::{Error, Result};

pub const FORMAT_VERSION: &str = "kitaev-data/1";

const FORMAT_PREFIX: &str = "# format: ";
const GENERATED_PREFIX: &str = "# generated: ";
const CONFIG_PREFIX: &str = "# config: ";

/// `1.2345678901234567e0` style, 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Seconds since the Unix epoch, as written on the `generated` line.
pub fn timestamp_now() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("unix:{secs}")
}

fn config_json<C: Serialize>(config: &C) -> Result<String> {
    serde_json::to_string(config).map_err(|e| Error::InvalidParameter(format!("config not serializable: {e}")))
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render<C: Serialize>(&self, config: &C, timestamp: &str) -> Result<String> {
        let mut out = String::new();
        let _ = writeln!(out, "{FORMAT_PREFIX}{FORMAT_VERSION}");
        let _ = writeln!(out, "{GENERATED_PREFIX}{timestamp}");
        let _ = writeln!(out, "{CONFIG_PREFIX}{}", config_json(config)?);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        Ok(out)
    }
}

#[derive(Serialize)]
struct Report<'a, C, P> {
    format: &'a str,
    generated: &'a str,
    config: &'a C,
    result: &'a P,
}

/// Pretty-printed JSON with `format`, `generated`, `config` and `result` keys.
pub fn render_json<C: Serialize, P: Serialize>(config: &C, timestamp: &str, result: &P) -> Result<String> {
    let report = Report { format: FORMAT_VERSION, generated: timestamp, config, result };
    let mut s = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::InvalidParameter(format!("report not serializable: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// The embedded configuration of a CSV file or JSON report.
pub fn read_config(text: &str) -> Result<serde_json::Value> {
    if let Some(line) = text.lines().find_map(|l| l.strip_prefix(CONFIG_PREFIX)) {
        return serde_json::from_str(line).map_err(|e| Error::InvalidParameter(format!("bad config header: {e}")));
    }
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("no config header: {e}")))?;
    value.get("config").cloned().ok_or_else(|| Error::InvalidParameter("no config header".into()))
}

/// The file with its timestamp removed, for reproducibility comparisons.
pub fn strip_timestamp(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for line in text.lines() {
        let t = line.trim_start();
        if line.starts_with(GENERATED_PREFIX) || t.starts_with("\"generated\":") {
            continue;
        }
        out.push_str(line);
        out.push('\n');
    }
    out
}

pub fn spectrum_table(epsilons: &[f64]) -> Table {
    let mut t = Table::new(["index", "value"]);
    for (m, &e) in epsilons.iter().enumerate() {
        t.push(vec![(m + 1).to_string(), fmt_f64(e)]);
    }
    t
}

/// Columns `majorana_index` (1-based), `mode1`, `mode2`.
pub fn zero_mode_table(pair: &ZeroModePair) -> Table {
    let mut t = Table::new(["majorana_index", "mode1", "mode2"]);
    for (a, (&g1, &g2)) in pair.gamma1_components.iter().zip(&pair.gamma2_components).enumerate() {
        t.push(vec![(a + 1).to_string(), fmt_f64(g1), fmt_f64(g2)]);
    }
    t
}

/// Full matrix, row-major, columns `c1..c{n}`.
pub fn matrix_table(m: &DMatrix<f64>) -> Table {
    let mut t = Table::new((1..=m.ncols()).map(|c| format!("c{c}")));
    for r in 0..m.nrows() {
        t.push((0..m.ncols()).map(|c| fmt_f64(m[(r, c)])).collect());
    }
    t
}

pub fn phase_table(points: &[PhasePoint]) -> Table {
    let noisy = points.iter().any(|p| p.survival_fraction.is_some());
    let mut cols = vec!["delta", "mu", "eps1", "eps2", "has_zero_mode"];
    if noisy {
        cols.extend(["survival_fraction", "n_seeds"]);
    }
    let mut t = Table::new(cols);
    for p in points {
        let mut row = vec![
            fmt_f64(p.delta),
            fmt_f64(p.mu),
            fmt_f64(p.eps1),
            fmt_f64(p.eps2),
            u8::from(p.has_zero_mode).to_string(),
        ];
        if noisy {
            row.push(fmt_f64(p.survival_fraction.unwrap_or(f64::NAN)));
            row.push(p.n_seeds.unwrap_or(0).to_string());
        }
        t.push(row);
    }
    t
}

pub fn sweep_table(result: &DotSweepResult) -> Table {
    let exact = result.points.iter().any(|p| p.exact_eps1.is_some());
    let mut cols = vec!["v", "s_re", "s_im", "e_plus", "c1_abs2", "c2_abs2"];
    if exact {
        cols.push("exact_eps1");
    }
    let mut t = Table::new(cols);
    for p in &result.points {
        let mut row = vec![
            fmt_f64(p.v),
            fmt_f64(p.s.re),
            fmt_f64(p.s.im),
            fmt_f64(p.e_plus),
            fmt_f64(p.c1.norm_sqr()),
            fmt_f64(p.c2.norm_sqr()),
        ];
        if exact {
            row.push(p.exact_eps1.map_or_else(|| fmt_f64(f64::NAN), fmt_f64));
        }
        t.push(row);
    }
    t
}

/// Extended-chain levels per bias value: `v, level1, ..., levelK`.
pub fn levels_table(result: &DotSweepResult) -> Table {
    let k = result.points.iter().filter_map(|p| p.exact_levels.as_ref()).map(Vec::len).max().unwrap_or(0);
    let mut t = Table::new(std::iter::once("v".to_string()).chain((1..=k).map(|i| format!("level{i}"))));
    for p in &result.points {
        if let Some(levels) = &p.exact_levels {
            t.push(std::iter::once(fmt_f64(p.v)).chain(levels.iter().map(|&e| fmt_f64(e))).collect());
        }
    }
    t
}
