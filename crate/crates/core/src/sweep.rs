//! Rectangular (coupling, N) result tables and their CSV form.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// A row of a sweep table: one `(coupling, N)` cell.
pub trait SweepRow: Send {
    /// CSV header line, without trailing newline.
    const HEADER: &'static str;

    fn coupling(&self) -> f64;
    fn n_qubits(&self) -> usize;
    fn write_csv(&self, out: &mut String);
}

/// Cells of a scan over couplings and qubit numbers, ordered by `(N, coupling)`
/// regardless of the order in which they were produced.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable<R> {
    rows: Vec<R>,
}

impl<R: SweepRow> SweepTable<R> {
    pub fn from_cells(mut rows: Vec<R>) -> Self {
        rows.sort_by(|a, b| {
            a.n_qubits()
                .cmp(&b.n_qubits())
                .then(a.coupling().total_cmp(&b.coupling()))
        });
        Self { rows }
    }

    pub fn rows(&self) -> &[R] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows for a single N, in increasing coupling.
    pub fn series(&self, n_qubits: usize) -> impl Iterator<Item = &R> {
        self.rows.iter().filter(move |r| r.n_qubits() == n_qubits)
    }

    /// The distinct N values present, ascending.
    pub fn n_values(&self) -> Vec<usize> {
        let mut ns: Vec<usize> = self.rows.iter().map(|r| r.n_qubits()).collect();
        ns.dedup();
        ns
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(R::HEADER);
        out.push('\n');
        for row in &self.rows {
            row.write_csv(&mut out);
            out.push('\n');
        }
        out
    }
}

/// Formats an optional float for CSV; `None` becomes an empty field.
pub(crate) fn opt_field(out: &mut String, value: Option<f64>) {
    if let Some(v) = value {
        let _ = write!(out, "{v}");
    }
}

/// Uniform coupling grid `start, start + step, …` up to and including `stop`
/// (within half a step of round-off). Values are rounded to 12 decimals so
/// they print cleanly.
pub fn coupling_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "grid step must be > 0, got {step}"
        )));
    }
    if !(start >= 0.0) || !start.is_finite() || !(stop >= start) || !stop.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "grid needs 0 <= start <= stop, got [{start}, {stop}]"
        )));
    }
    let intervals = ((stop - start) / step + 1e-9).floor();
    if intervals >= 1e6 {
        return Err(Error::InvalidParameter(format!(
            "grid has {} points; at most 1e6 are supported",
            intervals + 1.0
        )));
    }
    let count = intervals as usize + 1;
    Ok((0..count)
        .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// Checks the precondition shared by every scan: couplings non-negative and
/// strictly increasing, N values positive.
pub(crate) fn validate_scan(couplings: &[f64], n_list: &[usize]) -> Result<()> {
    if couplings.is_empty() || n_list.is_empty() {
        return Err(Error::InvalidParameter(
            "scan needs at least one coupling and one N".into(),
        ));
    }
    if couplings.iter().any(|c| !(*c >= 0.0) || !c.is_finite()) {
        return Err(Error::InvalidParameter(
            "couplings must be finite and >= 0".into(),
        ));
    }
    if couplings.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "coupling grid must be strictly increasing".into(),
        ));
    }
    if n_list.contains(&0) {
        return Err(Error::InvalidParameter("N must be >= 1".into()));
    }
    Ok(())
}

/// Evaluates `cell` on every `(coupling, N)` pair in parallel.
pub(crate) fn run_cells<R, F>(couplings: &[f64], n_list: &[usize], cell: F) -> SweepTable<R>
where
    R: SweepRow,
    F: Fn(f64, usize) -> R + Sync,
{
    let pairs: Vec<(f64, usize)> = n_list
        .iter()
        .flat_map(|&n| couplings.iter().map(move |&c| (c, n)))
        .collect();
    let rows: Vec<R> = pairs.into_par_iter().map(|(c, n)| cell(c, n)).collect();
    SweepTable::from_cells(rows)
}
