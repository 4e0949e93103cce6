use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::experiment::RunRecord;
use super::field::EnergyField;
use crate::error::{Error, Result};
use crate::geometry::{Layout, Position};
use crate::search::TracePoint;

pub const RESULTS_FILE: &str = "results.csv";

/// One row of `results.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub run_id: usize,
    pub seed: u64,
    pub final_power_w: f64,
    pub violation_m: f64,
    pub penalized_w: f64,
    pub q_factor: f64,
    pub evals_used: usize,
}

impl From<&RunRecord> for ResultRow {
    fn from(r: &RunRecord) -> Self {
        Self {
            run_id: r.run_id,
            seed: r.seed,
            final_power_w: r.report.raw_power,
            violation_m: r.report.violation_sum,
            penalized_w: r.report.penalized_fitness,
            q_factor: r.q_factor,
            evals_used: r.evaluations_used,
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.position() {
        Some(pos) => Error::Parse { line: pos.line() as usize, message: e.to_string() },
        None => Error::Io(e.to_string()),
    }
}

/// `v` rounded to six significant digits.
pub fn six_significant(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = 5 - magnitude;
    if decimals >= 0 {
        format!("{:.*}", decimals as usize, v)
    } else {
        let scale = 10f64.powi(-decimals);
        format!("{:.0}", (v / scale).round() * scale)
    }
}

/// Results table with full round-trip precision, so statistics computed from
/// a reloaded file match the in-memory ones exactly.
pub fn results_to_csv(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

pub fn results_from_csv(text: &str) -> Result<Vec<ResultRow>> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().map(|r| r.map_err(csv_err)).collect()
}

pub fn read_results(dir: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    let path = dir.as_ref().join(RESULTS_FILE);
    let text = fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    results_from_csv(&text)
}

pub fn trace_to_csv(trace: &[TracePoint]) -> String {
    let mut out = String::from("eval_index,best_penalized_w\n");
    for t in trace {
        out.push_str(&format!("{},{}\n", t.evaluation, six_significant(t.best_fitness)));
    }
    out
}

/// Buoy positions to 0.01 m with each buoy's share of the power.
pub fn layout_to_csv(layout: &Layout, per_buoy_power: &[f64]) -> String {
    let mut out = String::from("buoy_index,x_m,y_m,per_buoy_power_w\n");
    for (i, p) in layout.positions().iter().enumerate() {
        let power = per_buoy_power.get(i).map_or(String::new(), |&w| six_significant(w));
        out.push_str(&format!("{i},{:.2},{:.2},{power}\n", p.x, p.y));
    }
    out
}

pub fn layout_from_csv(text: &str) -> Result<Layout> {
    #[derive(Deserialize)]
    struct Row {
        x_m: f64,
        y_m: f64,
    }
    let rows: Vec<Row> =
        csv::Reader::from_reader(text.as_bytes()).deserialize().map(|r| r.map_err(csv_err)).collect::<Result<_>>()?;
    Layout::new(rows.into_iter().map(|r| Position::new(r.x_m, r.y_m)).collect())
}

/// Masked nodes have an empty power cell.
pub fn field_to_csv(field: &EnergyField) -> String {
    let mut out = String::from("x_m,y_m,power_w,masked\n");
    for n in &field.nodes {
        let power = n.probe_power.map_or(String::new(), six_significant);
        let masked = u8::from(n.probe_power.is_none());
        out.push_str(&format!("{:.2},{:.2},{power},{masked}\n", n.position.x, n.position.y));
    }
    out
}

/// Writes `results.csv` plus one trace and one layout file per run.
pub fn write_experiment(dir: impl AsRef<Path>, records: &[RunRecord]) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let rows: Vec<ResultRow> = records.iter().map(ResultRow::from).collect();
    fs::write(dir.join(RESULTS_FILE), results_to_csv(&rows)?)?;
    for r in records {
        fs::write(dir.join(format!("trace_{}.csv", r.run_id)), trace_to_csv(&r.trace))?;
        fs::write(dir.join(format!("layout_{}.csv", r.run_id)), layout_to_csv(&r.layout, &r.report.per_buoy_power))?;
    }
    Ok(())
}
