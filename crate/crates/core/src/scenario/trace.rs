//! CSV run traces with round-trip-exact floats.

use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::optimizer::{RunTrace, TraceRow};

/// 17 significant digits: enough to reproduce every `f64` exactly.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn header(m: usize) -> Vec<String> {
    let mut h = vec!["iteration".to_string(), "R".into(), "H".into()];
    for i in 0..m {
        h.push(format!("sensor{i}_x"));
        h.push(format!("sensor{i}_y"));
        h.push(format!("delta{i}"));
    }
    h
}

fn write_to<W: std::io::Write>(trace: &RunTrace, w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header(trace.sensor_count()))?;
    for r in &trace.rows {
        let mut rec = vec![r.iteration.to_string(), fmt(r.radius), fmt(r.h)];
        for (p, d) in r.positions.iter().zip(&r.steps) {
            rec.extend([fmt(p.x), fmt(p.y), fmt(*d)]);
        }
        out.write_record(rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn trace_to_string(trace: &RunTrace) -> String {
    let mut buf = Vec::new();
    write_to(trace, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}

pub fn write_trace(trace: &RunTrace, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, trace_to_string(trace)).map_err(|e| Error::io(path, e))
}

pub fn read_trace(path: impl AsRef<Path>) -> Result<RunTrace> {
    let path = path.as_ref();
    let parse = |message: String| Error::Parse { path: path.into(), message };
    let mut rd = csv::Reader::from_path(path).map_err(|e| parse(e.to_string()))?;
    let m = (rd.headers().map_err(|e| parse(e.to_string()))?.len().saturating_sub(3)) / 3;
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| parse(e.to_string()))?;
        let num = |i: usize| -> Result<f64> {
            rec[i].parse::<f64>().map_err(|e| parse(format!("column {i}: {e}")))
        };
        let iteration = rec[0].parse::<usize>().map_err(|e| parse(e.to_string()))?;
        let mut positions = Vec::with_capacity(m);
        let mut steps = Vec::with_capacity(m);
        for i in 0..m {
            positions.push(Point2::new(num(3 + 3 * i)?, num(4 + 3 * i)?));
            steps.push(num(5 + 3 * i)?);
        }
        rows.push(TraceRow {
            iteration,
            radius: num(1)?,
            h: num(2)?,
            positions,
            steps,
        });
    }
    Ok(RunTrace { rows })
}
