//! Trace CSV: header `iter,x1,...,xn,fnorm`, one row per iterate.
//!
//! Floats are written with Rust's shortest round-trip formatting, so reading a
//! file back reproduces the in-memory values exactly.

use std::fmt::Write;

use crate::center::{CenterTrace, TraceRecord};
use crate::error::{Error, Result};
use crate::polytope::Point;

pub fn csv_header(n: usize) -> String {
    let mut h = String::from("iter");
    for k in 1..=n {
        write!(h, ",x{k}").unwrap();
    }
    h.push_str(",fnorm");
    h
}

pub fn trace_to_csv(trace: &CenterTrace) -> String {
    let n = trace.records.first().map_or(0, |r| r.point.dim());
    let mut out = csv_header(n);
    out.push('\n');
    for r in &trace.records {
        write!(out, "{}", r.iter).unwrap();
        for x in r.point.coords() {
            write!(out, ",{x}").unwrap();
        }
        writeln!(out, ",{}", r.fnorm).unwrap();
    }
    out
}

pub fn trace_from_csv(text: &str) -> Result<Vec<TraceRecord>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::Syntax {
        line: 1,
        message: "empty trace file".into(),
    })?;
    let cols: Vec<&str> = header.trim().split(',').collect();
    if cols.len() < 3 || cols[0] != "iter" || cols[cols.len() - 1] != "fnorm" {
        return Err(Error::Syntax {
            line: 1,
            message: format!("bad trace header `{header}`"),
        });
    }
    let n = cols.len() - 2;
    if header.trim() != csv_header(n) {
        return Err(Error::Syntax {
            line: 1,
            message: format!("bad trace header `{header}`"),
        });
    }
    let mut records = Vec::new();
    for (i, l) in lines {
        let line = i + 1;
        let fields: Vec<&str> = l.trim().split(',').collect();
        if fields.len() != n + 2 {
            return Err(Error::Syntax {
                line,
                message: format!("expected {} fields, found {}", n + 2, fields.len()),
            });
        }
        let bad = |f: &str| Error::Syntax {
            line,
            message: format!("`{f}` is not a number"),
        };
        let iter = fields[0].parse::<usize>().map_err(|_| bad(fields[0]))?;
        let values = fields[1..]
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| bad(f)))
            .collect::<Result<Vec<f64>>>()?;
        let (coords, fnorm) = values.split_at(n);
        records.push(TraceRecord {
            iter,
            point: Point::new(coords.to_vec()),
            fnorm: fnorm[0],
        });
    }
    Ok(records)
}
