//! CSV and JSON rendering. Floats are written in shortest round-trip
//! exponent form so a reader recovers the exact f64.

use std::fmt::Write;

use serde::Serialize;
use vibrad::sweep::SpectrumLine;
use vibrad::SweepResult;

use crate::commands::OracleReport;

pub fn num(v: f64) -> String {
    format!("{v:e}")
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output types serialise");
    text.push('\n');
    text
}

/// One row per line; oracle columns appear only when some line carries them.
pub fn spectrum_csv(lines: &[SpectrumLine]) -> String {
    let verified = lines.iter().any(|l| l.oracle_rate.is_some());
    let mut out = String::from("n,mode,branch,omega_rad_s,rate_hz");
    if verified {
        out.push_str(",oracle_rate_hz,deviation");
    }
    out.push('\n');
    for line in lines {
        let s = &line.sideband;
        let mode = s.mode.map(|m| m.to_string()).unwrap_or_default();
        let _ = write!(
            out,
            "{},{},{},{},{}",
            s.n,
            mode,
            s.branch.as_str(),
            num(s.omega),
            num(s.rate)
        );
        if verified {
            let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
            let _ = write!(out, ",{},{}", opt(line.oracle_rate), opt(line.deviation));
        }
        out.push('\n');
    }
    out
}

/// Long format: metadata as `#` comment lines, then one row per grid cell.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::new();
    for (key, value) in &result.metadata {
        let _ = writeln!(out, "# {key}={value}");
    }
    for (key, value) in &result.grid.fixed {
        let _ = writeln!(out, "# fixed.{key}={}", num(*value));
    }
    let grid = &result.grid;
    let _ = write!(out, "{},{},value", grid.axis1.name, grid.axis2.name);
    if result.exact.is_some() {
        out.push_str(",exact");
    }
    if result.in_domain.is_some() {
        out.push_str(",in_domain");
    }
    out.push('\n');
    let cols = result.cols();
    let coord = |name: &str, v: f64| {
        if name == "n" {
            format!("{}", v as u32)
        } else {
            num(v)
        }
    };
    for (i, x) in grid.axis1.values.iter().enumerate() {
        for (j, y) in grid.axis2.values.iter().enumerate() {
            let idx = i * cols + j;
            let (x, y) = (coord(&grid.axis1.name, *x), coord(&grid.axis2.name, *y));
            let _ = write!(out, "{x},{y},{}", num(result.values[idx]));
            if let Some(exact) = &result.exact {
                let _ = write!(out, ",{}", num(exact[idx]));
            }
            if let Some(flags) = &result.in_domain {
                let _ = write!(out, ",{}", flags[idx]);
            }
            out.push('\n');
        }
    }
    out
}

pub fn oracle_csv(report: &OracleReport) -> String {
    let mut out = format!(
        "# seed={}\ncheck,cases,max_deviation,threshold,status\n",
        report.seed
    );
    for check in &report.checks {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            check.name,
            check.cases,
            num(check.max_deviation),
            num(check.threshold),
            if check.pass { "PASS" } else { "FAIL" }
        );
    }
    out
}
