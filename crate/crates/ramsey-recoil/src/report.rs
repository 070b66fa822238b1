//! CSV output of preset datasets plus a plain-text diagnostics summary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::scenario::{Dataset, Row, WeakComparison};

const BASE_COLUMNS: &[&str] = &[
    "preset",
    "N",
    "w_mm",
    "theta_uK",
    "T_b_s",
    "T_s",
    "half_width_mm",
    "shift_rel",
    "contrast",
    "epsilon_47",
    "samples",
    "runtime_s",
];
const COMPARE_COLUMNS: &[&str] = &["shift_numeric", "shift_analytic", "ratio"];

fn num(x: f64) -> String {
    format!("{x:.9e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Header of the CSV written for `data`.
pub fn columns(data: &Dataset) -> Vec<&'static str> {
    let mut h = BASE_COLUMNS.to_vec();
    if data.has_comparison() {
        h.extend_from_slice(COMPARE_COLUMNS);
    }
    h.push("status");
    h
}

fn record(row: &Row, with_cmp: bool) -> Vec<String> {
    let mut r = vec![
        row.preset.clone(),
        row.power.to_string(),
        num(row.w_mm),
        num(row.theta_uk),
        num(row.t_b_s),
        num(row.t_s),
        num(row.half_width_mm),
        opt(row.shift_rel),
        opt(row.contrast),
        opt(row.epsilon_47),
        row.samples.to_string(),
        format!("{:.3}", row.runtime_s),
    ];
    if with_cmp {
        let c = row.comparison;
        r.push(opt(c.map(|c| c.shift_numeric)));
        r.push(opt(c.map(|c| c.shift_analytic)));
        r.push(opt(c.map(|c| c.ratio)));
    }
    r.push(row.status.clone());
    r
}

/// CSV text of a dataset.
pub fn to_csv(data: &Dataset) -> Result<String> {
    let with_cmp = data.has_comparison();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns(data))?;
    for row in &data.rows {
        w.write_record(record(row, with_cmp))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

/// Plain-text summary of the diagnostics of a dataset.
pub fn summary(data: &Dataset) -> String {
    let mut s = String::new();
    let ok: Vec<&Row> = data.rows.iter().filter(|r| r.is_ok()).collect();
    let _ = writeln!(s, "dataset: {}", data.name);
    let _ = writeln!(s, "rows: {} ({} failed)", data.rows.len(), data.failures());
    let diags: Vec<_> = ok.iter().filter_map(|r| r.diagnostics).collect();
    let max = |f: &dyn Fn(&crate::detection::Diagnostics) -> f64| {
        diags.iter().map(|d| f(d).abs()).fold(0.0f64, f64::max)
    };
    let _ = writeln!(s, "max |epsilon|: {:.3e}", max(&|d| d.epsilon));
    let _ = writeln!(
        s,
        "max boundary population: {:.3e}",
        max(&|d| d.max_boundary_population)
    );
    let _ = writeln!(s, "max norm drift: {:.3e}", max(&|d| d.max_norm_drift));
    let _ = writeln!(
        s,
        "max quadrature error: {:.3e}",
        max(&|d| d.max_quad_error)
    );
    let evals: usize = diags.iter().map(|d| d.fringe_evaluations).sum();
    let _ = writeln!(s, "fringe evaluations: {evals}");
    let total: f64 = data.rows.iter().map(|r| r.runtime_s).sum();
    let _ = writeln!(s, "total row runtime: {total:.2} s");
    for r in data.rows.iter().filter(|r| !r.is_ok()) {
        let _ = writeln!(
            s,
            "failed: N={} w_mm={} theta_uK={} T_b_s={}: {}",
            r.power, r.w_mm, r.theta_uk, r.t_b_s, r.status
        );
    }
    s
}

/// Sidecar path of the summary written next to `csv_path`.
pub fn summary_path(csv_path: &Path) -> PathBuf {
    let mut p = csv_path.as_os_str().to_owned();
    p.push(".summary.txt");
    PathBuf::from(p)
}

/// Write `data` as CSV to `path` and the summary next to it.
pub fn emit_report(data: &Dataset, path: &Path) -> Result<()> {
    if data.rows.is_empty() {
        return Err(Error::InvalidParameter("empty dataset".into()));
    }
    fs::write(path, to_csv(data)?)?;
    fs::write(summary_path(path), summary(data))?;
    Ok(())
}

fn parse_num(s: &str, col: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| Error::Parse(format!("column {col}: not a number: {s}")))
}

/// Read a CSV written by [`emit_report`] (diagnostics other than ε are not
/// stored and come back empty).
pub fn read_report(path: &Path) -> Result<Dataset> {
    let mut rd = csv::Reader::from_path(path)?;
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    let col = |name: &str| header.iter().position(|h| h == name);
    let need = |name: &str| col(name).ok_or_else(|| Error::Parse(format!("missing column {name}")));
    let mut rows = Vec::new();
    let mut name = String::new();
    for rec in rd.records() {
        let rec = rec?;
        let get = |c: &str| -> Result<&str> { Ok(rec.get(need(c)?).unwrap_or("")) };
        let f = |c: &str| -> Result<f64> {
            parse_num(get(c)?, c)?.ok_or_else(|| Error::Parse(format!("column {c} is empty")))
        };
        let comparison = match col("ratio") {
            Some(_) => match (
                parse_num(get("shift_numeric")?, "shift_numeric")?,
                parse_num(get("shift_analytic")?, "shift_analytic")?,
                parse_num(get("ratio")?, "ratio")?,
            ) {
                (Some(a), Some(b), Some(r)) => Some(WeakComparison {
                    shift_numeric: a,
                    shift_analytic: b,
                    ratio: r,
                }),
                _ => None,
            },
            None => None,
        };
        name = get("preset")?.to_string();
        rows.push(Row {
            preset: name.clone(),
            power: get("N")?
                .parse()
                .map_err(|_| Error::Parse("column N".into()))?,
            w_mm: f("w_mm")?,
            theta_uk: f("theta_uK")?,
            t_b_s: f("T_b_s")?,
            t_s: f("T_s")?,
            half_width_mm: f("half_width_mm")?,
            shift_rel: parse_num(get("shift_rel")?, "shift_rel")?,
            contrast: parse_num(get("contrast")?, "contrast")?,
            epsilon_47: parse_num(get("epsilon_47")?, "epsilon_47")?,
            samples: get("samples")?
                .parse()
                .map_err(|_| Error::Parse("column samples".into()))?,
            runtime_s: f("runtime_s")?,
            comparison,
            status: get("status")?.to_string(),
            diagnostics: None,
        });
    }
    Ok(Dataset { name, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(shift: Option<f64>) -> Row {
        Row {
            preset: "table1".into(),
            power: 3,
            w_mm: 1.0,
            theta_uk: 0.8,
            t_b_s: 0.15,
            t_s: 0.5,
            half_width_mm: 5.0,
            shift_rel: shift,
            contrast: Some(0.987654321987),
            epsilon_47: Some(-1.234567891234e-9),
            samples: 32,
            runtime_s: 0.25,
            comparison: None,
            status: if shift.is_some() {
                "ok".into()
            } else {
                "error: boom, \"quoted\"".into()
            },
            diagnostics: None,
        }
    }

    fn close(a: f64, b: f64) -> bool {
        a == b || ((a - b) / a).abs() < 1e-6
    }

    #[test]
    fn single_row_is_two_lines() {
        let d = Dataset {
            name: "table1".into(),
            rows: vec![row(Some(-3.555e-16))],
        };
        let text = to_csv(&d).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("preset,N,w_mm,theta_uK,T_b_s,T_s,half_width_mm,shift_rel,"));
        assert!(text.contains("-3.555000000e-16"));
    }

    #[test]
    fn round_trip() {
        let mut r2 = row(None);
        r2.comparison = None;
        let mut r3 = row(Some(7.5e-17));
        r3.comparison = Some(WeakComparison {
            shift_numeric: 7.5e-17,
            shift_analytic: 7.4e-17,
            ratio: 7.5 / 7.4,
        });
        let d = Dataset {
            name: "table1".into(),
            rows: vec![row(Some(1.185e-16)), r2, r3],
        };
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        emit_report(&d, &p).unwrap();
        assert!(summary_path(&p).exists());
        let back = read_report(&p).unwrap();
        assert_eq!(back.rows.len(), 3);
        for (a, b) in d.rows.iter().zip(&back.rows) {
            assert_eq!(a.status, b.status);
            assert_eq!(a.power, b.power);
            assert!(close(a.w_mm, b.w_mm) && close(a.t_b_s, b.t_b_s));
            assert_eq!(a.shift_rel.is_some(), b.shift_rel.is_some());
            if let (Some(x), Some(y)) = (a.shift_rel, b.shift_rel) {
                assert!(close(x, y));
            }
            assert!(close(a.contrast.unwrap(), b.contrast.unwrap()));
            assert!(close(a.epsilon_47.unwrap(), b.epsilon_47.unwrap()));
            assert_eq!(a.comparison.is_some(), b.comparison.is_some());
        }
        let s = fs::read_to_string(summary_path(&p)).unwrap();
        assert!(s.contains("rows: 3 (1 failed)"));
    }

    #[test]
    fn empty_dataset_rejected() {
        let d = Dataset {
            name: "x".into(),
            rows: vec![],
        };
        let dir = tempfile::tempdir().unwrap();
        assert!(emit_report(&d, &dir.path().join("a.csv")).is_err());
    }
}
