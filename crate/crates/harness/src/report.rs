//! CSV and SVG output of summary rows.

use crate::error::{HarnessError, Result};
use crate::experiment::SummaryRow;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

pub const CSV_HEADER: &str = "algorithm,matrix_type,signal_kind,K,trials,failures,error_rate,mean_runtime_ms,seed";
/// Error rates below this are drawn at this value on a log axis.
pub const LOG_FLOOR: f64 = 1e-4;

pub fn to_csv(rows: &[SummaryRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| HarnessError::io("<csv buffer>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn from_csv(text: &str) -> Result<Vec<SummaryRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != CSV_HEADER {
        return Err(HarnessError::Config(format!(
            "unexpected CSV header {:?}",
            header.join(",")
        )));
    }
    Ok(r.deserialize().collect::<std::result::Result<Vec<SummaryRow>, _>>()?)
}

pub fn write_csv(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    std::fs::write(path, to_csv(rows)?).map_err(|e| HarnessError::io(path, e))
}

pub fn read_csv(path: &Path) -> Result<Vec<SummaryRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    from_csv(&text)
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Line chart of error rate against `K`, one series per
/// (algorithm, matrix type, signal kind).
pub fn to_svg(rows: &[SummaryRow], log_y: bool) -> Result<String> {
    if rows.is_empty() {
        return Err(HarnessError::Config("nothing to plot".into()));
    }
    let mut series: BTreeMap<(String, String, String), Vec<(usize, f64)>> = BTreeMap::new();
    for r in rows {
        series
            .entry((r.algorithm.clone(), r.matrix_type.clone(), r.signal_kind.clone()))
            .or_default()
            .push((r.k, r.error_rate));
    }
    for pts in series.values_mut() {
        pts.sort_by_key(|p| p.0);
    }
    let k_lo = rows.iter().map(|r| r.k).min().unwrap() as f64;
    let k_hi = (rows.iter().map(|r| r.k).max().unwrap() as f64).max(k_lo + 1.0);

    let (w, h) = (640.0, 420.0);
    let (left, right, top, bottom) = (60.0, 180.0, 20.0, 50.0);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let x_of = |k: f64| left + (k - k_lo) / (k_hi - k_lo) * pw;
    let y_of = |rate: f64| {
        let t = if log_y {
            (rate.max(LOG_FLOOR).log10() - LOG_FLOOR.log10()) / -LOG_FLOOR.log10()
        } else {
            rate
        };
        top + (1.0 - t) * ph
    };

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    let ticks: Vec<f64> = if log_y {
        vec![1e-4, 1e-3, 1e-2, 1e-1, 1.0]
    } else {
        vec![0.0, 0.25, 0.5, 0.75, 1.0]
    };
    for t in ticks {
        let y = y_of(t);
        writeln!(
            s,
            r##"<line x1="{left}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/>"##,
            left + pw
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{t}</text>"#,
            left - 4.0,
            y + 4.0
        )
        .unwrap();
    }
    let step = ((k_hi - k_lo) / 10.0).ceil().max(1.0) as usize;
    for k in (k_lo as usize..=k_hi as usize).step_by(step) {
        let x = x_of(k as f64);
        writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{k}</text>"#,
            top + ph + 16.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">K</text>"#,
        left + pw / 2.0,
        h - 10.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">error rate</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    )
    .unwrap();
    for (i, ((alg, mt, sk), pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|&(k, r)| format!("{:.2},{:.2}", x_of(k as f64), y_of(r)))
            .collect();
        writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        )
        .unwrap();
        for &(k, r) in pts {
            writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
                x_of(k as f64),
                y_of(r)
            )
            .unwrap();
        }
        let ly = top + 14.0 * (i as f64 + 1.0);
        writeln!(
            s,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            left + pw + 10.0,
            left + pw + 30.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">{alg} / {mt} / {sk}</text>"#,
            left + pw + 34.0,
            ly + 4.0
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn write_svg(path: &Path, rows: &[SummaryRow], log_y: bool) -> Result<()> {
    std::fs::write(path, to_svg(rows, log_y)?).map_err(|e| HarnessError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(alg: &str, k: usize, failures: usize) -> SummaryRow {
        SummaryRow {
            algorithm: alg.into(),
            matrix_type: "ldpc".into(),
            signal_kind: "binary".into(),
            k,
            trials: 100,
            failures,
            error_rate: failures as f64 / 100.0,
            mean_runtime_ms: 0.0,
            seed: 9,
        }
    }

    #[test]
    fn one_row_two_lines() {
        let text = to_csv(&[row("omp", 3, 1)]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "omp,ldpc,binary,3,100,1,0.01,0.0,9");
    }

    #[test]
    fn csv_roundtrip_is_byte_identical() {
        let rows = vec![row("omp", 1, 0), row("omp", 2, 7), row("sp", 1, 0)];
        let a = to_csv(&rows).unwrap();
        let back = from_csv(&a).unwrap();
        assert_eq!(back, rows);
        assert_eq!(to_csv(&back).unwrap(), a);
    }

    #[test]
    fn rejects_foreign_header() {
        assert!(from_csv("a,b\n1,2\n").is_err());
    }

    #[test]
    fn svg_series_and_floor() {
        let rows = vec![row("omp", 1, 0), row("omp", 2, 50), row("sp", 1, 0), row("sp", 2, 100)];
        let svg = to_svg(&rows, true).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        // zero rates sit on the floor line at the bottom of the plot area
        assert!(svg.contains(r#"cy="370.00""#));
        assert_eq!(svg, to_svg(&rows, true).unwrap());
        assert!(to_svg(&[], false).is_err());
    }
}
