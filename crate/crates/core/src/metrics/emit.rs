use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::experiment::{Experiment, ExperimentRecord, Method, ScalingFit};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s.trim() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            other => Err(Error::Config(format!("unknown format {other:?}"))),
        }
    }
}

/// Comma-separated list such as "csv,svg".
pub fn parse_formats(s: &str) -> Result<Vec<Format>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect()
}

/// The flat CSV view of a record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub body: String,
    pub dim: usize,
    pub eps: f64,
    pub method: Method,
    pub seed: u64,
    pub vertices: usize,
    pub total_faces: usize,
    pub hausdorff: f64,
    pub runtime_ms: u64,
}

impl From<&ExperimentRecord> for CsvRow {
    fn from(r: &ExperimentRecord) -> Self {
        CsvRow {
            body: r.body.clone(),
            dim: r.dim,
            eps: r.eps,
            method: r.method,
            seed: r.seed,
            vertices: r.counts.vertices,
            total_faces: r.counts.total,
            hausdorff: r.hausdorff_est,
            runtime_ms: r.runtime_ms,
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io { path: path.display().to_string(), cause: e.to_string() }
}

pub fn to_csv(records: &[ExperimentRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(CsvRow::from(r)).map_err(|e| Error::Config(e.to_string()))?;
    }
    if records.is_empty() {
        w.write_record(["body", "dim", "eps", "method", "seed", "vertices", "total_faces", "hausdorff", "runtime_ms"])
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Config(format!("csv: {e}")))
}

pub fn to_json(exp: &Experiment) -> String {
    serde_json::to_string_pretty(exp).expect("records serialize")
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Log-log scatter of total faces against 1/ε, one colour per
/// (body, dim, method) series, with the fitted line of each series that
/// has one.
pub fn to_svg(exp: &Experiment) -> String {
    let mut series: BTreeMap<(String, usize, Method), Vec<(f64, f64)>> = BTreeMap::new();
    for r in exp.records.iter().filter(|r| r.ok() && r.counts.total > 0) {
        series
            .entry((r.body.clone(), r.dim, r.method))
            .or_default()
            .push(((1.0 / r.eps).ln(), (r.counts.total as f64).ln()));
    }
    let all: Vec<(f64, f64)> = series.values().flatten().copied().collect();
    let (mut x0, mut x1, mut y0, mut y1) = (0.0, 1.0, 0.0, 1.0);
    if !all.is_empty() {
        x0 = all.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        x1 = all.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        y0 = all.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        y1 = all.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    }
    let pad = |a: f64, b: f64| if b - a < 1e-9 { (a - 0.5, b + 0.5) } else { (a - 0.05 * (b - a), b + 0.05 * (b - a)) };
    let ((x0, x1), (y0, y1)) = (pad(x0, x1), pad(y0, y1));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" viewBox="0 0 800 600">"#);
    let _ = writeln!(s, r#"<rect width="800" height="600" fill="white"/>"#);
    let (bx, by) = (MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(s, r#"<line x1="{bx}" y1="{by}" x2="{}" y2="{by}" stroke="black"/>"#, WIDTH - MARGIN);
    let _ = writeln!(s, r#"<line x1="{bx}" y1="{by}" x2="{bx}" y2="{MARGIN}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<text x="400" y="590" text-anchor="middle" font-size="14">1/ε (log)</text>"#);
    let _ = writeln!(
        s,
        r#"<text x="16" y="300" text-anchor="middle" font-size="14" transform="rotate(-90 16 300)">total faces (log)</text>"#
    );
    for (x, label) in [(x0, x0.exp()), (x1, x1.exp())] {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{}" text-anchor="middle" font-size="11">{label:.3}</text>"#,
            sx(x),
            by + 16.0
        );
    }
    for (y, label) in [(y0, y0.exp()), (y1, y1.exp())] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.1}" text-anchor="end" font-size="11">{label:.0}</text>"#,
            bx - 4.0,
            sy(y)
        );
    }
    for (i, ((body, dim, method), pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let name = format!("{body}/{dim}/{}", method.name());
        let _ = writeln!(s, r#"<g class="series" data-series="{name}" fill="{color}" stroke="{color}">"#);
        for &(x, y) in pts {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3"/>"#, sx(x), sy(y));
        }
        let fit: Option<&ScalingFit> =
            exp.fits.iter().find(|f| &f.body == body && f.dim == *dim && f.method == *method);
        if let Some(f) = fit {
            let (a, b) = (x0, x1);
            let _ = writeln!(
                s,
                r#"<line class="fit" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke-width="1.5"/>"#,
                sx(a),
                sy(f.slope * a + f.intercept),
                sx(b),
                sy(f.slope * b + f.intercept)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12" stroke="none">{name}{}</text>"#,
            WIDTH - MARGIN - 180.0,
            MARGIN + 16.0 * i as f64,
            fit.map(|f| format!(" slope {:.2}", f.slope)).unwrap_or_default()
        );
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

/// Writes `records.<ext>` (and `scaling.svg`) into `dir`, returning the
/// paths written.
pub fn emit(exp: &Experiment, formats: &[Format], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut out = Vec::new();
    for f in formats {
        let (name, text) = match f {
            Format::Json => ("records.json", to_json(exp)),
            Format::Csv => ("records.csv", to_csv(&exp.records)?),
            Format::Svg => ("scaling.svg", to_svg(exp)),
        };
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(|e| io_err(&path, e))?;
        out.push(path);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::Counts;

    fn record(method: Method, eps: f64, total: usize) -> ExperimentRecord {
        ExperimentRecord {
            body: "ball".into(),
            dim: 2,
            eps,
            method,
            seed: 3,
            counts: Counts { vertices: total / 2, faces_by_dim: vec![total / 2, total / 2], total },
            hausdorff_est: eps * 0.5,
            witness_count: None,
            collector_max_points: None,
            constants: None,
            histogram: None,
            error: None,
            runtime_ms: 12,
        }
    }

    #[test]
    fn one_row() {
        let csv = to_csv(&[record(Method::Bi, 0.1, 20)]).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "body,dim,eps,method,seed,vertices,total_faces,hausdorff,runtime_ms");
        assert_eq!(parse_csv(&csv).unwrap()[0], CsvRow::from(&record(Method::Bi, 0.1, 20)));
    }

    #[test]
    fn two_series() {
        let mut records = Vec::new();
        for (i, eps) in [0.1, 0.05, 0.02, 0.01].into_iter().enumerate() {
            records.push(record(Method::Layered, eps, 20 + 10 * i));
            records.push(record(Method::Dudley, eps, 16 + 8 * i));
        }
        let fits = super::super::experiment::scaling_fits(&records);
        let svg = to_svg(&Experiment { records, fits });
        assert_eq!(svg.matches(r#"class="fit""#).count(), 2);
        assert!(svg.contains(r#"viewBox="0 0 800 600""#));
    }

    #[test]
    fn unwritable_path() {
        let exp = Experiment::default();
        let err = emit(&exp, &[Format::Csv], Path::new("/proc/capcover-nope")).unwrap_err();
        assert!(matches!(err, Error::Io { ref path, .. } if path.contains("capcover-nope")));
    }
}
