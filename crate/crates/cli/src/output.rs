//! CSV and SVG files.

use std::fmt::Write as _;
use std::io::Write;

use num_complex::Complex64;
use z2pell::{CurveSet, Evaluation};

use crate::Failure;

fn csv_failure(e: csv::Error) -> Failure {
    Failure::Input(format!("cannot write CSV: {e}"))
}

/// `x, y, abs_f, signed_f` per point.
pub fn write_values<W: Write>(out: W, values: &[Evaluation]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "abs_f", "signed_f"]).map_err(csv_failure)?;
    for e in values {
        w.serialize((e.z.re, e.z.im, e.abs_value, e.signed_value))
            .map_err(csv_failure)?;
    }
    w.flush().map_err(|e| Failure::Input(format!("cannot write CSV: {e}")))
}

/// `curve_id, x, y`, each curve's points in order along it.
pub fn write_curves<W: Write>(out: W, cs: &CurveSet) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["curve_id", "x", "y"]).map_err(csv_failure)?;
    for (id, c) in cs.curves.iter().enumerate() {
        for p in &c.points {
            w.serialize((id, p.re, p.im)).map_err(csv_failure)?;
        }
    }
    w.flush().map_err(|e| Failure::Input(format!("cannot write CSV: {e}")))
}

/// Points `x,y` per line; a header line and blank lines are skipped.
pub fn read_points(path: &std::path::Path) -> Result<Vec<Complex64>, Failure> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: Option<(f64, f64)> = match (rec.get(0), rec.get(1)) {
            (Some(x), Some(y)) => x.parse().ok().zip(y.parse().ok()),
            _ => None,
        };
        match parsed {
            Some((x, y)) => out.push(Complex64::new(x, y)),
            None if line == 0 => {}
            None => {
                return Err(Failure::Input(format!(
                    "{}: line {} is not a pair of numbers",
                    path.display(),
                    line + 1
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(Failure::Input(format!("{}: no points", path.display())));
    }
    Ok(out)
}

/// Curves, roots and junctions in problem coordinates; `y` is flipped so
/// the imaginary axis points up.
pub fn svg(cs: &CurveSet, roots: &[Complex64]) -> String {
    let d = &cs.domain;
    let (w, h) = (d.re_max - d.re_min, d.im_max - d.im_min);
    let stroke = 0.002 * w.max(h);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        d.re_min,
        -d.im_max,
        w,
        h,
        (800.0 * h / w).round()
    );
    let _ = writeln!(
        s,
        r#"<rect x="{}" y="{}" width="{w}" height="{h}" fill="white" stroke="gray" stroke-width="{stroke}"/>"#,
        d.re_min, -d.im_max
    );
    for c in &cs.curves {
        let pts: Vec<String> = c.points.iter().map(|p| format!("{},{}", p.re, -p.im)).collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="{stroke}"/>"#,
            pts.join(" ")
        );
    }
    for r in roots {
        let _ = writeln!(
            s,
            r#"<circle class="root" cx="{}" cy="{}" r="{}" fill="crimson"/>"#,
            r.re,
            -r.im,
            3.0 * stroke
        );
    }
    for j in cs.junctions.iter().filter(|j| j.root.is_none()) {
        let a = 3.0 * stroke;
        let _ = writeln!(
            s,
            r#"<rect class="junction" x="{}" y="{}" width="{}" height="{}" fill="darkorange"/>"#,
            j.point.re - a,
            -j.point.im - a,
            2.0 * a,
            2.0 * a
        );
    }
    s.push_str("</svg>\n");
    s
}
