//! CSV and SVG output of solver runs.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use crate::solver::{
    decay_series, run_inequality, DecayRow, RunRecord, SliceSummary, SystemRun, DECAY_REGIONS,
};

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("writing {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

pub type Result<T> = std::result::Result<T, ReportError>;

fn num(x: f64) -> String {
    format!("{x:.12e}")
}

/// `t, l2_i…, sup_i…, estar_i…, support`.
pub fn write_run_csv<W: io::Write>(out: W, run: &RunRecord) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let n = run.components;
    let mut header = vec!["t".to_string()];
    for prefix in ["l2", "sup", "estar"] {
        header.extend((1..=n).map(|c| format!("{prefix}_{c}")));
    }
    header.push("support".into());
    w.write_record(&header)?;
    for row in &run.history {
        let mut rec = vec![num(row.t)];
        rec.extend(
            row.l2
                .iter()
                .chain(&row.sup)
                .chain(&row.flat_energy)
                .map(|&v| num(v)),
        );
        rec.push(num(row.support));
        w.write_record(&rec)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// One row per slice and component with the energy columns and inequality margin.
pub fn write_slices_csv<W: io::Write>(out: W, summaries: &[SliceSummary]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "T",
        "component",
        "E1",
        "E2",
        "E3",
        "spread",
        "EG",
        "mass_term",
        "margin",
        "complete",
    ])?;
    let n = summaries.first().map_or(0, |s| s.energies.len());
    let margins: Vec<Vec<(f64, f64)>> = (0..n)
        .map(|c| {
            run_inequality(summaries, c)
                .map(|rows| rows.into_iter().map(|r| (r.big_t, r.margin)).collect())
                .unwrap_or_default()
        })
        .collect();
    for s in summaries {
        for (c, e) in s.energies.iter().enumerate() {
            let margin = margins[c]
                .iter()
                .find(|(t, _)| *t == s.big_t)
                .map_or(String::new(), |(_, m)| num(*m));
            w.write_record([
                num(s.big_t),
                (c + 1).to_string(),
                num(e.e1),
                num(e.e2),
                num(e.e3),
                num(e.spread),
                num(e.curved),
                num(e.mass_term),
                margin,
                s.complete.to_string(),
            ])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `component, region, exponent, stderr, points`.
pub fn write_decay_csv<W: io::Write>(out: W, rows: &[DecayRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["component", "region", "exponent", "stderr", "points"])?;
    for r in rows {
        w.write_record([
            r.component.to_string(),
            r.region.to_string(),
            num(r.fit.exponent),
            num(r.fit.stderr),
            r.fit.points.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// Log-log line plot of positive `(x, y)` series; non-positive points are dropped.
pub fn loglog_svg(title: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let (w, h, pad) = (640.0, 420.0, 60.0);
    let pts: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|(_, s)| s.iter().copied())
        .filter(|&(x, y)| x > 0.0 && y > 0.0)
        .map(|(x, y)| (x.log10(), y.log10()))
        .collect();
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#,
        w / 2.0,
        escape(title)
    );
    if pts.is_empty() {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle">no data</text>"#,
            w / 2.0,
            h / 2.0
        );
        svg.push_str("</svg>\n");
        return svg;
    }
    let bounds = |sel: fn(&(f64, f64)) -> f64| {
        let lo = pts.iter().map(sel).fold(f64::INFINITY, f64::min).floor();
        let hi = pts.iter().map(sel).fold(f64::NEG_INFINITY, f64::max).ceil();
        (lo, if hi > lo { hi } else { lo + 1.0 })
    };
    let (x0, x1) = bounds(|p| p.0);
    let (y0, y1) = bounds(|p| p.1);
    let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);
    let _ = writeln!(
        svg,
        r#"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    for d in (x0 as i32)..=(x1 as i32) {
        let x = sx(f64::from(d));
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.1}" y1="{pad}" x2="{x:.1}" y2="{:.1}" stroke="#ddd"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">1e{d}</text>"##,
            h - pad,
            h - pad + 16.0
        );
    }
    for d in (y0 as i32)..=(y1 as i32) {
        let y = sy(f64::from(d));
        let _ = writeln!(
            svg,
            r##"<line x1="{pad}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">1e{d}</text>"##,
            w - pad,
            pad - 6.0,
            y + 4.0
        );
    }
    for (k, (label, s)) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let path: Vec<String> = s
            .iter()
            .filter(|&&(x, y)| x > 0.0 && y > 0.0)
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x.log10()), sy(y.log10())))
            .collect();
        if path.is_empty() {
            continue;
        }
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
            path.join(" ")
        );
        let ly = pad + 16.0 * (k as f64 + 1.0);
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{ly:.1}" fill="{colour}">{}</text>"#,
            pad + 8.0,
            escape(label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Decay suprema of every component and region against `T`.
pub fn decay_svg(summaries: &[SliceSummary]) -> String {
    let n = summaries.first().map_or(0, |s| s.decay.len());
    let mut series = Vec::new();
    for c in 0..n {
        for region in DECAY_REGIONS {
            let s = decay_series(summaries, c, region);
            if s.len() >= 2 {
                series.push((format!("u{} {region}", c + 1), s));
            }
        }
    }
    loglog_svg("decay suprema vs T", &series)
}

fn create(dir: &Path, name: &str) -> Result<std::fs::File> {
    let path = dir.join(name);
    std::fs::File::create(&path).map_err(|source| ReportError::Io { path, source })
}

/// Writes `run.csv`, `slices.csv`, `decay.csv` and `decay.svg` into `dir`, creating it if needed.
pub fn write_reports(dir: &Path, run: &SystemRun) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|source| ReportError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    write_run_csv(create(dir, "run.csv")?, &run.record)?;
    write_slices_csv(create(dir, "slices.csv")?, &run.summaries)?;
    write_decay_csv(create(dir, "decay.csv")?, &run.decay)?;
    let svg_path = dir.join("decay.svg");
    std::fs::write(&svg_path, decay_svg(&run.summaries)).map_err(|source| ReportError::Io {
        path: svg_path.clone(),
        source,
    })?;
    Ok(["run.csv", "slices.csv", "decay.csv", "decay.svg"]
        .iter()
        .map(|f| dir.join(f))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_is_well_formed() {
        let s = loglog_svg(
            "t<1>",
            &[("a".into(), vec![(1.0, 1.0), (10.0, 0.01), (20.0, -1.0)])],
        );
        assert!(s.starts_with("<svg"));
        assert!(s.trim_end().ends_with("</svg>"));
        assert!(s.contains("polyline"));
        assert!(s.contains("t&lt;1&gt;"));
        assert!(loglog_svg("empty", &[]).contains("no data"));
    }

    #[test]
    fn decay_csv_columns() {
        let rows = vec![DecayRow {
            component: 1,
            region: "interior_value",
            fit: crate::solver::DecayFit {
                exponent: -1.5,
                stderr: 0.01,
                points: 6,
            },
        }];
        let mut buf = Vec::new();
        write_decay_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("component,region,exponent,stderr,points")
        );
        assert!(lines.next().unwrap().starts_with("1,interior_value,-1.5"));
    }
}
