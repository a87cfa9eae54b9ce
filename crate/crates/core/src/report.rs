//! CSV and SVG output for sweep results.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::sweep::{SweepResult, X_ENTRY_LABELS};

/// Fixed 12-significant-digit formatting so repeated runs are byte-identical.
pub fn format_value(x: f64) -> String {
    // -0.0 would otherwise print differently from 0.0
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub fn csv_header(with_matrix: bool) -> String {
    let mut header = String::from("kappa_t,concurrence,pop_sum,ent_formation");
    if with_matrix {
        for (label, _, _) in X_ENTRY_LABELS {
            let _ = write!(header, ",{label}_re,{label}_im");
        }
    }
    header
}

pub fn write_csv<W: Write>(result: &SweepResult, mut out: W) -> io::Result<()> {
    let with_matrix = result.rows.first().is_some_and(|r| r.matrix.is_some());
    writeln!(out, "{}", csv_header(with_matrix))?;
    for row in &result.rows {
        let mut line = [row.kappa_t, row.concurrence, row.pop_sum, row.ent_formation]
            .iter()
            .map(|&v| format_value(v))
            .collect::<Vec<_>>()
            .join(",");
        if let Some(m) = row.matrix {
            for z in m {
                let _ = write!(line, ",{},{}", format_value(z.re), format_value(z.im));
            }
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;

/// Concurrence (solid) and population sum (dotted) against κt.
pub fn write_svg<W: Write>(result: &SweepResult, title: &str, mut out: W) -> io::Result<()> {
    let (t0, t1) = match (result.rows.first(), result.rows.last()) {
        (Some(a), Some(b)) if b.kappa_t > a.kappa_t => (a.kappa_t, b.kappa_t),
        _ => (0.0, 1.0),
    };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x = |t: f64| LEFT + (t - t0) / (t1 - t0) * plot_w;
    let y = |v: f64| TOP + (1.0 - v.clamp(0.0, 1.0)) * plot_h;

    let path = |values: &dyn Fn(usize) -> f64| {
        let mut d = String::new();
        for (i, row) in result.rows.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{cmd}{:.2},{:.2} ", x(row.kappa_t), y(values(i)));
        }
        d
    };
    let c_path = path(&|i| result.rows[i].concurrence);
    let p_path = path(&|i| result.rows[i].pop_sum);

    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )?;
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(
        out,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    )?;
    writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    )?;
    for k in 0..=5 {
        let v = k as f64 / 5.0;
        writeln!(
            out,
            r#"<line x1="{LEFT}" y1="{yy:.2}" x2="{x2:.2}" y2="{yy:.2}" stroke="black"/><text x="{tx:.2}" y="{ty:.2}" text-anchor="end">{v:.1}</text>"#,
            yy = y(v),
            x2 = LEFT + 5.0,
            tx = LEFT - 6.0,
            ty = y(v) + 4.0,
        )?;
    }
    for k in 0..=5 {
        let t = t0 + (t1 - t0) * k as f64 / 5.0;
        writeln!(
            out,
            r#"<line x1="{xx:.2}" y1="{y1:.2}" x2="{xx:.2}" y2="{y2:.2}" stroke="black"/><text x="{xx:.2}" y="{ty:.2}" text-anchor="middle">{t}</text>"#,
            xx = x(t),
            y1 = TOP + plot_h,
            y2 = TOP + plot_h - 5.0,
            ty = TOP + plot_h + 18.0,
            t = trim_number(t),
        )?;
    }
    writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">κt</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 14.0
    )?;
    writeln!(
        out,
        r#"<path d="{c_path}" fill="none" stroke="black" stroke-width="1.5"/>"#
    )?;
    writeln!(
        out,
        r#"<path d="{p_path}" fill="none" stroke="black" stroke-width="1.2" stroke-dasharray="2,3"/>"#
    )?;
    let lx = LEFT + plot_w - 150.0;
    writeln!(
        out,
        r#"<line x1="{lx}" y1="{ly}" x2="{lx2}" y2="{ly}" stroke="black" stroke-width="1.5"/><text x="{tx}" y="{ty}">C</text>"#,
        ly = TOP + 16.0,
        lx2 = lx + 30.0,
        tx = lx + 36.0,
        ty = TOP + 20.0,
    )?;
    writeln!(
        out,
        r#"<line x1="{lx}" y1="{ly}" x2="{lx2}" y2="{ly}" stroke="black" stroke-width="1.2" stroke-dasharray="2,3"/><text x="{tx}" y="{ty}">ρ22 + ρ33</text>"#,
        ly = TOP + 34.0,
        lx2 = lx + 30.0,
        tx = lx + 36.0,
        ty = TOP + 38.0,
    )?;
    writeln!(out, "</svg>")
}

fn trim_number(t: f64) -> String {
    let s = format!("{t:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{run_sweep, RunConfig};

    #[test]
    fn csv_has_header_and_fixed_precision() {
        let cfg = RunConfig {
            steps: 3,
            ..RunConfig::default()
        };
        let mut buf = Vec::new();
        write_csv(&run_sweep(&cfg).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "kappa_t,concurrence,pop_sum,ent_formation");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0.00000000000e0,0.00000000000e0,"));
        assert!(lines[3].starts_with("1.00000000000e1,"));
    }

    #[test]
    fn matrix_dump_adds_sixteen_columns() {
        let cfg = RunConfig {
            steps: 2,
            dump_matrix: true,
            ..RunConfig::default()
        };
        let mut buf = Vec::new();
        write_csv(&run_sweep(&cfg).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        for line in text.lines() {
            assert_eq!(line.split(',').count(), 20);
        }
        assert!(text
            .starts_with("kappa_t,concurrence,pop_sum,ent_formation,rho11_re,rho11_im,rho22_re"));
    }

    #[test]
    fn svg_is_self_contained() {
        let cfg = RunConfig {
            steps: 50,
            ..RunConfig::default()
        };
        let mut buf = Vec::new();
        write_svg(&run_sweep(&cfg).unwrap(), "vacuum <eg>", &mut buf).unwrap();
        let svg = String::from_utf8(buf).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("stroke-dasharray"));
        assert!(svg.contains("vacuum &lt;eg&gt;"));
        assert!(!svg.contains("href"));
    }
}
