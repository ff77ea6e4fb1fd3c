use std::fmt::Write;

use monodromy::classify::explore::{parse_fix, slice_grid};
use monodromy::classify::{norm_expression, trace_polynomial, CanonicalC};
use monodromy::intpoly::BiPoly;
use monodromy::sl2z::primitive_vectors;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::{CliError, ExportKind};

const PANEL: f64 = 300.0;
const SCALE: f64 = 60.0;

struct Conic {
    label: &'static str,
    norm: BiPoly,
    level: i64,
}

fn conics() -> [Conic; 3] {
    [
        Conic {
            label: "N3 = 1",
            norm: CanonicalC::C3.norm(),
            level: 1,
        },
        Conic {
            label: "N4 = 2",
            norm: CanonicalC::C4.norm(),
            level: 2,
        },
        Conic {
            label: "N3 = 3",
            norm: CanonicalC::C3.norm(),
            level: 3,
        },
    ]
}

fn eval_f64(f: &BiPoly, x: f64, y: f64) -> f64 {
    f.terms()
        .map(|((i, j), c)| c.to_f64().unwrap_or(0.0) * x.powi(*i as i32) * y.powi(*j as i32))
        .sum()
}

/// Primitive points with `0 < N(v) <= level`.
fn lattice_points(c: &Conic) -> Vec<(i64, i64, bool)> {
    primitive_vectors(c.level + 1)
        .into_iter()
        .filter_map(|v| {
            let (p, q) = v.to_i64_pair()?;
            let n = c.norm.eval_i64(p, q).to_i64()?;
            (n <= c.level).then_some((p, q, n == c.level))
        })
        .collect()
}

pub fn conics_svg() -> (String, usize) {
    let mut s = String::new();
    let width = PANEL * 3.0;
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL}" viewBox="0 0 {width} {PANEL}">"#
    );
    let mut marked = 0;
    for (k, conic) in conics().iter().enumerate() {
        let ox = PANEL * k as f64 + PANEL / 2.0;
        let oy = PANEL / 2.0;
        let _ = writeln!(s, r#"<g id="conic-{k}">"#);
        let _ = writeln!(
            s,
            r##"<line x1="{}" y1="{oy}" x2="{}" y2="{oy}" stroke="#bbb"/>"##,
            ox - PANEL / 2.0 + 10.0,
            ox + PANEL / 2.0 - 10.0
        );
        let _ = writeln!(
            s,
            r##"<line x1="{ox}" y1="10" x2="{ox}" y2="{}" stroke="#bbb"/>"##,
            PANEL - 10.0
        );
        let mut path = Vec::new();
        for step in 0..=360 {
            let t = (step as f64).to_radians();
            let (dx, dy) = (t.cos(), t.sin());
            let r = (conic.level as f64 / eval_f64(&conic.norm, dx, dy)).sqrt();
            path.push(format!(
                "{:.2},{:.2}",
                ox + SCALE * r * dx,
                oy - SCALE * r * dy
            ));
        }
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="black" points="{}"/>"#,
            path.join(" ")
        );
        for (p, q, on) in lattice_points(conic) {
            let fill = if on { "red" } else { "blue" };
            let _ = writeln!(
                s,
                r#"<circle class="lattice" cx="{:.2}" cy="{:.2}" r="4" fill="{fill}"><title>({p}, {q})</title></circle>"#,
                ox + SCALE * p as f64,
                oy - SCALE * q as f64
            );
            marked += 1;
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14">{}</text>"#,
            ox - PANEL / 2.0 + 12.0,
            PANEL - 12.0,
            conic.label
        );
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    (s, marked)
}

#[derive(Serialize)]
struct TracePoly {
    case: CanonicalC,
    polynomial: String,
    norm: &'static str,
    in_norm: String,
    factored: String,
}

fn trace_polys(cfg: &RunConfig) -> Result<String, CliError> {
    let mut rows = Vec::new();
    for c in [CanonicalC::C3, CanonicalC::C4, CanonicalC::C6] {
        let e = norm_expression(c)?;
        rows.push(TracePoly {
            case: c,
            polynomial: trace_polynomial(c).display_with("p", "q").to_string(),
            norm: c.norm_name(),
            in_norm: e.in_norm.display_with(c.norm_name()).to_string(),
            factored: e.factored_text,
        });
    }
    match cfg.format {
        Format::Json => cfg.json(&rows),
        Format::Text => {
            let mut s = cfg.header();
            s.push('\n');
            for r in &rows {
                let _ = writeln!(s, "{}: f = {}", r.case, r.polynomial);
                let _ = writeln!(s, "    = {}", r.in_norm);
                let _ = writeln!(s, "    = {}", r.factored);
            }
            Ok(s)
        }
    }
}

pub fn run(
    cfg: &RunConfig,
    what: ExportKind,
    case: &str,
    fix: &[String],
    range: i64,
) -> Result<(), CliError> {
    let text = match what {
        ExportKind::Conics => conics_svg().0,
        ExportKind::Slices => {
            let c: CanonicalC = case.parse()?;
            let fixed = fix
                .iter()
                .map(|f| parse_fix(f))
                .collect::<Result<Vec<_>, _>>()?;
            let grid = slice_grid(c, &fixed, range)?;
            grid.to_csv()
        }
        ExportKind::TracePolys => trace_polys(cfg)?,
    };
    cfg.emit(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_point_counts() {
        let counts: Vec<usize> = conics().iter().map(|c| lattice_points(c).len()).collect();
        assert_eq!(counts, [6, 8, 12]);
        let on: Vec<usize> = conics()
            .iter()
            .map(|c| lattice_points(c).iter().filter(|p| p.2).count())
            .collect();
        assert_eq!(on, [6, 4, 6]);
        assert_eq!(conics_svg().1, 26);
    }
}
