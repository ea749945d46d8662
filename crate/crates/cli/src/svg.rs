use std::fmt::Write;

use anyhow::{bail, Result};
use chowtool_core::triangulation::Triangulation;
use chowtool_core::Polytope;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

fn project(x: &[i64]) -> (f64, f64) {
    let c = 3f64.sqrt() / 2.0;
    match x.len() {
        1 => (x[0] as f64, 0.0),
        2 => (x[0] as f64, -(x[1] as f64)),
        _ => {
            let (a, b, z) = (x[0] as f64, x[1] as f64, x[2] as f64);
            ((a - b) * c, (a + b) * 0.5 - z)
        }
    }
}

fn edges(p: &Polytope) -> Vec<(usize, usize)> {
    let m = p.vertices().len();
    if p.dim() == 1 {
        return vec![(0, 1)];
    }
    let on: Vec<Vec<usize>> = (0..p.facets().len()).map(|i| p.facet_vertices(i)).collect();
    let mut out = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            let mut face: Option<Vec<usize>> = None;
            for f in on.iter().filter(|f| f.contains(&a) && f.contains(&b)) {
                face = Some(match face {
                    None => f.clone(),
                    Some(g) => g.into_iter().filter(|v| f.contains(v)).collect(),
                });
            }
            if face.is_some_and(|f| f.len() == 2) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Isometric drawing of `p` with its lattice points and optional cells.
pub fn render(p: &Polytope, cells: Option<&Triangulation>) -> Result<String> {
    if p.dim() > 3 {
        bail!("svg output needs dimension at most 3, got {}", p.dim());
    }
    let pts = p.lattice_points(1);
    let proj: Vec<(f64, f64)> = pts.iter().map(|x| project(x)).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &proj {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let s = (SIZE - 2.0 * MARGIN) / (x1 - x0).max(y1 - y0).max(1.0);
    let map = |x: &[i64]| {
        let (a, b) = project(x);
        (MARGIN + (a - x0) * s, MARGIN + (b - y0) * s)
    };
    let mut doc = String::new();
    let _ = writeln!(doc, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(doc, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(t) = cells {
        for c in &t.simplices {
            let v = &c.vertices;
            for i in 0..v.len() {
                for j in i + 1..v.len() {
                    let (a, b) = (map(&v[i]), map(&v[j]));
                    let _ = writeln!(
                        doc,
                        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#9ab" stroke-width="0.6"/>"##,
                        a.0, a.1, b.0, b.1
                    );
                }
            }
        }
    }
    for (a, b) in edges(p) {
        let (a, b) = (map(&p.vertices()[a]), map(&p.vertices()[b]));
        let _ = writeln!(
            doc,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#222" stroke-width="1.6"/>"##,
            a.0, a.1, b.0, b.1
        );
    }
    for x in &pts {
        let (a, b) = map(x);
        let (r, fill) = if x.iter().all(|&c| c == 0) {
            (4.5, "#d33")
        } else if p.vertices().contains(x) {
            (4.0, "#222")
        } else {
            (2.2, "#678")
        };
        let _ = writeln!(doc, r#"<circle cx="{a:.2}" cy="{b:.2}" r="{r}" fill="{fill}"/>"#);
    }
    doc.push_str("</svg>\n");
    Ok(doc)
}
