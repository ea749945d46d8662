//! Named polytopes with their expected properties.
//!
//! Parametric names: `A{n}`, `D{n}`, `cube{n}`, `simplexPn{n}`,
//! `segment{a}` (the interval `[−a, a]`), and the suffix `_doublecone`
//! applied to any name.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Point, Polytope, MAX_DIM};
use crate::stability::Status;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Expected {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reflexive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub special: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Status>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub polytope: Polytope,
    pub expected: Expected,
    pub notes: Vec<&'static str>,
}

const FIXED: &[&str] = &[
    "X3",
    "X4",
    "X6",
    "X8",
    "X9",
    "D_X3",
    "D_X4",
    "D_X6",
    "D_X8",
    "D_X9",
    "X3_x_segment",
    "X4_x_segment",
    "X6_x_segment",
    "X8_x_segment",
    "X9_x_segment",
    "A2",
    "A3",
    "A4",
    "A5",
    "D2",
    "D3",
    "D4",
    "D5",
    "cube1",
    "cube2",
    "cube3",
    "cube4",
    "cube5",
    "simplexPn1",
    "simplexPn2",
    "simplexPn3",
    "simplexPn4",
    "P3_blowup4",
    "P3_blowup4_dual",
    "cuboctahedron",
    "rhombic_dodecahedron",
    "P3modZ4",
    "segment3_doublecone",
    "cube6_doublecone",
    "cube7_doublecone",
];

/// Catalog names in their fixed order.
pub fn list() -> Vec<&'static str> {
    FIXED.to_vec()
}

/// All listed entries, in order.
pub fn entries() -> Vec<CatalogEntry> {
    FIXED.iter().map(|n| get(n).expect("listed names resolve")).collect()
}

fn hull(v: Vec<Point>) -> Polytope {
    Polytope::new(v).expect("catalog polytopes are full-dimensional")
}

fn unit(n: usize, i: usize, s: i64) -> Point {
    let mut e = vec![0; n];
    e[i] = s;
    e
}

fn parse_suffix(name: &str, prefix: &str) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.starts_with('0') {
        return None;
    }
    rest.parse().ok()
}

fn polygon(name: &str) -> Option<Vec<Point>> {
    Some(match name {
        "X3" => vec![vec![-1, -1], vec![1, 0], vec![0, 1]],
        "X4" => vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
        "X6" => vec![vec![0, 1], vec![0, -1], vec![1, 0], vec![-1, 0], vec![1, -1], vec![-1, 1]],
        "X8" => vec![vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]],
        "X9" => vec![vec![-1, -1], vec![2, -1], vec![-1, 2]],
        _ => return None,
    })
}

fn segment(a: i64) -> Polytope {
    hull(vec![vec![-a], vec![a]])
}

fn cube(n: usize) -> Polytope {
    let mut p = segment(1);
    for _ in 1..n {
        p = Polytope::product(&p, &segment(1));
    }
    p
}

fn polytope_of(name: &str) -> Result<Polytope> {
    if let Some(base) = name.strip_suffix("_doublecone") {
        let q = polytope_of(base)?;
        if q.dim() + 1 > MAX_DIM {
            return Err(Error::UnsupportedDimension(q.dim() + 1));
        }
        return Polytope::double_cone(&q);
    }
    if let Some(v) = polygon(name) {
        return Ok(hull(v));
    }
    if let Some(base) = name.strip_prefix("D_") {
        if let Some(v) = polygon(base) {
            return Polytope::double_cone(&hull(v));
        }
    }
    if let Some(base) = name.strip_suffix("_x_segment") {
        if let Some(v) = polygon(base) {
            return Ok(Polytope::product(&hull(v), &segment(1)));
        }
    }
    let three = |v: &[[i64; 3]]| hull(v.iter().map(|p| p.to_vec()).collect());
    match name {
        "P3_blowup4" => {
            return Ok(three(&[
                [0, -1, -1],
                [-1, 0, -1],
                [-1, -1, 0],
                [2, -1, -1],
                [2, -1, 0],
                [2, 0, -1],
                [-1, 2, -1],
                [-1, 2, 0],
                [0, 2, -1],
                [-1, -1, 2],
                [-1, 0, 2],
                [0, -1, 2],
            ]))
        }
        "P3_blowup4_dual" => {
            return Ok(three(&[
                [1, 0, 0],
                [-1, 0, 0],
                [0, 1, 0],
                [0, -1, 0],
                [0, 0, 1],
                [0, 0, -1],
                [-1, -1, -1],
                [1, 1, 1],
            ]))
        }
        "cuboctahedron" => {
            return Ok(three(&[
                [1, 0, 0],
                [-1, 0, 0],
                [0, 1, 0],
                [0, -1, 0],
                [1, -1, 0],
                [-1, 1, 0],
                [0, 0, 1],
                [0, 0, -1],
                [1, 0, -1],
                [-1, 0, 1],
                [0, 1, -1],
                [0, -1, 1],
            ]))
        }
        "rhombic_dodecahedron" => {
            return Ok(three(&[
                [1, 0, 0],
                [1, 1, 0],
                [0, 1, 0],
                [-1, 0, 0],
                [-1, -1, 0],
                [0, -1, 0],
                [0, 0, 1],
                [1, 0, 1],
                [1, 1, 1],
                [0, 1, 1],
                [0, 0, -1],
                [-1, 0, -1],
                [-1, -1, -1],
                [0, -1, -1],
            ]))
        }
        "P3modZ4" => return polytope_of("A3"),
        _ => {}
    }
    let bounded = |n: usize, lo: usize| -> Result<usize> {
        if n < lo || n > MAX_DIM {
            Err(Error::UnsupportedDimension(n))
        } else {
            Ok(n)
        }
    };
    if let Some(n) = parse_suffix(name, "simplexPn") {
        let n = bounded(n, 1)?;
        let mut v = vec![vec![-1i64; n]];
        for i in 0..n {
            let mut p = vec![-1i64; n];
            p[i] = n as i64;
            v.push(p);
        }
        return Ok(hull(v));
    }
    if let Some(n) = parse_suffix(name, "cube") {
        return Ok(cube(bounded(n, 1)?));
    }
    if let Some(a) = parse_suffix(name, "segment") {
        return Ok(segment(a.min(1 << 20) as i64));
    }
    if let Some(n) = parse_suffix(name, "A") {
        let n = bounded(n, 1)?;
        let mut v: Vec<Point> = (0..n).map(|i| unit(n, i, 1)).collect();
        v.push(vec![-1; n]);
        return Ok(hull(v));
    }
    if let Some(n) = parse_suffix(name, "D") {
        let n = bounded(n, 1)?;
        let v = (0..n).flat_map(|i| [unit(n, i, 1), unit(n, i, -1)]).collect();
        return Ok(hull(v));
    }
    Err(Error::UnknownName(name.to_string()))
}

fn expectations(name: &str) -> (Expected, Vec<&'static str>) {
    let special = |s: bool, v: Status| Expected {
        reflexive: Some(true),
        symmetric: Some(true),
        special: Some(s),
        verdict: Some(v),
    };
    let mut notes = Vec::new();
    let e = match name {
        "X3" | "X4" | "X6" | "X8" | "X9" | "D_X3" | "D_X4" | "D_X6" => special(true, Status::Polystable),
        "D_X8" | "D_X9" => special(false, Status::Polystable),
        "P3_blowup4_dual" | "cuboctahedron" | "rhombic_dodecahedron" | "P3modZ4" => {
            special(true, Status::Polystable)
        }
        "P3_blowup4" => {
            notes.push("as listed, the facet x₁ + x₂ + x₃ ≥ −2 lies at lattice distance 2 from the origin");
            special(true, Status::Polystable)
        }
        _ if name.ends_with("_x_segment") => special(true, Status::Polystable),
        _ if parse_suffix(name, "A").is_some() || parse_suffix(name, "D").is_some() => {
            special(true, Status::Polystable)
        }
        _ if matches!(parse_suffix(name, "simplexPn"), Some(1..=3)) => special(true, Status::Polystable),
        _ if parse_suffix(name, "simplexPn").is_some() || parse_suffix(name, "cube").is_some() => Expected {
            reflexive: Some(true),
            symmetric: Some(true),
            ..Expected::default()
        },
        _ if name.ends_with("_doublecone") => {
            let base = name.trim_end_matches("_doublecone");
            let q = polytope_of(base).ok();
            let unstable = q.map(|q| {
                let n = q.dim() as i64;
                q.volume() >= crate::arith::rat((n + 2) * (n + 1))
            });
            Expected {
                verdict: if unstable == Some(true) { Some(Status::NotSemistable) } else { None },
                ..Expected::default()
            }
        }
        _ => Expected::default(),
    };
    match name {
        "X8" => notes.push("the square, anticanonical polytope of P¹ × P¹"),
        "X9" => notes.push("the triangle, anticanonical polytope of P²"),
        "A2" => notes.push("same vertex set as X3"),
        "P3modZ4" => notes.push("same vertex set as A3"),
        _ => {}
    }
    (e, notes)
}

/// Look up a name.
pub fn get(name: &str) -> Result<CatalogEntry> {
    let polytope = polytope_of(name)?;
    let (expected, notes) = expectations(name);
    Ok(CatalogEntry { name: name.to_string(), polytope, expected, notes })
}

/// The catalog name of a polytope with exactly these vertices, if any.
pub fn identify(p: &Polytope) -> Option<String> {
    if p.dim() == 1 {
        let (a, b) = (p.vertices()[0][0], p.vertices()[1][0]);
        return match (a, b) {
            (-1, 1) => Some("cube1".into()),
            _ if a == -b && b > 1 => Some(format!("segment{b}")),
            _ => None,
        };
    }
    FIXED
        .iter()
        .filter_map(|name| polytope_of(name).ok().map(|q| (name, q)))
        .find(|(_, q)| q.dim() == p.dim() && q.vertices() == p.vertices())
        .map(|(name, _)| name.to_string())
}
