//! The `chowtool` command line.
//!
//! Inputs are a JSON file `{"name": optional, "dim": n, "vertices": [[..], ..]}`,
//! `catalog:NAME`, or a bare catalog name. Exit status: 0 on success, 1 on
//! input errors, 2 when `analyze` is inconclusive.

mod svg;

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use chowtool_core::arith::fmt_rat;
use chowtool_core::catalog;
use chowtool_core::ehrhart::ehrhart_polynomial;
use chowtool_core::geometry::PolytopeData;
use chowtool_core::stability::{classify_with, falsify_lp, Certificate, Status};
use chowtool_core::symmetry::{automorphism_group, centroid, is_symmetric, is_weakly_symmetric, Mode};
use chowtool_core::toricgen::{binomial_equations, indexed_points, HEADER};
use chowtool_core::triangulation::{
    boundary_triangulation, cone_over_boundary, verify_full, verify_regular_boundary, Triangulation,
};
use chowtool_core::Polytope;

#[derive(Parser, Debug)]
#[command(name = "chowtool", version, about = "Exact lattice-polytope toolkit for asymptotic Chow stability")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// JSON file, `catalog:NAME`, or a catalog name.
    pub input: String,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Write an SVG picture (dimension at most 3).
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Stability verdict with its check trail and certificate.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Largest dilation checked explicitly (default n + 3).
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        kmax: Option<i64>,
        /// Boundary triangulation `{"dim": n-1, "simplices": [...]}` to use instead of the built-in one.
        #[arg(long, value_name = "FILE")]
        triangulation: Option<PathBuf>,
    },
    /// Ehrhart polynomial and lattice-point counts.
    Ehrhart {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        kmax: Option<i64>,
    },
    /// Automorphism group, symmetry and weak symmetry.
    Symmetry {
        #[command(flatten)]
        common: Common,
    },
    /// Triangulation of kP or of its boundary, with its verification report.
    Triangulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(i64).range(1..))]
        k: i64,
        /// Triangulate the boundary only.
        #[arg(long)]
        boundary: bool,
        /// Boundary triangulation at k = 1 to refine instead of the built-in one.
        #[arg(long, value_name = "FILE")]
        triangulation: Option<PathBuf>,
    },
    /// Binomial equations of the toric variety.
    Equations {
        #[command(flatten)]
        common: Common,
    },
    /// The built-in polytope catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// LP search for a convex function with a negative gap.
    Falsify {
        #[command(flatten)]
        common: Common,
        /// A single dilation; otherwise every k up to --kmax.
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        k: Option<i64>,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        kmax: Option<i64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    List {
        #[arg(long)]
        json: bool,
    },
    Show {
        name: String,
        #[arg(long)]
        json: bool,
    },
}

/// Input errors map to exit status 1.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub struct Loaded {
    pub name: Option<String>,
    pub polytope: Polytope,
}

pub fn load(input: &str) -> Result<Loaded> {
    if let Some(name) = input.strip_prefix("catalog:") {
        let e = catalog::get(name).map_err(|e| InputError(e.to_string()))?;
        return Ok(Loaded { name: Some(e.name), polytope: e.polytope });
    }
    let path = Path::new(input);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {input}"))?;
        let data: PolytopeData =
            serde_json::from_str(&text).map_err(|e| InputError(format!("parse error in {input}: {e}")))?;
        let polytope = Polytope::from_data(&data).map_err(|e| InputError(e.to_string()))?;
        return Ok(Loaded { name: data.name, polytope });
    }
    match catalog::get(input) {
        Ok(e) => Ok(Loaded { name: Some(e.name), polytope: e.polytope }),
        Err(_) => Err(InputError(format!("no such file or catalog entry: {input}")).into()),
    }
}

fn load_triangulation(path: &Path) -> Result<Triangulation> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let t: Triangulation = serde_json::from_str(&text)
        .map_err(|e| InputError(format!("parse error in {}: {e}", path.display())))?;
    Ok(t.validated().map_err(|e| InputError(e.to_string()))?)
}

fn kmax_or_default(k: Option<i64>, p: &Polytope) -> i64 {
    k.unwrap_or(p.dim() as i64 + 3)
}

fn emit_json<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn write_svg(path: &Option<PathBuf>, p: &Polytope, cells: Option<&Triangulation>) -> Result<()> {
    if let Some(path) = path {
        let doc = svg::render(p, cells).map_err(|e| InputError(e.to_string()))?;
        std::fs::write(path, doc).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

/// Sets the worker count from `CHOWTOOL_THREADS` (default 1).
pub fn init_threads() {
    let n = std::env::var("CHOWTOOL_THREADS").ok().and_then(|s| s.parse::<usize>().ok()).unwrap_or(1).max(1);
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
}

/// Runs one command, writing its report to `out`; returns the exit status.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Analyze { common, kmax, triangulation } => {
            let l = load(&common.input)?;
            let p = &l.polytope;
            let t1 = triangulation.as_deref().map(load_triangulation).transpose()?;
            let mut v = classify_with(p, kmax_or_default(kmax, p), t1.as_ref());
            v.polytope.name = l.name.clone();
            write_svg(&common.svg, p, None)?;
            if common.json {
                emit_json(out, &v)?;
            } else {
                writeln!(out, "{}: {:?}", l.name.as_deref().unwrap_or("polytope"), v.status)?;
                if let Some(t) = &v.theorem {
                    writeln!(out, "by: {t}")?;
                }
                for c in &v.checks {
                    let mark = if c.pass { "pass" } else { "FAIL" };
                    let vals: Vec<String> = c.exact_values.iter().map(|(k, x)| format!("{k}={x}")).collect();
                    let ins: Vec<String> = c.inputs.iter().map(|(k, x)| format!("{k}={x}")).collect();
                    write!(out, "  [{mark}] {}", c.name)?;
                    if !ins.is_empty() {
                        write!(out, " ({})", ins.join(", "))?;
                    }
                    if !vals.is_empty() {
                        write!(out, ": {}", vals.join(", "))?;
                    }
                    if !c.detail.is_empty() {
                        write!(out, " -- {}", c.detail)?;
                    }
                    writeln!(out)?;
                }
                match &v.certificate {
                    Some(Certificate::Function { k, gap, persists_from, function }) => {
                        writeln!(
                            out,
                            "certificate: convex function at k = {k} on {} cells, gap {}",
                            function.triangulation.simplices.len(),
                            fmt_rat(gap)
                        )?;
                        if let Some(f) = persists_from {
                            writeln!(out, "negative for every k >= {f}")?;
                        }
                    }
                    Some(Certificate::FoWitness { witness, persists_from }) => {
                        writeln!(out, "certificate: FO(x{}, {}) = {}", witness.coordinate + 1, witness.k, fmt_rat(&witness.value))?;
                        if let Some(f) = persists_from {
                            writeln!(out, "nonzero for every k >= {f}")?;
                        }
                    }
                    Some(Certificate::Criterion { theorem }) => writeln!(out, "certificate: {theorem}")?,
                    Some(Certificate::Product { factors }) => {
                        for f in factors {
                            writeln!(out, "factor {}: {:?}", f.polytope.name.as_deref().unwrap_or("?"), f.status)?;
                        }
                    }
                    None => {}
                }
            }
            Ok(if v.status == Status::Inconclusive { 2 } else { 0 })
        }
        Command::Ehrhart { common, kmax } => {
            let l = load(&common.input)?;
            let p = &l.polytope;
            let kmax = kmax_or_default(kmax, p);
            let poly = ehrhart_polynomial(p)?;
            let table: Vec<(i64, String)> = (0..=kmax).map(|k| (k, p.count(k).to_string())).collect();
            write_svg(&common.svg, p, None)?;
            if common.json {
                emit_json(
                    out,
                    &json!({
                        "polytope": p.to_data(l.name.as_deref()),
                        "coefficients": poly,
                        "polynomial": poly.render(),
                        "volume": fmt_rat(&p.volume()),
                        "table": table,
                    }),
                )?;
            } else {
                writeln!(out, "chi(k) = {}", poly.render())?;
                writeln!(out, "k\tchi")?;
                for (k, c) in &table {
                    writeln!(out, "{k}\t{c}")?;
                }
            }
            Ok(0)
        }
        Command::Symmetry { common } => {
            let l = load(&common.input)?;
            let p = &l.polytope;
            let mode = if p.origin_interior() { Mode::Linear } else { Mode::Affine };
            let g = automorphism_group(p, mode)?;
            let symmetric = if p.origin_interior() { Some(is_symmetric(p)?) } else { None };
            let ws = is_weakly_symmetric(p);
            let c: Vec<String> = centroid(p).iter().map(fmt_rat).collect();
            write_svg(&common.svg, p, None)?;
            if common.json {
                emit_json(
                    out,
                    &json!({
                        "polytope": p.to_data(l.name.as_deref()),
                        "mode": format!("{mode:?}").to_lowercase(),
                        "group": g,
                        "symmetric": symmetric,
                        "weakly_symmetric": ws.holds,
                        "fo_witness": ws.witness,
                        "centroid": c,
                    }),
                )?;
            } else {
                writeln!(out, "{} automorphisms: {}", format!("{mode:?}").to_lowercase(), g.order)?;
                writeln!(out, "generators: {}", g.generators.len())?;
                match symmetric {
                    Some(s) => writeln!(out, "symmetric: {s}")?,
                    None => writeln!(out, "symmetric: n/a (origin not interior)")?,
                }
                writeln!(out, "weakly symmetric: {}", ws.holds)?;
                if let Some(w) = &ws.witness {
                    writeln!(out, "FO(x{}, {}) = {}", w.coordinate + 1, w.k, fmt_rat(&w.value))?;
                }
                writeln!(out, "centroid: ({})", c.join(", "))?;
            }
            Ok(0)
        }
        Command::Triangulate { common, k, boundary, triangulation } => {
            let l = load(&common.input)?;
            let p = &l.polytope;
            let user = triangulation.as_deref().map(load_triangulation).transpose()?;
            let bdry = match &user {
                Some(t) => {
                    let cells: Vec<Vec<chowtool_core::Point>> = t.simplices.iter().map(|s| s.vertices.clone()).collect();
                    Triangulation::new(t.dim, chowtool_core::triangulation::refine(&cells, k))
                }
                None => boundary_triangulation(p, k)?,
            };
            let (t, report) = if boundary {
                let r = verify_regular_boundary(p, &bdry, k);
                let v = serde_json::to_value(&r)?;
                (bdry, v)
            } else if p.is_reflexive() {
                let b1 = match &user {
                    Some(t) => t.clone(),
                    None => boundary_triangulation(p, 1)?,
                };
                let cone = cone_over_boundary(p, &b1)?;
                let cells: Vec<Vec<chowtool_core::Point>> = cone.simplices.iter().map(|s| s.vertices.clone()).collect();
                let t = Triangulation::new(p.dim(), chowtool_core::triangulation::refine(&cells, k));
                let r = verify_full(p, &t, k);
                let v = serde_json::to_value(&r)?;
                (t, v)
            } else {
                let (_, cells) = chowtool_core::stability::carrier(p, k)?;
                let t = Triangulation::new(p.dim(), cells);
                let r = verify_full(p, &t, k);
                let v = serde_json::to_value(&r)?;
                (t, v)
            };
            write_svg(&common.svg, &p.dilate(k), Some(&t))?;
            if common.json {
                emit_json(
                    out,
                    &json!({
                        "polytope": p.to_data(l.name.as_deref()),
                        "k": k,
                        "boundary": boundary,
                        "report": report,
                        "triangulation": t,
                    }),
                )?;
            } else {
                writeln!(out, "{} simplices of dimension {} at k = {k}", t.simplices.len(), t.dim)?;
                if let serde_json::Value::Object(m) = &report {
                    for (key, v) in m {
                        writeln!(out, "  {key}: {v}")?;
                    }
                }
            }
            Ok(0)
        }
        Command::Equations { common } => {
            let l = load(&common.input)?;
            let p = &l.polytope;
            let pts = indexed_points(p).map_err(|e| InputError(e.to_string()))?;
            let eqs = binomial_equations(p)?;
            write_svg(&common.svg, p, None)?;
            if common.json {
                let rendered: Vec<String> = eqs.iter().map(|e| e.to_string()).collect();
                emit_json(
                    out,
                    &json!({
                        "polytope": p.to_data(l.name.as_deref()),
                        "note": HEADER,
                        "points": pts,
                        "equations": eqs,
                        "rendered": rendered,
                    }),
                )?;
            } else {
                writeln!(out, "# {HEADER}")?;
                for (i, x) in pts.iter().enumerate() {
                    writeln!(out, "z{i} = {x:?}")?;
                }
                for e in &eqs {
                    writeln!(out, "{e}")?;
                }
            }
            Ok(0)
        }
        Command::Catalog { action } => {
            match action {
                CatalogAction::List { json } => {
                    let names = catalog::list();
                    if json {
                        emit_json(out, &names)?;
                    } else {
                        for n in names {
                            writeln!(out, "{n}")?;
                        }
                    }
                }
                CatalogAction::Show { name, json } => {
                    let e = catalog::get(&name).map_err(|e| InputError(e.to_string()))?;
                    if json {
                        emit_json(
                            out,
                            &json!({
                                "polytope": e.polytope.to_data(Some(&e.name)),
                                "facets": e.polytope.facets(),
                                "expected": e.expected,
                                "notes": e.notes,
                            }),
                        )?;
                    } else {
                        writeln!(out, "{} (dimension {})", e.name, e.polytope.dim())?;
                        for v in e.polytope.vertices() {
                            writeln!(out, "  {v:?}")?;
                        }
                        writeln!(out, "expected: {}", serde_json::to_string(&e.expected)?)?;
                        for n in &e.notes {
                            writeln!(out, "note: {n}")?;
                        }
                    }
                }
            }
            Ok(0)
        }
        Command::Falsify { common, k, kmax } => {
            let l = load(&common.input)?;
            let p = &l.polytope;
            let ks: Vec<i64> = match k {
                Some(k) => vec![k],
                None => (1..=kmax_or_default(kmax, p)).collect(),
            };
            let mut runs = Vec::new();
            for k in ks {
                let r = falsify_lp(p, k)?;
                runs.push(json!({
                    "k": k,
                    "carrier": r.carrier,
                    "cells": r.cells,
                    "variables": r.variables,
                    "rows": r.rows,
                    "optimum": fmt_rat(&r.optimum),
                    "certificate": r.certificate,
                }));
            }
            write_svg(&common.svg, p, None)?;
            if common.json {
                emit_json(out, &json!({ "polytope": p.to_data(l.name.as_deref()), "runs": runs }))?;
            } else {
                for r in &runs {
                    let found = if r["certificate"].is_null() { "none" } else { "certificate" };
                    writeln!(
                        out,
                        "k = {}: optimum {} over {} variables ({}), {found}",
                        r["k"], r["optimum"].as_str().unwrap_or("?"), r["variables"], r["carrier"].as_str().unwrap_or("?")
                    )?;
                    if let Some(g) = r["certificate"].get("gap") {
                        writeln!(out, "  gap {}", g.as_str().unwrap_or("?"))?;
                    }
                }
            }
            Ok(0)
        }
    }
}

/// Parses `args` (including the program name) and runs; errors become status 1.
pub fn main_with(args: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}
