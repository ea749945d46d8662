//! The stratum criterion: `n(p) ≤ (n+1)!` at interior points `p ≠ 0` and
//! `(n/2) m(p) < (n+1)! − n(p)` at boundary points, for every dilation.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_rational::BigRational;

use super::special::{strata_max, t1_ids, weak_symmetry_check, EXPLICIT_BUDGET};
use super::{Certificate, Check, StabilityVerdict, Status};
use crate::arith::{factorial_u64, fmt_rat, ratio};
use crate::error::Result;
use crate::geometry::{Point, Polytope};
use crate::triangulation::planar::{visit_unimodular_triangulations, P2};
use crate::triangulation::{
    refine, stratum_incidence, verify_full, BoundaryBuilder, StratumMap, Triangulation,
};

const PLANAR_LIMIT: usize = 20_000;
const CSP_NODES: usize = 2_000_000;

/// A triangulation of `P` by unimodular simplices through lattice points of `P`.
struct Candidate {
    label: String,
    /// Full cells in refinement order.
    cells: Vec<Vec<u32>>,
    /// Boundary cells, sorted.
    boundary: Vec<Vec<u32>>,
    apex: Option<u32>,
}

struct Search {
    n: usize,
    origin: u32,
    reorder: bool,
    tried: usize,
    chosen: Option<(Candidate, Evaluation)>,
    first_failure: Option<(String, Evaluation)>,
}

impl Search {
    /// Returns `false` once a candidate satisfies every stratum inequality.
    fn offer(&mut self, mut c: Candidate) -> bool {
        self.tried += 1;
        if self.reorder {
            match solve_pairings(&c.cells, &c.boundary) {
                Some(ordered) => c.cells = ordered,
                None => {
                    self.note_failure(&c);
                    return true;
                }
            }
        }
        match evaluate(self.n, self.origin, &c) {
            Ok(e) if e.pass => {
                self.chosen = Some((c, e));
                false
            }
            _ => {
                self.note_failure(&c);
                true
            }
        }
    }

    fn note_failure(&mut self, c: &Candidate) {
        if self.first_failure.is_none() {
            if let Ok(e) = evaluate(self.n, self.origin, c) {
                self.first_failure = Some((c.label.clone(), e));
            }
        }
    }
}

struct Evaluation {
    pass: bool,
    n_map: StratumMap,
    m_map: StratumMap,
    worst: Option<(Vec<u32>, String)>,
}

fn limit_boundary(n: usize, m: u64) -> i64 {
    // n·m + 2 n_σ < 2 (n+1)!
    let f = 2 * factorial_u64(n + 1) as i64;
    let rest = f - n as i64 * m as i64;
    (rest - 1).div_euclid(2)
}

fn evaluate(n: usize, origin: u32, c: &Candidate) -> Result<Evaluation> {
    let n_map = stratum_incidence(&c.cells)?;
    let m_map = stratum_incidence(&c.boundary)?;
    let bound = factorial_u64(n + 1);
    let mut pass = true;
    let mut worst: Option<(i64, Vec<u32>, String)> = None;
    for (s, &nv) in &n_map {
        if s.as_slice() == [origin] {
            continue;
        }
        let (slack, text) = match m_map.get(s) {
            Some(&m) => {
                let lhs = ratio(n as i64 * m as i64, 2) + BigRational::from_integer(nv.into());
                let slack = limit_boundary(n, m) - nv as i64;
                (slack, format!("(n/2)m + n = {} < {bound} with m = {m}, n = {nv}", fmt_rat(&lhs)))
            }
            None => (bound as i64 - nv as i64, format!("n = {nv} ≤ {bound}")),
        };
        if slack < 0 {
            pass = false;
        }
        if worst.as_ref().map(|w| slack < w.0).unwrap_or(true) {
            worst = Some((slack, s.clone(), text));
        }
    }
    Ok(Evaluation { pass, n_map, m_map, worst: worst.map(|(_, s, t)| (s, t)) })
}

/// Cells `{a < b < c < d}`: pairing 0 pairs `ab, cd`, 1 pairs `ac, bd`, 2 pairs
/// `ad, bc`. The paired edges are the ones met by six refined cells at each
/// interior point instead of four; the order `(x, z, y, w)` realizes `{xy, zw}`.
fn pairing_order(c: &[u32], choice: u8) -> Vec<u32> {
    let (a, b, cc, d) = (c[0], c[1], c[2], c[3]);
    match choice {
        0 => vec![a, cc, b, d],
        1 => vec![a, b, cc, d],
        _ => vec![a, b, d, cc],
    }
}

fn pairing_edges(c: &[u32], choice: u8) -> [(u32, u32); 2] {
    let (a, b, cc, d) = (c[0], c[1], c[2], c[3]);
    match choice {
        0 => [(a, b), (cc, d)],
        1 => [(a, cc), (b, d)],
        _ => [(a, d), (b, cc)],
    }
}

/// Chooses a pairing per cell so every edge stays within its limit.
fn solve_pairings(cells: &[Vec<u32>], boundary: &[Vec<u32>]) -> Option<Vec<Vec<u32>>> {
    let m_map = stratum_incidence(boundary).ok()?;
    let mut count: HashMap<(u32, u32), i64> = HashMap::new();
    for c in cells {
        for i in 0..4 {
            for j in i + 1..4 {
                *count.entry((c[i], c[j])).or_insert(0) += 1;
            }
        }
    }
    let mut budget: HashMap<(u32, u32), i64> = HashMap::new();
    for (&(a, b), &cnt) in &count {
        let limit = match m_map.get(&vec![a, b]) {
            Some(&m) => limit_boundary(3, m),
            None => 24,
        };
        let spare = limit - 4 * cnt;
        if spare < 0 {
            return None;
        }
        budget.insert((a, b), spare / 2);
    }
    let mut order: Vec<usize> = (0..cells.len()).collect();
    let tightness = |c: &Vec<u32>| -> i64 {
        (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).map(|(i, j)| budget[&(c[i], c[j])]).min().unwrap_or(0)
    };
    order.sort_by_key(|&i| (tightness(&cells[i]), i));
    let mut choice = vec![0u8; cells.len()];
    let mut nodes = 0usize;
    fn go(
        pos: usize,
        order: &[usize],
        cells: &[Vec<u32>],
        budget: &mut HashMap<(u32, u32), i64>,
        choice: &mut [u8],
        nodes: &mut usize,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        *nodes += 1;
        if *nodes > CSP_NODES {
            return false;
        }
        let ci = order[pos];
        for ch in 0..3u8 {
            let [e, f] = pairing_edges(&cells[ci], ch);
            if budget[&e] > 0 && budget[&f] > 0 {
                *budget.get_mut(&e).unwrap() -= 1;
                *budget.get_mut(&f).unwrap() -= 1;
                choice[ci] = ch;
                if go(pos + 1, order, cells, budget, choice, nodes) {
                    return true;
                }
                *budget.get_mut(&e).unwrap() += 1;
                *budget.get_mut(&f).unwrap() += 1;
            }
        }
        false
    }
    if !go(0, &order, cells, &mut budget, &mut choice, &mut nodes) {
        return None;
    }
    Some(cells.iter().zip(&choice).map(|(c, &ch)| pairing_order(c, ch)).collect())
}

/// Axis `j` with `±e_j` among the vertices and every other vertex on `x_j = 0`.
fn double_cone_axis(p: &Polytope) -> Option<usize> {
    let n = p.dim();
    (0..n).rev().find(|&j| {
        let e = |s: i64| -> Point { (0..n).map(|i| if i == j { s } else { 0 }).collect() };
        let (up, down) = (e(1), e(-1));
        p.vertices().contains(&up)
            && p.vertices().contains(&down)
            && p.vertices().iter().all(|v| v == &up || v == &down || v[j] == 0)
    })
}

/// Cones from `±e_j` over the unimodular triangulations of the base, handed
/// to `offer` until it returns `false`.
fn double_cone_candidates(b: &BoundaryBuilder, j: usize, offer: &mut dyn FnMut(Candidate) -> bool) {
    let n = b.polytope().dim();
    let base: Vec<(u32, P2)> = b
        .points()
        .iter()
        .enumerate()
        .filter(|(_, x)| x[j] == 0)
        .map(|(i, x)| {
            let y: Vec<i64> = (0..n).filter(|&c| c != j).map(|c| x[c]).collect();
            (i as u32, [y[0], y[1]])
        })
        .collect();
    let pts: Vec<P2> = base.iter().map(|(_, x)| *x).collect();
    let e = |s: i64| -> Point { (0..n).map(|i| if i == j { s } else { 0 }).collect() };
    let apexes = [b.id(&e(1)).expect("apex"), b.id(&e(-1)).expect("apex")];
    let mut index = 0usize;
    visit_unimodular_triangulations(&pts, &mut |tau| {
        let tris: Vec<[u32; 3]> = tau.iter().map(|t| [base[t[0]].0, base[t[1]].0, base[t[2]].0]).collect();
        let mut edges: BTreeMap<(u32, u32), usize> = BTreeMap::new();
        for t in &tris {
            for (a, c) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
                *edges.entry((a.min(c), a.max(c))).or_insert(0) += 1;
            }
        }
        let mut cells = Vec::new();
        let mut boundary = Vec::new();
        for &a in &apexes {
            for t in &tris {
                let mut c = vec![a, t[0], t[1], t[2]];
                c.sort_unstable();
                cells.push(c);
            }
            for (&(x, y), &m) in &edges {
                if m == 1 {
                    let mut c = vec![a, x, y];
                    c.sort_unstable();
                    boundary.push(c);
                }
            }
        }
        cells.sort();
        boundary.sort();
        let label = format!("double cone over base triangulation {index}");
        index += 1;
        offer(Candidate { label, cells, boundary, apex: Some(apexes[0]) }) && index < PLANAR_LIMIT
    });
}

fn cone_candidate(b: &mut BoundaryBuilder, origin: u32, user: Option<&Triangulation>) -> Result<Candidate> {
    let n = b.polytope().dim();
    let t1 = match user {
        Some(t) => t1_ids(b, t)?,
        None => {
            if n == 3 {
                b.balance_planar_facets()?;
            }
            b.boundary_t1()?
        }
    };
    let mut cells: Vec<Vec<u32>> = t1
        .iter()
        .map(|s| {
            let mut c = s.clone();
            c.push(origin);
            if user.is_none() {
                c.sort_unstable();
            }
            c
        })
        .collect();
    cells.sort();
    let mut boundary: Vec<Vec<u32>> = t1
        .into_iter()
        .map(|mut s| {
            if user.is_none() {
                s.sort_unstable();
            }
            s
        })
        .collect();
    boundary.sort();
    Ok(Candidate { label: "cone from the origin over the boundary triangulation".into(), cells, boundary, apex: None })
}

pub fn check_sufficient(p: &Polytope, k_max: i64) -> StabilityVerdict {
    check_sufficient_with(p, k_max, None)
}

/// As [`check_sufficient`], with a user triangulation of `∂P` coned from the origin.
pub fn check_sufficient_with(p: &Polytope, k_max: i64, user: Option<&Triangulation>) -> StabilityVerdict {
    let n = p.dim();
    let mut checks = vec![
        Check::new("origin interior", p.origin_interior()),
        Check::new("reflexive", p.is_reflexive()),
        weak_symmetry_check(p),
    ];
    let inconclusive = |checks: Vec<Check>| StabilityVerdict::new(p.to_data(None), Status::Inconclusive, checks);
    if !checks.iter().all(|c| c.pass) {
        return inconclusive(checks);
    }
    let mut b = BoundaryBuilder::new(p);
    let origin = b.id(&vec![0; n]).expect("origin is a lattice point");
    let mut search = Search { n, origin, reorder: n == 3 && user.is_none(), tried: 0, chosen: None, first_failure: None };
    if n == 3 && user.is_none() {
        if let Some(j) = double_cone_axis(p) {
            double_cone_candidates(&b, j, &mut |c| search.offer(c));
        }
    }
    if search.chosen.is_none() {
        match cone_candidate(&mut b, origin, user) {
            Ok(c) => {
                search.offer(c);
            }
            Err(e) => checks.push(Check::new("boundary triangulation", false).detail(e.to_string())),
        }
    }
    let Search { tried, chosen, first_failure, .. } = search;
    let Some((cand, eval)) = chosen else {
        let mut c = Check::new("stratum inequalities", false).value("triangulations_tried", tried);
        if let Some((label, e)) = first_failure {
            c = c.input("triangulation", label);
            if let Some((s, text)) = e.worst {
                c = c.value("worst_stratum", format!("{:?}", b.points_of(&s))).detail(text);
            }
        }
        checks.push(c);
        return inconclusive(checks);
    };
    let mut c = Check::new("stratum inequalities", true)
        .input("triangulation", &cand.label)
        .value("cells", cand.cells.len())
        .value("strata", eval.n_map.len());
    if let Some((s, text)) = &eval.worst {
        c = c.value("tightest_stratum", format!("{:?}", b.points_of(s))).detail(text.clone());
    }
    checks.push(c);
    if let Some(a) = cand.apex {
        let m = eval.m_map[&vec![a]];
        let nv = eval.n_map[&vec![a]];
        let lhs = ratio(n as i64 * m as i64, 2) + BigRational::from_integer(nv.into());
        let bound = factorial_u64(n + 1);
        let pass = lhs < BigRational::from_integer(bound.into());
        checks.push(
            Check::new("apex inequality", pass)
                .input("apex", format!("{:?}", b.points()[a as usize]))
                .value("m", m)
                .value("n", nv)
                .rational("lhs", &lhs)
                .value("bound", bound)
                .detail(format!("apex inequality {} < {bound}", fmt_rat(&lhs))),
        );
    }
    let all_explicit = explicit_checks(p, &b, &cand, &eval, origin, k_max, &mut checks);
    let pass = all_explicit && checks.iter().all(|c| c.pass);
    let mut v = StabilityVerdict::new(
        p.to_data(None),
        if pass { Status::Polystable } else { Status::Inconclusive },
        checks,
    );
    if pass {
        v.theorem = Some("stratum sufficient criterion".into());
        v.certificate = Some(Certificate::Criterion {
            theorem: format!(
                "n(p) ≤ (n+1)! off the origin and (n/2)m(p) < (n+1)! − n(p) on the boundary, constant on strata of {}",
                cand.label
            ),
        });
    }
    v
}

fn explicit_checks(
    p: &Polytope,
    b: &BoundaryBuilder,
    cand: &Candidate,
    eval: &Evaluation,
    origin: u32,
    k_max: i64,
    checks: &mut Vec<Check>,
) -> bool {
    let n = p.dim();
    let full: Vec<Vec<Point>> = cand.cells.iter().map(|s| b.points_of(s)).collect();
    let bdry: Vec<Vec<Point>> = cand.boundary.iter().map(|s| b.points_of(s)).collect();
    let bound = factorial_u64(n + 1) as i64;
    let origin_pt = b.points()[origin as usize].clone();
    let mut all = true;
    for k in 1..=k_max.max(1) {
        let size = cand.cells.len().saturating_mul((k as usize).saturating_pow(n as u32));
        if k > 1 && size > EXPLICIT_BUDGET {
            checks.push(
                Check::new("pointwise inequalities", true)
                    .input("k", k)
                    .value("cells", size)
                    .detail("beyond the explicit budget; covered by the stratum count"),
            );
            break;
        }
        let t = Triangulation::new(n, refine(&full, k));
        let report = verify_full(p, &t, k);
        let nk = t.incidence();
        let mk: BTreeMap<Point, usize> = Triangulation::new(n - 1, refine(&bdry, k)).incidence();
        let mut bad: Option<String> = None;
        let mut max_n = 0usize;
        let mut max_m = 0usize;
        let zero = crate::arith::scale(&origin_pt, k);
        let seen: HashSet<&Point> = nk.keys().collect();
        for (x, &nv) in &nk {
            if *x == zero {
                continue;
            }
            max_n = max_n.max(nv);
            let ok = match mk.get(x) {
                Some(&m) => {
                    max_m = max_m.max(m);
                    ((n * m + 2 * nv) as i64) < 2 * bound
                }
                None => nv as i64 <= bound,
            };
            if !ok && bad.is_none() {
                bad = Some(format!("inequality fails at {x:?} with n = {nv}, m = {}", mk.get(x).copied().unwrap_or(0)));
            }
        }
        let boundary_ok = mk.keys().all(|x| seen.contains(x));
        let n_pred = strata_max_excluding(&eval.n_map, origin, k);
        let m_pred = strata_max(&eval.m_map, k);
        let agree = max_n as u64 == n_pred && max_m as u64 == m_pred;
        let pass = report.valid && bad.is_none() && boundary_ok && agree;
        let mut c = Check::new("pointwise inequalities", pass)
            .input("k", k)
            .value("simplices", report.simplices)
            .value("max_n", max_n)
            .value("max_m", max_m)
            .value("stratum_prediction", format!("n {n_pred}, m {m_pred}"))
            .rational("covered", &report.covered);
        if let Some(text) = bad {
            c = c.detail(text);
        } else if !report.valid {
            c = c.detail(report.face_errors.join("; "));
        } else if !agree {
            c = c.detail("explicit incidence disagrees with the stratum count");
        }
        checks.push(c);
        all &= pass;
        if !pass {
            break;
        }
    }
    all
}

fn strata_max_excluding(map: &StratumMap, origin: u32, k: i64) -> u64 {
    map.iter()
        .filter(|(s, _)| s.len() as i64 <= k && s.as_slice() != [origin])
        .map(|(_, &c)| c)
        .max()
        .unwrap_or(0)
}
