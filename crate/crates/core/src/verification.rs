//! Checks of the quantitative claims on concrete instances: planarity,
//! subgraph relations, degree and charge bounds, spanning ratios and the
//! structure of canonical paths.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::cones::{canonical_triangle, ccw_order, contains_point, ConeRef, Instance};
use crate::degree_reduction::{
    build_g6, build_g9, compute_charges, detect_double_charges, recharge_for_g6,
    CanonicalPathRecord, ChargeLedger, DoubleCharge, TransformationStep,
};
use crate::error::{Error, Result};
use crate::exact_geometry::{cross, euclid_length_approx, segments_cross, Scalar, Sign};
use crate::spanner_builder::{build_half_theta6, HalfThetaGraph};
use crate::visibility::{build_visibility_graph, edge_key, GeoGraph};

/// Relative tolerance for comparing float path lengths against bounds.
pub const REL_TOL: f64 = 1e-9;

/// `value ≤ bound`, false for NaN.
fn within(value: f64, bound: f64) -> bool {
    value <= bound
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Crossing {
        first: (usize, usize),
        second: (usize, usize),
    },
    Edge {
        edge: (usize, usize),
        detail: String,
    },
    Degree {
        vertex: usize,
        degree: usize,
        bound: usize,
    },
    Charge {
        vertex: usize,
        cone: String,
        charge: usize,
        bound: usize,
    },
    Stretch {
        u: usize,
        w: usize,
        distance: f64,
        bound: f64,
    },
    Path {
        source: usize,
        sequence: Vec<usize>,
        detail: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Number of individual items examined.
    pub checked: usize,
    pub failures: usize,
    /// First failure found.
    pub witness: Option<Witness>,
    /// Largest ratio or smallest slack observed, depending on the check.
    pub extreme: Option<f64>,
}

impl CheckResult {
    fn new(name: &str) -> Self {
        CheckResult {
            name: name.to_string(),
            passed: true,
            checked: 0,
            failures: 0,
            witness: None,
            extreme: None,
        }
    }

    fn item(&mut self) {
        self.checked += 1;
    }

    fn fail(&mut self, witness: Witness) {
        self.passed = false;
        self.failures += 1;
        if self.witness.is_none() {
            self.witness = Some(witness);
        }
    }

    fn observe_max(&mut self, value: f64) {
        self.extreme = Some(self.extreme.map_or(value, |e| e.max(value)));
    }

    fn observe_min(&mut self, value: f64) {
        self.extreme = Some(self.extreme.map_or(value, |e| e.min(value)));
    }

    fn merge(mut self, other: CheckResult) -> CheckResult {
        self.checked += other.checked;
        self.failures += other.failures;
        self.passed &= other.passed;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
        self.extreme = match (self.extreme, other.extreme) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
    /// Milliseconds per stage.
    pub timings: BTreeMap<String, f64>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn check_plane(g: &GeoGraph, inst: &Instance) -> CheckResult {
    let mut result = CheckResult::new("plane");
    let edges: Vec<(usize, usize)> = g.edges().collect();
    for (k, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[k + 1..] {
            result.item();
            if segments_cross(inst.point(a), inst.point(b), inst.point(c), inst.point(d)) {
                result.fail(Witness::Crossing {
                    first: (a, b),
                    second: (c, d),
                });
            }
        }
    }
    result
}

type Weighted = Vec<Vec<(usize, f64)>>;

fn weighted(g: &GeoGraph, inst: &Instance) -> Weighted {
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for (a, b) in g.edges() {
        let len = euclid_length_approx(inst.point(a), inst.point(b));
        adj[a].push((b, len));
        adj[b].push((a, len));
    }
    adj
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Dijkstra from `source`, visiting only vertices with `allowed[v]` when given.
fn dijkstra(adj: &Weighted, source: usize, allowed: Option<&[bool]>) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    dist[source] = 0.0;
    let mut heap = BinaryHeap::from([Entry(0.0, source)]);
    while let Some(Entry(d, v)) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &(w, len) in &adj[v] {
            if allowed.is_some_and(|a| !a[w]) {
                continue;
            }
            let nd = d + len;
            if nd < dist[w] {
                dist[w] = nd;
                heap.push(Entry(nd, w));
            }
        }
    }
    dist
}

/// Euclidean single-source shortest path lengths; unreachable vertices get `+∞`.
pub fn shortest_path_lengths(g: &GeoGraph, inst: &Instance, source: usize) -> Vec<f64> {
    dijkstra(&weighted(g, inst), source, None)
}

/// Maximum of `d_h(u, v) / |uv|` over the edges of `base`. Since shortest
/// paths in `base` are made of base edges, this is the stretch of `h`
/// relative to `base` over all pairs.
pub fn spanning_ratio(h: &GeoGraph, base: &GeoGraph, inst: &Instance) -> Result<f64> {
    if let Some((a, b)) = h.first_edge_not_in(base) {
        return Err(Error::NotSubgraph(a, b));
    }
    let adj = weighted(h, inst);
    let base_adj = base.adjacency();
    let ratio = (0..inst.len())
        .into_par_iter()
        .filter(|&u| base_adj[u].iter().any(|&v| v > u))
        .map(|u| {
            let dist = dijkstra(&adj, u, None);
            base_adj[u]
                .iter()
                .filter(|&&v| v > u)
                .map(|&v| dist[v] / euclid_length_approx(inst.point(u), inst.point(v)))
                .fold(1.0_f64, f64::max)
        })
        .reduce(|| 1.0, f64::max);
    Ok(ratio)
}

fn ratio_check(
    name: &str,
    h: &GeoGraph,
    base: &GeoGraph,
    inst: &Instance,
    limit: f64,
) -> CheckResult {
    let mut result = CheckResult::new(name);
    result.item();
    match spanning_ratio(h, base, inst) {
        Ok(r) => {
            result.observe_max(r);
            if !within(r, limit + REL_TOL) {
                let witness = worst_pair(h, base, inst);
                result.fail(witness);
            }
        }
        Err(Error::NotSubgraph(a, b)) => result.fail(Witness::Edge {
            edge: (a, b),
            detail: "not in base graph".into(),
        }),
        Err(e) => result.fail(Witness::Edge {
            edge: (0, 0),
            detail: e.to_string(),
        }),
    }
    result
}

fn worst_pair(h: &GeoGraph, base: &GeoGraph, inst: &Instance) -> Witness {
    let adj = weighted(h, inst);
    let mut worst = (0, 0, 0.0, 0.0, f64::NEG_INFINITY);
    for u in 0..inst.len() {
        let dist = dijkstra(&adj, u, None);
        for (a, b) in base.edges().filter(|&(a, _)| a == u) {
            let len = euclid_length_approx(inst.point(a), inst.point(b));
            if dist[b] / len > worst.4 {
                worst = (a, b, dist[b], len, dist[b] / len);
            }
        }
    }
    Witness::Stretch {
        u: worst.0,
        w: worst.1,
        distance: worst.2,
        bound: worst.3,
    }
}

/// For every visible pair `(u, w)` with `w` in a positive cone of `u`, some
/// half-θ6 path inside the closed canonical triangle has length at most
/// `(√3 cos α + sin α)|uw|`.
pub fn check_triangle_paths(inst: &Instance, ht: &HalfThetaGraph, vis: &GeoGraph) -> CheckResult {
    let adj = weighted(&ht.graph, inst);
    let vis_adj = vis.adjacency();
    (0..inst.len())
        .into_par_iter()
        .map(|u| {
            let mut result = CheckResult::new("triangle_paths");
            for &w in &vis_adj[u] {
                let Ok(tri) = canonical_triangle(inst, u, w) else {
                    continue;
                };
                result.item();
                let allowed: Vec<bool> = inst
                    .points()
                    .iter()
                    .map(|p| contains_point(&tri, p))
                    .collect();
                let d = dijkstra(&adj, u, Some(&allowed))[w];
                let (height, offset) = tri.height_and_offset();
                let len = euclid_length_approx(inst.point(u), inst.point(w));
                let bound = 3f64.sqrt() * height + offset;
                result.observe_max(d / len);
                if !within(d, bound + REL_TOL * len) {
                    result.fail(Witness::Stretch {
                        u,
                        w,
                        distance: d,
                        bound,
                    });
                }
            }
            result
        })
        .reduce(|| CheckResult::new("triangle_paths"), CheckResult::merge)
}

/// Factor bounding `d_G9(u, w)/|uw|` for a half-θ6 edge with `w` in a negative
/// cone of `u`: 1 when `w` is a closest canonical vertex, `cos α + 5 sin α/√3`
/// when the boundary ray on the closest vertex's side is the same in every
/// record containing `w`, 3 otherwise.
pub fn canonical_path_factor(
    inst: &Instance,
    records: &[&CanonicalPathRecord],
    u: usize,
    w: usize,
) -> f64 {
    let mut alphas = BTreeSet::new();
    for r in records {
        let Some(pos) = r.position(w) else { continue };
        if pos == r.closest_index {
            return 1.0;
        }
        let sector = r.subcone.cone.sector();
        // Closest vertex clockwise of w: clockwise boundary ray, else counterclockwise.
        let ray = if pos > r.closest_index {
            sector
        } else {
            sector + 1
        };
        alphas.insert(ray);
    }
    if alphas.len() != 1 {
        return 3.0;
    }
    let ray = *alphas.iter().next().unwrap();
    let (ux, uy) = inst.point(u).to_f64();
    let (wx, wy) = inst.point(w).to_f64();
    let theta = (wy - uy).atan2(wx - ux);
    let ray_angle = (ray as f64) * std::f64::consts::FRAC_PI_3;
    let mut alpha = (theta - ray_angle).rem_euclid(2.0 * std::f64::consts::PI);
    if alpha > std::f64::consts::PI {
        alpha = 2.0 * std::f64::consts::PI - alpha;
    }
    alpha.cos() + 5.0 * alpha.sin() / 3f64.sqrt()
}

/// Every half-θ6 edge `(u, w)` with `w` in a negative cone of `u` has a G9 path
/// of length at most 3|uw|, and at most the refined angle bound where defined.
pub fn check_canonical_path_stretch(
    inst: &Instance,
    ht: &HalfThetaGraph,
    g9: &GeoGraph,
    records: &[CanonicalPathRecord],
) -> CheckResult {
    let adj = weighted(g9, inst);
    let mut by_source: Vec<Vec<&CanonicalPathRecord>> = vec![Vec::new(); inst.len()];
    for r in records {
        by_source[r.source].push(r);
    }
    let ht_adj = ht.graph.adjacency();
    (0..inst.len())
        .into_par_iter()
        .map(|u| {
            let mut result = CheckResult::new("canonical_path_stretch");
            let targets: Vec<usize> = ht_adj[u]
                .iter()
                .copied()
                .filter(|&w| inst.cone_between(u, w).is_some_and(|c| !c.is_positive()))
                .collect();
            if targets.is_empty() {
                return result;
            }
            let dist = dijkstra(&adj, u, None);
            for w in targets {
                result.item();
                let len = euclid_length_approx(inst.point(u), inst.point(w));
                let factor = canonical_path_factor(inst, &by_source[u], u, w).min(3.0);
                result.observe_max(dist[w] / len);
                if !within(dist[w], factor * len + REL_TOL * len) {
                    result.fail(Witness::Stretch {
                        u,
                        w,
                        distance: dist[w],
                        bound: factor * len,
                    });
                }
            }
            result
        })
        .reduce(
            || CheckResult::new("canonical_path_stretch"),
            CheckResult::merge,
        )
}

/// Every half-θ6 edge `(u, w)` has a G6 path of length at most 3|uw|.
pub fn check_g6_spanning(inst: &Instance, ht: &HalfThetaGraph, g6: &GeoGraph) -> CheckResult {
    let adj = weighted(g6, inst);
    let ht_adj = ht.graph.adjacency();
    (0..inst.len())
        .into_par_iter()
        .map(|u| {
            let mut result = CheckResult::new("g6_path_stretch");
            if !ht_adj[u].iter().any(|&w| w > u) {
                return result;
            }
            let dist = dijkstra(&adj, u, None);
            for &w in ht_adj[u].iter().filter(|&&w| w > u) {
                result.item();
                let len = euclid_length_approx(inst.point(u), inst.point(w));
                result.observe_max(dist[w] / len);
                if !within(dist[w], 3.0 * len + REL_TOL * len) {
                    result.fail(Witness::Stretch {
                        u,
                        w,
                        distance: dist[w],
                        bound: 3.0 * len,
                    });
                }
            }
            result
        })
        .reduce(|| CheckResult::new("g6_path_stretch"), CheckResult::merge)
}

/// `deg_g(v) ≤ c(v) + slack` for all `v`. The extreme is the smallest slack left.
pub fn check_degree_bounds(inst: &Instance, g: &GeoGraph, slack: usize) -> CheckResult {
    let mut result = CheckResult::new("degree");
    for (v, degree) in g.degrees().into_iter().enumerate() {
        result.item();
        let bound = inst.constraint_degree(v) + slack;
        result.observe_min(bound as f64 - degree as f64);
        if degree > bound {
            result.fail(Witness::Degree {
                vertex: v,
                degree,
                bound,
            });
        }
    }
    result
}

/// Per-cone charges within the bounds for G9 and total charge covering the degree.
pub fn check_charges(inst: &Instance, g9: &GeoGraph, ledger: &ChargeLedger) -> CheckResult {
    let mut result = CheckResult::new("charges");
    for v in 0..inst.len() {
        for cone in ConeRef::all() {
            result.item();
            let (charge, bound) = (ledger.charge(v, cone), ledger.g9_bound(v, cone));
            if charge > bound {
                result.fail(Witness::Charge {
                    vertex: v,
                    cone: cone.to_string(),
                    charge,
                    bound,
                });
            }
        }
        result.item();
        if ledger.total(v) < g9.degree(v) {
            result.fail(Witness::Degree {
                vertex: v,
                degree: g9.degree(v),
                bound: ledger.total(v),
            });
        }
    }
    result
}

/// After recharging: every cone at most `c + 1` and total charge covering the G6 degree.
pub fn check_g6_charges(inst: &Instance, g6: &GeoGraph, ledger: &ChargeLedger) -> CheckResult {
    let mut result = CheckResult::new("g6_charges");
    for v in 0..inst.len() {
        for cone in ConeRef::all() {
            result.item();
            let charge = ledger.charge(v, cone);
            let bound = ledger.constraint_count(v, cone) + 1;
            if charge > bound {
                result.fail(Witness::Charge {
                    vertex: v,
                    cone: cone.to_string(),
                    charge,
                    bound,
                });
            }
        }
        result.item();
        if ledger.total(v) < g6.degree(v) {
            result.fail(Witness::Degree {
                vertex: v,
                degree: g6.degree(v),
                bound: ledger.total(v),
            });
        }
    }
    result
}

/// G9 ⊆ half-θ6 ⊆ Vis, G6 ⊆ Vis, every G6 edge outside half-θ6 comes from a
/// transformation step, and every surviving partner edge is still in G6.
pub fn check_subgraph_chain(
    ht: &HalfThetaGraph,
    vis: &GeoGraph,
    g9: &GeoGraph,
    g6: &GeoGraph,
    steps: &[TransformationStep],
) -> CheckResult {
    let mut result = CheckResult::new("subgraph_chain");
    let pairs = [
        (g9, &ht.graph, "G9 edge not in half-θ6"),
        (&ht.graph, vis, "half-θ6 edge not visible"),
        (g6, vis, "G6 edge not visible"),
    ];
    for (h, base, detail) in pairs {
        result.item();
        if let Some(edge) = h.first_edge_not_in(base) {
            result.fail(Witness::Edge {
                edge,
                detail: detail.into(),
            });
        }
    }
    let added: BTreeSet<(usize, usize)> = steps.iter().map(|s| s.added).collect();
    for edge in g6.edges().filter(|&(a, b)| !ht.graph.contains(a, b)) {
        result.item();
        if !added.contains(&edge) {
            result.fail(Witness::Edge {
                edge,
                detail: "G6 edge without a transformation step".into(),
            });
        }
    }
    for s in steps {
        result.item();
        if !g6.contains(s.kept.0, s.kept.1) {
            result.fail(Witness::Edge {
                edge: s.kept,
                detail: "kept path edge missing from G6".into(),
            });
        }
    }
    result
}

/// Consecutive canonical-path vertices avoid each other's cones of the path's
/// index, the triangle they span with the source is empty and uncrossed by
/// constraints, and an edge shared by two canonical paths ends at a closest
/// canonical vertex.
pub fn check_structure(inst: &Instance, records: &[CanonicalPathRecord]) -> CheckResult {
    let mut result = CheckResult::new("canonical_structure");
    let mut usage: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for r in records {
        let i = r.subcone.cone.index();
        let excluded = [ConeRef::positive(i), ConeRef::negative(i)];
        let u = r.source;
        for (a, b) in r.path_edges() {
            *usage.entry(edge_key(a, b)).or_default() += 1;
            result.item();
            if excluded.contains(&inst.cone(a, b)) || excluded.contains(&inst.cone(b, a)) {
                result.fail(Witness::Path {
                    source: u,
                    sequence: r.sequence.clone(),
                    detail: format!("{a} and {b} lie in each other's cone {i}"),
                });
            }
            result.item();
            if let Some(detail) = triangle_obstruction(inst, u, a, b) {
                result.fail(Witness::Path {
                    source: u,
                    sequence: r.sequence.clone(),
                    detail,
                });
            }
        }
    }
    for (&(a, b), &count) in usage.iter().filter(|(_, &c)| c > 1) {
        result.item();
        // Orient so that x lies in a negative cone of v.
        let (v, x) = if inst.cone(a, b).is_positive() {
            (b, a)
        } else {
            (a, b)
        };
        let closest = records.iter().any(|r| r.source == v && r.closest() == x);
        if !closest {
            result.fail(Witness::Edge {
                edge: (a, b),
                detail: format!("on {count} canonical paths but {x} is not closest for {v}"),
            });
        }
    }
    result
}

fn triangle_obstruction(inst: &Instance, u: usize, a: usize, b: usize) -> Option<String> {
    let (pu, pa, pb) = (inst.point(u), inst.point(a), inst.point(b));
    let orient = |p, q, r| cross(p, q, r).sign();
    let turn = orient(pu, pa, pb);
    for (z, pz) in inst.points().iter().enumerate() {
        if z == u || z == a || z == b {
            continue;
        }
        if orient(pu, pa, pz) == turn && orient(pa, pb, pz) == turn && orient(pb, pu, pz) == turn {
            return Some(format!("vertex {z} inside triangle ({u}, {a}, {b})"));
        }
    }
    for &(c, d) in inst.constraints() {
        let (pc, pd) = (inst.point(c), inst.point(d));
        for (p, q) in [(pu, pa), (pa, pb), (pb, pu)] {
            if segments_cross(p, q, pc, pd) {
                return Some(format!(
                    "constraint ({c}, {d}) crosses triangle ({u}, {a}, {b})"
                ));
            }
        }
    }
    None
}

/// Bounded faces of a connected plane straight-line graph, each as a
/// counterclockwise vertex cycle.
pub fn bounded_faces(inst: &Instance, g: &GeoGraph) -> Vec<Vec<usize>> {
    let mut rotation = g.adjacency();
    for (v, nbrs) in rotation.iter_mut().enumerate() {
        let apex = inst.point(v);
        nbrs.sort_by(|&a, &b| {
            let (sa, sb) = (inst.cone(v, a).sector(), inst.cone(v, b).sector());
            sa.cmp(&sb)
                .then_with(|| ccw_order(apex, inst.point(a), inst.point(b)))
        });
    }
    let mut visited: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut faces = Vec::new();
    for (a, b) in g.edges() {
        for dart in [(a, b), (b, a)] {
            if visited.contains(&dart) {
                continue;
            }
            let mut face = Vec::new();
            let mut cur = dart;
            while visited.insert(cur) {
                face.push(cur.0);
                let (from, at) = cur;
                let nbrs = &rotation[at];
                let k = nbrs
                    .iter()
                    .position(|&z| z == from)
                    .expect("dart endpoints adjacent");
                // Face on the left: turn to the neighbor just clockwise of `from`.
                let next = nbrs[(k + nbrs.len() - 1) % nbrs.len()];
                cur = (at, next);
            }
            let twice_area = face
                .iter()
                .zip(face.iter().cycle().skip(1))
                .map(|(&p, &q)| {
                    let (pp, pq) = (inst.point(p), inst.point(q));
                    &pp.x * &pq.y - &pp.y * &pq.x
                })
                .fold(Scalar::zero(), |acc, t| acc + t);
            if twice_area.sign() == Sign::Positive {
                faces.push(face);
            }
        }
    }
    faces
}

/// All graphs and intermediate records of the construction for one instance.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub vis: GeoGraph,
    pub ht: HalfThetaGraph,
    pub g9: GeoGraph,
    pub records: Vec<CanonicalPathRecord>,
    pub ledger: ChargeLedger,
    pub doubles: Vec<DoubleCharge>,
    pub steps: Vec<TransformationStep>,
    pub g6: GeoGraph,
    pub g6_ledger: ChargeLedger,
    pub timings: BTreeMap<String, f64>,
}

fn timed<T>(timings: &mut BTreeMap<String, f64>, name: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timings.insert(name.to_string(), start.elapsed().as_secs_f64() * 1e3);
    out
}

pub fn build_pipeline(inst: &Instance) -> Result<Pipeline> {
    let mut t = BTreeMap::new();
    let vis = timed(&mut t, "visibility", || build_visibility_graph(inst));
    let ht = timed(&mut t, "half_theta6", || build_half_theta6(inst))?;
    let (g9, records) = timed(&mut t, "g9", || build_g9(inst, &ht));
    let ledger = timed(&mut t, "charges", || compute_charges(inst, &records))?;
    let (doubles, steps) = timed(&mut t, "transformations", || {
        detect_double_charges(inst, &records)
    })?;
    let g6 = timed(&mut t, "g6", || build_g6(inst, &ht, &g9, &steps))?;
    let g6_ledger = timed(&mut t, "recharge", || {
        recharge_for_g6(&records, &ledger, &doubles, &steps)
    })?;
    Ok(Pipeline {
        vis,
        ht,
        g9,
        records,
        ledger,
        doubles,
        steps,
        g6,
        g6_ledger,
        timings: t,
    })
}

fn renamed(mut c: CheckResult, name: &str) -> CheckResult {
    c.name = name.to_string();
    c
}

/// Runs every check on a built pipeline.
pub fn verify_pipeline(inst: &Instance, p: &Pipeline) -> VerificationReport {
    let mut timings = p.timings.clone();
    let mut checks = Vec::new();
    let mut run = |name: &str, f: &dyn Fn() -> CheckResult| {
        let c = timed(&mut timings, &format!("check_{name}"), f);
        checks.push(renamed(c, name));
    };
    run("plane_half_theta6", &|| check_plane(&p.ht.graph, inst));
    run("plane_g9", &|| check_plane(&p.g9, inst));
    run("plane_g6", &|| check_plane(&p.g6, inst));
    run("ratio_half_theta6_vs_vis", &|| {
        ratio_check("", &p.ht.graph, &p.vis, inst, 2.0)
    });
    run("triangle_paths", &|| {
        check_triangle_paths(inst, &p.ht, &p.vis)
    });
    run("canonical_path_stretch", &|| {
        check_canonical_path_stretch(inst, &p.ht, &p.g9, &p.records)
    });
    run("ratio_g9_vs_half_theta6", &|| {
        ratio_check("", &p.g9, &p.ht.graph, inst, 3.0)
    });
    run("ratio_g9_vs_vis", &|| {
        ratio_check("", &p.g9, &p.vis, inst, 6.0)
    });
    run("g6_path_stretch", &|| check_g6_spanning(inst, &p.ht, &p.g6));
    run("ratio_g6_vs_vis", &|| {
        ratio_check("", &p.g6, &p.vis, inst, 6.0)
    });
    run("degree_g9", &|| check_degree_bounds(inst, &p.g9, 9));
    run("degree_g6", &|| check_degree_bounds(inst, &p.g6, 6));
    run("charges_g9", &|| check_charges(inst, &p.g9, &p.ledger));
    run("charges_g6", &|| {
        check_g6_charges(inst, &p.g6, &p.g6_ledger)
    });
    run("subgraph_chain", &|| {
        check_subgraph_chain(&p.ht, &p.vis, &p.g9, &p.g6, &p.steps)
    });
    run("canonical_structure", &|| check_structure(inst, &p.records));
    VerificationReport { checks, timings }
}

pub fn verify_all(inst: &Instance) -> Result<(Pipeline, VerificationReport)> {
    let p = build_pipeline(inst)?;
    let report = verify_pipeline(inst, &p);
    Ok((p, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(coords: &[(i64, i64)], constraints: &[(usize, usize)]) -> Instance {
        Instance::from_int_coords(coords, constraints).unwrap()
    }

    #[test]
    fn plane_detects_crossing_pair() {
        let i = inst(&[(0, 0), (2, 2), (0, 2), (2, 0)], &[]);
        let g = GeoGraph::from_edges(4, [(0, 1), (2, 3)]);
        let r = check_plane(&g, &i);
        assert!(!r.passed);
        assert_eq!(
            r.witness,
            Some(Witness::Crossing {
                first: (0, 1),
                second: (2, 3)
            })
        );
        let tri = GeoGraph::from_edges(4, [(0, 1), (1, 3), (0, 3)]);
        assert!(check_plane(&tri, &i).passed);
    }

    #[test]
    fn shortest_paths_and_unreachable() {
        let i = inst(&[(0, 0), (1, 2), (-2, 3)], &[]);
        let g = GeoGraph::from_edges(3, [(0, 1)]);
        let d = shortest_path_lengths(&g, &i, 0);
        assert!((d[1] - 5f64.sqrt()).abs() < 1e-15);
        assert!(d[2].is_infinite());
    }

    #[test]
    fn ratio_of_two_edge_path() {
        let i = inst(&[(0, 0), (1, 2), (-2, 3)], &[]);
        let h = GeoGraph::from_edges(3, [(0, 1), (1, 2)]);
        let base = GeoGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let r = spanning_ratio(&h, &base, &i).unwrap();
        let expected = (5f64.sqrt() + 10f64.sqrt()) / 13f64.sqrt();
        assert!((r - expected).abs() < 1e-12);
        assert_eq!(spanning_ratio(&base, &base, &i).unwrap(), 1.0);
        assert!(matches!(
            spanning_ratio(&base, &h, &i),
            Err(Error::NotSubgraph(0, 2))
        ));
        let disconnected = GeoGraph::from_edges(3, [(0, 1)]);
        assert!(spanning_ratio(&disconnected, &base, &i)
            .unwrap()
            .is_infinite());
    }

    #[test]
    fn degree_bounds() {
        let i = inst(&[(0, 0), (1, 2), (-2, 3)], &[(0, 1)]);
        assert!(check_degree_bounds(&i, &GeoGraph::new(3), 0).passed);
        let g = GeoGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let r = check_degree_bounds(&i, &g, 1);
        assert!(!r.passed);
        assert_eq!(
            r.witness,
            Some(Witness::Degree {
                vertex: 2,
                degree: 2,
                bound: 1
            })
        );
    }

    #[test]
    fn extreme_angle_factors() {
        let at = |a: f64| 3f64.sqrt() * a.cos() + a.sin();
        assert!((at(std::f64::consts::FRAC_PI_6) - 2.0).abs() < 1e-15);
        let refined = |a: f64| a.cos() + 5.0 * a.sin() / 3f64.sqrt();
        assert!((refined(std::f64::consts::FRAC_PI_3) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn small_instance_verifies() {
        let i = inst(&[(0, 0), (1, 2), (-1, 4), (5, 1), (3, 7)], &[(0, 4)]);
        let (_, report) = verify_all(&i).unwrap();
        for c in &report.checks {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn faces_of_a_square_with_diagonal() {
        let i = inst(&[(0, 0), (10, 1), (11, 12), (1, 10)], &[]);
        let g = GeoGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]);
        let mut faces = bounded_faces(&i, &g);
        faces.sort_by_key(|f| f.len());
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.len() == 3));
        let square = GeoGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]);
        assert_eq!(bounded_faces(&i, &square), vec![vec![0, 1, 2, 3]]);
    }
}
