//! Independent oracles shared by the integration tests. None of them use the
//! library's exact cone machinery: cones come from float angles, distances
//! from petgraph's Floyd-Warshall, hulls from an integer monotone chain.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_3, PI};
use std::path::PathBuf;

use half_theta6::cones::Instance;
use half_theta6::instance_io::read_instance;
use half_theta6::visibility::GeoGraph;
use petgraph::algo::floyd_warshall;
use petgraph::graph::UnGraph;

pub fn fixture(name: &str) -> Instance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    read_instance(&path).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

fn coords(inst: &Instance) -> Vec<(f64, f64)> {
    inst.points().iter().map(|p| p.to_f64()).collect()
}

/// Half-θ6 edges for an unconstrained instance straight from the definition:
/// for each vertex and each odd 60° sector (the positive cones), connect to
/// the vertex with the smallest projection onto the sector's bisector.
pub fn brute_force_half_theta6(inst: &Instance) -> BTreeSet<(usize, usize)> {
    assert!(inst.constraints().is_empty());
    let pts = coords(inst);
    let mut edges = BTreeSet::new();
    for (u, &(ux, uy)) in pts.iter().enumerate() {
        let mut best: [Option<(f64, usize)>; 6] = [None; 6];
        for (v, &(vx, vy)) in pts.iter().enumerate() {
            if u == v {
                continue;
            }
            let (dx, dy) = (vx - ux, vy - uy);
            let theta = dy.atan2(dx).rem_euclid(2.0 * PI);
            let sector = ((theta / FRAC_PI_3) as usize).min(5);
            if sector.is_multiple_of(2) {
                continue;
            }
            let bisector = (sector as f64 + 0.5) * FRAC_PI_3;
            let proj = dx * bisector.cos() + dy * bisector.sin();
            if best[sector].is_none_or(|(b, _)| proj < b) {
                best[sector] = Some((proj, v));
            }
        }
        for (_, v) in best.into_iter().flatten() {
            edges.insert((u.min(v), u.max(v)));
        }
    }
    edges
}

fn petgraph_of(inst: &Instance, g: &GeoGraph) -> UnGraph<(), f64> {
    let pts = coords(inst);
    let mut pg = UnGraph::<(), f64>::new_undirected();
    let nodes: Vec<_> = (0..inst.len()).map(|_| pg.add_node(())).collect();
    for (a, b) in g.edges() {
        let len = ((pts[a].0 - pts[b].0).powi(2) + (pts[a].1 - pts[b].1).powi(2)).sqrt();
        pg.add_edge(nodes[a], nodes[b], len);
    }
    pg
}

/// All-pairs distances, `+∞` for disconnected pairs.
pub fn all_pairs(inst: &Instance, g: &GeoGraph) -> Vec<Vec<f64>> {
    let n = inst.len();
    let pg = petgraph_of(inst, g);
    let table = floyd_warshall(&pg, |e| *e.weight()).expect("no negative weights");
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for ((a, b), w) in table {
        // petgraph reports unreachable pairs as the weight type's maximum.
        d[a.index()][b.index()] = if w >= f64::MAX / 2.0 {
            f64::INFINITY
        } else {
            w
        };
    }
    d
}

/// max over connected pairs of `d_h / d_base`.
pub fn all_pairs_stretch(inst: &Instance, h: &GeoGraph, base: &GeoGraph) -> f64 {
    let (dh, db) = (all_pairs(inst, h), all_pairs(inst, base));
    let mut worst = 1.0_f64;
    for a in 0..inst.len() {
        for b in a + 1..inst.len() {
            if db[a][b].is_finite() {
                worst = worst.max(dh[a][b] / db[a][b]);
            }
        }
    }
    worst
}

pub fn relative_eq(a: f64, b: f64, tol: f64) -> bool {
    (a.is_infinite() && b.is_infinite()) || (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn cross_i(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Strict convex hull (collinear points dropped) of integer points, counterclockwise.
pub fn integer_hull(mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i64, i64)>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross_i(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Chain from `u` to `v` along the hull of `{u, v} ∪ inside`, on the side
/// away from the segment `uv`.
pub fn hull_chain(
    u: (i64, i64),
    v: (i64, i64),
    w: (i64, i64),
    inside: &[(i64, i64)],
) -> Vec<(i64, i64)> {
    let mut pts = inside.to_vec();
    pts.extend([u, v]);
    let hull = integer_hull(pts);
    let n = hull.len();
    let iu = hull.iter().position(|&p| p == u).unwrap();
    // On a counterclockwise hull the part left of u→v runs from v back to u,
    // so walk backward from u when w is on the left.
    let forward = cross_i(u, v, w) < 0;
    let mut chain = vec![u];
    let mut i = iu;
    loop {
        i = if forward {
            (i + 1) % n
        } else {
            (i + n - 1) % n
        };
        chain.push(hull[i]);
        if hull[i] == v {
            break;
        }
    }
    chain
}
