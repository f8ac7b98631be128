//! Visibility among segment constraints and the convex chain lemma.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::cones::Instance;
use crate::error::{Error, Result};
use crate::exact_geometry::{cross, orientation, segments_cross, Orientation, Point, Scalar, Sign};

/// Undirected geometric graph on the vertices of an instance. Edges are
/// stored as sorted `(min, max)` pairs and iterate in sorted order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GeoGraph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

pub fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl GeoGraph {
    pub fn new(vertex_count: usize) -> Self {
        GeoGraph {
            vertex_count,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let mut g = GeoGraph::new(vertex_count);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Inserts `{a, b}`; returns false if it was already present.
    ///
    /// Panics on self-loops or out-of-range endpoints.
    pub fn add_edge(&mut self, a: usize, b: usize) -> bool {
        assert!(a != b, "self-loop at {a}");
        assert!(
            a < self.vertex_count && b < self.vertex_count,
            "edge ({a}, {b}) out of range"
        );
        self.edges.insert(edge_key(a, b))
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) -> bool {
        self.edges.remove(&edge_key(a, b))
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&edge_key(a, b))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// First edge of `self` missing from `other`, if any.
    pub fn first_edge_not_in(&self, other: &GeoGraph) -> Option<(usize, usize)> {
        self.edges
            .iter()
            .copied()
            .find(|&(a, b)| !other.contains(a, b))
    }

    pub fn is_subgraph_of(&self, other: &GeoGraph) -> bool {
        self.vertex_count == other.vertex_count && self.first_edge_not_in(other).is_none()
    }
}

/// `u` and `v` see each other iff `uv` is a constraint or no constraint
/// properly crosses the segment `uv`.
pub fn can_see(inst: &Instance, u: usize, v: usize) -> bool {
    if inst.is_constraint(u, v) {
        return true;
    }
    let (p, q) = (inst.point(u), inst.point(v));
    segment_unblocked(inst, p, q)
}

/// No constraint properly crosses the segment `pq` (arbitrary endpoints).
pub fn segment_unblocked(inst: &Instance, p: &Point, q: &Point) -> bool {
    inst.constraints()
        .iter()
        .all(|&(a, b)| !segments_cross(p, q, inst.point(a), inst.point(b)))
}

/// All visibility edges, by direct segment-versus-constraint tests.
pub fn build_visibility_graph(inst: &Instance) -> GeoGraph {
    let n = inst.len();
    let edges: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|u| {
            (u + 1..n)
                .filter(move |&v| can_see(inst, u, v))
                .map(move |v| (u, v))
        })
        .collect();
    GeoGraph::from_edges(n, edges)
}

fn dot(o: &Point, a: &Point, b: &Point) -> Scalar {
    let (ax, ay) = a.sub(o);
    let (bx, by) = b.sub(o);
    &(&ax * &bx) + &(&ay * &by)
}

/// Closed-triangle test for a triangle with orientation `side` (not collinear).
fn in_closed_triangle(u: &Point, v: &Point, w: &Point, side: Orientation, p: &Point) -> bool {
    let opposite = side.reverse();
    orientation(u, v, p) != opposite
        && orientation(v, w, p) != opposite
        && orientation(w, u, p) != opposite
}

/// Convex chain of visibility edges from `u` to `v` inside triangle `uvw`.
///
/// The chain is the boundary of the convex hull of `{u, v}` and the instance
/// vertices in the closed triangle (other than `u`, `v`, `w`), taken on the
/// side facing `w`. The endpoints need not be instance vertices.
pub fn convex_chain(inst: &Instance, u: &Point, v: &Point, w: &Point) -> Result<Vec<Point>> {
    let side = orientation(u, v, w);
    if side == Orientation::Collinear {
        return Err(Error::PreconditionViolated(
            "u, v and w are collinear".into(),
        ));
    }
    for (label, a) in [("uw", u), ("vw", v)] {
        let is_constraint = inst.constraints().iter().any(|&(c, d)| {
            let (pc, pd) = (inst.point(c), inst.point(d));
            (pc == a && pd == w) || (pd == a && pc == w)
        });
        if !is_constraint && !segment_unblocked(inst, a, w) {
            return Err(Error::PreconditionViolated(format!(
                "{label} is crossed by a constraint"
            )));
        }
    }
    // A constraint leaving w strictly between wu and wv enters the triangle.
    for &(c, d) in inst.constraints() {
        for (end, other) in [(c, d), (d, c)] {
            if inst.point(end) != w {
                continue;
            }
            let q = inst.point(other);
            let turn = cross(w, u, v).sign();
            if cross(w, u, q).sign() == turn && cross(w, q, v).sign() == turn {
                return Err(Error::PreconditionViolated(format!(
                    "w is the endpoint of constraint ({c}, {d}) entering the triangle"
                )));
            }
        }
    }

    let inside: Vec<&Point> = inst
        .points()
        .iter()
        .filter(|p| *p != u && *p != v && *p != w && in_closed_triangle(u, v, w, side, p))
        .collect();
    if inside.is_empty() {
        return Ok(vec![u.clone(), v.clone()]);
    }

    // Gift wrapping toward w: from the current hull vertex pick the candidate
    // with every other candidate on the far side from w (nearest on ties).
    let mut candidates = inside;
    candidates.push(v);
    let mut chain = vec![u.clone()];
    let mut current = u;
    while current != v {
        let mut best = candidates
            .iter()
            .copied()
            .find(|&c| c != current)
            .expect("v is a candidate");
        for &q in &candidates {
            if q == current || q == best {
                continue;
            }
            match orientation(current, best, q) {
                o if o == side => best = q,
                Orientation::Collinear if dot(current, q, q) < dot(current, best, best) => best = q,
                _ => {}
            }
        }
        chain.push(best.clone());
        current = best;
        if chain.len() > candidates.len() + 1 {
            return Err(Error::InconsistentState(
                "convex chain did not reach v".into(),
            ));
        }
    }
    Ok(chain)
}

/// Whether `p` is strictly inside the polygon (vertices in order, any orientation).
pub fn strictly_inside_polygon(polygon: &[Point], p: &Point) -> bool {
    let n = polygon.len();
    if n < 3 {
        return false;
    }
    // Boundary points are not strictly inside.
    for i in 0..n {
        let (a, b) = (&polygon[i], &polygon[(i + 1) % n]);
        if orientation(a, b, p) == Orientation::Collinear && dot(p, a, b).sign() != Sign::Positive {
            return false;
        }
    }
    // Crossing number with a rightward horizontal ray, using half-open edges.
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (&polygon[i], &polygon[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let o = orientation(a, b, p);
            let upward = b.y > a.y;
            if (upward && o == Orientation::Left) || (!upward && o == Orientation::Right) {
                inside = !inside;
            }
        }
    }
    inside
}
