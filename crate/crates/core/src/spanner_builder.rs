//! The constrained half-θ6-graph.
//!
//! Every vertex connects, in each of its positive subcones, to the closest
//! vertex it can see, with distance measured along the bisector of the whole
//! cone. Construction is definition-level: `O(n² · |S|)`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::cones::{
    projection_key, subcones_of, validate_general_position, ConeRef, Instance, SubconeRef,
};
use crate::error::{Error, Result};
use crate::visibility::{can_see, edge_key, GeoGraph};

#[derive(Debug, Clone)]
pub struct HalfThetaGraph {
    pub graph: GeoGraph,
    /// For every edge, the `(apex, positive subcone)` pairs that selected it.
    pub provenance: BTreeMap<(usize, usize), BTreeSet<SubconeRef>>,
}

impl HalfThetaGraph {
    /// The endpoint of `{a, b}` that selected the edge (the other endpoint is
    /// in one of its positive cones).
    pub fn apex_of(&self, a: usize, b: usize) -> Option<usize> {
        self.provenance
            .get(&edge_key(a, b))
            .and_then(|s| s.iter().next())
            .map(|sc| sc.apex)
    }
}

/// Vertices of cone `cone` at `u`, sorted by increasing bisector projection.
fn by_projection(inst: &Instance, u: usize, cone: ConeRef) -> Vec<usize> {
    let apex = inst.point(u);
    let mut keyed: Vec<_> = (0..inst.len())
        .filter(|&v| v != u && inst.cone_between(u, v) == Some(cone))
        .map(|v| (projection_key(apex, cone, inst.point(v)), v))
        .collect();
    keyed.sort();
    keyed.into_iter().map(|(_, v)| v).collect()
}

/// Closest vertex (by bisector projection) in or on the boundary of the
/// subcone that can see its apex.
pub fn closest_visible_in_subcone(inst: &Instance, sc: &SubconeRef) -> Option<usize> {
    closest_in(inst, sc, &by_projection(inst, sc.apex, sc.cone))
}

fn closest_in(inst: &Instance, sc: &SubconeRef, sorted: &[usize]) -> Option<usize> {
    sorted.iter().copied().find(|&v| {
        inst.subcones_containing(sc.apex, sc.cone, v)
            .contains(&sc.j)
            && can_see(inst, sc.apex, v)
    })
}

/// Builds the constrained half-θ6-graph; refuses instances that are not in
/// general position.
pub fn build_half_theta6(inst: &Instance) -> Result<HalfThetaGraph> {
    let report = validate_general_position(inst);
    if !report.is_valid() {
        return Err(Error::InvalidInstance(report));
    }
    Ok(build_unchecked(inst))
}

pub(crate) fn build_unchecked(inst: &Instance) -> HalfThetaGraph {
    let picks: Vec<(SubconeRef, usize)> = (0..inst.len())
        .into_par_iter()
        .flat_map_iter(|u| {
            (0..3).flat_map(move |i| {
                let cone = ConeRef::positive(i);
                let sorted = by_projection(inst, u, cone);
                subcones_of(inst, u, cone)
                    .into_iter()
                    .filter_map(|s| closest_in(inst, &s.id, &sorted).map(|v| (s.id, v)))
                    .collect::<Vec<_>>()
            })
        })
        .collect();

    let mut graph = GeoGraph::new(inst.len());
    let mut provenance: BTreeMap<(usize, usize), BTreeSet<SubconeRef>> = BTreeMap::new();
    for (sc, v) in picks {
        graph.add_edge(sc.apex, v);
        provenance
            .entry(edge_key(sc.apex, v))
            .or_default()
            .insert(sc);
    }
    HalfThetaGraph { graph, provenance }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closest_by_projection() {
        let inst = Instance::from_int_coords(&[(0, 0), (1, 2), (-2, 3)], &[]).unwrap();
        let sc = SubconeRef {
            apex: 0,
            cone: ConeRef::positive(0),
            j: 0,
        };
        assert_eq!(closest_visible_in_subcone(&inst, &sc), Some(1));
        let empty = SubconeRef {
            apex: 0,
            cone: ConeRef::positive(1),
            j: 0,
        };
        assert_eq!(closest_visible_in_subcone(&inst, &empty), None);
    }

    #[test]
    fn blocked_candidates_are_skipped() {
        // The constraint (-10,10)-(30,20) hides everything in C0 of the origin
        // beyond it.
        let coords = [(0, 0), (10, 20), (-50, 90), (-10, 10), (30, 20)];
        let inst = Instance::from_int_coords(&coords, &[(3, 4)]).unwrap();
        let sc = SubconeRef {
            apex: 0,
            cone: ConeRef::positive(0),
            j: 0,
        };
        assert_eq!(closest_visible_in_subcone(&inst, &sc), None);

        let mut with_near = coords.to_vec();
        with_near.push((2, 5));
        let inst = Instance::from_int_coords(&with_near, &[(3, 4)]).unwrap();
        assert_eq!(closest_visible_in_subcone(&inst, &sc), Some(5));
        assert!(!can_see(&inst, 0, 1));
    }

    #[test]
    fn three_point_example() {
        let inst = Instance::from_int_coords(&[(0, 0), (1, 2), (-1, 4)], &[]).unwrap();
        let ht = build_half_theta6(&inst).unwrap();
        assert_eq!(ht.graph.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(ht.apex_of(0, 1), Some(0));
        assert_eq!(ht.apex_of(1, 2), Some(2));
    }

    #[test]
    fn two_point_example() {
        let inst = Instance::from_int_coords(&[(0, 0), (1, 2)], &[]).unwrap();
        let ht = build_half_theta6(&inst).unwrap();
        assert_eq!(ht.graph.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn invalid_instances_are_refused() {
        let inst = Instance::from_int_coords(&[(0, 0), (2, 0)], &[]).unwrap();
        assert!(matches!(
            build_half_theta6(&inst),
            Err(Error::InvalidInstance(_))
        ));
    }

    #[test]
    fn constraint_endpoint_serves_both_subcones() {
        // Constraint 0-1 splits C0 of the origin; with nothing else there,
        // vertex 1 is the pick of both subcones.
        let inst = Instance::from_int_coords(&[(0, 0), (1, 2)], &[(0, 1)]).unwrap();
        let ht = build_half_theta6(&inst).unwrap();
        let prov = &ht.provenance[&(0, 1)];
        assert_eq!(prov.len(), 2);
        assert_eq!(ht.graph.edge_count(), 1);
    }
}
