use std::collections::BTreeMap;

use half_theta6::cones::{validate_general_position, ConeRef, Instance};
use half_theta6::exact_geometry::{Point, Scalar};
use half_theta6::instance_io::{
    generate_instance, parse_instance, serialize_instance, BBox, InstanceFile,
};
use half_theta6::verification::{build_pipeline, check_plane, check_structure, verify_pipeline};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = Instance> {
    (
        any::<u64>(),
        3usize..30,
        0usize..30,
        prop::sample::select(vec![16i64, 40, 200]),
    )
        .prop_filter_map("generation exhausted", |(seed, n, budget, side)| {
            generate_instance(seed, n, budget.min(n), BBox::square(side)).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_instances_are_in_general_position(inst in instance()) {
        prop_assert!(validate_general_position(&inst).is_valid());
    }

    #[test]
    fn every_check_passes(inst in instance()) {
        let p = build_pipeline(&inst).unwrap();
        let report = verify_pipeline(&inst, &p);
        for c in &report.checks {
            prop_assert!(c.passed, "{} failed: {:?}", c.name, c.witness);
        }
    }

    #[test]
    fn built_graphs_are_plane_and_nested(inst in instance()) {
        let p = build_pipeline(&inst).unwrap();
        for g in [&p.ht.graph, &p.g9, &p.g6] {
            prop_assert!(check_plane(g, &inst).passed);
        }
        prop_assert!(p.g9.is_subgraph_of(&p.ht.graph));
        prop_assert!(p.ht.graph.is_subgraph_of(&p.vis));
        prop_assert!(p.g6.is_subgraph_of(&p.vis));
        prop_assert!(check_structure(&inst, &p.records).passed);
    }

    #[test]
    fn canonical_sequences_are_neighbors_in_their_subcone(inst in instance()) {
        let p = build_pipeline(&inst).unwrap();
        for r in &p.records {
            prop_assert!(!r.subcone.cone.is_positive());
            for &v in &r.sequence {
                prop_assert!(p.ht.graph.contains(r.source, v));
                prop_assert_eq!(inst.cone_between(r.source, v), Some(r.subcone.cone));
                prop_assert!(half_theta6::cones::membership(&inst, &r.subcone, inst.point(v)));
            }
            // Consecutive vertices avoid each other's cones of the path's index.
            let i = r.subcone.cone.index();
            for w in r.sequence.windows(2) {
                let c = inst.cone_between(w[0], w[1]).unwrap();
                prop_assert!(c != ConeRef::positive(i) && c != ConeRef::negative(i));
            }
        }
    }

    #[test]
    fn short_paths_leave_half_theta6_unchanged(inst in instance()) {
        let p = build_pipeline(&inst).unwrap();
        if p.records.iter().all(|r| r.sequence.len() <= 1) {
            prop_assert_eq!(&p.g9, &p.ht.graph);
        }
    }

    #[test]
    fn charges_cover_degrees(inst in instance()) {
        let p = build_pipeline(&inst).unwrap();
        for v in 0..inst.len() {
            prop_assert!(p.ledger.total(v) >= p.g9.degree(v));
            prop_assert!(p.g6_ledger.total(v) >= p.g6.degree(v));
        }
    }

    #[test]
    fn instance_files_round_trip(
        coords in prop::collection::vec((any::<i64>(), 1i64..1000, any::<i32>(), 1i64..1000), 0..12),
        meta_seed in any::<u64>(),
    ) {
        let points: Vec<Point> = coords
            .iter()
            .map(|&(a, b, c, d)| Point::new(Scalar::from_ratio(a, b), Scalar::from_ratio(c as i64, d)))
            .collect();
        let inst = Instance::new(points, Vec::new()).unwrap();
        let meta = BTreeMap::from([("seed".to_string(), serde_json::Value::from(meta_seed))]);
        let bytes = InstanceFile::from_instance(&inst, meta).to_bytes();
        let file = InstanceFile::parse(&bytes).unwrap();
        prop_assert_eq!(file.to_bytes(), bytes);
        prop_assert_eq!(file.to_instance_unchecked().unwrap(), inst);
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>(), n in 1usize..25) {
        let a = generate_instance(seed, n, n, BBox::square(500)).unwrap();
        let b = generate_instance(seed, n, n, BBox::square(500)).unwrap();
        prop_assert_eq!(serialize_instance(&a), serialize_instance(&b));
        prop_assert_eq!(parse_instance(&serialize_instance(&a)).unwrap(), a);
    }
}
