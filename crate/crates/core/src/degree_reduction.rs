//! Bounded-degree subgraphs of the half-θ6-graph.
//!
//! G9 keeps, for every negative subcone of every vertex `u`, the canonical
//! path (the half-θ6 neighbors of `u` in that subcone, counterclockwise) plus
//! the edge from `u` to the closest of them. G6 then removes the doubly
//! charged positive cones by adding a shortcut `xy` and dropping one or two
//! path edges.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cones::{ccw_order, projection_key, ConeRef, Instance, SubconeRef};
use crate::error::{Error, Result};
use crate::spanner_builder::HalfThetaGraph;
use crate::visibility::{edge_key, GeoGraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalPathRecord {
    pub source: usize,
    /// Negative subcone of `source`.
    pub subcone: SubconeRef,
    /// Counterclockwise around `source`.
    pub sequence: Vec<usize>,
    pub closest_index: usize,
}

impl CanonicalPathRecord {
    pub fn closest(&self) -> usize {
        self.sequence[self.closest_index]
    }

    pub fn path_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.sequence.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.sequence.iter().position(|&s| s == v)
    }

    /// Neighbors of the vertex at position `k` along the path.
    fn neighbors_at(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        let before = k.checked_sub(1).map(|i| self.sequence[i]);
        let after = self.sequence.get(k + 1).copied();
        before.into_iter().chain(after)
    }
}

/// Negative subcones of `u` whose canonical path holds the half-θ6 neighbor
/// `v`. A vertex off every split line has exactly one. When `uv` is a
/// constraint, `v` lies on a split line and belongs to the side matching each
/// positive subcone of `v` that selected `u`: the subcone of `v` clockwise of
/// the ray toward `u` faces the subcone of `u` counterclockwise of the ray
/// toward `v`, and vice versa.
fn home_subcones(
    inst: &Instance,
    ht: &HalfThetaGraph,
    u: usize,
    cone: ConeRef,
    v: usize,
) -> Vec<usize> {
    let here = inst.subcones_containing(u, cone, v);
    if here.start() == here.end() {
        return vec![*here.start()];
    }
    let Some(selected) = ht.provenance.get(&edge_key(u, v)) else {
        return here.collect();
    };
    let mut homes: Vec<usize> = selected
        .iter()
        .filter(|sc| sc.apex == v)
        .map(|sc| {
            let there = inst.subcones_containing(v, sc.cone, u);
            if sc.j == *there.start() {
                *here.end()
            } else {
                *here.start()
            }
        })
        .collect();
    homes.dedup();
    homes
}

/// One record per (vertex, negative subcone) holding at least one half-θ6 neighbor.
pub fn canonical_paths(inst: &Instance, ht: &HalfThetaGraph) -> Vec<CanonicalPathRecord> {
    let adj = ht.graph.adjacency();
    let mut records = Vec::new();
    for (u, nbrs) in adj.iter().enumerate() {
        let apex = inst.point(u);
        for i in 0..3 {
            let cone = ConeRef::negative(i);
            let in_cone: Vec<usize> = nbrs
                .iter()
                .copied()
                .filter(|&v| inst.cone_between(u, v) == Some(cone))
                .collect();
            if in_cone.is_empty() {
                continue;
            }
            let subcone_count = inst.splits_in(u, cone).len() + 1;
            let homes: Vec<(usize, Vec<usize>)> = in_cone
                .iter()
                .map(|&v| (v, home_subcones(inst, ht, u, cone, v)))
                .collect();
            for j in 0..subcone_count {
                let mut sequence: Vec<usize> = homes
                    .iter()
                    .filter(|(_, js)| js.contains(&j))
                    .map(|&(v, _)| v)
                    .collect();
                if sequence.is_empty() {
                    continue;
                }
                sequence.sort_by(|&a, &b| ccw_order(apex, inst.point(a), inst.point(b)));
                let closest_index = (0..sequence.len())
                    .min_by_key(|&k| projection_key(apex, cone, inst.point(sequence[k])))
                    .expect("sequence is nonempty");
                records.push(CanonicalPathRecord {
                    source: u,
                    subcone: SubconeRef { apex: u, cone, j },
                    sequence,
                    closest_index,
                });
            }
        }
    }
    records
}

/// G9 together with the canonical-path records that generated it.
pub fn build_g9(inst: &Instance, ht: &HalfThetaGraph) -> (GeoGraph, Vec<CanonicalPathRecord>) {
    let records = canonical_paths(inst, ht);
    let mut g9 = GeoGraph::new(inst.len());
    for r in &records {
        for (a, b) in r.path_edges() {
            g9.add_edge(a, b);
        }
        g9.add_edge(r.source, r.closest());
    }
    (g9, records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChargeEvent {
    pub vertex: usize,
    pub cone: ConeRef,
    pub edge: (usize, usize),
    /// Index of the canonical-path record that generated the edge.
    pub record: usize,
}

/// Per-cone charges of the degree-bounding argument. Every G9 edge is charged
/// at both endpoints, once per canonical path that generates it.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ChargeLedger {
    pub events: Vec<ChargeEvent>,
    charge: BTreeMap<(usize, ConeRef), usize>,
    constraint_counts: BTreeMap<(usize, ConeRef), usize>,
}

impl ChargeLedger {
    fn new(inst: &Instance) -> Self {
        let mut constraint_counts = BTreeMap::new();
        for v in 0..inst.len() {
            for cone in ConeRef::all() {
                let c = inst.constraint_degree_in(v, cone);
                if c > 0 {
                    constraint_counts.insert((v, cone), c);
                }
            }
        }
        ChargeLedger {
            events: Vec::new(),
            charge: BTreeMap::new(),
            constraint_counts,
        }
    }

    fn push(&mut self, event: ChargeEvent) {
        *self.charge.entry((event.vertex, event.cone)).or_default() += 1;
        self.events.push(event);
    }

    /// Removes one matching event; returns false if none matched.
    fn retract(&mut self, matches: impl Fn(&ChargeEvent) -> bool) -> bool {
        let Some(pos) = self.events.iter().position(matches) else {
            return false;
        };
        let e = self.events.remove(pos);
        let slot = self
            .charge
            .get_mut(&(e.vertex, e.cone))
            .expect("event was counted");
        *slot -= 1;
        true
    }

    pub fn charge(&self, v: usize, cone: ConeRef) -> usize {
        self.charge.get(&(v, cone)).copied().unwrap_or(0)
    }

    pub fn total(&self, v: usize) -> usize {
        ConeRef::all().iter().map(|&c| self.charge(v, c)).sum()
    }

    /// Constraints incident to `v` whose other endpoint lies in `cone` of `v`.
    pub fn constraint_count(&self, v: usize, cone: ConeRef) -> usize {
        self.constraint_counts.get(&(v, cone)).copied().unwrap_or(0)
    }

    /// Upper bound per cone after degree reduction to G9:
    /// `max{2, c_i(v) + 1}` for positive cones, `c_ī(v) + 1` for negative ones.
    pub fn g9_bound(&self, v: usize, cone: ConeRef) -> usize {
        let c = self.constraint_count(v, cone);
        if cone.is_positive() {
            (c + 1).max(2)
        } else {
            c + 1
        }
    }
}

/// Cone of `v` charged for a canonical-path edge `v–other` on a path of a
/// vertex in `C^v_i`: charges shift one cone toward `C^v_i`.
fn path_charge_cone(inst: &Instance, v: usize, other: usize, i: usize) -> Option<ConeRef> {
    let c = inst.cone(v, other);
    let (next, prev) = ((i + 1) % 3, (i + 2) % 3);
    if c == ConeRef::negative(next) || c == ConeRef::negative(prev) {
        Some(ConeRef::positive(i))
    } else if c == ConeRef::positive(next) {
        Some(ConeRef::negative(prev))
    } else if c == ConeRef::positive(prev) {
        Some(ConeRef::negative(next))
    } else {
        None
    }
}

pub fn compute_charges(inst: &Instance, records: &[CanonicalPathRecord]) -> Result<ChargeLedger> {
    let mut ledger = ChargeLedger::new(inst);
    for (idx, r) in records.iter().enumerate() {
        let i = r.subcone.cone.index();
        let u = r.source;
        let closest = r.closest();
        let edge = edge_key(u, closest);
        ledger.push(ChargeEvent {
            vertex: u,
            cone: ConeRef::negative(i),
            edge,
            record: idx,
        });
        ledger.push(ChargeEvent {
            vertex: closest,
            cone: ConeRef::positive(i),
            edge,
            record: idx,
        });
        for (a, b) in r.path_edges() {
            for (v, other) in [(a, b), (b, a)] {
                let cone =
                    path_charge_cone(inst, v, other, i).ok_or(Error::UnchargeableEdge(a, b, u))?;
                ledger.push(ChargeEvent {
                    vertex: v,
                    cone,
                    edge: edge_key(a, b),
                    record: idx,
                });
            }
        }
    }
    Ok(ledger)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransformationStep {
    pub center: usize,
    /// Positive cone of the center that was charged twice.
    pub cone: ConeRef,
    pub path_source: usize,
    /// Path neighbor of the center in `C̄^v_{i−1}`.
    pub x: usize,
    /// Path neighbor of the center in `C̄^v_{i+1}`.
    pub y: usize,
    pub added: (usize, usize),
    pub removed_type1: (usize, usize),
    /// The center's path edge that survives (toward the closest canonical vertex).
    pub kept: (usize, usize),
    pub removed_type2: Option<(usize, usize)>,
}

/// A positive cone `C^v_i` with no incident constraints that a single
/// canonical path charges for two edges in the adjacent negative cones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleCharge {
    pub center: usize,
    pub cone: ConeRef,
    pub record: usize,
    pub x: usize,
    pub y: usize,
    pub resolution: Resolution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Resolution {
    /// This neighbor is a closest canonical vertex of the center, so its edge
    /// is already charged to a negative cone and the positive charge is dropped.
    Recharge { closest_neighbor: usize },
    /// Index into the transformation steps.
    Transform(usize),
}

/// Canonical-path records grouped by source vertex.
struct RecordIndex<'a> {
    records: &'a [CanonicalPathRecord],
    by_source: Vec<Vec<usize>>,
}

impl<'a> RecordIndex<'a> {
    fn new(n: usize, records: &'a [CanonicalPathRecord]) -> Self {
        let mut by_source = vec![Vec::new(); n];
        for (idx, r) in records.iter().enumerate() {
            by_source[r.source].push(idx);
        }
        RecordIndex { records, by_source }
    }

    /// Records of `v` in `cone` whose sequence contains `x`.
    fn containing(
        &self,
        v: usize,
        cone: ConeRef,
        x: usize,
    ) -> impl Iterator<Item = &'a CanonicalPathRecord> + '_ {
        self.by_source[v]
            .iter()
            .map(|&i| &self.records[i])
            .filter(move |r| r.subcone.cone == cone && r.sequence.contains(&x))
    }

    fn is_closest_canonical(&self, v: usize, cone: ConeRef, x: usize) -> bool {
        self.containing(v, cone, x).any(|r| r.closest() == x)
    }
}

/// Every doubly charged positive cone, with the transformation steps for
/// those not resolved by recharging alone. Detection runs on the unmodified G9.
pub fn detect_double_charges(
    inst: &Instance,
    records: &[CanonicalPathRecord],
) -> Result<(Vec<DoubleCharge>, Vec<TransformationStep>)> {
    let index = RecordIndex::new(inst.len(), records);
    let mut doubles = Vec::new();
    let mut steps = Vec::new();
    let mut seen = BTreeSet::new();

    for (ridx, r) in records.iter().enumerate() {
        let i = r.subcone.cone.index();
        let cw_neg = ConeRef::negative(i + 1);
        let ccw_neg = ConeRef::negative(i + 2);
        for k in 1..r.sequence.len().saturating_sub(1) {
            let v = r.sequence[k];
            let (a, b) = (r.sequence[k - 1], r.sequence[k + 1]);
            let (ca, cb) = (inst.cone(v, a), inst.cone(v, b));
            let adjacent = |c: ConeRef| c == cw_neg || c == ccw_neg;
            if !adjacent(ca) || !adjacent(cb) {
                continue;
            }
            let cone = ConeRef::positive(i);
            if inst.constraint_degree_in(v, cone) > 0 {
                continue;
            }
            if ca == cb {
                return Err(Error::InconsistentState(format!(
                    "path neighbors {a} and {b} of {v} share cone {ca} on the path of {}",
                    r.source
                )));
            }
            if !seen.insert((v, cone)) {
                return Err(Error::InconsistentState(format!(
                    "cone {cone} of {v} charged by two paths"
                )));
            }
            let (x, y) = if ca == ccw_neg { (a, b) } else { (b, a) };

            let x_closest = index.is_closest_canonical(v, ccw_neg, x);
            let y_closest = index.is_closest_canonical(v, cw_neg, y);
            if x_closest || y_closest {
                let closest_neighbor = if x_closest { x } else { y };
                doubles.push(DoubleCharge {
                    center: v,
                    cone,
                    record: ridx,
                    x,
                    y,
                    resolution: Resolution::Recharge { closest_neighbor },
                });
                continue;
            }

            // Keep the edge toward the closest canonical vertex of the path.
            let toward_closest = match r.closest_index.cmp(&k) {
                std::cmp::Ordering::Less => a,
                std::cmp::Ordering::Greater => b,
                std::cmp::Ordering::Equal => {
                    return Err(Error::InconsistentState(format!(
                        "closest canonical vertex {v} of {} has path neighbors in both adjacent negative cones",
                        r.source
                    )))
                }
            };
            let removed = if toward_closest == x { y } else { x };
            let kept = toward_closest;
            let kept_cone = if kept == x { ccw_neg } else { cw_neg };

            // `kept` ends the canonical path of v that contains it; its single
            // path neighbor there is w.
            let mut ws = BTreeSet::new();
            for pr in index.containing(v, kept_cone, kept) {
                let pos = pr.position(kept).expect("filtered on membership");
                if pr.sequence.len() > 1 && pos != 0 && pos != pr.sequence.len() - 1 {
                    return Err(Error::InconsistentState(format!(
                        "{kept} is interior to the canonical path of {v} in {kept_cone}"
                    )));
                }
                ws.extend(pr.neighbors_at(pos));
            }
            if ws.len() > 1 {
                return Err(Error::InconsistentState(format!(
                    "{kept} has several path neighbors {ws:?} on canonical paths of {v}"
                )));
            }
            let removed_type2 = ws.into_iter().next().and_then(|w| {
                let target = ConeRef::negative(i);
                (inst.cone(kept, w) == target && !index.is_closest_canonical(kept, target, w))
                    .then(|| edge_key(kept, w))
            });

            doubles.push(DoubleCharge {
                center: v,
                cone,
                record: ridx,
                x,
                y,
                resolution: Resolution::Transform(steps.len()),
            });
            steps.push(TransformationStep {
                center: v,
                cone,
                path_source: r.source,
                x,
                y,
                added: edge_key(x, y),
                removed_type1: edge_key(v, removed),
                kept: edge_key(v, kept),
                removed_type2,
            });
        }
    }
    Ok((doubles, steps))
}

pub fn find_transformations(
    inst: &Instance,
    _ht: &HalfThetaGraph,
    records: &[CanonicalPathRecord],
) -> Result<Vec<TransformationStep>> {
    detect_double_charges(inst, records).map(|(_, steps)| steps)
}

/// Applies all steps at once: `G6 = (G9 ∪ added) ∖ removed`.
pub fn build_g6(
    _inst: &Instance,
    ht: &HalfThetaGraph,
    g9: &GeoGraph,
    steps: &[TransformationStep],
) -> Result<GeoGraph> {
    let added: BTreeSet<(usize, usize)> = steps.iter().map(|s| s.added).collect();
    let removed: BTreeSet<(usize, usize)> = steps
        .iter()
        .flat_map(|s| std::iter::once(s.removed_type1).chain(s.removed_type2))
        .collect();
    for &(a, b) in &added {
        if g9.contains(a, b) || ht.graph.contains(a, b) {
            return Err(Error::ConflictDetected(format!(
                "added edge ({a}, {b}) already in the half-θ6-graph"
            )));
        }
        if removed.contains(&(a, b)) {
            return Err(Error::ConflictDetected(format!(
                "edge ({a}, {b}) both added and removed"
            )));
        }
    }
    for &(a, b) in &removed {
        if !g9.contains(a, b) {
            return Err(Error::ConflictDetected(format!(
                "removed edge ({a}, {b}) is not in G9"
            )));
        }
    }
    for s in steps {
        if removed.contains(&s.kept) {
            return Err(Error::ConflictDetected(format!(
                "edge {:?} kept at center {} is removed by another step",
                s.kept, s.center
            )));
        }
    }
    let mut g6 = g9.clone();
    for &(a, b) in &removed {
        g6.remove_edge(a, b);
    }
    for &(a, b) in &added {
        g6.add_edge(a, b);
    }
    Ok(g6)
}

/// Ledger for G6: the G9 ledger with every double charge resolved the way the
/// degree argument does it. Diagnostic only; it never changes a graph.
pub fn recharge_for_g6(
    records: &[CanonicalPathRecord],
    g9_ledger: &ChargeLedger,
    doubles: &[DoubleCharge],
    steps: &[TransformationStep],
) -> Result<ChargeLedger> {
    let mut ledger = g9_ledger.clone();
    let missing =
        |what: String| Error::InconsistentState(format!("recharge: no charge for {what}"));
    for d in doubles {
        let v = d.center;
        match &d.resolution {
            Resolution::Recharge { closest_neighbor } => {
                let edge = edge_key(v, *closest_neighbor);
                if !ledger.retract(|e| {
                    e.vertex == v && e.cone == d.cone && e.edge == edge && e.record == d.record
                }) {
                    return Err(missing(format!("{edge:?} at {v}")));
                }
            }
            Resolution::Transform(si) => {
                let s = &steps[*si];
                let (ra, rb) = s.removed_type1;
                let r = if ra == v { rb } else { ra };
                let k = if s.kept.0 == v { s.kept.1 } else { s.kept.0 };
                // The removed edge's charge at the far end is taken over by xy.
                let far_cone = ledger
                    .events
                    .iter()
                    .find(|e| e.vertex == r && e.edge == s.removed_type1 && e.record == d.record)
                    .map(|e| e.cone)
                    .ok_or_else(|| missing(format!("{:?} at {r}", s.removed_type1)))?;
                for end in [v, r] {
                    if !ledger.retract(|e| {
                        e.vertex == end && e.edge == s.removed_type1 && e.record == d.record
                    }) {
                        return Err(missing(format!("{:?} at {end}", s.removed_type1)));
                    }
                }
                ledger.push(ChargeEvent {
                    vertex: r,
                    cone: far_cone,
                    edge: s.added,
                    record: d.record,
                });

                // At the kept end, xy goes to the positive cone the path of v charges.
                let i = d.cone.index();
                let kept_cone = if k == s.x {
                    ConeRef::positive(i + 2)
                } else {
                    ConeRef::positive(i + 1)
                };
                let kept_path_cone = if k == s.x {
                    ConeRef::negative(i + 2)
                } else {
                    ConeRef::negative(i + 1)
                };
                let path_record = records.iter().position(|pr| {
                    pr.source == v && pr.subcone.cone == kept_path_cone && pr.sequence.contains(&k)
                });
                if let Some(pr) = path_record {
                    let w_edge = records[pr]
                        .sequence
                        .iter()
                        .position(|&z| z == k)
                        .and_then(|pos| records[pr].neighbors_at(pos).next())
                        .map(|w| edge_key(k, w));
                    if let Some(w_edge) = w_edge {
                        if Some(w_edge) == s.removed_type2 {
                            for e in ledger.events.clone() {
                                if e.edge == w_edge {
                                    ledger.retract(|x| *x == e);
                                }
                            }
                        } else {
                            ledger.retract(|e| {
                                e.vertex == k && e.cone == kept_cone && e.edge == w_edge
                            });
                        }
                    }
                }
                ledger.push(ChargeEvent {
                    vertex: k,
                    cone: kept_cone,
                    edge: s.added,
                    record: d.record,
                });
            }
        }
    }
    Ok(ledger)
}
