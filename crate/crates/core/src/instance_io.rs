//! Instance files, random instance generation, SVG rendering and run reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::cones::{validate_general_position, Instance};
use crate::error::{Error, Result};
use crate::exact_geometry::{cross, segments_cross, Point, Scalar};
use crate::verification::{verify_all, CheckResult};
use crate::visibility::GeoGraph;

pub const FORMAT_VERSION: u32 = 1;

/// On-disk instance. Coordinates are decimal integer or `p/q` strings so they
/// stay exact; JSON numbers are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub points: Vec<[String; 2]>,
    pub constraints: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, Value>,
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance, meta: BTreeMap<String, Value>) -> Self {
        InstanceFile {
            version: FORMAT_VERSION,
            points: inst
                .points()
                .iter()
                .map(|p| [p.x.to_string(), p.y.to_string()])
                .collect(),
            constraints: inst.constraints().iter().map(|&(a, b)| [a, b]).collect(),
            meta,
        }
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let file: InstanceFile =
            serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
        if file.version != FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported format version {}",
                file.version
            )));
        }
        Ok(file)
    }

    /// Canonical serialization: pretty JSON with a trailing newline.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("instance files always serialize");
        out.push(b'\n');
        out
    }

    /// Builds the instance without the general-position check.
    pub fn to_instance_unchecked(&self) -> Result<Instance> {
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, [x, y])| {
                let parse = |s: &String| {
                    s.parse::<Scalar>()
                        .map_err(|e| Error::Parse(format!("point {i}: {s:?}: {e}")))
                };
                Ok(Point::new(parse(x)?, parse(y)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let constraints = self.constraints.iter().map(|&[a, b]| (a, b)).collect();
        Instance::new(points, constraints)
    }

    pub fn to_instance(&self) -> Result<Instance> {
        let inst = self.to_instance_unchecked()?;
        let report = validate_general_position(&inst);
        if report.is_valid() {
            Ok(inst)
        } else {
            Err(Error::InvalidInstance(report))
        }
    }
}

/// Parses and validates an instance file.
pub fn parse_instance(bytes: &[u8]) -> Result<Instance> {
    InstanceFile::parse(bytes)?.to_instance()
}

pub fn serialize_instance(inst: &Instance) -> Vec<u8> {
    InstanceFile::from_instance(inst, BTreeMap::new()).to_bytes()
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    parse_instance(&std::fs::read(path)?)
}

/// Hex SHA-256 of the canonical serialization without metadata.
pub fn instance_digest(inst: &Instance) -> String {
    format!("{:x}", Sha256::digest(serialize_instance(inst)))
}

/// Inclusive integer bounding box for generated points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BBox {
    pub min_x: i64,
    pub min_y: i64,
    pub max_x: i64,
    pub max_y: i64,
}

impl BBox {
    pub fn square(side: i64) -> Self {
        BBox {
            min_x: 0,
            min_y: 0,
            max_x: side,
            max_y: side,
        }
    }
}

const POINT_ATTEMPTS: usize = 10_000;

/// Seeded random instance in general position. Constraints are drawn greedily,
/// favoring short pairs, and kept when they cross no accepted constraint; the
/// result has at most `constraint_budget` of them.
pub fn generate_instance(
    seed: u64,
    n: usize,
    constraint_budget: usize,
    bbox: BBox,
) -> Result<Instance> {
    if n == 0 {
        return Err(Error::PreconditionViolated("n must be at least 1".into()));
    }
    if bbox.min_x > bbox.max_x || bbox.min_y > bbox.max_y {
        return Err(Error::PreconditionViolated(format!(
            "empty bounding box {bbox:?}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Point> = Vec::with_capacity(n);
    while points.len() < n {
        let mut placed = false;
        for _ in 0..POINT_ATTEMPTS {
            let p = Point::from_ints(
                rng.gen_range(bbox.min_x..=bbox.max_x),
                rng.gen_range(bbox.min_y..=bbox.max_y),
            );
            if fits_general_position(&points, &p) {
                points.push(p);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::GenerationExhausted(format!(
                "placed {} of {n} points in {bbox:?} after {POINT_ATTEMPTS} attempts",
                points.len()
            )));
        }
    }

    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let sq_len = |&(a, b): &(usize, usize)| {
        let (dx, dy) = points[b].sub(&points[a]);
        &dx * &dx + &dy * &dy
    };
    pairs.sort_by_cached_key(sq_len);
    let mut constraints: Vec<(usize, usize)> = Vec::new();
    let attempts = constraint_budget * 20;
    for _ in 0..attempts {
        if constraints.len() >= constraint_budget || pairs.is_empty() {
            break;
        }
        let u: f64 = rng.gen();
        let rank = ((pairs.len() as f64) * u * u * u) as usize;
        let (a, b) = pairs[rank.min(pairs.len() - 1)];
        let blocked = constraints
            .iter()
            .any(|&(c, d)| segments_cross(&points[a], &points[b], &points[c], &points[d]));
        if !blocked {
            constraints.push((a, b));
            pairs.remove(rank.min(pairs.len() - 1));
        }
    }
    let inst = Instance::new(points, constraints)?;
    debug_assert!(validate_general_position(&inst).is_valid());
    Ok(inst)
}

/// With integer coordinates only horizontal pairs lie on a cone ray.
fn fits_general_position(points: &[Point], p: &Point) -> bool {
    for (i, a) in points.iter().enumerate() {
        if a.y == p.y {
            return false;
        }
        for b in &points[i + 1..] {
            if cross(a, b, p).is_zero() {
                return false;
            }
        }
    }
    true
}

const LAYER_COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];

/// SVG 1.1 drawing: constraints as thick black segments, each layer in its
/// own color, vertices as labeled dots.
pub fn svg_string(inst: &Instance, layers: &[(&str, &GeoGraph)]) -> String {
    const SIZE: f64 = 800.0;
    const MARGIN: f64 = 40.0;
    let pts: Vec<(f64, f64)> = inst.points().iter().map(Point::to_f64).collect();
    let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (0.0, 0.0, 1.0, 1.0);
    if let Some(&(x0, y0)) = pts.first() {
        (lo_x, lo_y, hi_x, hi_y) = (x0, y0, x0, y0);
        for &(x, y) in &pts {
            lo_x = f64::min(lo_x, x);
            lo_y = f64::min(lo_y, y);
            hi_x = f64::max(hi_x, x);
            hi_y = f64::max(hi_y, y);
        }
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-9);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let tx = |x: f64| MARGIN + (x - lo_x) * scale;
    let ty = |y: f64| SIZE - MARGIN - (y - lo_y) * scale;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let line = |s: &mut String, a: usize, b: usize, style: &str| {
        let _ = writeln!(
            s,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" {style}/>"#,
            tx(pts[a].0),
            ty(pts[a].1),
            tx(pts[b].0),
            ty(pts[b].1)
        );
    };
    let _ = writeln!(s, r#"<g id="constraints">"#);
    for &(a, b) in inst.constraints() {
        line(
            &mut s,
            a,
            b,
            r#"stroke="black" stroke-width="5" stroke-linecap="round""#,
        );
    }
    let _ = writeln!(s, "</g>");
    for (k, (name, g)) in layers.iter().enumerate() {
        let color = LAYER_COLORS[k % LAYER_COLORS.len()];
        let _ = writeln!(
            s,
            r#"<g id="{}" stroke="{color}" stroke-width="1.5">"#,
            xml_escape(name)
        );
        for (a, b) in g.edges() {
            line(&mut s, a, b, "");
        }
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(
        s,
        r#"<g id="vertices" font-family="sans-serif" font-size="11">"#
    );
    for (v, &(x, y)) in pts.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.3}" cy="{:.3}" r="3.5" fill="black"/>"#,
            tx(x),
            ty(y)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}">{v}</text>"#,
            tx(x) + 5.0,
            ty(y) - 5.0
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render_svg(inst: &Instance, layers: &[(&str, &GeoGraph)], path: &Path) -> Result<()> {
    std::fs::write(path, svg_string(inst, layers))?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphSummary {
    pub edges: usize,
    pub max_degree: usize,
}

impl GraphSummary {
    fn of(g: &GeoGraph) -> Self {
        GraphSummary {
            edges: g.edge_count(),
            max_degree: g.max_degree(),
        }
    }
}

/// One line of machine-readable output per verified instance.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub n: usize,
    pub constraints: usize,
    pub max_constraint_degree: usize,
    pub graphs: BTreeMap<String, GraphSummary>,
    pub transformation_steps: usize,
    pub double_charges: usize,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    /// Observed extremes by check name.
    pub ratios: BTreeMap<String, f64>,
    pub timings_ms: BTreeMap<String, f64>,
}

pub fn run_report(inst: &Instance, seed: Option<u64>) -> Result<RunReport> {
    let start = Instant::now();
    let (p, report) = verify_all(inst)?;
    let mut timings_ms = report.timings.clone();
    timings_ms.insert("total".into(), start.elapsed().as_secs_f64() * 1e3);
    let graphs = [
        ("vis", &p.vis),
        ("half_theta6", &p.ht.graph),
        ("g9", &p.g9),
        ("g6", &p.g6),
    ]
    .into_iter()
    .map(|(k, g)| (k.to_string(), GraphSummary::of(g)))
    .collect();
    let ratios = report
        .checks
        .iter()
        .filter(|c| {
            c.name.contains("ratio") || c.name.contains("stretch") || c.name.contains("paths")
        })
        .filter_map(|c| c.extreme.map(|e| (c.name.clone(), e)))
        .collect();
    Ok(RunReport {
        digest: instance_digest(inst),
        seed,
        n: inst.len(),
        constraints: inst.constraints().len(),
        max_constraint_degree: (0..inst.len())
            .map(|v| inst.constraint_degree(v))
            .max()
            .unwrap_or(0),
        graphs,
        transformation_steps: p.steps.len(),
        double_charges: p.doubles.len(),
        passed: report.all_passed(),
        checks: report.checks,
        ratios,
        timings_ms,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CampaignConfig {
    pub instances: usize,
    pub seed: u64,
    pub n_min: usize,
    pub n_max: usize,
    /// Bounding-box side; 0 picks one proportional to n.
    pub bbox_side: i64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            instances: 500,
            seed: 1,
            n_min: 3,
            n_max: 60,
            bbox_side: 0,
        }
    }
}

/// Instance `k` of a campaign: seed, n and constraint budget in `0..=n`.
pub fn campaign_instance(config: &CampaignConfig, k: usize) -> Result<(u64, Instance)> {
    let seed = config.seed.wrapping_mul(1_000_003).wrapping_add(k as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(config.n_min..=config.n_max.max(config.n_min));
    let budget = rng.gen_range(0..=n);
    let side = if config.bbox_side > 0 {
        config.bbox_side
    } else {
        8 * n as i64 + 16
    };
    Ok((
        seed,
        generate_instance(seed, n, budget, BBox::square(side))?,
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct CampaignSummary {
    pub instances: usize,
    pub failed_instances: usize,
    pub errors: Vec<String>,
    pub failures_by_check: BTreeMap<String, usize>,
    /// Largest observed value per ratio check.
    pub max_ratios: BTreeMap<String, f64>,
    pub transformation_steps: usize,
    pub elapsed_ms: f64,
}

impl CampaignSummary {
    pub fn passed(&self) -> bool {
        self.failed_instances == 0 && self.errors.is_empty()
    }
}

/// Runs the campaign in parallel and hands each report, in instance order,
/// to `sink`.
pub fn run_campaign(config: &CampaignConfig, mut sink: impl FnMut(&RunReport)) -> CampaignSummary {
    let start = Instant::now();
    let results: Vec<Result<RunReport>> = (0..config.instances)
        .into_par_iter()
        .map(|k| {
            let (seed, inst) = campaign_instance(config, k)?;
            run_report(&inst, Some(seed))
        })
        .collect();
    let mut summary = CampaignSummary {
        instances: config.instances,
        failed_instances: 0,
        errors: Vec::new(),
        failures_by_check: BTreeMap::new(),
        max_ratios: BTreeMap::new(),
        transformation_steps: 0,
        elapsed_ms: 0.0,
    };
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(report) => {
                sink(&report);
                if !report.passed {
                    summary.failed_instances += 1;
                }
                for c in report.checks.iter().filter(|c| !c.passed) {
                    *summary.failures_by_check.entry(c.name.clone()).or_default() += 1;
                }
                for (name, &v) in &report.ratios {
                    let slot = summary.max_ratios.entry(name.clone()).or_insert(v);
                    *slot = slot.max(v);
                }
                summary.transformation_steps += report.transformation_steps;
            }
            Err(e) => summary.errors.push(format!("instance {k}: {e}")),
        }
    }
    summary.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let text = br#"{"version": 1, "points": [["0", "0"], ["1/2", "-3"]], "constraints": []}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.len(), 2);
        assert_eq!(inst.point(1).x, Scalar::from_ratio(1, 2));
    }

    #[test]
    fn float_coordinates_are_rejected() {
        let text = br#"{"version": 1, "points": [[0.5, "0"]], "constraints": []}"#;
        assert!(matches!(parse_instance(text), Err(Error::Parse(_))));
        let text = br#"{"version": 1, "points": [["0.5", "0"]], "constraints": []}"#;
        assert!(matches!(parse_instance(text), Err(Error::Parse(_))));
    }

    #[test]
    fn crossing_constraints_are_reported() {
        let text = br#"{"version": 1, "points": [["0","0"],["4","3"],["1","4"],["3","-1"]], "constraints": [[0,1],[2,3]]}"#;
        match parse_instance(text) {
            Err(Error::InvalidInstance(report)) => {
                assert!(report
                    .violations
                    .contains(&crate::cones::Violation::CrossingConstraints(
                        (0, 1),
                        (2, 3)
                    )));
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn canonical_round_trip() {
        let inst = generate_instance(5, 12, 6, BBox::square(50)).unwrap();
        let mut meta = BTreeMap::new();
        meta.insert("seed".to_string(), Value::from(5));
        let bytes = InstanceFile::from_instance(&inst, meta).to_bytes();
        let file = InstanceFile::parse(&bytes).unwrap();
        assert_eq!(file.to_bytes(), bytes);
        assert_eq!(file.to_instance().unwrap(), inst);
    }

    #[test]
    fn generation_is_deterministic_and_valid() {
        let single = generate_instance(1, 1, 0, BBox::square(10)).unwrap();
        assert_eq!(single.len(), 1);
        assert!(single.constraints().is_empty());
        let a = generate_instance(7, 40, 40, BBox::square(300)).unwrap();
        let b = generate_instance(7, 40, 40, BBox::square(300)).unwrap();
        assert_eq!(serialize_instance(&a), serialize_instance(&b));
        assert!(validate_general_position(&a).is_valid());
        assert!(!a.constraints().is_empty());
    }

    #[test]
    fn tiny_bbox_exhausts() {
        assert!(matches!(
            generate_instance(3, 10, 0, BBox::square(2)),
            Err(Error::GenerationExhausted(_))
        ));
    }

    #[test]
    fn svg_contents() {
        let empty = Instance::new(Vec::new(), Vec::new()).unwrap();
        let s = svg_string(&empty, &[]);
        assert!(s.contains("<svg") && s.trim_end().ends_with("</svg>"));
        let tri = Instance::from_int_coords(&[(0, 0), (4, 1), (1, 3)], &[(0, 1)]).unwrap();
        let g = GeoGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let s = svg_string(&tri, &[("half_theta6", &g)]);
        assert_eq!(s.matches("<circle").count(), 3);
        assert_eq!(s.matches("<line").count(), 4);
    }
}
