//! Cones, subcones, bisector projections and canonical triangles.
//!
//! Six rays leave every vertex at multiples of 60°. Walking counterclockwise
//! from the positive x-axis the sectors are C̄1, C0, C̄2, C1, C̄0, C2; the
//! sector number (0..6) is the internal coordinate, [`ConeRef`] the public one.
//!
//! Projections onto bisectors and cross products against ray directions are
//! computed in ℚ[√3]. Internally they are kept *doubled* so that the hot
//! comparisons never leave integer arithmetic on integer instances.

use std::fmt;
use std::ops::RangeInclusive;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_geometry::{
    cross, orientation, segments_cross, ExtScalar, Orientation, Point, Scalar, Sign,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConeRef {
    pub polarity: Polarity,
    pub index: u8,
}

impl ConeRef {
    pub fn positive(i: usize) -> Self {
        ConeRef {
            polarity: Polarity::Positive,
            index: (i % 3) as u8,
        }
    }

    pub fn negative(i: usize) -> Self {
        ConeRef {
            polarity: Polarity::Negative,
            index: (i % 3) as u8,
        }
    }

    pub fn is_positive(self) -> bool {
        self.polarity == Polarity::Positive
    }

    pub fn index(self) -> usize {
        self.index as usize
    }

    /// Sector number counterclockwise from the positive x-axis.
    pub fn sector(self) -> usize {
        let i = self.index as usize;
        match self.polarity {
            Polarity::Positive => 2 * i + 1,
            Polarity::Negative => 2 * ((i + 2) % 3),
        }
    }

    pub fn from_sector(k: usize) -> Self {
        let k = k % 6;
        if k % 2 == 1 {
            ConeRef::positive((k - 1) / 2)
        } else {
            ConeRef::negative(k / 2 + 1)
        }
    }

    /// The cone with the same index and opposite polarity; `v ∈ C^u_i ⇔ u ∈ C̄^v_i`.
    pub fn dual(self) -> Self {
        ConeRef {
            polarity: match self.polarity {
                Polarity::Positive => Polarity::Negative,
                Polarity::Negative => Polarity::Positive,
            },
            index: self.index,
        }
    }

    pub fn cw_next(self) -> Self {
        ConeRef::from_sector(self.sector() + 5)
    }

    pub fn ccw_next(self) -> Self {
        ConeRef::from_sector(self.sector() + 1)
    }

    pub fn all() -> [ConeRef; 6] {
        std::array::from_fn(ConeRef::from_sector)
    }
}

impl fmt::Display for ConeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Positive => write!(f, "C{}", self.index),
            Polarity::Negative => write!(f, "C̄{}", self.index),
        }
    }
}

impl fmt::Debug for ConeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Doubled unit vectors, each component as (rational, √3) coefficients.
type DirComponent = (i64, i64);
type Dir = (DirComponent, DirComponent);

/// Doubled direction of the ray at angle `60°·k`.
const RAYS: [Dir; 6] = [
    ((2, 0), (0, 0)),
    ((1, 0), (0, 1)),
    ((-1, 0), (0, 1)),
    ((-2, 0), (0, 0)),
    ((-1, 0), (0, -1)),
    ((1, 0), (0, -1)),
];

/// Doubled bisector of sector `k`, at angle `60°·k + 30°`.
const BISECTORS: [Dir; 6] = [
    ((0, 1), (1, 0)),
    ((0, 0), (2, 0)),
    ((0, -1), (1, 0)),
    ((0, -1), (-1, 0)),
    ((0, 0), (-2, 0)),
    ((0, 1), (-1, 0)),
];

fn comp_times(s: &Scalar, c: DirComponent) -> ExtScalar {
    let term = |k: i64| {
        if k == 0 {
            Scalar::zero()
        } else {
            s * &Scalar::from_int(k)
        }
    };
    ExtScalar::new(term(c.0), term(c.1))
}

fn dir_dot(dx: &Scalar, dy: &Scalar, d: Dir) -> ExtScalar {
    &comp_times(dx, d.0) + &comp_times(dy, d.1)
}

/// `dir × (dx, dy)`.
fn dir_cross(d: Dir, dx: &Scalar, dy: &Scalar) -> ExtScalar {
    &comp_times(dy, d.0) - &comp_times(dx, d.1)
}

fn comp_ext(c: DirComponent) -> ExtScalar {
    ExtScalar::new(Scalar::from_int(c.0), Scalar::from_int(c.1))
}

/// Sector containing direction `(dx, dy)`, or `None` on a ray (or zero vector).
///
/// For rational directions only the horizontal rays can be hit exactly; the
/// 60° and 120° tests still go through the exact `dy²` vs `3dx²` comparison.
pub(crate) fn sector_of(dx: &Scalar, dy: &Scalar) -> Option<usize> {
    let sy = dy.sign();
    if sy == Sign::Zero {
        return None;
    }
    let steep = (dy * dy).cmp(&(&(dx * dx) * &Scalar::from_int(3)));
    let sx = dx.sign();
    let upper = sy == Sign::Positive;
    match steep {
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Greater => Some(if upper { 1 } else { 4 }),
        std::cmp::Ordering::Less => Some(match (upper, sx) {
            (true, Sign::Positive) => 0,
            (true, _) => 2,
            (false, Sign::Positive) => 5,
            (false, _) => 3,
        }),
    }
}

/// The open cone of apex `u` that contains `p`.
pub fn cone_of(u: &Point, p: &Point) -> Result<ConeRef> {
    let (dx, dy) = p.sub(u);
    sector_of(&dx, &dy)
        .map(ConeRef::from_sector)
        .ok_or_else(|| Error::DegenerateDirection {
            from: u.to_string(),
            to: p.to_string(),
        })
}

/// Twice the bisector projection; order-equivalent to [`bisector_projection`].
pub(crate) fn projection_key(u: &Point, cone: ConeRef, p: &Point) -> ExtScalar {
    let (dx, dy) = p.sub(u);
    dir_dot(&dx, &dy, BISECTORS[cone.sector()])
}

/// Length `|up′|` of the orthogonal projection of `p − u` onto the bisector
/// of `cone` (signed; positive inside the cone).
pub fn bisector_projection(u: &Point, cone: ConeRef, p: &Point) -> ExtScalar {
    projection_key(u, cone, p).scale(&Scalar::from_ratio(1, 2))
}

/// True iff `p` lies in the closed sector `k` of apex `u`.
fn in_closed_sector(u: &Point, k: usize, p: &Point) -> bool {
    let (dx, dy) = p.sub(u);
    dir_cross(RAYS[k], &dx, &dy).sign() != Sign::Negative
        && dir_cross(RAYS[(k + 1) % 6], &dx, &dy).sign() != Sign::Positive
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    CoincidentPoints(usize, usize),
    /// The two points are aligned with a cone ray direction.
    RayParallel(usize, usize),
    Collinear(usize, usize, usize),
    CrossingConstraints((usize, usize), (usize, usize)),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CoincidentPoints(a, b) => write!(f, "points {a} and {b} coincide"),
            Violation::RayParallel(a, b) => {
                write!(f, "points {a} and {b} define a line parallel to a cone ray")
            }
            Violation::Collinear(a, b, c) => write!(f, "points {a}, {b}, {c} are collinear"),
            Violation::CrossingConstraints(s, t) => {
                write!(f, "constraints {s:?} and {t:?} cross")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "no violations");
        }
        let shown: Vec<String> = self
            .violations
            .iter()
            .take(8)
            .map(|v| v.to_string())
            .collect();
        write!(f, "{}", shown.join("; "))?;
        if self.violations.len() > 8 {
            write!(f, "; and {} more", self.violations.len() - 8)?;
        }
        Ok(())
    }
}

/// A point set with non-crossing constraint segments between its points.
pub struct Instance {
    points: Vec<Point>,
    constraints: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
    sectors: OnceLock<Vec<u8>>,
    splits: OnceLock<Vec<[Vec<usize>; 6]>>,
}

const NO_SECTOR: u8 = u8::MAX;

impl Clone for Instance {
    fn clone(&self) -> Self {
        Instance::new(self.points.clone(), self.constraints.clone())
            .expect("cloned instance was already well formed")
    }
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Instance")
            .field("points", &self.points)
            .field("constraints", &self.constraints)
            .finish()
    }
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.constraints == other.constraints
    }
}

impl Instance {
    /// Builds an instance, checking only structural well-formedness
    /// (index ranges, self-loops, duplicate constraints). Geometric validity
    /// is reported separately by [`validate_general_position`].
    pub fn new(points: Vec<Point>, constraints: Vec<(usize, usize)>) -> Result<Self> {
        let n = points.len();
        let mut normalized = Vec::with_capacity(constraints.len());
        for &(a, b) in &constraints {
            if a >= n || b >= n {
                return Err(Error::MalformedInstance(format!(
                    "constraint ({a}, {b}) references a vertex outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::MalformedInstance(format!(
                    "constraint ({a}, {b}) is a loop"
                )));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MalformedInstance(format!(
                "duplicate constraint {:?}",
                w[0]
            )));
        }
        let mut incident = vec![Vec::new(); n];
        for &(a, b) in &normalized {
            incident[a].push(b);
            incident[b].push(a);
        }
        Ok(Instance {
            points,
            constraints: normalized,
            incident,
            sectors: OnceLock::new(),
            splits: OnceLock::new(),
        })
    }

    /// [`Instance::new`] followed by a general-position check.
    pub fn validated(points: Vec<Point>, constraints: Vec<(usize, usize)>) -> Result<Self> {
        let inst = Instance::new(points, constraints)?;
        let report = validate_general_position(&inst);
        if report.is_valid() {
            Ok(inst)
        } else {
            Err(Error::InvalidInstance(report))
        }
    }

    pub fn from_int_coords(coords: &[(i64, i64)], constraints: &[(usize, usize)]) -> Result<Self> {
        let points = coords
            .iter()
            .map(|&(x, y)| Point::from_ints(x, y))
            .collect();
        Instance::new(points, constraints.to_vec())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, v: usize) -> &Point {
        &self.points[v]
    }

    /// Constraints as sorted `(min, max)` pairs.
    pub fn constraints(&self) -> &[(usize, usize)] {
        &self.constraints
    }

    /// Other endpoints of the constraints incident to `v`.
    pub fn constrained_neighbors(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn is_constraint(&self, a: usize, b: usize) -> bool {
        self.incident[a].contains(&b)
    }

    /// c(v): number of constraints incident to `v`.
    pub fn constraint_degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    /// Number of constraints incident to `v` whose other endpoint lies in `cone` of `v`.
    pub fn constraint_degree_in(&self, v: usize, cone: ConeRef) -> usize {
        self.splits_in(v, cone).len()
    }

    fn sector_table(&self) -> &[u8] {
        self.sectors.get_or_init(|| {
            let n = self.points.len();
            let mut table = vec![NO_SECTOR; n * n];
            for u in 0..n {
                for v in 0..n {
                    if u != v {
                        let (dx, dy) = self.points[v].sub(&self.points[u]);
                        if let Some(k) = sector_of(&dx, &dy) {
                            table[u * n + v] = k as u8;
                        }
                    }
                }
            }
            table
        })
    }

    /// Cone of vertex `u` containing vertex `v`; `None` for `u == v` or a
    /// degenerate direction.
    pub fn cone_between(&self, u: usize, v: usize) -> Option<ConeRef> {
        let k = self.sector_table()[u * self.points.len() + v];
        (k != NO_SECTOR).then(|| ConeRef::from_sector(k as usize))
    }

    /// Cone lookup for instances already known to be in general position.
    pub(crate) fn cone(&self, u: usize, v: usize) -> ConeRef {
        self.cone_between(u, v).unwrap_or_else(|| {
            panic!("no cone of {u} contains {v}; instance not in general position")
        })
    }

    /// Constraint endpoints splitting `cone` of `u`, sorted counterclockwise.
    pub fn splits_in(&self, u: usize, cone: ConeRef) -> &[usize] {
        let all = self.splits.get_or_init(|| {
            (0..self.points.len())
                .map(|u| {
                    let mut per: [Vec<usize>; 6] = Default::default();
                    for &v in &self.incident[u] {
                        if let Some(c) = self.cone_between(u, v) {
                            per[c.sector()].push(v);
                        }
                    }
                    for list in per.iter_mut() {
                        list.sort_by(|&a, &b| {
                            ccw_order(&self.points[u], &self.points[a], &self.points[b])
                        });
                    }
                    per
                })
                .collect()
        });
        &all[u][cone.sector()]
    }

    /// Indices of the subcones of `cone` at `u` that contain vertex `p`
    /// (two when `p` is the far end of a splitting constraint).
    pub(crate) fn subcones_containing(
        &self,
        u: usize,
        cone: ConeRef,
        p: usize,
    ) -> RangeInclusive<usize> {
        let splits = self.splits_in(u, cone);
        if let Some(m) = splits.iter().position(|&c| c == p) {
            return m..=m + 1;
        }
        let apex = &self.points[u];
        let target = &self.points[p];
        let j = splits
            .iter()
            .filter(|&&c| orientation(apex, &self.points[c], target) == Orientation::Left)
            .count();
        j..=j
    }
}

/// Angular order around `apex` inside a cone narrower than 180°.
pub(crate) fn ccw_order(apex: &Point, a: &Point, b: &Point) -> std::cmp::Ordering {
    match orientation(apex, a, b) {
        Orientation::Left => std::cmp::Ordering::Less,
        Orientation::Right => std::cmp::Ordering::Greater,
        Orientation::Collinear => std::cmp::Ordering::Equal,
    }
}

/// Every general-position violation in the instance. An empty report means
/// the instance is valid.
pub fn validate_general_position(inst: &Instance) -> ValidationReport {
    let pts = inst.points();
    let n = pts.len();
    let mut violations = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if pts[a] == pts[b] {
                violations.push(Violation::CoincidentPoints(a, b));
            } else {
                let (dx, dy) = pts[b].sub(&pts[a]);
                if sector_of(&dx, &dy).is_none() {
                    violations.push(Violation::RayParallel(a, b));
                }
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if pts[a] == pts[b] {
                continue;
            }
            for c in b + 1..n {
                if pts[c] != pts[a]
                    && pts[c] != pts[b]
                    && cross(&pts[a], &pts[b], &pts[c]).is_zero()
                {
                    violations.push(Violation::Collinear(a, b, c));
                }
            }
        }
    }
    let cs = inst.constraints();
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            let (a, b) = cs[i];
            let (c, d) = cs[j];
            if segments_cross(&pts[a], &pts[b], &pts[c], &pts[d]) {
                violations.push(Violation::CrossingConstraints(cs[i], cs[j]));
            }
        }
    }
    ValidationReport { violations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SubconeRef {
    pub apex: usize,
    pub cone: ConeRef,
    /// Counterclockwise ordinal within the cone.
    pub j: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Boundary {
    /// A ray of the cone itself (exclusive); the value is the ray angle in degrees.
    ConeRay(u16),
    /// The line through the apex and this constraint endpoint (inclusive).
    Constraint(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subcone {
    pub id: SubconeRef,
    pub cw: Boundary,
    pub ccw: Boundary,
}

/// Subcones of `cone` at `u`, counterclockwise. An unsplit cone is a single subcone.
pub fn subcones_of(inst: &Instance, u: usize, cone: ConeRef) -> Vec<Subcone> {
    let splits = inst.splits_in(u, cone);
    let k = cone.sector();
    let cw_ray = Boundary::ConeRay((60 * k) as u16);
    let ccw_ray = Boundary::ConeRay((60 * ((k + 1) % 6)) as u16);
    (0..=splits.len())
        .map(|j| Subcone {
            id: SubconeRef { apex: u, cone, j },
            cw: if j == 0 {
                cw_ray
            } else {
                Boundary::Constraint(splits[j - 1])
            },
            ccw: if j == splits.len() {
                ccw_ray
            } else {
                Boundary::Constraint(splits[j])
            },
        })
        .collect()
}

/// Whether `p` lies in the subcone: cone rays are exclusive, splitting
/// constraint lines inclusive.
pub fn membership(inst: &Instance, subcone: &SubconeRef, p: &Point) -> bool {
    let u = subcone.apex;
    let apex = inst.point(u);
    let (dx, dy) = p.sub(apex);
    if sector_of(&dx, &dy) != Some(subcone.cone.sector()) {
        return false;
    }
    let splits = inst.splits_in(u, subcone.cone);
    let j = subcone.j;
    if j > splits.len() {
        return false;
    }
    let after_cw = j == 0 || orientation(apex, inst.point(splits[j - 1]), p) != Orientation::Right;
    let before_ccw =
        j == splits.len() || orientation(apex, p, inst.point(splits[j])) != Orientation::Right;
    after_cw && before_ccw
}

#[derive(Clone, PartialEq, Eq)]
pub struct ExtPoint {
    pub x: ExtScalar,
    pub y: ExtScalar,
}

impl ExtPoint {
    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Debug for ExtPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// `tan α = numerator / denominator`, both nonnegative elements of ℚ[√3].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TanAlpha {
    pub numerator: ExtScalar,
    pub denominator: ExtScalar,
}

impl TanAlpha {
    /// Exact test `α ≤ π/6`, i.e. `√3·numerator ≤ denominator`.
    pub fn at_most_pi_over_6(&self) -> bool {
        (&self.denominator - &self.numerator.times_sqrt3()).sign() != Sign::Negative
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator.to_f64() / self.denominator.to_f64()
    }
}

/// The canonical triangle ∇(u, w).
#[derive(Debug, Clone)]
pub struct CanonicalTriangle {
    pub apex: usize,
    pub target: usize,
    pub cone: ConeRef,
    pub apex_point: Point,
    /// Corner on the counterclockwise boundary ray (upper left for C0).
    pub corner_a: ExtPoint,
    /// Corner on the clockwise boundary ray (upper right for C0).
    pub corner_b: ExtPoint,
    /// Bisector projection of the target, i.e. the triangle's height.
    pub height: ExtScalar,
    /// Angle between `uw` and the bisector.
    pub tan_alpha: TanAlpha,
    pub alpha: f64,
}

impl CanonicalTriangle {
    /// Distance from the apex along the bisector to the target, and the
    /// target's offset from the bisector, as doubles. The path-length bound
    /// `(√3 cos α + sin α)|uw|` equals `√3·height + offset`.
    pub fn height_and_offset(&self) -> (f64, f64) {
        (
            self.height.to_f64(),
            self.tan_alpha.numerator.to_f64() / 2.0,
        )
    }
}

fn corner_on_ray(apex: &Point, ray: Dir, height: &ExtScalar) -> ExtPoint {
    // The unit ray makes 30° with the bisector, so the corner is at distance
    // height / cos 30° = (2/3)·√3·height. RAYS are doubled, hence 1/3 below.
    let dist = height.times_sqrt3().scale(&Scalar::from_ratio(1, 3));
    ExtPoint {
        x: &ExtScalar::rational(apex.x.clone()) + &(&dist * &comp_ext(ray.0)),
        y: &ExtScalar::rational(apex.y.clone()) + &(&dist * &comp_ext(ray.1)),
    }
}

pub fn canonical_triangle(inst: &Instance, u: usize, w: usize) -> Result<CanonicalTriangle> {
    let cone = inst
        .cone_between(u, w)
        .filter(|c| c.is_positive())
        .ok_or(Error::NotInPositiveCone { apex: u, target: w })?;
    let apex = inst.point(u);
    let target = inst.point(w);
    let k = cone.sector();
    let key = projection_key(apex, cone, target);
    let (dx, dy) = target.sub(apex);
    let offset = dir_cross(BISECTORS[k], &dx, &dy).abs();
    let height = key.scale(&Scalar::from_ratio(1, 2));
    let tan_alpha = TanAlpha {
        numerator: offset,
        denominator: key,
    };
    let alpha = tan_alpha
        .numerator
        .to_f64()
        .atan2(tan_alpha.denominator.to_f64());
    Ok(CanonicalTriangle {
        apex: u,
        target: w,
        cone,
        apex_point: apex.clone(),
        corner_a: corner_on_ray(apex, RAYS[(k + 1) % 6], &height),
        corner_b: corner_on_ray(apex, RAYS[k], &height),
        height,
        tan_alpha,
        alpha,
    })
}

/// Closed-triangle containment.
pub fn contains_point(t: &CanonicalTriangle, p: &Point) -> bool {
    let k = t.cone.sector();
    in_closed_sector(&t.apex_point, k, p)
        && (&projection_key(&t.apex_point, t.cone, p) - &t.height.scale(&Scalar::from_int(2)))
            .sign()
            != Sign::Positive
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn ext(a: Scalar, b: Scalar) -> ExtScalar {
        ExtScalar::new(a, b)
    }

    #[test]
    fn sector_numbering_matches_cone_names() {
        let names: Vec<String> = ConeRef::all().iter().map(|c| c.to_string()).collect();
        assert_eq!(names, ["C̄1", "C0", "C̄2", "C1", "C̄0", "C2"]);
        for k in 0..6 {
            assert_eq!(ConeRef::from_sector(k).sector(), k);
        }
        // C_i has C̄_{i+1} clockwise and C̄_{i-1} counterclockwise.
        for i in 0..3 {
            assert_eq!(ConeRef::positive(i).cw_next(), ConeRef::negative(i + 1));
            assert_eq!(ConeRef::positive(i).ccw_next(), ConeRef::negative(i + 2));
        }
    }

    #[test]
    fn cone_of_examples() {
        assert_eq!(cone_of(&p(0, 0), &p(1, 2)).unwrap(), ConeRef::positive(0));
        assert_eq!(cone_of(&p(0, 0), &p(-1, -2)).unwrap(), ConeRef::negative(0));
        assert_eq!(cone_of(&p(0, 0), &p(2, 1)).unwrap(), ConeRef::negative(1));
        assert!(matches!(
            cone_of(&p(0, 0), &p(3, 0)),
            Err(Error::DegenerateDirection { .. })
        ));
    }

    #[test]
    fn cone_of_near_sixty_degrees() {
        // 1351/780 > √3 > 989/571
        assert_eq!(
            cone_of(&p(0, 0), &p(780, 1351)).unwrap(),
            ConeRef::positive(0)
        );
        assert_eq!(
            cone_of(&p(0, 0), &p(571, 989)).unwrap(),
            ConeRef::negative(1)
        );
        assert_eq!(
            cone_of(&p(0, 0), &p(-571, -989)).unwrap(),
            ConeRef::positive(1)
        );
        assert_eq!(
            cone_of(&p(0, 0), &p(571, -989)).unwrap(),
            ConeRef::positive(2)
        );
    }

    #[test]
    fn validation_examples() {
        let ok = Instance::from_int_coords(&[(0, 0), (1, 2)], &[]).unwrap();
        assert!(validate_general_position(&ok).is_valid());
        let flat = Instance::from_int_coords(&[(0, 0), (2, 0)], &[]).unwrap();
        assert_eq!(
            validate_general_position(&flat).violations,
            vec![Violation::RayParallel(0, 1)]
        );
        let line = Instance::from_int_coords(&[(0, 0), (1, 1), (2, 2)], &[]).unwrap();
        assert!(validate_general_position(&line)
            .violations
            .contains(&Violation::Collinear(0, 1, 2)));
        let crossing =
            Instance::from_int_coords(&[(0, 0), (4, 5), (1, 3), (3, 1)], &[(0, 1), (2, 3)])
                .unwrap();
        assert_eq!(
            validate_general_position(&crossing).violations,
            vec![Violation::CrossingConstraints((0, 1), (2, 3))]
        );
        let twin = Instance::from_int_coords(&[(1, 1), (1, 1)], &[]).unwrap();
        assert_eq!(
            validate_general_position(&twin).violations,
            vec![Violation::CoincidentPoints(0, 1)]
        );
    }

    #[test]
    fn malformed_constraints_are_rejected() {
        assert!(Instance::from_int_coords(&[(0, 0)], &[(0, 1)]).is_err());
        assert!(Instance::from_int_coords(&[(0, 0), (1, 2)], &[(1, 1)]).is_err());
        assert!(Instance::from_int_coords(&[(0, 0), (1, 2)], &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn subcone_examples() {
        let c0 = ConeRef::positive(0);
        let plain = Instance::from_int_coords(&[(0, 0), (1, 2)], &[]).unwrap();
        let subs = subcones_of(&plain, 0, c0);
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].cw, Boundary::ConeRay(60));
        assert_eq!(subs[0].ccw, Boundary::ConeRay(120));

        let split = Instance::from_int_coords(&[(0, 0), (1, 2)], &[(0, 1)]).unwrap();
        let subs = subcones_of(&split, 0, c0);
        assert_eq!(subs.len(), 2);
        assert!(membership(&split, &subs[0].id, &p(1, 2)));
        assert!(membership(&split, &subs[1].id, &p(1, 2)));
        assert!(membership(&split, &subs[0].id, &p(10, 19)));
        assert!(!membership(&split, &subs[1].id, &p(10, 19)));
        assert!(membership(&split, &subs[1].id, &p(-1, 5)));
        assert_eq!(split.subcones_containing(0, c0, 1), 0..=1);

        let two = Instance::from_int_coords(&[(0, 0), (1, 3), (-1, 3)], &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(subcones_of(&two, 0, c0).len(), 3);
        assert_eq!(two.splits_in(0, c0), &[1, 2]);
    }

    #[test]
    fn membership_examples() {
        let inst = Instance::from_int_coords(&[(0, 0), (1, 2)], &[]).unwrap();
        let full = SubconeRef {
            apex: 0,
            cone: ConeRef::positive(0),
            j: 0,
        };
        assert!(membership(&inst, &full, &p(1, 2)));
        assert!(!membership(&inst, &full, &p(2, 1)));
        assert!(!membership(&inst, &full, &p(-5, 0)));
    }

    #[test]
    fn projection_examples() {
        let o = p(0, 0);
        let c0 = ConeRef::positive(0);
        assert_eq!(
            bisector_projection(&o, c0, &p(1, 2)),
            ext(2.into(), 0.into())
        );
        assert_eq!(
            bisector_projection(&o, c0, &p(-2, 3)),
            ext(3.into(), 0.into())
        );
        // (3√3 + 1)/2
        assert_eq!(
            bisector_projection(&o, ConeRef::positive(2), &p(3, -1)),
            ext(Scalar::from_ratio(1, 2), Scalar::from_ratio(3, 2))
        );
    }

    #[test]
    fn canonical_triangle_examples() {
        let inst = Instance::from_int_coords(&[(0, 0), (1, 2), (2, 1)], &[]).unwrap();
        let t = canonical_triangle(&inst, 0, 1).unwrap();
        let two_thirds = Scalar::from_ratio(2, 3);
        assert_eq!(t.corner_a.x, ext(0.into(), -&two_thirds));
        assert_eq!(t.corner_a.y, ext(2.into(), 0.into()));
        assert_eq!(t.corner_b.x, ext(0.into(), two_thirds));
        assert_eq!(t.corner_b.y, ext(2.into(), 0.into()));
        assert!(contains_point(&t, &p(1, 2)));
        assert!(contains_point(&t, &p(0, 1)));
        assert!(!contains_point(&t, &p(5, 5)));
        assert!(contains_point(&t, &p(0, 0)));
        assert!(matches!(
            canonical_triangle(&inst, 0, 2),
            Err(Error::NotInPositiveCone { apex: 0, target: 2 })
        ));
        // tan α = 1/2 for w = (1, 2)
        assert!((t.tan_alpha.to_f64() - 0.5).abs() < 1e-15);
        assert!(t.tan_alpha.at_most_pi_over_6());
    }

    #[test]
    fn canonical_triangle_corners_bracket_target() {
        let inst = Instance::from_int_coords(&[(3, 7), (-4, 1), (10, -3), (5, 20)], &[]).unwrap();
        for u in 0..4 {
            for w in 0..4 {
                let Ok(t) = canonical_triangle(&inst, u, w) else {
                    continue;
                };
                let (ax, ay) = t.corner_a.to_f64();
                let (bx, by) = t.corner_b.to_f64();
                let (wx, wy) = inst.point(w).to_f64();
                let ab = (ax - bx).hypot(ay - by);
                let aw = (ax - wx).hypot(ay - wy);
                let wb = (wx - bx).hypot(wy - by);
                assert!((aw + wb - ab).abs() < 1e-9 * ab.max(1.0), "u={u} w={w}");
            }
        }
    }

    #[test]
    fn duality_holds_on_grid() {
        let coords: Vec<(i64, i64)> = (0..25)
            .map(|i| ((i * 7) % 11 - 5, (i * i * 3) % 17 + i))
            .collect();
        let inst = Instance::from_int_coords(&coords, &[]).unwrap();
        for u in 0..inst.len() {
            for v in 0..inst.len() {
                if let (Some(a), Some(b)) = (inst.cone_between(u, v), inst.cone_between(v, u)) {
                    assert_eq!(a.dual(), b);
                }
            }
        }
    }
}
