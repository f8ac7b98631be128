//! Exact arithmetic kernel.
//!
//! Coordinates are rationals ([`Scalar`]); quantities that involve the cone
//! directions live in ℚ[√3] ([`ExtScalar`]). Every predicate here is decided
//! exactly and there are no tolerance parameters.

mod ext;
mod scalar;

use std::cmp::Ordering;
use std::fmt;

pub use ext::{sign_ext, ExtScalar, SQRT_3};
pub use scalar::{ParseScalarError, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn to_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

impl Orientation {
    pub fn reverse(self) -> Self {
        match self {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

impl From<Sign> for Orientation {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Positive => Orientation::Left,
            Sign::Negative => Orientation::Right,
            Sign::Zero => Orientation::Collinear,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(x.into(), y.into())
    }

    /// Difference vector `self - other`.
    pub fn sub(&self, other: &Point) -> (Scalar, Scalar) {
        (&self.x - &other.x, &self.y - &other.y)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    pub start: Point,
    pub end: Point,
}

impl Segment {
    pub fn new(start: Point, end: Point) -> Self {
        Segment { start, end }
    }
}

/// z-component of `(q - p) × (r - p)`.
pub fn cross(p: &Point, q: &Point, r: &Point) -> Scalar {
    let (ux, uy) = q.sub(p);
    let (vx, vy) = r.sub(p);
    &(&ux * &vy) - &(&uy * &vx)
}

/// Sign of the signed area of triangle `pqr`.
pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    cross(p, q, r).sign().into()
}

/// True iff the open segments `ab` and `cd` cross at a single point interior
/// to both. Shared endpoints, T-junctions and collinear overlaps are not
/// proper intersections.
pub fn segments_cross(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    if o1 == Orientation::Collinear || o2 == Orientation::Collinear || o1 == o2 {
        return false;
    }
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    o3 != Orientation::Collinear && o4 != Orientation::Collinear && o3 != o4
}

pub fn properly_intersect(s1: &Segment, s2: &Segment) -> bool {
    segments_cross(&s1.start, &s1.end, &s2.start, &s2.end)
}

/// `|pq|` rounded to a double. Only used for reporting and stretch checks.
pub fn euclid_length_approx(p: &Point, q: &Point) -> f64 {
    let (dx, dy) = p.sub(q);
    (&(&dx * &dx) + &(&dy * &dy)).to_f64().sqrt()
}
