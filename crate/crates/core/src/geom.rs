//! Planar primitives: points, terminal triangles, angles and the bisector
//! residual that every anchor condition is phrased in.
//!
//! Angles are always taken as `atan2(|u × v|, u · v)`, which stays accurate
//! near 0 and π where `acos` of a normalized dot product does not.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum pairwise terminal distance and minimum |twice signed area|
/// accepted for a terminal triangle.
pub const TRIANGLE_TOL: f64 = 1e-9;

/// Slack on the 2π/3 test in [`classify`]. Exact-boundary triangles are wide.
pub const TIE_TOL: f64 = 1e-12;

/// Rays shorter than this have no direction.
pub const RAY_TOL: f64 = 1e-12;

pub const TWO_PI_3: f64 = 2.0 * std::f64::consts::FRAC_PI_3;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Unit vector in the same direction; `None` for (near) zero vectors.
    pub fn unit(self) -> Option<Point> {
        let n = self.norm();
        (n >= RAY_TOL).then(|| self * (1.0 / n))
    }

    /// Counterclockwise rotation by `angle` radians.
    pub fn rotate(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Left-hand normal (rotation by +π/2).
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    pub fn max_abs_diff(self, o: Point) -> f64 {
        (self.x - o.x).abs().max((self.y - o.y).abs())
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Names one of the three terminals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Vertex {
    A,
    B,
    C,
}

impl Vertex {
    pub const ALL: [Vertex; 3] = [Vertex::A, Vertex::B, Vertex::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Vertex {
        Vertex::ALL[i % 3]
    }

    /// The other two vertices, in cyclic order after `self`.
    pub fn others(self) -> (Vertex, Vertex) {
        let i = self.index();
        (Vertex::from_index(i + 1), Vertex::from_index(i + 2))
    }

    /// The vertex not in `{self, other}`. `self` and `other` must differ.
    pub fn third(self, other: Vertex) -> Vertex {
        debug_assert_ne!(self, other);
        Vertex::from_index(3 - self.index() - other.index())
    }

    pub fn label(self) -> &'static str {
        match self {
            Vertex::A => "A",
            Vertex::B => "B",
            Vertex::C => "C",
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Bit for the side `{u, v}` in an edge-subset mask: AB = 1, BC = 2, CA = 4.
pub fn side_bit(u: Vertex, v: Vertex) -> u8 {
    debug_assert_ne!(u, v);
    match (u.index().min(v.index()), u.index().max(v.index())) {
        (0, 1) => 1,
        (1, 2) => 2,
        _ => 4,
    }
}

/// The two endpoints of each side bit, in mask order.
pub const SIDES: [(Vertex, Vertex); 3] = [(Vertex::A, Vertex::B), (Vertex::B, Vertex::C), (Vertex::C, Vertex::A)];

/// Three terminals forming a genuine (non-degenerate) triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TerminalTriangle {
    pub a: Point,
    pub b: Point,
    pub c: Point,
}

impl TerminalTriangle {
    pub fn new(a: Point, b: Point, c: Point) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::InvalidTriangle("terminal coordinates must be finite".into()));
        }
        let min_d = a.dist(b).min(b.dist(c)).min(c.dist(a));
        if min_d <= TRIANGLE_TOL {
            return Err(Error::InvalidTriangle(format!(
                "terminals must be pairwise distinct (closest pair {min_d:e} apart)"
            )));
        }
        let area2 = (b - a).cross(c - a);
        if area2.abs() <= TRIANGLE_TOL {
            return Err(Error::InvalidTriangle(format!(
                "terminals must not be collinear (twice signed area {area2:e})"
            )));
        }
        Ok(TerminalTriangle { a, b, c })
    }

    pub fn from_coords(coords: [[f64; 2]; 3]) -> Result<Self> {
        let [a, b, c] = coords.map(|[x, y]| Point::new(x, y));
        Self::new(a, b, c)
    }

    pub fn vertex(&self, v: Vertex) -> Point {
        match v {
            Vertex::A => self.a,
            Vertex::B => self.b,
            Vertex::C => self.c,
        }
    }

    pub fn vertices(&self) -> [Point; 3] {
        [self.a, self.b, self.c]
    }

    /// Length of the side between two vertices.
    pub fn side(&self, u: Vertex, v: Vertex) -> f64 {
        self.vertex(u).dist(self.vertex(v))
    }

    pub fn perimeter(&self) -> f64 {
        self.a.dist(self.b) + self.b.dist(self.c) + self.c.dist(self.a)
    }

    /// Shortest side, as `(length, endpoints)`. Ties go to the first side in
    /// AB, BC, CA order.
    pub fn shortest_side(&self) -> (f64, (Vertex, Vertex)) {
        SIDES
            .iter()
            .map(|&(u, v)| (self.side(u, v), (u, v)))
            .fold(None, |best: Option<(f64, (Vertex, Vertex))>, cur| match best {
                Some(b) if b.0 <= cur.0 => Some(b),
                _ => Some(cur),
            })
            .expect("three sides")
    }

    pub fn twice_signed_area(&self) -> f64 {
        (self.b - self.a).cross(self.c - self.a)
    }

    /// Internal angle at a vertex.
    pub fn angle(&self, v: Vertex) -> f64 {
        let (p, q) = v.others();
        angle_at(self.vertex(v), self.vertex(p), self.vertex(q)).expect("valid triangle has no zero-length sides")
    }

    pub fn angles(&self) -> [f64; 3] {
        Vertex::ALL.map(|v| self.angle(v))
    }

    /// Barycentric coordinates of `p` with respect to (A, B, C).
    pub fn barycentric(&self, p: Point) -> [f64; 3] {
        let area = self.twice_signed_area();
        let wa = (self.b - p).cross(self.c - p) / area;
        let wb = (self.c - p).cross(self.a - p) / area;
        [wa, wb, 1.0 - wa - wb]
    }

    pub fn centroid(&self) -> Point {
        (self.a + self.b + self.c) * (1.0 / 3.0)
    }

    /// Applies `f` to every terminal; fails if the image is degenerate.
    pub fn map(&self, f: impl Fn(Point) -> Point) -> Result<Self> {
        Self::new(f(self.a), f(self.b), f(self.c))
    }
}

/// Undirected angle ∠p-apex-q in `[0, π]`.
pub fn angle_at(apex: Point, p: Point, q: Point) -> Result<f64> {
    let u = p - apex;
    let v = q - apex;
    if u.norm() < RAY_TOL || v.norm() < RAY_TOL {
        return Err(Error::DegenerateGeometry("zero-length ray in angle"));
    }
    Ok(u.cross(v).abs().atan2(u.dot(v)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleClass {
    /// Every internal angle is below 2π/3, so the Steiner point is interior.
    InteriorSteinerPoint,
    /// The named vertex has an internal angle of at least 2π/3.
    WideAngle(Vertex),
}

pub fn classify(t: &TerminalTriangle) -> TriangleClass {
    let angles = t.angles();
    let (wide, max) =
        angles
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, a)| if a > acc.1 { (i, a) } else { acc });
    if max < TWO_PI_3 - TIE_TOL {
        TriangleClass::InteriorSteinerPoint
    } else {
        TriangleClass::WideAngle(Vertex::from_index(wide))
    }
}

/// `∠(incoming_from, anchor, out1) − ∠(incoming_from, anchor, out2)`.
///
/// Zero exactly when the edge from `anchor` to `incoming_from` bisects the
/// angle between the two outgoing edges.
pub fn bisector_residual(incoming_from: Point, anchor: Point, out1: Point, out2: Point) -> Result<f64> {
    Ok(angle_at(anchor, incoming_from, out1)? - angle_at(anchor, incoming_from, out2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn equilateral() -> TerminalTriangle {
        TerminalTriangle::new(Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.5, 3f64.sqrt() / 2.0)).unwrap()
    }

    #[test]
    fn angle_examples() {
        let o = Point::new(0.0, 0.0);
        let e = Point::new(1.0, 0.0);
        assert!((angle_at(o, e, Point::new(0.0, 1.0)).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(angle_at(o, e, Point::new(2.0, 0.0)).unwrap(), 0.0);
        // atan2(1e-3, -1) = π - atan(1e-3)
        let got = angle_at(o, e, Point::new(-1.0, 1e-3)).unwrap();
        assert!((got - (PI - 1e-3f64.atan())).abs() < 1e-15);
        assert!((got - 3.1406).abs() < 1e-4);
    }

    #[test]
    fn angle_rejects_zero_rays() {
        let o = Point::new(1.0, 1.0);
        assert!(matches!(angle_at(o, o, Point::new(2.0, 1.0)), Err(Error::DegenerateGeometry(_))));
        assert!(angle_at(o, Point::new(2.0, 1.0), Point::new(1.0, 1.0 + 1e-13)).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&equilateral()), TriangleClass::InteriorSteinerPoint);
        let wide = TerminalTriangle::new(Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(-1.0, 0.2)).unwrap();
        assert!((wide.angle(Vertex::A) - 2.944).abs() < 1e-3);
        assert_eq!(classify(&wide), TriangleClass::WideAngle(Vertex::A));
        let generic = TerminalTriangle::new(Point::new(0.0, 0.0), Point::new(4.0, 0.0), Point::new(1.0, 3.0)).unwrap();
        assert_eq!(classify(&generic), TriangleClass::InteriorSteinerPoint);
    }

    #[test]
    fn exact_boundary_is_wide() {
        // Isosceles with apex angle exactly 2π/3 up to rounding.
        let s = (TWO_PI_3 / 2.0).sin();
        let c = (TWO_PI_3 / 2.0).cos();
        let t = TerminalTriangle::new(Point::new(0.0, 0.0), Point::new(s, -c), Point::new(-s, -c)).unwrap();
        assert!((t.angle(Vertex::A) - TWO_PI_3).abs() < 1e-14);
        assert_eq!(classify(&t), TriangleClass::WideAngle(Vertex::A));
    }

    #[test]
    fn bisector_examples() {
        let from = Point::new(0.0, -1.0);
        let o = Point::new(0.0, 0.0);
        let r = bisector_residual(from, o, Point::new(1.0, 1.0), Point::new(-1.0, 1.0)).unwrap();
        assert!(r.abs() < 1e-15);
        let r = bisector_residual(from, o, Point::new(1.0, 0.0), Point::new(-1.0, 1.0)).unwrap();
        assert!((r + FRAC_PI_4).abs() < 1e-15);
        assert!(bisector_residual(o, o, Point::new(1.0, 0.0), Point::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn rejects_degenerate_triangles() {
        let p = Point::new(0.0, 0.0);
        assert!(matches!(TerminalTriangle::new(p, p, Point::new(1.0, 1.0)), Err(Error::InvalidTriangle(_))));
        let err = TerminalTriangle::new(p, Point::new(1.0, 1.0), Point::new(2.0, 2.0)).unwrap_err();
        assert!(err.to_string().contains("collinear"));
        assert!(TerminalTriangle::new(p, Point::new(f64::NAN, 0.0), Point::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn side_bits_and_vertices() {
        assert_eq!(side_bit(Vertex::A, Vertex::B), 1);
        assert_eq!(side_bit(Vertex::C, Vertex::B), 2);
        assert_eq!(side_bit(Vertex::A, Vertex::C), 4);
        assert_eq!(Vertex::A.third(Vertex::C), Vertex::B);
        assert_eq!(Vertex::B.others(), (Vertex::C, Vertex::A));
        let t = equilateral();
        let bc = t.barycentric(t.centroid());
        assert!(bc.iter().all(|w| (w - 1.0 / 3.0).abs() < 1e-15));
    }
}
