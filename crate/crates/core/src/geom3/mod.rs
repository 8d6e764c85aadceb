//! Geometric primitives and predicates shared by every other module.
//!
//! Everything here is plain `f64` arithmetic with one geometric epsilon
//! ([`EPS`]) for degeneracy decisions. Legality clearances are passed in by
//! callers; this module never decides what "too close" means for a puzzle.
//!
//! Circles are always handled through their spine curve. A solid hoop is the
//! same circle with a positive `tube_radius`, and callers subtract the tube
//! when they compare a spine distance against a clearance.

mod distance;
mod lemmas;

pub use distance::{
    circle_circle, disk_disk, distance, point_circle, point_disk, point_segment, point_triangle,
    segment_circle, segment_disk, segment_segment, segment_triangle, triangle_circle,
    triangle_triangle, CircleScan, Shape,
};
pub use lemmas::{select_lollipop_side, select_minor_side, LemmaError, Point2};

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default geometric epsilon: below this, lengths and heights count as zero.
pub const EPS: f64 = 1e-9;

/// Default legality clearance between things that must not touch.
pub const DEFAULT_CLEARANCE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("degenerate segment: endpoints {0:?} and {1:?} coincide")]
    DegenerateSegment(Point3, Point3),
    #[error("degenerate triangle: area below epsilon")]
    DegenerateTriangle,
    #[error("invalid circle: {0}")]
    InvalidCircle(&'static str),
    #[error("non-finite coordinate")]
    NonFinite,
}

/// A point (or free vector) in 3-space. Serialized as `[x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 3]> for Point3 {
    fn from(a: [f64; 3]) -> Self {
        Point3::new(a[0], a[1], a[2])
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        [p.x, p.y, p.z]
    }
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 { x: 0.0, y: 0.0, z: 0.0 };
    pub const X: Point3 = Point3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Point3 = Point3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Point3 = Point3 { x: 0.0, y: 0.0, z: 1.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Point3) -> Point3 {
        Point3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn dist(self, o: Point3) -> f64 {
        (self - o).norm()
    }

    /// Unit vector in the same direction; `None` for (near) zero vectors.
    pub fn normalized(self) -> Option<Point3> {
        let n = self.norm();
        (n > EPS && n.is_finite()).then(|| self / n)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn lerp(self, o: Point3, t: f64) -> Point3 {
        self + (o - self) * t
    }

    /// Some unit vector orthogonal to `self` (assumed unit length).
    /// Deterministic: built from the coordinate axis least aligned with `self`.
    pub fn any_orthonormal(self) -> Point3 {
        let (ax, ay, az) = (self.x.abs(), self.y.abs(), self.z.abs());
        let helper = if ax <= ay && ax <= az {
            Point3::X
        } else if ay <= az {
            Point3::Y
        } else {
            Point3::Z
        };
        let u = helper - self * self.dot(helper);
        u / u.norm()
    }

    /// Rodrigues rotation of `self` about the unit `axis` by `angle` radians.
    pub fn rotated(self, axis: Point3, angle: f64) -> Point3 {
        if angle == 0.0 {
            return self;
        }
        let (s, c) = angle.sin_cos();
        self * c + axis.cross(self) * s + axis * (axis.dot(self) * (1.0 - c))
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Point3 {
    fn add_assign(&mut self, o: Point3) {
        *self = *self + o;
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Point3 {
    type Output = Point3;
    fn div(self, s: f64) -> Point3 {
        Point3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point3,
    pub b: Point3,
}

impl Segment {
    pub fn new(a: Point3, b: Point3) -> Result<Self, GeomError> {
        let s = Segment { a, b };
        s.check()?;
        Ok(s)
    }

    /// Builds without validation; callers that already know the endpoints are
    /// distinct (rope edges of a legal scene) use this on hot paths.
    pub const fn new_unchecked(a: Point3, b: Point3) -> Self {
        Segment { a, b }
    }

    pub fn check(&self) -> Result<(), GeomError> {
        if !self.a.is_finite() || !self.b.is_finite() {
            return Err(GeomError::NonFinite);
        }
        if self.a.dist(self.b) <= EPS {
            return Err(GeomError::DegenerateSegment(self.a, self.b));
        }
        Ok(())
    }

    pub fn dir(&self) -> Point3 {
        self.b - self.a
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn at(&self, t: f64) -> Point3 {
        self.a.lerp(self.b, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub p: Point3,
    pub q: Point3,
    pub r: Point3,
}

impl Triangle {
    pub fn new(p: Point3, q: Point3, r: Point3) -> Result<Self, GeomError> {
        let t = Triangle { p, q, r };
        t.check()?;
        Ok(t)
    }

    pub fn check(&self) -> Result<(), GeomError> {
        if !(self.p.is_finite() && self.q.is_finite() && self.r.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        if self.area() <= EPS {
            return Err(GeomError::DegenerateTriangle);
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        0.5 * (self.q - self.p).cross(self.r - self.p).norm()
    }

    pub fn normal(&self) -> Option<Point3> {
        (self.q - self.p).cross(self.r - self.p).normalized()
    }

    pub fn vertices(&self) -> [Point3; 3] {
        [self.p, self.q, self.r]
    }

    pub fn edges(&self) -> [Segment; 3] {
        [
            Segment::new_unchecked(self.p, self.q),
            Segment::new_unchecked(self.q, self.r),
            Segment::new_unchecked(self.r, self.p),
        ]
    }

    pub fn centroid(&self) -> Point3 {
        (self.p + self.q + self.r) / 3.0
    }
}

/// A round circle in space. `tube_radius == 0` is a wire; a positive value
/// models a solid hoop whose surface sits `tube_radius` away from the spine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point3,
    pub radius: f64,
    pub normal: Point3,
    pub tube_radius: f64,
}

impl Circle {
    pub fn new(center: Point3, radius: f64, normal: Point3, tube_radius: f64) -> Result<Self, GeomError> {
        let c = Circle { center, radius, normal, tube_radius };
        c.check()?;
        Ok(c)
    }

    pub fn wire(center: Point3, radius: f64, normal: Point3) -> Result<Self, GeomError> {
        Circle::new(center, radius, normal, 0.0)
    }

    pub fn check(&self) -> Result<(), GeomError> {
        if !self.center.is_finite() || !self.normal.is_finite() || !self.radius.is_finite() {
            return Err(GeomError::NonFinite);
        }
        if (self.normal.norm() - 1.0).abs() > 1e-6 {
            return Err(GeomError::InvalidCircle("normal is not unit length"));
        }
        if self.radius <= 0.0 {
            return Err(GeomError::InvalidCircle("radius must be positive"));
        }
        if !(self.tube_radius >= 0.0 && self.tube_radius < self.radius) {
            return Err(GeomError::InvalidCircle("tube radius must lie in [0, radius)"));
        }
        Ok(())
    }

    /// Orthonormal in-plane frame `(u, v)` with `u × v = normal`.
    pub fn frame(&self) -> (Point3, Point3) {
        let u = self.normal.any_orthonormal();
        let v = self.normal.cross(u);
        (u, v)
    }

    pub fn point_at(&self, theta: f64) -> Point3 {
        let (u, v) = self.frame();
        let (s, c) = theta.sin_cos();
        self.center + (u * c + v * s) * self.radius
    }

    /// Regular `n`-gon inscribed in the spine, counterclockwise about `normal`.
    pub fn polygon(&self, n: usize) -> Vec<Point3> {
        let (u, v) = self.frame();
        (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                let (s, c) = t.sin_cos();
                self.center + (u * c + v * s) * self.radius
            })
            .collect()
    }

    pub fn disk(&self) -> Disk {
        Disk { circle: *self }
    }

    pub fn plane(&self) -> Plane {
        Plane { point: self.center, normal: self.normal }
    }
}

/// The flat spanning disk of a circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub circle: Circle,
}

/// An oriented plane; the legal side of a forbidden plane is where
/// `signed_distance > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plane {
    pub point: Point3,
    pub normal: Point3,
}

impl Plane {
    pub fn signed_distance(&self, p: Point3) -> f64 {
        (p - self.point).dot(self.normal)
    }

    /// Lowest signed height reached by a circle's spine.
    pub fn circle_min_height(&self, c: &Circle) -> f64 {
        let in_plane = self.normal - c.normal * self.normal.dot(c.normal);
        self.signed_distance(c.center) - c.radius * in_plane.norm()
    }
}

/// Which side of an oriented segment something lies on, in the segment's
/// own frame: `Plus` is the side its leftward normal points to (the normal is
/// the direction rotated a quarter turn counterclockwise).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SideLabel {
    Plus,
    Minus,
}

impl SideLabel {
    pub fn sign(self) -> i8 {
        match self {
            SideLabel::Plus => 1,
            SideLabel::Minus => -1,
        }
    }

    pub fn flip(self) -> SideLabel {
        match self {
            SideLabel::Plus => SideLabel::Minus,
            SideLabel::Minus => SideLabel::Plus,
        }
    }

    pub fn from_sign(s: f64) -> SideLabel {
        if s >= 0.0 {
            SideLabel::Plus
        } else {
            SideLabel::Minus
        }
    }
}

/// Outcome of asking whether a segment pierces a flat disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiskCrossing {
    /// Transversal crossing; the sign is that of `direction · normal`.
    Cross(i8),
    None,
    /// Crossing within epsilon of the boundary circle, or segment (nearly)
    /// coplanar with the disk.
    Degenerate,
}

/// Signed crossing of the open segment `s` through the open disk `d`.
///
/// An endpoint lying within `eps` of the disk plane is classified as being on
/// the positive side. Under that convention a rope passing exactly through the
/// plane at a vertex is counted once, by whichever of its two edges actually
/// changes side, so crossing sums stay consistent along polylines.
pub fn seg_disk_crossing(s: &Segment, d: &Disk, eps: f64) -> DiskCrossing {
    let c = &d.circle;
    let h0 = (s.a - c.center).dot(c.normal);
    let h1 = (s.b - c.center).dot(c.normal);
    if h0.abs() <= eps && h1.abs() <= eps {
        return DiskCrossing::Degenerate;
    }
    let side0 = h0 > eps || h0.abs() <= eps;
    let side1 = h1 > eps || h1.abs() <= eps;
    if side0 == side1 {
        return DiskCrossing::None;
    }
    let t = (h0 / (h0 - h1)).clamp(0.0, 1.0);
    let p = s.at(t);
    let radial = {
        let d = p - c.center;
        (d - c.normal * d.dot(c.normal)).norm()
    };
    if (radial - c.radius).abs() <= eps {
        return DiskCrossing::Degenerate;
    }
    if radial > c.radius {
        return DiskCrossing::None;
    }
    if s.dir().dot(c.normal) > 0.0 {
        DiskCrossing::Cross(1)
    } else {
        DiskCrossing::Cross(-1)
    }
}

/// Geometry a solid triangle (or anything else) must keep away from.
#[derive(Debug, Clone, PartialEq)]
pub enum Obstacle {
    Segment(Segment),
    /// Spine plus tube; clearance is measured from the tube surface.
    Circle(Circle),
    Polyline { points: Vec<Point3>, closed: bool },
    /// Forbidden plane: the obstacle is the closed half-space below it.
    Plane(Plane),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Clearance {
    Clear,
    /// Index of the first obstacle closer than the clearance, and the
    /// achieved surface distance (negative below a plane).
    Blocked { obstacle: usize, distance: f64 },
}

impl Clearance {
    pub fn is_clear(&self) -> bool {
        matches!(self, Clearance::Clear)
    }
}

/// Checks that the closed solid triangle keeps at least `clearance` from
/// every obstacle; reports the first one that it does not.
pub fn triangle_clear(t: &Triangle, obstacles: &[Obstacle], clearance: f64) -> Result<Clearance, GeomError> {
    t.check()?;
    for (i, ob) in obstacles.iter().enumerate() {
        if let Some(d) = triangle_obstacle_shortfall(t, ob, clearance) {
            return Ok(Clearance::Blocked { obstacle: i, distance: d });
        }
    }
    Ok(Clearance::Clear)
}

/// `None` when the triangle clears `ob` by `clearance`, otherwise the
/// achieved distance.
pub(crate) fn triangle_obstacle_shortfall(t: &Triangle, ob: &Obstacle, clearance: f64) -> Option<f64> {
    match ob {
        Obstacle::Segment(s) => {
            let d = segment_triangle(s, t);
            (d < clearance).then_some(d)
        }
        Obstacle::Circle(c) => {
            let thr = clearance + c.tube_radius;
            if CircleScan::triangle(c, t).at_least(thr) {
                None
            } else {
                Some(triangle_circle(t, c) - c.tube_radius)
            }
        }
        Obstacle::Polyline { points, closed } => {
            let n = points.len();
            let m = if *closed { n } else { n.saturating_sub(1) };
            let mut worst: Option<f64> = None;
            for i in 0..m {
                let s = Segment::new_unchecked(points[i], points[(i + 1) % n]);
                let d = segment_triangle(&s, t);
                if d < clearance {
                    worst = Some(worst.map_or(d, |w: f64| w.min(d)));
                }
            }
            worst
        }
        Obstacle::Plane(pl) => {
            let h = t.vertices().iter().map(|&v| pl.signed_distance(v)).fold(f64::INFINITY, f64::min);
            (h < clearance).then_some(h)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pole_top_circle() -> Circle {
        Circle::wire(Point3::new(0.0, 0.0, 2.0), 1.0, Point3::Y).unwrap()
    }

    #[test]
    fn rotation_matches_right_hand_rule() {
        let r = Point3::X.rotated(Point3::Z, std::f64::consts::FRAC_PI_2);
        assert!(r.dist(Point3::Y) < 1e-15);
    }

    #[test]
    fn circle_frame_is_right_handed() {
        let c = pole_top_circle();
        let (u, v) = c.frame();
        assert!((u.cross(v) - c.normal).norm() < 1e-15);
        assert!(u.dot(c.normal).abs() < 1e-15);
    }

    #[test]
    fn rope_middle_crosses_pole_circle_disk_forward() {
        let s = Segment::new(Point3::new(0.0, -1.0, 2.0), Point3::new(0.0, 1.0, 2.0)).unwrap();
        let d = pole_top_circle().disk();
        assert_eq!(seg_disk_crossing(&s, &d, EPS), DiskCrossing::Cross(1));
        let rev = Segment::new(s.b, s.a).unwrap();
        assert_eq!(seg_disk_crossing(&rev, &d, EPS), DiskCrossing::Cross(-1));
    }

    #[test]
    fn segment_behind_the_hoop_plane_misses() {
        let s = Segment::new(Point3::new(0.0, -2.0, 2.0), Point3::new(0.3, -0.6, 2.0)).unwrap();
        assert_eq!(seg_disk_crossing(&s, &pole_top_circle().disk(), EPS), DiskCrossing::None);
    }

    #[test]
    fn boundary_crossing_is_degenerate() {
        let s = Segment::new(Point3::new(1.0, -1.0, 2.0), Point3::new(1.0, 1.0, 2.0)).unwrap();
        assert_eq!(seg_disk_crossing(&s, &pole_top_circle().disk(), EPS), DiskCrossing::Degenerate);
        let coplanar = Segment::new(Point3::new(-0.5, 0.0, 2.0), Point3::new(0.5, 0.0, 2.0)).unwrap();
        assert_eq!(seg_disk_crossing(&coplanar, &pole_top_circle().disk(), EPS), DiskCrossing::Degenerate);
    }

    #[test]
    fn vertex_on_plane_counts_once_along_a_polyline() {
        // Polyline through the disk plane exactly at a vertex inside the disk.
        let d = pole_top_circle().disk();
        let a = Point3::new(0.0, -1.0, 2.0);
        let m = Point3::new(0.1, 0.0, 2.1);
        let b = Point3::new(0.0, 1.0, 2.0);
        let s1 = seg_disk_crossing(&Segment::new(a, m).unwrap(), &d, EPS);
        let s2 = seg_disk_crossing(&Segment::new(m, b).unwrap(), &d, EPS);
        let total: i32 = [s1, s2]
            .iter()
            .map(|c| match c {
                DiskCrossing::Cross(s) => *s as i32,
                _ => 0,
            })
            .sum();
        assert_eq!(total, 1);
    }

    #[test]
    fn triangle_far_away_is_clear() {
        let t = Triangle::new(Point3::new(10.0, 10.0, 10.0), Point3::new(11.0, 10.0, 10.0), Point3::new(10.0, 11.0, 10.0))
            .unwrap();
        let obstacles = vec![
            Obstacle::Segment(Segment::new(Point3::ORIGIN, Point3::new(0.0, 0.0, 1.0)).unwrap()),
            Obstacle::Circle(pole_top_circle()),
        ];
        assert_eq!(triangle_clear(&t, &obstacles, 1e-3).unwrap(), Clearance::Clear);
    }

    #[test]
    fn triangle_touching_a_hoop_spine_is_blocked() {
        let hoop = Circle::new(Point3::ORIGIN, 1.0, Point3::Z, 0.05).unwrap();
        let t = Triangle::new(Point3::new(1.0, 0.0, 0.0), Point3::new(2.0, 0.0, 1.0), Point3::new(2.0, 1.0, 1.0)).unwrap();
        match triangle_clear(&t, &[Obstacle::Circle(hoop)], 1e-3).unwrap() {
            Clearance::Blocked { obstacle, distance } => {
                assert_eq!(obstacle, 0);
                assert!((distance + 0.05).abs() < 1e-9, "surface distance {distance}");
            }
            Clearance::Clear => panic!("touching triangle reported clear"),
        }
    }

    #[test]
    fn triangle_pierced_by_the_pole_is_blocked() {
        let pole = Segment::new(Point3::ORIGIN, Point3::new(0.0, 0.0, 1.0)).unwrap();
        let t = Triangle::new(Point3::new(-0.5, -0.5, 0.5), Point3::new(0.5, -0.5, 0.5), Point3::new(0.0, 0.5, 0.5)).unwrap();
        match triangle_clear(&t, &[Obstacle::Segment(pole)], 1e-3).unwrap() {
            Clearance::Blocked { obstacle: 0, distance } => assert!(distance.abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degenerate_triangle_is_an_error() {
        let t = Triangle { p: Point3::ORIGIN, q: Point3::X, r: Point3::X * 2.0 };
        assert_eq!(triangle_clear(&t, &[], 1e-3), Err(GeomError::DegenerateTriangle));
    }

    #[test]
    fn plane_obstacle_uses_signed_height() {
        let floor = Plane { point: Point3::ORIGIN, normal: Point3::Z };
        let t = Triangle::new(Point3::new(0.0, 0.0, 0.5), Point3::new(1.0, 0.0, 0.5), Point3::new(0.0, 1.0, -0.1)).unwrap();
        match triangle_clear(&t, &[Obstacle::Plane(floor)], 1e-3).unwrap() {
            Clearance::Blocked { distance, .. } => assert!((distance + 0.1).abs() < 1e-12),
            Clearance::Clear => panic!(),
        }
    }

    #[test]
    fn circle_min_height_over_tilted_circle() {
        let floor = Plane { point: Point3::ORIGIN, normal: Point3::Z };
        let c = Circle::wire(Point3::new(0.0, -0.5, 2.0), 1.5, Point3::Y).unwrap();
        assert!((floor.circle_min_height(&c) - 0.5).abs() < 1e-15);
        let flat = Circle::wire(Point3::new(0.0, 0.0, 2.0), 1.5, Point3::Z).unwrap();
        assert!((floor.circle_min_height(&flat) - 2.0).abs() < 1e-15);
    }
}
