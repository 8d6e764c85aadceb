use super::{Circle, Disk, GeomError, Point3, Segment, Triangle};

/// Shapes accepted by [`distance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Point(Point3),
    Segment(Segment),
    Triangle(Triangle),
    Circle(Circle),
}

impl Shape {
    fn check(&self) -> Result<(), GeomError> {
        match self {
            Shape::Point(p) => p.is_finite().then_some(()).ok_or(GeomError::NonFinite),
            Shape::Segment(s) => s.check(),
            Shape::Triangle(t) => t.check(),
            Shape::Circle(c) => c.check(),
        }
    }
}

/// Euclidean distance between two shapes. Circles are their spine curves.
pub fn distance(a: &Shape, b: &Shape) -> Result<f64, GeomError> {
    a.check()?;
    b.check()?;
    use Shape::*;
    Ok(match (a, b) {
        (Point(p), Point(q)) => p.dist(*q),
        (Point(p), Segment(s)) | (Segment(s), Point(p)) => point_segment(*p, s),
        (Point(p), Triangle(t)) | (Triangle(t), Point(p)) => point_triangle(*p, t),
        (Point(p), Circle(c)) | (Circle(c), Point(p)) => point_circle(*p, c),
        (Segment(s), Segment(u)) => segment_segment(s, u),
        (Segment(s), Triangle(t)) | (Triangle(t), Segment(s)) => segment_triangle(s, t),
        (Segment(s), Circle(c)) | (Circle(c), Segment(s)) => segment_circle(s, c),
        (Triangle(t), Triangle(u)) => triangle_triangle(t, u),
        (Triangle(t), Circle(c)) | (Circle(c), Triangle(t)) => triangle_circle(t, c),
        (Circle(c), Circle(d)) => circle_circle(c, d),
    })
}

pub fn point_segment(p: Point3, s: &Segment) -> f64 {
    let d = s.dir();
    let len2 = d.norm2();
    if len2 == 0.0 {
        return p.dist(s.a);
    }
    let t = ((p - s.a).dot(d) / len2).clamp(0.0, 1.0);
    p.dist(s.at(t))
}

/// Parameters `(s, t)` of the closest pair between two segments.
fn closest_params(s1: &Segment, s2: &Segment) -> (f64, f64) {
    let d1 = s1.dir();
    let d2 = s2.dir();
    let r = s1.a - s2.a;
    let a = d1.norm2();
    let e = d2.norm2();
    let f = d2.dot(r);
    let tiny = 1e-300;
    if a <= tiny && e <= tiny {
        return (0.0, 0.0);
    }
    if a <= tiny {
        return (0.0, (f / e).clamp(0.0, 1.0));
    }
    let c = d1.dot(r);
    if e <= tiny {
        return ((-c / a).clamp(0.0, 1.0), 0.0);
    }
    let b = d1.dot(d2);
    let denom = a * e - b * b;
    let mut s = if denom > 1e-14 * a * e { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
    let mut t = (b * s + f) / e;
    if t < 0.0 {
        t = 0.0;
        s = (-c / a).clamp(0.0, 1.0);
    } else if t > 1.0 {
        t = 1.0;
        s = ((b - c) / a).clamp(0.0, 1.0);
    }
    (s, t)
}

pub fn segment_segment(s1: &Segment, s2: &Segment) -> f64 {
    let (s, t) = closest_params(s1, s2);
    let d = s1.at(s).dist(s2.at(t));
    // The clamped alternation can miss the true pair for nearly parallel
    // segments; endpoint projections bound it from above.
    d.min(point_segment(s1.a, s2))
        .min(point_segment(s1.b, s2))
        .min(point_segment(s2.a, s1))
        .min(point_segment(s2.b, s1))
}

/// Closest point on a triangle (Voronoi-region walk).
fn closest_on_triangle(p: Point3, t: &Triangle) -> Point3 {
    let (a, b, c) = (t.p, t.q, t.r);
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(ap);
    let d2 = ac.dot(ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return a;
    }
    let bp = p - b;
    let d3 = ab.dot(bp);
    let d4 = ac.dot(bp);
    if d3 >= 0.0 && d4 <= d3 {
        return b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return a + ab * v;
    }
    let cp = p - c;
    let d5 = ab.dot(cp);
    let d6 = ac.dot(cp);
    if d6 >= 0.0 && d5 <= d6 {
        return c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return a + ac * w;
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return b + (c - b) * w;
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    a + ab * v + ac * w
}

pub fn point_triangle(p: Point3, t: &Triangle) -> f64 {
    p.dist(closest_on_triangle(p, t))
}

pub fn segment_triangle(s: &Segment, t: &Triangle) -> f64 {
    let n = (t.q - t.p).cross(t.r - t.p);
    let h0 = n.dot(s.a - t.p);
    let h1 = n.dot(s.b - t.p);
    if (h0 < 0.0 && h1 > 0.0) || (h0 > 0.0 && h1 < 0.0) {
        let x = s.at(h0 / (h0 - h1));
        let scale = 1.0 + s.a.norm().max(t.p.norm());
        if point_triangle(x, t) <= 1e-14 * scale {
            return 0.0;
        }
    }
    let mut d = point_triangle(s.a, t).min(point_triangle(s.b, t));
    for e in t.edges() {
        d = d.min(segment_segment(s, &e));
    }
    d
}

pub fn triangle_triangle(t: &Triangle, u: &Triangle) -> f64 {
    let mut d = f64::INFINITY;
    for e in t.edges() {
        d = d.min(segment_triangle(&e, u));
    }
    for e in u.edges() {
        d = d.min(segment_triangle(&e, t));
    }
    d
}

/// Exact distance from a point to a circle's spine.
pub fn point_circle(p: Point3, c: &Circle) -> f64 {
    let d = p - c.center;
    let h = d.dot(c.normal);
    let radial = (d - c.normal * h).norm();
    ((radial - c.radius).powi(2) + h * h).sqrt()
}

/// Exact distance from a point to the flat disk spanned by a circle.
pub fn point_disk(p: Point3, d: &Disk) -> f64 {
    let c = &d.circle;
    let v = p - c.center;
    let h = v.dot(c.normal);
    let radial = (v - c.normal * h).norm();
    if radial <= c.radius {
        h.abs()
    } else {
        ((radial - c.radius).powi(2) + h * h).sqrt()
    }
}

pub fn segment_circle(s: &Segment, c: &Circle) -> f64 {
    CircleScan::segment(c, s).min_distance()
}

pub fn triangle_circle(t: &Triangle, c: &Circle) -> f64 {
    CircleScan::triangle(c, t).min_distance()
}

pub fn circle_circle(c: &Circle, d: &Circle) -> f64 {
    CircleScan::circle(c, d).min_distance()
}

pub fn segment_disk(s: &Segment, d: &Disk) -> f64 {
    let c = &d.circle;
    let h0 = (s.a - c.center).dot(c.normal);
    let h1 = (s.b - c.center).dot(c.normal);
    if (h0 < 0.0 && h1 > 0.0) || (h0 > 0.0 && h1 < 0.0) {
        let v = s.at(h0 / (h0 - h1)) - c.center;
        if (v - c.normal * v.dot(c.normal)).norm() <= c.radius {
            return 0.0;
        }
    }
    point_disk(s.a, d).min(point_disk(s.b, d)).min(segment_circle(s, c))
}

/// Distance between two flat disks. If they meet, some boundary point of
/// one lies on the other, and otherwise a closest pair has a boundary point.
pub fn disk_disk(a: &Disk, b: &Disk) -> f64 {
    CircleScan::disk(&a.circle, b).min_distance().min(CircleScan::disk(&b.circle, a).min_distance())
}

enum Target<'a> {
    Segment(&'a Segment),
    Triangle(&'a Triangle),
    Circle(&'a Circle),
    Disk(&'a Disk),
}

/// Minimization of `θ ↦ dist(spine(θ), target)` over a circle's spine.
///
/// The function is Lipschitz with constant `radius` in `θ`, which lets
/// [`CircleScan::at_least`] certify clearance decisions by interval
/// bisection. [`CircleScan::min_distance`] samples and polishes local minima.
pub struct CircleScan<'a> {
    circle: &'a Circle,
    target: Target<'a>,
    frame: (Point3, Point3),
}

const SCAN_SAMPLES: usize = 96;
const SCAN_EVAL_CAP: usize = 200_000;

impl<'a> CircleScan<'a> {
    fn with(circle: &'a Circle, target: Target<'a>) -> Self {
        CircleScan { circle, target, frame: circle.frame() }
    }

    pub fn segment(circle: &'a Circle, s: &'a Segment) -> Self {
        Self::with(circle, Target::Segment(s))
    }

    pub fn triangle(circle: &'a Circle, t: &'a Triangle) -> Self {
        Self::with(circle, Target::Triangle(t))
    }

    pub fn circle(circle: &'a Circle, other: &'a Circle) -> Self {
        Self::with(circle, Target::Circle(other))
    }

    pub fn disk(circle: &'a Circle, d: &'a Disk) -> Self {
        Self::with(circle, Target::Disk(d))
    }

    fn point(&self, theta: f64) -> Point3 {
        let (u, v) = self.frame;
        let (s, c) = theta.sin_cos();
        self.circle.center + (u * c + v * s) * self.circle.radius
    }

    fn eval(&self, theta: f64) -> f64 {
        let p = self.point(theta);
        match self.target {
            Target::Segment(s) => point_segment(p, s),
            Target::Triangle(t) => point_triangle(p, t),
            Target::Circle(c) => point_circle(p, c),
            Target::Disk(d) => point_disk(p, d),
        }
    }

    /// Cheap lower bound on the minimum from bounding spheres and the slab
    /// around the circle's plane.
    fn quick_lower_bound(&self) -> f64 {
        let c = self.circle;
        let r = c.radius;
        let height = |p: Point3| (p - c.center).dot(c.normal);
        let slab = |hs: &[f64]| {
            let lo = hs.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = hs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if lo > 0.0 {
                lo
            } else if hi < 0.0 {
                -hi
            } else {
                0.0
            }
        };
        match self.target {
            Target::Segment(s) => {
                let near = point_segment(c.center, s);
                let far = c.center.dist(s.a).max(c.center.dist(s.b));
                (near - r).max(r - far).max(slab(&[height(s.a), height(s.b)]))
            }
            Target::Triangle(t) => {
                let near = point_triangle(c.center, t);
                let far = t.vertices().iter().map(|v| c.center.dist(*v)).fold(0.0, f64::max);
                (near - r).max(r - far).max(slab(&[height(t.p), height(t.q), height(t.r)]))
            }
            Target::Circle(o) | Target::Disk(Disk { circle: o }) => {
                let gap = c.center.dist(o.center) - r - o.radius;
                let tilt = (c.normal - o.normal * c.normal.dot(o.normal)).norm();
                let h = height(o.center);
                let slab = if h.abs() > o.radius * tilt { h.abs() - o.radius * tilt } else { 0.0 };
                gap.max(slab)
            }
        }
    }

    /// True when the spine provably keeps at least `thr` from the target.
    /// Undecidable cases (minimum within ~1e-12 of `thr`) answer `false`.
    pub fn at_least(&self, thr: f64) -> bool {
        if self.quick_lower_bound() >= thr {
            return true;
        }
        let lip = self.circle.radius;
        let h = std::f64::consts::TAU / SCAN_SAMPLES as f64;
        let mut vals = Vec::with_capacity(SCAN_SAMPLES + 1);
        for i in 0..=SCAN_SAMPLES {
            let g = if i == SCAN_SAMPLES { vals[0] } else { self.eval(i as f64 * h) };
            if g < thr {
                return false;
            }
            vals.push(g);
        }
        let mut stack: Vec<(f64, f64, f64, f64)> =
            (0..SCAN_SAMPLES).map(|i| (i as f64 * h, (i + 1) as f64 * h, vals[i], vals[i + 1])).collect();
        let mut evals = 0usize;
        while let Some((a, b, ga, gb)) = stack.pop() {
            let lb = 0.5 * (ga + gb - lip * (b - a));
            if lb >= thr {
                continue;
            }
            if b - a < 1e-12 || evals > SCAN_EVAL_CAP {
                return false;
            }
            let m = 0.5 * (a + b);
            let gm = self.eval(m);
            evals += 1;
            if gm < thr {
                return false;
            }
            stack.push((a, m, ga, gm));
            stack.push((m, b, gm, gb));
        }
        true
    }

    /// Minimum distance: dense samples, then golden-section polish around
    /// the best few discrete local minima.
    pub fn min_distance(&self) -> f64 {
        const N: usize = 256;
        let h = std::f64::consts::TAU / N as f64;
        let vals: Vec<f64> = (0..N).map(|i| self.eval(i as f64 * h)).collect();
        let mut minima: Vec<usize> = (0..N)
            .filter(|&i| {
                let prev = vals[(i + N - 1) % N];
                let next = vals[(i + 1) % N];
                vals[i] <= prev && vals[i] <= next
            })
            .collect();
        minima.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        minima.truncate(4);
        let mut best = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        for i in minima {
            let centre = i as f64 * h;
            best = best.min(self.golden(centre - h, centre + h));
        }
        best
    }

    fn golden(&self, mut a: f64, mut b: f64) -> f64 {
        const INV_PHI: f64 = 0.618_033_988_749_894_9;
        let mut x1 = b - INV_PHI * (b - a);
        let mut x2 = a + INV_PHI * (b - a);
        let mut f1 = self.eval(x1);
        let mut f2 = self.eval(x2);
        for _ in 0..90 {
            if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - INV_PHI * (b - a);
                f1 = self.eval(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + INV_PHI * (b - a);
                f2 = self.eval(x2);
            }
            if b - a < 1e-15 {
                break;
            }
        }
        f1.min(f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64, z: f64) -> Point3 {
        Point3::new(x, y, z)
    }

    fn seg(a: Point3, b: Point3) -> Segment {
        Segment::new(a, b).unwrap()
    }

    fn pole_top_circle() -> Circle {
        Circle::wire(p(0.0, 0.0, 2.0), 1.0, Point3::Y).unwrap()
    }

    /// Brute-force oracle: minimum over densely sampled points of both shapes.
    fn sampled_segment_circle(s: &Segment, c: &Circle, n: usize) -> f64 {
        let circle_pts = c.polygon(n);
        (0..=n)
            .map(|i| s.at(i as f64 / n as f64))
            .flat_map(|q| circle_pts.iter().map(move |cp| q.dist(*cp)))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn point_on_pole_endpoint_has_zero_distance() {
        let d = distance(&Shape::Point(Point3::ORIGIN), &Shape::Segment(seg(Point3::ORIGIN, p(0.0, 0.0, 1.0)))).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn circle_center_is_one_radius_from_spine() {
        let d = distance(&Shape::Circle(pole_top_circle()), &Shape::Point(p(0.0, 0.0, 2.0))).unwrap();
        assert_eq!(d, 1.0);
    }

    #[test]
    fn rope_middle_segment_is_one_from_pole_circle() {
        let s = seg(p(0.0, -1.0, 2.0), p(0.0, 1.0, 2.0));
        let c = pole_top_circle();
        let oracle = sampled_segment_circle(&s, &c, 2000);
        assert!((oracle - 1.0).abs() < 1e-9);
        let d = distance(&Shape::Segment(s), &Shape::Circle(c)).unwrap();
        assert!((d - 1.0).abs() < 1e-12, "{d}");
    }

    #[test]
    fn skew_segment_circle_matches_sampling() {
        let c = Circle::wire(p(0.3, -0.2, 1.0), 1.3, Point3::new(1.0, 2.0, 0.5).normalized().unwrap()).unwrap();
        let s = seg(p(-2.0, 0.4, 0.1), p(1.5, 1.1, 2.2));
        let oracle = sampled_segment_circle(&s, &c, 4000);
        let d = segment_circle(&s, &c);
        assert!(d <= oracle + 1e-9);
        assert!(oracle - d < 2e-3, "sampled {oracle} vs {d}");
    }

    #[test]
    fn degenerate_shapes_are_rejected() {
        let bad = Shape::Segment(Segment::new_unchecked(Point3::ORIGIN, Point3::ORIGIN));
        assert!(matches!(distance(&bad, &Shape::Point(Point3::X)), Err(GeomError::DegenerateSegment(..))));
        let flat = Shape::Triangle(Triangle { p: Point3::ORIGIN, q: Point3::X, r: Point3::X * 3.0 });
        assert_eq!(distance(&flat, &Shape::Point(Point3::Y)), Err(GeomError::DegenerateTriangle));
    }

    #[test]
    fn segment_through_triangle_is_zero() {
        let t = Triangle::new(p(-1.0, -1.0, 0.0), p(1.0, -1.0, 0.0), p(0.0, 1.0, 0.0)).unwrap();
        let s = seg(p(0.0, 0.0, -1.0), p(0.1, 0.0, 1.0));
        assert_eq!(segment_triangle(&s, &t), 0.0);
        let off = seg(p(5.0, 0.0, -1.0), p(5.0, 0.0, 1.0));
        assert!((segment_triangle(&off, &t) - point_segment(p(5.0, 0.0, 0.0), &seg(p(1.0, -1.0, 0.0), p(0.0, 1.0, 0.0)))).abs() < 1e-12);
    }

    #[test]
    fn parallel_segments() {
        let a = seg(p(0.0, 0.0, 0.0), p(1.0, 0.0, 0.0));
        let b = seg(p(0.5, 0.3, 0.0), p(2.0, 0.3, 0.0));
        assert!((segment_segment(&a, &b) - 0.3).abs() < 1e-15);
        let c = seg(p(2.0, 0.4, 0.0), p(3.0, 0.4, 0.0));
        assert!((segment_segment(&a, &c) - (1.0f64 + 0.16).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn linked_circles_have_positive_distance_and_touching_ones_zero() {
        let a = Circle::wire(Point3::ORIGIN, 1.0, Point3::Z).unwrap();
        let b = Circle::wire(p(1.0, 0.0, 0.0), 1.0, Point3::Y).unwrap();
        // Each circle passes through the other's centre: every point of one
        // is exactly one unit from the other.
        let d = circle_circle(&a, &b);
        assert!((d - 1.0).abs() < 1e-12, "{d}");
        assert!((d - circle_circle(&b, &a)).abs() < 1e-9);
        let touching = Circle::wire(p(2.0, 0.0, 0.0), 1.0, Point3::Z).unwrap();
        assert!(circle_circle(&a, &touching) < 1e-9);
    }

    #[test]
    fn at_least_agrees_with_min_distance() {
        let c = pole_top_circle();
        let s = seg(p(0.0, -1.0, 2.0), p(0.0, 1.0, 2.0));
        assert!(CircleScan::segment(&c, &s).at_least(0.999));
        assert!(!CircleScan::segment(&c, &s).at_least(1.001));
        let near = seg(p(1.0005, -1.0, 2.0), p(1.0005, 1.0, 2.0));
        assert!(!CircleScan::segment(&c, &near).at_least(1e-3));
        assert!(CircleScan::segment(&c, &near).at_least(4e-4));
    }

    #[test]
    fn disks_meeting_in_a_chord_have_zero_distance() {
        let a = Circle::wire(Point3::ORIGIN, 1.0, Point3::Z).unwrap().disk();
        let b = Circle::wire(p(0.5, 0.0, 0.0), 1.0, Point3::X).unwrap().disk();
        assert!(disk_disk(&a, &b) < 1e-9);
        let far = Circle::wire(p(0.0, 0.0, 3.0), 1.0, Point3::Z).unwrap().disk();
        assert!((disk_disk(&a, &far) - 3.0).abs() < 1e-9);
    }

    #[test]
    fn segment_disk_distance_cases() {
        let d = pole_top_circle().disk();
        assert_eq!(segment_disk(&seg(p(0.0, -1.0, 2.0), p(0.0, 1.0, 2.0)), &d), 0.0);
        let above = seg(p(-0.2, 0.4, 2.0), p(0.2, 0.4, 2.1));
        assert!((segment_disk(&above, &d) - 0.4).abs() < 1e-12);
    }
}
