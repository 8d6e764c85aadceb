//! Pointwise side selectors for a segment cutting a circle or the lollipop.
//!
//! Both are deterministic functions of the instantaneous configuration and
//! return the side in the segment's own oriented frame, so a label can be
//! compared step to step along a moving family of segments.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::SideLabel;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }

    pub fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }

    pub fn scale(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(self, o: Point2) -> f64 {
        self.sub(o).norm()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LemmaError {
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
}

fn pre(msg: &'static str) -> LemmaError {
    LemmaError::Precondition(msg)
}

fn side_of(a: Point2, b: Point2, p: Point2) -> f64 {
    b.sub(a).cross(p.sub(a))
}

fn point_segment_2d(p: Point2, a: Point2, b: Point2) -> f64 {
    let d = b.sub(a);
    let t = (p.sub(a).dot(d) / d.dot(d)).clamp(0.0, 1.0);
    p.dist(a.add(d.scale(t)))
}

/// Parameters along `a→b` where the segment's line meets a circle, sorted.
fn line_circle_params(a: Point2, b: Point2, center: Point2, radius: f64) -> Option<(f64, f64)> {
    let d = b.sub(a);
    let f = a.sub(center);
    let qa = d.dot(d);
    let qb = 2.0 * f.dot(d);
    let qc = f.dot(f) - radius * radius;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return None;
    }
    let s = disc.sqrt();
    Some(((-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)))
}

/// Side of a chord holding strictly less than half of the circle.
///
/// Requires `radius ≥ 1`, chord length at most 1, both endpoints strictly
/// outside the circle (beyond `eps`) and both line/circle intersection points
/// inside the segment. The short side is forced: a chord of length at most 1
/// is shorter than the diameter, so the short arc is the one away from the
/// centre.
pub fn select_minor_side(center: Point2, radius: f64, a: Point2, b: Point2, eps: f64) -> Result<SideLabel, LemmaError> {
    if !(radius >= 1.0) {
        return Err(pre("circle radius below 1"));
    }
    let len = a.dist(b);
    if len <= eps {
        return Err(pre("degenerate segment"));
    }
    if len > 1.0 + eps {
        return Err(pre("segment longer than 1"));
    }
    if (a.dist(center) - radius).abs() <= eps || (b.dist(center) - radius).abs() <= eps {
        return Err(pre("segment endpoint on the circle"));
    }
    let line_dist = side_of(a, b, center).abs() / len;
    if (line_dist - radius).abs() <= eps {
        return Err(pre("segment tangent to the circle"));
    }
    match line_circle_params(a, b, center, radius) {
        Some((t0, t1)) if line_dist < radius && t0 > 0.0 && t1 < 1.0 => {}
        _ => return Err(pre("segment does not cut the circle in two points")),
    }
    Ok(SideLabel::from_sign(side_of(a, b, center)).flip())
}

const POLE_TOP: Point2 = Point2::new(0.0, 1.0);
const POLE_BASE: Point2 = Point2::new(0.0, 0.0);
const LOLLIPOP_CENTER: Point2 = Point2::new(0.0, 2.0);

/// Side of a cutting segment on which the part of the lollipop (pole from
/// `(0,0)` to `(0,1)` topped by the unit circle centred at `(0,2)`) that is
/// separated from the base `(0,0)` lies.
///
/// * Cutting the pole: everything above the cut is free, so the side is the
///   one the pole continues into above the cut.
/// * Cutting only the circle (twice): the arc not containing the junction
///   `(0,1)` is free, and it lies across the line from the junction.
/// * No cut: the side away from the base, which must not lie on the
///   segment's line.
pub fn select_lollipop_side(a: Point2, b: Point2, eps: f64) -> Result<SideLabel, LemmaError> {
    let len = a.dist(b);
    if len <= eps {
        return Err(pre("degenerate segment"));
    }
    for end in [a, b] {
        let to_center = end.dist(LOLLIPOP_CENTER);
        if to_center <= 1.0 + eps {
            return Err(pre("segment endpoint touches or lies inside the circle"));
        }
        if point_segment_2d(end, POLE_BASE, POLE_TOP) <= eps {
            return Err(pre("segment endpoint touches the pole"));
        }
    }
    if point_segment_2d(POLE_BASE, a, b) <= eps {
        return Err(pre("segment passes through the base point"));
    }
    if point_segment_2d(POLE_TOP, a, b) <= eps {
        return Err(pre("segment passes through the pole/circle junction"));
    }
    let d = b.sub(a);

    // Pole crossing (the pole is x = 0, 0 ≤ y ≤ 1).
    let pole_dir = POLE_TOP.sub(POLE_BASE);
    let denom = d.cross(pole_dir);
    if denom.abs() <= eps * len {
        if a.x.abs() <= eps && b.x.abs() <= eps {
            let (lo, hi) = (a.y.min(b.y), a.y.max(b.y));
            if hi >= 0.0 && lo <= 1.0 {
                return Err(pre("segment overlaps the pole"));
            }
        }
    } else {
        let w = POLE_BASE.sub(a);
        let t = w.cross(pole_dir) / denom;
        let s = w.cross(d) / denom;
        if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&s) {
            return Ok(SideLabel::from_sign(d.cross(pole_dir)));
        }
    }

    // Tangency is judged by the line's distance from the centre, on both
    // sides of it, wherever the touching point lies on the segment.
    let line_dist = side_of(a, b, LOLLIPOP_CENTER).abs() / len;
    let foot = LOLLIPOP_CENTER.sub(a).dot(d) / (len * len);
    if (line_dist - 1.0).abs() <= eps && (0.0..=1.0).contains(&foot) {
        return Err(pre("segment tangent to the circle"));
    }
    if let Some((t0, t1)) = line_circle_params(a, b, LOLLIPOP_CENTER, 1.0) {
        if (0.0..=1.0).contains(&t0) || (0.0..=1.0).contains(&t1) {
            return Ok(SideLabel::from_sign(side_of(a, b, POLE_TOP)).flip());
        }
    }

    // No cut: the base must lie strictly on one side of the line, or
    // neither side is "the one without the base".
    let base = side_of(a, b, POLE_BASE);
    if base.abs() <= eps * len {
        return Err(pre("segment misses the lollipop but its line passes through the base point"));
    }
    Ok(SideLabel::from_sign(base).flip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom3::EPS;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    /// Counts sampled circle points on each side of the segment's line.
    fn arc_fraction_on_side(center: Point2, r: f64, a: Point2, b: Point2, side: SideLabel, n: usize) -> f64 {
        let hits = (0..n)
            .filter(|i| {
                let t = std::f64::consts::TAU * *i as f64 / n as f64;
                let q = p(center.x + r * t.cos(), center.y + r * t.sin());
                SideLabel::from_sign(side_of(a, b, q)) == side && side_of(a, b, q) != 0.0
            })
            .count();
        hits as f64 / n as f64
    }

    #[test]
    fn chord_on_a_circle_endpoint_is_rejected() {
        let h = 3f64.sqrt() / 2.0;
        let r = select_minor_side(p(0.0, 0.0), 1.0, p(-0.5, h), p(0.5, h), EPS);
        assert!(matches!(r, Err(LemmaError::Precondition(_))));
    }

    #[test]
    fn unit_chord_just_above_sixty_degrees() {
        // Unit-length segment slightly above the 60° chord: endpoints outside
        // the circle, cut arc a little under 60°.
        let y = 3f64.sqrt() / 2.0 + 0.01;
        let (a, b) = (p(-0.5, y), p(0.5, y));
        let side = select_minor_side(p(0.0, 0.0), 1.0, a, b, EPS).unwrap();
        assert_eq!(side, SideLabel::Plus);
        let frac = arc_fraction_on_side(p(0.0, 0.0), 1.0, a, b, side, 360_000);
        let expected = 2.0 * (1.0 - y * y).sqrt().asin() / std::f64::consts::TAU;
        assert!((frac - expected).abs() < 1e-4, "{frac} vs {expected}");
        assert!(frac < 1.0 / 6.0);
    }

    #[test]
    fn minor_side_excludes_center_for_reversed_chord() {
        let (a, b) = (p(0.48, 0.9), p(-0.48, 0.9));
        let side = select_minor_side(p(0.0, 0.0), 1.0, a, b, EPS).unwrap();
        assert_eq!(side, SideLabel::Minus);
        assert!(side_of(a, b, p(0.0, 0.0)) > 0.0);
    }

    #[test]
    fn minor_side_preconditions() {
        let c = p(0.0, 0.0);
        assert!(select_minor_side(c, 0.9, p(-0.4, 0.85), p(0.4, 0.85), EPS).is_err());
        assert!(select_minor_side(c, 1.0, p(-0.6, 0.9), p(0.6, 0.9), EPS).is_err());
        assert!(select_minor_side(c, 1.0, p(-0.4, 1.0), p(0.4, 1.0), EPS).is_err());
        assert!(select_minor_side(c, 1.0, p(0.5, 0.9), p(1.4, 0.9), EPS).is_err());
    }

    #[test]
    fn rotating_chord_keeps_its_label() {
        let y = 0.95;
        let half = 0.45;
        let mut labels = Vec::new();
        for k in 0..360 {
            let t = std::f64::consts::TAU * k as f64 / 360.0;
            let (s, c) = t.sin_cos();
            let rot = |q: Point2| p(q.x * c - q.y * s, q.x * s + q.y * c);
            let side = select_minor_side(p(0.0, 0.0), 1.0, rot(p(-half, y)), rot(p(half, y)), EPS).unwrap();
            labels.push(side);
        }
        assert!(labels.iter().all(|l| *l == labels[0]));
    }

    #[test]
    fn lollipop_pole_cut_selects_upper_side() {
        assert_eq!(select_lollipop_side(p(-0.5, 0.5), p(0.5, 0.5), EPS).unwrap(), SideLabel::Plus);
        assert_eq!(select_lollipop_side(p(0.5, 0.5), p(-0.5, 0.5), EPS).unwrap(), SideLabel::Minus);
    }

    #[test]
    fn lollipop_circle_cut_selects_upper_arc() {
        assert_eq!(select_lollipop_side(p(-2.0, 2.0), p(2.0, 2.0), EPS).unwrap(), SideLabel::Plus);
    }

    #[test]
    fn lollipop_no_cut_selects_side_away_from_base() {
        assert_eq!(select_lollipop_side(p(-1.0, -5.0), p(1.0, -5.0), EPS).unwrap(), SideLabel::Minus);
    }

    #[test]
    fn lollipop_preconditions() {
        assert!(select_lollipop_side(p(-1.0, 0.0), p(1.0, 0.0), EPS).is_err());
        assert!(select_lollipop_side(p(-1.0, 1.0), p(1.0, 1.0), EPS).is_err());
        assert!(select_lollipop_side(p(0.0, 2.0), p(3.0, 2.0), EPS).is_err());
        assert!(select_lollipop_side(p(0.0, 0.5), p(1.0, 0.5), EPS).is_err());
        assert!(select_lollipop_side(p(-2.0, 3.0), p(2.0, 3.0), EPS).is_err());
        // Far away, but aimed at the base: no side is free of it.
        assert!(select_lollipop_side(p(2.0, -1.0), p(4.0, -2.0), EPS).is_err());
    }
}
