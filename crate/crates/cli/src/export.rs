//! Static pictures of a scene: an SVG knot-diagram drawing and an OBJ
//! model.

use std::fmt::Write;

use untangle::geom3::{Point2, Point3};
use untangle::invariants::{project_diagram, scene_drawing_curves, Diagram, Direction, InvariantError, ProjectionOptions};
use untangle::scenes::Scene;

/// Circle resolution for pictures.
const SIDES: usize = 96;
/// Visual radius of a rope in meshes; ropes themselves are thin.
const ROPE_RADIUS: f64 = 0.02;
const TUBE_SIDES: usize = 8;
/// Default viewing direction for drawings: an oblique view from the front
/// left, generic for the canonical scenes.
pub const VIEW: Point3 = Point3 { x: 0.35, y: -1.0, z: 0.25 };
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

pub fn scene_projection(s: &Scene, direction: Direction) -> Result<Diagram, InvariantError> {
    project_diagram(&scene_drawing_curves(s, SIDES), direction, &ProjectionOptions::default())
}

/// Stroke width of a curve, wider for tubes.
fn stroke(s: &Scene, id: &str, scale: f64) -> f64 {
    let tube = s.piece(id).and_then(|p| p.geometry.circle).map_or(0.0, |c| c.tube_radius);
    (scale * 0.004).max(2.0 * tube)
}

/// Maximal runs of a projected polyline that avoid `gap` on either side of
/// the arc-length positions `cuts`.
fn visible_runs(pts: &[Point2], closed: bool, cuts: &[f64], gap: f64) -> Vec<Vec<Point2>> {
    let mut pts = pts.to_vec();
    if closed {
        pts.push(pts[0]);
    }
    let mut s = vec![0.0];
    for w in pts.windows(2) {
        s.push(s.last().unwrap() + w[0].dist(w[1]));
    }
    let total = *s.last().unwrap();
    let mut hidden: Vec<(f64, f64)> = Vec::new();
    for &c in cuts {
        let (a, b) = (c - gap, c + gap);
        if closed && a < 0.0 {
            hidden.push((a + total, total));
        }
        if closed && b > total {
            hidden.push((0.0, b - total));
        }
        hidden.push((a.max(0.0), b.min(total)));
    }
    hidden.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut visible = Vec::new();
    let mut at = 0.0;
    for (a, b) in hidden {
        if a > at {
            visible.push((at, a));
        }
        at = f64::max(at, b);
    }
    if at < total {
        visible.push((at, total));
    }
    let point_at = |x: f64| {
        let i = s.partition_point(|&v| v <= x).clamp(1, pts.len() - 1);
        let len = s[i] - s[i - 1];
        let t = if len > 0.0 { (x - s[i - 1]) / len } else { 0.0 };
        pts[i - 1].add(pts[i].sub(pts[i - 1]).scale(t))
    };
    let mut runs: Vec<Vec<Point2>> = visible
        .iter()
        .map(|&(a, b)| {
            let mut run = vec![point_at(a)];
            run.extend(s.iter().zip(&pts).filter(|(v, _)| **v > a && **v < b).map(|(_, p)| *p));
            run.push(point_at(b));
            run
        })
        .collect();
    // On a closed curve the last and first runs meet at the seam.
    if closed && runs.len() > 1 && visible[0].0 == 0.0 && visible.last().unwrap().1 == total {
        let first = runs.remove(0);
        runs.last_mut().unwrap().extend(first.into_iter().skip(1));
    }
    runs
}

/// SVG drawing of the scene along `direction`, under-strands broken at
/// every crossing.
pub fn svg(s: &Scene, direction: Direction) -> Result<String, InvariantError> {
    let d = scene_projection(s, direction)?;
    let src = d.source.as_ref().expect("projected diagram keeps its source");
    // Turn the picture so that the world's vertical points up when it can.
    let (e1, e2) = src.frame();
    let up = Point2::new(Point3::Z.dot(e1), Point3::Z.dot(e2));
    let (cos, sin) = if up.norm() > 1e-6 { (up.y / up.norm(), up.x / up.norm()) } else { (1.0, 0.0) };
    let turn = |p: Point2| Point2::new(cos * p.x - sin * p.y, sin * p.x + cos * p.y);
    let flat: Vec<Vec<Point2>> =
        src.curves.iter().map(|c| c.points.iter().map(|p| turn(src.project(*p))).collect()).collect();
    let (mut lo, mut hi) = (Point2::new(f64::INFINITY, f64::INFINITY), Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in flat.iter().flatten() {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let scale = hi.dist(lo).max(1e-6);
    let margin = 0.05 * scale;
    let gap = 0.015 * scale;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.4} {:.4} {:.4} {:.4}">"#,
        lo.x - margin,
        -hi.y - margin,
        hi.x - lo.x + 2.0 * margin,
        hi.y - lo.y + 2.0 * margin
    );
    for (ci, (c, pts)) in src.curves.iter().zip(&flat).enumerate() {
        let cum = arc_lengths(pts);
        let cuts: Vec<f64> = src
            .sites
            .iter()
            .filter(|site| site.under.0 == ci)
            .map(|site| {
                let (e, t) = (site.under.1, site.under.2);
                cum[e] + t * (cum[e + 1] - cum[e])
            })
            .collect();
        let owner = c.id.split(':').next().unwrap_or(&c.id);
        let _ = writeln!(
            out,
            r#"<g id="{}" fill="none" stroke="{}" stroke-width="{:.4}" stroke-linecap="round">"#,
            c.id,
            PALETTE[ci % PALETTE.len()],
            stroke(s, owner, scale)
        );
        for run in visible_runs(pts, c.closed, &cuts, gap) {
            let mut path = String::new();
            for (k, p) in run.iter().enumerate() {
                let _ = write!(path, "{}{:.4},{:.4}", if k == 0 { "M" } else { " L" }, p.x, -p.y);
            }
            let _ = writeln!(out, r#"<path d="{path}"/>"#);
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Cumulative length at each vertex, with the closing edge's end appended
/// for closed curves.
fn arc_lengths(pts: &[Point2]) -> Vec<f64> {
    let mut cum = vec![0.0];
    for k in 0..pts.len() {
        let next = pts[(k + 1) % pts.len()];
        cum.push(cum[k] + pts[k].dist(next));
    }
    cum
}

struct Obj {
    text: String,
    vertices: usize,
}

impl Obj {
    fn vertex(&mut self, p: Point3) -> usize {
        let _ = writeln!(self.text, "v {:.6} {:.6} {:.6}", p.x, p.y, p.z);
        self.vertices += 1;
        self.vertices
    }

    fn polyline(&mut self, pts: &[Point3], closed: bool) {
        let first = self.vertices + 1;
        for p in pts {
            self.vertex(*p);
        }
        let mut ids: Vec<usize> = (first..first + pts.len()).collect();
        if closed {
            ids.push(first);
        }
        let line: Vec<String> = ids.iter().map(usize::to_string).collect();
        let _ = writeln!(self.text, "l {}", line.join(" "));
    }

    /// A tube of `radius` around the polyline, framed by parallel transport.
    fn tube(&mut self, pts: &[Point3], closed: bool, radius: f64) {
        let n = pts.len();
        let tangent = |i: usize| {
            let (a, b) = match (closed, i) {
                (true, _) => (pts[(i + n - 1) % n], pts[(i + 1) % n]),
                (false, 0) => (pts[0], pts[1]),
                (false, i) if i == n - 1 => (pts[n - 2], pts[n - 1]),
                (false, i) => (pts[i - 1], pts[i + 1]),
            };
            (b - a).normalized().unwrap_or(Point3::Z)
        };
        let mut normal = tangent(0).any_orthonormal();
        let first = self.vertices + 1;
        for (i, p) in pts.iter().enumerate() {
            let t = tangent(i);
            normal = (normal - t * normal.dot(t)).normalized().unwrap_or_else(|| t.any_orthonormal());
            let binormal = t.cross(normal);
            for k in 0..TUBE_SIDES {
                let a = std::f64::consts::TAU * k as f64 / TUBE_SIDES as f64;
                self.vertex(*p + (normal * a.cos() + binormal * a.sin()) * radius);
            }
        }
        let rings = if closed { n } else { n - 1 };
        for i in 0..rings {
            let (r0, r1) = (first + i * TUBE_SIDES, first + ((i + 1) % n) * TUBE_SIDES);
            for k in 0..TUBE_SIDES {
                let k1 = (k + 1) % TUBE_SIDES;
                let _ = writeln!(self.text, "f {} {} {} {}", r0 + k, r0 + k1, r1 + k1, r1 + k);
            }
        }
    }
}

/// Wavefront OBJ: one group per rope and piece. Ropes and tubed hoops are
/// tube meshes; wire circles and poles are polylines.
pub fn obj(s: &Scene) -> String {
    let mut o = Obj { text: String::new(), vertices: 0 };
    for r in &s.ropes {
        let _ = writeln!(o.text, "g {}", r.id);
        o.tube(&r.vertices, r.closed, ROPE_RADIUS);
    }
    for p in &s.pieces {
        let _ = writeln!(o.text, "g {}", p.id);
        if let Some(seg) = p.geometry.segment {
            o.polyline(&[seg.a, seg.b], false);
        }
        if let Some(c) = p.geometry.circle {
            let pts = c.polygon(SIDES);
            if c.tube_radius > 0.0 {
                o.tube(&pts, true, c.tube_radius);
            } else {
                o.polyline(&pts, true);
            }
        }
    }
    o.text
}
