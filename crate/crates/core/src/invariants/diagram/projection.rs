use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom3::{segment_segment, CircleScan, Point2, Point3, Segment, EPS};
use crate::scenes::legality::near_pairs;
use crate::scenes::Scene;

use super::{Arc, Crossing, Diagram, DIAGRAM_FORMAT_VERSION};
use crate::invariants::InvariantError;

/// An oriented polygon in space; closed curves repeat no vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve3 {
    pub id: String,
    pub closed: bool,
    pub points: Vec<Point3>,
}

impl Curve3 {
    pub fn edge_count(&self) -> usize {
        match (self.closed, self.points.len()) {
            (_, 0 | 1) => 0,
            (true, n) => n,
            (false, n) => n - 1,
        }
    }

    pub fn edge(&self, i: usize) -> Segment {
        let n = self.points.len();
        Segment::new_unchecked(self.points[i], self.points[(i + 1) % n])
    }

    /// Edges `i` and `j` share a vertex.
    fn adjacent(&self, i: usize, j: usize) -> bool {
        let m = self.edge_count();
        i == j || (i + 1) % self.points.len() == j || (j + 1) % self.points.len() == i || (self.closed && m == 2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Direction {
    Fixed(Point3),
    /// Draw directions from a seeded generator until one is generic.
    Auto { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionOptions {
    /// Projected features closer than this are treated as coincident.
    pub tolerance: f64,
    /// Crossings whose strands meet at a smaller sine are near-tangent.
    pub min_sine: f64,
    /// Curves closer than this in space cannot be projected.
    pub min_curve_distance: f64,
    pub max_retries: usize,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        ProjectionOptions { tolerance: 1e-7, min_sine: 1e-6, min_curve_distance: 5e-4, max_retries: 100 }
    }
}

/// A crossing located on the source polygons: curve, edge and parameter of
/// the over and under strands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingSite {
    pub position: Point2,
    pub over: (usize, usize, f64),
    pub under: (usize, usize, f64),
}

/// The 3D data a diagram was projected from.
#[derive(Debug, Clone, PartialEq)]
pub struct Projected {
    pub direction: Point3,
    pub options: ProjectionOptions,
    pub curves: Vec<Curve3>,
    /// One entry per diagram crossing, same order.
    pub sites: Vec<CrossingSite>,
}

impl Projected {
    /// Orthonormal frame of the picture plane; the viewer sits at `+direction`.
    pub fn frame(&self) -> (Point3, Point3) {
        frame(self.direction)
    }

    pub fn project(&self, p: Point3) -> Point2 {
        let (e1, e2) = self.frame();
        Point2::new(p.dot(e1), p.dot(e2))
    }
}

fn frame(u: Point3) -> (Point3, Point3) {
    let e1 = u.any_orthonormal();
    (e1, u.cross(e1))
}

/// Why a direction is not generic.
struct NotGeneric(String);

/// Orthogonal projection of polygons along `direction`.
///
/// Open polygons are accepted for drawing; their arcs end at the curve's
/// ends, and combinatorial invariants reject such diagrams.
///
/// Crossings are transverse intersections of projected edges; the strand
/// nearer the viewer (larger `p·direction`) is over. The crossing sign is
/// the sign of `over × under` in the picture plane.
pub fn project_diagram(curves: &[Curve3], direction: Direction, opts: &ProjectionOptions) -> Result<Diagram, InvariantError> {
    check_curves(curves, opts)?;
    match direction {
        Direction::Fixed(u) => {
            let u = u.normalized().ok_or_else(|| InvariantError::GenericityFailure("zero direction".into()))?;
            project_along(curves, u, opts).map_err(|NotGeneric(m)| InvariantError::GenericityFailure(m))
        }
        Direction::Auto { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut last = String::new();
            for _ in 0..opts.max_retries.max(1) {
                let u = random_unit(&mut rng);
                match project_along(curves, u, opts) {
                    Ok(d) => return Ok(d),
                    Err(NotGeneric(m)) => last = m,
                }
            }
            Err(InvariantError::GenericityFailure(format!("no generic direction in {} tries: {last}", opts.max_retries)))
        }
    }
}

pub(crate) fn random_unit(rng: &mut ChaCha8Rng) -> Point3 {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).sqrt();
    Point3::new(s * phi.cos(), s * phi.sin(), z)
}

fn check_curves(curves: &[Curve3], opts: &ProjectionOptions) -> Result<(), InvariantError> {
    for (ci, c) in curves.iter().enumerate() {
        let min = if c.closed { 3 } else { 2 };
        if c.points.len() < min {
            return Err(InvariantError::MalformedDiagram(format!("curve {} has fewer than {min} vertices", c.id)));
        }
        if curves[..ci].iter().any(|d| d.id == c.id) {
            return Err(InvariantError::MalformedDiagram(format!("duplicate curve id {}", c.id)));
        }
    }
    let edges: Vec<(usize, usize, Segment)> = curves
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| (0..c.edge_count()).map(move |i| (ci, i, c.edge(i))))
        .collect();
    let segs: Vec<Segment> = edges.iter().map(|e| e.2).collect();
    // Distinct curves must keep the minimum distance; a curve only has to
    // stay simple.
    for (x, y) in near_pairs(&segs, None, opts.min_curve_distance) {
        let ((ci, i, s), (cj, j, t)) = (edges[x], edges[y]);
        if ci == cj && curves[ci].adjacent(i, j) {
            continue;
        }
        let limit = if ci == cj { EPS } else { opts.min_curve_distance };
        let d = segment_segment(&s, &t);
        if d < limit {
            return Err(InvariantError::CurvesTooClose { a: curves[ci].id.clone(), b: curves[cj].id.clone(), distance: d });
        }
    }
    Ok(())
}

fn p2(p: Point3, e1: Point3, e2: Point3) -> Point2 {
    Point2::new(p.dot(e1), p.dot(e2))
}

fn point_seg2(p: Point2, a: Point2, b: Point2) -> f64 {
    let d = b.sub(a);
    let l2 = d.dot(d);
    let t = if l2 > 0.0 { (p.sub(a).dot(d) / l2).clamp(0.0, 1.0) } else { 0.0 };
    p.dist(a.add(d.scale(t)))
}

struct Edge2 {
    curve: usize,
    index: usize,
    a: Point2,
    b: Point2,
    da: f64,
    db: f64,
}

fn project_along(curves: &[Curve3], u: Point3, opts: &ProjectionOptions) -> Result<Diagram, NotGeneric> {
    let (e1, e2) = frame(u);
    let tol = opts.tolerance;
    let mut edges = Vec::new();
    for (ci, c) in curves.iter().enumerate() {
        for i in 0..c.edge_count() {
            let s = c.edge(i);
            let e = Edge2 { curve: ci, index: i, a: p2(s.a, e1, e2), b: p2(s.b, e1, e2), da: s.a.dot(u), db: s.b.dot(u) };
            if e.a.dist(e.b) < tol {
                return Err(NotGeneric(format!("edge {i} of {} projects to a point", c.id)));
            }
            edges.push(e);
        }
    }
    // Vertex over a non-incident edge.
    for (ci, c) in curves.iter().enumerate() {
        for (k, p) in c.points.iter().enumerate() {
            let q = p2(*p, e1, e2);
            let n = c.points.len();
            for e in &edges {
                if e.curve == ci && (e.index == k || (e.index + 1) % n == k) {
                    continue;
                }
                if point_seg2(q, e.a, e.b) < tol {
                    return Err(NotGeneric(format!("vertex {k} of {} projects onto an edge", c.id)));
                }
            }
        }
    }
    let mut sites = Vec::new();
    for x in 0..edges.len() {
        for y in x + 1..edges.len() {
            let (f, g) = (&edges[x], &edges[y]);
            if f.curve == g.curve && curves[f.curve].adjacent(f.index, g.index) {
                continue;
            }
            let d1 = f.b.sub(f.a);
            let d2 = g.b.sub(g.a);
            let denom = d1.cross(d2);
            let w = g.a.sub(f.a);
            let s = w.cross(d2) / denom;
            let t = w.cross(d1) / denom;
            if denom == 0.0 || !(0.0..=1.0).contains(&s) || !(0.0..=1.0).contains(&t) {
                continue;
            }
            if denom.abs() < opts.min_sine * d1.norm() * d2.norm() {
                return Err(NotGeneric("near-tangent crossing".into()));
            }
            let pos = f.a.add(d1.scale(s));
            let hf = f.da + (f.db - f.da) * s;
            let hg = g.da + (g.db - g.da) * t;
            let (fs, gs) = ((f.curve, f.index, s), (g.curve, g.index, t));
            let (over, under) = if hf > hg { (fs, gs) } else { (gs, fs) };
            sites.push(CrossingSite { position: pos, over, under });
        }
    }
    for (i, a) in sites.iter().enumerate() {
        for b in &sites[i + 1..] {
            if a.position.dist(b.position) < tol {
                return Err(NotGeneric("triple point".into()));
            }
        }
    }
    Ok(build_diagram(curves, &edges_dirs(curves, e1, e2), u, *opts, sites))
}

fn edges_dirs(curves: &[Curve3], e1: Point3, e2: Point3) -> Vec<Vec<Point2>> {
    curves
        .iter()
        .map(|c| (0..c.edge_count()).map(|i| { let s = c.edge(i); p2(s.b, e1, e2).sub(p2(s.a, e1, e2)) }).collect())
        .collect()
}

/// Orders crossings along each component so that arcs break at every
/// under-passage, and assembles the combinatorial diagram.
fn build_diagram(curves: &[Curve3], dirs: &[Vec<Point2>], u: Point3, options: ProjectionOptions, mut sites: Vec<CrossingSite>) -> Diagram {
    // Deterministic crossing numbering: along curves, by position of the under strand.
    sites.sort_by(|a, b| {
        (a.under.0, a.under.1).cmp(&(b.under.0, b.under.1)).then(a.under.2.total_cmp(&b.under.2))
    });
    let mut arcs = Vec::new();
    // arc_after[k]: arc leaving crossing k; arc_before[k]: arc entering it.
    let mut arc_after = vec![usize::MAX; sites.len()];
    let mut arc_before = vec![usize::MAX; sites.len()];
    for ci in 0..curves.len() {
        let unders: Vec<usize> = (0..sites.len()).filter(|&k| sites[k].under.0 == ci).collect();
        if unders.is_empty() {
            arcs.push(Arc { component: ci, from: None, to: None });
            continue;
        }
        if !curves[ci].closed {
            arc_before[unders[0]] = arcs.len();
            arcs.push(Arc { component: ci, from: None, to: Some(unders[0]) });
        }
        for (m, &k) in unders.iter().enumerate() {
            let next = unders.get(m + 1).copied().or(curves[ci].closed.then_some(unders[0]));
            arc_after[k] = arcs.len();
            if let Some(next) = next {
                arc_before[next] = arcs.len();
            }
            arcs.push(Arc { component: ci, from: Some(k), to: next });
        }
    }
    // The arc of a curve containing the point (edge, t): the last under-crossing
    // before it, cyclically on closed curves; the leading arc on open ones.
    let arc_at = |ci: usize, edge: usize, t: f64| -> usize {
        let mut best: Option<usize> = None;
        let mut last: Option<usize> = None;
        for (k, s) in sites.iter().enumerate() {
            if s.under.0 != ci {
                continue;
            }
            last = Some(k);
            if (s.under.1, s.under.2) < (edge, t) {
                best = Some(k);
            }
        }
        let wrap = if curves[ci].closed { last } else { None };
        match best.or(wrap) {
            Some(k) => arc_after[k],
            None => arcs.iter().position(|a| a.component == ci).unwrap(),
        }
    };
    let crossings = sites
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let od = dirs[s.over.0][s.over.1];
            let ud = dirs[s.under.0][s.under.1];
            Crossing {
                over: arc_at(s.over.0, s.over.1, s.over.2),
                under_in: arc_before[k],
                under_out: arc_after[k],
                sign: if od.cross(ud) > 0.0 { 1 } else { -1 },
            }
        })
        .collect();
    Diagram {
        version: DIAGRAM_FORMAT_VERSION,
        components: curves.iter().map(|c| c.id.clone()).collect(),
        arcs,
        crossings,
        source: Some(Projected { direction: u, options, curves: curves.to_vec(), sites }),
    }
}

/// Smallest polygon resolution `n ≥ base` whose sagitta is at most half of
/// `gap`; capped so pathological gaps cannot explode the polygon.
fn circle_resolution(radius: f64, gap: f64, base: usize) -> usize {
    const CAP: usize = 1 << 14;
    let mut n = base.max(8);
    while n < CAP && radius * (1.0 - (std::f64::consts::PI / n as f64).cos()) > gap / 2.0 {
        n *= 2;
    }
    n.min(CAP)
}

/// The closed curves of a scene for projection: every closed rope, then the
/// spine of every circle piece. Circles become regular polygons with at
/// least `base_n` sides, refined until the polygon stays within half the
/// distance to every other curve.
pub fn scene_curves(s: &Scene, base_n: usize) -> Vec<Curve3> {
    collect_curves(s, base_n, false)
}

/// Every curve of a scene for drawing: ropes, pole segments and circle
/// spines. Open curves are trimmed by twice the clearance at both ends so
/// that welded or touching ends do not meet another curve.
pub fn scene_drawing_curves(s: &Scene, base_n: usize) -> Vec<Curve3> {
    collect_curves(s, base_n, true)
}

fn trimmed(id: &str, mut points: Vec<Point3>, by: f64) -> Curve3 {
    let n = points.len();
    if n >= 2 {
        let cut = |p: Point3, q: Point3| {
            let len = p.dist(q);
            p + (q - p) * (by.min(len / 4.0) / len)
        };
        let (first, last) = (cut(points[0], points[1]), cut(points[n - 1], points[n - 2]));
        points[0] = first;
        points[n - 1] = last;
    }
    Curve3 { id: id.into(), closed: false, points }
}

fn collect_curves(s: &Scene, base_n: usize, open: bool) -> Vec<Curve3> {
    let trim = 2.0 * s.clearance;
    let mut out: Vec<Curve3> = Vec::new();
    for r in &s.ropes {
        if r.closed {
            out.push(Curve3 { id: r.id.clone(), closed: true, points: r.vertices.clone() });
        } else if open {
            out.push(trimmed(&r.id, r.vertices.clone(), trim));
        }
    }
    if open {
        for p in &s.pieces {
            if let Some(seg) = p.geometry.segment {
                // A piece with both a segment and a circle is a lollipop;
                // its stick gets its own name.
                let id = if p.geometry.circle.is_some() { format!("{}:pole", p.id) } else { p.id.clone() };
                out.push(trimmed(&id, vec![seg.a, seg.b], trim));
            }
        }
    }
    let others = out.len();
    let circles: Vec<_> = s.pieces.iter().filter_map(|p| p.geometry.circle.map(|c| (p, c))).collect();
    for (i, (piece, c)) in circles.iter().enumerate() {
        let mut gap = f64::INFINITY;
        for curve in &out[..others] {
            for e in 0..curve.edge_count() {
                gap = gap.min(CircleScan::segment(c, &curve.edge(e)).min_distance());
            }
        }
        for (j, (_, d)) in circles.iter().enumerate() {
            if i != j {
                gap = gap.min(CircleScan::circle(c, d).min_distance());
            }
        }
        let n = circle_resolution(c.radius, gap, base_n);
        out.push(Curve3 { id: piece.id.clone(), closed: true, points: c.polygon(n) });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom3::Circle;

    fn ring(id: &str, center: Point3, normal: Point3) -> Curve3 {
        Curve3 { id: id.into(), closed: true, points: Circle::wire(center, 1.0, normal).unwrap().polygon(64) }
    }

    #[test]
    fn stacked_circles_do_not_cross() {
        let a = ring("a", Point3::ORIGIN, Point3::Z);
        let b = ring("b", Point3::new(8.0, 0.0, 6.0), Point3::Z);
        let d = project_diagram(&[a, b], Direction::Fixed(Point3::Z), &Default::default()).unwrap();
        assert_eq!(d.crossings.len(), 0);
        assert_eq!(d.components.len(), 2);
        assert_eq!(d.arcs.len(), 2);
    }

    #[test]
    fn hopf_pair_has_two_equal_sign_crossings() {
        let a = ring("a", Point3::ORIGIN, Point3::Z);
        let b = ring("b", Point3::new(1.0, 0.0, 0.0), Point3::Y);
        let d = project_diagram(&[a, b], Direction::Fixed(Point3::new(0.1, 0.2, 1.0)), &Default::default()).unwrap();
        d.check().unwrap();
        assert_eq!(d.crossings.len(), 2);
        assert_eq!(d.crossings[0].sign, d.crossings[1].sign);
    }

    #[test]
    fn direction_along_an_edge_is_not_generic() {
        let sq = Curve3 {
            id: "sq".into(),
            closed: true,
            points: vec![Point3::ORIGIN, Point3::X, Point3::new(1.0, 0.0, 1.0), Point3::Z],
        };
        let r = project_diagram(&[sq], Direction::Fixed(Point3::Z), &Default::default());
        assert!(matches!(r, Err(InvariantError::GenericityFailure(_))));
    }

    #[test]
    fn touching_curves_are_rejected() {
        let a = ring("a", Point3::ORIGIN, Point3::Z);
        let b = ring("b", Point3::new(2.0, 0.0, 0.0), Point3::Z);
        let r = project_diagram(&[a, b], Direction::Auto { seed: 1 }, &Default::default());
        assert!(matches!(r, Err(InvariantError::CurvesTooClose { .. })));
    }

    #[test]
    fn open_curves_get_end_arcs() {
        let a = ring("a", Point3::ORIGIN, Point3::Z);
        let stick = Curve3 { id: "s".into(), closed: false, points: vec![Point3::new(-2.0, 0.1, -1.0), Point3::new(2.0, 0.2, -1.0)] };
        let d = project_diagram(&[a, stick], Direction::Fixed(Point3::Z), &Default::default()).unwrap();
        // The stick passes under the ring twice: three arcs, two of them ending.
        assert_eq!(d.crossings.len(), 2);
        let ends: Vec<_> = d.arcs.iter().filter(|a| a.component == 1).map(|a| (a.from.is_some(), a.to.is_some())).collect();
        assert_eq!(ends, vec![(false, true), (true, true), (true, false)]);
        assert!(d.check().is_err());
    }

    #[test]
    fn drawing_curves_separate_touching_parts() {
        let s = crate::scenes::build_model_a(crate::scenes::ModelAParams { r: 1.5 }).unwrap();
        let curves = scene_drawing_curves(&s, 64);
        let ids: Vec<_> = curves.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["rope", "lollipop:pole", "lollipop", "hoop"]);
        project_diagram(&curves, Direction::Auto { seed: 0 }, &Default::default()).unwrap();
    }

    #[test]
    fn resolution_refines_for_small_gaps() {
        assert_eq!(circle_resolution(1.0, 10.0, 64), 64);
        let n = circle_resolution(1.0, 1e-3, 64);
        assert!(1.0 - (std::f64::consts::PI / n as f64).cos() <= 5e-4);
    }
}
