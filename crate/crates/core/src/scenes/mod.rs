//! Puzzle scenes: rigid pieces, ropes, forbidden planes and a goal.
//!
//! A [`Scene`] is an immutable value. The builders in [`builders`] produce
//! the three canonical puzzles, [`legality`] decides whether a scene respects
//! every "must not touch" rule, and the JSON file format lives here.

pub mod builders;
pub(crate) mod legality;

pub use builders::{build_model_a, build_model_b, build_model_c, ModelAParams, ModelBParams, ModelCParams};
pub use legality::{is_legal, piece_min_clearance, LegalityReport, Violation, ViolationKind};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom3::{point_circle, point_segment, Circle, GeomError, Plane, Point3, Segment, EPS};
use crate::json;

pub const SCENE_FORMAT_VERSION: u32 = 1;

/// Tag naming the impossible regime predicted for a built puzzle.
pub const TAG_PAPER_IMPOSSIBLE: &str = "paper-impossible";
/// Tag for Model B instances built outside the theorem's size hypothesis.
pub const TAG_HYPOTHESIS_VIOLATED: &str = "hypothesis-violated";

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("infeasible configuration: {0}")]
    Infeasible(String),
    #[error("malformed scene: {0}")]
    Malformed(String),
    #[error("unsupported scene format version {0}")]
    UnsupportedVersion(u32),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("scene JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelTag {
    #[serde(rename = "modelA")]
    ModelA,
    #[serde(rename = "modelB")]
    ModelB,
    #[serde(rename = "modelC")]
    ModelC,
    #[serde(rename = "custom")]
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceKind {
    PoleSegment,
    Circle,
    /// Pole segment welded to a circle.
    Lollipop,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceGeometry {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub segment: Option<Segment>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub circle: Option<Circle>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RopeEnd {
    Start,
    End,
}

/// A rope end welded to a point of a rigid piece; moving the piece drags it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attachment {
    pub rope: String,
    pub end: RopeEnd,
    pub point: Point3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidPiece {
    pub id: String,
    pub kind: PieceKind,
    pub movable: bool,
    pub geometry: PieceGeometry,
    pub attachments: Vec<Attachment>,
}

impl RigidPiece {
    /// Rotation pivot for rigid steps: the circle centre when there is one,
    /// otherwise the segment midpoint.
    pub fn pivot(&self) -> Point3 {
        match (&self.geometry.circle, &self.geometry.segment) {
            (Some(c), _) => c.center,
            (None, Some(s)) => s.at(0.5),
            (None, None) => Point3::ORIGIN,
        }
    }

    /// Largest distance from the pivot to any point of the piece's spine.
    pub fn circumradius(&self) -> f64 {
        let pivot = self.pivot();
        let mut r: f64 = 0.0;
        if let Some(c) = &self.geometry.circle {
            r = r.max(c.center.dist(pivot) + c.radius);
        }
        if let Some(s) = &self.geometry.segment {
            r = r.max(s.a.dist(pivot)).max(s.b.dist(pivot));
        }
        for a in &self.attachments {
            r = r.max(a.point.dist(pivot));
        }
        r
    }

    /// Applies a rigid motion: rotation by `angle` about `axis` through the
    /// pivot, then translation. Attachment points move along.
    pub fn moved(&self, axis: Point3, angle: f64, translation: Point3) -> RigidPiece {
        let pivot = self.pivot();
        let map = |p: Point3| pivot + (p - pivot).rotated(axis, angle) + translation;
        let mut out = self.clone();
        if let Some(c) = &mut out.geometry.circle {
            c.center = map(c.center);
            let n = c.normal.rotated(axis, angle);
            c.normal = n / n.norm();
        }
        if let Some(s) = &mut out.geometry.segment {
            s.a = map(s.a);
            s.b = map(s.b);
        }
        for a in &mut out.attachments {
            a.point = map(a.point);
        }
        out
    }

    fn contains_point(&self, p: Point3, tol: f64) -> bool {
        self.geometry.circle.is_some_and(|c| point_circle(p, &c) <= tol)
            || self.geometry.segment.is_some_and(|s| point_segment(p, &s) <= tol)
    }
}

/// Polygonal rope: open (possibly with both ends pinned) or closed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyRope {
    pub id: String,
    pub closed: bool,
    /// Either empty or the two fixed endpoints of an open rope.
    pub pinned: Vec<Point3>,
    pub length_budget: Option<f64>,
    pub vertices: Vec<Point3>,
}

impl PolyRope {
    pub fn edge_count(&self) -> usize {
        let n = self.vertices.len();
        if self.closed {
            n
        } else {
            n.saturating_sub(1)
        }
    }

    pub fn edge(&self, i: usize) -> Segment {
        let n = self.vertices.len();
        Segment::new_unchecked(self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.edge_count()).map(|i| self.edge(i))
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|e| e.length()).sum()
    }

    pub fn is_pinned_vertex(&self, p: Point3) -> bool {
        self.pinned.iter().any(|q| *q == p)
    }
}

/// Goal of a puzzle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Goal {
    /// A circle piece must reach this pose (normal compared up to sign).
    TargetPose { piece: String, center: Point3, radius: f64, normal: Point3 },
    /// A plane with margin `clearance` must separate the two groups of
    /// piece and rope ids.
    Separation { groups: [Vec<String>; 2] },
}

/// Full puzzle state. Field order is the file layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub version: u32,
    pub model_tag: ModelTag,
    pub clearance: f64,
    pub pieces: Vec<RigidPiece>,
    pub ropes: Vec<PolyRope>,
    pub forbidden_planes: Vec<Plane>,
    pub goal: Goal,
    pub regime_tags: Vec<String>,
}

impl Scene {
    pub fn piece(&self, id: &str) -> Option<&RigidPiece> {
        self.pieces.iter().find(|p| p.id == id)
    }

    pub fn piece_index(&self, id: &str) -> Option<usize> {
        self.pieces.iter().position(|p| p.id == id)
    }

    pub fn rope(&self, id: &str) -> Option<&PolyRope> {
        self.ropes.iter().find(|r| r.id == id)
    }

    pub fn rope_index(&self, id: &str) -> Option<usize> {
        self.ropes.iter().position(|r| r.id == id)
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.regime_tags.iter().any(|t| t == tag)
    }

    /// Is the rope welded to this piece?
    pub fn rope_attached_to(&self, rope: &str, piece: &RigidPiece) -> bool {
        piece.attachments.iter().any(|a| a.rope == rope)
    }

    /// Pieces welded to a common rope may touch each other.
    pub fn pieces_exempt(&self, a: &RigidPiece, b: &RigidPiece) -> bool {
        a.attachments.iter().any(|x| b.attachments.iter().any(|y| x.rope == y.rope))
    }

    pub fn to_json(&self) -> String {
        json::to_canonical_string(self)
    }

    pub fn from_json(text: &str) -> Result<Scene, SceneError> {
        let scene: Scene = serde_json::from_str(text)?;
        if scene.version != SCENE_FORMAT_VERSION {
            return Err(SceneError::UnsupportedVersion(scene.version));
        }
        scene.check_structure()?;
        Ok(scene)
    }

    /// Content hash of the canonical serialization; move scripts record it.
    pub fn content_hash(&self) -> String {
        json::content_hash(self)
    }

    /// Shape checks that do not involve clearances: vertex counts, pinned
    /// endpoints, attachment consistency, unique ids, finite geometry.
    pub fn check_structure(&self) -> Result<(), SceneError> {
        let bad = |m: String| Err(SceneError::Malformed(m));
        if !(self.clearance > 0.0 && self.clearance.is_finite()) {
            return bad("clearance must be positive".into());
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if self.pieces[..i].iter().any(|q| q.id == p.id) {
                return bad(format!("duplicate piece id {}", p.id));
            }
            if let Some(c) = &p.geometry.circle {
                c.check()?;
            }
            if let Some(s) = &p.geometry.segment {
                s.check()?;
            }
            let ok = match p.kind {
                PieceKind::PoleSegment => p.geometry.segment.is_some() && p.geometry.circle.is_none(),
                PieceKind::Circle => p.geometry.circle.is_some() && p.geometry.segment.is_none(),
                PieceKind::Lollipop => p.geometry.circle.is_some() && p.geometry.segment.is_some(),
            };
            if !ok {
                return bad(format!("piece {} geometry does not match its kind", p.id));
            }
            for a in &p.attachments {
                let scale = 1.0 + p.circumradius();
                if !p.contains_point(a.point, 1e-9 * scale) {
                    return bad(format!("attachment of {} is not on piece {}", a.rope, p.id));
                }
                let Some(rope) = self.rope(&a.rope) else {
                    return bad(format!("attachment names unknown rope {}", a.rope));
                };
                if rope.closed {
                    return bad(format!("closed rope {} cannot be attached", rope.id));
                }
                let v = match a.end {
                    RopeEnd::Start => rope.vertices.first(),
                    RopeEnd::End => rope.vertices.last(),
                };
                if v.map_or(true, |v| v.dist(a.point) > 1e-9 * scale) {
                    return bad(format!("rope {} end does not sit on its attachment", rope.id));
                }
            }
        }
        for (i, r) in self.ropes.iter().enumerate() {
            if self.ropes[..i].iter().any(|q| q.id == r.id) || self.piece(&r.id).is_some() {
                return bad(format!("duplicate id {}", r.id));
            }
            let min = if r.closed { 3 } else { 2 };
            if r.vertices.len() < min {
                return bad(format!("rope {} needs at least {min} vertices", r.id));
            }
            if r.vertices.iter().any(|v| !v.is_finite()) {
                return Err(GeomError::NonFinite.into());
            }
            if r.edges().any(|e| e.length() <= EPS) {
                return bad(format!("rope {} has coincident consecutive vertices", r.id));
            }
            match (r.pinned.len(), r.closed) {
                (0, _) => {}
                (2, false) => {
                    if r.vertices[0] != r.pinned[0] || *r.vertices.last().unwrap() != r.pinned[1] {
                        return bad(format!("rope {} endpoints differ from its pins", r.id));
                    }
                }
                _ => return bad(format!("rope {} pins must be two ends of an open rope", r.id)),
            }
            if let Some(b) = r.length_budget {
                if !(b > 0.0) {
                    return bad(format!("rope {} has a non-positive length budget", r.id));
                }
            }
        }
        for pl in &self.forbidden_planes {
            if (pl.normal.norm() - 1.0).abs() > 1e-9 {
                return bad("forbidden plane normal must be unit length".into());
            }
        }
        let known = |id: &String| self.piece(id).is_some() || self.rope(id).is_some();
        match &self.goal {
            Goal::TargetPose { piece, .. } => {
                if self.piece(piece).and_then(|p| p.geometry.circle).is_none() {
                    return bad(format!("goal piece {piece} is not a circle piece"));
                }
            }
            Goal::Separation { groups } => {
                if groups.iter().any(|g| g.is_empty() || !g.iter().all(known)) {
                    return bad("separation groups must be non-empty and name known ids".into());
                }
            }
        }
        Ok(())
    }
}

/// Pose comparison tolerance for target-pose goals.
pub const POSE_TOLERANCE: f64 = 1e-6;

/// Has the scene reached its goal?
pub fn goal_reached(s: &Scene) -> bool {
    match &s.goal {
        Goal::TargetPose { piece, center, radius, normal } => {
            let Some(c) = s.piece(piece).and_then(|p| p.geometry.circle) else {
                return false;
            };
            let normal_err = (c.normal - *normal).norm().min((c.normal + *normal).norm());
            c.center.dist(*center) <= POSE_TOLERANCE
                && (c.radius - radius).abs() <= POSE_TOLERANCE
                && normal_err <= POSE_TOLERANCE
        }
        Goal::Separation { groups } => separating_plane(s, &groups[0], &groups[1]).is_some(),
    }
}

/// Support function `max_{x ∈ X} u·x` of one scene element, tubes included.
fn support(s: &Scene, id: &str, u: Point3) -> f64 {
    if let Some(p) = s.piece(id) {
        let mut h = f64::NEG_INFINITY;
        if let Some(c) = &p.geometry.circle {
            let in_plane = u - c.normal * u.dot(c.normal);
            h = h.max(u.dot(c.center) + c.radius * in_plane.norm() + c.tube_radius);
        }
        if let Some(seg) = &p.geometry.segment {
            h = h.max(u.dot(seg.a)).max(u.dot(seg.b));
        }
        h
    } else if let Some(r) = s.rope(id) {
        r.vertices.iter().map(|v| u.dot(*v)).fold(f64::NEG_INFINITY, f64::max)
    } else {
        f64::NEG_INFINITY
    }
}

fn separation_gap(s: &Scene, a: &[String], b: &[String], u: Point3) -> f64 {
    let hi_a = a.iter().map(|id| support(s, id, u)).fold(f64::NEG_INFINITY, f64::max);
    let lo_b = b.iter().map(|id| -support(s, id, -u)).fold(f64::INFINITY, f64::min);
    lo_b - hi_a
}

/// Finds a plane `{x : n·x = offset}` with group `a` below and group `b`
/// above, both at least the scene clearance away. Exact support functions
/// make any returned plane a certificate; the direction search itself
/// (centroid axis, a Fibonacci sphere, then local refinement) can miss
/// planes that exist only in very narrow direction cones.
pub fn separating_plane(s: &Scene, a: &[String], b: &[String]) -> Option<Plane> {
    let centroid = |ids: &[String]| {
        let mut acc = Point3::ORIGIN;
        let mut n = 0.0_f64;
        for id in ids {
            if let Some(p) = s.piece(id) {
                acc += p.pivot();
                n += 1.0;
            } else if let Some(r) = s.rope(id) {
                for v in &r.vertices {
                    acc += *v / r.vertices.len() as f64;
                }
                n += 1.0;
            }
        }
        acc / n.max(1.0)
    };
    let mut candidates = Vec::new();
    if let Some(u) = (centroid(b) - centroid(a)).normalized() {
        candidates.push(u);
    }
    const N: usize = 2000;
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    for i in 0..N {
        let y = 1.0 - 2.0 * (i as f64 + 0.5) / N as f64;
        let r = (1.0 - y * y).sqrt();
        let t = golden * i as f64;
        candidates.push(Point3::new(r * t.cos(), y, r * t.sin()));
    }
    let mut best = candidates[0];
    let mut best_gap = f64::NEG_INFINITY;
    for u in candidates {
        let g = separation_gap(s, a, b, u);
        if g > best_gap {
            best_gap = g;
            best = u;
        }
    }
    let mut step = 0.05;
    while step > 1e-6 && best_gap < s.clearance {
        let mut improved = false;
        let (e1, e2) = {
            let e1 = best.any_orthonormal();
            (e1, best.cross(e1))
        };
        for d in [e1, -e1, e2, -e2] {
            if let Some(u) = (best + d * step).normalized() {
                let g = separation_gap(s, a, b, u);
                if g > best_gap {
                    best_gap = g;
                    best = u;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    if best_gap < s.clearance {
        return None;
    }
    let hi_a = a.iter().map(|id| support(s, id, best)).fold(f64::NEG_INFINITY, f64::max);
    Some(Plane { point: best * (hi_a + 0.5 * best_gap), normal: best })
}
