//! The "must not touch" rules.
//!
//! Which pairs are checked follows from the scene data alone:
//!
//! * a rope keeps `δ` (plus tube) from every piece it is not welded to, `δ`
//!   from every other rope and from forbidden planes, and stays simple;
//! * a movable piece keeps `δ` between surfaces from every other piece and
//!   from forbidden planes; fixed pieces are never checked against each
//!   other or against the planes (the pole stands on `z = 0`);
//! * pieces welded to a common rope are exempt from each other, which gives
//!   the end circles of Model B their freedom.
//!
//! A rope end pinned onto a plane is exempt from that plane: only the other
//! vertices of its incident segment must clear it.

use std::fmt;

use crate::geom3::{segment_segment, Circle, CircleScan, Plane, Point3, Segment, EPS};

use super::{PieceKind, PolyRope, RigidPiece, Scene};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    RopePiece,
    RopeRope,
    RopeSelf,
    RopePlane,
    PiecePiece,
    PiecePlane,
    LengthBudget,
    Structure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// The rope or piece at fault.
    pub subject: String,
    /// What it came too close to (a piece id, rope id, `plane#i`, or
    /// `budget`).
    pub object: String,
    /// Achieved surface distance, or the perimeter for budget violations.
    pub value: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ViolationKind::LengthBudget => {
                write!(f, "{} exceeds its length budget (perimeter {:.9})", self.subject, self.value)
            }
            ViolationKind::Structure => write!(f, "{}: {}", self.subject, self.object),
            _ => write!(f, "{} too close to {} (distance {:.3e})", self.subject, self.object, self.value),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LegalityReport {
    pub legal: bool,
    pub violations: Vec<Violation>,
}

impl fmt::Display for LegalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.legal {
            return write!(f, "legal");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn violation(kind: ViolationKind, subject: &str, object: &str, value: f64) -> Violation {
    Violation { kind, subject: subject.into(), object: object.into(), value }
}

/// Full legality audit; collects every violation rather than stopping at the
/// first one.
pub fn is_legal(s: &Scene) -> LegalityReport {
    let mut out = Vec::new();
    if let Err(e) = s.check_structure() {
        out.push(violation(ViolationKind::Structure, "scene", &e.to_string(), 0.0));
        return LegalityReport { legal: false, violations: out };
    }
    let delta = s.clearance;
    for (i, rope) in s.ropes.iter().enumerate() {
        rope_checks(s, rope, delta, &mut out);
        for other in &s.ropes[i + 1..] {
            if let Some(d) = rope_rope_shortfall(rope, other, delta) {
                out.push(violation(ViolationKind::RopeRope, &rope.id, &other.id, d));
            }
        }
    }
    for (i, piece) in s.pieces.iter().enumerate() {
        if piece.movable {
            piece_checks(s, i, delta, &mut out);
        }
    }
    LegalityReport { legal: out.is_empty(), violations: out }
}

/// Everything a single rope must satisfy on its own and against pieces and
/// planes (other ropes are handled pairwise by the caller).
pub(crate) fn rope_checks(s: &Scene, rope: &PolyRope, delta: f64, out: &mut Vec<Violation>) {
    if let Some(budget) = rope.length_budget {
        let p = rope.perimeter();
        if p > budget {
            out.push(violation(ViolationKind::LengthBudget, &rope.id, "budget", p));
        }
    }
    if let Some(d) = self_shortfall(rope) {
        out.push(violation(ViolationKind::RopeSelf, &rope.id, &rope.id, d));
    }
    for piece in &s.pieces {
        if s.rope_attached_to(&rope.id, piece) {
            continue;
        }
        rope_piece_violations(rope, piece, delta, out);
    }
    for (k, plane) in s.forbidden_planes.iter().enumerate() {
        if let Some(d) = rope_plane_shortfall(rope, plane, delta) {
            out.push(violation(ViolationKind::RopePlane, &rope.id, &format!("plane#{k}"), d));
        }
    }
}

/// Checks for the movable piece `idx` against every other piece
/// and every forbidden plane. Pairs of movable pieces are visited once, from
/// the later piece's side. Rope-vs-piece pairs belong to the rope checks.
pub(crate) fn piece_checks(s: &Scene, idx: usize, delta: f64, out: &mut Vec<Violation>) {
    let piece = &s.pieces[idx];
    for (j, other) in s.pieces.iter().enumerate() {
        if j == idx || (other.movable && j < idx) || s.pieces_exempt(piece, other) {
            continue;
        }
        piece_piece_violations(piece, other, delta, out);
    }
    for (k, plane) in s.forbidden_planes.iter().enumerate() {
        if let Some(d) = piece_plane_shortfall(piece, plane, delta) {
            out.push(violation(ViolationKind::PiecePlane, &piece.id, &format!("plane#{k}"), d));
        }
    }
}

/// Smallest surface clearance of a piece from everything it must avoid:
/// other non-exempt pieces, ropes not welded to it and forbidden planes.
/// Used to audit continuous motions.
pub fn piece_min_clearance(s: &Scene, idx: usize) -> f64 {
    let piece = &s.pieces[idx];
    let mut best = f64::INFINITY;
    for (j, other) in s.pieces.iter().enumerate() {
        if j != idx && !s.pieces_exempt(piece, other) {
            best = best.min(piece_piece_distance(piece, other));
        }
    }
    for rope in &s.ropes {
        if s.rope_attached_to(&rope.id, piece) {
            continue;
        }
        for e in rope.edges() {
            for part in parts(piece) {
                best = best.min(segment_part_distance(&e, part));
            }
        }
    }
    for plane in &s.forbidden_planes {
        best = best.min(piece_plane_height(piece, plane));
    }
    best
}

/// Index pairs `(i, j)` of segments whose bounding boxes come within `thr`
/// of each other: all pairs `i < j` within `a` when `b` is `None`, otherwise
/// pairs across `a` and `b`. Sweep and prune along `x`.
pub(crate) fn near_pairs(a: &[Segment], b: Option<&[Segment]>, thr: f64) -> Vec<(usize, usize)> {
    let bbox = |s: &Segment| {
        let lo = [s.a.x.min(s.b.x), s.a.y.min(s.b.y), s.a.z.min(s.b.z)];
        let hi = [s.a.x.max(s.b.x), s.a.y.max(s.b.y), s.a.z.max(s.b.z)];
        (lo, hi)
    };
    // (set, index, lo, hi)
    let mut items: Vec<(u8, usize, [f64; 3], [f64; 3])> =
        a.iter().enumerate().map(|(i, s)| { let (lo, hi) = bbox(s); (0, i, lo, hi) }).collect();
    if let Some(b) = b {
        items.extend(b.iter().enumerate().map(|(i, s)| { let (lo, hi) = bbox(s); (1, i, lo, hi) }));
    }
    items.sort_by(|x, y| x.2[0].total_cmp(&y.2[0]).then(x.0.cmp(&y.0)).then(x.1.cmp(&y.1)));
    let mut out = Vec::new();
    for (k, x) in items.iter().enumerate() {
        for y in &items[k + 1..] {
            if y.2[0] > x.3[0] + thr {
                break;
            }
            let overlap = (1..3).all(|d| y.2[d] <= x.3[d] + thr && x.2[d] <= y.3[d] + thr);
            if !overlap {
                continue;
            }
            match (b.is_some(), x.0, y.0) {
                (false, _, _) => out.push((x.1.min(y.1), x.1.max(y.1))),
                (true, 0, 1) => out.push((x.1, y.1)),
                (true, 1, 0) => out.push((y.1, x.1)),
                _ => {}
            }
        }
    }
    out
}

fn self_shortfall(rope: &PolyRope) -> Option<f64> {
    let m = rope.edge_count();
    let edges: Vec<Segment> = rope.edges().collect();
    let mut worst: Option<f64> = None;
    for (i, j) in near_pairs(&edges, None, EPS) {
        if j < i + 2 || (rope.closed && i == 0 && j == m - 1) {
            continue;
        }
        let d = segment_segment(&edges[i], &edges[j]);
        if d <= EPS {
            worst = Some(worst.map_or(d, |w: f64| w.min(d)));
        }
    }
    worst
}

fn rope_rope_shortfall(a: &PolyRope, b: &PolyRope, delta: f64) -> Option<f64> {
    let ea: Vec<Segment> = a.edges().collect();
    let eb: Vec<Segment> = b.edges().collect();
    let mut worst: Option<f64> = None;
    for (i, j) in near_pairs(&ea, Some(&eb), delta) {
        let d = segment_segment(&ea[i], &eb[j]);
        if d < delta {
            worst = Some(worst.map_or(d, |w: f64| w.min(d)));
        }
    }
    worst
}

/// One rigid component of a piece: a lollipop has a pole and a ring.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Part {
    Pole(Segment),
    Ring(Circle),
}

pub(crate) fn parts(piece: &RigidPiece) -> impl Iterator<Item = Part> + '_ {
    piece
        .geometry
        .segment
        .map(Part::Pole)
        .into_iter()
        .chain(piece.geometry.circle.map(Part::Ring))
}

/// Violation object name: the piece id, refined to the part for lollipops.
pub(crate) fn part_name(piece: &RigidPiece, part: Part) -> String {
    match (piece.kind, part) {
        (PieceKind::Lollipop, Part::Pole(_)) => format!("{}.pole", piece.id),
        (PieceKind::Lollipop, Part::Ring(_)) => format!("{}.circle", piece.id),
        _ => piece.id.clone(),
    }
}

/// Surface distance from a segment to a part (tube subtracted).
pub(crate) fn segment_part_distance(e: &Segment, part: Part) -> f64 {
    match part {
        Part::Pole(p) => segment_segment(e, &p),
        Part::Ring(c) => CircleScan::segment(&c, e).min_distance() - c.tube_radius,
    }
}

pub(crate) fn segment_part_too_close(e: &Segment, part: Part, delta: f64) -> bool {
    match part {
        Part::Pole(p) => segment_segment(e, &p) < delta,
        Part::Ring(c) => !CircleScan::segment(&c, e).at_least(delta + c.tube_radius),
    }
}

fn part_part_distance(a: Part, b: Part) -> f64 {
    match (a, b) {
        (Part::Pole(s), Part::Pole(t)) => segment_segment(&s, &t),
        (Part::Pole(s), Part::Ring(c)) | (Part::Ring(c), Part::Pole(s)) => segment_part_distance(&s, Part::Ring(c)),
        (Part::Ring(c), Part::Ring(e)) => {
            CircleScan::circle(&c, &e).min_distance() - c.tube_radius - e.tube_radius
        }
    }
}

fn part_part_too_close(a: Part, b: Part, delta: f64) -> bool {
    match (a, b) {
        (Part::Pole(s), Part::Pole(t)) => segment_segment(&s, &t) < delta,
        (Part::Pole(s), Part::Ring(c)) | (Part::Ring(c), Part::Pole(s)) => {
            segment_part_too_close(&s, Part::Ring(c), delta)
        }
        (Part::Ring(c), Part::Ring(e)) => {
            !CircleScan::circle(&c, &e).at_least(delta + c.tube_radius + e.tube_radius)
        }
    }
}

fn rope_piece_violations(rope: &PolyRope, piece: &RigidPiece, delta: f64, out: &mut Vec<Violation>) {
    for part in parts(piece) {
        let worst = rope
            .edges()
            .filter(|e| segment_part_too_close(e, part, delta))
            .map(|e| segment_part_distance(&e, part))
            .reduce(f64::min);
        if let Some(d) = worst {
            out.push(violation(ViolationKind::RopePiece, &rope.id, &part_name(piece, part), d));
        }
    }
}

fn rope_plane_shortfall(rope: &PolyRope, plane: &Plane, delta: f64) -> Option<f64> {
    let on_plane_pin = |p: Point3| rope.is_pinned_vertex(p) && plane.signed_distance(p).abs() <= EPS;
    let mut worst: Option<f64> = None;
    for v in &rope.vertices {
        if on_plane_pin(*v) {
            continue;
        }
        let h = plane.signed_distance(*v);
        if h < delta {
            worst = Some(worst.map_or(h, |w: f64| w.min(h)));
        }
    }
    worst
}

fn piece_piece_distance(a: &RigidPiece, b: &RigidPiece) -> f64 {
    let mut d = f64::INFINITY;
    for pa in parts(a) {
        for pb in parts(b) {
            d = d.min(part_part_distance(pa, pb));
        }
    }
    d
}

fn piece_piece_violations(a: &RigidPiece, b: &RigidPiece, delta: f64, out: &mut Vec<Violation>) {
    for pa in parts(a) {
        for pb in parts(b) {
            if part_part_too_close(pa, pb, delta) {
                let d = part_part_distance(pa, pb);
                out.push(violation(ViolationKind::PiecePiece, &a.id, &part_name(b, pb), d));
            }
        }
    }
}

fn piece_plane_height(piece: &RigidPiece, plane: &Plane) -> f64 {
    let mut h = f64::INFINITY;
    if let Some(s) = &piece.geometry.segment {
        h = h.min(plane.signed_distance(s.a)).min(plane.signed_distance(s.b));
    }
    if let Some(c) = &piece.geometry.circle {
        h = h.min(plane.circle_min_height(c) - c.tube_radius);
    }
    h
}

fn piece_plane_shortfall(piece: &RigidPiece, plane: &Plane, delta: f64) -> Option<f64> {
    let h = piece_plane_height(piece, plane);
    (h < delta).then_some(h)
}
