use crate::geom3::{segment_segment, segment_triangle, CircleScan, Point3, Segment, Triangle, EPS};
use crate::scenes::legality::{part_name, parts, Part};
use crate::scenes::{is_legal, PolyRope, RigidPiece, Scene};

use super::{Move, MoveError, Rotation};

pub fn validate_move(s: &Scene, m: &Move) -> Result<(), MoveError> {
    match m {
        Move::DeltaMove { rope_id, edge_index, apex } => validate_delta(s, rope_id, *edge_index, *apex),
        Move::InverseDelta { rope_id, vertex_index } => validate_inverse(s, rope_id, *vertex_index),
        Move::RigidStep { piece_id, rotation, translation } => {
            validate_rigid_step(s, piece_id, *rotation, *translation)
        }
    }
}

fn rope_of<'a>(s: &'a Scene, rope_id: &str) -> Result<(usize, &'a PolyRope), MoveError> {
    let i = s.rope_index(rope_id).ok_or_else(|| MoveError::UnknownRope(rope_id.into()))?;
    Ok((i, &s.ropes[i]))
}

/// A rope edge that shares exactly one vertex with the triangle.
struct Neighbour {
    edge: usize,
    shared: Point3,
    /// Triangle side opposite the shared vertex.
    far_side: Segment,
}

fn check_budget(rope: &PolyRope, perimeter: f64) -> Result<(), MoveError> {
    match rope.length_budget {
        Some(budget) if perimeter > budget => {
            Err(MoveError::BudgetExceeded { rope: rope.id.clone(), perimeter, budget })
        }
        _ => Ok(()),
    }
}

fn blocked(obstacle: String, distance: f64) -> MoveError {
    MoveError::Blocked { obstacle, distance }
}

/// The solid-triangle rule shared by Δ-moves and their inverses: the
/// triangle meets its own rope only along `base` edges (and at the shared
/// vertices of the neighbouring edges) and keeps the clearance from
/// everything else.
fn triangle_rule(
    s: &Scene,
    rope_idx: usize,
    tri: &Triangle,
    base: &[usize],
    neighbours: &[Neighbour],
) -> Result<(), MoveError> {
    let delta = s.clearance;
    let rope = &s.ropes[rope_idx];

    for (k, plane) in s.forbidden_planes.iter().enumerate() {
        for v in tri.vertices() {
            if rope.is_pinned_vertex(v) && plane.signed_distance(v).abs() <= EPS {
                continue;
            }
            let h = plane.signed_distance(v);
            if h < delta {
                return Err(blocked(format!("plane#{k}"), h));
            }
        }
    }

    for nb in neighbours {
        let e = rope.edge(nb.edge);
        let other = if e.a == nb.shared { e.b } else { e.a };
        let len = e.length();
        if len > delta {
            let cut = nb.shared + (other - nb.shared) * (delta / len);
            let d = segment_triangle(&Segment::new_unchecked(cut, other), tri);
            if d <= EPS {
                return Err(blocked(format!("{} edge {}", rope.id, nb.edge), d));
            }
        }
        let d = segment_segment(&e, &nb.far_side);
        if d <= EPS {
            return Err(blocked(format!("{} edge {}", rope.id, nb.edge), d));
        }
    }
    for j in 0..rope.edge_count() {
        if base.contains(&j) || neighbours.iter().any(|nb| nb.edge == j) {
            continue;
        }
        let d = segment_triangle(&rope.edge(j), tri);
        if d < delta {
            return Err(blocked(format!("{} edge {j}", rope.id), d));
        }
    }

    for (i, other) in s.ropes.iter().enumerate() {
        if i == rope_idx {
            continue;
        }
        for (j, e) in other.edges().enumerate() {
            let d = segment_triangle(&e, tri);
            if d < delta {
                return Err(blocked(format!("{} edge {j}", other.id), d));
            }
        }
    }

    for piece in s.pieces.iter().filter(|p| !s.rope_attached_to(&rope.id, p)) {
        for part in parts(piece) {
            if let Some(d) = triangle_part_shortfall(tri, part, delta) {
                return Err(blocked(part_name(piece, part), d));
            }
        }
    }
    Ok(())
}

fn triangle_part_shortfall(tri: &Triangle, part: Part, delta: f64) -> Option<f64> {
    match part {
        Part::Pole(seg) => {
            let d = segment_triangle(&seg, tri);
            (d < delta).then_some(d)
        }
        Part::Ring(c) => {
            let scan = CircleScan::triangle(&c, tri);
            (!scan.at_least(delta + c.tube_radius)).then(|| scan.min_distance() - c.tube_radius)
        }
    }
}

/// Δ-move: the solid triangle on edge `edge_index` with the given apex.
pub fn validate_delta(s: &Scene, rope_id: &str, edge_index: usize, apex: Point3) -> Result<(), MoveError> {
    let (ri, rope) = rope_of(s, rope_id)?;
    let m = rope.edge_count();
    if edge_index >= m {
        return Err(MoveError::IndexOutOfRange { rope: rope_id.into(), index: edge_index });
    }
    if !apex.is_finite() {
        return Err(MoveError::DegenerateTriangle);
    }
    let base = rope.edge(edge_index);
    let tri = Triangle::new(base.a, base.b, apex)?;
    check_budget(rope, rope.perimeter() - base.length() + base.a.dist(apex) + apex.dist(base.b))?;

    let mut nbs = Vec::with_capacity(2);
    if rope.closed || edge_index > 0 {
        let prev = (edge_index + m - 1) % m;
        nbs.push(Neighbour { edge: prev, shared: base.a, far_side: Segment::new_unchecked(apex, base.b) });
    }
    if rope.closed || edge_index + 1 < m {
        let next = (edge_index + 1) % m;
        nbs.push(Neighbour { edge: next, shared: base.b, far_side: Segment::new_unchecked(base.a, apex) });
    }
    triangle_rule(s, ri, &tri, &[edge_index], &nbs)
}

/// Inverse Δ-move: removes vertex `vertex_index`, validated by the same rule
/// on the triangle it sweeps away.
pub fn validate_inverse(s: &Scene, rope_id: &str, vertex_index: usize) -> Result<(), MoveError> {
    let (ri, rope) = rope_of(s, rope_id)?;
    let n = rope.vertices.len();
    if vertex_index >= n {
        return Err(MoveError::IndexOutOfRange { rope: rope_id.into(), index: vertex_index });
    }
    if !rope.closed && (vertex_index == 0 || vertex_index == n - 1) {
        return Err(MoveError::EndpointFixed { rope: rope_id.into(), index: vertex_index });
    }
    if n < if rope.closed { 4 } else { 3 } {
        return Err(MoveError::TooFewVertices(rope_id.into()));
    }
    let m = rope.edge_count();
    let k = vertex_index;
    let (u, v, w) = (rope.vertices[(k + n - 1) % n], rope.vertices[k], rope.vertices[(k + 1) % n]);
    let tri = Triangle::new(u, w, v)?;
    check_budget(rope, rope.perimeter() - u.dist(v) - v.dist(w) + u.dist(w))?;

    let before = (k + m - 1) % m;
    let after = k % m;
    let mut nbs = Vec::with_capacity(2);
    if rope.closed || k >= 2 {
        nbs.push(Neighbour { edge: (k + m - 2) % m, shared: u, far_side: Segment::new_unchecked(v, w) });
    }
    if rope.closed || k + 1 < m {
        nbs.push(Neighbour { edge: (k + 1) % m, shared: w, far_side: Segment::new_unchecked(u, v) });
    }
    triangle_rule(s, ri, &tri, &[before, after], &nbs)
}

/// Bound on how far any point of the piece travels during the step.
pub fn max_displacement(piece: &RigidPiece, rotation: Rotation, translation: Point3) -> f64 {
    translation.norm() + rotation.angle.abs() * piece.circumradius()
}

/// Rigid step: small enough that the straight-line interpolation never
/// closes the clearance gap by more than `δ/2`, and ending in a legal scene
/// (so every step starts and ends at clearance `δ`).
pub fn validate_rigid_step(s: &Scene, piece_id: &str, rotation: Rotation, translation: Point3) -> Result<(), MoveError> {
    let piece = s.piece(piece_id).ok_or_else(|| MoveError::UnknownPiece(piece_id.into()))?;
    if !piece.movable {
        return Err(MoveError::ImmovablePiece(piece_id.into()));
    }
    if !(rotation.angle.is_finite() && rotation.axis.is_finite() && translation.is_finite()) {
        return Err(MoveError::InvalidAxis);
    }
    if rotation.angle != 0.0 && (rotation.axis.norm() - 1.0).abs() > 1e-9 {
        return Err(MoveError::InvalidAxis);
    }
    let limit = s.clearance / 2.0;
    let displacement = max_displacement(piece, rotation, translation);
    if displacement > limit * (1.0 + 1e-12) {
        return Err(MoveError::StepTooLarge { displacement, limit });
    }
    let mv = Move::RigidStep { piece_id: piece_id.into(), rotation, translation };
    let next = super::apply_unchecked(s, &mv)?;
    let report = is_legal(&next);
    if let Some(v) = report.violations.first() {
        let name = if v.subject == piece_id { v.object.clone() } else { v.subject.clone() };
        return Err(blocked(name, v.value));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom3::triangle_circle;
    use crate::scenes::{build_model_a, build_model_c, ModelAParams, ModelCParams};

    fn model_a() -> Scene {
        build_model_a(ModelAParams { r: 1.5 }).unwrap()
    }

    #[test]
    fn small_apex_over_the_middle_edge_stays_inside_both_disks() {
        // The triangle (0,±1,2)-(0.3,0,2.2) crosses y = 0 on a segment from
        // the disk centre to (0.3,0,2.2): it never gets near either wire.
        let s = model_a();
        let tri = Triangle::new(Point3::new(0.0, -1.0, 2.0), Point3::new(0.0, 1.0, 2.0), Point3::new(0.3, 0.0, 2.2)).unwrap();
        let top = s.piece("lollipop").unwrap().geometry.circle.unwrap();
        assert!(triangle_circle(&tri, &top) > 0.6);
        assert!(validate_delta(&s, "rope", 1, Point3::new(0.3, 0.0, 2.2)).is_ok());
    }

    #[test]
    fn apex_beyond_the_wire_is_rejected() {
        let s = model_a();
        let err = validate_delta(&s, "rope", 1, Point3::new(1.2, 0.0, 2.2)).unwrap_err();
        assert!(matches!(&err, MoveError::Blocked { obstacle, .. } if obstacle == "lollipop.circle"), "{err}");
    }

    #[test]
    fn outward_apex_on_first_vertical_edge_is_fine() {
        let s = model_a();
        assert!(validate_delta(&s, "rope", 0, Point3::new(0.0, -1.1, 1.0)).is_ok());
    }

    #[test]
    fn collinear_apex_is_degenerate() {
        let s = model_a();
        assert_eq!(validate_delta(&s, "rope", 1, Point3::new(0.0, 3.0, 2.0)), Err(MoveError::DegenerateTriangle));
    }

    #[test]
    fn endpoints_of_open_ropes_stay() {
        let s = model_a();
        assert!(matches!(validate_inverse(&s, "rope", 0), Err(MoveError::EndpointFixed { .. })));
        assert!(matches!(validate_inverse(&s, "rope", 3), Err(MoveError::EndpointFixed { .. })));
        // Removing a corner would sweep the triangle through the pole circle.
        assert!(matches!(validate_inverse(&s, "rope", 1), Err(MoveError::Blocked { .. })));
    }

    #[test]
    fn budget_blocks_long_detours() {
        let s = build_model_c(ModelCParams { r_hoop: 1.0, tube: 0.05, rope_length: 1.0 }).unwrap();
        let rope = s.rope("rope2").unwrap();
        let e = rope.edge(0);
        let apex = e.at(0.5) + Point3::new(0.0, 0.0, -0.3);
        assert!(matches!(validate_delta(&s, "rope2", 0, apex), Err(MoveError::BudgetExceeded { .. })));
    }

    #[test]
    fn rigid_step_rules() {
        let s = model_a();
        let d = s.clearance;
        let id = Rotation::IDENTITY;
        assert!(validate_rigid_step(&s, "hoop", id, Point3::new(d / 4.0, 0.0, 0.0)).is_ok());
        assert!(matches!(
            validate_rigid_step(&s, "hoop", id, Point3::new(10.0 * d, 0.0, 0.0)),
            Err(MoveError::StepTooLarge { .. })
        ));
        assert!(matches!(validate_rigid_step(&s, "lollipop", id, Point3::ORIGIN), Err(MoveError::ImmovablePiece(_))));
    }

    #[test]
    fn end_pose_near_the_pole_names_it() {
        let mut s = model_a();
        // Park the hoop in the pole's plane, offset 1.25δ, so its lowest
        // point sits 1.25δ from the pole; a δ/2 step towards it ends at 0.75δ.
        let i = s.piece_index("hoop").unwrap();
        let delta = s.clearance;
        {
            let c = s.pieces[i].geometry.circle.as_mut().unwrap();
            c.center.y = -1.25 * delta;
        }
        assert!(is_legal(&s).legal, "{}", is_legal(&s));
        let err = validate_rigid_step(&s, "hoop", Rotation::IDENTITY, Point3::new(0.0, delta / 2.0, 0.0)).unwrap_err();
        match err {
            MoveError::Blocked { obstacle, distance } => {
                assert_eq!(obstacle, "lollipop.pole");
                assert!((distance - 0.75 * delta).abs() < 1e-12);
            }
            other => panic!("{other}"),
        }
    }
}
