//! The only ways a scene changes: Δ-moves and their inverses on ropes, and
//! small rigid steps of movable pieces.
//!
//! Every function here is pure; [`apply_move`] validates, builds a fresh
//! scene and refuses to return an illegal one.

mod enumerate;
mod validate;

pub use enumerate::{enumerate_candidates, enumerate_moves, CandidateSpace, Discretization};
pub use validate::{max_displacement, validate_delta, validate_inverse, validate_move, validate_rigid_step};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom3::{GeomError, Point3};
use crate::json;
use crate::scenes::{is_legal, RopeEnd, Scene};

pub const MOVE_SCRIPT_VERSION: u32 = 1;

/// Axis-angle rotation about a piece's pivot; `angle` in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub axis: Point3,
    pub angle: f64,
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation { axis: Point3::Z, angle: 0.0 };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Move {
    /// Replace edge `edge_index` (from vertex `i` to `i+1`) by the two
    /// edges through `apex`.
    DeltaMove { rope_id: String, edge_index: usize, apex: Point3 },
    /// Replace the two edges at `vertex_index` by the chord between its
    /// neighbours.
    InverseDelta { rope_id: String, vertex_index: usize },
    RigidStep { piece_id: String, rotation: Rotation, translation: Point3 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MoveError {
    #[error("unknown rope {0}")]
    UnknownRope(String),
    #[error("unknown piece {0}")]
    UnknownPiece(String),
    #[error("index {index} out of range for rope {rope}")]
    IndexOutOfRange { rope: String, index: usize },
    #[error("degenerate triangle")]
    DegenerateTriangle,
    #[error("pinned or welded endpoint {index} of rope {rope} cannot be removed")]
    EndpointFixed { rope: String, index: usize },
    #[error("rope {0} has too few vertices for an inverse Δ-move")]
    TooFewVertices(String),
    #[error("piece {0} is not movable")]
    ImmovablePiece(String),
    #[error("rotation axis must be a unit vector")]
    InvalidAxis,
    #[error("step too large: displacement {displacement:.3e} exceeds {limit:.3e}")]
    StepTooLarge { displacement: f64, limit: f64 },
    #[error("blocked by {obstacle} (distance {distance:.3e})")]
    Blocked { obstacle: String, distance: f64 },
    #[error("rope {rope} would have perimeter {perimeter:.9} over its budget {budget}")]
    BudgetExceeded { rope: String, perimeter: f64, budget: f64 },
    #[error("resulting scene is illegal: {0}")]
    IllegalResult(String),
}

impl From<GeomError> for MoveError {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::DegenerateTriangle | GeomError::DegenerateSegment(..) => MoveError::DegenerateTriangle,
            other => MoveError::IllegalResult(other.to_string()),
        }
    }
}

/// Builds the successor without validation.
pub(crate) fn apply_unchecked(s: &Scene, m: &Move) -> Result<Scene, MoveError> {
    let mut out = s.clone();
    match m {
        Move::DeltaMove { rope_id, edge_index, apex } => {
            let r = s.rope_index(rope_id).ok_or_else(|| MoveError::UnknownRope(rope_id.clone()))?;
            out.ropes[r].vertices.insert(edge_index + 1, *apex);
        }
        Move::InverseDelta { rope_id, vertex_index } => {
            let r = s.rope_index(rope_id).ok_or_else(|| MoveError::UnknownRope(rope_id.clone()))?;
            out.ropes[r].vertices.remove(*vertex_index);
        }
        Move::RigidStep { piece_id, rotation, translation } => {
            let i = s.piece_index(piece_id).ok_or_else(|| MoveError::UnknownPiece(piece_id.clone()))?;
            let moved = s.pieces[i].moved(rotation.axis, rotation.angle, *translation);
            for a in &moved.attachments {
                if let Some(r) = out.rope_index(&a.rope) {
                    let v = &mut out.ropes[r].vertices;
                    let k = match a.end {
                        RopeEnd::Start => 0,
                        RopeEnd::End => v.len() - 1,
                    };
                    v[k] = a.point;
                }
            }
            out.pieces[i] = moved;
        }
    }
    Ok(out)
}

/// Validates `m` against `s` and returns the successor scene, which is
/// guaranteed legal.
pub fn apply_move(s: &Scene, m: &Move) -> Result<Scene, MoveError> {
    validate_move(s, m)?;
    let next = apply_unchecked(s, m)?;
    if !matches!(m, Move::RigidStep { .. }) {
        // Rigid steps already audited the full successor.
        let report = is_legal(&next);
        if !report.legal {
            return Err(MoveError::IllegalResult(report.to_string()));
        }
    }
    Ok(next)
}

/// A solution certificate: moves to replay from the scene with this hash.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveScript {
    pub version: u32,
    pub scene_hash: String,
    pub moves: Vec<Move>,
}

impl MoveScript {
    pub fn new(scene: &Scene, moves: Vec<Move>) -> Self {
        MoveScript { version: MOVE_SCRIPT_VERSION, scene_hash: scene.content_hash(), moves }
    }

    pub fn to_json(&self) -> String {
        json::to_canonical_string(self)
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenes::{build_model_a, build_model_b, ModelAParams, ModelBParams};

    fn model_a() -> Scene {
        build_model_a(ModelAParams { r: 1.5 }).unwrap()
    }

    #[test]
    fn delta_then_inverse_is_identity() {
        let s = model_a();
        let m = Move::DeltaMove { rope_id: "rope".into(), edge_index: 0, apex: Point3::new(0.1, -1.0, 1.0) };
        let t = apply_move(&s, &m).unwrap();
        assert_eq!(t.ropes[0].vertices.len(), 5);
        let back = apply_move(&t, &Move::InverseDelta { rope_id: "rope".into(), vertex_index: 1 }).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn rigid_quarter_step_moves_the_hoop() {
        let s = model_a();
        let d = s.clearance / 4.0;
        let m = Move::RigidStep {
            piece_id: "hoop".into(),
            rotation: Rotation::IDENTITY,
            translation: Point3::new(0.0, d, 0.0),
        };
        let t = apply_move(&s, &m).unwrap();
        let c = t.piece("hoop").unwrap().geometry.circle.unwrap();
        assert_eq!(c.center.y, -0.5 + d);
    }

    #[test]
    fn welded_vertices_follow_their_circle() {
        let s = build_model_b(ModelBParams { r_left: 1.0, r_right: 1.0, r_hoop: 1.0, rope_slack: 0.5 }).unwrap();
        let t = Point3::new(0.0, 0.0, 4e-4);
        let m = Move::RigidStep { piece_id: "left".into(), rotation: Rotation::IDENTITY, translation: t };
        let next = apply_move(&s, &m).unwrap();
        assert_eq!(next.ropes[0].vertices[0], s.ropes[0].vertices[0] + t);
        assert_eq!(next.piece("left").unwrap().attachments[0].point, next.ropes[0].vertices[0]);
    }

    #[test]
    fn script_json_round_trip() {
        let s = model_a();
        let script = MoveScript::new(
            &s,
            vec![
                Move::DeltaMove { rope_id: "rope".into(), edge_index: 1, apex: Point3::new(0.0, 0.0, 2.3) },
                Move::RigidStep {
                    piece_id: "hoop".into(),
                    rotation: Rotation { axis: Point3::X, angle: 1e-4 },
                    translation: Point3::ORIGIN,
                },
            ],
        );
        let text = script.to_json();
        assert!(text.contains("\"type\":\"DeltaMove\""));
        assert!(text.contains("\"rotation\":{\"axis\":["));
        assert_eq!(MoveScript::from_json(&text).unwrap(), script);
    }
}
