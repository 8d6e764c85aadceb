use serde::{Deserialize, Serialize};

use crate::geom3::Point3;
use crate::par::Exec;
use crate::scenes::Scene;

use super::{validate_move, Move, Rotation};

/// Resolution of the move set offered to search and fuzzing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discretization {
    /// Spacing of the apex grid around each edge midpoint.
    pub apex_pitch: f64,
    /// Apex candidates lie within this distance of the edge midpoint.
    pub apex_radius: f64,
    /// Translation lengths, as fractions of the clearance; each is tried
    /// along `±x, ±y, ±z`.
    pub translation_steps: Vec<f64>,
    /// Rotations about `±x, ±y, ±z` move the farthest point of the piece by
    /// this fraction of the clearance.
    pub rotation_step: f64,
}

impl Default for Discretization {
    fn default() -> Self {
        Discretization { apex_pitch: 0.1, apex_radius: 0.5, translation_steps: vec![0.5, 0.25], rotation_step: 0.5 }
    }
}

impl Discretization {
    /// Integer grid offsets inside the apex ball, in lexicographic order.
    fn apex_offsets(&self) -> Vec<Point3> {
        if !(self.apex_pitch > 0.0) || !(self.apex_radius > 0.0) {
            return Vec::new();
        }
        let k = (self.apex_radius / self.apex_pitch + 1e-9).floor() as i64;
        let r2 = self.apex_radius * self.apex_radius * (1.0 + 1e-12);
        let mut out = Vec::new();
        for i in -k..=k {
            for j in -k..=k {
                for l in -k..=k {
                    if i == 0 && j == 0 && l == 0 {
                        continue;
                    }
                    let p = Point3::new(i as f64, j as f64, l as f64) * self.apex_pitch;
                    if p.norm2() <= r2 {
                        out.push(p);
                    }
                }
            }
        }
        out
    }
}

const AXES: [Point3; 6] = [
    Point3::X,
    Point3::new(-1.0, 0.0, 0.0),
    Point3::Y,
    Point3::new(0.0, -1.0, 0.0),
    Point3::Z,
    Point3::new(0.0, 0.0, -1.0),
];

/// The candidate moves of one scene, indexable without materializing them:
/// ropes by id (Δ-moves by edge then apex, then inverse moves by vertex),
/// then movable pieces by id (translations, then rotations).
pub struct CandidateSpace<'a> {
    scene: &'a Scene,
    disc: &'a Discretization,
    offsets: Vec<Point3>,
    /// (rope index, Δ count, first interior vertex, inverse count), sorted by id.
    ropes: Vec<(usize, usize, usize, usize)>,
    /// (piece index, rotation count), sorted by id.
    pieces: Vec<(usize, usize)>,
    len: usize,
}

impl<'a> CandidateSpace<'a> {
    pub fn new(scene: &'a Scene, disc: &'a Discretization) -> Self {
        let offsets = disc.apex_offsets();
        let mut ropes: Vec<_> = (0..scene.ropes.len())
            .map(|i| {
                let r = &scene.ropes[i];
                let n = r.vertices.len();
                let (first, count) = if r.closed { (0, n) } else { (1, n.saturating_sub(2)) };
                (i, r.edge_count() * offsets.len(), first, count)
            })
            .collect();
        ropes.sort_by(|a, b| scene.ropes[a.0].id.cmp(&scene.ropes[b.0].id));
        let mut pieces: Vec<_> = (0..scene.pieces.len())
            .filter(|&i| scene.pieces[i].movable)
            .map(|i| {
                let rot = scene.pieces[i].circumradius() > 0.0 && disc.rotation_step > 0.0;
                (i, if rot { AXES.len() } else { 0 })
            })
            .collect();
        pieces.sort_by(|a, b| scene.pieces[a.0].id.cmp(&scene.pieces[b.0].id));
        let per_piece = disc.translation_steps.len() * AXES.len();
        let len = ropes.iter().map(|r| r.1 + r.3).sum::<usize>() + pieces.iter().map(|p| per_piece + p.1).sum::<usize>();
        CandidateSpace { scene, disc, offsets, ropes, pieces, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The `k`-th candidate in canonical order.
    pub fn get(&self, mut k: usize) -> Option<Move> {
        for &(ri, deltas, first, inverses) in &self.ropes {
            let rope = &self.scene.ropes[ri];
            if k < deltas {
                let (edge, off) = (k / self.offsets.len(), k % self.offsets.len());
                let apex = rope.edge(edge).at(0.5) + self.offsets[off];
                return Some(Move::DeltaMove { rope_id: rope.id.clone(), edge_index: edge, apex });
            }
            k -= deltas;
            if k < inverses {
                return Some(Move::InverseDelta { rope_id: rope.id.clone(), vertex_index: first + k });
            }
            k -= inverses;
        }
        let per_piece = self.disc.translation_steps.len() * AXES.len();
        for &(pi, rotations) in &self.pieces {
            let piece = &self.scene.pieces[pi];
            if k < per_piece {
                let len = self.disc.translation_steps[k / AXES.len()];
                return Some(Move::RigidStep {
                    piece_id: piece.id.clone(),
                    rotation: Rotation::IDENTITY,
                    translation: AXES[k % AXES.len()] * (len * self.scene.clearance),
                });
            }
            k -= per_piece;
            if k < rotations {
                let angle = self.disc.rotation_step * self.scene.clearance / piece.circumradius();
                return Some(Move::RigidStep {
                    piece_id: piece.id.clone(),
                    rotation: Rotation { axis: AXES[k], angle },
                    translation: Point3::ORIGIN,
                });
            }
            k -= rotations;
        }
        None
    }
}

/// Every candidate move before validation, in canonical order (see
/// [`CandidateSpace`]).
pub fn enumerate_candidates(s: &Scene, disc: &Discretization) -> Vec<Move> {
    let space = CandidateSpace::new(s, disc);
    (0..space.len()).filter_map(|k| space.get(k)).collect()
}

/// The validated subset of [`enumerate_candidates`], same order.
pub fn enumerate_moves(s: &Scene, disc: &Discretization, exec: Exec) -> Vec<Move> {
    let candidates = enumerate_candidates(s, disc);
    exec.filter_map(&candidates, |m| validate_move(s, m).is_ok().then(|| m.clone()))
}
