//! Obstruction invariants: free-group crossing words through flat disks,
//! signed disk-crossing indices, and link-diagram invariants (linking
//! numbers, Fox 3-colourings, band sums).
//!
//! Conventions: ropes are oriented by vertex order; a disk is crossed
//! positively along its circle's normal; letter `a` is the hoop's disk and
//! `b` the lollipop circle's; a diagram crossing is positive when the over
//! strand turns counterclockwise onto the under strand as seen by a viewer
//! looking against the projection direction.

pub mod diagram;
pub mod fixtures;
mod index;
mod word;

pub use diagram::{
    band_sum, band_sum_curves, linking_number, project_diagram, scene_curves, scene_drawing_curves, tricolor_count,
    tricolor_count_brute_force, tricolor_nullity, Arc, BandLayer, BandSite, Crossing, CrossingSite, Curve3, Diagram, Direction,
    Projected, ProjectionOptions,
};
pub use index::crossing_index;
pub use word::{f2_word, Letter, WordF2};

use thiserror::Error;

use crate::geom3::{Circle, Point3};
use crate::scenes::{PolyRope, Scene};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvariantError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("rope {rope} edge {edge} passes within epsilon of a disk boundary")]
    DegenerateCrossing { rope: String, edge: usize },
    #[error("disks are not mutually clear (gap {0:.3e}); the word is undefined here")]
    DisksNotClear(f64),
    #[error("no generic projection: {0}")]
    GenericityFailure(String),
    #[error("curves {a} and {b} are {distance:.3e} apart, too close to project")]
    CurvesTooClose { a: String, b: String, distance: f64 },
    #[error("unknown component {0}")]
    UnknownComponent(String),
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),
    #[error("illegal band site: {0}")]
    IllegalSite(String),
    #[error("scene has no {0}")]
    Missing(String),
}

fn rope<'a>(s: &'a Scene, id: &str) -> Result<&'a PolyRope, InvariantError> {
    s.rope(id).ok_or_else(|| InvariantError::Missing(format!("rope {id:?}")))
}

fn circle(s: &Scene, id: &str) -> Result<Circle, InvariantError> {
    s.piece(id)
        .and_then(|p| p.geometry.circle)
        .ok_or_else(|| InvariantError::Missing(format!("circle piece {id:?}")))
}

/// Model A word: the rope against the hoop's disk (`a`) and the lollipop
/// circle's disk (`b`), defined while the hoop's disk clears the pole.
pub fn model_a_word(s: &Scene) -> Result<WordF2, InvariantError> {
    let lollipop = s.piece("lollipop").ok_or_else(|| InvariantError::Missing("piece \"lollipop\"".into()))?;
    let top = circle(s, "lollipop")?;
    let pole: Vec<_> = lollipop.geometry.segment.into_iter().collect();
    f2_word(rope(s, "rope")?, &circle(s, "hoop")?.disk(), &top.disk(), &pole, s.clearance)
}

/// Model B index: signed passes of the rope through the fixed hoop's disk.
pub fn model_b_index(s: &Scene) -> Result<i64, InvariantError> {
    crossing_index(rope(s, "rope")?, &circle(s, "hoop")?.disk())
}

/// Polygon resolution for circles in scene diagrams.
pub const CIRCLE_SIDES: usize = 64;

/// Diagram of a scene's closed curves (closed ropes and circle spines).
pub fn scene_diagram(s: &Scene, direction: Direction) -> Result<Diagram, InvariantError> {
    project_diagram(&scene_curves(s, CIRCLE_SIDES), direction, &ProjectionOptions::default())
}

/// Linking numbers of every pair of components, in component order.
pub fn linking_matrix(d: &Diagram) -> Result<Vec<(String, String, i64)>, InvariantError> {
    let mut out = Vec::new();
    for (i, a) in d.components.iter().enumerate() {
        for b in &d.components[i + 1..] {
            out.push((a.clone(), b.clone(), linking_number(d, a, b)?));
        }
    }
    Ok(out)
}

/// Where the two ropes of the Model C tangle are joined for the auxiliary
/// link: a short straight band from the far tip of `rope1` (edge 9) to the
/// near upright of `rope2` (edge 1). It passes through hoop 2's opening, so
/// the joined rope links hoop 1 once and hoop 2 zero times.
pub fn model_c_band_site() -> BandSite {
    BandSite::straight(MODEL_C_BAND_EDGES.0, MODEL_C_BAND_EDGES.1)
}

const MODEL_C_BAND_EDGES: (usize, usize) = (9, 1);

/// The Model C auxiliary link: the scene's curves with the two ropes joined
/// by the canonical band, projected along `direction`.
pub fn model_c_band_diagram(s: &Scene, direction: Direction) -> Result<Diagram, InvariantError> {
    let curves = scene_curves(s, CIRCLE_SIDES);
    let joined = band_sum_curves(&curves, "rope1", "rope2", &model_c_band_site(), None)?;
    project_diagram(&joined, direction, &ProjectionOptions::default())
}

/// A fixed generic direction used when none is given.
pub const DEFAULT_DIRECTION: Point3 = fixtures::VIEW;
