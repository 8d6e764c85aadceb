//! Builders for the three canonical puzzles.
//!
//! Model A uses the coordinates of the original puzzle statement exactly.
//! Models B and C are only described by pictures, so their coordinates are
//! fixed constants chosen here; every downstream number depends on them, so
//! they must not drift.

use crate::geom3::{Circle, Plane, Point3, Segment, DEFAULT_CLEARANCE};

use super::{
    goal_reached, is_legal, Attachment, Goal, ModelTag, PieceGeometry, PieceKind, PolyRope, RigidPiece, RopeEnd,
    Scene, SceneError, SCENE_FORMAT_VERSION, TAG_HYPOTHESIS_VIOLATED, TAG_PAPER_IMPOSSIBLE,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelAParams {
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelBParams {
    pub r_left: f64,
    pub r_right: f64,
    pub r_hoop: f64,
    pub rope_slack: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelCParams {
    pub r_hoop: f64,
    pub tube: f64,
    pub rope_length: f64,
}

fn out_of_range(msg: impl Into<String>) -> SceneError {
    SceneError::ParameterOutOfRange(msg.into())
}

fn circle_piece(id: &str, movable: bool, circle: Circle) -> RigidPiece {
    RigidPiece {
        id: id.into(),
        kind: PieceKind::Circle,
        movable,
        geometry: PieceGeometry { segment: None, circle: Some(circle) },
        attachments: Vec::new(),
    }
}

fn finish(scene: Scene) -> Result<Scene, SceneError> {
    scene.check_structure()?;
    let report = is_legal(&scene);
    if !report.legal {
        return Err(SceneError::Infeasible(format!("built scene is not legal: {report}")));
    }
    Ok(scene)
}

/// Pole from the origin to `(0,0,1)` topped by the unit circle about
/// `(0,0,2)` in the plane `y = 0`; a rope pinned to `z = 0` hangs over it and
/// a hoop of radius `r` threaded on the rope must move from `y = -½` to
/// `y = +½`.
pub fn build_model_a(p: ModelAParams) -> Result<Scene, SceneError> {
    let r = p.r;
    if !(r > 0.0 && r < 2.0) {
        return Err(out_of_range(format!("Model A hoop radius must lie in (0, 2), got {r}")));
    }
    let pole = Segment::new(Point3::new(0.0, 0.0, 0.0), Point3::new(0.0, 0.0, 1.0))?;
    let top = Circle::wire(Point3::new(0.0, 0.0, 2.0), 1.0, Point3::Y)?;
    let hoop = Circle::wire(Point3::new(0.0, -0.5, 2.0), r, Point3::Y)?;
    let ends = [Point3::new(0.0, -1.0, 0.0), Point3::new(0.0, 1.0, 0.0)];
    let rope = PolyRope {
        id: "rope".into(),
        closed: false,
        pinned: ends.to_vec(),
        length_budget: None,
        vertices: vec![ends[0], Point3::new(0.0, -1.0, 2.0), Point3::new(0.0, 1.0, 2.0), ends[1]],
    };
    let lollipop = RigidPiece {
        id: "lollipop".into(),
        kind: PieceKind::Lollipop,
        movable: false,
        geometry: PieceGeometry { segment: Some(pole), circle: Some(top) },
        attachments: Vec::new(),
    };
    let mut tags = Vec::new();
    if r >= 1.0 {
        tags.push(TAG_PAPER_IMPOSSIBLE.to_string());
    }
    finish(Scene {
        version: SCENE_FORMAT_VERSION,
        model_tag: ModelTag::ModelA,
        clearance: DEFAULT_CLEARANCE,
        pieces: vec![lollipop, circle_piece("hoop", true, hoop)],
        ropes: vec![rope],
        forbidden_planes: vec![Plane { point: Point3::ORIGIN, normal: Point3::Z }],
        goal: Goal::TargetPose {
            piece: "hoop".into(),
            center: Point3::new(0.0, 0.5, 2.0),
            radius: r,
            normal: Point3::Y,
        },
        regime_tags: tags,
    })
}

/// Fixed wire hoop of radius `r_hoop` at the origin in the plane `y = 0`;
/// a rope passes once through it and is welded at its ends to the lowest
/// points of two movable circles in the planes `y = ∓d`, `d = 1 + slack`.
pub fn build_model_b(p: ModelBParams) -> Result<Scene, SceneError> {
    let ModelBParams { r_left, r_right, r_hoop, rope_slack } = p;
    if !(r_hoop > 0.0 && r_left > 0.0 && r_right > 0.0) {
        return Err(out_of_range("Model B radii must be positive"));
    }
    if !(rope_slack > 0.0 && rope_slack.is_finite()) {
        return Err(out_of_range("Model B rope slack must be positive"));
    }
    let d = 1.0 + rope_slack;
    let hoop = Circle::wire(Point3::ORIGIN, r_hoop, Point3::Y)?;
    let left = Circle::wire(Point3::new(0.0, -d, 0.0), r_left, Point3::Y)?;
    let right = Circle::wire(Point3::new(0.0, d, 0.0), r_right, Point3::Y)?;
    let start = Point3::new(0.0, -d, -r_left);
    let end = Point3::new(0.0, d, -r_right);
    let rope = PolyRope {
        id: "rope".into(),
        closed: false,
        pinned: Vec::new(),
        length_budget: None,
        vertices: vec![start, Point3::new(0.0, -d / 2.0, 0.0), Point3::new(0.0, d / 2.0, 0.0), end],
    };
    let mut left_piece = circle_piece("left", true, left);
    left_piece.attachments.push(Attachment { rope: "rope".into(), end: RopeEnd::Start, point: start });
    let mut right_piece = circle_piece("right", true, right);
    right_piece.attachments.push(Attachment { rope: "rope".into(), end: RopeEnd::End, point: end });

    let mut tags = vec![TAG_PAPER_IMPOSSIBLE.to_string()];
    if r_left < r_hoop || r_right < r_hoop {
        tags = vec![TAG_HYPOTHESIS_VIOLATED.to_string()];
    }
    finish(Scene {
        version: SCENE_FORMAT_VERSION,
        model_tag: ModelTag::ModelB,
        clearance: DEFAULT_CLEARANCE,
        pieces: vec![circle_piece("hoop", false, hoop), left_piece, right_piece],
        ropes: vec![rope],
        forbidden_planes: Vec::new(),
        goal: Goal::Separation {
            groups: [vec!["hoop".into()], vec!["left".into(), "rope".into(), "right".into()]],
        },
        regime_tags: tags,
    })
}

/// Dimensions of the Model C fixture, all derived from the hoop radius `R`,
/// the tube radius `τ` and the clearance.
#[derive(Debug, Clone, Copy)]
struct ModelCLayout {
    r: f64,
    tau: f64,
    /// Safety margin between neighbouring surfaces.
    m: f64,
    /// Radius of rope 1's loop around hoop 1's tube.
    rho: f64,
    /// Height of hoop 2's top spine point.
    h: f64,
    /// Half-width of rope 2's rectangle.
    a: f64,
    /// Gap between hoop 1's spine and hoop 2's plane.
    g: f64,
    /// Far end of rope 1, beyond rope 2.
    x_end: f64,
}

impl ModelCLayout {
    fn new(r: f64, tau: f64, clearance: f64) -> Self {
        let m = (0.2 * tau).max(10.0 * clearance);
        let rho = tau + m;
        let h = rho + tau + m;
        let a = std::f64::consts::SQRT_2 * (tau + m);
        let g = rho + tau + 3.0 * m;
        let x_end = r + g + a / std::f64::consts::SQRT_2 + m;
        ModelCLayout { r, tau, m, rho, h, a, g, x_end }
    }

    /// Rope 1: a loop in the plane `y = 0` hugging hoop 1's tube at
    /// `(R,0,0)` and running out along `x` through hoop 2's opening.
    fn rope1(&self) -> Vec<Point3> {
        let mut v = Vec::new();
        for k in 0..=8 {
            let t = std::f64::consts::FRAC_PI_2 + k as f64 * std::f64::consts::PI / 8.0;
            v.push(Point3::new(self.r + self.rho * t.cos(), 0.0, self.rho * t.sin()));
        }
        v.push(Point3::new(self.x_end, 0.0, -self.rho));
        v.push(Point3::new(self.x_end, 0.0, self.rho));
        v
    }

    /// Rope 2: a rectangle in the plane `x + y = R + g` around hoop 2's top
    /// and both strands of rope 1 (a trivial two-crossing clasp with rope 1).
    fn rope2(&self) -> Vec<Point3> {
        let c = Point3::new(self.r + self.g, 0.0, 0.0);
        let u = Point3::new(-1.0, 1.0, 0.0) / std::f64::consts::SQRT_2;
        let lo = -self.rho - self.m;
        let hi = self.h + self.tau + self.m;
        vec![
            c - u * self.a + Point3::Z * lo,
            c + u * self.a + Point3::Z * lo,
            c + u * self.a + Point3::Z * hi,
            c - u * self.a + Point3::Z * hi,
        ]
    }

    fn hoop2_center(&self) -> Point3 {
        Point3::new(self.r + self.g, 0.0, self.h - self.r)
    }
}

fn perimeter(v: &[Point3]) -> f64 {
    (0..v.len()).map(|i| v[i].dist(v[(i + 1) % v.len()])).sum()
}

/// Two solid hoops each Hopf-linked with a closed rope. Hoop 1 lies flat
/// around the origin; hoop 2 stands in the plane `x = R + g` with its top
/// just above hoop 1's rim. Rope 1 hugs hoop 1's tube and threads hoop 2;
/// rope 2 hugs hoop 2's top and encircles both strands of rope 1.
pub fn build_model_c(p: ModelCParams) -> Result<Scene, SceneError> {
    let ModelCParams { r_hoop, tube, rope_length } = p;
    if !(tube > 0.0 && tube < r_hoop && r_hoop.is_finite()) {
        return Err(out_of_range("Model C needs 0 < tube < r_hoop"));
    }
    if !(rope_length > std::f64::consts::TAU * tube && rope_length.is_finite()) {
        return Err(out_of_range("Model C rope length must exceed the tube circumference 2πτ"));
    }
    let lay = ModelCLayout::new(r_hoop, tube, DEFAULT_CLEARANCE);
    let (v1, v2) = (lay.rope1(), lay.rope2());
    let need = perimeter(&v1).max(perimeter(&v2));
    if need > rope_length {
        return Err(SceneError::Infeasible(format!(
            "the canonical tangle needs ropes of length {need:.6}, budget is {rope_length}"
        )));
    }
    let hoop1 = Circle::new(Point3::ORIGIN, r_hoop, Point3::Z, tube)?;
    let hoop2 = Circle::new(lay.hoop2_center(), r_hoop, Point3::X, tube)?;
    let rope = |id: &str, vertices| PolyRope {
        id: id.into(),
        closed: true,
        pinned: Vec::new(),
        length_budget: Some(rope_length),
        vertices,
    };
    let mut tags = Vec::new();
    if rope_length <= r_hoop {
        tags.push(TAG_PAPER_IMPOSSIBLE.to_string());
    }
    let scene = finish(Scene {
        version: SCENE_FORMAT_VERSION,
        model_tag: ModelTag::ModelC,
        clearance: DEFAULT_CLEARANCE,
        pieces: vec![circle_piece("hoop1", true, hoop1), circle_piece("hoop2", true, hoop2)],
        ropes: vec![rope("rope1", v1), rope("rope2", v2)],
        forbidden_planes: Vec::new(),
        goal: Goal::Separation {
            groups: [vec!["hoop1".into(), "rope1".into()], vec!["hoop2".into(), "rope2".into()]],
        },
        regime_tags: tags,
    })?;
    if goal_reached(&scene) {
        return Err(SceneError::Infeasible("the canonical tangle is already separated".into()));
    }
    Ok(scene)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom3::{point_circle, segment_circle};

    #[test]
    fn model_a_regimes_and_range() {
        assert!(build_model_a(ModelAParams { r: 1.5 }).unwrap().has_tag(TAG_PAPER_IMPOSSIBLE));
        assert!(build_model_a(ModelAParams { r: 1.0 }).unwrap().has_tag(TAG_PAPER_IMPOSSIBLE));
        assert!(build_model_a(ModelAParams { r: 0.5 }).unwrap().regime_tags.is_empty());
        for r in [2.5, 2.0, 0.0, -1.0, f64::NAN] {
            assert!(matches!(build_model_a(ModelAParams { r }), Err(SceneError::ParameterOutOfRange(_))));
        }
    }

    #[test]
    fn model_a_hoop_and_goal_are_mirror_images() {
        for r in [0.1, 0.5, 1.0, 1.5, 1.99] {
            let s = build_model_a(ModelAParams { r }).unwrap();
            let hoop = s.piece("hoop").unwrap().geometry.circle.unwrap();
            let Goal::TargetPose { center, radius, normal, .. } = &s.goal else { panic!() };
            assert_eq!(Point3::new(hoop.center.x, -hoop.center.y, hoop.center.z), *center);
            assert_eq!(hoop.radius, *radius);
            assert_eq!(hoop.normal, *normal);
        }
    }

    #[test]
    fn model_b_tags() {
        let b = |l, r| build_model_b(ModelBParams { r_left: l, r_right: r, r_hoop: 1.0, rope_slack: 1.0 }).unwrap();
        assert_eq!(b(1.0, 1.0).regime_tags, vec![TAG_PAPER_IMPOSSIBLE]);
        assert_eq!(b(2.0, 2.0).regime_tags, vec![TAG_PAPER_IMPOSSIBLE]);
        assert_eq!(b(0.5, 2.0).regime_tags, vec![TAG_HYPOTHESIS_VIOLATED]);
        assert!(build_model_b(ModelBParams { r_left: 1.0, r_right: 1.0, r_hoop: 1.0, rope_slack: 0.0 }).is_err());
    }

    #[test]
    fn model_c_tags_and_errors() {
        let c = |len| build_model_c(ModelCParams { r_hoop: 1.0, tube: 0.05, rope_length: len });
        assert!(c(1.0).unwrap().has_tag(TAG_PAPER_IMPOSSIBLE));
        assert!(c(3.0).unwrap().regime_tags.is_empty());
        assert!(matches!(c(0.5), Err(SceneError::Infeasible(_))));
        assert!(matches!(c(0.3), Err(SceneError::ParameterOutOfRange(_))));
        assert!(build_model_c(ModelCParams { r_hoop: 1.0, tube: 1.0, rope_length: 10.0 }).is_err());
    }

    #[test]
    fn model_c_surfaces_keep_the_margin() {
        let s = build_model_c(ModelCParams { r_hoop: 1.0, tube: 0.05, rope_length: 1.0 }).unwrap();
        let lay = ModelCLayout::new(1.0, 0.05, DEFAULT_CLEARANCE);
        let h2 = s.piece("hoop2").unwrap().geometry.circle.unwrap();
        // Rope 2 passes over hoop 2's top exactly one margin above the tube.
        let top = s.rope("rope2").unwrap().edge(2);
        assert!((segment_circle(&top, &h2) - lay.tau - lay.m).abs() < 1e-9);
        // Rope 1's loop is one margin off hoop 1's tube at its vertices.
        let h1 = s.piece("hoop1").unwrap().geometry.circle.unwrap();
        for v in &s.rope("rope1").unwrap().vertices[..9] {
            assert!((point_circle(*v, &h1) - lay.rho).abs() < 1e-12);
        }
    }
}
