//! Writes the Model A (r = 0.5) scene and a solution script into
//! `fixtures/`. The hoop is small enough to pass inside the lollipop's
//! circle, so it simply slides along `+y` in half-clearance steps.

use std::path::Path;

use untangle::geom3::Point3;
use untangle::moves::{apply_move, Move, MoveScript, Rotation};
use untangle::scenes::{build_model_a, goal_reached, ModelAParams};

fn main() {
    let scene = build_model_a(ModelAParams { r: 0.5 }).expect("scene");
    let step = scene.clearance / 2.0;
    let n = (1.0 / step).round() as usize;
    let mv = Move::RigidStep { piece_id: "hoop".into(), rotation: Rotation::IDENTITY, translation: Point3::new(0.0, step, 0.0) };
    let mut cur = scene.clone();
    for k in 0..n {
        cur = apply_move(&cur, &mv).unwrap_or_else(|e| panic!("step {k}: {e}"));
    }
    assert!(goal_reached(&cur), "hoop did not reach the goal pose");
    let script = MoveScript::new(&scene, vec![mv; n]);
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir).expect("fixtures dir");
    std::fs::write(dir.join("modelA_r0.5.json"), scene.to_json()).expect("write scene");
    std::fs::write(dir.join("modelA_r0.5_solution.json"), script.to_json()).expect("write script");
    println!("{n} moves, scene {}", scene.content_hash());
}
