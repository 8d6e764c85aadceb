mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use untangle::geom3::Point3;
use untangle::moves::{apply_move, Move};
use untangle::scenes::{build_model_a, build_model_b, build_model_c, ModelAParams, ModelBParams, ModelCParams, Scene};
use untangle::search::{fuzz, Audit, FuzzConfig};

fn scenes() -> Vec<Scene> {
    vec![
        build_model_a(ModelAParams { r: 1.5 }).unwrap(),
        build_model_b(ModelBParams { r_left: 1.0, r_right: 1.0, r_hoop: 1.0, rope_slack: 1.0 }).unwrap(),
        build_model_c(ModelCParams { r_hoop: 1.0, tube: 0.05, rope_length: 1.0 }).unwrap(),
        model_a_near_contact(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn delta_then_inverse_is_the_identity(seed in any::<u64>(), which in 0usize..4) {
        let s = &scenes()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (rope_id, edge_index, apex) = random_delta(s, &mut rng);
        let there = apply_move(s, &Move::DeltaMove { rope_id: rope_id.clone(), edge_index, apex }).unwrap();
        let back = apply_move(&there, &Move::InverseDelta { rope_id, vertex_index: edge_index + 1 }).unwrap();
        prop_assert_eq!(&back, s);
    }

    #[test]
    fn accepted_rigid_steps_keep_half_the_clearance(seed in any::<u64>(), which in 0usize..4) {
        let s = &scenes()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (id, rot, t) = accepted_rigid_step(s, &mut rng);
        let least = dense_min_clearance(s, &id, rot, t, 200);
        prop_assert!(least >= s.clearance / 2.0 - 1e-9, "{id}: {least}");
    }
}

#[test]
fn near_contact_steps_get_close() {
    // Sliding further towards the rope is accepted only while it keeps the
    // clearance at the end, and the dense check then sees the gap shrink.
    let s = model_a_near_contact();
    let toward = Point3::new(2e-4, 0.0, 0.0);
    let rot = untangle::moves::Rotation::IDENTITY;
    assert!(untangle::moves::validate_rigid_step(&s, "hoop", rot, toward).is_ok());
    let least = dense_min_clearance(&s, "hoop", rot, toward, 100);
    assert!((least - 1.1e-3).abs() < 1e-9, "{least}");
    assert!(untangle::moves::validate_rigid_step(&s, "hoop", rot, toward * 2.0).is_err());
}

#[test]
fn fuzz_trajectories_stay_legal() {
    for (k, s) in scenes().iter().enumerate() {
        let r = fuzz(s, k as u64, 150, &[Audit::Legality, Audit::Budget], &FuzzConfig::default()).unwrap();
        assert!(!r.violated(), "scene {k}");
        assert_eq!(r.steps_applied, 150);
    }
}
