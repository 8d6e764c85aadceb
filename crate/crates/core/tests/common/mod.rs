//! Independent oracles shared by the property tests and the acceptance suite.
#![allow(dead_code)]

use std::collections::VecDeque;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use untangle::geom3::{Point2, Point3, SideLabel};
use untangle::moves::{validate_delta, validate_rigid_step, Rotation};
use untangle::scenes::{piece_min_clearance, Scene};

pub fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

/// Signed area test: positive when `q` is left of `a → b`.
pub fn side_of(a: Point2, b: Point2, q: Point2) -> f64 {
    b.sub(a).cross(q.sub(a))
}

pub fn label_of(a: Point2, b: Point2, q: Point2) -> SideLabel {
    SideLabel::from_sign(side_of(a, b, q))
}

/// Fraction of `n` evenly spaced circle points strictly on `side` of the
/// line through `a → b`.
pub fn arc_fraction(center: Point2, r: f64, a: Point2, b: Point2, side: SideLabel, n: usize) -> f64 {
    let hits = (0..n)
        .filter(|i| {
            let t = TAU * *i as f64 / n as f64;
            let s = side_of(a, b, p(center.x + r * t.cos(), center.y + r * t.sin()));
            s != 0.0 && SideLabel::from_sign(s) == side
        })
        .count();
    hits as f64 / n as f64
}

/// A random chord configuration satisfying the minor-side preconditions
/// by construction: radius in [1, 3], segment length at most 1 and long
/// enough to stick out of the circle at both ends.
pub fn random_chord(rng: &mut ChaCha8Rng) -> (Point2, f64, Point2, Point2) {
    let center = p(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
    let r: f64 = rng.gen_range(1.0..3.0);
    let len: f64 = rng.gen_range(0.05..1.0);
    // Distance of the line from the centre: the chord 2√(r²−h²) must be
    // shorter than the segment.
    let h_min = (r * r - len * len / 4.0).sqrt();
    let h = h_min + rng.gen_range(0.02..0.98) * (r - h_min);
    let half_chord = (r * r - h * h).sqrt();
    let slack = len / 2.0 - half_chord;
    let shift = rng.gen_range(-0.9..0.9) * slack;
    let phi = rng.gen_range(0.0..TAU);
    let (n, t) = (p(phi.cos(), phi.sin()), p(-phi.sin(), phi.cos()));
    let mid = center.add(n.scale(h)).add(t.scale(shift));
    let (mut a, mut b) = (mid.sub(t.scale(len / 2.0)), mid.add(t.scale(len / 2.0)));
    if rng.gen_bool(0.5) {
        std::mem::swap(&mut a, &mut b);
    }
    (center, r, a, b)
}

/// Brute-force region oracle for the lollipop (pole `(0,0)–(0,1)` under the
/// unit circle about `(0,2)`): the lollipop is sampled as a graph, edges
/// crossed by the segment are removed, and the side holding the pieces cut
/// away from the base's component is returned. With no cut, the side not
/// containing `(0,0)`. `None` when cut pieces lie on both sides.
pub fn lollipop_region_oracle(a: Point2, b: Point2) -> Option<SideLabel> {
    const POLE: usize = 2_000;
    const RING: usize = 8_000;
    let mut nodes: Vec<Point2> = (0..=POLE).map(|i| p(0.0, i as f64 / POLE as f64)).collect();
    let junction = POLE;
    // Ring nodes start at the bottom of the circle, which is the junction.
    let ring_start = nodes.len();
    for k in 1..RING {
        let t = -TAU / 4.0 + TAU * k as f64 / RING as f64;
        nodes.push(p(t.cos(), 2.0 + t.sin()));
    }
    let mut edges: Vec<(usize, usize)> = (0..POLE).map(|i| (i, i + 1)).collect();
    let ring: Vec<usize> = std::iter::once(junction).chain(ring_start..nodes.len()).collect();
    for k in 0..ring.len() {
        edges.push((ring[k], ring[(k + 1) % ring.len()]));
    }
    let crosses = |u: Point2, v: Point2| {
        let (s1, s2) = (side_of(a, b, u), side_of(a, b, v));
        let (s3, s4) = (side_of(u, v, a), side_of(u, v, b));
        s1 * s2 < 0.0 && s3 * s4 < 0.0
    };
    let mut adj = vec![Vec::new(); nodes.len()];
    let mut cut = Vec::new();
    for &(u, v) in &edges {
        if crosses(nodes[u], nodes[v]) {
            cut.push((u, v));
        } else {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut reach = vec![false; nodes.len()];
    let mut queue = VecDeque::from([0usize]);
    reach[0] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !reach[v] {
                reach[v] = true;
                queue.push_back(v);
            }
        }
    }
    // The freed pieces are seen where a cut edge leaves the base's component.
    let freed: Vec<SideLabel> = cut
        .iter()
        .filter(|(u, v)| reach[*u] != reach[*v])
        .map(|&(u, v)| label_of(a, b, nodes[if reach[u] { v } else { u }]))
        .collect();
    match freed.first() {
        None => Some(label_of(a, b, p(0.0, 0.0)).flip()),
        Some(first) => freed.iter().all(|l| l == first).then_some(*first),
    }
}

/// Random walk of a segment's endpoints with steps of at most `1e-3`,
/// kept while the configuration stays valid with a margin larger than a
/// step, so consecutive samples belong to one continuous path. (A larger
/// epsilon loosens the length bound, so validity also requires `EPS`.)
pub fn walk(rng: &mut ChaCha8Rng, mut a: Point2, mut b: Point2, steps: usize, valid: impl Fn(Point2, Point2) -> bool) -> Vec<(Point2, Point2)> {
    let mut path = vec![(a, b)];
    let jitter = |rng: &mut ChaCha8Rng| p(rng.gen_range(-3.5e-4..3.5e-4), rng.gen_range(-3.5e-4..3.5e-4));
    let drift = (jitter(rng), jitter(rng));
    for _ in 0..steps {
        let (na, nb) = (a.add(drift.0).add(jitter(rng)), b.add(drift.1).add(jitter(rng)));
        if !valid(na, nb) {
            break;
        }
        (a, b) = (na, nb);
        path.push((a, b));
    }
    path
}

pub fn random_lollipop_segment(rng: &mut ChaCha8Rng) -> (Point2, Point2) {
    let mut q = || p(rng.gen_range(-2.5..2.5), rng.gen_range(-1.5..4.5));
    (q(), q())
}

/// A random small rigid step of a movable piece, scaled to the legal size.
pub fn random_rigid_step(s: &Scene, rng: &mut ChaCha8Rng) -> (String, Rotation, Point3) {
    let movable: Vec<_> = s.pieces.iter().filter(|p| p.movable).collect();
    let piece = movable[rng.gen_range(0..movable.len())];
    let axis = loop {
        let v = Point3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if let Some(u) = v.normalized() {
            break u;
        }
    };
    let dir = Point3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let budget = s.clearance / 2.0 * rng.gen_range(0.2..1.0);
    // Split the displacement budget between turning and sliding.
    let share: f64 = rng.gen_range(0.0..1.0);
    let angle = share * budget / piece.circumradius() * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let translation = dir * ((1.0 - share) * budget / dir.norm().max(1e-12));
    (piece.id.clone(), Rotation { axis, angle }, translation)
}

/// Smallest clearance of the moving piece at `samples + 1` evenly spaced
/// instants of the straight-line interpolation of the step.
pub fn dense_min_clearance(s: &Scene, piece_id: &str, rot: Rotation, t: Point3, samples: usize) -> f64 {
    let idx = s.piece_index(piece_id).unwrap();
    let mut scene = s.clone();
    let mut best = f64::INFINITY;
    for k in 0..=samples {
        let f = k as f64 / samples as f64;
        scene.pieces[idx] = s.pieces[idx].moved(rot.axis, rot.angle * f, t * f);
        best = best.min(piece_min_clearance(&scene, idx));
    }
    best
}

/// Draws random rigid steps until one is accepted.
pub fn accepted_rigid_step(s: &Scene, rng: &mut ChaCha8Rng) -> (String, Rotation, Point3) {
    loop {
        let (id, rot, t) = random_rigid_step(s, rng);
        if validate_rigid_step(s, &id, rot, t).is_ok() {
            return (id, rot, t);
        }
    }
}

/// `steps` uniformly drawn valid moves from `s` (fewer if it gets stuck).
pub fn random_walk(s: &Scene, seed: u64, steps: usize) -> Scene {
    use untangle::moves::{apply_move, validate_move, CandidateSpace, Discretization};
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let disc = Discretization::default();
    let mut cur = s.clone();
    for _ in 0..steps {
        let space = CandidateSpace::new(&cur, &disc);
        let found = (0..256).find_map(|_| {
            let m = space.get(rng.gen_range(0..space.len())).unwrap();
            validate_move(&cur, &m).is_ok().then_some(m)
        });
        match found {
            Some(m) => cur = apply_move(&cur, &m).unwrap(),
            None => break,
        }
    }
    cur
}

/// A random valid Δ-move: edge and apex drawn until the validator accepts.
pub fn random_delta(s: &Scene, rng: &mut ChaCha8Rng) -> (String, usize, Point3) {
    loop {
        let rope = &s.ropes[rng.gen_range(0..s.ropes.len())];
        let edge = rng.gen_range(0..rope.edge_count());
        let e = rope.edge(edge);
        let r = 0.5 * e.length().min(1.0);
        let apex = e.at(0.5) + Point3::new(rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r));
        if validate_delta(s, &rope.id, edge, apex).is_ok() {
            return (rope.id.clone(), edge, apex);
        }
    }
}

/// Model A at `r = 1.5` with the hoop slid sideways until its wire is
/// `1.3e-3` from the rope, just above the clearance.
pub fn model_a_near_contact() -> Scene {
    let mut s = untangle::scenes::build_model_a(untangle::scenes::ModelAParams { r: 1.5 }).unwrap();
    let hoop = s.pieces.iter_mut().find(|p| p.id == "hoop").unwrap();
    hoop.geometry.circle.as_mut().unwrap().center = Point3::new(1.5 - 1.3e-3, -0.5, 2.0);
    assert!(untangle::scenes::is_legal(&s).legal);
    s
}
