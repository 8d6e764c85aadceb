//! Small spatial links with known invariants, shared by tests, benches and
//! the command line.

use crate::geom3::{Circle, Point3};

use super::diagram::{band_sum, project_diagram, BandLayer, BandSite, Curve3, Diagram, Direction};
use super::InvariantError;

/// Round circle as a regular `n`-gon, counterclockwise about `normal`.
pub fn ring(id: &str, center: Point3, radius: f64, normal: Point3, n: usize) -> Curve3 {
    let c = Circle::wire(center, radius, normal).expect("valid ring");
    Curve3 { id: id.into(), closed: true, points: c.polygon(n) }
}

/// Trefoil `(sin t + 2 sin 2t, cos t − 2 cos 2t, −sin 3t)`, shifted by `offset`.
pub fn trefoil(id: &str, offset: Point3, n: usize) -> Curve3 {
    let points = (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64;
            offset + Point3::new(t.sin() + 2.0 * (2.0 * t).sin(), t.cos() - 2.0 * (2.0 * t).cos(), -(3.0 * t).sin())
        })
        .collect();
    Curve3 { id: id.into(), closed: true, points }
}

/// Unit circles in orthogonal planes with centres one apart: each passes
/// through the other's centre.
pub fn hopf_pair() -> Vec<Curve3> {
    vec![
        ring("x", Point3::ORIGIN, 1.0, Point3::Z, 64),
        ring("y", Point3::new(1.0, 0.0, 0.0), 1.0, Point3::Y, 64),
    ]
}

/// The pair of edges, one from each curve, with the nearest midpoints.
pub fn facing_edges(a: &Curve3, b: &Curve3) -> (usize, usize) {
    let mut best = (0, 0, f64::INFINITY);
    for i in 0..a.edge_count() {
        for j in 0..b.edge_count() {
            let d = a.edge(i).at(0.5).dist(b.edge(j).at(0.5));
            if d < best.2 {
                best = (i, j, d);
            }
        }
    }
    (best.0, best.1)
}

/// A slightly tilted view direction, generic for every fixture here.
pub const VIEW: Point3 = Point3::new(0.013, 0.021, 1.0);

fn project(curves: &[Curve3]) -> Result<Diagram, InvariantError> {
    project_diagram(curves, Direction::Fixed(VIEW), &Default::default())
}

fn planar_band(d: &Diagram, a: &str, b: &str) -> Result<Diagram, InvariantError> {
    let src = d.source.as_ref().expect("projected");
    let ca = src.curves.iter().find(|c| c.id == a).unwrap();
    let cb = src.curves.iter().find(|c| c.id == b).unwrap();
    let (i, j) = facing_edges(ca, cb);
    band_sum(d, a, b, &BandSite { layer: BandLayer::Planar, ..BandSite::straight(i, j) })
}

/// Named diagrams with at most seven crossings, used to cross-check the
/// colouring count against brute force.
pub fn small_diagrams() -> Result<Vec<(String, Diagram)>, InvariantError> {
    let unknot = ring("u", Point3::ORIGIN, 1.0, Point3::Z, 32);
    let far_unknot = ring("u", Point3::new(7.0, 0.0, 0.0), 1.0, Point3::Z, 32);
    let tref = trefoil("k", Point3::ORIGIN, 96);
    let mut out = vec![
        ("unknot".to_string(), project(&[unknot.clone()])?),
        ("hopf".to_string(), project(&hopf_pair())?),
        ("trefoil".to_string(), project(&[tref.clone()])?),
    ];
    let split = project(&[tref.clone(), far_unknot.clone()])?;
    out.push(("trefoil+unknot".into(), split.clone()));
    out.push(("band(trefoil, unknot)".into(), planar_band(&split, "k", "u")?));
    let two = project(&[unknot, ring("v", Point3::new(3.0, 0.0, 0.0), 1.0, Point3::Z, 32)])?;
    out.push(("band(unknot, unknot)".into(), planar_band(&two, "u", "v")?));
    let mut hopf_far = hopf_pair();
    hopf_far.push(far_unknot);
    let hu = project(&hopf_far)?;
    out.push(("band(hopf, unknot)".into(), planar_band(&hu, "y", "u")?));
    Ok(out)
}
