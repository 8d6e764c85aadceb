use serde::{Deserialize, Serialize};

use crate::geom3::{Point2, Point3};
use crate::invariants::InvariantError;

use super::projection::{project_diagram, Curve3, Direction, Projected};
use super::Diagram;

/// How the band travels between its two attaching edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandLayer {
    /// Straight (or waypoint-guided) in space; the diagram shows whatever
    /// over/under pattern the geometry produces.
    Straight,
    /// Lifted above every strand, so the band passes over in the picture.
    Over,
    /// Lowered below every strand.
    Under,
    /// Must not cross any strand in the picture.
    Planar,
}

/// Where a band is attached: edge `edge_i` of the first component, edge
/// `edge_j` of the second, and an optional core path between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandSite {
    pub edge_i: usize,
    pub edge_j: usize,
    pub layer: BandLayer,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub waypoints: Vec<Point3>,
}

impl BandSite {
    pub fn straight(edge_i: usize, edge_j: usize) -> Self {
        BandSite { edge_i, edge_j, layer: BandLayer::Straight, waypoints: Vec::new() }
    }
}

/// Fraction of the band's length spent rising to (or sinking from) the
/// over/under level.
const LIFT_FRACTION: f64 = 0.02;

fn illegal(m: impl Into<String>) -> InvariantError {
    InvariantError::IllegalSite(m.into())
}

/// One band edge from `x` (offset `ox` from the first core end) to `y`
/// (offset `oy` from the last), interior points excluded.
fn band_edge(core: &[Point3], ox: Point3, oy: Point3) -> Vec<Point3> {
    let n = core.len() + 1;
    core.iter()
        .enumerate()
        .map(|(k, w)| *w + ox.lerp(oy, (k + 1) as f64 / n as f64))
        .collect()
}

/// Joins curves `comp_i` and `comp_j` by a band, in space. The result has
/// the joined curve (named `"{i}+{j}"`) in place of `comp_i`, and `comp_j`
/// removed.
///
/// Edge `a0 → a1` of the first curve and `b0 → b1` of the second are
/// deleted and replaced by two band edges. Of the two ways to reconnect
/// the shorter one is used; the second curve is reversed when needed so
/// the joined curve stays coherently oriented.
pub fn band_sum_curves(
    curves: &[Curve3],
    comp_i: &str,
    comp_j: &str,
    site: &BandSite,
    lift: Option<Point3>,
) -> Result<Vec<Curve3>, InvariantError> {
    let find = |id: &str| {
        curves.iter().position(|c| c.id == id).ok_or_else(|| InvariantError::UnknownComponent(id.into()))
    };
    let (ii, jj) = (find(comp_i)?, find(comp_j)?);
    if ii == jj {
        return Err(illegal("band sum needs two distinct components"));
    }
    let (a, b) = (&curves[ii], &curves[jj]);
    if site.edge_i >= a.edge_count() || site.edge_j >= b.edge_count() {
        return Err(illegal("band site edge out of range"));
    }
    let (na, nb) = (a.points.len(), b.points.len());
    let (a0, a1) = (a.points[site.edge_i], a.points[(site.edge_i + 1) % na]);
    let (b0, b1) = (b.points[site.edge_j], b.points[(site.edge_j + 1) % nb]);
    let forward = a0.dist(b1) + b0.dist(a1) <= a0.dist(b0) + b1.dist(a1);

    // Second curve's vertices from the band's landing point around to its
    // departure point.
    let b_run: Vec<Point3> = if forward {
        (1..=nb).map(|k| b.points[(site.edge_j + k) % nb]).collect()
    } else {
        (0..nb).map(|k| b.points[(site.edge_j + nb - k) % nb]).collect()
    };
    let (land, depart) = (b_run[0], b_run[nb - 1]);

    let (ma, mb) = ((a0 + a1) * 0.5, (land + depart) * 0.5);
    let mut core = site.waypoints.clone();
    if let Some(up) = lift {
        if !site.waypoints.is_empty() {
            return Err(illegal("waypoints cannot be combined with an over/under band"));
        }
        // Rise within a short distance of each end to a level beyond every point.
        let heights = curves.iter().flat_map(|c| c.points.iter()).map(|p| p.dot(up));
        let level = heights.fold(f64::NEG_INFINITY, f64::max) + 1.0;
        let raise = |p: Point3| p + up * (level - p.dot(up));
        core = vec![raise(ma.lerp(mb, LIFT_FRACTION)), raise(ma.lerp(mb, 1.0 - LIFT_FRACTION))];
    }
    let out_edge = band_edge(&core, a0 - ma, land - mb);
    let mut back_core = core.clone();
    back_core.reverse();
    let back_edge = band_edge(&back_core, depart - mb, a1 - ma);

    let mut points: Vec<Point3> = (1..=na).map(|k| a.points[(site.edge_i + k) % na]).collect();
    points.extend(out_edge);
    points.extend(b_run);
    points.extend(back_edge);
    let joined = Curve3 { id: format!("{}+{}", a.id, b.id), closed: true, points };

    let mut out = Vec::with_capacity(curves.len() - 1);
    for (k, c) in curves.iter().enumerate() {
        if k == ii {
            out.push(joined.clone());
        } else if k != jj {
            out.push(c.clone());
        }
    }
    Ok(out)
}

fn seg_cross2(p: Point2, q: Point2, r: Point2, s: Point2) -> bool {
    let d1 = q.sub(p);
    let d2 = s.sub(r);
    let den = d1.cross(d2);
    if den == 0.0 {
        return false;
    }
    let w = r.sub(p);
    let t = w.cross(d2) / den;
    let v = w.cross(d1) / den;
    t > 0.0 && t < 1.0 && v > 0.0 && v < 1.0
}

/// Band sum of two components of a projected diagram, re-projected along
/// the same direction.
///
/// The band is built in space from the diagram's source polygons. A planar
/// band must not cross any strand in the picture; an over/under band must
/// not cross anything while rising to its level, so only its level part
/// crosses strands.
pub fn band_sum(d: &Diagram, comp_i: &str, comp_j: &str, site: &BandSite) -> Result<Diagram, InvariantError> {
    let src: &Projected = d.source.as_ref().ok_or_else(|| illegal("diagram has no spatial source"))?;
    d.component_index(comp_i)?;
    d.component_index(comp_j)?;
    let lift = match site.layer {
        BandLayer::Over => Some(src.direction),
        BandLayer::Under => Some(-src.direction),
        BandLayer::Straight | BandLayer::Planar => None,
    };
    let curves = band_sum_curves(&src.curves, comp_i, comp_j, site, lift)?;
    let joined_id = format!("{comp_i}+{comp_j}");
    let joined = curves.iter().find(|c| c.id == joined_id).expect("joined curve");

    // Band edges are the joined curve's edges that do not belong to either
    // original curve: locate them by the vertex counts of the two runs.
    let na = src.curves.iter().find(|c| c.id == comp_i).unwrap().points.len();
    let nb = src.curves.iter().find(|c| c.id == comp_j).unwrap().points.len();
    let nband = (joined.points.len() - na - nb) / 2;
    let n = joined.points.len();
    let out_edges: Vec<usize> = (na - 1..na + nband).collect();
    let back_edges: Vec<usize> = (na + nband + nb - 1..n).collect();
    let checked: Vec<usize> = match site.layer {
        BandLayer::Straight => Vec::new(),
        BandLayer::Planar => out_edges.iter().chain(&back_edges).copied().collect(),
        BandLayer::Over | BandLayer::Under => vec![
            out_edges[0],
            *out_edges.last().unwrap(),
            back_edges[0],
            *back_edges.last().unwrap(),
        ],
    };
    for &e in &checked {
        let (p, q) = (src.project(joined.points[e]), src.project(joined.points[(e + 1) % n]));
        for c in &curves {
            for k in 0..c.edge_count() {
                if c.id == joined_id && (k == e || (k + 1) % n == e || (e + 1) % n == k) {
                    continue;
                }
                let s = c.edge(k);
                if seg_cross2(p, q, src.project(s.a), src.project(s.b)) {
                    return Err(illegal(format!("band crosses {} in the picture", c.id)));
                }
            }
        }
    }
    project_diagram(&curves, Direction::Fixed(src.direction), &src.options).map_err(|e| match e {
        InvariantError::CurvesTooClose { .. } | InvariantError::GenericityFailure(_) => {
            illegal(format!("band is not admissible here: {e}"))
        }
        other => other,
    })
}
