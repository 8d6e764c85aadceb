//! Planar link diagrams: arcs, crossings, and the invariants read off them.
//!
//! A diagram produced by [`project_diagram`] remembers the 3D polygons and
//! the direction it came from, which is what [`band_sum`] and the exporters
//! work with. Diagrams read from JSON carry only the combinatorial data.

mod band;
mod projection;

pub use band::{band_sum, band_sum_curves, BandLayer, BandSite};
pub use projection::{project_diagram, scene_curves, scene_drawing_curves, CrossingSite, Curve3, Direction, ProjectionOptions, Projected};

use serde::{Deserialize, Serialize};

use super::InvariantError;

pub const DIAGRAM_FORMAT_VERSION: u32 = 1;

/// A maximal under-to-under piece of a component. `from`/`to` are the
/// crossings where it emerges and where it dives; both are `None` for a
/// component that never passes under anything.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub component: usize,
    pub from: Option<usize>,
    pub to: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub over: usize,
    pub under_in: usize,
    pub under_out: usize,
    /// `+1` when the over strand turns counterclockwise onto the under
    /// strand (right-handed crossing), `-1` otherwise.
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagram {
    pub version: u32,
    pub components: Vec<String>,
    pub arcs: Vec<Arc>,
    pub crossings: Vec<Crossing>,
    #[serde(skip)]
    pub source: Option<Projected>,
}

impl Diagram {
    pub fn component_index(&self, id: &str) -> Result<usize, InvariantError> {
        self.components
            .iter()
            .position(|c| c == id)
            .ok_or_else(|| InvariantError::UnknownComponent(id.into()))
    }

    pub fn to_json(&self) -> String {
        crate::json::to_canonical_string(self)
    }

    pub fn from_json(text: &str) -> Result<Diagram, InvariantError> {
        let d: Diagram = serde_json::from_str(text).map_err(|e| InvariantError::Parse(e.to_string()))?;
        d.check()?;
        Ok(d)
    }

    /// Structural checks: references in range, arcs dive and emerge at the
    /// crossings that name them, and every component's arcs form one cycle.
    pub fn check(&self) -> Result<(), InvariantError> {
        let bad = |m: String| Err(InvariantError::MalformedDiagram(m));
        let na = self.arcs.len();
        for (k, c) in self.crossings.iter().enumerate() {
            if c.over >= na || c.under_in >= na || c.under_out >= na {
                return bad(format!("crossing {k} references a missing arc"));
            }
            if self.arcs[c.under_in].to != Some(k) || self.arcs[c.under_out].from != Some(k) {
                return bad(format!("crossing {k} disagrees with its under arcs"));
            }
            if self.arcs[c.under_in].component != self.arcs[c.under_out].component {
                return bad(format!("crossing {k} switches component under the over strand"));
            }
            if c.sign != 1 && c.sign != -1 {
                return bad(format!("crossing {k} has sign {}", c.sign));
            }
        }
        for (a, arc) in self.arcs.iter().enumerate() {
            if arc.component >= self.components.len() {
                return bad(format!("arc {a} references a missing component"));
            }
            for k in [arc.from, arc.to].into_iter().flatten() {
                if k >= self.crossings.len() {
                    return bad(format!("arc {a} references a missing crossing"));
                }
            }
        }
        for comp in 0..self.components.len() {
            let arcs: Vec<usize> = (0..na).filter(|&a| self.arcs[a].component == comp).collect();
            if arcs.is_empty() {
                return bad(format!("component {comp} has no arcs"));
            }
            if arcs.len() == 1 && self.arcs[arcs[0]].from.is_none() {
                continue;
            }
            // Walk arc -> crossing -> next arc and require a single cycle.
            let mut seen = 0;
            let mut a = arcs[0];
            loop {
                let Some(k) = self.arcs[a].to else {
                    return bad(format!("component {comp} is not closed"));
                };
                a = self.crossings[k].under_out;
                seen += 1;
                if a == arcs[0] || seen > arcs.len() {
                    break;
                }
            }
            if seen != arcs.len() || a != arcs[0] {
                return bad(format!("arcs of component {comp} do not form one cycle"));
            }
        }
        Ok(())
    }
}

/// Half the signed count of crossings between the two components.
pub fn linking_number(d: &Diagram, comp_i: &str, comp_j: &str) -> Result<i64, InvariantError> {
    let i = d.component_index(comp_i)?;
    let j = d.component_index(comp_j)?;
    if i == j {
        return Err(InvariantError::MalformedDiagram("linking number needs two distinct components".into()));
    }
    let mut sum = 0i64;
    for c in &d.crossings {
        let pair = (d.arcs[c.over].component, d.arcs[c.under_in].component);
        if pair == (i, j) || pair == (j, i) {
            sum += c.sign as i64;
        }
    }
    if sum % 2 != 0 {
        return Err(InvariantError::MalformedDiagram("odd crossing sum between closed components".into()));
    }
    Ok(sum / 2)
}

/// Dimension of the space of Fox 3-colourings: the nullity over `Z/3` of
/// the system `x_over + x_in + x_out = 0`, one equation per crossing.
pub fn tricolor_nullity(d: &Diagram) -> Result<usize, InvariantError> {
    d.check()?;
    let n = d.arcs.len();
    let mut rows: Vec<Vec<u8>> = d
        .crossings
        .iter()
        .map(|c| {
            let mut r = vec![0u8; n];
            for a in [c.over, c.under_in, c.under_out] {
                r[a] = (r[a] + 1) % 3;
            }
            r
        })
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, p);
        // Scale the pivot to 1 (the inverse of 2 mod 3 is 2).
        if rows[rank][col] == 2 {
            for x in rows[rank].iter_mut() {
                *x = (*x * 2) % 3;
            }
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in 0..n {
                    rows[r][c] = (rows[r][c] + 3 * 3 - f * rows[rank][c]) % 3;
                }
            }
        }
        rank += 1;
    }
    Ok(n - rank)
}

/// Number of Fox 3-colourings, `3^nullity`; always a power of three and at
/// least 3 (the constant colourings). "Tricolourable" means more than 3.
pub fn tricolor_count(d: &Diagram) -> Result<u64, InvariantError> {
    let k = tricolor_nullity(d)?;
    3u64.checked_pow(k as u32).ok_or_else(|| InvariantError::MalformedDiagram("colouring count overflows".into()))
}

/// Exhaustive count of colourings, independent of the linear algebra: a
/// depth-first walk over arc colours that abandons a branch as soon as a
/// crossing with all three arcs coloured fails. Exponential in the worst
/// case, so limited to modest diagrams.
pub fn tricolor_count_brute_force(d: &Diagram) -> Result<u64, InvariantError> {
    d.check()?;
    let n = d.arcs.len();
    if n > 40 {
        return Err(InvariantError::MalformedDiagram(format!("{n} arcs is too many to enumerate")));
    }
    let triples: Vec<[usize; 3]> = d.crossings.iter().map(|c| [c.over, c.under_in, c.under_out]).collect();
    // Colour arcs in an order that completes crossings as early as
    // possible: next is the arc closing the most crossings, then the one
    // touching the most already-ordered arcs.
    let mut pos = vec![usize::MAX; n];
    for k in 0..n {
        let score = |a: usize| {
            let mut closes = 0;
            let mut touches = 0;
            for t in triples.iter().filter(|t| t.contains(&a)) {
                let others = t.iter().filter(|&&b| b != a);
                if others.clone().all(|&b| pos[b] != usize::MAX) {
                    closes += 1;
                }
                touches += others.filter(|&&b| pos[b] != usize::MAX).count();
            }
            (closes, touches)
        };
        let next = (0..n).filter(|&a| pos[a] == usize::MAX).max_by_key(|&a| (score(a), std::cmp::Reverse(a))).unwrap();
        pos[next] = k;
    }
    // A crossing becomes checkable once its last arc in that order is set.
    let mut due: Vec<Vec<[usize; 3]>> = vec![Vec::new(); n];
    for t in &triples {
        due[t.iter().map(|&a| pos[a]).max().unwrap()].push(t.map(|a| pos[a]));
    }
    fn walk(k: usize, colours: &mut Vec<u8>, due: &[Vec<[usize; 3]>]) -> u64 {
        if k == colours.len() {
            return 1;
        }
        let mut total = 0;
        for c in 0..3u8 {
            colours[k] = c;
            if due[k].iter().all(|a| (colours[a[0]] + colours[a[1]] + colours[a[2]]) % 3 == 0) {
                total += walk(k + 1, colours, due);
            }
        }
        total
    }
    Ok(walk(0, &mut vec![0u8; n], &due))
}
