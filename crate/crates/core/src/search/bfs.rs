use std::collections::HashSet;

use crate::moves::{apply_move, enumerate_moves, Discretization, Move, MoveScript};
use crate::par::Exec;
use crate::scenes::{goal_reached, is_legal, Scene};

use super::{replay, SearchError};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub max_depth: usize,
    pub max_states: usize,
    pub discretization: Discretization,
    /// Grid size for rope vertices and piece poses in the visited set.
    pub state_key_resolution: f64,
    pub exec: Exec,
    /// Print one line per finished depth to standard error.
    pub progress: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_depth: 12,
            max_states: 2_000,
            discretization: Discretization::default(),
            state_key_resolution: 0.05,
            exec: Exec::default(),
            progress: false,
        }
    }
}

impl SearchConfig {
    fn check(&self) -> Result<(), SearchError> {
        let bad = |m: &str| Err(SearchError::Config(m.into()));
        if self.max_depth == 0 || self.max_states == 0 {
            return bad("max_depth and max_states must be positive");
        }
        if !(self.state_key_resolution > 0.0 && self.state_key_resolution.is_finite()) {
            return bad("state_key_resolution must be positive");
        }
        let d = &self.discretization;
        if !(d.apex_pitch > 0.0 && d.apex_radius > 0.0 && d.rotation_step >= 0.0) {
            return bad("discretization bounds must be positive");
        }
        if d.translation_steps.iter().any(|t| !(*t > 0.0)) {
            return bad("translation steps must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Found(MoveScript),
    /// No goal within the bounds: `states` distinct states were kept and
    /// levels up to `depth` were expanded.
    Exhausted { states: usize, depth: usize },
}

/// Quantized fingerprint of a scene.
fn state_key(s: &Scene, res: f64) -> Vec<i64> {
    let q = |x: f64| (x / res).round() as i64;
    let mut key = Vec::new();
    for r in &s.ropes {
        key.push(r.vertices.len() as i64);
        for v in &r.vertices {
            key.extend([q(v.x), q(v.y), q(v.z)]);
        }
    }
    for p in s.pieces.iter().filter(|p| p.movable) {
        if let Some(c) = &p.geometry.circle {
            let n = if c.normal.z < 0.0 || (c.normal.z == 0.0 && (c.normal.y < 0.0 || (c.normal.y == 0.0 && c.normal.x < 0.0))) {
                -c.normal
            } else {
                c.normal
            };
            key.extend([q(c.center.x), q(c.center.y), q(c.center.z), q(n.x), q(n.y), q(n.z)]);
        }
        if let Some(seg) = &p.geometry.segment {
            key.extend([q(seg.a.x), q(seg.a.y), q(seg.a.z), q(seg.b.x), q(seg.b.y), q(seg.b.z)]);
        }
    }
    key
}

/// Breadth-first search over the discretized move set.
///
/// Levels are expanded in order; successors of a level are computed in
/// parallel (per `cfg.exec`) and merged sequentially in frontier order, so
/// the result does not depend on the worker count. A found script is
/// replayed before it is returned.
pub fn search(s: &Scene, cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    cfg.check()?;
    let report = is_legal(s);
    if !report.legal {
        return Err(SearchError::IllegalStart(report.to_string()));
    }
    if goal_reached(s) {
        return Ok(SearchOutcome::Found(MoveScript::new(s, Vec::new())));
    }
    // Tree of (parent, move) for script reconstruction.
    let mut tree: Vec<(usize, Option<Move>)> = vec![(usize::MAX, None)];
    let mut visited: HashSet<Vec<i64>> = HashSet::new();
    visited.insert(state_key(s, cfg.state_key_resolution));
    let mut frontier: Vec<(usize, Scene)> = vec![(0, s.clone())];
    let mut depth = 0;
    while depth < cfg.max_depth && !frontier.is_empty() {
        let expanded: Vec<Vec<(Move, Scene)>> = cfg.exec.map(&frontier, |(_, scene)| {
            enumerate_moves(scene, &cfg.discretization, Exec::Sequential)
                .into_iter()
                .filter_map(|m| apply_move(scene, &m).ok().map(|next| (m, next)))
                .collect()
        });
        depth += 1;
        let mut next_frontier = Vec::new();
        for ((node, _), children) in frontier.iter().zip(expanded) {
            for (m, next) in children {
                if !visited.insert(state_key(&next, cfg.state_key_resolution)) {
                    continue;
                }
                tree.push((*node, Some(m)));
                let id = tree.len() - 1;
                if goal_reached(&next) {
                    let script = MoveScript::new(s, path_to(&tree, id));
                    replay(s, &script).expect("search produced a script that does not replay");
                    return Ok(SearchOutcome::Found(script));
                }
                if visited.len() >= cfg.max_states {
                    return Ok(SearchOutcome::Exhausted { states: visited.len(), depth });
                }
                next_frontier.push((id, next));
            }
        }
        if cfg.progress {
            eprintln!("depth {depth}: {} new states, {} total", next_frontier.len(), visited.len());
        }
        frontier = next_frontier;
    }
    Ok(SearchOutcome::Exhausted { states: visited.len(), depth })
}

fn path_to(tree: &[(usize, Option<Move>)], mut id: usize) -> Vec<Move> {
    let mut out = Vec::new();
    while let (parent, Some(m)) = &tree[id] {
        out.push(m.clone());
        id = *parent;
    }
    out.reverse();
    out
}
