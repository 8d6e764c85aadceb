use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom3::CircleScan;
use crate::invariants::{linking_matrix, model_a_word, model_b_index, scene_diagram, Direction, InvariantError};
use crate::json;
use crate::moves::{apply_move, enumerate_moves, validate_move, CandidateSpace, Discretization, Move};
use crate::par::Exec;
use crate::scenes::{is_legal, Scene};

use super::SearchError;

/// An invariant checked after every applied move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Audit {
    /// Model A free-group word against its starting value.
    Word,
    /// Model B disk-crossing index against its starting value.
    Index,
    /// Pairwise linking numbers of the closed curves.
    Linking,
    /// Full legality of the scene.
    Legality,
    /// Every rope within its length budget.
    Budget,
}

impl Audit {
    pub const ALL: [Audit; 5] = [Audit::Word, Audit::Index, Audit::Linking, Audit::Legality, Audit::Budget];

    pub fn name(self) -> &'static str {
        match self {
            Audit::Word => "word",
            Audit::Index => "index",
            Audit::Linking => "linking",
            Audit::Legality => "legality",
            Audit::Budget => "budget",
        }
    }
}

impl fmt::Display for Audit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Audit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Audit::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| format!("unknown audit {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditStatus {
    Conserved,
    /// The invariant is undefined in this configuration.
    Skipped,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub step: usize,
    pub invariant: Audit,
    pub status: AuditStatus,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub steps_attempted: usize,
    pub steps_applied: usize,
    pub initial_scene_hash: String,
    pub final_scene_hash: String,
    pub invariant_audits: Vec<AuditEntry>,
}

impl FuzzReport {
    pub fn to_json(&self) -> String {
        json::to_canonical_string(self)
    }

    pub fn count(&self, status: AuditStatus) -> usize {
        self.invariant_audits.iter().filter(|e| e.status == status).count()
    }

    pub fn violated(&self) -> bool {
        self.count(AuditStatus::Violated) > 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzConfig {
    pub discretization: Discretization,
    /// Uniform draws from the candidate list before falling back to
    /// validating every candidate.
    pub max_rejections: usize,
    pub exec: Exec,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig { discretization: Discretization::default(), max_rejections: 64, exec: Exec::default() }
    }
}

/// Seed for the projection directions of linking audits.
const LINKING_DIRECTION_SEED: u64 = 0;

fn linking_value(s: &Scene) -> Result<String, InvariantError> {
    let d = scene_diagram(s, Direction::Auto { seed: LINKING_DIRECTION_SEED })?;
    let m = linking_matrix(&d)?;
    Ok(m.iter().map(|(a, b, l)| format!("{a}/{b}={l}")).collect::<Vec<_>>().join(","))
}

/// Model B's index only tracks the topology while no end circle reaches
/// into the hoop's disk; otherwise a rope end can cross the flat disk
/// without anything passing through the hoop.
fn index_defined(s: &Scene) -> bool {
    let Some(hoop) = s.piece("hoop").and_then(|p| p.geometry.circle) else { return true };
    let disk = hoop.disk();
    s.pieces
        .iter()
        .filter(|p| p.id != "hoop")
        .filter_map(|p| p.geometry.circle)
        .all(|c| CircleScan::disk(&c, &disk).at_least(s.clearance))
}

fn evaluate(s: &Scene, audit: Audit) -> Result<String, String> {
    match audit {
        Audit::Word => model_a_word(s).map(|w| w.to_string()).map_err(|e| e.to_string()),
        Audit::Index => {
            if !index_defined(s) {
                return Err("an end circle meets the hoop disk".into());
            }
            model_b_index(s).map(|i| i.to_string()).map_err(|e| e.to_string())
        }
        Audit::Linking => linking_value(s).map_err(|e| e.to_string()),
        Audit::Legality => Ok(is_legal(s).legal.to_string()),
        Audit::Budget => Ok(s
            .ropes
            .iter()
            .all(|r| r.length_budget.map_or(true, |b| r.perimeter() <= b))
            .to_string()),
    }
}

/// Expected value of an audit: the starting value, except for the
/// absolute checks, which must always read `true`.
fn expected(s: &Scene, audit: Audit) -> Option<String> {
    match audit {
        Audit::Legality | Audit::Budget => Some("true".into()),
        _ => evaluate(s, audit).ok(),
    }
}

/// Picks a uniformly random valid move: uniform draws from the candidate
/// list are validated until one passes (which is uniform over the valid
/// ones); after `max_rejections` failures every candidate is validated and
/// one is drawn uniformly from the survivors.
fn draw_move(s: &Scene, cfg: &FuzzConfig, rng: &mut ChaCha8Rng) -> Option<Move> {
    let space = CandidateSpace::new(s, &cfg.discretization);
    if space.is_empty() {
        return None;
    }
    for _ in 0..cfg.max_rejections {
        let m = space.get(rng.gen_range(0..space.len())).expect("index in range");
        if validate_move(s, &m).is_ok() {
            return Some(m);
        }
    }
    let valid = enumerate_moves(s, &cfg.discretization, cfg.exec);
    if valid.is_empty() {
        return None;
    }
    Some(valid[rng.gen_range(0..valid.len())].clone())
}

/// Applies `steps` random legal moves from `s` and audits the requested
/// invariants after each one. The report is a pure function of the inputs.
///
/// Moves are drawn by [`ChaCha8Rng`] seeded with `seed`. A step where no
/// valid move exists ends the run early.
pub fn fuzz(s: &Scene, seed: u64, steps: usize, audits: &[Audit], cfg: &FuzzConfig) -> Result<FuzzReport, SearchError> {
    let report = is_legal(s);
    if !report.legal {
        return Err(SearchError::IllegalStart(report.to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let baseline: Vec<Option<String>> = audits.iter().map(|a| expected(s, *a)).collect();
    let mut cur = s.clone();
    let mut out = FuzzReport {
        seed,
        steps_attempted: 0,
        steps_applied: 0,
        initial_scene_hash: s.content_hash(),
        final_scene_hash: String::new(),
        invariant_audits: Vec::new(),
    };
    for step in 0..steps {
        out.steps_attempted += 1;
        let Some(m) = draw_move(&cur, cfg, &mut rng) else { break };
        // A drawn move was validated, so applying it cannot fail; a failure
        // here would be an engine bug and is reported as a legality breach.
        match apply_move(&cur, &m) {
            Ok(next) => cur = next,
            Err(e) => {
                out.invariant_audits.push(AuditEntry {
                    step,
                    invariant: Audit::Legality,
                    status: AuditStatus::Violated,
                    value: e.to_string(),
                });
                break;
            }
        }
        out.steps_applied += 1;
        for (audit, want) in audits.iter().zip(&baseline) {
            let (status, value) = match (evaluate(&cur, *audit), want) {
                (Ok(v), Some(w)) if v == *w => (AuditStatus::Conserved, v),
                (Ok(v), Some(_)) => (AuditStatus::Violated, v),
                (Ok(v), None) => (AuditStatus::Skipped, format!("{v} (no starting value)")),
                (Err(e), _) => (AuditStatus::Skipped, e),
            };
            out.invariant_audits.push(AuditEntry { step, invariant: *audit, status, value });
        }
    }
    out.final_scene_hash = cur.content_hash();
    Ok(out)
}
