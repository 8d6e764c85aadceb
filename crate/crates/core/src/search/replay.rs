use thiserror::Error;

use crate::moves::{apply_move, MoveError, MoveScript, MOVE_SCRIPT_VERSION};
use crate::scenes::{goal_reached, Scene};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReplayError {
    #[error("script is for scene {expected}, not {found}")]
    HashMismatch { expected: String, found: String },
    #[error("unsupported script version {0}")]
    UnsupportedVersion(u32),
    #[error("step {index}: {error}")]
    Step { index: usize, error: MoveError },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Replayed {
    pub scene: Scene,
    pub goal_reached: bool,
}

/// Validates and applies every move of `script` starting from `s`.
pub fn replay(s: &Scene, script: &MoveScript) -> Result<Replayed, ReplayError> {
    if script.version != MOVE_SCRIPT_VERSION {
        return Err(ReplayError::UnsupportedVersion(script.version));
    }
    let found = s.content_hash();
    if script.scene_hash != found {
        return Err(ReplayError::HashMismatch { expected: script.scene_hash.clone(), found });
    }
    let mut cur = s.clone();
    for (index, m) in script.moves.iter().enumerate() {
        cur = apply_move(&cur, m).map_err(|error| ReplayError::Step { index, error })?;
    }
    let goal_reached = goal_reached(&cur);
    Ok(Replayed { scene: cur, goal_reached })
}
