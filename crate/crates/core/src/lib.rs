//! Scenes, legal moves and obstruction invariants for rope-and-hoop
//! disentanglement puzzles.

pub mod geom3;
pub mod invariants;
pub mod json;
pub mod scenes;
pub mod moves;
pub mod par;
pub mod search;
