use crate::geom3::Disk;
use crate::scenes::PolyRope;

use super::word::disk_crossings;
use super::InvariantError;

/// Signed number of times an oriented rope passes through a flat disk: the
/// offset between the covering-space parts holding the rope's two ends.
pub fn crossing_index(rope: &PolyRope, disk: &Disk) -> Result<i64, InvariantError> {
    Ok(disk_crossings(rope, disk)?.iter().map(|c| c.2 as i64).sum())
}
