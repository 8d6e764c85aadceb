//! Reduced words in the free group on `a`, `b` read off from signed rope
//! crossings through two flat disks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geom3::{disk_disk, seg_disk_crossing, segment_circle, segment_disk, Disk, DiskCrossing, Point3, Segment, EPS};
use crate::scenes::PolyRope;

use super::InvariantError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    fn from_char(c: char) -> Option<Letter> {
        Some(match c {
            'a' => Letter::A,
            'A' => Letter::AInv,
            'b' => Letter::B,
            'B' => Letter::BInv,
            _ => return None,
        })
    }
}

/// A freely reduced word; uppercase letters are inverses in the text form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct WordF2 {
    letters: Vec<Letter>,
}

impl WordF2 {
    pub fn empty() -> Self {
        WordF2::default()
    }

    /// Appends a letter, cancelling it against the last one if inverse.
    pub fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1].inverse())
    }

    /// Sum of the exponents of one generator (`'a'` or `'b'`).
    pub fn exponent_sum(&self, generator: char) -> i64 {
        self.letters
            .iter()
            .map(|l| match (generator, l) {
                ('a', Letter::A) | ('b', Letter::B) => 1,
                ('a', Letter::AInv) | ('b', Letter::BInv) => -1,
                _ => 0,
            })
            .sum()
    }
}

impl FromIterator<Letter> for WordF2 {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        let mut w = WordF2::empty();
        for l in iter {
            w.push(l);
        }
        w
    }
}

impl fmt::Display for WordF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for WordF2 {
    type Err = InvariantError;

    /// Parses and reduces.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| InvariantError::Parse(format!("bad letter {c:?}"))))
            .collect()
    }
}

impl Serialize for WordF2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for WordF2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parameter along `s` where it meets the disk's plane.
fn crossing_param(s: &Segment, d: &Disk) -> f64 {
    let c = &d.circle;
    let h0 = (s.a - c.center).dot(c.normal);
    let h1 = (s.b - c.center).dot(c.normal);
    (h0 / (h0 - h1)).clamp(0.0, 1.0)
}

fn in_plane(s: &Segment, d: &Disk) -> bool {
    let h = |p: Point3| (p - d.circle.center).dot(d.circle.normal).abs();
    h(s.a) <= EPS && h(s.b) <= EPS
}

/// Signed crossings of a rope through a disk, as `(edge, parameter, sign)`.
pub(crate) fn disk_crossings(rope: &PolyRope, d: &Disk) -> Result<Vec<(usize, f64, i8)>, InvariantError> {
    let mut out = Vec::new();
    for (i, e) in rope.edges().enumerate() {
        match seg_disk_crossing(&e, d, EPS) {
            DiskCrossing::Cross(sign) => out.push((i, crossing_param(&e, d), sign)),
            DiskCrossing::None => {}
            // An edge lying in the disk's plane counts nothing: the
            // half-open side rule puts both its ends on the positive side,
            // and the edges entering and leaving the plane carry the
            // crossing. Only the boundary circle is ambiguous.
            DiskCrossing::Degenerate if in_plane(&e, d) && segment_circle(&e, &d.circle) > EPS => {}
            DiskCrossing::Degenerate => {
                return Err(InvariantError::DegenerateCrossing { rope: rope.id.clone(), edge: i })
            }
        }
    }
    Ok(out)
}

/// Word of the rope's crossings through `disk_a` (letter `a`) and `disk_b`
/// (letter `b`), in rope order.
///
/// Defined only when the flat disks are at least `clearance` apart and
/// `disk_a` clears every segment in `keep_clear` (the pole, for Model A);
/// otherwise the flat-disk word is not an invariant and
/// [`InvariantError::DisksNotClear`] is returned.
pub fn f2_word(
    rope: &PolyRope,
    disk_a: &Disk,
    disk_b: &Disk,
    keep_clear: &[Segment],
    clearance: f64,
) -> Result<WordF2, InvariantError> {
    let gap = disk_disk(disk_a, disk_b);
    if gap < clearance {
        return Err(InvariantError::DisksNotClear(gap));
    }
    for s in keep_clear {
        let d = segment_disk(s, disk_a);
        if d < clearance {
            return Err(InvariantError::DisksNotClear(d));
        }
    }
    let mut events: Vec<(usize, f64, Letter)> = Vec::new();
    for (i, t, sign) in disk_crossings(rope, disk_a)? {
        events.push((i, t, if sign > 0 { Letter::A } else { Letter::AInv }));
    }
    for (i, t, sign) in disk_crossings(rope, disk_b)? {
        events.push((i, t, if sign > 0 { Letter::B } else { Letter::BInv }));
    }
    // Disjoint disks cannot be crossed at the same point of an edge.
    events.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let w: WordF2 = events.into_iter().map(|e| e.2).collect();
    debug_assert!(w.is_reduced());
    Ok(w)
}
