//! Gauss diagrams of welded knot diagrams.
//!
//! A diagram with `n` chords has `2n` marked points on the circle, numbered
//! `0..2n` in the direction of the knot. Each point is one end of a chord:
//! the tail sits at the over-passage, the head at the under-passage.

mod code;
pub mod moves;
pub mod pattern;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use code::{canonical_code, canonical_key, parse_gauss_code, serialize, CanonicalKey};

pub type ChordId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Neg),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Which end of a chord a marked point is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum End {
    /// Over-passage (`O` in codes).
    Tail,
    /// Under-passage (`U` in codes).
    Head,
}

impl End {
    pub fn other(self) -> End {
        match self {
            End::Tail => End::Head,
            End::Head => End::Tail,
        }
    }

    pub fn letter(self) -> char {
        match self {
            End::Tail => 'O',
            End::Head => 'U',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endpoint {
    pub chord: ChordId,
    pub end: End,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Chord {
    pub id: ChordId,
    pub tail: usize,
    pub head: usize,
    pub sign: Sign,
}

/// Direction of travel when reading a diagram from a basepoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReadDirection {
    Forward,
    Backward,
}

impl fmt::Display for ReadDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReadDirection::Forward => write!(f, "forward"),
            ReadDirection::Backward => write!(f, "backward"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussError {
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("label {0} must occur exactly once with O and once with U")]
    LabelCountMismatch(u32),
    #[error("label {0} carries different signs at its two ends")]
    SignMismatch(u32),
    #[error("no chord with id {0}")]
    UnknownChord(ChordId),
    #[error("move not applicable: {0}")]
    InapplicableMove(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
}

/// A Gauss diagram: the sequence of chord ends around the circle plus the
/// sign of every chord.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussDiagram {
    points: Vec<Endpoint>,
    signs: BTreeMap<ChordId, Sign>,
}

impl GaussDiagram {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a diagram from `(id, tail, head, sign)` tuples.
    pub fn from_chords(chords: &[(ChordId, usize, usize, Sign)]) -> Result<Self, GaussError> {
        let len = 2 * chords.len();
        let mut slots: Vec<Option<Endpoint>> = vec![None; len];
        let mut signs = BTreeMap::new();
        for &(id, tail, head, sign) in chords {
            if signs.insert(id, sign).is_some() {
                return Err(GaussError::InvalidDiagram(format!("duplicate chord id {id}")));
            }
            for (pos, end) in [(tail, End::Tail), (head, End::Head)] {
                if pos >= len {
                    return Err(GaussError::InvalidDiagram(format!(
                        "position {pos} out of range for {} chords",
                        chords.len()
                    )));
                }
                if slots[pos].is_some() {
                    return Err(GaussError::InvalidDiagram(format!("position {pos} used twice")));
                }
                slots[pos] = Some(Endpoint { chord: id, end });
            }
        }
        let points = slots.into_iter().map(|p| p.expect("all slots filled")).collect();
        Ok(Self { points, signs })
    }

    /// Internal constructor; callers guarantee every chord in `signs` has
    /// exactly one tail and one head in `points`.
    pub(crate) fn from_parts(points: Vec<Endpoint>, signs: BTreeMap<ChordId, Sign>) -> Self {
        debug_assert_eq!(points.len(), 2 * signs.len());
        Self { points, signs }
    }

    /// Number of chords.
    pub fn n(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Number of marked points, `2n`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Endpoint] {
        &self.points
    }

    pub fn point(&self, pos: usize) -> Endpoint {
        self.points[pos]
    }

    pub fn sign(&self, id: ChordId) -> Option<Sign> {
        self.signs.get(&id).copied()
    }

    pub(crate) fn signs(&self) -> &BTreeMap<ChordId, Sign> {
        &self.signs
    }

    pub fn chord_ids(&self) -> impl Iterator<Item = ChordId> + '_ {
        self.signs.keys().copied()
    }

    pub fn contains(&self, id: ChordId) -> bool {
        self.signs.contains_key(&id)
    }

    /// Positions `(tail, head)` of a chord.
    pub fn positions(&self, id: ChordId) -> Option<(usize, usize)> {
        if !self.contains(id) {
            return None;
        }
        let mut tail = None;
        let mut head = None;
        for (pos, p) in self.points.iter().enumerate() {
            if p.chord == id {
                match p.end {
                    End::Tail => tail = Some(pos),
                    End::Head => head = Some(pos),
                }
            }
        }
        Some((tail?, head?))
    }

    pub fn chord(&self, id: ChordId) -> Option<Chord> {
        let (tail, head) = self.positions(id)?;
        Some(Chord { id, tail, head, sign: self.signs[&id] })
    }

    /// All chords, sorted by id.
    pub fn chords(&self) -> Vec<Chord> {
        let mut tails = BTreeMap::new();
        let mut heads = BTreeMap::new();
        for (pos, p) in self.points.iter().enumerate() {
            match p.end {
                End::Tail => tails.insert(p.chord, pos),
                End::Head => heads.insert(p.chord, pos),
            };
        }
        self.signs
            .iter()
            .map(|(&id, &sign)| Chord { id, tail: tails[&id], head: heads[&id], sign })
            .collect()
    }

    pub fn max_chord_id(&self) -> ChordId {
        self.signs.keys().next_back().copied().unwrap_or(0)
    }

    /// The same diagram read from a different basepoint: position `i` of the
    /// result is position `i + k` of `self`.
    pub fn rotated(&self, k: usize) -> Self {
        if self.points.is_empty() {
            return self.clone();
        }
        let len = self.points.len();
        let points = (0..len).map(|i| self.points[(i + k) % len]).collect();
        Self { points, signs: self.signs.clone() }
    }

    /// Crossing change on one chord: orientation and sign flip together.
    pub fn crossing_change(&self, id: ChordId) -> Result<Self, GaussError> {
        let sign = self.sign(id).ok_or(GaussError::UnknownChord(id))?;
        let mut out = self.clone();
        for p in out.points.iter_mut().filter(|p| p.chord == id) {
            p.end = p.end.other();
        }
        out.signs.insert(id, sign.flip());
        Ok(out)
    }

    /// Flips every chord in `ids`.
    pub fn crossing_changes<'a, I>(&self, ids: I) -> Result<Self, GaussError>
    where
        I: IntoIterator<Item = &'a ChordId>,
    {
        let mut out = self.clone();
        for &id in ids {
            out = out.crossing_change(id)?;
        }
        Ok(out)
    }

    /// Number of basepoint slots: one per gap between marked points, and a
    /// single slot for the empty diagram.
    pub fn slot_count(&self) -> usize {
        self.points.len().max(1)
    }

    /// Positions in the order they are met when walking from `slot` (the gap
    /// just before position `slot`) in the given direction.
    pub fn reading_order(&self, slot: usize, dir: ReadDirection) -> Vec<usize> {
        let len = self.points.len();
        (0..len)
            .map(|i| match dir {
                ReadDirection::Forward => (slot + i) % len,
                ReadDirection::Backward => (slot + 2 * len - 1 - i) % len,
            })
            .collect()
    }

    /// True iff every chord's tail is met before its head when reading from
    /// `slot` in direction `dir`.
    pub fn is_descending(&self, slot: usize, dir: ReadDirection) -> bool {
        self.late_tails(slot, dir).is_empty()
    }

    /// Chords whose head is met before their tail from `slot`, sorted by id.
    pub(crate) fn late_tails(&self, slot: usize, dir: ReadDirection) -> Vec<ChordId> {
        let mut seen_head = std::collections::BTreeSet::new();
        let mut late = Vec::new();
        for pos in self.reading_order(slot, dir) {
            let p = self.points[pos];
            match p.end {
                End::Head => {
                    seen_head.insert(p.chord);
                }
                End::Tail => {
                    if seen_head.contains(&p.chord) {
                        late.push(p.chord);
                    }
                }
            }
        }
        late.sort_unstable();
        late
    }
}

impl fmt::Display for GaussDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}
