//! Chord removal, reduction of descending diagrams, unknotting by crossing
//! changes, and upper bounds on the unknotting number.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::gauss::moves::{apply_gauss_move, GaussMove};
use crate::gauss::{ChordId, End, GaussDiagram, GaussError, ReadDirection};
use crate::search::{is_trivial_bounded, SearchLimits, SearchVerdict};
use crate::trace::ReductionTrace;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum UnknottingError {
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error("chord {0} has no arc free of heads")]
    NotRemovable(ChordId),
    #[error("the empty diagram has no chord to choose")]
    EmptyDiagram,
    #[error("no chord subset certified within the search limits; falling back to {fallback:?}")]
    LimitsExceeded { fallback: UBound },
}

/// Chords met head-first when reading from `slot` in `dir`.
pub fn descending_change_set(g: &GaussDiagram, slot: usize, dir: ReadDirection) -> BTreeSet<ChordId> {
    g.late_tails(slot, dir).into_iter().collect()
}

/// An open arc of the circle between a chord's endpoints: the positions
/// strictly after `from` and strictly before `to`, read forward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub positions: Vec<usize>,
}

fn open_arc(len: usize, from: usize, to: usize) -> Arc {
    let positions = (1..).map(|i| (from + i) % len).take_while(|&p| p != to).collect();
    Arc { from, to, positions }
}

/// The shorter head-free arc between the chord's endpoints, if any. Ties go
/// to the arc starting at the lower position.
pub fn removable_arc(g: &GaussDiagram, id: ChordId) -> Result<Option<Arc>, GaussError> {
    let c = g.chord(id).ok_or(GaussError::UnknownChord(id))?;
    let len = g.len();
    let head_free = |a: &Arc| a.positions.iter().all(|&p| g.point(p).end == End::Tail);
    let mut arcs: Vec<Arc> = [open_arc(len, c.tail, c.head), open_arc(len, c.head, c.tail)]
        .into_iter()
        .filter(head_free)
        .collect();
    arcs.sort_by_key(|a| (a.positions.len(), a.from));
    Ok(arcs.into_iter().next())
}

/// Slides the chord's tail across its head-free arc with W moves, then
/// deletes it with C1.
pub fn remove_chord(g: &GaussDiagram, id: ChordId) -> Result<(GaussDiagram, ReductionTrace), UnknottingError> {
    let arc = removable_arc(g, id)?.ok_or(UnknottingError::NotRemovable(id))?;
    let len = g.len();
    let c = g.chord(id).expect("checked above");
    let mut trace = ReductionTrace::new(g.clone());
    let mut cur = g.clone();
    let step = |cur: &mut GaussDiagram, mv: GaussMove, trace: &mut ReductionTrace| {
        *cur = apply_gauss_move(cur, &mv).expect("slide along a head-free arc");
        trace.record(mv, cur);
    };
    if arc.from == c.tail {
        // tail moves forward until it sits just before the head
        let mut t = c.tail;
        for _ in &arc.positions {
            step(&mut cur, GaussMove::W { pos: t }, &mut trace);
            t = (t + 1) % len;
        }
        step(&mut cur, GaussMove::C1Remove { pos: t }, &mut trace);
    } else {
        // tail moves backward until it sits just after the head
        let mut t = c.tail;
        for _ in &arc.positions {
            let p = (t + len - 1) % len;
            step(&mut cur, GaussMove::W { pos: p }, &mut trace);
            t = p;
        }
        step(&mut cur, GaussMove::C1Remove { pos: c.head }, &mut trace);
    }
    Ok((cur, trace))
}

/// Removes removable chords, lowest id first, until none is left.
pub fn reduce(g: &GaussDiagram) -> (GaussDiagram, ReductionTrace) {
    let mut cur = g.clone();
    let mut trace = ReductionTrace::new(g.clone());
    'outer: loop {
        for id in cur.chord_ids().collect::<Vec<_>>() {
            if let Ok((next, t)) = remove_chord(&cur, id) {
                trace.extend(t);
                cur = next;
                continue 'outer;
            }
        }
        return (cur, trace);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unknotting {
    pub slot: usize,
    pub direction: ReadDirection,
    pub change_set: BTreeSet<ChordId>,
    /// The diagram after the crossing changes; the trace starts here.
    pub descending: GaussDiagram,
    pub trace: ReductionTrace,
}

/// Makes the diagram descending with as few crossing changes as any
/// basepoint and direction allow, then reduces it to the empty diagram.
pub fn unknot_descending(g: &GaussDiagram) -> Unknotting {
    let mut best: Option<(usize, ReadDirection, BTreeSet<ChordId>)> = None;
    for slot in 0..g.slot_count() {
        for dir in [ReadDirection::Forward, ReadDirection::Backward] {
            let s = descending_change_set(g, slot, dir);
            if best.as_ref().map_or(true, |b| s.len() < b.2.len()) {
                best = Some((slot, dir, s));
            }
        }
    }
    let (slot, direction, change_set) = best.expect("at least one slot");
    let descending = g.crossing_changes(change_set.iter()).expect("chords exist");
    let (rest, trace) = reduce(&descending);
    assert!(rest.is_empty(), "descending diagrams reduce to the empty diagram");
    Unknotting { slot, direction, change_set, descending, trace }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prop24Certificate {
    pub chord: ChordId,
    /// Slot just before the tail, read forward.
    pub p1: usize,
    /// Slot just after the tail, read backward.
    pub p2: usize,
    pub s1: BTreeSet<ChordId>,
    pub s2: BTreeSet<ChordId>,
    pub bound: usize,
}

impl Prop24Certificate {
    /// Checks the certificate's invariants against `g`.
    pub fn verify(&self, g: &GaussDiagram) -> Result<(), String> {
        let n = g.n();
        if !self.s1.is_disjoint(&self.s2) {
            return Err(format!("S1 and S2 share {:?}", self.s1.intersection(&self.s2).collect::<Vec<_>>()));
        }
        if self.s1.len() + self.s2.len() + 1 != n {
            return Err(format!("|S1| + |S2| = {} but n - 1 = {}", self.s1.len() + self.s2.len(), n - 1));
        }
        if self.s1.contains(&self.chord) || self.s2.contains(&self.chord) {
            return Err(format!("chord {} lies in S1 or S2", self.chord));
        }
        if self.bound != self.s1.len().min(self.s2.len()) {
            return Err("bound is not min(|S1|, |S2|)".into());
        }
        for (slot, dir, set) in [(self.p1, ReadDirection::Forward, &self.s1), (self.p2, ReadDirection::Backward, &self.s2)] {
            let flipped = g.crossing_changes(set.iter()).map_err(|e| e.to_string())?;
            if !flipped.is_descending(slot, dir) {
                return Err(format!("flipping {set:?} does not make the diagram descending from slot {slot}"));
            }
        }
        Ok(())
    }
}

/// One certificate per chord, in chord id order.
pub fn prop24_certificates(g: &GaussDiagram) -> Result<Vec<Prop24Certificate>, UnknottingError> {
    if g.is_empty() {
        return Err(UnknottingError::EmptyDiagram);
    }
    let len = g.len();
    Ok(g
        .chords()
        .into_iter()
        .map(|c| {
            let p1 = c.tail;
            let p2 = (c.tail + 1) % len;
            let s1 = descending_change_set(g, p1, ReadDirection::Forward);
            let s2 = descending_change_set(g, p2, ReadDirection::Backward);
            let bound = s1.len().min(s2.len());
            Prop24Certificate { chord: c.id, p1, p2, s1, s2, bound }
        })
        .collect())
}

/// The certificate with the smallest bound (lowest chord id on ties).
pub fn prop24_bound(g: &GaussDiagram) -> Result<Prop24Certificate, UnknottingError> {
    let certs = prop24_certificates(g)?;
    let best = certs.into_iter().min_by_key(|c| (c.bound, c.chord)).expect("n >= 1");
    debug_assert_eq!(best.verify(g), Ok(()));
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UBound {
    pub value: usize,
    pub witness: BTreeSet<ChordId>,
    /// Every smaller subset was searched until its state space ran out.
    pub exhaustive_below: bool,
    pub trace: ReductionTrace,
}

fn subsets_of_size(ids: &[ChordId], k: usize) -> Vec<Vec<ChordId>> {
    fn rec(ids: &[ChordId], k: usize, from: usize, cur: &mut Vec<ChordId>, out: &mut Vec<Vec<ChordId>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in from..ids.len() {
            cur.push(ids[i]);
            rec(ids, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(ids, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Smallest chord subset (by size, then lexicographically) whose flip is
/// certified trivial.
pub fn unknotting_upper(g: &GaussDiagram, limits: &SearchLimits) -> Result<UBound, UnknottingError> {
    let ids: Vec<ChordId> = g.chord_ids().collect();
    let limits = SearchLimits { max_chords: Some(limits.max_chords.unwrap_or(g.n() + 2)), ..*limits };
    let mut exhaustive = true;
    for k in 0..=ids.len() {
        for subset in subsets_of_size(&ids, k) {
            let flipped = g.crossing_changes(subset.iter())?;
            match is_trivial_bounded(&flipped, &limits) {
                SearchVerdict::Certified(trace) => {
                    let bound = UBound {
                        value: k,
                        witness: subset.into_iter().collect(),
                        exhaustive_below: exhaustive,
                        trace,
                    };
                    if exhaustive && !g.is_empty() {
                        let p = prop24_bound(g)?;
                        assert!(bound.value <= p.bound, "value {} exceeds the certificate bound {}", bound.value, p.bound);
                    }
                    return Ok(bound);
                }
                SearchVerdict::Unknown { exhausted, .. } => exhaustive &= exhausted,
            }
        }
    }
    let u = unknot_descending(g);
    Err(UnknottingError::LimitsExceeded {
        fallback: UBound { value: u.change_set.len(), witness: u.change_set, exhaustive_below: false, trace: u.trace },
    })
}
