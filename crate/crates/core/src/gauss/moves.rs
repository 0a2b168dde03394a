//! Gauss-diagram moves: C1, C2, C3 and W.
//!
//! C1 and W follow their direct descriptions: C1 adds or removes a chord
//! whose ends are adjacent, W swaps two adjacent tails. C2 and C3 have no
//! such short description in every sign/orientation variant, so their
//! admissible local patterns come from the move table derived from the
//! planar layer (see [`crate::pd::table`]).

use std::collections::BTreeMap;
use std::fmt;

use super::pattern::{canonicalize, ChordSigns, RawSegment};
use super::{ChordId, End, Endpoint, GaussDiagram, GaussError, Sign};
use crate::pd::table::move_table;
use crate::pd::PdMoveKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GaussMoveKind {
    C1Add,
    C1Remove,
    C2Add,
    C2Remove,
    C3,
    W,
}

impl GaussMoveKind {
    pub const ALL: [GaussMoveKind; 6] = [
        GaussMoveKind::C1Add,
        GaussMoveKind::C1Remove,
        GaussMoveKind::C2Add,
        GaussMoveKind::C2Remove,
        GaussMoveKind::C3,
        GaussMoveKind::W,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GaussMoveKind::C1Add => "C1_add",
            GaussMoveKind::C1Remove => "C1_remove",
            GaussMoveKind::C2Add => "C2_add",
            GaussMoveKind::C2Remove => "C2_remove",
            GaussMoveKind::C3 => "C3",
            GaussMoveKind::W => "W",
        }
    }

    /// Change in chord count.
    pub fn delta_n(self) -> isize {
        match self {
            GaussMoveKind::C1Add => 1,
            GaussMoveKind::C1Remove => -1,
            GaussMoveKind::C2Add => 2,
            GaussMoveKind::C2Remove => -2,
            GaussMoveKind::C3 | GaussMoveKind::W => 0,
        }
    }
}

impl fmt::Display for GaussMoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A located Gauss move. Positions refer to the diagram the move is applied
/// to; a "gap" `g >= 1` is the gap just before position `g`, and gap `0` is
/// the gap before position 0 (insertions there are appended at the end so
/// that position 0 keeps its point).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GaussMove {
    C1Add { gap: usize, sign: Sign, head_first: bool },
    /// Remove the chord occupying positions `pos` and `pos + 1`.
    C1Remove { pos: usize },
    /// Insert the two runs of C2 pattern `pattern`; run `i` goes to
    /// `gaps[i]`. When both gaps coincide, `swap` puts run 1 first.
    C2Add { pattern: usize, gaps: [usize; 2], swap: bool },
    /// Remove the two chords filling the adjacent pairs starting at `pairs`.
    C2Remove { pairs: [usize; 2] },
    /// Reverse the three adjacent pairs starting at `pairs`.
    C3 { pairs: [usize; 3] },
    /// Swap the tails at `pos` and `pos + 1`.
    W { pos: usize },
}

impl GaussMove {
    pub fn kind(&self) -> GaussMoveKind {
        match self {
            GaussMove::C1Add { .. } => GaussMoveKind::C1Add,
            GaussMove::C1Remove { .. } => GaussMoveKind::C1Remove,
            GaussMove::C2Add { .. } => GaussMoveKind::C2Add,
            GaussMove::C2Remove { .. } => GaussMoveKind::C2Remove,
            GaussMove::C3 { .. } => GaussMoveKind::C3,
            GaussMove::W { .. } => GaussMoveKind::W,
        }
    }

    /// The move undoing `self` on the diagram produced from `before`.
    pub fn inverse(&self, before: &GaussDiagram) -> Result<GaussMove, GaussError> {
        let len = before.len();
        match *self {
            GaussMove::W { .. } | GaussMove::C3 { .. } => Ok(*self),
            GaussMove::C1Add { gap, .. } => {
                let pos = if gap == 0 { len } else { gap };
                Ok(GaussMove::C1Remove { pos })
            }
            GaussMove::C1Remove { pos } => {
                check_c1_site(before, pos)?;
                let q = (pos + 1) % len;
                let p = before.point(pos);
                let sign = before.sign(p.chord).expect("known chord");
                let removed = removed_mask(len, &[pos, q]);
                let (gap, _) = gap_after_removal(&removed, pos);
                Ok(GaussMove::C1Add { gap, sign, head_first: p.end == End::Head })
            }
            GaussMove::C2Add { pattern, gaps, swap } => {
                let (_, starts) = insert_c2(before, pattern, gaps, swap)?;
                Ok(GaussMove::C2Remove { pairs: starts })
            }
            GaussMove::C2Remove { pairs } => {
                let (pattern, perm) = match_c2(before, pairs)?;
                let removed = removed_mask(
                    len,
                    &[pairs[0], (pairs[0] + 1) % len, pairs[1], (pairs[1] + 1) % len],
                );
                let placed: Vec<(usize, usize)> =
                    pairs.iter().map(|&p| gap_after_removal(&removed, p)).collect();
                let canon_gap = |i: usize| placed[perm[i]];
                let (g0, k0) = canon_gap(0);
                let (g1, k1) = canon_gap(1);
                Ok(GaussMove::C2Add { pattern, gaps: [g0, g1], swap: g0 == g1 && k1 < k0 })
            }
        }
    }
}

impl fmt::Display for GaussMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GaussMove::C1Add { gap, sign, head_first } => {
                write!(f, "C1_add {gap} {sign} {}", if head_first { "UO" } else { "OU" })
            }
            GaussMove::C1Remove { pos } => write!(f, "C1_remove {pos}"),
            GaussMove::C2Add { pattern, gaps, swap } => {
                write!(f, "C2_add p{pattern} {} {}", gaps[0], gaps[1])?;
                if swap {
                    write!(f, " swap")?;
                }
                Ok(())
            }
            GaussMove::C2Remove { pairs } => write!(f, "C2_remove {} {}", pairs[0], pairs[1]),
            GaussMove::C3 { pairs } => write!(f, "C3 {} {} {}", pairs[0], pairs[1], pairs[2]),
            GaussMove::W { pos } => write!(f, "W {pos}"),
        }
    }
}

fn inapplicable(msg: impl Into<String>) -> GaussError {
    GaussError::InapplicableMove(msg.into())
}

pub fn apply_gauss_move(g: &GaussDiagram, m: &GaussMove) -> Result<GaussDiagram, GaussError> {
    let len = g.len();
    match *m {
        GaussMove::W { pos } => {
            if len < 2 || pos >= len {
                return Err(inapplicable(format!("W at {pos}: no such position")));
            }
            let q = (pos + 1) % len;
            let (a, b) = (g.point(pos), g.point(q));
            if a.end != End::Tail || b.end != End::Tail || a.chord == b.chord {
                return Err(inapplicable(format!("W at {pos}: positions {pos},{q} are not two tails")));
            }
            let mut points = g.points().to_vec();
            points.swap(pos, q);
            Ok(GaussDiagram::from_parts(points, g.signs().clone()))
        }
        GaussMove::C1Remove { pos } => {
            check_c1_site(g, pos)?;
            let chord = g.point(pos).chord;
            let points = g.points().iter().copied().filter(|p| p.chord != chord).collect();
            let mut signs = g.signs().clone();
            signs.remove(&chord);
            Ok(GaussDiagram::from_parts(points, signs))
        }
        GaussMove::C1Add { gap, sign, head_first } => {
            if gap >= g.slot_count() {
                return Err(inapplicable(format!("C1_add: no gap {gap}")));
            }
            let id = g.max_chord_id() + 1;
            let (first, second) = if head_first { (End::Head, End::Tail) } else { (End::Tail, End::Head) };
            let block = vec![Endpoint { chord: id, end: first }, Endpoint { chord: id, end: second }];
            let (points, _) = insert_blocks(g.points(), vec![(gap, block)]);
            let mut signs = g.signs().clone();
            signs.insert(id, sign);
            Ok(GaussDiagram::from_parts(points, signs))
        }
        GaussMove::C2Remove { pairs } => {
            match_c2(g, pairs)?;
            let a = g.point(pairs[0]).chord;
            let b = g.point((pairs[0] + 1) % len).chord;
            let points = g.points().iter().copied().filter(|p| p.chord != a && p.chord != b).collect();
            let mut signs = g.signs().clone();
            signs.remove(&a);
            signs.remove(&b);
            Ok(GaussDiagram::from_parts(points, signs))
        }
        GaussMove::C2Add { pattern, gaps, swap } => Ok(insert_c2(g, pattern, gaps, swap)?.0),
        GaussMove::C3 { pairs } => {
            match_c3(g, pairs)?;
            let mut points = g.points().to_vec();
            for p in pairs {
                points.swap(p, (p + 1) % len);
            }
            Ok(GaussDiagram::from_parts(points, g.signs().clone()))
        }
    }
}

fn check_c1_site(g: &GaussDiagram, pos: usize) -> Result<(), GaussError> {
    let len = g.len();
    if len < 2 || pos >= len {
        return Err(inapplicable(format!("C1_remove at {pos}: no such position")));
    }
    if g.point(pos).chord != g.point((pos + 1) % len).chord {
        return Err(inapplicable(format!("C1_remove at {pos}: chord ends are not adjacent")));
    }
    Ok(())
}

fn removed_mask(len: usize, positions: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; len];
    for &p in positions {
        mask[p] = true;
    }
    mask
}

/// Gap (in the diagram left after deleting `removed`) where the block that
/// started at `start` used to sit, plus a key ordering blocks that land in
/// the same gap by their original cyclic order.
fn gap_after_removal(removed: &[bool], start: usize) -> (usize, usize) {
    let len = removed.len();
    let survivors = removed.iter().filter(|r| !**r).count();
    let before = removed[..start].iter().filter(|r| !**r).count();
    if before == 0 || before == survivors {
        // blocks at the very start follow blocks at the very end
        let key = if before == 0 { start + len } else { start };
        (0, key)
    } else {
        (before, start)
    }
}

/// Inserts blocks at gaps of `points`. Returns the new sequence and the
/// start position of each block (in input order).
fn insert_blocks(points: &[Endpoint], blocks: Vec<(usize, Vec<Endpoint>)>) -> (Vec<Endpoint>, Vec<usize>) {
    let mut by_gap: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, (gap, _)) in blocks.iter().enumerate() {
        by_gap.entry(*gap).or_default().push(i);
    }
    let mut out = Vec::with_capacity(points.len() + blocks.iter().map(|b| b.1.len()).sum::<usize>());
    let mut starts = vec![0; blocks.len()];
    let mut emit = |gap: usize, out: &mut Vec<Endpoint>| {
        if let Some(ids) = by_gap.get(&gap) {
            for &i in ids {
                starts[i] = out.len();
                out.extend_from_slice(&blocks[i].1);
            }
        }
    };
    for (pos, p) in points.iter().enumerate() {
        if pos > 0 {
            emit(pos, &mut out);
        }
        out.push(*p);
    }
    emit(0, &mut out);
    (out, starts)
}

fn insert_c2(
    g: &GaussDiagram,
    pattern: usize,
    gaps: [usize; 2],
    swap: bool,
) -> Result<(GaussDiagram, [usize; 2]), GaussError> {
    let table = move_table();
    let pat = table
        .patterns(PdMoveKind::C2)
        .get(pattern)
        .ok_or_else(|| inapplicable(format!("C2_add: no pattern {pattern}")))?;
    if gaps.iter().any(|&gp| gp >= g.slot_count()) {
        return Err(inapplicable("C2_add: gap out of range"));
    }
    let base = g.max_chord_id();
    let ids: Vec<ChordId> = (0..pat.chords.len()).map(|i| base + 1 + i as ChordId).collect();
    let block = |seg: &Vec<crate::gauss::pattern::LocalEnd>| -> Vec<Endpoint> {
        seg.iter().map(|e| Endpoint { chord: ids[e.chord as usize], end: e.end }).collect()
    };
    let mut blocks = vec![(gaps[0], block(&pat.before[0])), (gaps[1], block(&pat.before[1]))];
    let swapped = gaps[0] == gaps[1] && swap;
    if swapped {
        blocks.swap(0, 1);
    }
    let (points, mut starts) = insert_blocks(g.points(), blocks);
    if swapped {
        starts.swap(0, 1);
    }
    let mut signs = g.signs().clone();
    for (i, c) in pat.chords.iter().enumerate() {
        signs.insert(ids[i], c.before.expect("C2 chords exist before removal"));
    }
    Ok((GaussDiagram::from_parts(points, signs), [starts[0], starts[1]]))
}

fn pair_points(g: &GaussDiagram, p: usize) -> (Endpoint, Endpoint) {
    (g.point(p), g.point((p + 1) % g.len()))
}

/// Checks that `starts` are pairwise disjoint adjacent pairs and returns the
/// raw segments they form.
fn adjacent_pairs(g: &GaussDiagram, starts: &[usize]) -> Result<Vec<RawSegment<ChordId>>, GaussError> {
    let len = g.len();
    if len < 2 * starts.len() || starts.iter().any(|&p| p >= len) {
        return Err(inapplicable("pair position out of range"));
    }
    let mut used = vec![false; len];
    for &p in starts {
        for q in [p, (p + 1) % len] {
            if used[q] {
                return Err(inapplicable("pairs overlap"));
            }
            used[q] = true;
        }
    }
    Ok(starts
        .iter()
        .map(|&p| {
            let (a, b) = pair_points(g, p);
            RawSegment { before: vec![(a.chord, a.end), (b.chord, b.end)], after: vec![] }
        })
        .collect())
}

/// Returns the table index of the C2 pattern formed by the pairs and the
/// permutation from canonical to given run order.
fn match_c2(g: &GaussDiagram, pairs: [usize; 2]) -> Result<(usize, Vec<usize>), GaussError> {
    let segs = adjacent_pairs(g, &pairs)?;
    let chords: std::collections::BTreeSet<ChordId> =
        segs.iter().flat_map(|s| s.before.iter().map(|e| e.0)).collect();
    if chords.len() != 2 || segs.iter().any(|s| s.before[0].0 == s.before[1].0) {
        return Err(inapplicable("C2_remove: pairs must hold one end of each of two chords"));
    }
    let signs = chords
        .iter()
        .map(|&c| (c, ChordSigns { before: g.sign(c), after: None }))
        .collect();
    let (canon, perm) = canonicalize(&segs, &signs);
    let idx = move_table()
        .index_of(PdMoveKind::C2, &canon)
        .ok_or_else(|| inapplicable(format!("C2_remove: pattern {canon} is not a C2 pattern")))?;
    Ok((idx, perm))
}

fn match_c3(g: &GaussDiagram, pairs: [usize; 3]) -> Result<(), GaussError> {
    let mut segs = adjacent_pairs(g, &pairs)?;
    let mut count: BTreeMap<ChordId, usize> = BTreeMap::new();
    for s in &segs {
        if s.before[0].0 == s.before[1].0 {
            return Err(inapplicable("C3: a pair holds both ends of one chord"));
        }
        for e in &s.before {
            *count.entry(e.0).or_default() += 1;
        }
    }
    if count.len() != 3 || count.values().any(|&c| c != 2) {
        return Err(inapplicable("C3: pairs must cover three chords twice each"));
    }
    for s in segs.iter_mut() {
        s.after = vec![s.before[1], s.before[0]];
    }
    let signs = count
        .keys()
        .map(|&c| (c, ChordSigns { before: g.sign(c), after: g.sign(c) }))
        .collect();
    let (canon, _) = canonicalize(&segs, &signs);
    if move_table().index_of(PdMoveKind::C3, &canon).is_none() {
        return Err(inapplicable(format!("C3: pattern {canon} is not a C3 pattern")));
    }
    Ok(())
}

/// Every applicable move of the requested kinds, sorted by kind then site.
pub fn enumerate_moves(g: &GaussDiagram, kinds: &[GaussMoveKind]) -> Vec<GaussMove> {
    enumerate_moves_capped(g, kinds, usize::MAX)
}

/// As [`enumerate_moves`], skipping moves whose result would exceed
/// `max_chords` chords.
pub fn enumerate_moves_capped(g: &GaussDiagram, kinds: &[GaussMoveKind], max_chords: usize) -> Vec<GaussMove> {
    let len = g.len();
    let n = g.n();
    let mut out = Vec::new();
    let wants = |k: GaussMoveKind| kinds.contains(&k);

    if wants(GaussMoveKind::C1Add) && n < max_chords {
        for gap in 0..g.slot_count() {
            for sign in [Sign::Pos, Sign::Neg] {
                for head_first in [false, true] {
                    out.push(GaussMove::C1Add { gap, sign, head_first });
                }
            }
        }
    }
    if wants(GaussMoveKind::C1Remove) && len >= 2 {
        let mut seen = std::collections::BTreeSet::new();
        for pos in 0..len {
            let c = g.point(pos).chord;
            if g.point((pos + 1) % len).chord == c && seen.insert(c) {
                out.push(GaussMove::C1Remove { pos });
            }
        }
    }
    if wants(GaussMoveKind::C2Add) && n + 2 <= max_chords {
        let patterns = move_table().patterns(PdMoveKind::C2).len();
        let slots = g.slot_count();
        for pattern in 0..patterns {
            for g0 in 0..slots {
                for g1 in 0..slots {
                    out.push(GaussMove::C2Add { pattern, gaps: [g0, g1], swap: false });
                    if g0 == g1 {
                        out.push(GaussMove::C2Add { pattern, gaps: [g0, g1], swap: true });
                    }
                }
            }
        }
    }
    let mixed_pairs: Vec<usize> = if len >= 4 {
        (0..len).filter(|&p| g.point(p).chord != g.point((p + 1) % len).chord).collect()
    } else {
        Vec::new()
    };
    if wants(GaussMoveKind::C2Remove) {
        for (i, &p) in mixed_pairs.iter().enumerate() {
            for &q in &mixed_pairs[i + 1..] {
                if match_c2(g, [p, q]).is_ok() {
                    out.push(GaussMove::C2Remove { pairs: [p, q] });
                }
            }
        }
    }
    if wants(GaussMoveKind::C3) && len >= 6 {
        for (i, &p) in mixed_pairs.iter().enumerate() {
            for (j, &q) in mixed_pairs.iter().enumerate().skip(i + 1) {
                if q == (p + 1) % len || p == (q + 1) % len {
                    continue;
                }
                for &r in &mixed_pairs[j + 1..] {
                    if match_c3(g, [p, q, r]).is_ok() {
                        out.push(GaussMove::C3 { pairs: [p, q, r] });
                    }
                }
            }
        }
    }
    if wants(GaussMoveKind::W) && len >= 2 {
        for pos in 0..len {
            let (a, b) = pair_points(g, pos);
            if a.end == End::Tail && b.end == End::Tail && a.chord != b.chord {
                out.push(GaussMove::W { pos });
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::{canonical_code, parse_gauss_code, serialize};

    fn code(s: &str) -> GaussDiagram {
        parse_gauss_code(s).unwrap()
    }

    #[test]
    fn w_swaps_adjacent_tails() {
        let g = code("O1+ O2+ U1+ U2+");
        let out = apply_gauss_move(&g, &GaussMove::W { pos: 0 }).unwrap();
        assert_eq!(out.chord(1).unwrap().tail, 1);
        assert_eq!(out.chord(1).unwrap().head, 2);
        assert_eq!(out.chord(2).unwrap().tail, 0);
        assert_eq!(out.chord(2).unwrap().head, 3);
    }

    #[test]
    fn w_rejects_tail_head_and_head_head() {
        let g = code("O1+ O2+ U1+ U2+");
        assert!(matches!(apply_gauss_move(&g, &GaussMove::W { pos: 1 }), Err(GaussError::InapplicableMove(_))));
        assert!(matches!(apply_gauss_move(&g, &GaussMove::W { pos: 2 }), Err(GaussError::InapplicableMove(_))));
    }

    #[test]
    fn c1_remove_trivial_chord() {
        let g = code("O1+ U1+");
        let out = apply_gauss_move(&g, &GaussMove::C1Remove { pos: 0 }).unwrap();
        assert!(out.is_empty());
        let g = code("O1- U2+ O2+ U1-");
        let out = apply_gauss_move(&g, &GaussMove::C1Remove { pos: 1 }).unwrap();
        assert_eq!(serialize(&out), "O1- U1-");
        assert!(apply_gauss_move(&g, &GaussMove::C1Remove { pos: 0 }).is_err());
    }

    #[test]
    fn c1_add_appends_at_gap_zero() {
        let g = code("O1+ U1+");
        let out = apply_gauss_move(&g, &GaussMove::C1Add { gap: 0, sign: Sign::Neg, head_first: true }).unwrap();
        assert_eq!(serialize(&out), "O1+ U1+ U2- O2-");
        let out = apply_gauss_move(&g, &GaussMove::C1Add { gap: 1, sign: Sign::Pos, head_first: false }).unwrap();
        assert_eq!(serialize(&out), "O1+ O2+ U2+ U1+");
    }

    #[test]
    fn enumerate_examples() {
        assert!(enumerate_moves(&GaussDiagram::empty(), &[GaussMoveKind::W, GaussMoveKind::C1Remove]).is_empty());
        assert_eq!(
            enumerate_moves(&code("O1+ O2+ U1+ U2+"), &[GaussMoveKind::W]),
            vec![GaussMove::W { pos: 0 }]
        );
        assert_eq!(
            enumerate_moves(&code("O1+ U1+"), &[GaussMoveKind::C1Remove]),
            vec![GaussMove::C1Remove { pos: 0 }]
        );
    }

    #[test]
    fn enumeration_is_deterministic() {
        let g = code("O1+ U2- O3+ U1+ O2- U3+");
        let a = enumerate_moves(&g, &GaussMoveKind::ALL);
        let b = enumerate_moves(&g.clone(), &GaussMoveKind::ALL);
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn c2_add_then_remove_round_trip() {
        let g = code("O1+ U1+");
        for m in enumerate_moves(&g, &[GaussMoveKind::C2Add]) {
            let up = apply_gauss_move(&g, &m).unwrap();
            assert_eq!(up.n(), 3);
            let inv = m.inverse(&g).unwrap();
            assert!(matches!(inv, GaussMove::C2Remove { .. }));
            let down = apply_gauss_move(&up, &inv).unwrap();
            assert_eq!(canonical_code(&down), canonical_code(&g), "{m}");
        }
    }

    #[test]
    fn c2_patterns_have_tails_and_heads_paired_with_opposite_signs() {
        let g = GaussDiagram::empty();
        let adds = enumerate_moves(&g, &[GaussMoveKind::C2Add]);
        assert!(!adds.is_empty());
        for m in adds {
            let out = apply_gauss_move(&g, &m).unwrap();
            let cs = out.chords();
            assert_eq!(cs.len(), 2);
            assert_ne!(cs[0].sign, cs[1].sign);
            let removals = enumerate_moves(&out, &[GaussMoveKind::C2Remove]);
            assert!(!removals.is_empty(), "{}", serialize(&out));
        }
    }

    #[test]
    fn c3_is_self_inverse() {
        // braid-like triangle: chord 1 over both, chord 3 under both
        let g = code("O1+ O2+ U1+ O3+ U2+ U3+");
        let moves = enumerate_moves(&g, &[GaussMoveKind::C3]);
        for m in &moves {
            let out = apply_gauss_move(&g, m).unwrap();
            let back = apply_gauss_move(&out, &m.inverse(&g).unwrap()).unwrap();
            assert_eq!(back, g);
        }
    }
}
