//! The Gauss-level move table, derived by running planar moves on every
//! closure of a minimal tangle and reading off how the Gauss image changes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;
use std::sync::OnceLock;

use super::build::{polygon_closures, ClosureKinds, CornerKind};
use super::moves::{apply_detailed, classify_face, Shape};
use super::{EdgeId, MoveDirection, PdError, PdMove, PdMoveKind, PdSite, PlanarDiagram, Variant};
use crate::gauss::pattern::{canonicalize, ChordSigns, LocalRewrite, RawSegment};
use crate::gauss::{End, Sign};

/// Bumped whenever the derivation changes what it records.
pub const TABLE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveTable {
    pub version: u32,
    entries: BTreeMap<PdMoveKind, Vec<LocalRewrite>>,
}

impl MoveTable {
    /// Sorted, distinct patterns for `kind`.
    pub fn patterns(&self, kind: PdMoveKind) -> &[LocalRewrite] {
        self.entries.get(&kind).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn index_of(&self, kind: PdMoveKind, r: &LocalRewrite) -> Option<usize> {
        self.patterns(kind).binary_search(r).ok()
    }

    pub fn contains(&self, kind: PdMoveKind, r: &LocalRewrite) -> bool {
        self.index_of(kind, r).is_some()
    }

    pub fn kinds(&self) -> impl Iterator<Item = PdMoveKind> + '_ {
        self.entries.keys().copied()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("move table v{}\n", self.version);
        for (k, pats) in &self.entries {
            for (i, p) in pats.iter().enumerate() {
                writeln!(s, "{k} #{i}: {p}").unwrap();
            }
        }
        s
    }
}

type ChordKey = (EdgeId, EdgeId, usize);

/// Strand runs through the tangle: (entry edge, classical points).
fn runs(pd: &PlanarDiagram, tangle_from: usize, internal: &BTreeSet<EdgeId>) -> Vec<(EdgeId, Vec<(usize, End)>)> {
    let walk = pd.walk();
    let Some(start) = walk
        .iter()
        .position(|a| a.crossing >= tangle_from && !internal.contains(&a.edge))
    else {
        return Vec::new();
    };
    let mut out: Vec<(EdgeId, Vec<(usize, End)>)> = Vec::new();
    let mut inside = false;
    for i in 0..walk.len() {
        let a = walk[(start + i) % walk.len()];
        if a.crossing < tangle_from {
            inside = false;
            continue;
        }
        if !inside || !internal.contains(&a.edge) {
            out.push((a.edge, Vec::new()));
            inside = true;
        }
        let x = &pd.crossings()[a.crossing];
        if x.is_classical() {
            let end = if a.slot % 2 == 1 { End::Tail } else { End::Head };
            out.last_mut().unwrap().1.push((a.crossing, end));
        }
    }
    out
}

/// Names each tangle crossing by the strands meeting there and its rank
/// among crossings of the same pair.
fn chord_keys(runs: &[(EdgeId, Vec<(usize, End)>)]) -> BTreeMap<usize, ChordKey> {
    let mut meets: BTreeMap<usize, Vec<(EdgeId, usize)>> = BTreeMap::new();
    for (strand, pts) in runs {
        for (pos, &(x, _)) in pts.iter().enumerate() {
            meets.entry(x).or_default().push((*strand, pos));
        }
    }
    let mut by_pair: BTreeMap<(EdgeId, EdgeId), Vec<(usize, usize)>> = BTreeMap::new();
    for (&x, m) in &meets {
        let a = m.iter().map(|p| p.0).min().unwrap();
        let b = m.iter().map(|p| p.0).max().unwrap();
        let first_on_a = m.iter().filter(|p| p.0 == a).map(|p| p.1).min().unwrap();
        by_pair.entry((a, b)).or_default().push((first_on_a, x));
    }
    let mut keys = BTreeMap::new();
    for ((a, b), mut xs) in by_pair {
        xs.sort_unstable();
        for (rank, (_, x)) in xs.into_iter().enumerate() {
            keys.insert(x, (a, b, rank));
        }
    }
    keys
}

/// The Gauss rewrite induced by replacing the tangle of `before` (crossings
/// from `tangle_from`, inner edges `internal_before`) by that of `after`.
pub(crate) fn induced_rewrite(
    before: &PlanarDiagram,
    internal_before: &BTreeSet<EdgeId>,
    after: &PlanarDiagram,
    internal_after: &BTreeSet<EdgeId>,
    tangle_from: usize,
) -> LocalRewrite {
    let rb = runs(before, tangle_from, internal_before);
    let ra = runs(after, tangle_from, internal_after);
    let kb = chord_keys(&rb);
    let ka = chord_keys(&ra);
    let sign_of = |pd: &PlanarDiagram, x: usize| -> Option<Sign> { pd.crossings()[x].sign() };
    let mut signs: BTreeMap<ChordKey, ChordSigns> = BTreeMap::new();
    for (&x, &k) in &kb {
        signs.entry(k).or_insert(ChordSigns { before: None, after: None }).before = sign_of(before, x);
    }
    for (&x, &k) in &ka {
        signs.entry(k).or_insert(ChordSigns { before: None, after: None }).after = sign_of(after, x);
    }
    let as_keys = |pts: &[(usize, End)], keys: &BTreeMap<usize, ChordKey>| -> Vec<(ChordKey, End)> {
        pts.iter().map(|&(x, e)| (keys[&x], e)).collect()
    };
    let strands: BTreeSet<EdgeId> = rb.iter().chain(ra.iter()).map(|r| r.0).collect();
    let mut segs = Vec::new();
    for s in strands {
        let b = rb.iter().find(|r| r.0 == s).map(|r| as_keys(&r.1, &kb)).unwrap_or_default();
        let a = ra.iter().find(|r| r.0 == s).map(|r| as_keys(&r.1, &ka)).unwrap_or_default();
        let unchanged = b == a && b.iter().all(|(k, _)| signs[k].before == signs[k].after);
        if unchanged && b.len() <= 1 {
            continue;
        }
        segs.push(RawSegment { before: b, after: a });
    }
    let used: BTreeSet<ChordKey> =
        segs.iter().flat_map(|s| s.before.iter().chain(s.after.iter()).map(|p| p.0)).collect();
    signs.retain(|k, _| used.contains(k));
    canonicalize(&segs, &signs).0
}

fn shape_moves(k: usize) -> (Vec<Vec<CornerKind>>, MoveDirection) {
    let pool: &[CornerKind] = if k == 4 { &CornerKind::CLASSICAL } else { &CornerKind::ALL };
    let mut all = vec![Vec::new()];
    for _ in 0..k {
        all = all
            .into_iter()
            .flat_map(|v: Vec<CornerKind>| {
                pool.iter().map(move |&c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    // kinks and bigons are recorded through their removal
    let dir = if k <= 2 { MoveDirection::Backward } else { MoveDirection::Forward };
    (all, dir)
}

pub fn derive_gauss_move_table() -> Result<MoveTable, PdError> {
    type VariantKey = (PdMoveKind, Vec<CornerKind>, u32);
    let mut seen: BTreeMap<VariantKey, LocalRewrite> = BTreeMap::new();
    let mut entries: BTreeMap<PdMoveKind, BTreeSet<LocalRewrite>> = BTreeMap::new();
    for k in 1..=4 {
        let (assignments, direction) = shape_moves(k);
        for corners in assignments {
            for cl in polygon_closures(&corners, ClosureKinds::WeldedOnly) {
                let face = cl
                    .pd
                    .faces()
                    .into_iter()
                    .find(|f| f.contains(&cl.face_dart))
                    .expect("template face");
                let Shape::Move(kind) = classify_face(&cl.pd, &face) else {
                    continue;
                };
                let internal_before: BTreeSet<EdgeId> =
                    face.iter().map(|d| cl.pd.crossings()[d.0].edges[d.1 as usize]).collect();
                let mv = PdMove { kind, direction, site: PdSite::Face(face), variant: Variant::Plain };
                let applied = apply_detailed(&cl.pd, &mv)?;
                let internal_after: BTreeSet<EdgeId> = applied.internal.iter().copied().collect();
                let rewrite =
                    induced_rewrite(&cl.pd, &internal_before, &applied.pd, &internal_after, cl.closure_crossings);
                let key = (kind, corners.clone(), cl.incoming_ports);
                match seen.get(&key) {
                    Some(prev) if *prev != rewrite => {
                        return Err(PdError::OracleInconsistency(format!(
                            "{kind} variant {:?} ports {:b}: {prev} vs {rewrite}",
                            corners, cl.incoming_ports
                        )));
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(key, rewrite.clone());
                    }
                }
                entries.entry(kind).or_default().insert(rewrite);
            }
        }
    }
    Ok(MoveTable {
        version: TABLE_VERSION,
        entries: entries.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect(),
    })
}

/// The derived table, computed once per process.
pub fn move_table() -> &'static MoveTable {
    static TABLE: OnceLock<MoveTable> = OnceLock::new();
    TABLE.get_or_init(|| derive_gauss_move_table().expect("move table derivation is consistent"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::pattern::LocalEnd;

    #[test]
    fn derivation_is_deterministic() {
        assert_eq!(derive_gauss_move_table().unwrap(), *move_table());
    }

    #[test]
    fn virtual_moves_are_identities() {
        let t = move_table();
        for k in [PdMoveKind::V1, PdMoveKind::V2, PdMoveKind::V3, PdMoveKind::V4] {
            assert!(!t.patterns(k).is_empty(), "{k}");
            assert!(t.patterns(k).iter().all(|p| p.before.is_empty() && p.after.is_empty()), "{k}");
        }
    }

    #[test]
    fn c1_removes_a_trivial_chord_of_either_sign_and_orientation() {
        let pats = move_table().patterns(PdMoveKind::C1);
        let mut seen = BTreeSet::new();
        for p in pats {
            assert_eq!(p.before.len(), 1);
            assert_eq!(p.before[0].len(), 2);
            assert!(p.after.iter().all(|s| s.is_empty()));
            seen.insert((p.before[0][0].end, p.chords[0].before));
        }
        assert_eq!(seen.len(), 4, "{}", move_table().to_text());
    }

    #[test]
    fn c2_pairs_tails_and_heads_with_opposite_signs() {
        let pats = move_table().patterns(PdMoveKind::C2);
        assert!(!pats.is_empty());
        for p in pats {
            assert_eq!(p.before.len(), 2);
            assert_ne!(p.chords[0].before, p.chords[1].before);
            let ends: BTreeSet<Vec<End>> = p.before.iter().map(|s| s.iter().map(|e| e.end).collect()).collect();
            assert_eq!(ends, BTreeSet::from([vec![End::Tail, End::Tail], vec![End::Head, End::Head]]));
        }
    }

    #[test]
    fn c3_and_w_reverse_adjacent_pairs_keeping_signs() {
        let t = move_table();
        for k in [PdMoveKind::C3, PdMoveKind::W] {
            assert!(!t.patterns(k).is_empty(), "{k}");
            for p in t.patterns(k) {
                for (b, a) in p.before.iter().zip(&p.after) {
                    let rev: Vec<LocalEnd> = b.iter().rev().copied().collect();
                    assert_eq!(*a, rev);
                }
                assert!(p.chords.iter().all(|c| c.before == c.after));
            }
        }
        for p in t.patterns(PdMoveKind::W) {
            assert_eq!(p.before.len(), 1);
            assert!(p.before[0].iter().all(|e| e.end == End::Tail));
        }
    }

    #[test]
    fn delta_and_sharp_change_the_gauss_diagram() {
        let t = move_table();
        for k in [PdMoveKind::Delta, PdMoveKind::Sharp] {
            assert!(!t.patterns(k).is_empty(), "{k}");
            assert!(t.patterns(k).iter().all(|p| !p.is_identity()));
        }
    }
}
