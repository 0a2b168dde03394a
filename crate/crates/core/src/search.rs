//! Bounded breadth-first search over the Gauss move graph, enumeration of
//! small Gauss diagrams, and the search for trivial diagram pairs related by
//! one Delta or sharp move.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::gauss::moves::{apply_gauss_move, enumerate_moves_capped, GaussMove, GaussMoveKind};
use crate::gauss::{canonical_code, canonical_key, CanonicalKey, End, Endpoint, GaussDiagram, Sign};
use crate::pd::build::{polygon_closures, ClosureKinds, CornerKind};
use crate::pd::{apply_pd_move, find_sites, gauss_image, MoveDirection, PdMove, PdMoveKind, PlanarDiagram};
use crate::trace::ReductionTrace;
use crate::unknotting::reduce;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest chord count a visited state may have; `None` means the
    /// input's chord count plus two.
    pub max_chords: Option<usize>,
    pub max_states: usize,
    pub max_depth: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_chords: None, max_states: 1_000_000, max_depth: 64 }
    }
}

impl fmt::Display for SearchLimits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.max_chords {
            Some(c) => write!(f, "max_chords={c}")?,
            None => write!(f, "max_chords=n+2")?,
        }
        write!(f, " max_states={} max_depth={}", self.max_states, self.max_depth)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchVerdict {
    Certified(ReductionTrace),
    /// `exhausted` is true when every reachable state within the chord cap
    /// was visited, with neither the state nor the depth limit cutting in.
    Unknown { states: usize, exhausted: bool },
}

impl SearchVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, SearchVerdict::Certified(_))
    }

    pub fn trace(&self) -> Option<&ReductionTrace> {
        match self {
            SearchVerdict::Certified(t) => Some(t),
            SearchVerdict::Unknown { .. } => None,
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            SearchVerdict::Certified(t) => format!("CERTIFIED depth={}\n{}", t.len(), t.to_text()),
            SearchVerdict::Unknown { states, exhausted } => {
                format!("UNKNOWN states={states} exhausted={exhausted}\n")
            }
        }
    }
}

impl fmt::Display for SearchVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub const ALL_KINDS: [GaussMoveKind; 6] = GaussMoveKind::ALL;

struct Node {
    diagram: GaussDiagram,
    parent: Option<(usize, GaussMove)>,
    depth: usize,
}

/// Breadth-first tree over canonical keys.
struct Bfs {
    nodes: Vec<Node>,
    index: HashMap<CanonicalKey, usize>,
    queue: VecDeque<usize>,
    depth_cut: bool,
}

impl Bfs {
    fn new(root: GaussDiagram) -> Self {
        let mut index = HashMap::new();
        index.insert(canonical_key(&root), 0);
        Bfs {
            nodes: vec![Node { diagram: root, parent: None, depth: 0 }],
            index,
            queue: VecDeque::from([0]),
            depth_cut: false,
        }
    }

    /// Expands one node; returns the ids of new nodes.
    fn expand(&mut self, id: usize, kinds: &[GaussMoveKind], limits: &SearchLimits, cap: usize) -> Vec<usize> {
        let depth = self.nodes[id].depth;
        if depth >= limits.max_depth {
            self.depth_cut = true;
            return Vec::new();
        }
        let g = self.nodes[id].diagram.clone();
        let mut fresh = Vec::new();
        for mv in enumerate_moves_capped(&g, kinds, cap) {
            let Ok(next) = apply_gauss_move(&g, &mv) else { continue };
            let key = canonical_key(&next);
            if self.index.contains_key(&key) {
                continue;
            }
            let nid = self.nodes.len();
            self.index.insert(key, nid);
            self.nodes.push(Node { diagram: next, parent: Some((id, mv)), depth: depth + 1 });
            self.queue.push_back(nid);
            fresh.push(nid);
        }
        fresh
    }

    /// Moves from the root to `id`.
    fn path(&self, mut id: usize) -> Vec<usize> {
        let mut out = vec![id];
        while let Some((p, _)) = self.nodes[id].parent {
            out.push(p);
            id = p;
        }
        out.reverse();
        out
    }

    fn trace_to(&self, id: usize) -> ReductionTrace {
        let mut t = ReductionTrace::new(self.nodes[0].diagram.clone());
        for &n in self.path(id).iter().skip(1) {
            let (_, mv) = self.nodes[n].parent.expect("non-root");
            t.record(mv, &self.nodes[n].diagram);
        }
        t
    }
}

/// Breadth-first search for the empty diagram using only `kinds`.
pub fn is_trivial_with_moves(g: &GaussDiagram, limits: &SearchLimits, kinds: &[GaussMoveKind]) -> SearchVerdict {
    let cap = limits.max_chords.unwrap_or(g.n() + 2);
    let mut bfs = Bfs::new(g.clone());
    if g.is_empty() {
        return SearchVerdict::Certified(ReductionTrace::new(g.clone()));
    }
    while let Some(id) = bfs.queue.pop_front() {
        for nid in bfs.expand(id, kinds, limits, cap) {
            if bfs.nodes[nid].diagram.is_empty() {
                return SearchVerdict::Certified(bfs.trace_to(nid));
            }
        }
        if bfs.nodes.len() >= limits.max_states {
            return SearchVerdict::Unknown { states: bfs.nodes.len(), exhausted: false };
        }
    }
    SearchVerdict::Unknown { states: bfs.nodes.len(), exhausted: !bfs.depth_cut }
}

/// Greedy reduction first; if chords remain, breadth-first search over
/// C1, C2, C3 and W from the reduced diagram.
pub fn is_trivial_bounded(g: &GaussDiagram, limits: &SearchLimits) -> SearchVerdict {
    let (rest, mut trace) = reduce(g);
    if rest.is_empty() {
        return SearchVerdict::Certified(trace);
    }
    let limits = SearchLimits { max_chords: Some(limits.max_chords.unwrap_or(g.n() + 2)), ..*limits };
    match is_trivial_with_moves(&rest, &limits, &ALL_KINDS) {
        SearchVerdict::Certified(t) => {
            trace.extend(t);
            SearchVerdict::Certified(trace)
        }
        u => u,
    }
}

/// A move on `g` leading to a diagram with key `target`.
fn step_towards(g: &GaussDiagram, target: &CanonicalKey, cap: usize) -> Option<(GaussMove, GaussDiagram)> {
    enumerate_moves_capped(g, &ALL_KINDS, cap).into_iter().find_map(|mv| {
        let next = apply_gauss_move(g, &mv).ok()?;
        (canonical_key(&next) == *target).then_some((mv, next))
    })
}

/// Bidirectional search for a common diagram. The trace runs from `g1` to a
/// rotation of `g2`.
pub fn equivalent_bounded(g1: &GaussDiagram, g2: &GaussDiagram, limits: &SearchLimits) -> SearchVerdict {
    let cap = limits.max_chords.unwrap_or(g1.n().max(g2.n()) + 2);
    let half = SearchLimits { max_depth: limits.max_depth.div_ceil(2).max(1), ..*limits };
    let mut fwd = Bfs::new(g1.clone());
    let mut bwd = Bfs::new(g2.clone());

    let meet = |fwd: &Bfs, bwd: &Bfs, f: usize, b: usize| -> SearchVerdict {
        let mut trace = fwd.trace_to(f);
        let mut cur = fwd.nodes[f].diagram.clone();
        // walk the other tree back to its root, re-finding each reverse move
        let back: Vec<usize> = bwd.path(b).into_iter().rev().collect();
        for w in back.windows(2) {
            let target = canonical_key(&bwd.nodes[w[1]].diagram);
            let (mv, next) = step_towards(&cur, &target, cap).expect("every move has a reverse");
            trace.record(mv, &next);
            cur = next;
        }
        SearchVerdict::Certified(trace)
    };

    if let Some(&b) = bwd.index.get(&canonical_key(g1)) {
        return meet(&fwd, &bwd, 0, b);
    }
    loop {
        let side_fwd = fwd.queue.len() <= bwd.queue.len() && !fwd.queue.is_empty() || bwd.queue.is_empty();
        let (this, other) = if side_fwd { (&mut fwd, &bwd) } else { (&mut bwd, &fwd) };
        let Some(id) = this.queue.pop_front() else { break };
        for nid in this.expand(id, &ALL_KINDS, &half, cap) {
            let key = canonical_key(&this.nodes[nid].diagram);
            if let Some(&o) = other.index.get(&key) {
                return if side_fwd { meet(&fwd, &bwd, nid, o) } else { meet(&fwd, &bwd, o, nid) };
            }
        }
        if fwd.nodes.len() + bwd.nodes.len() >= limits.max_states {
            return SearchVerdict::Unknown { states: fwd.nodes.len() + bwd.nodes.len(), exhausted: false };
        }
        if fwd.queue.is_empty() && bwd.queue.is_empty() {
            break;
        }
    }
    SearchVerdict::Unknown {
        states: fwd.nodes.len() + bwd.nodes.len(),
        exhausted: !fwd.depth_cut && !bwd.depth_cut,
    }
}

/// Every labelled Gauss diagram with `n` chords: pairings of the `2n` points
/// in lexicographic order, then orientations, then signs (bit `i` of each
/// mask refers to chord `i + 1`). With `dedup`, keeps the first diagram of
/// each rotation class.
pub fn enumerate_gauss(n: usize, dedup: bool) -> Vec<GaussDiagram> {
    let pairings = crate::pd::build::perfect_matchings(2 * n);
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for pairing in &pairings {
        for orient in 0u32..(1 << n) {
            for signs in 0u32..(1 << n) {
                let mut points = vec![Endpoint { chord: 0, end: End::Tail }; 2 * n];
                let mut sign_map = std::collections::BTreeMap::new();
                for (i, &(a, b)) in pairing.iter().enumerate() {
                    let id = i as u32 + 1;
                    let (t, h) = if orient >> i & 1 == 0 { (a, b) } else { (b, a) };
                    points[t] = Endpoint { chord: id, end: End::Tail };
                    points[h] = Endpoint { chord: id, end: End::Head };
                    sign_map.insert(id, if signs >> i & 1 == 0 { Sign::Pos } else { Sign::Neg });
                }
                let g = GaussDiagram::from_parts(points, sign_map);
                if dedup && !seen.insert(canonical_key(&g)) {
                    continue;
                }
                out.push(g);
            }
        }
    }
    out
}

/// Two diagrams related by one move, both certified trivial.
#[derive(Clone, Debug)]
pub struct TrivialPair {
    pub before: PlanarDiagram,
    pub after: PlanarDiagram,
    pub mv: PdMove,
    pub before_trace: ReductionTrace,
    pub after_trace: ReductionTrace,
}

fn templates(kind: PdMoveKind) -> Vec<Vec<CornerKind>> {
    use CornerKind::Classical;
    match kind {
        // cyclic triangles
        PdMoveKind::Delta => vec![vec![Classical { over: 1 }; 3], vec![Classical { over: 0 }; 3]],
        // alternating squares
        PdMoveKind::Sharp => vec![vec![Classical { over: 1 }; 4], vec![Classical { over: 0 }; 4]],
        _ => Vec::new(),
    }
}

/// Searches closures of the move's tangle, smallest first (total crossings,
/// then classical crossings), for a non-degenerate instance whose two sides
/// both project to trivial Gauss diagrams. `limits.max_chords` caps the
/// crossing count; each examined pair spends two states.
pub fn find_single_move_trivial_pair(kind: PdMoveKind, limits: &SearchLimits) -> Option<TrivialPair> {
    let max_crossings = limits.max_chords.unwrap_or(8);
    let mut candidates: Vec<PlanarDiagram> = templates(kind)
        .iter()
        .flat_map(|t| polygon_closures(t, ClosureKinds::All))
        .map(|c| c.pd)
        .filter(|p| p.len() <= max_crossings)
        .collect();
    candidates.sort_by_key(|p| (p.len(), p.classical_count()));

    let mut budget = limits.max_states;
    let inner = SearchLimits { max_chords: None, ..*limits };
    let mut tried = BTreeSet::new();
    for pd in candidates {
        if !tried.insert(pd.canonical_key()) {
            continue;
        }
        let g_before = gauss_image(&pd);
        for dir in [MoveDirection::Forward, MoveDirection::Backward] {
            for mv in find_sites(&pd, kind, dir) {
                if budget < 2 {
                    return None;
                }
                budget -= 2;
                let Ok(after) = apply_pd_move(&pd, &mv) else { continue };
                let g_after = gauss_image(&after);
                if canonical_code(&g_after) == canonical_code(&g_before) {
                    continue;
                }
                let SearchVerdict::Certified(bt) = is_trivial_bounded(&g_before, &inner) else { continue };
                let SearchVerdict::Certified(at) = is_trivial_bounded(&g_after, &inner) else { continue };
                return Some(TrivialPair { before: pd, after, mv, before_trace: bt, after_trace: at });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::parse_gauss_code;

    const TREFOIL: &str = "O1+ U2+ O3+ U1+ O2+ U3+";

    #[test]
    fn triviality_examples() {
        let lim = SearchLimits::default();
        match is_trivial_bounded(&GaussDiagram::empty(), &lim) {
            SearchVerdict::Certified(t) => assert!(t.is_empty()),
            v => panic!("{v}"),
        }
        let d = parse_gauss_code("O1+ O2+ U1+ U2+").unwrap();
        let v = is_trivial_bounded(&d, &lim);
        assert!(v.trace().unwrap().replay().unwrap().is_empty());
    }

    #[test]
    fn trefoil_is_not_certified() {
        let t = parse_gauss_code(TREFOIL).unwrap();
        let lim = SearchLimits { max_states: 20_000, ..SearchLimits::default() };
        assert!(!is_trivial_bounded(&t, &lim).is_certified());
    }

    #[test]
    fn equivalence_examples() {
        let lim = SearchLimits { max_states: 20_000, ..SearchLimits::default() };
        let one = parse_gauss_code("O1+ U1+").unwrap();
        match equivalent_bounded(&one, &one, &lim) {
            SearchVerdict::Certified(t) => assert!(t.is_empty()),
            v => panic!("{v}"),
        }
        let v = equivalent_bounded(&one, &GaussDiagram::empty(), &lim);
        let t = v.trace().expect("one C1 move");
        assert_eq!(t.len(), 1);
        assert!(t.replay().unwrap().is_empty());
        let t = parse_gauss_code(TREFOIL).unwrap();
        assert!(!equivalent_bounded(&t, &GaussDiagram::empty(), &lim).is_certified());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_gauss(0, false).len(), 1);
        assert_eq!(enumerate_gauss(1, false).len(), 4);
        assert_eq!(enumerate_gauss(1, true).len(), 2);
        assert_eq!(enumerate_gauss(2, false).len(), 48);
        assert_eq!(enumerate_gauss(3, false).len(), 15 * 64);
    }

    #[test]
    fn pairs_need_a_welded_crossing() {
        // on classical knots a single Delta or sharp move changes the knot type
        let lim = SearchLimits { max_chords: Some(8), ..SearchLimits::default() };
        for kind in [PdMoveKind::Delta, PdMoveKind::Sharp] {
            let p = find_single_move_trivial_pair(kind, &lim).expect("pair within 8 crossings");
            assert!(p.before.classical_count() < p.before.len(), "{kind}");
            assert_eq!(apply_pd_move(&p.before, &p.mv).unwrap().canonical_key(), p.after.canonical_key());
        }
    }

    #[test]
    fn pair_search_respects_state_budget() {
        let lim = SearchLimits { max_states: 1, ..SearchLimits::default() };
        assert!(find_single_move_trivial_pair(PdMoveKind::Delta, &lim).is_none());
    }
}
