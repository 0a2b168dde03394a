//! Local rewrites of planar diagrams.
//!
//! Every move is a replacement inside a small disk bounded by a face or
//! inserted into one:
//!
//! * kinks (C1, V1) are inserted on one side of an edge and removed from
//!   monogon faces;
//! * strips of crossings (C2, V2, T4, T4bar) are inserted between two darts
//!   of a common face and removed from bigon faces or chains of bigons;
//! * triangle faces (C3, V3, V4, W, Delta) are flipped, every pair of strands
//!   crossing on the other side;
//! * square faces (Sharp, Pass, Gamma) change all four crossings.
//!
//! Triangle and square moves are their own inverses, so forward and backward
//! instances coincide.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use super::build::{normalize, CornerKind};
use super::{Crossing, Dart, EdgeId, PdError, PlanarDiagram, Topology};
use crate::gauss::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PdMoveKind {
    C1,
    C2,
    C3,
    V1,
    V2,
    V3,
    V4,
    W,
    Delta,
    Sharp,
    Pass,
    T4,
    T4Bar,
    Gamma,
}

impl PdMoveKind {
    pub const ALL: [PdMoveKind; 14] = [
        PdMoveKind::C1,
        PdMoveKind::C2,
        PdMoveKind::C3,
        PdMoveKind::V1,
        PdMoveKind::V2,
        PdMoveKind::V3,
        PdMoveKind::V4,
        PdMoveKind::W,
        PdMoveKind::Delta,
        PdMoveKind::Sharp,
        PdMoveKind::Pass,
        PdMoveKind::T4,
        PdMoveKind::T4Bar,
        PdMoveKind::Gamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PdMoveKind::C1 => "C1",
            PdMoveKind::C2 => "C2",
            PdMoveKind::C3 => "C3",
            PdMoveKind::V1 => "V1",
            PdMoveKind::V2 => "V2",
            PdMoveKind::V3 => "V3",
            PdMoveKind::V4 => "V4",
            PdMoveKind::W => "W",
            PdMoveKind::Delta => "Delta",
            PdMoveKind::Sharp => "Sharp",
            PdMoveKind::Pass => "Pass",
            PdMoveKind::T4 => "T4",
            PdMoveKind::T4Bar => "T4bar",
            PdMoveKind::Gamma => "Gamma",
        }
    }

    pub fn is_virtual(self) -> bool {
        matches!(self, PdMoveKind::V1 | PdMoveKind::V2 | PdMoveKind::V3 | PdMoveKind::V4)
    }

    fn is_triangle(self) -> bool {
        matches!(self, PdMoveKind::C3 | PdMoveKind::V3 | PdMoveKind::V4 | PdMoveKind::W | PdMoveKind::Delta)
    }

    fn is_square(self) -> bool {
        matches!(self, PdMoveKind::Sharp | PdMoveKind::Pass | PdMoveKind::Gamma)
    }
}

impl fmt::Display for PdMoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PdMoveKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        PdMoveKind::ALL
            .iter()
            .copied()
            .find(|k| k.name().to_ascii_lowercase() == lower)
            .ok_or_else(|| format!("unknown move kind {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveDirection {
    Forward,
    Backward,
}

impl MoveDirection {
    pub fn opposite(self) -> Self {
        match self {
            MoveDirection::Forward => MoveDirection::Backward,
            MoveDirection::Backward => MoveDirection::Forward,
        }
    }
}

impl fmt::Display for MoveDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveDirection::Forward => "forward",
            MoveDirection::Backward => "backward",
        })
    }
}

/// Side of an oriented edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// Crossing pattern of an inserted strip. The first strand is the edge of
/// the strip's first dart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StripPattern {
    FirstOver,
    SecondOver,
    Welded,
    /// Four alternating crossings; `over` picks which diagonal is on top.
    Twist { over: u8 },
}

impl StripPattern {
    fn corners(self) -> Vec<CornerKind> {
        use CornerKind::*;
        match self {
            StripPattern::FirstOver => vec![Classical { over: 0 }, Classical { over: 1 }],
            StripPattern::SecondOver => vec![Classical { over: 1 }, Classical { over: 0 }],
            StripPattern::Welded => vec![Welded, Welded],
            StripPattern::Twist { over } => vec![Classical { over }; 4],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Plain,
    /// `sign` is `None` for a welded kink.
    Kink { sign: Option<Sign>, side: Side },
    Strip(StripPattern),
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Plain => f.write_str("plain"),
            Variant::Kink { sign, side } => {
                let s = sign.map(|s| s.symbol().to_string()).unwrap_or_else(|| "w".into());
                write!(f, "kink{s}-{}", if *side == Side::Left { "left" } else { "right" })
            }
            Variant::Strip(p) => match p {
                StripPattern::FirstOver => f.write_str("first-over"),
                StripPattern::SecondOver => f.write_str("second-over"),
                StripPattern::Welded => f.write_str("welded"),
                StripPattern::Twist { over } => write!(f, "twist{over}"),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PdSite {
    /// Darts of a face, in face order starting from the smallest.
    Face(Vec<Dart>),
    /// An edge receiving a kink.
    Edge(EdgeId),
    /// Two darts of one face receiving a strip between their edges.
    Strip(Dart, Dart),
    /// Crossings of a twist chain, sorted.
    Region(Vec<usize>),
}

impl fmt::Display for PdSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dart = |d: &Dart| format!("{}:{}", d.0, d.1);
        match self {
            PdSite::Face(ds) => write!(f, "face {}", ds.iter().map(dart).collect::<Vec<_>>().join(",")),
            PdSite::Edge(e) => write!(f, "edge {e}"),
            PdSite::Strip(a, b) => write!(f, "strip {} {}", dart(a), dart(b)),
            PdSite::Region(cs) => {
                write!(f, "region {}", cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PdMove {
    pub kind: PdMoveKind,
    pub direction: MoveDirection,
    pub site: PdSite,
    pub variant: Variant,
}

impl fmt::Display for PdMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.kind, self.direction, self.site, self.variant)
    }
}

fn inapplicable(msg: impl Into<String>) -> PdError {
    PdError::InapplicableMove(msg.into())
}

// ---- face analysis -------------------------------------------------------

/// What a face permits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Shape {
    Move(PdMoveKind),
    Forbidden,
    Nothing,
}

fn distinct_corners(darts: &[Dart]) -> bool {
    let set: BTreeSet<usize> = darts.iter().map(|d| d.0).collect();
    set.len() == darts.len()
}

fn is_face(topo: &Topology, darts: &[Dart]) -> bool {
    !darts.is_empty()
        && (0..darts.len()).all(|i| topo.face_next(darts[i]) == darts[(i + 1) % darts.len()])
}

/// `true` when the face edge leaving through `d` points along the face walk.
fn along(pd: &PlanarDiagram, d: Dart) -> bool {
    !pd.crossings[d.0].is_incoming(d.1)
}

pub(crate) fn classify_face(pd: &PlanarDiagram, darts: &[Dart]) -> Shape {
    let cx = |i: usize| &pd.crossings[darts[i].0];
    let dep = |i: usize| darts[i].1 as usize;
    match darts.len() {
        1 => {
            if cx(0).is_classical() {
                Shape::Move(PdMoveKind::C1)
            } else {
                Shape::Move(PdMoveKind::V1)
            }
        }
        2 if distinct_corners(darts) => match (cx(0).is_classical(), cx(1).is_classical()) {
            (false, false) => Shape::Move(PdMoveKind::V2),
            (true, true) if (dep(0) + dep(1)) % 2 == 1 => Shape::Move(PdMoveKind::C2),
            _ => Shape::Nothing,
        },
        3 if distinct_corners(darts) => {
            let welded: Vec<usize> = (0..3).filter(|&i| cx(i).is_welded()).collect();
            // strand i runs along face edge i: over at corner i when the
            // departing slot is odd, over at corner i+1 when that one's is even
            let over_here = |i: usize| dep(i % 3) % 2 == 1;
            let over_next = |i: usize| dep((i + 1) % 3) % 2 == 0;
            match welded.len() {
                3 => Shape::Move(PdMoveKind::V3),
                2 => Shape::Move(PdMoveKind::V4),
                1 => {
                    let j = (welded[0] + 1) % 3;
                    match (over_here(j), over_next(j)) {
                        (true, true) => Shape::Move(PdMoveKind::W),
                        (false, false) => Shape::Forbidden,
                        _ => Shape::Nothing,
                    }
                }
                _ => {
                    if (0..3).any(|i| over_here(i) && over_next(i)) {
                        Shape::Move(PdMoveKind::C3)
                    } else {
                        Shape::Move(PdMoveKind::Delta)
                    }
                }
            }
        }
        4 if distinct_corners(darts) && (0..4).all(|i| cx(i).is_classical()) => {
            let o: Vec<bool> = (0..4).map(|i| dep(i) % 2 == 1).collect();
            let a: Vec<bool> = darts.iter().map(|&d| along(pd, d)).collect();
            if o.iter().all(|&x| x == o[0]) {
                // A boundary oriented as one cycle admits kink closures on
                // which the change preserves the knot type, so that case is
                // not a sharp move.
                if a.iter().all(|&x| x == a[0]) {
                    return Shape::Nothing;
                }
                return Shape::Move(PdMoveKind::Sharp);
            }
            if o[0] == o[2] && o[1] == o[3] && o[0] != o[1] {
                if a[0] == a[2] && a[1] == a[3] {
                    return Shape::Move(PdMoveKind::Pass);
                }
                if a[0] != a[2] && a[1] != a[3] {
                    return Shape::Move(PdMoveKind::Gamma);
                }
            }
            Shape::Nothing
        }
        _ => Shape::Nothing,
    }
}

// ---- rewrites ------------------------------------------------------------

/// Result of a rewrite together with the edges interior to the rewritten disk.
pub(crate) struct Applied {
    pub pd: PlanarDiagram,
    pub internal: Vec<EdgeId>,
}

fn flip_triangle(pd: &PlanarDiagram, darts: &[Dart]) -> Applied {
    let y: Vec<usize> = darts.iter().map(|d| d.0).collect();
    let dep: Vec<usize> = darts.iter().map(|d| d.1 as usize).collect();
    let port = |p: usize| -> Dart {
        let i = (p / 2) % 3;
        (y[i], ((dep[i] + 2 + p % 2) % 4) as u8)
    };
    let port_edge = |p: usize| pd.crossings[port(p).0].edges[port(p).1 as usize];
    let port_in = |p: usize| pd.crossings[port(p).0].is_incoming(port(p).1);
    let mut f: Vec<EdgeId> = darts.iter().map(|d| pd.crossings[d.0].edges[d.1 as usize]).collect();
    f.sort_unstable();

    let mut out = pd.crossings.clone();
    for i in 0..3 {
        let edges = [f[(i + 2) % 3], port_edge(2 * i + 1), port_edge((2 * i + 2) % 6), f[i]];
        let incoming = [
            port_in((2 * i + 5) % 6),
            port_in(2 * i + 1),
            port_in((2 * i + 2) % 6),
            !port_in(2 * i + 1),
        ];
        let src = (i + 2) % 3;
        let kind = if pd.crossings[y[src]].is_welded() {
            CornerKind::Welded
        } else {
            CornerKind::Classical { over: (dep[src] % 2) as u8 }
        };
        out[y[src]] = normalize(kind, edges, incoming).0;
    }
    Applied { pd: PlanarDiagram::from_parts(out), internal: f }
}

/// Deletes `region`, joining each strand's entry and exit edges. Joined
/// edges keep the smaller id.
fn remove_region(pd: &PlanarDiagram, topo: &Topology, region: &[usize], internal: &BTreeSet<EdgeId>) -> PlanarDiagram {
    let mut parent: HashMap<EdgeId, EdgeId> = HashMap::new();
    fn find(p: &mut HashMap<EdgeId, EdgeId>, e: EdgeId) -> EdgeId {
        let mut r = e;
        while let Some(&q) = p.get(&r) {
            if q == r {
                break;
            }
            r = q;
        }
        p.insert(e, r);
        r
    }
    for &c in region {
        for s in 0..4u8 {
            let entry = pd.crossings[c].edges[s as usize];
            if !pd.crossings[c].is_incoming(s) || internal.contains(&entry) {
                continue;
            }
            let mut cur = (c, s);
            loop {
                let exit = (cur.0, (cur.1 + 2) % 4);
                let e = pd.crossings[exit.0].edges[exit.1 as usize];
                if internal.contains(&e) {
                    cur = topo.partner(exit);
                    continue;
                }
                let (a, b) = (find(&mut parent, entry), find(&mut parent, e));
                let (lo, hi) = (a.min(b), a.max(b));
                parent.insert(hi, lo);
                parent.insert(lo, lo);
                break;
            }
        }
    }
    let cut: BTreeSet<usize> = region.iter().copied().collect();
    let kept = pd
        .crossings
        .iter()
        .enumerate()
        .filter(|(i, _)| !cut.contains(i))
        .map(|(_, x)| Crossing { kind: x.kind, edges: x.edges.map(|e| find(&mut parent, e)) })
        .collect();
    PlanarDiagram::from_parts(kept)
}

fn kink_corner(sign: Option<Sign>, edges: [EdgeId; 4], incoming: [bool; 4]) -> Crossing {
    match sign {
        None => normalize(CornerKind::Welded, edges, incoming).0,
        Some(s) => [0u8, 1]
            .iter()
            .map(|&over| normalize(CornerKind::Classical { over }, edges, incoming).0)
            .find(|c| c.sign() == Some(s))
            .expect("one over choice yields each sign"),
    }
}

fn insert_kink(pd: &PlanarDiagram, e: EdgeId, sign: Option<Sign>, side: Side) -> Result<PlanarDiagram, PdError> {
    let fresh = pd.max_edge_id() + 1;
    if pd.is_circle() {
        if e != 1 {
            return Err(inapplicable(format!("edge {e} does not exist")));
        }
        let (edges, incoming) = match side {
            Side::Left => ([1, 1, fresh, fresh], [true, false, false, true]),
            Side::Right => ([1, fresh, fresh, 1], [true, true, false, false]),
        };
        return Ok(PlanarDiagram::from_parts(vec![kink_corner(sign, edges, incoming)]));
    }
    let out_end = pd.out_end(e).ok_or_else(|| inapplicable(format!("edge {e} does not exist")))?;
    let topo = pd.topology();
    let (b, sb) = topo.partner(out_end);
    let (p3, lp) = (fresh, fresh + 1);
    let (edges, incoming) = match side {
        Side::Left => ([e, p3, lp, lp], [true, false, false, true]),
        Side::Right => ([e, lp, lp, p3], [true, true, false, false]),
    };
    let mut out = pd.crossings.clone();
    out[b].edges[sb as usize] = p3;
    out.push(kink_corner(sign, edges, incoming));
    Ok(PlanarDiagram::from_parts(out))
}

fn insert_strip(pd: &PlanarDiagram, topo: &Topology, d1: Dart, d2: Dart, pattern: &[CornerKind]) -> Applied {
    let k = pattern.len();
    let e1 = pd.crossings[d1.0].edges[d1.1 as usize];
    let e2 = pd.crossings[d2.0].edges[d2.1 as usize];
    let (b1, b2) = (topo.partner(d1), topo.partner(d2));
    // horizontal flow, left to right, of each strand
    let e1_lr = along(pd, d1);
    let e2_lr = !along(pd, d2);
    let lr = |is_e1: bool| if is_e1 { e1_lr } else { e2_lr };

    let mut bottom = vec![0; k + 1];
    let mut top = vec![0; k + 1];
    if e1_lr {
        bottom[0] = e1;
    } else {
        bottom[k] = e1;
    }
    if e2_lr {
        top[0] = e2;
    } else {
        top[k] = e2;
    }
    let mut next = pd.max_edge_id() + 1;
    for id in bottom.iter_mut().chain(top.iter_mut()) {
        if *id == 0 {
            *id = next;
            next += 1;
        }
    }

    let mut out = pd.crossings.clone();
    let mut set = |d: Dart, id: EdgeId| out[d.0].edges[d.1 as usize] = id;
    set(d1, bottom[0]);
    set(b1, bottom[k]);
    set(b2, top[0]);
    set(d2, top[k]);
    for j in 1..=k {
        let (bl, br) = (lr(j % 2 == 1), lr(j % 2 == 0));
        let (tl, tr) = (lr(j % 2 == 0), lr(j % 2 == 1));
        // bottom piece j-1 is the first strand when j-1 is even
        let edges = [bottom[j - 1], bottom[j], top[j], top[j - 1]];
        let incoming = [bl, !br, !tr, tl];
        out.push(normalize(pattern[j - 1], edges, incoming).0);
    }
    let internal = bottom[1..k].iter().chain(top[1..k].iter()).copied().collect();
    Applied { pd: PlanarDiagram::from_parts(out), internal }
}

// ---- site discovery ------------------------------------------------------

fn bigon_next(pd: &PlanarDiagram, topo: &Topology, face_of: &HashMap<Dart, usize>, faces: &[Vec<Dart>], corner: Dart) -> Option<(usize, Dart)> {
    // the face across the corner from the bigon containing `corner`
    let across = (corner.0, (corner.1 + 2) % 4);
    let fi = face_of[&across];
    let f = &faces[fi];
    if f.len() != 2 || !distinct_corners(f) {
        return None;
    }
    let _ = (pd, topo);
    let other = if f[0] == across { f[1] } else { f[0] };
    Some((fi, other))
}

fn is_clasp(pd: &PlanarDiagram, f: &[Dart]) -> bool {
    f.len() == 2
        && distinct_corners(f)
        && f.iter().all(|d| pd.crossings[d.0].is_classical())
        && (f[0].1 + f[1].1) % 2 == 0
}

/// Twist chains of three clasp bigons: (sorted crossings, internal edges, parallel).
fn twist_chains(pd: &PlanarDiagram, topo: &Topology) -> Vec<(Vec<usize>, BTreeSet<EdgeId>, bool)> {
    let faces = topo.faces();
    let mut face_of = HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for &d in f {
            face_of.insert(d, i);
        }
    }
    let mut out: Vec<(Vec<usize>, BTreeSet<EdgeId>, bool)> = Vec::new();
    for (fi, f) in faces.iter().enumerate() {
        if !is_clasp(pd, f) {
            continue;
        }
        for start in 0..2 {
            let far = f[1 - start];
            let Some((gi, g_other)) = bigon_next(pd, topo, &face_of, &faces, far) else { continue };
            let Some((hi, h_other)) = bigon_next(pd, topo, &face_of, &faces, g_other) else { continue };
            let chain = [fi, gi, hi];
            if !chain.iter().all(|&i| is_clasp(pd, &faces[i])) {
                continue;
            }
            let mut cs: Vec<usize> = vec![f[start].0, far.0, g_other.0, h_other.0];
            let distinct: BTreeSet<usize> = cs.iter().copied().collect();
            if distinct.len() != 4 {
                continue;
            }
            cs.sort_unstable();
            let internal: BTreeSet<EdgeId> = chain
                .iter()
                .flat_map(|&i| faces[i].iter().map(|d| pd.crossings[d.0].edges[d.1 as usize]))
                .collect();
            let mid = &faces[gi];
            let parallel = along(pd, mid[0]) != along(pd, mid[1]);
            if !out.iter().any(|(c, _, _)| *c == cs) {
                out.push((cs, internal, parallel));
            }
        }
    }
    out
}

fn strip_sites(pd: &PlanarDiagram, topo: &Topology) -> Vec<(Dart, Dart)> {
    let mut out = Vec::new();
    for face in topo.faces() {
        for i in 0..face.len() {
            for j in i + 1..face.len() {
                let (a, b) = (face[i].min(face[j]), face[i].max(face[j]));
                let ea = pd.crossings[a.0].edges[a.1 as usize];
                let eb = pd.crossings[b.0].edges[b.1 as usize];
                if ea != eb {
                    out.push((a, b));
                }
            }
        }
    }
    out
}

fn strip_variants(kind: PdMoveKind) -> Vec<StripPattern> {
    match kind {
        PdMoveKind::C2 => vec![StripPattern::FirstOver, StripPattern::SecondOver],
        PdMoveKind::V2 => vec![StripPattern::Welded],
        PdMoveKind::T4 | PdMoveKind::T4Bar => vec![StripPattern::Twist { over: 0 }, StripPattern::Twist { over: 1 }],
        _ => vec![],
    }
}

/// Every applicable instance of `kind` in `direction`, sorted.
pub fn find_sites(pd: &PlanarDiagram, kind: PdMoveKind, direction: MoveDirection) -> Vec<PdMove> {
    let mut out = Vec::new();
    let mk = |site: PdSite, variant: Variant| PdMove { kind, direction, site, variant };
    use MoveDirection::*;
    use PdMoveKind::*;
    match (kind, direction) {
        (C1 | V1, Forward) => {
            let signs: Vec<Option<Sign>> =
                if kind == C1 { vec![Some(Sign::Pos), Some(Sign::Neg)] } else { vec![None] };
            // on the bare circle both sides give isomorphic diagrams
            let sides: &[Side] = if pd.is_circle() { &[Side::Left] } else { &[Side::Left, Side::Right] };
            for e in pd.edge_ids() {
                for &sign in &signs {
                    for &side in sides {
                        out.push(mk(PdSite::Edge(e), Variant::Kink { sign, side }));
                    }
                }
            }
        }
        (C2 | V2 | T4 | T4Bar, Forward) => {
            if pd.is_circle() {
                return out;
            }
            let topo = pd.topology();
            for (a, b) in strip_sites(pd, &topo) {
                if matches!(kind, T4 | T4Bar) {
                    let parallel = along(pd, a) != along(pd, b);
                    if parallel != (kind == T4) {
                        continue;
                    }
                }
                for p in strip_variants(kind) {
                    out.push(mk(PdSite::Strip(a, b), Variant::Strip(p)));
                }
            }
        }
        (T4 | T4Bar, Backward) => {
            if pd.is_circle() {
                return out;
            }
            let topo = pd.topology();
            for (cs, _, parallel) in twist_chains(pd, &topo) {
                if parallel == (kind == T4) {
                    out.push(mk(PdSite::Region(cs), Variant::Plain));
                }
            }
        }
        _ => {
            if pd.is_circle() {
                return out;
            }
            for face in pd.faces() {
                let wanted = match (kind, direction) {
                    (C1 | V1 | C2 | V2, Backward) => true,
                    _ => kind.is_triangle() || kind.is_square(),
                };
                if wanted && classify_face(pd, &face) == Shape::Move(kind) {
                    out.push(mk(PdSite::Face(face), Variant::Plain));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

pub(crate) fn apply_detailed(pd: &PlanarDiagram, mv: &PdMove) -> Result<Applied, PdError> {
    use MoveDirection::*;
    use PdMoveKind::*;
    let kind = mv.kind;
    match (kind, mv.direction, &mv.site, mv.variant) {
        (C1 | V1, Forward, PdSite::Edge(e), Variant::Kink { sign, side }) => {
            if sign.is_some() != (kind == C1) {
                return Err(inapplicable("kink sign does not match the move kind"));
            }
            Ok(Applied { pd: insert_kink(pd, *e, sign, side)?, internal: vec![] })
        }
        (C2 | V2 | T4 | T4Bar, Forward, PdSite::Strip(a, b), Variant::Strip(p)) => {
            if pd.is_circle() || !strip_variants(kind).contains(&p) {
                return Err(inapplicable("no strip site"));
            }
            let topo = pd.topology();
            if !strip_sites(pd, &topo).contains(&(*a.min(b), *a.max(b))) || a == b {
                return Err(inapplicable(format!("{} is not a pair of darts on one face", mv.site)));
            }
            if matches!(kind, T4 | T4Bar) && (along(pd, *a) != along(pd, *b)) != (kind == T4) {
                return Err(inapplicable("strand orientations do not match the twist kind"));
            }
            Ok(insert_strip(pd, &topo, *a, *b, &p.corners()))
        }
        (T4 | T4Bar, Backward, PdSite::Region(cs), Variant::Plain) => {
            if pd.is_circle() {
                return Err(inapplicable("no crossings"));
            }
            let topo = pd.topology();
            let chain = twist_chains(pd, &topo)
                .into_iter()
                .find(|(c, _, parallel)| c == cs && *parallel == (kind == T4))
                .ok_or_else(|| inapplicable(format!("{} is not a {kind} twist", mv.site)))?;
            Ok(Applied { pd: remove_region(pd, &topo, &chain.0, &chain.1), internal: vec![] })
        }
        (_, _, PdSite::Face(darts), Variant::Plain) => {
            if pd.is_circle() || darts.iter().any(|d| d.0 >= pd.len() || d.1 > 3) {
                return Err(inapplicable(format!("{} does not exist", mv.site)));
            }
            let topo = pd.topology();
            if !is_face(&topo, darts) {
                return Err(inapplicable(format!("{} is not a face", mv.site)));
            }
            let shape = classify_face(pd, darts);
            if kind == W && shape == Shape::Forbidden {
                return Err(PdError::ForbiddenMove(format!(
                    "at {}, the strand through both classical crossings passes under the welded crossing",
                    mv.site
                )));
            }
            if shape != Shape::Move(kind) {
                return Err(inapplicable(format!("{} does not carry a {kind} pattern", mv.site)));
            }
            let edge_at = |d: &Dart| pd.crossings[d.0].edges[d.1 as usize];
            match kind {
                C1 | V1 | C2 | V2 if mv.direction == Backward => {
                    let region: Vec<usize> = darts.iter().map(|d| d.0).collect();
                    let internal = darts.iter().map(edge_at).collect();
                    Ok(Applied { pd: remove_region(pd, &topo, &region, &internal), internal: vec![] })
                }
                _ if kind.is_triangle() => Ok(flip_triangle(pd, darts)),
                _ if kind.is_square() => {
                    let mut out = pd.clone();
                    for d in darts {
                        out = out.crossing_change(d.0)?;
                    }
                    Ok(Applied { pd: out, internal: darts.iter().map(edge_at).collect() })
                }
                _ => Err(inapplicable(format!("{kind} {} does not act on faces", mv.direction))),
            }
        }
        _ => Err(inapplicable(format!("site/variant do not fit {kind} {}", mv.direction))),
    }
}

/// Applies a located move; the result is validated.
pub fn apply_pd_move(pd: &PlanarDiagram, mv: &PdMove) -> Result<PlanarDiagram, PdError> {
    let out = apply_detailed(pd, mv)?.pd;
    out.validate().map_err(PdError::InvalidPd)?;
    Ok(out)
}

/// A move on `after` that restores `before` up to edge relabelling.
pub fn inverse_move(before: &PlanarDiagram, mv: &PdMove, after: &PlanarDiagram) -> Option<PdMove> {
    let target = before.canonical_key();
    find_sites(after, mv.kind, mv.direction.opposite())
        .into_iter()
        .find(|m| apply_pd_move(after, m).map_or(false, |p| p.len() == before.len() && p.canonical_key() == target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::canonical_code;
    use crate::pd::{pd_to_gauss, trefoil};

    fn all_moves(pd: &PlanarDiagram) -> Vec<PdMove> {
        PdMoveKind::ALL
            .iter()
            .flat_map(|&k| {
                find_sites(pd, k, MoveDirection::Forward)
                    .into_iter()
                    .chain(find_sites(pd, k, MoveDirection::Backward))
            })
            .collect()
    }

    #[test]
    fn circle_has_two_kink_sites() {
        let c = PlanarDiagram::circle();
        assert_eq!(find_sites(&c, PdMoveKind::C1, MoveDirection::Forward).len(), 2);
        for m in find_sites(&c, PdMoveKind::C1, MoveDirection::Forward) {
            let k = apply_pd_move(&c, &m).unwrap();
            assert_eq!(k.len(), 1);
            let back = find_sites(&k, PdMoveKind::C1, MoveDirection::Backward);
            assert!(!back.is_empty());
            assert!(apply_pd_move(&k, &back[0]).unwrap().is_circle());
        }
    }

    #[test]
    fn trefoil_sites() {
        let t = trefoil();
        assert!(find_sites(&t, PdMoveKind::C2, MoveDirection::Backward).is_empty());
        let faces: Vec<_> = t.faces().into_iter().filter(|f| f.len() == 3).collect();
        assert_eq!(faces.len(), 2);
        // the standard trefoil's triangles are cyclic
        let delta = find_sites(&t, PdMoveKind::Delta, MoveDirection::Forward);
        assert_eq!(delta.len(), 2);
        assert!(find_sites(&t, PdMoveKind::C3, MoveDirection::Forward).is_empty());
    }

    #[test]
    fn every_move_on_small_diagrams_validates_and_inverts() {
        let mut frontier = vec![PlanarDiagram::circle(), trefoil()];
        let mut seen = 0;
        for depth in 0..2 {
            let mut next = Vec::new();
            for pd in &frontier {
                for m in all_moves(pd) {
                    let out = apply_pd_move(pd, &m).unwrap_or_else(|e| panic!("{m}: {e}"));
                    assert!(inverse_move(pd, &m, &out).is_some(), "{m} has no inverse on {pd}");
                    seen += 1;
                    if depth == 0 && out.len() <= 4 {
                        next.push(out);
                    }
                }
            }
            frontier = next;
        }
        assert!(seen > 50);
    }

    #[test]
    fn virtual_moves_do_not_change_gauss_image() {
        let t = trefoil();
        let mut pds = vec![t.clone()];
        for m in find_sites(&t, PdMoveKind::V2, MoveDirection::Forward) {
            pds.push(apply_pd_move(&t, &m).unwrap());
        }
        for pd in pds {
            let g = canonical_code(&pd_to_gauss(&pd).unwrap());
            for k in [PdMoveKind::V1, PdMoveKind::V2, PdMoveKind::V3, PdMoveKind::V4] {
                for dir in [MoveDirection::Forward, MoveDirection::Backward] {
                    for m in find_sites(&pd, k, dir) {
                        let out = apply_pd_move(&pd, &m).unwrap();
                        assert_eq!(canonical_code(&pd_to_gauss(&out).unwrap()), g, "{m}");
                    }
                }
            }
        }
    }

    #[test]
    fn crossing_changes_at_a_triangle_give_c3_and_forbidden() {
        let t = trefoil();
        // a single crossing change turns a cyclic triangle into a braid-like one
        let face = t.faces().into_iter().find(|f| f.len() == 3).unwrap();
        let u = t.crossing_change(face[0].0).unwrap();
        let face_u = u.faces().into_iter().find(|f| f.len() == 3 && f.contains(&face[1])).unwrap();
        assert_eq!(classify_face(&u, &face_u), Shape::Move(PdMoveKind::C3));
    }

    #[test]
    fn cyclically_oriented_square_is_not_sharp() {
        // four kinks around one square face; changing them all keeps the unknot
        let json = r#"{"crossings":[
            {"kind":"classical","sign":-1,"edges":[5,1,4,5]},
            {"kind":"classical","sign":-1,"edges":[6,2,1,6]},
            {"kind":"classical","sign":-1,"edges":[7,3,2,7]},
            {"kind":"classical","sign":-1,"edges":[8,4,3,8]}]}"#;
        let pd = PlanarDiagram::from_json(json).unwrap();
        assert!(pd.faces().iter().any(|f| f.len() == 4));
        for dir in [MoveDirection::Forward, MoveDirection::Backward] {
            assert!(find_sites(&pd, PdMoveKind::Sharp, dir).is_empty());
        }
    }

    #[test]
    fn forbidden_pattern_is_rejected() {
        // search small closures for a forbidden triangle and check the error
        use crate::pd::build::{polygon_closures, ClosureKinds, CornerKind::*};
        let mut hit = false;
        let cl = |o| Classical { over: o };
        let all = [[Welded, cl(0), cl(0)], [Welded, cl(0), cl(1)], [Welded, cl(1), cl(0)], [Welded, cl(1), cl(1)]];
        for corners in all {
            for c in polygon_closures(&corners, ClosureKinds::WeldedOnly) {
                let face = c.pd.faces().into_iter().find(|f| f.contains(&c.face_dart)).unwrap();
                if classify_face(&c.pd, &face) == Shape::Forbidden {
                    let m = PdMove {
                        kind: PdMoveKind::W,
                        direction: MoveDirection::Forward,
                        site: PdSite::Face(face),
                        variant: Variant::Plain,
                    };
                    assert!(matches!(apply_pd_move(&c.pd, &m), Err(PdError::ForbiddenMove(_))));
                    hit = true;
                }
            }
        }
        assert!(hit);
    }
}
