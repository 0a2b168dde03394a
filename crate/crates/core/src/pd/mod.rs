//! Planar diagrams with classical and welded crossings.
//!
//! Each crossing lists its four incident edge ids in counterclockwise order.
//! Slot 0 always holds an incoming edge: the incoming under-edge of a
//! classical crossing, or the marked incoming edge of a welded one. Strands
//! run between opposite slots (0–2 and 1–3). For a classical crossing the
//! over-strand enters at slot 3 when the sign is positive and at slot 1 when
//! it is negative; a welded crossing records its second incoming slot
//! explicitly.
//!
//! Faces come from the rotation system alone: leaving a crossing through
//! slot `s`, arriving at slot `s'`, the face continues out of slot `s' - 1`,
//! so every face lies to the left of its darts.
//!
//! The crossing-free circle has no crossings and a single notional edge 1.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gauss::{ChordId, End, Endpoint, GaussDiagram, Sign};

pub mod build;
pub mod moves;
pub mod table;

pub use moves::{
    apply_pd_move, find_sites, inverse_move, MoveDirection, PdMove, PdMoveKind, PdSite, Side,
    StripPattern, Variant,
};

pub type EdgeId = u32;

/// `(crossing, slot)`; as a dart it means "leave the crossing through this slot".
pub type Dart = (usize, u8);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CrossingKind {
    Classical(Sign),
    /// `other_in` is the second incoming slot, 1 or 3.
    Welded { other_in: u8 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Crossing {
    pub kind: CrossingKind,
    pub edges: [EdgeId; 4],
}

impl Crossing {
    pub fn classical(sign: Sign, edges: [EdgeId; 4]) -> Self {
        Crossing { kind: CrossingKind::Classical(sign), edges }
    }

    pub fn welded(edges: [EdgeId; 4], other_in: u8) -> Self {
        Crossing { kind: CrossingKind::Welded { other_in }, edges }
    }

    pub fn is_classical(&self) -> bool {
        matches!(self.kind, CrossingKind::Classical(_))
    }

    pub fn is_welded(&self) -> bool {
        !self.is_classical()
    }

    pub fn sign(&self) -> Option<Sign> {
        match self.kind {
            CrossingKind::Classical(s) => Some(s),
            CrossingKind::Welded { .. } => None,
        }
    }

    pub fn other_in(&self) -> u8 {
        match self.kind {
            CrossingKind::Classical(Sign::Pos) => 3,
            CrossingKind::Classical(Sign::Neg) => 1,
            CrossingKind::Welded { other_in } => other_in,
        }
    }

    pub fn is_incoming(&self, slot: u8) -> bool {
        slot == 0 || slot == self.other_in()
    }

    /// True when `slot` belongs to the over-strand (classical crossings only).
    pub fn is_over(&self, slot: u8) -> bool {
        self.is_classical() && slot % 2 == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PdViolation {
    BadEdgeId { crossing: usize },
    DanglingEdge { edge: EdgeId, count: usize },
    BadOverUnder { crossing: usize },
    InconsistentOrientation { edge: EdgeId },
    MultipleComponents { reached: usize, total: usize },
    NonPlanar { faces: usize, expected: usize },
}

impl fmt::Display for PdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PdViolation::BadEdgeId { crossing } => write!(f, "crossing {crossing}: edge ids must be positive"),
            PdViolation::DanglingEdge { edge, count } => {
                write!(f, "DanglingEdge: edge {edge} used {count} times (expected 2)")
            }
            PdViolation::BadOverUnder { crossing } => write!(f, "BadOverUnder: crossing {crossing}"),
            PdViolation::InconsistentOrientation { edge } => {
                write!(f, "InconsistentOrientation: edge {edge} is not one outgoing and one incoming end")
            }
            PdViolation::MultipleComponents { reached, total } => {
                write!(f, "MultipleComponents: walk covers {reached} of {total} edges")
            }
            PdViolation::NonPlanar { faces, expected } => {
                write!(f, "NonPlanar: {faces} faces, expected {expected}")
            }
        }
    }
}

fn join_violations(v: &[PdViolation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PdError {
    #[error("malformed PD JSON: {0}")]
    Json(String),
    #[error("invalid PD: {}", join_violations(.0))]
    InvalidPd(Vec<PdViolation>),
    #[error("crossing {0} does not exist")]
    UnknownCrossing(usize),
    #[error("crossing {0} is welded, not classical")]
    NotClassical(usize),
    #[error("inapplicable move: {0}")]
    InapplicableMove(String),
    #[error("forbidden move: {0}")]
    ForbiddenMove(String),
    #[error("move table oracle inconsistency: {0}")]
    OracleInconsistency(String),
}

/// One step of the knot walk: arriving at `crossing` through `slot` along `edge`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arrival {
    pub crossing: usize,
    pub slot: u8,
    pub edge: EdgeId,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanarDiagram {
    crossings: Vec<Crossing>,
}

/// Slot-to-slot edge incidence, valid once every edge id appears twice.
#[derive(Clone, Debug)]
pub(crate) struct Topology {
    partner: Vec<[Dart; 4]>,
}

impl Topology {
    fn of(crossings: &[Crossing]) -> Option<Topology> {
        let mut ends: HashMap<EdgeId, Vec<Dart>> = HashMap::new();
        for (c, x) in crossings.iter().enumerate() {
            for s in 0..4u8 {
                ends.entry(x.edges[s as usize]).or_default().push((c, s));
            }
        }
        let mut partner = vec![[(0usize, 0u8); 4]; crossings.len()];
        for v in ends.values() {
            if v.len() != 2 {
                return None;
            }
            partner[v[0].0][v[0].1 as usize] = v[1];
            partner[v[1].0][v[1].1 as usize] = v[0];
        }
        Some(Topology { partner })
    }

    pub(crate) fn partner(&self, d: Dart) -> Dart {
        self.partner[d.0][d.1 as usize]
    }

    /// Next dart along the face to the left of `d`.
    pub(crate) fn face_next(&self, d: Dart) -> Dart {
        let (c, s) = self.partner(d);
        (c, (s + 3) % 4)
    }

    pub(crate) fn faces(&self) -> Vec<Vec<Dart>> {
        let m = self.partner.len();
        let mut seen = vec![[false; 4]; m];
        let mut faces = Vec::new();
        for c in 0..m {
            for s in 0..4u8 {
                if seen[c][s as usize] {
                    continue;
                }
                let mut face = Vec::new();
                let mut d = (c, s);
                while !seen[d.0][d.1 as usize] {
                    seen[d.0][d.1 as usize] = true;
                    face.push(d);
                    d = self.face_next(d);
                }
                faces.push(face);
            }
        }
        faces
    }
}

impl PlanarDiagram {
    pub fn circle() -> Self {
        PlanarDiagram { crossings: Vec::new() }
    }

    /// Builds and validates.
    pub fn new(crossings: Vec<Crossing>) -> Result<Self, PdError> {
        let pd = PlanarDiagram { crossings };
        pd.validate().map_err(PdError::InvalidPd)?;
        Ok(pd)
    }

    pub(crate) fn from_parts(crossings: Vec<Crossing>) -> Self {
        PlanarDiagram { crossings }
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing(&self, i: usize) -> Option<&Crossing> {
        self.crossings.get(i)
    }

    /// Number of crossings.
    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_circle(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_circle()
    }

    pub fn classical_count(&self) -> usize {
        self.crossings.iter().filter(|c| c.is_classical()).count()
    }

    pub fn edge_ids(&self) -> BTreeSet<EdgeId> {
        if self.is_circle() {
            return BTreeSet::from([1]);
        }
        self.crossings.iter().flat_map(|c| c.edges).collect()
    }

    pub fn max_edge_id(&self) -> EdgeId {
        self.edge_ids().into_iter().next_back().unwrap_or(1)
    }

    pub(crate) fn topology(&self) -> Topology {
        Topology::of(&self.crossings).expect("validated diagram")
    }

    pub fn faces(&self) -> Vec<Vec<Dart>> {
        self.topology().faces()
    }

    pub fn validate(&self) -> Result<(), Vec<PdViolation>> {
        let mut errs = Vec::new();
        let mut count: BTreeMap<EdgeId, usize> = BTreeMap::new();
        for (i, c) in self.crossings.iter().enumerate() {
            if let CrossingKind::Welded { other_in } = c.kind {
                if other_in != 1 && other_in != 3 {
                    errs.push(PdViolation::BadOverUnder { crossing: i });
                }
            }
            if c.edges.contains(&0) {
                errs.push(PdViolation::BadEdgeId { crossing: i });
            }
            for e in c.edges {
                *count.entry(e).or_default() += 1;
            }
        }
        for (&edge, &n) in &count {
            if n != 2 {
                errs.push(PdViolation::DanglingEdge { edge, count: n });
            }
        }
        if !errs.is_empty() {
            return Err(errs);
        }
        if self.is_circle() {
            return Ok(());
        }

        // one outgoing and one incoming end per edge
        let mut dirs: BTreeMap<EdgeId, (usize, usize)> = BTreeMap::new();
        for c in &self.crossings {
            for s in 0..4u8 {
                let e = dirs.entry(c.edges[s as usize]).or_default();
                if c.is_incoming(s) {
                    e.1 += 1;
                } else {
                    e.0 += 1;
                }
            }
        }
        for (&edge, &(outs, ins)) in &dirs {
            if outs != 1 || ins != 1 {
                errs.push(PdViolation::InconsistentOrientation { edge });
            }
        }
        if !errs.is_empty() {
            return Err(errs);
        }

        let total = 2 * self.crossings.len();
        let reached = self.walk().len();
        if reached != total {
            return Err(vec![PdViolation::MultipleComponents { reached, total }]);
        }
        let faces = self.faces().len();
        let expected = self.crossings.len() + 2;
        if faces != expected {
            return Err(vec![PdViolation::NonPlanar { faces, expected }]);
        }
        Ok(())
    }

    /// The out-end slot of edge `e`.
    pub(crate) fn out_end(&self, e: EdgeId) -> Option<Dart> {
        for (c, x) in self.crossings.iter().enumerate() {
            for s in 0..4u8 {
                if x.edges[s as usize] == e && !x.is_incoming(s) {
                    return Some((c, s));
                }
            }
        }
        None
    }

    /// Walk leaving `start` (an outgoing slot) until the walk closes up.
    pub(crate) fn walk_from(&self, topo: &Topology, start: Dart) -> Vec<Arrival> {
        let mut out = Vec::new();
        let mut d = start;
        loop {
            let edge = self.crossings[d.0].edges[d.1 as usize];
            let (c, s) = topo.partner(d);
            out.push(Arrival { crossing: c, slot: s, edge });
            d = (c, (s + 2) % 4);
            if d == start || out.len() > 4 * self.crossings.len() {
                break;
            }
        }
        out
    }

    /// The knot walk starting along the smallest edge id.
    pub fn walk(&self) -> Vec<Arrival> {
        if self.is_circle() {
            return Vec::new();
        }
        let topo = match Topology::of(&self.crossings) {
            Some(t) => t,
            None => return Vec::new(),
        };
        let min = *self.crossings.iter().flat_map(|c| c.edges.iter()).min().expect("non-empty");
        let start = self.out_end(min).expect("edge has an out-end");
        self.walk_from(&topo, start)
    }

    /// Flips over/under at a classical crossing, negating its sign.
    pub fn crossing_change(&self, i: usize) -> Result<Self, PdError> {
        let c = self.crossings.get(i).ok_or(PdError::UnknownCrossing(i))?;
        let CrossingKind::Classical(sign) = c.kind else {
            return Err(PdError::NotClassical(i));
        };
        // the old incoming over-slot becomes slot 0
        let oi = c.other_in() as usize;
        let edges = std::array::from_fn(|j| c.edges[(oi + j) % 4]);
        let mut out = self.clone();
        out.crossings[i] = Crossing::classical(sign.flip(), edges);
        Ok(out)
    }

    /// Isomorphism-invariant key: minimum over walk starts of the relabelled
    /// crossing list.
    pub fn canonical_key(&self) -> Vec<u32> {
        if self.is_circle() {
            return Vec::new();
        }
        let topo = self.topology();
        let m = self.crossings.len();
        let mut best: Option<Vec<u32>> = None;
        for (c, x) in self.crossings.iter().enumerate() {
            for s in 0..4u8 {
                if x.is_incoming(s) {
                    continue;
                }
                let walk = self.walk_from(&topo, (c, s));
                let mut label: HashMap<EdgeId, u32> = HashMap::with_capacity(2 * m);
                let mut order = Vec::with_capacity(m);
                let mut seen = vec![false; m];
                for (i, a) in walk.iter().enumerate() {
                    label.insert(a.edge, i as u32 + 1);
                    if !seen[a.crossing] {
                        seen[a.crossing] = true;
                        order.push(a.crossing);
                    }
                }
                let mut key = Vec::with_capacity(5 * m);
                for &ci in &order {
                    let x = &self.crossings[ci];
                    let l: [u32; 4] = std::array::from_fn(|j| label[&x.edges[j]]);
                    match x.kind {
                        CrossingKind::Classical(sg) => {
                            key.push(if sg == Sign::Pos { 0 } else { 1 });
                            key.extend_from_slice(&l);
                        }
                        CrossingKind::Welded { other_in } => {
                            let oi = other_in as usize;
                            if l[oi] < l[0] {
                                key.push(if oi == 1 { 3 } else { 2 });
                                key.extend((0..4).map(|j| l[(oi + j) % 4]));
                            } else {
                                key.push(if oi == 1 { 2 } else { 3 });
                                key.extend_from_slice(&l);
                            }
                        }
                    }
                }
                if best.as_ref().map_or(true, |b| key < *b) {
                    best = Some(key);
                }
            }
        }
        best.unwrap_or_default()
    }

    pub fn is_isomorphic(&self, other: &PlanarDiagram) -> bool {
        self.crossings.len() == other.crossings.len() && self.canonical_key() == other.canonical_key()
    }

    pub fn from_json(text: &str) -> Result<Self, PdError> {
        let raw: JsonPd = serde_json::from_str(text).map_err(|e| PdError::Json(e.to_string()))?;
        let mut crossings = Vec::with_capacity(raw.crossings.len());
        let mut bad = Vec::new();
        for (i, c) in raw.crossings.iter().enumerate() {
            match *c {
                JsonCrossing::Classical { sign, edges } => match Sign::from_value(sign) {
                    Some(s) => crossings.push(Crossing::classical(s, edges)),
                    None => {
                        bad.push(PdViolation::BadOverUnder { crossing: i });
                        crossings.push(Crossing::classical(Sign::Pos, edges));
                    }
                },
                JsonCrossing::Welded { edges } => crossings.push(Crossing::welded(edges, 0)),
            }
        }
        if !bad.is_empty() {
            return Err(PdError::InvalidPd(bad));
        }
        infer_welded_orientation(&mut crossings);
        PlanarDiagram::new(crossings)
    }

    pub fn to_json(&self) -> String {
        let crossings = self
            .crossings
            .iter()
            .map(|c| match c.kind {
                CrossingKind::Classical(s) => JsonCrossing::Classical { sign: s.value() as i64, edges: c.edges },
                CrossingKind::Welded { .. } => JsonCrossing::Welded { edges: c.edges },
            })
            .collect();
        serde_json::to_string(&JsonPd { crossings }).expect("serializable")
    }
}

impl fmt::Display for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// Welded crossings in the file format carry no second incoming slot; it is
/// recovered by walking the circuit from crossing 0.
fn infer_welded_orientation(crossings: &mut [Crossing]) {
    let Some(topo) = Topology::of(crossings) else {
        return;
    };
    if crossings.is_empty() {
        return;
    }
    let start = (0usize, 2u8);
    let mut d = start;
    for _ in 0..4 * crossings.len() {
        let (c, s) = topo.partner(d);
        if let CrossingKind::Welded { other_in } = &mut crossings[c].kind {
            if s % 2 == 1 {
                *other_in = s;
            }
        }
        d = (c, (s + 2) % 4);
        if d == start {
            break;
        }
    }
    for c in crossings.iter_mut() {
        if let CrossingKind::Welded { other_in } = &mut c.kind {
            if *other_in == 0 {
                // unreached; validation reports the disconnected walk
                *other_in = 3;
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonPd {
    crossings: Vec<JsonCrossing>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum JsonCrossing {
    Classical { sign: i64, edges: [EdgeId; 4] },
    Welded { edges: [EdgeId; 4] },
}

pub fn validate_pd(p: &PlanarDiagram) -> Result<(), Vec<PdViolation>> {
    p.validate()
}

/// Chord `i + 1` is classical crossing `i`, oriented over to under. Welded
/// crossings leave no trace.
pub fn pd_to_gauss(p: &PlanarDiagram) -> Result<GaussDiagram, PdError> {
    p.validate().map_err(PdError::InvalidPd)?;
    Ok(gauss_image(p))
}

pub(crate) fn gauss_image(p: &PlanarDiagram) -> GaussDiagram {
    let mut points = Vec::new();
    let mut signs = BTreeMap::new();
    for a in p.walk() {
        let x = &p.crossings[a.crossing];
        if let CrossingKind::Classical(s) = x.kind {
            let chord = a.crossing as ChordId + 1;
            let end = if a.slot % 2 == 1 { End::Tail } else { End::Head };
            points.push(Endpoint { chord, end });
            signs.insert(chord, s);
        }
    }
    GaussDiagram::from_parts(points, signs)
}

pub fn pd_crossing_change(p: &PlanarDiagram, crossing: usize) -> Result<PlanarDiagram, PdError> {
    p.crossing_change(crossing)
}

/// Hand-encoded standard trefoil with three positive crossings.
pub fn trefoil() -> PlanarDiagram {
    PlanarDiagram::from_parts(vec![
        Crossing::classical(Sign::Pos, [1, 5, 2, 4]),
        Crossing::classical(Sign::Pos, [3, 1, 4, 6]),
        Crossing::classical(Sign::Pos, [5, 3, 6, 2]),
    ])
}
