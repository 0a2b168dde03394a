//! Construction of planar diagrams from unoriented crossing data, small
//! polygon tangles, and all ways of closing such a tangle into a knot.

use std::f64::consts::PI;

use super::{Crossing, CrossingKind, Dart, EdgeId, PdError, PdViolation, PlanarDiagram, Topology};
use crate::gauss::Sign;

/// Crossing type before orientation is known. `over` names the strand pair
/// on top: 0 for slots 0–2, 1 for slots 1–3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CornerKind {
    Welded,
    Classical { over: u8 },
}

impl CornerKind {
    pub const ALL: [CornerKind; 3] =
        [CornerKind::Welded, CornerKind::Classical { over: 0 }, CornerKind::Classical { over: 1 }];
    pub const CLASSICAL: [CornerKind; 2] = [CornerKind::Classical { over: 0 }, CornerKind::Classical { over: 1 }];

    pub fn is_classical(self) -> bool {
        matches!(self, CornerKind::Classical { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RawCrossing {
    pub kind: CornerKind,
    /// Counterclockwise, any starting slot.
    pub edges: [EdgeId; 4],
}

/// Rotates raw slots into normal form given which slots are incoming.
/// Returns the crossing and the rotation `r` (new slot `j` is old slot `r + j`).
pub(crate) fn normalize(kind: CornerKind, edges: [EdgeId; 4], incoming: [bool; 4]) -> (Crossing, u8) {
    debug_assert!(incoming[0] != incoming[2] && incoming[1] != incoming[3]);
    let rot = |r: usize| -> [EdgeId; 4] { std::array::from_fn(|j| edges[(r + j) % 4]) };
    match kind {
        CornerKind::Classical { over } => {
            let under = (over as usize + 1) % 2;
            let r = if incoming[under] { under } else { under + 2 };
            let o = over as usize;
            let over_in = if incoming[o] { o } else { o + 2 };
            let sign = if (over_in + 4 - r) % 4 == 3 { Sign::Pos } else { Sign::Neg };
            (Crossing::classical(sign, rot(r)), r as u8)
        }
        CornerKind::Welded => {
            let r = if incoming[0] { 0 } else { 2 };
            let odd_in = if incoming[1] { 1 } else { 3 };
            let other_in = ((odd_in + 4 - r) % 4) as u8;
            (Crossing::welded(rot(r), other_in), r as u8)
        }
    }
}

/// Orients raw crossings by walking from `start` (taken as outgoing) and
/// normalizes each crossing. Returns the diagram and per-crossing rotations.
pub fn orient(raw: &[RawCrossing], start: Dart) -> Result<(PlanarDiagram, Vec<u8>), PdError> {
    if raw.is_empty() {
        return Ok((PlanarDiagram::circle(), Vec::new()));
    }
    let shell: Vec<Crossing> = raw.iter().map(|r| Crossing::welded(r.edges, 1)).collect();
    let topo = Topology::of(&shell).ok_or_else(|| {
        PdError::InvalidPd(vec![PdViolation::DanglingEdge { edge: 0, count: 0 }])
    })?;
    let mut incoming: Vec<[Option<bool>; 4]> = vec![[None; 4]; raw.len()];
    let mut d = start;
    let mut steps = 0;
    loop {
        incoming[d.0][d.1 as usize] = Some(false);
        let (c, s) = topo.partner(d);
        incoming[c][s as usize] = Some(true);
        d = (c, (s + 2) % 4);
        steps += 1;
        if d == start || steps > 2 * raw.len() {
            break;
        }
    }
    let total = 2 * raw.len();
    if incoming.iter().any(|x| x.iter().any(Option::is_none)) || steps != total {
        return Err(PdError::InvalidPd(vec![PdViolation::MultipleComponents { reached: steps, total }]));
    }
    let mut crossings = Vec::with_capacity(raw.len());
    let mut rotations = Vec::with_capacity(raw.len());
    for (r, inc) in raw.iter().zip(&incoming) {
        let (c, rot) = normalize(r.kind, r.edges, inc.map(|b| b.unwrap()));
        crossings.push(c);
        rotations.push(rot);
    }
    let pd = PlanarDiagram::new(crossings)?;
    Ok((pd, rotations))
}

/// All perfect matchings of `0..2k`, each as pairs `(a, b)` with `a < b`.
pub fn perfect_matchings(points: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            cur.push((a, b));
            rec(free, cur, out);
            cur.pop();
            free.insert(i, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    rec(&mut (0..points).collect(), &mut Vec::new(), &mut out);
    out
}

/// Which kinds the crossings of the closing chords may take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureKinds {
    WeldedOnly,
    All,
}

/// A polygon tangle closed into a knot.
#[derive(Clone, Debug)]
pub struct Closure {
    pub pd: PlanarDiagram,
    /// Crossings `0..closure_crossings` lie on the closing chords; tangle
    /// corner `i` is crossing `closure_crossings + i`.
    pub closure_crossings: usize,
    /// A dart of the tangle's inner face.
    pub face_dart: Dart,
    /// Bit `j` set when port `j` carries an incoming edge.
    pub incoming_ports: u32,
}

fn port_angle(j: usize, k: usize) -> f64 {
    // generic perturbation keeps chord intersections simple
    let jitter = 0.05 * (((j * 37 + 11) % 23) as f64 / 23.0);
    -(PI * j as f64 / k as f64 + jitter)
}

/// Closures of the polygon tangle whose corners have the given kinds. Ports
/// sit counterclockwise around the tangle disk; the outside is drawn through
/// `z -> 1/z` so that closing chords become straight segments in a disk.
pub fn polygon_closures(corners: &[CornerKind], kinds: ClosureKinds) -> Vec<Closure> {
    let k = corners.len();
    assert!(k >= 1);
    let pos: Vec<(f64, f64)> = (0..2 * k)
        .map(|j| {
            let a = port_angle(j, k);
            (a.cos(), a.sin())
        })
        .collect();
    let mut out = Vec::new();
    for matching in perfect_matchings(2 * k) {
        // crossings among chords
        let mut on_chord: Vec<Vec<(f64, usize)>> = vec![Vec::new(); matching.len()];
        let mut points: Vec<((usize, usize), (f64, f64))> = Vec::new();
        for i in 0..matching.len() {
            for j in i + 1..matching.len() {
                let (a, b) = matching[i];
                let (c, d) = matching[j];
                let inside = |x: usize| a < x && x < b;
                if inside(c) == inside(d) {
                    continue;
                }
                let (p, r) = (pos[a], (pos[b].0 - pos[a].0, pos[b].1 - pos[a].1));
                let (q, s) = (pos[c], (pos[d].0 - pos[c].0, pos[d].1 - pos[c].1));
                let den = r.0 * s.1 - r.1 * s.0;
                let t = ((q.0 - p.0) * s.1 - (q.1 - p.1) * s.0) / den;
                let u = ((q.0 - p.0) * r.1 - (q.1 - p.1) * r.0) / den;
                let x = points.len();
                points.push(((i, j), (p.0 + t * r.0, p.1 + t * r.1)));
                on_chord[i].push((t, x));
                on_chord[j].push((u, x));
            }
        }
        let c = points.len();
        let mut next_edge = k as EdgeId + 1;
        let mut port_edge = vec![0; 2 * k];
        // piece ids per chord: piece p runs between its (p-1)th and pth crossing
        let mut pieces: Vec<Vec<EdgeId>> = Vec::new();
        for (i, list) in on_chord.iter_mut().enumerate() {
            list.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            let ids: Vec<EdgeId> = (0..=list.len())
                .map(|_| {
                    next_edge += 1;
                    next_edge - 1
                })
                .collect();
            port_edge[matching[i].0] = ids[0];
            port_edge[matching[i].1] = *ids.last().unwrap();
            pieces.push(ids);
        }
        let mut closure_edges = vec![[0; 4]; c];
        for (x, &((i, j), pt)) in points.iter().enumerate() {
            let mut half: Vec<(f64, EdgeId)> = Vec::with_capacity(4);
            for ch in [i, j] {
                let p = on_chord[ch].iter().position(|&(_, y)| y == x).unwrap();
                let (a, b) = matching[ch];
                half.push(((pos[a].1 - pt.1).atan2(pos[a].0 - pt.0), pieces[ch][p]));
                half.push(((pos[b].1 - pt.1).atan2(pos[b].0 - pt.0), pieces[ch][p + 1]));
            }
            half.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            closure_edges[x] = std::array::from_fn(|s| half[s].1);
        }
        let g = |i: usize| -> EdgeId { (i % k) as EdgeId + 1 };
        let tangle: Vec<RawCrossing> = (0..k)
            .map(|i| RawCrossing {
                kind: corners[i],
                edges: [g(i + k - 1), port_edge[2 * i], port_edge[2 * i + 1], g(i)],
            })
            .collect();

        let assignments: Vec<Vec<CornerKind>> = match kinds {
            ClosureKinds::WeldedOnly => vec![vec![CornerKind::Welded; c]],
            ClosureKinds::All => {
                let mut all = vec![Vec::new()];
                for _ in 0..c {
                    all = all
                        .into_iter()
                        .flat_map(|v: Vec<CornerKind>| {
                            CornerKind::ALL.iter().map(move |&kd| {
                                let mut w = v.clone();
                                w.push(kd);
                                w
                            })
                        })
                        .collect();
                }
                all
            }
        };
        for assign in assignments {
            let mut raw: Vec<RawCrossing> = closure_edges
                .iter()
                .zip(&assign)
                .map(|(&edges, &kind)| RawCrossing { kind, edges })
                .collect();
            raw.extend_from_slice(&tangle);
            for start in [(0, 0), (0, 2)] {
                let (pd, rot) = match orient(&raw, start) {
                    Ok(x) => x,
                    Err(PdError::InvalidPd(v)) if matches!(v[..], [PdViolation::MultipleComponents { .. }]) => {
                        continue
                    }
                    Err(e) => panic!("closure geometry produced an invalid diagram: {e}"),
                };
                let corner = c;
                let face_dart = (corner, ((3 + 4 - rot[corner] as usize) % 4) as u8);
                let mut incoming_ports = 0u32;
                for j in 0..2 * k {
                    let ci = c + j / 2;
                    let slot = ((1 + j % 2) + 4 - rot[ci] as usize) % 4;
                    if pd.crossings()[ci].is_incoming(slot as u8) {
                        incoming_ports |= 1 << j;
                    }
                }
                out.push(Closure { pd, closure_crossings: c, face_dart, incoming_ports });
            }
        }
    }
    out
}

/// Corner kinds of the tangle crossing `c` in a closure, recovered from the
/// oriented diagram (used when reporting variants).
pub fn crossing_kind_letter(x: &Crossing) -> char {
    match x.kind {
        CrossingKind::Classical(Sign::Pos) => '+',
        CrossingKind::Classical(Sign::Neg) => '-',
        CrossingKind::Welded { .. } => 'w',
    }
}
