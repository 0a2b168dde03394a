//! Local rewrite patterns on Gauss diagrams.
//!
//! A local move touches a few short runs of consecutive marked points, one
//! run per strand passing through the move's disk. A [`LocalRewrite`]
//! records each run before and after the move together with the signs of
//! the chords involved. Runs may sit anywhere on the circle, so patterns are
//! compared after canonicalizing over run order and chord labels.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{End, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocalEnd {
    pub chord: u8,
    pub end: End,
}

/// Sign of a chord on both sides of a rewrite; `None` when the chord does
/// not exist on that side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChordSigns {
    pub before: Option<Sign>,
    pub after: Option<Sign>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocalRewrite {
    pub before: Vec<Vec<LocalEnd>>,
    pub after: Vec<Vec<LocalEnd>>,
    pub chords: Vec<ChordSigns>,
}

impl LocalRewrite {
    /// Swaps the roles of the two sides.
    pub fn inverted(&self) -> LocalRewrite {
        LocalRewrite {
            before: self.after.clone(),
            after: self.before.clone(),
            chords: self
                .chords
                .iter()
                .map(|c| ChordSigns { before: c.after, after: c.before })
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.before == self.after && self.chords.iter().all(|c| c.before == c.after)
    }
}

impl fmt::Display for LocalRewrite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |segs: &[Vec<LocalEnd>], signs: &dyn Fn(usize) -> Option<Sign>| -> String {
            segs.iter()
                .map(|s| {
                    let toks: Vec<String> = s
                        .iter()
                        .map(|e| {
                            let sign = signs(e.chord as usize).map(|s| s.symbol()).unwrap_or('?');
                            format!("{}{}{}", e.end.letter(), e.chord + 1, sign)
                        })
                        .collect();
                    format!("[{}]", toks.join(" "))
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let before = side(&self.before, &|i| self.chords[i].before);
        let after = side(&self.after, &|i| self.chords[i].after);
        write!(f, "{before} -> {after}")
    }
}

/// One strand's run with arbitrary chord keys, as collected from a diagram.
#[derive(Clone, Debug)]
pub struct RawSegment<K> {
    pub before: Vec<(K, End)>,
    pub after: Vec<(K, End)>,
}

/// Canonical form over all orderings of the segments, with chords relabelled
/// by first appearance (before-runs first, then after-runs). Returns the
/// canonical rewrite and `perm`, where canonical segment `i` is input
/// segment `perm[i]`.
pub fn canonicalize<K>(
    segments: &[RawSegment<K>],
    signs: &BTreeMap<K, ChordSigns>,
) -> (LocalRewrite, Vec<usize>)
where
    K: Ord + Copy,
{
    let mut best: Option<(LocalRewrite, Vec<usize>)> = None;
    for perm in permutations(segments.len()) {
        let mut labels: BTreeMap<K, u8> = BTreeMap::new();
        let mut order: Vec<K> = Vec::new();
        let mut label = |k: K, labels: &mut BTreeMap<K, u8>| -> u8 {
            let next = labels.len() as u8;
            *labels.entry(k).or_insert_with(|| {
                order.push(k);
                next
            })
        };
        let before: Vec<Vec<LocalEnd>> = perm
            .iter()
            .map(|&i| {
                segments[i]
                    .before
                    .iter()
                    .map(|&(k, end)| LocalEnd { chord: label(k, &mut labels), end })
                    .collect()
            })
            .collect();
        let after: Vec<Vec<LocalEnd>> = perm
            .iter()
            .map(|&i| {
                segments[i]
                    .after
                    .iter()
                    .map(|&(k, end)| LocalEnd { chord: label(k, &mut labels), end })
                    .collect()
            })
            .collect();
        let chords = order.iter().map(|k| signs[k]).collect();
        let candidate = LocalRewrite { before, after, chords };
        let better = match &best {
            None => true,
            Some((b, _)) => candidate < *b,
        };
        if better {
            best = Some((candidate, perm));
        }
    }
    best.unwrap_or_else(|| (LocalRewrite { before: vec![], after: vec![], chords: vec![] }, vec![]))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}
