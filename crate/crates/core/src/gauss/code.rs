//! Text codes for Gauss diagrams.
//!
//! A code is a whitespace-separated list of tokens `O<k><s>` / `U<k><s>`,
//! one per marked point in circle order. `O` marks the tail (over-passage)
//! of chord `k`, `U` its head, and `s` is the chord sign.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{ChordId, End, Endpoint, GaussDiagram, GaussError, Sign};

pub fn parse_gauss_code(text: &str) -> Result<GaussDiagram, GaussError> {
    let mut points = Vec::new();
    // label -> (tails, heads, sign of first occurrence)
    let mut seen: BTreeMap<u32, (u32, u32, Sign)> = BTreeMap::new();
    let mut order = Vec::new();
    for token in text.split_whitespace() {
        let (end, label, sign) = parse_token(token)?;
        let entry = seen.entry(label).or_insert_with(|| {
            order.push(label);
            (0, 0, sign)
        });
        if entry.2 != sign {
            return Err(GaussError::SignMismatch(label));
        }
        match end {
            End::Tail => entry.0 += 1,
            End::Head => entry.1 += 1,
        }
        points.push(Endpoint { chord: label, end });
    }
    // report the first offending label in order of appearance
    for label in order {
        let (tails, heads, _) = seen[&label];
        if tails != 1 || heads != 1 {
            return Err(GaussError::LabelCountMismatch(label));
        }
    }
    let signs = seen.into_iter().map(|(label, (_, _, s))| (label, s)).collect();
    Ok(GaussDiagram::from_parts(points, signs))
}

fn parse_token(token: &str) -> Result<(End, u32, Sign), GaussError> {
    let malformed = || GaussError::MalformedToken(token.to_string());
    let mut chars = token.chars();
    let end = match chars.next() {
        Some('O') => End::Tail,
        Some('U') => End::Head,
        _ => return Err(malformed()),
    };
    let rest = chars.as_str();
    let sign = match rest.chars().last() {
        Some('+') => Sign::Pos,
        Some('-') => Sign::Neg,
        _ => return Err(malformed()),
    };
    let digits = &rest[..rest.len() - 1];
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let label: u32 = digits.parse().map_err(|_| malformed())?;
    if label == 0 {
        return Err(malformed());
    }
    Ok((end, label, sign))
}

/// Serializes with labels assigned in first-visit order from position 0.
pub fn serialize(g: &GaussDiagram) -> String {
    serialize_from(g, 0)
}

fn serialize_from(g: &GaussDiagram, start: usize) -> String {
    let len = g.len();
    let mut labels: BTreeMap<ChordId, usize> = BTreeMap::new();
    let mut out = String::with_capacity(len * 4);
    for i in 0..len {
        let p = g.point((start + i) % len);
        let next = labels.len() + 1;
        let label = *labels.entry(p.chord).or_insert(next);
        if i > 0 {
            out.push(' ');
        }
        let sign = g.sign(p.chord).expect("chord has a sign");
        write!(out, "{}{}{}", p.end.letter(), label, sign.symbol()).unwrap();
    }
    out
}

/// Lexicographically least serialization over all basepoint rotations.
pub fn canonical_code(g: &GaussDiagram) -> String {
    if g.is_empty() {
        return String::new();
    }
    (0..g.len()).map(|k| serialize_from(g, k)).min().expect("non-empty")
}

/// Compact rotation-invariant key; two diagrams have equal keys iff they
/// differ only by basepoint rotation and chord relabelling. Cheaper than
/// [`canonical_code`], which it agrees with as an equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u16>);

pub fn canonical_key(g: &GaussDiagram) -> CanonicalKey {
    let len = g.len();
    if len == 0 {
        return CanonicalKey(Vec::new());
    }
    // dense chord indices and packed sign bits
    let ids: Vec<ChordId> = g.chord_ids().collect();
    let dense: Vec<(usize, u16, u16)> = g
        .points()
        .iter()
        .map(|p| {
            let idx = ids.binary_search(&p.chord).expect("known chord");
            let end_bit = matches!(p.end, End::Head) as u16;
            let sign_bit = matches!(g.sign(p.chord), Some(Sign::Neg)) as u16;
            (idx, end_bit, sign_bit)
        })
        .collect();

    let mut best: Option<Vec<u16>> = None;
    let mut labels = vec![u16::MAX; ids.len()];
    let mut cur = Vec::with_capacity(len);
    'rot: for start in 0..len {
        labels.iter_mut().for_each(|l| *l = u16::MAX);
        cur.clear();
        let mut next = 0u16;
        let mut equal_so_far = best.is_some();
        for i in 0..len {
            let (idx, end_bit, sign_bit) = dense[(start + i) % len];
            if labels[idx] == u16::MAX {
                labels[idx] = next;
                next += 1;
            }
            let tok = (labels[idx] << 2) | (end_bit << 1) | sign_bit;
            if equal_so_far {
                let b = best.as_ref().unwrap()[i];
                if tok > b {
                    continue 'rot;
                }
                if tok < b {
                    equal_so_far = false;
                }
            }
            cur.push(tok);
        }
        best = Some(cur.clone());
    }
    CanonicalKey(best.expect("non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "O1+ U2+ O3+ U1+ O2+ U3+";

    #[test]
    fn parse_examples() {
        let empty = parse_gauss_code("").unwrap();
        assert_eq!(empty.n(), 0);

        let one = parse_gauss_code("O1+ U1+").unwrap();
        let c = one.chord(1).unwrap();
        assert_eq!((c.tail, c.head, c.sign), (0, 1, Sign::Pos));

        let t = parse_gauss_code(TREFOIL).unwrap();
        let got: Vec<_> = t.chords().iter().map(|c| (c.tail, c.head, c.sign)).collect();
        assert_eq!(got, vec![(0, 3, Sign::Pos), (4, 1, Sign::Pos), (2, 5, Sign::Pos)]);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_gauss_code("O1+"), Err(GaussError::LabelCountMismatch(1)));
        assert_eq!(parse_gauss_code("O1+ O1+"), Err(GaussError::LabelCountMismatch(1)));
        assert_eq!(parse_gauss_code("O1+ U1-"), Err(GaussError::SignMismatch(1)));
        for bad in ["X1+", "O+", "O1", "O1*", "O0+ U0+", "Oa+"] {
            assert!(
                matches!(parse_gauss_code(bad), Err(GaussError::MalformedToken(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn serialize_examples() {
        assert_eq!(serialize(&GaussDiagram::empty()), "");
        let one = GaussDiagram::from_chords(&[(7, 0, 1, Sign::Pos)]).unwrap();
        assert_eq!(serialize(&one), "O1+ U1+");
        assert_eq!(serialize(&parse_gauss_code(TREFOIL).unwrap()), TREFOIL);
    }

    #[test]
    fn serialize_relabels_by_first_visit() {
        let g = parse_gauss_code("U5- O3+ O5- U3+").unwrap();
        assert_eq!(serialize(&g), "U1- O2+ O1- U2+");
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_code(&GaussDiagram::empty()), "");
        let a = parse_gauss_code("O1+ U1+").unwrap();
        let b = parse_gauss_code("U1+ O1+").unwrap();
        assert_eq!(canonical_code(&a), canonical_code(&b));

        // oracle: enumerate rotations by hand and take the minimum string
        let t = parse_gauss_code(TREFOIL).unwrap();
        let tokens: Vec<&str> = TREFOIL.split(' ').collect();
        let mut expected = Vec::new();
        for k in 0..tokens.len() {
            let rotated: Vec<&str> = tokens[k..].iter().chain(tokens[..k].iter()).copied().collect();
            let g = parse_gauss_code(&rotated.join(" ")).unwrap();
            expected.push(serialize(&g));
            assert_eq!(canonical_code(&g), canonical_code(&t));
            assert_eq!(canonical_key(&g), canonical_key(&t));
        }
        assert_eq!(canonical_code(&t), expected.into_iter().min().unwrap());
    }

    #[test]
    fn canonical_separates_mirror() {
        // the mirror trefoil is a different diagram, not a rotation
        let t = parse_gauss_code(TREFOIL).unwrap();
        let m = parse_gauss_code("O1- U2- O3- U1- O2- U3-").unwrap();
        assert_ne!(canonical_code(&t), canonical_code(&m));
        assert_ne!(canonical_key(&t), canonical_key(&m));
    }
}
