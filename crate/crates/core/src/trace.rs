//! Move sequences that certify a transformation of Gauss diagrams.

use std::fmt;

use thiserror::Error;

use crate::gauss::moves::{apply_gauss_move, GaussMove};
use crate::gauss::{canonical_code, GaussDiagram, GaussError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub mv: GaussMove,
    /// Canonical code of the diagram after the move.
    pub post: String,
}

/// Moves applied in order to `start`, each with the canonical code it
/// produced. Moves address positions of the diagram they act on, so replay
/// must start from the exact recorded diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    start: GaussDiagram,
    steps: Vec<TraceStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("step {step}: {source}")]
    Move { step: usize, source: GaussError },
    #[error("step {step}: expected {expected:?}, replay produced {actual:?}")]
    Mismatch { step: usize, expected: String, actual: String },
}

impl ReductionTrace {
    pub fn new(start: GaussDiagram) -> Self {
        ReductionTrace { start, steps: Vec::new() }
    }

    pub fn start(&self) -> &GaussDiagram {
        &self.start
    }

    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn record(&mut self, mv: GaussMove, post: &GaussDiagram) {
        self.steps.push(TraceStep { mv, post: canonical_code(post) });
    }

    /// Appends a trace whose start is this trace's end diagram.
    pub fn extend(&mut self, other: ReductionTrace) {
        self.steps.extend(other.steps);
    }

    /// Replays every move, checking each recorded code; returns the end diagram.
    pub fn replay(&self) -> Result<GaussDiagram, TraceError> {
        let mut g = self.start.clone();
        for (step, s) in self.steps.iter().enumerate() {
            g = apply_gauss_move(&g, &s.mv).map_err(|source| TraceError::Move { step, source })?;
            let actual = canonical_code(&g);
            if actual != s.post {
                return Err(TraceError::Mismatch { step, expected: s.post.clone(), actual });
            }
        }
        Ok(g)
    }

    /// Canonical code at the end of the trace.
    pub fn final_code(&self) -> String {
        self.steps.last().map(|s| s.post.clone()).unwrap_or_else(|| canonical_code(&self.start))
    }

    /// One line per move: `<kind> <site...> | <post-code>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(format!("{} | {}", s.mv, s.post).trim_end());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for ReductionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::parse_gauss_code;

    #[test]
    fn replay_checks_post_codes() {
        let g = parse_gauss_code("O1+ O2+ U1+ U2+").unwrap();
        let mut t = ReductionTrace::new(g.clone());
        let w = GaussMove::W { pos: 0 };
        let g1 = apply_gauss_move(&g, &w).unwrap();
        t.record(w, &g1);
        let r = GaussMove::C1Remove { pos: 1 };
        let g2 = apply_gauss_move(&g1, &r).unwrap();
        t.record(r, &g2);
        assert_eq!(t.replay().unwrap(), g2);
        assert_eq!(t.to_text(), format!("W 0 | {}\nC1_remove 1 | {}\n", canonical_code(&g1), canonical_code(&g2)));

        let mut bad = t.clone();
        bad.steps[0].post = "O1+ U1+".into();
        assert!(matches!(bad.replay(), Err(TraceError::Mismatch { step: 0, .. })));
    }
}
