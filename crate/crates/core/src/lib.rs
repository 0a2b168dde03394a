//! Move calculus for welded knots.
//!
//! Two representations are supported:
//!
//! * [`gauss::GaussDiagram`]: a circle with signed chords oriented from the
//!   over-passage to the under-passage. All triviality and unknotting work
//!   happens here.
//! * [`pd::PlanarDiagram`]: a 4-valent planar code with classical and welded
//!   crossings. Local moves that only make sense in the plane (Delta, sharp,
//!   pass, twists) live here, and the Gauss-level C2/C3 rules are derived from
//!   this layer by [`pd::table::derive_gauss_move_table`].
//!
//! [`unknotting`] implements chord removal, greedy reduction of descending
//! diagrams and unknotting-number bounds; [`search`] runs bounded
//! breadth-first searches over the move graph.

pub mod gauss;
pub mod pd;
pub mod search;
pub mod trace;
pub mod unknotting;

pub use gauss::{
    canonical_code, parse_gauss_code, serialize, ChordId, End, GaussDiagram, GaussError,
    ReadDirection, Sign,
};
pub use gauss::moves::{apply_gauss_move, enumerate_moves, GaussMove, GaussMoveKind};
pub use pd::{PdError, PlanarDiagram};
pub use search::{SearchLimits, SearchVerdict};
pub use trace::ReductionTrace;
