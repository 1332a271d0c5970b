//! Curve-diagram coordinates for braid groups.
//!
//! Coordinates `(s_0, a_1, s_1, ..., a_n, s_n)` describe tight curve
//! diagrams on `n` strands. This crate checks which of them are actual,
//! counts actual coordinates of a given norm, and compares the counts with
//! closed forms and bounds.

pub mod analysis;
pub mod census;
pub mod cli;
pub mod closedform;
pub mod coords;
pub mod diagram;
pub mod partition;
pub mod permcheck;

pub use census::{count_actual, count_table, CensusOptions, CensusRecord, Mode};
pub use coords::{SVector, VirtualCoordinates};
pub use diagram::is_actual;
