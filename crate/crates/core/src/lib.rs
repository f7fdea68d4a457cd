//! Combinatorics and dynamics of expanding Thurston maps presented by two-tile subdivision
//! rules: subdivision of cell complexes, periodic and preperiodic points, the measure of
//! maximal entropy, and the coding of tiles by words.

pub mod cells;
pub mod coding;
pub mod complex;
pub mod dynamics;
pub mod error;
pub mod measure;
pub mod periodic;
pub mod rulekit;

pub use cells::{CellId, CellRef, Color, Dim};
pub use complex::{CellComplex, Hierarchy};
pub use dynamics::PointAddress;
pub use measure::{EmpiricalMeasure, TileMeasure};
pub use error::{Error, Result};
pub use rulekit::{RuleStats, SubdivisionRule};
