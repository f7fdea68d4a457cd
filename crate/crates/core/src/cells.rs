//! Identifiers shared by rules, complexes and point addresses.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Tile color, or the 0-tile a cell lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub const ALL: [Color; 2] = [Color::White, Color::Black];

    /// Id of the level-0 tile of this color.
    pub fn index(self) -> u32 {
        match self {
            Color::White => 0,
            Color::Black => 1,
        }
    }

    pub fn from_index(i: u32) -> Option<Color> {
        match i {
            0 => Some(Color::White),
            1 => Some(Color::Black),
            _ => None,
        }
    }

    pub fn opposite(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::White => "white",
            Color::Black => "black",
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Dim {
    Vertex = 0,
    Edge = 1,
    Tile = 2,
}

impl Dim {
    pub const ALL: [Dim; 3] = [Dim::Vertex, Dim::Edge, Dim::Tile];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl From<Dim> for u8 {
    fn from(d: Dim) -> u8 {
        d as u8
    }
}

impl TryFrom<u8> for Dim {
    type Error = String;
    fn try_from(v: u8) -> Result<Dim, String> {
        match v {
            0 => Ok(Dim::Vertex),
            1 => Ok(Dim::Edge),
            2 => Ok(Dim::Tile),
            _ => Err(format!("dimension {v} out of range")),
        }
    }
}

/// A cell within one level, identified by dimension and dense id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellId {
    pub dim: Dim,
    pub id: u32,
}

impl CellId {
    pub fn new(dim: Dim, id: u32) -> Self {
        CellId { dim, id }
    }
    pub fn vertex(id: u32) -> Self {
        CellId::new(Dim::Vertex, id)
    }
    pub fn edge(id: u32) -> Self {
        CellId::new(Dim::Edge, id)
    }
    pub fn tile(id: u32) -> Self {
        CellId::new(Dim::Tile, id)
    }
    pub fn at(self, level: u32) -> CellRef {
        CellRef { level, dim: self.dim, id: self.id }
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.dim as u8, self.id)
    }
}

/// A cell of a specific level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellRef {
    pub level: u32,
    pub dim: Dim,
    pub id: u32,
}

impl CellRef {
    pub fn cell(self) -> CellId {
        CellId { dim: self.dim, id: self.id }
    }
}

impl fmt::Display for CellRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.level, self.dim as u8, self.id)
    }
}
