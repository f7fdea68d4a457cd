//! Words over `d` symbols as white tiles and as preimages of a base point.
//!
//! Symbol `i` read against a 0-tile of location `c` selects the `i`-th level-1 tile of color
//! `c`. A word `i₁ i₂ … i_n` is read from the right: `i_n` picks a 1-tile over the white 0-tile,
//! and each earlier symbol picks the 1-cell through which the tile built so far is lifted. The
//! shift dropping `i₁` therefore corresponds to one application of the map.

use crate::cells::{CellId, CellRef, Color, Dim};
use crate::complex::Hierarchy;
use crate::dynamics::PointAddress;
use crate::error::{Error, Result};
use crate::measure::TileMeasure;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use std::fmt;

const DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<u8>,
}

impl Word {
    pub fn new(letters: Vec<u8>, d: u32) -> Result<Self> {
        if let Some(k) = letters.iter().position(|&l| u32::from(l) >= d) {
            return Err(Error::InvalidArgument(format!("letter {k} is not below {d}")));
        }
        Ok(Word { letters })
    }

    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    /// Digits then lowercase letters, as in base 36.
    pub fn parse(s: &str, d: u32) -> Result<Self> {
        if d > 36 {
            return Err(Error::InvalidArgument("words are written with at most 36 symbols".into()));
        }
        let letters = s
            .chars()
            .map(|c| {
                c.to_digit(36)
                    .map(|v| v as u8)
                    .ok_or_else(|| Error::InvalidArgument(format!("`{c}` is not a symbol")))
            })
            .collect::<Result<Vec<u8>>>()?;
        Word::new(letters, d)
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The word without its first letter.
    pub fn shift(&self) -> Word {
        Word { letters: self.letters.get(1..).unwrap_or_default().to_vec() }
    }

    /// All `d^n` words of length `n` in lexicographic order.
    pub fn all(d: u32, n: u32) -> impl Iterator<Item = Word> {
        let total = u64::from(d).pow(n);
        (0..total).map(move |mut k| {
            let mut letters = vec![0u8; n as usize];
            for slot in letters.iter_mut().rev() {
                *slot = (k % u64::from(d)) as u8;
                k /= u64::from(d);
            }
            Word { letters }
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            write!(f, "{}", DIGITS[l as usize] as char)?;
        }
        Ok(())
    }
}

/// For each color, the level-1 tiles of that color in id order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodingTable {
    pub white_order: Vec<u32>,
    pub black_order: Vec<u32>,
}

impl CodingTable {
    pub fn new(hier: &Hierarchy) -> Result<Self> {
        let cells = hier.cells();
        let of = |c: Color| -> Vec<u32> {
            (0..cells.tile_color.len() as u32).filter(|&t| cells.tile_color[t as usize] == c).collect()
        };
        let table = CodingTable { white_order: of(Color::White), black_order: of(Color::Black) };
        let d = hier.d() as usize;
        if table.white_order.len() != d || table.black_order.len() != d {
            return Err(Error::InconsistentRule("each color needs exactly d level-1 tiles".into()));
        }
        Ok(table)
    }

    pub fn order(&self, color: Color) -> &[u32] {
        match color {
            Color::White => &self.white_order,
            Color::Black => &self.black_order,
        }
    }

    /// Itinerary of the tile coded by a word.
    pub fn itinerary(&self, hier: &Hierarchy, word: &Word) -> Vec<CellId> {
        let cells = hier.cells();
        let mut location = Color::White;
        let mut letters = vec![CellId::tile(0); word.len()];
        for (k, &i) in word.letters().iter().enumerate().rev() {
            let a = self.order(location)[i as usize];
            letters[k] = CellId::tile(a);
            location = cells.tile_location[a as usize];
        }
        letters
    }
}

/// The white level-`n` tile coded by a word of length `n`.
pub fn word_to_tile(hier: &Hierarchy, table: &CodingTable, word: &Word) -> Result<CellRef> {
    if word.is_empty() {
        return Ok(CellId::tile(Color::White.index()).at(0));
    }
    hier.cell_of_itinerary(&table.itinerary(hier, word))
}

/// The preimage of `p` under `f^n` inside the tile coded by the word.
pub fn word_to_preimage(hier: &Hierarchy, table: &CodingTable, word: &Word, p: &PointAddress) -> Result<PointAddress> {
    if p.root() != CellId::tile(Color::White.index()) || !p.is_generic() {
        return Err(Error::NonGenericBasePoint(format!("{} is not an interior point of the white 0-tile", p.root())));
    }
    if word.is_empty() {
        return Ok(p.clone());
    }
    let mut letters = table.itinerary(hier, word);
    letters.extend_from_slice(p.letters());
    let root = hier.cells().carrier(letters[0]);
    PointAddress::new(hier.cells(), root, letters)
}

/// Distribution of the level-`m` tile containing the tile of a uniformly random word of length `n`.
pub fn cylinder_pushforward(hier: &Hierarchy, table: &CodingTable, n: u32, m: u32) -> Result<TileMeasure> {
    if m > n {
        return Err(Error::InvalidArgument(format!("need m <= n, got m = {m}, n = {n}")));
    }
    hier.level(n)?;
    let tiles = hier.level(m)?.tiles.len();
    let mut counts = vec![0u64; tiles];
    for word in Word::all(hier.d(), n) {
        let letters = table.itinerary(hier, &word);
        let c = if m == 0 { CellId::tile(Color::White.index()).at(0) } else { hier.cell_of_itinerary(&letters[..m as usize])? };
        debug_assert_eq!(c.dim, Dim::Tile);
        counts[c.id as usize] += 1;
    }
    let total = BigInt::from(hier.d()).pow(n);
    Ok(TileMeasure {
        level: m,
        masses: counts.into_iter().map(|c| BigRational::new(BigInt::from(c), total.clone())).collect(),
        skeleton_mass: BigRational::zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_print_in_base_36() {
        let w = Word::parse("09az", 36).unwrap();
        assert_eq!(w.letters(), &[0, 9, 10, 35]);
        assert_eq!(w.to_string(), "09az");
        assert_eq!(w.shift().to_string(), "9az");
        assert!(Word::parse("4", 4).is_err());
        assert!(Word::parse("0-1", 4).is_err());
        assert!(Word::empty().shift().is_empty());
    }

    #[test]
    fn all_words_are_lexicographic() {
        let words: Vec<String> = Word::all(3, 2).map(|w| w.to_string()).collect();
        assert_eq!(words, ["00", "01", "02", "10", "11", "12", "20", "21", "22"]);
        assert_eq!(Word::all(5, 0).count(), 1);
    }
}
