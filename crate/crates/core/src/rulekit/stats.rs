use super::cells::walk_curve;
use super::SubdivisionRule;
use crate::cells::Color;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

/// Tile class counts and the quantities derived from them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RuleStats {
    pub m: u32,
    pub d: u32,
    /// White tiles in the white 0-tile.
    pub w_w: u32,
    /// White tiles in the black 0-tile.
    pub w_b: u32,
    /// Black tiles in the white 0-tile.
    pub b_w: u32,
    /// Black tiles in the black 0-tile.
    pub b_b: u32,
    /// Measure of maximal entropy of the white 0-tile.
    #[serde(serialize_with = "ser_ratio")]
    pub w: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub b: BigRational,
    /// Second eigenvalue of the tile transition matrix, equal to `w_w - b_w`.
    pub lambda: i64,
    /// Degree of the map restricted to the curve.
    pub degree_on_curve: i64,
    /// Topological entropy, `ln d`.
    pub entropy: f64,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl RuleStats {
    /// Count of level-1 tiles with the given color and location.
    pub fn class(&self, color: Color, location: Color) -> u32 {
        match (color, location) {
            (Color::White, Color::White) => self.w_w,
            (Color::White, Color::Black) => self.w_b,
            (Color::Black, Color::White) => self.b_w,
            (Color::Black, Color::Black) => self.b_b,
        }
    }

    /// Measure weight of a tile of the given color, before scaling by `d^-level`.
    pub fn weight(&self, color: Color) -> &BigRational {
        match color {
            Color::White => &self.w,
            Color::Black => &self.b,
        }
    }

    pub fn to_tsv(&self) -> String {
        let rows: [(&str, String); 11] = [
            ("m", self.m.to_string()),
            ("d", self.d.to_string()),
            ("w_w", self.w_w.to_string()),
            ("w_b", self.w_b.to_string()),
            ("b_w", self.b_w.to_string()),
            ("b_b", self.b_b.to_string()),
            ("w", self.w.to_string()),
            ("b", self.b.to_string()),
            ("lambda", self.lambda.to_string()),
            ("degree_on_curve", self.degree_on_curve.to_string()),
            ("entropy", format!("{:.12}", self.entropy)),
        ];
        let mut s = String::from("key\tvalue\n");
        for (k, v) in rows {
            s.push_str(k);
            s.push('\t');
            s.push_str(&v);
            s.push('\n');
        }
        s
    }
}

/// Degree of the map on the curve, from the signed number of 0-edges the curve's image runs over.
pub fn winding_degree(rule: &SubdivisionRule) -> Result<i64> {
    let m = rule.m as usize;
    let mut signed = 0i64;
    for j in 0..m {
        let seen = walk_curve(rule, j).map_err(Error::InvalidRule)?;
        for (k, &e) in rule.curve.edges[j].iter().enumerate() {
            let edge = &rule.edges[e as usize];
            let start_label = rule.vertices[seen[k] as usize].label;
            signed += if start_label == edge.image { 1 } else { -1 };
        }
    }
    if signed % m as i64 != 0 {
        return Err(Error::InconsistentRule(format!("image of the curve covers {signed} edges, not a multiple of {m}")));
    }
    Ok(signed / m as i64)
}

pub fn rule_stats(rule: &SubdivisionRule) -> Result<RuleStats> {
    let mut counts = [[0u32; 2]; 2];
    for t in &rule.tiles {
        counts[t.color.index() as usize][t.location.index() as usize] += 1;
    }
    let [[w_w, w_b], [b_w, b_b]] = counts;
    if b_w + w_b == 0 {
        return Err(Error::DegenerateRule("no tile has the opposite color of its 0-tile".into()));
    }
    let lambda = i64::from(w_w) - i64::from(b_w);
    let winding = winding_degree(rule)?;
    if winding != lambda {
        return Err(Error::InconsistentRule(format!(
            "curve winding gives degree {winding} but tile classes give {lambda}"
        )));
    }
    let total = BigInt::from(b_w + w_b);
    Ok(RuleStats {
        m: rule.m,
        d: rule.d,
        w_w,
        w_b,
        b_w,
        b_b,
        w: BigRational::new(BigInt::from(b_w), total.clone()),
        b: BigRational::new(BigInt::from(w_b), total),
        lambda,
        degree_on_curve: winding,
        entropy: f64::from(rule.d).ln(),
    })
}
