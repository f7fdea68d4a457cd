use super::{CellComplex, Hierarchy};
use crate::error::Result;
use crate::rulekit::{Curve, RuleEdge, RuleTile, RuleVertex, SubdivisionRule};

/// Reads a level-`n` complex as the rule of the `n`-th iterate, keeping its cell ids.
pub fn complex_to_rule(cx: &CellComplex, d: u32) -> SubdivisionRule {
    let vertices = cx.vertices.iter().map(|v| RuleVertex { label: v.label }).collect();
    let edges = cx.edges.iter().map(|e| RuleEdge { ends: e.ends, forward: true, image: e.label }).collect();
    let tiles = cx
        .tiles
        .iter()
        .map(|t| RuleTile {
            boundary: t.vertices.iter().zip(&t.edges).flat_map(|(&v, &e)| [v, e]).collect(),
            color: t.color,
            location: t.location,
        })
        .collect();
    let curve = Curve { edges: cx.curve_paths().into_iter().map(|(path, _)| path).collect(), posts: cx.posts.clone() };
    SubdivisionRule { m: cx.m, d: d.pow(cx.level), vertices, edges, tiles, curve }
}

/// Rule of `f^n`, whose level-1 complex is the level-`n` complex of `f`.
pub fn iterate_rule(rule: &SubdivisionRule, n: u32) -> Result<SubdivisionRule> {
    let mut hier = Hierarchy::new(rule.clone())?.with_cap(n.max(1));
    hier.ensure(n)?;
    Ok(complex_to_rule(hier.level(n)?, rule.d))
}
