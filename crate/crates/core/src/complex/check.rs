use super::Hierarchy;
use crate::cells::{CellId, Color, Dim};
use crate::error::Result;
use std::collections::HashSet;

/// Structural checks on the level-`n` complex; returns a description of each failure.
pub fn check_complex(hier: &Hierarchy, n: u32) -> Result<Vec<String>> {
    let cx = hier.level(n)?;
    let m = cx.m as usize;
    let d = u64::from(hier.d());
    let mut bad = Vec::new();

    let whites = cx.tiles.iter().filter(|t| t.color == Color::White).count() as u64;
    if cx.tiles.len() as u64 != 2 * d.pow(n) || whites != d.pow(n) {
        bad.push(format!("level {n} has {} tiles ({whites} white)", cx.tiles.len()));
    }
    if cx.euler_characteristic() != 2 {
        bad.push(format!("Euler characteristic {}", cx.euler_characteristic()));
    }
    for (t, tile) in cx.tiles.iter().enumerate() {
        let vs: HashSet<_> = tile.vertices.iter().collect();
        let es: HashSet<_> = tile.edges.iter().collect();
        if tile.vertices.len() != m || vs.len() != m || es.len() != m {
            bad.push(format!("tile {t} is not an {m}-gon"));
            continue;
        }
        for k in 0..m {
            let ends = cx.edges[tile.edges[k] as usize].ends;
            let (a, b) = (tile.vertices[k], tile.vertices[(k + 1) % m]);
            if ends != [a, b] && ends != [b, a] {
                bad.push(format!("edge {k} of tile {t} does not join its neighbours"));
            }
        }
    }
    for (e, ts) in cx.edge_tiles().iter().enumerate() {
        if ts.len() != 2 {
            bad.push(format!("edge {e} borders {} tiles", ts.len()));
        }
    }
    for (j, &p) in cx.posts.iter().enumerate() {
        if cx.vertices[p as usize].carrier != CellId::vertex(j as u32) {
            bad.push(format!("post {j} is not at 0-vertex {j}"));
        }
    }
    if n == 0 {
        return Ok(bad);
    }

    // Cellularity of the map down one level.
    let below = hier.level(n - 1)?;
    for (t, tile) in cx.tiles.iter().enumerate() {
        let z = &below.tiles[tile.key.expect("key").below as usize];
        let img = |c: CellId| cx.image(c).map(|i| i.id);
        let verts_ok = tile.vertices.iter().zip(&z.vertices).all(|(&v, &w)| img(CellId::vertex(v)) == Some(w));
        let edges_ok = tile.edges.iter().zip(&z.edges).all(|(&e, &w)| img(CellId::edge(e)) == Some(w));
        if !verts_ok || !edges_ok || z.color != tile.color {
            bad.push(format!("tile {t} does not map cellularly onto its image"));
        }
    }
    for (e, edge) in cx.edges.iter().enumerate() {
        let z = &below.edges[edge.key.expect("key").below as usize];
        let ok = (0..2).all(|k| cx.image(CellId::vertex(edge.ends[k])).map(|i| i.id) == Some(z.ends[k]));
        if !ok {
            bad.push(format!("edge {e} does not map onto its image end to end"));
        }
    }

    // Refinement of the level below.
    let mut vertex_children = vec![0u32; below.vertices.len()];
    for (v, vx) in cx.vertices.iter().enumerate() {
        match vx.parent {
            Some(p) if p.dim == Dim::Vertex => vertex_children[p.id as usize] += 1,
            Some(_) => {}
            None => bad.push(format!("vertex {v} has no parent")),
        }
    }
    for (v, &k) in vertex_children.iter().enumerate() {
        if k != 1 {
            bad.push(format!("level-{} vertex {v} persists {k} times", n - 1));
        }
    }
    for dim in [Dim::Edge, Dim::Tile] {
        for id in 0..cx.count(dim) as u32 {
            let c = CellId::new(dim, id);
            match cx.parent(c) {
                Some(p) if p.dim >= dim && below.contains(p) => {
                    if below.carrier(p) != cx.carrier(c) {
                        bad.push(format!("cell {c} and its parent have different carriers"));
                    }
                }
                _ => bad.push(format!("cell {c} has an invalid parent")),
            }
        }
    }
    let mut pieces: Vec<(HashSet<u32>, HashSet<u32>, i64)> = vec![(HashSet::new(), HashSet::new(), 0); below.tiles.len()];
    for tile in &cx.tiles {
        let p = &mut pieces[tile.parent.expect("parent") as usize];
        p.0.extend(&tile.vertices);
        p.1.extend(&tile.edges);
        p.2 += 1;
    }
    for (t, (vs, es, f)) in pieces.iter().enumerate() {
        let chi = vs.len() as i64 - es.len() as i64 + f;
        if *f == 0 || chi != 1 {
            bad.push(format!("children of level-{} tile {t} do not form a disk", n - 1));
        }
    }
    Ok(bad)
}
