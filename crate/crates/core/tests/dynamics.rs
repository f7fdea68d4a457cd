use std::collections::BTreeSet;
use thurston_core::complex::{local_degree_at, Hierarchy};
use thurston_core::dynamics::{analyze_critical, apply_map, local_degree_along_orbit, preimages};
use thurston_core::rulekit::{bundled, bundled_names, parse_rule};
use thurston_core::{CellId, Color, Dim, Error, PointAddress, SubdivisionRule};

fn hier(name: &str) -> Hierarchy {
    Hierarchy::new(bundled(name).unwrap()).unwrap()
}

fn chebyshev() -> SubdivisionRule {
    parse_rule(include_str!("fixtures/chebyshev.rule")).unwrap()
}

/// Preimage letters of a 0-cell read straight off the rule tables, with local degrees
/// counted from tile corners.
fn sheet_oracle(rule: &SubdivisionRule, root: CellId) -> BTreeSet<(CellId, u32)> {
    let mut corners = vec![0u32; rule.vertices.len()];
    for t in &rule.tiles {
        for v in t.vertices() {
            corners[v as usize] += 1;
        }
    }
    match root.dim {
        Dim::Tile => (0..rule.tiles.len() as u32)
            .filter(|&t| rule.tiles[t as usize].color.index() == root.id)
            .map(|t| (CellId::tile(t), 1))
            .collect(),
        Dim::Edge => (0..rule.edges.len() as u32)
            .filter(|&e| rule.edges[e as usize].image == root.id)
            .map(|e| (CellId::edge(e), 1))
            .collect(),
        Dim::Vertex => (0..rule.vertices.len() as u32)
            .filter(|&v| rule.vertices[v as usize].label == root.id)
            .map(|v| (CellId::vertex(v), corners[v as usize] / 2))
            .collect(),
    }
}

fn zero_cells(m: u32) -> Vec<CellId> {
    let mut out = vec![CellId::tile(0), CellId::tile(1)];
    out.extend((0..m).map(CellId::vertex));
    out.extend((0..m).map(CellId::edge));
    out
}

#[test]
fn preimages_match_the_sheet_oracle() {
    let mut rules: Vec<SubdivisionRule> = bundled_names().iter().map(|&n| bundled(n).unwrap()).collect();
    rules.push(chebyshev());
    for rule in rules {
        let h = Hierarchy::new(rule.clone()).unwrap();
        let cells = h.cells();
        for root in zero_cells(rule.m) {
            let p = PointAddress::new(cells, root, vec![]).unwrap();
            let pre = preimages(cells, &p);
            let got: BTreeSet<(CellId, u32)> = pre.iter().map(|(q, w)| (q.letters()[0], *w)).collect();
            assert_eq!(got, sheet_oracle(&rule, root), "{root}");
            assert_eq!(pre.iter().map(|(_, w)| w).sum::<u32>(), rule.d, "{root}");
            for (q, _) in &pre {
                assert_eq!(apply_map(cells, q).unwrap(), p);
            }
        }
    }
}

#[test]
fn deep_preimages_invert_the_map() {
    let h = hier("lattes3x3");
    let cells = h.cells();
    let p = PointAddress::new(cells, CellId::tile(1), vec![]).unwrap();
    let mut layer = vec![(p, 1u64)];
    for _ in 0..3 {
        layer = layer.iter().flat_map(|(q, w)| preimages(cells, q).into_iter().map(move |(r, k)| (r, w * u64::from(k)))).collect();
    }
    assert_eq!(layer.len(), 729);
    for (q, _) in &layer {
        let back = apply_map(cells, &apply_map(cells, &apply_map(cells, q).unwrap()).unwrap()).unwrap();
        assert_eq!(back.root(), CellId::tile(1));
        assert_eq!(back.depth(), 0);
        assert!(q.is_generic());
    }
}

#[test]
fn addresses_locate_their_cells() {
    for &name in bundled_names() {
        let mut h = hier(name);
        h.ensure(3).unwrap();
        let cx = h.level(3).unwrap();
        for dim in Dim::ALL {
            for id in (0..cx.count(dim) as u32).step_by(7) {
                let c = CellId::new(dim, id).at(3);
                let a = PointAddress::of_cell(&h, c).unwrap();
                assert_eq!(a.cell(&h, 3).unwrap(), c);
                assert_eq!(a.dim(), dim);
                for k in 0..3 {
                    let up = a.cell(&h, k).unwrap();
                    assert!(h.descendants(up, 3).unwrap().contains(&c.cell()), "{name} {c} level {k}");
                }
            }
        }
    }
}

#[test]
fn vertex_degrees_along_orbits_match_flowers() {
    for &name in bundled_names() {
        let mut h = hier(name);
        h.ensure(3).unwrap();
        for n in 1..=3u32 {
            for v in 0..h.level(n).unwrap().vertices.len() as u32 {
                let r = CellId::vertex(v).at(n);
                let a = PointAddress::of_vertex(&h, r, 8).unwrap();
                assert_eq!(a.depth(), 8);
                let along = local_degree_along_orbit(h.cells(), &a, n as usize).unwrap();
                assert_eq!(along, u64::from(local_degree_at(&h, r).unwrap()), "{name} {r}");
            }
        }
    }
}

#[test]
fn periodic_addresses_repeat() {
    let mut h = hier("lattes2x2");
    h.ensure(2).unwrap();
    let cx = h.level(2).unwrap();
    let t = (0..cx.tiles.len() as u32).find(|&t| cx.tiles[t as usize].color == cx.tiles[t as usize].location).unwrap();
    let a = PointAddress::periodic(&h, CellId::tile(t).at(2), 10).unwrap();
    let twice = apply_map(h.cells(), &apply_map(h.cells(), &a).unwrap()).unwrap();
    assert_eq!(twice.letters(), &a.letters()[..8]);
    let other = (0..cx.tiles.len() as u32).find(|&t| cx.tiles[t as usize].color != cx.tiles[t as usize].location).unwrap();
    assert!(PointAddress::periodic(&h, CellId::tile(other).at(2), 10).is_err());
}

#[test]
fn inadmissible_addresses_are_rejected() {
    let h = hier("lattes2x2");
    let cells = h.cells();
    assert!(matches!(PointAddress::new(cells, CellId::tile(2), vec![]), Err(Error::InvalidCell(_))));
    let black = (0..8u32).find(|&t| cells.tile_location[t as usize] == Color::Black).unwrap();
    assert!(PointAddress::new(cells, CellId::tile(0), vec![CellId::tile(black)]).is_err());
    let p = PointAddress::new(cells, CellId::tile(0), vec![]).unwrap();
    assert_eq!(apply_map(cells, &p), Err(Error::DepthExhausted { depth: 0, needed: 1 }));
    assert!(matches!(local_degree_along_orbit(cells, &p, 1), Err(Error::DepthExhausted { .. })));
    assert!(matches!(p.cell(&h, 1), Err(Error::DepthExhausted { .. })));
}

#[test]
fn critical_structure() {
    let c = analyze_critical(hier("lattes2x2").cells());
    assert_eq!(c.critical.len(), 6);
    assert!(c.critical.iter().all(|&(_, k)| k == 2));
    assert!(!c.has_periodic_critical);
    assert_eq!(c.kappa, 1);

    let c = analyze_critical(hier("quadratic3").cells());
    assert_eq!(c.critical.len(), 2);
    assert!(!c.has_periodic_critical);

    let h = Hierarchy::new(chebyshev()).unwrap();
    let c = analyze_critical(h.cells());
    // z^2 - 2: infinity is a fixed critical point, 0 maps to -2 -> 2 -> 2.
    assert_eq!(c.critical.len(), 2);
    assert!(c.has_periodic_critical);
    assert_eq!(c.periodic_critical, vec![(2, 1)]);
    assert_eq!(c.post_map, vec![1, 1, 2]);
    assert_eq!(c.kappa, 1);
}

#[test]
fn critical_points_satisfy_riemann_hurwitz() {
    for &name in bundled_names() {
        let h = hier(name);
        let c = analyze_critical(h.cells());
        let excess: u32 = c.critical.iter().map(|&(_, k)| k - 1).sum();
        assert_eq!(excess, 2 * h.d() - 2, "{name}");
    }
}
