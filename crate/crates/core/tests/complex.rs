use num_bigint::BigInt;
use num_rational::BigRational;
use thurston_core::complex::{
    check_complex, complex_to_rule, count_white_tiles_in, cover_edge, find_expansion_level, flower, iterate_rule,
    joins_opposite_sides, local_degree_at, tile_class_counts, white_tile_formula, Hierarchy,
};
use thurston_core::periodic::enumerate_fixed_points;
use thurston_core::rulekit::{bundled, bundled_names, checkerboard, parse_rule, rule_stats, validate};
use thurston_core::{CellComplex, CellId, Color, Dim, Error};

fn hier(name: &str) -> Hierarchy {
    Hierarchy::new(bundled(name).unwrap()).unwrap()
}

fn all_cells(cx: &CellComplex) -> Vec<CellId> {
    Dim::ALL.iter().flat_map(|&d| (0..cx.count(d) as u32).map(move |i| CellId::new(d, i))).collect()
}

#[test]
fn cell_counts_and_euler_characteristic() {
    for &name in bundled_names() {
        let mut h = hier(name);
        h.ensure(3).unwrap();
        let d = h.d() as usize;
        for n in 0..=3 {
            let cx = h.level(n).unwrap();
            assert_eq!(cx.count(Dim::Tile), 2 * d.pow(n), "{name} {n}");
            assert_eq!(cx.count(Dim::Edge), h.m() as usize * d.pow(n), "{name} {n}");
            assert_eq!(cx.euler_characteristic(), 2, "{name} {n}");
        }
    }
}

#[test]
fn structural_checks_pass() {
    for &name in bundled_names() {
        let mut h = hier(name);
        h.ensure(3).unwrap();
        for n in 0..=3 {
            assert_eq!(check_complex(&h, n).unwrap(), Vec::<String>::new(), "{name} {n}");
        }
    }
}

#[test]
fn itineraries_round_trip() {
    for &name in bundled_names() {
        let mut h = hier(name);
        h.ensure(3).unwrap();
        for n in 1..=3 {
            for c in all_cells(h.level(n).unwrap()) {
                let r = c.at(n);
                let it = h.itinerary(r).unwrap();
                assert_eq!(it.len(), n as usize);
                assert_eq!(h.cell_of_itinerary(&it).unwrap(), r, "{name} {r}");
            }
        }
    }
}

#[test]
fn tile_parents_truncate_itineraries() {
    let mut h = hier("lattes3x3");
    h.ensure(3).unwrap();
    for t in 0..h.level(3).unwrap().tiles.len() as u32 {
        let r = CellId::tile(t).at(3);
        let it = h.itinerary(r).unwrap();
        let parent = h.ancestor(r, 2).unwrap();
        assert_eq!(h.itinerary(parent).unwrap(), it[..2]);
    }
}

#[test]
fn inadmissible_itineraries_are_rejected() {
    let mut h = hier("lattes2x2");
    h.ensure(2).unwrap();
    let cells = h.cells();
    let white = (0..cells.tile_color.len() as u32).find(|&t| cells.tile_color[t as usize] == Color::White).unwrap();
    let in_black =
        (0..cells.tile_color.len() as u32).find(|&t| cells.tile_location[t as usize] == Color::Black).unwrap();
    // The second letter lies in the black 0-tile, but the first letter maps onto the white one.
    let err = h.cell_of_itinerary(&[CellId::tile(white), CellId::tile(in_black)]).unwrap_err();
    assert!(matches!(err, Error::InvalidCell(_)), "{err:?}");
    assert!(matches!(h.cell_of_itinerary(&[]), Err(Error::InvalidArgument(_))));
    assert!(matches!(h.cell_of_itinerary(&[CellId::tile(99)]), Err(Error::InvalidCell(_))));
}

#[test]
fn tile_classes_scale_by_degree() {
    for &name in bundled_names() {
        let mut h = hier(name);
        h.ensure(4).unwrap();
        let s = rule_stats(h.rule()).unwrap();
        for n in 1..=4 {
            let c = tile_class_counts(&h, n).unwrap();
            let k = u64::from(h.d()).pow(n - 1);
            assert_eq!((c.ww, c.wb, c.bw, c.bb), (k * u64::from(s.w_w), k * u64::from(s.w_b), k * u64::from(s.b_w), k * u64::from(s.b_b)), "{name} {n}");
        }
    }
    assert!(tile_class_counts(&hier("lattes2x2"), 0).is_err());
}

#[test]
fn white_tile_counts_match_the_closed_form() {
    for &name in bundled_names() {
        let mut h = hier(name);
        let s = rule_stats(h.rule()).unwrap();
        h.ensure(4).unwrap();
        for m in 0..=1u32 {
            let cx = h.level(m).unwrap();
            for t in 0..cx.tiles.len() as u32 {
                let color = cx.tiles[t as usize].color;
                for i in m..=m + 3 {
                    let got = count_white_tiles_in(&h, CellId::tile(t).at(m), i).unwrap();
                    let want = white_tile_formula(&s, color, i - m);
                    assert_eq!(BigRational::from_integer(BigInt::from(got)), want, "{name} m={m} t={t} i={i}");
                }
            }
        }
    }
}

#[test]
fn flowers_and_local_degrees() {
    for &name in bundled_names() {
        let mut h = hier(name);
        h.ensure(3).unwrap();
        let level1 = h.level(1).unwrap();
        for v in 0..level1.vertices.len() as u32 {
            assert_eq!(local_degree_at(&h, CellId::vertex(v).at(1)).unwrap(), h.cells().vertex_degree[v as usize]);
        }
        // Riemann-Hurwitz for f^n: the local degrees exceed one by 2(d^n - 1) in total.
        for n in 1..=3 {
            let cx = h.level(n).unwrap();
            let excess: u64 = (0..cx.vertices.len() as u32)
                .map(|v| u64::from(local_degree_at(&h, CellId::vertex(v).at(n)).unwrap()) - 1)
                .sum();
            assert_eq!(excess, 2 * (u64::from(h.d()).pow(n) - 1), "{name} {n}");
        }
        let f = flower(&h, CellId::vertex(0).at(2)).unwrap();
        assert_eq!(f.edges.len(), f.tiles.len());
    }
    assert!(matches!(flower(&hier("lattes2x2"), CellId::tile(0).at(0)), Err(Error::InvalidCell(_))));
}

#[test]
fn expansion_levels() {
    let mut h = Hierarchy::new(checkerboard(3, 3).unwrap()).unwrap();
    assert_eq!(find_expansion_level(&mut h, 4).unwrap(), 1);
    let mut h = hier("lattes2x2");
    let n = find_expansion_level(&mut h, 4).unwrap();
    let cx = h.level(n).unwrap();
    assert!((0..cx.tiles.len() as u32).all(|t| !joins_opposite_sides(cx, t)));
    assert!(joins_opposite_sides(h.level(0).unwrap(), 0));
    let mut cheb = Hierarchy::new(parse_rule(include_str!("fixtures/chebyshev.rule")).unwrap()).unwrap();
    assert!(matches!(find_expansion_level(&mut cheb, 5), Err(Error::ExpansionNotEstablished { max_level: 5 })));
}

#[test]
fn level_cap_and_availability() {
    let mut h = hier("lattes2x2").with_cap(2);
    assert_eq!(h.ensure(3), Err(Error::LevelCap { requested: 3, cap: 2 }));
    assert!(matches!(h.level(2), Err(Error::LevelUnavailable { requested: 2, .. })));
    h.ensure(2).unwrap();
    assert_eq!(h.top(), 2);
    assert!(matches!(h.check_cell(CellId::tile(99).at(1)), Err(Error::InvalidCell(_))));
}

#[test]
fn stored_levels_reload() {
    let mut h = hier("quadratic3");
    h.ensure(4).unwrap();
    let stored: Vec<String> = (2..=4).map(|n| serde_json::to_string(h.level(n).unwrap()).unwrap()).collect();
    let mut again = hier("quadratic3");
    again.ensure(1).unwrap();
    for text in &stored {
        again.push_level(serde_json::from_str(text).unwrap()).unwrap();
    }
    for n in 0..=4 {
        assert_eq!(again.level(n).unwrap(), h.level(n).unwrap());
    }
    // A level that does not continue the hierarchy is refused.
    let mut short = hier("quadratic3");
    short.ensure(1).unwrap();
    assert!(short.push_level(serde_json::from_str(&stored[1]).unwrap()).is_err());
}

#[test]
fn iterates_compose_levels() {
    for &name in bundled_names() {
        let rule = bundled(name).unwrap();
        let mut h = Hierarchy::new(rule.clone()).unwrap();
        h.ensure(4).unwrap();
        let sq = iterate_rule(&rule, 2).unwrap();
        assert!(validate(&sq).is_valid(), "{name}");
        assert_eq!(sq.d, rule.d * rule.d);
        let mut h2 = Hierarchy::new(sq.clone()).unwrap();
        h2.ensure(2).unwrap();
        for k in 0..=2 {
            for dim in Dim::ALL {
                assert_eq!(h2.level(k).unwrap().count(dim), h.level(2 * k).unwrap().count(dim), "{name} {k} {dim:?}");
            }
        }
        let direct = complex_to_rule(h.level(2).unwrap(), rule.d);
        assert_eq!(rule_stats(&direct).unwrap(), rule_stats(&sq).unwrap(), "{name}");
        let one = iterate_rule(&rule, 1).unwrap();
        assert_eq!(one.cell_counts(), rule.cell_counts());
        assert_eq!(rule_stats(&one).unwrap(), rule_stats(&rule).unwrap());
    }
}

#[test]
fn iterate_has_the_fixed_points_of_the_square() {
    let rule = bundled("lattes2x2").unwrap();
    let mut sq = Hierarchy::new(iterate_rule(&rule, 2).unwrap()).unwrap();
    assert_eq!(enumerate_fixed_points(&mut sq, 1, 32).unwrap().total_weight(), 17);
}

#[test]
fn edge_covers_contain_their_edge() {
    for &name in bundled_names() {
        let mut h = hier(name);
        h.ensure(4).unwrap();
        for e in 0..h.level(1).unwrap().edges.len() as u32 {
            for k in 0..=3 {
                let c = cover_edge(&h, CellId::edge(e).at(1), k).unwrap();
                assert!(c.contains_edge, "{name} e={e} k={k}");
                assert!(c.vertices.len() >= 2);
            }
        }
        let c0 = cover_edge(&h, CellId::edge(0).at(0), 0).unwrap();
        assert_eq!(c0.card(), 2);
    }
    assert!(matches!(cover_edge(&hier("lattes2x2"), CellId::tile(0).at(0), 1), Err(Error::InvalidCell(_))));
}

#[test]
fn iterates_of_iterates_multiply() {
    for (name, a, b) in [("quadratic3", 2, 2), ("lattes2x2", 2, 1), ("quadratic3", 3, 2)] {
        let rule = bundled(name).unwrap();
        let nested = iterate_rule(&iterate_rule(&rule, a).unwrap(), b).unwrap();
        let direct = iterate_rule(&rule, a * b).unwrap();
        assert!(validate(&nested).is_valid(), "{name}");
        assert_eq!(nested.d, direct.d);
        assert_eq!(nested.cell_counts(), direct.cell_counts(), "{name} {a}x{b}");
        assert_eq!(rule_stats(&nested).unwrap(), rule_stats(&direct).unwrap(), "{name} {a}x{b}");
    }
}
