use std::collections::BTreeSet;
use thurston_core::coding::{cylinder_pushforward, word_to_preimage, word_to_tile, CodingTable, Word};
use thurston_core::complex::Hierarchy;
use thurston_core::dynamics::apply_map;
use thurston_core::measure::{generic_point, mome};
use thurston_core::rulekit::{bundled, bundled_names};
use thurston_core::{CellId, Color, Dim, Error, PointAddress};

fn hier(name: &str) -> Hierarchy {
    Hierarchy::new(bundled(name).unwrap()).unwrap()
}

#[test]
fn coding_table_orders_each_color() {
    for &name in bundled_names() {
        let h = hier(name);
        let t = CodingTable::new(&h).unwrap();
        for color in [Color::White, Color::Black] {
            let order = t.order(color);
            assert_eq!(order.len() as u32, h.d());
            assert!(order.iter().all(|&a| h.cells().tile_color[a as usize] == color));
        }
    }
}

#[test]
fn words_code_white_tiles_bijectively() {
    for (name, top) in [("quadratic3", 6), ("lattes3x3", 3)] {
        let mut h = hier(name);
        h.ensure(top).unwrap();
        let t = CodingTable::new(&h).unwrap();
        assert_eq!(word_to_tile(&h, &t, &Word::empty()).unwrap(), CellId::tile(0).at(0));
        for n in 1..=top {
            let cx = h.level(n).unwrap();
            let mut seen = BTreeSet::new();
            for w in Word::all(h.d(), n) {
                let c = word_to_tile(&h, &t, &w).unwrap();
                assert_eq!(c.dim, Dim::Tile);
                assert_eq!(cx.tiles[c.id as usize].color, Color::White);
                let image = cx.key(c.cell()).unwrap().below;
                assert_eq!(image, word_to_tile(&h, &t, &w.shift()).unwrap().id, "{name} {w}");
                seen.insert(c.id);
            }
            assert_eq!(seen.len() as u64, u64::from(h.d()).pow(n), "{name} n={n}");
        }
    }
}

#[test]
fn words_code_preimages_of_a_generic_point() {
    let mut h = hier("lattes2x2");
    h.ensure(4).unwrap();
    let t = CodingTable::new(&h).unwrap();
    let p = generic_point(&mut h, Color::White, 32).unwrap();
    assert_eq!(word_to_preimage(&h, &t, &Word::empty(), &p).unwrap(), p);
    for n in 1..=4u32 {
        let mut cells = BTreeSet::new();
        for w in Word::all(h.d(), n) {
            let y = word_to_preimage(&h, &t, &w, &p).unwrap();
            let back = (0..n).fold(y.clone(), |q, _| apply_map(h.cells(), &q).unwrap());
            assert_eq!(back, p);
            assert_eq!(y.cell(&h, n as usize).unwrap(), word_to_tile(&h, &t, &w).unwrap());
            assert!(cells.insert(y.cell(&h, n as usize).unwrap()));
        }
    }
}

#[test]
fn preimage_coding_needs_a_generic_white_base() {
    let mut h = hier("lattes2x2");
    h.ensure(1).unwrap();
    let t = CodingTable::new(&h).unwrap();
    let w = Word::parse("1", 4).unwrap();
    let black = generic_point(&mut h, Color::Black, 32).unwrap();
    assert!(matches!(word_to_preimage(&h, &t, &w, &black), Err(Error::NonGenericBasePoint(_))));
    let vertex = PointAddress::of_vertex(&h, CellId::vertex(0).at(0), 4).unwrap();
    assert!(matches!(word_to_preimage(&h, &t, &w, &vertex), Err(Error::NonGenericBasePoint(_))));
}

#[test]
fn cylinder_pushforward_is_uniform_at_its_own_level() {
    let mut h = hier("lattes3x3");
    h.ensure(3).unwrap();
    let t = CodingTable::new(&h).unwrap();
    for n in 0..=3 {
        let push = cylinder_pushforward(&h, &t, n, n).unwrap();
        let cx = h.level(n).unwrap();
        for (tile, mass) in cx.tiles.iter().zip(&push.masses) {
            let expected = match tile.color {
                Color::White => num_rational::BigRational::new(1.into(), num_bigint::BigInt::from(9u32).pow(n)),
                Color::Black => num_rational::BigRational::from_integer(0.into()),
            };
            assert_eq!(*mass, expected);
        }
        assert!(num_traits::One::is_one(&push.total()));
    }
    assert!(cylinder_pushforward(&h, &t, 1, 2).is_err());
    // Coarser levels see the measure of maximal entropy plus an eigenvalue correction only.
    let coarse = cylinder_pushforward(&h, &t, 3, 0).unwrap();
    assert_ne!(coarse, mome(&h, 0).unwrap());
    assert!(num_traits::One::is_one(&coarse.total()));
}
