use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thurston_core::rulekit::{
    bundled, bundled_names, checkerboard, parse_rule, parse_rule_raw, real_quadratic, rule_stats, save_rule, validate,
    winding_degree, ViolationKind,
};
use thurston_core::{Color, Error, SubdivisionRule};

fn chebyshev() -> SubdivisionRule {
    parse_rule(include_str!("fixtures/chebyshev.rule")).unwrap()
}

fn all_rules() -> Vec<(String, SubdivisionRule)> {
    let mut out: Vec<_> = bundled_names().iter().map(|&n| (n.to_string(), bundled(n).unwrap())).collect();
    for (a, b) in [(1, 2), (2, 1), (2, 3), (3, 2), (4, 4)] {
        out.push((format!("checkerboard({a},{b})"), checkerboard(a, b).unwrap()));
    }
    out.push(("chebyshev".into(), chebyshev()));
    out
}

fn schema_field(text: &str) -> String {
    match parse_rule(text) {
        Err(Error::Schema { field, .. }) => field,
        other => panic!("expected a schema error, got {other:?}"),
    }
}

#[test]
fn save_then_parse_is_identity() {
    for (name, rule) in all_rules() {
        let text = save_rule(&rule);
        assert_eq!(parse_rule(&text).unwrap(), rule, "{name}");
        assert_eq!(save_rule(&parse_rule(&text).unwrap()), text, "{name}");
    }
}

#[test]
fn normalize_is_idempotent() {
    for (name, rule) in all_rules() {
        let mut again = rule.clone();
        again.normalize();
        assert_eq!(again, rule, "{name}");
    }
}

#[test]
fn shipped_rule_files_match_the_generators() {
    for &name in bundled_names() {
        let path = format!("{}/../../rules/{name}.rule", env!("CARGO_MANIFEST_DIR"));
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(parse_rule(&text).unwrap(), bundled(name).unwrap(), "{name}");
    }
}

#[test]
fn raw_parse_keeps_file_numbering() {
    let text = include_str!("fixtures/chebyshev.rule");
    let raw = parse_rule_raw(text).unwrap();
    assert_eq!(raw.curve.posts, vec![0, 2, 3]);
    let mut normalized = raw.clone();
    normalized.normalize();
    assert_eq!(normalized, parse_rule(text).unwrap());
}

#[test]
fn schema_errors_name_the_field() {
    let good: serde_json::Value = serde_json::from_str(&save_rule(&bundled("lattes2x2").unwrap())).unwrap();
    let edit = |f: &dyn Fn(&mut serde_json::Value)| {
        let mut v = good.clone();
        f(&mut v);
        v.to_string()
    };
    assert_eq!(schema_field("{\"m\": 4}"), "d");
    assert_eq!(schema_field("[1, 2]"), "<document>");
    assert_eq!(schema_field(&edit(&|v| v["extra"] = 1.into())), "extra");
    assert_eq!(schema_field(&edit(&|v| v["tiles"][3]["color"] = "grey".into())), "tiles[3].color");
    assert_eq!(schema_field(&edit(&|v| v["edges"][0]["image"] = (-1).into())), "edges[0].image");
    assert_eq!(schema_field(&edit(&|v| v["tiles"][0]["boundary"][0] = 999.into())), "tiles[0].boundary[0]");
    assert!(matches!(parse_rule("not json"), Err(Error::Schema { .. })));
}

#[test]
fn generated_rules_validate() {
    for (name, rule) in all_rules() {
        let report = validate(&rule);
        assert!(report.is_valid(), "{name}: {:?}", report.violations);
    }
    assert_eq!(real_quadratic(), bundled("quadratic3").unwrap());
}

#[test]
fn degree_one_checkerboard_is_degenerate() {
    assert!(matches!(checkerboard(1, 1), Err(Error::DegenerateRule(_))));
    assert!(matches!(checkerboard(0, 3), Err(Error::DegenerateRule(_))));
}

#[test]
fn broken_rules_report_the_violated_invariant() {
    let base = bundled("lattes2x2").unwrap();

    let mut r = base.clone();
    r.tiles.pop();
    assert!(validate(&r).has(ViolationKind::TileCount));

    let mut r = base.clone();
    r.tiles[0].color = r.tiles[0].color.opposite();
    let report = validate(&r);
    assert!(!report.is_valid());
    assert!(report.has(ViolationKind::TileCount) || report.has(ViolationKind::EdgeLabels), "{:?}", report.violations);

    let mut r = base.clone();
    r.d = 3;
    assert!(!validate(&r).is_valid());

    let mut r = base.clone();
    let v = r.curve.posts[0] as usize;
    r.vertices[v].label = (r.vertices[v].label + 1) % r.m;
    assert!(!validate(&r).is_valid());

    let mut r = base;
    r.edges[0].forward = !r.edges[0].forward;
    assert!(!validate(&r).is_valid());
}

#[test]
fn violations_have_stable_names() {
    assert_eq!(ViolationKind::TileCount.name(), "tile-count");
    assert_eq!(ViolationKind::RiemannHurwitz.name(), "riemann-hurwitz");
}

#[test]
fn tile_classes_of_the_bundled_rules() {
    let s = rule_stats(&bundled("lattes2x2").unwrap()).unwrap();
    assert_eq!((s.w_w, s.w_b, s.b_w, s.b_b, s.lambda), (2, 2, 2, 2, 0));
    let s = rule_stats(&bundled("lattes3x3").unwrap()).unwrap();
    assert_eq!((s.w_w, s.b_w, s.lambda), (5, 4, 1));
    let s = rule_stats(&bundled("quadratic3").unwrap()).unwrap();
    assert_eq!((s.w_w, s.w_b, s.b_w, s.b_b, s.lambda), (1, 1, 1, 1, 0));
}

#[test]
fn measure_weights_are_a_stationary_vector() {
    for (name, rule) in all_rules() {
        let s = rule_stats(&rule).unwrap();
        assert!((&s.w + &s.b).is_one(), "{name}");
        let d = BigRational::from_integer(BigInt::from(s.d));
        let int = |x: u32| BigRational::from_integer(BigInt::from(x));
        // The white 0-tile's mass is the sum of the masses of the 1-tiles inside it.
        assert_eq!(&s.w * &d, int(s.w_w) * &s.w + int(s.b_w) * &s.b, "{name}");
        assert_eq!(&s.b * &d, int(s.w_b) * &s.w + int(s.b_b) * &s.b, "{name}");
        assert_eq!(s.lambda, i64::from(s.w_w) - i64::from(s.b_w), "{name}");
        assert_eq!(s.w_w + s.w_b, s.d, "{name}");
        assert_eq!(s.class(Color::Black, Color::White), s.b_w);
    }
}

#[test]
fn curve_degree_from_classes_matches_winding() {
    for (name, rule) in all_rules() {
        let s = rule_stats(&rule).unwrap();
        assert_eq!(s.degree_on_curve, winding_degree(&rule).unwrap(), "{name}");
    }
    assert_eq!(winding_degree(&bundled("lattes3x3").unwrap()).unwrap(), 1);
    assert_eq!(winding_degree(&chebyshev()).unwrap(), 0);
}

#[test]
fn cell_counts_of_checkerboards() {
    for (a, b) in [(2u32, 2u32), (2, 3), (3, 3)] {
        let r = checkerboard(a, b).unwrap();
        assert_eq!(r.tiles.len() as u32, 2 * a * b);
        assert_eq!(r.edges.len() as u32, 4 * a * b);
        let [v, e, t] = r.cell_counts();
        assert_eq!(v as i64 - e as i64 + t as i64, 2);
    }
}
