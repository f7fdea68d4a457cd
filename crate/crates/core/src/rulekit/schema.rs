use super::{Curve, RuleEdge, RuleTile, RuleVertex, SubdivisionRule};
use crate::cells::Color;
use crate::error::{Error, Result};
use serde::Serialize;
use serde_json::{Map, Value};

const TOP_FIELDS: [&str; 6] = ["curve", "d", "edges", "m", "tiles", "vertices"];

fn schema(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema { field: field.into(), message: message.into() }
}

fn get<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(join(path, key), "missing field"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn as_u32(v: &Value, path: &str) -> Result<u32> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn as_color(v: &Value, path: &str) -> Result<Color> {
    match v.as_str() {
        Some("white") => Ok(Color::White),
        Some("black") => Ok(Color::Black),
        _ => Err(schema(path, "expected \"white\" or \"black\"")),
    }
}

fn deny_unknown(obj: &Map<String, Value>, path: &str, known: &[&str]) -> Result<()> {
    for k in obj.keys() {
        if !known.contains(&k.as_str()) {
            return Err(schema(join(path, k), "unknown field"));
        }
    }
    Ok(())
}

fn check_ref(id: u32, len: usize, path: &str, what: &str) -> Result<()> {
    if (id as usize) < len {
        Ok(())
    } else {
        Err(schema(path, format!("dangling {what} id {id} (only {len} exist)")))
    }
}

/// Parses a rule document and renumbers it canonically.
pub fn parse_rule(text: &str) -> Result<SubdivisionRule> {
    let mut rule = parse_rule_raw(text)?;
    rule.normalize();
    Ok(rule)
}

/// Parses a rule document keeping the ids as written.
pub fn parse_rule_raw(text: &str) -> Result<SubdivisionRule> {
    let doc: Value = serde_json::from_str(text).map_err(|e| schema("<document>", e.to_string()))?;
    let top = as_object(&doc, "<document>")?;
    deny_unknown(top, "", &TOP_FIELDS)?;
    let m = as_u32(get(top, "", "m")?, "m")?;
    let d = as_u32(get(top, "", "d")?, "d")?;

    let mut vertices = Vec::new();
    for (i, v) in as_array(get(top, "", "vertices")?, "vertices")?.iter().enumerate() {
        let path = format!("vertices[{i}]");
        let obj = as_object(v, &path)?;
        deny_unknown(obj, &path, &["label"])?;
        let label = as_u32(get(obj, &path, "label")?, &join(&path, "label"))?;
        check_ref(label, m as usize, &join(&path, "label"), "0-vertex")?;
        vertices.push(RuleVertex { label });
    }

    let mut edges = Vec::new();
    for (i, v) in as_array(get(top, "", "edges")?, "edges")?.iter().enumerate() {
        let path = format!("edges[{i}]");
        let obj = as_object(v, &path)?;
        deny_unknown(obj, &path, &["ends", "forward", "image"])?;
        let ends_path = join(&path, "ends");
        let ends = as_array(get(obj, &path, "ends")?, &ends_path)?;
        if ends.len() != 2 {
            return Err(schema(ends_path, "expected exactly two vertex ids"));
        }
        let a = as_u32(&ends[0], &ends_path)?;
        let b = as_u32(&ends[1], &ends_path)?;
        check_ref(a, vertices.len(), &ends_path, "vertex")?;
        check_ref(b, vertices.len(), &ends_path, "vertex")?;
        let forward = get(obj, &path, "forward")?
            .as_bool()
            .ok_or_else(|| schema(join(&path, "forward"), "expected a boolean"))?;
        let image = as_u32(get(obj, &path, "image")?, &join(&path, "image"))?;
        check_ref(image, m as usize, &join(&path, "image"), "0-edge")?;
        edges.push(RuleEdge { ends: [a, b], forward, image });
    }

    let mut tiles = Vec::new();
    for (i, v) in as_array(get(top, "", "tiles")?, "tiles")?.iter().enumerate() {
        let path = format!("tiles[{i}]");
        let obj = as_object(v, &path)?;
        deny_unknown(obj, &path, &["boundary", "color", "location"])?;
        let bpath = join(&path, "boundary");
        let raw = as_array(get(obj, &path, "boundary")?, &bpath)?;
        if raw.len() % 2 != 0 || raw.is_empty() {
            return Err(schema(bpath, "expected an alternating vertex/edge cycle of even length"));
        }
        let mut boundary = Vec::with_capacity(raw.len());
        for (k, c) in raw.iter().enumerate() {
            let cpath = format!("{bpath}[{k}]");
            let id = as_u32(c, &cpath)?;
            if k % 2 == 0 {
                check_ref(id, vertices.len(), &cpath, "vertex")?;
            } else {
                check_ref(id, edges.len(), &cpath, "edge")?;
            }
            boundary.push(id);
        }
        let color = as_color(get(obj, &path, "color")?, &join(&path, "color"))?;
        let location = as_color(get(obj, &path, "location")?, &join(&path, "location"))?;
        tiles.push(RuleTile { boundary, color, location });
    }

    let cobj = as_object(get(top, "", "curve")?, "curve")?;
    deny_unknown(cobj, "curve", &["edges", "posts"])?;
    let mut posts = Vec::new();
    for p in as_array(get(cobj, "curve", "posts")?, "curve.posts")? {
        let id = as_u32(p, "curve.posts")?;
        check_ref(id, vertices.len(), "curve.posts", "vertex")?;
        posts.push(id);
    }
    let mut curve_edges = Vec::new();
    for (j, seg) in as_array(get(cobj, "curve", "edges")?, "curve.edges")?.iter().enumerate() {
        let path = format!("curve.edges[{j}]");
        let mut ids = Vec::new();
        for e in as_array(seg, &path)? {
            let id = as_u32(e, &path)?;
            check_ref(id, edges.len(), &path, "edge")?;
            ids.push(id);
        }
        curve_edges.push(ids);
    }

    Ok(SubdivisionRule { m, d, vertices, edges, tiles, curve: Curve { edges: curve_edges, posts } })
}

fn compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("rule parts serialize")
}

fn write_list<T: Serialize>(out: &mut String, key: &str, items: &[T], last: bool) {
    out.push_str(&format!("  \"{key}\": ["));
    if items.is_empty() {
        out.push(']');
    } else {
        out.push('\n');
        for (i, it) in items.iter().enumerate() {
            out.push_str("    ");
            out.push_str(&compact(it));
            if i + 1 < items.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("  ]");
    }
    out.push_str(if last { "\n" } else { ",\n" });
}

/// Writes the canonical text form: sorted keys, one cell per line.
pub fn save_rule(rule: &SubdivisionRule) -> String {
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"curve\": {},\n", compact(&rule.curve)));
    out.push_str(&format!("  \"d\": {},\n", rule.d));
    write_list(&mut out, "edges", &rule.edges, false);
    out.push_str(&format!("  \"m\": {},\n", rule.m));
    write_list(&mut out, "tiles", &rule.tiles, false);
    write_list(&mut out, "vertices", &rule.vertices, true);
    out.push_str("}\n");
    out
}
