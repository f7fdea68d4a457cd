use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn rules_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../rules")
}

fn rule(name: &str) -> PathBuf {
    rules_dir().join(format!("{name}.rule"))
}

fn thurston(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_thurston"));
    cmd.args(args).env_remove("THURSTON_CACHE");
    if let Some(dir) = cache {
        cmd.env("THURSTON_CACHE", dir);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Value of one `--stats` counter on stderr.
fn counter(o: &Output, name: &str) -> u32 {
    let err = String::from_utf8_lossy(&o.stderr);
    err.lines()
        .find_map(|l| l.strip_prefix(name).and_then(|r| r.strip_prefix('\t')))
        .unwrap_or_else(|| panic!("no {name} in {err}"))
        .parse()
        .unwrap()
}

#[test]
fn info_matches_golden_file() {
    let path = rule("lattes2x2");
    let o = thurston(&["info", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), include_str!("golden/info_lattes2x2.tsv"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let text = fs::read_to_string(rule("lattes2x2")).unwrap();
    // Black tile 1 recolored white: neighbours now share a color.
    let broken = text.replacen(r#""color":"black""#, r#""color":"white""#, 1);
    let bad = dir.path().join("broken.rule");
    fs::write(&bad, broken).unwrap();
    let o = thurston(&["validate", bad.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().count() > 1, "{}", stdout(&o));

    let o = thurston(&["validate", rule("quadratic3").to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valid"));

    let missing = dir.path().join("absent.rule");
    assert_eq!(thurston(&["validate", missing.to_str().unwrap()], None).status.code(), Some(3));
    assert_eq!(thurston(&["validate"], None).status.code(), Some(2));
    assert_eq!(thurston(&["code", "lattes2x2", "--word", "9"], None).status.code(), Some(2));
}

#[test]
fn fixed_points_of_the_second_iterate() {
    let o = thurston(&["fixed-points", rule("lattes2x2").to_str().unwrap(), "--iterate", "2"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split('\t').collect();
    let col = header.iter().position(|&h| h == "weight").unwrap();
    let total: u64 = lines.map(|l| l.split('\t').nth(col).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 17);
}

#[test]
fn cached_runs_match_uncached_runs() {
    let dir = TempDir::new().unwrap();
    let path = rule("quadratic3");
    let p = path.to_str().unwrap();
    let commands: [&[&str]; 3] = [
        &["info", p],
        &["subdivide", p, "--level", "5"],
        &["mome", p, "--level", "4"],
    ];
    let plain: Vec<String> = commands.iter().map(|c| stdout(&thurston(c, None))).collect();
    let o = thurston(&["cache", p, "--level", "6"], Some(dir.path()));
    assert_eq!(o.status.code(), Some(0));
    for (c, want) in commands.iter().zip(&plain) {
        assert_eq!(&stdout(&thurston(c, Some(dir.path()))), want, "{c:?}");
    }
}

#[test]
fn cache_hits_skip_subdivision_and_corruption_is_rebuilt() {
    let dir = TempDir::new().unwrap();
    let path = rule("lattes2x2");
    let p = path.to_str().unwrap();
    let args = ["--stats", "mome", p, "--level", "4"];

    let cold = thurston(&args, Some(dir.path()));
    assert_eq!(counter(&cold, "levels_loaded"), 0);
    assert_eq!(counter(&cold, "levels_subdivided"), 3);
    // Plain commands only read the cache; `cache` fills it.
    assert!(walk(dir.path()).is_empty());
    let fill = thurston(&["--stats", "cache", p, "--level", "4"], Some(dir.path()));
    assert_eq!(counter(&fill, "cache_stored"), 3);

    let warm = thurston(&args, Some(dir.path()));
    assert_eq!(stdout(&warm), stdout(&cold));
    assert_eq!(counter(&warm, "levels_loaded"), 3);
    assert_eq!(counter(&warm, "levels_subdivided"), 0);

    let entry = walk(dir.path()).into_iter().find(|f| f.ends_with("level-3.json")).expect("level 3 is stored");
    let mut bytes = fs::read(&entry).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 1;
    fs::write(&entry, bytes).unwrap();

    let repaired = thurston(&args, Some(dir.path()));
    assert_eq!(stdout(&repaired), stdout(&cold));
    assert_eq!(counter(&repaired, "cache_rebuilt"), 1);
    let again = thurston(&args, Some(dir.path()));
    assert_eq!(counter(&again, "cache_rebuilt"), 0);
}

fn walk(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let Ok(entries) = fs::read_dir(dir) else { return out };
    for e in entries {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

#[test]
fn sampler_series_is_reproducible() {
    let p = rule("lattes3x3");
    let args = ["experiment", p.to_str().unwrap(), "sampler", "--steps", "20000", "--every", "5000", "--seed", "7"];
    let a = thurston(&args, None);
    let b = thurston(&args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    assert!(text.starts_with("steps,"));
    assert_eq!(text.lines().count(), 5);
    let other = thurston(&["experiment", p.to_str().unwrap(), "sampler", "--steps", "20000", "--every", "5000", "--seed", "8"], None);
    assert_ne!(stdout(&other), text);
}

#[test]
fn bundled_rules_match_shipped_files() {
    for name in ["lattes2x2", "lattes3x3", "quadratic3"] {
        let o = thurston(&["generate", "bundled", name], None);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), fs::read_to_string(rule(name)).unwrap(), "{name}");
    }
    assert_eq!(thurston(&["generate", "bundled", "nosuch"], None).status.code(), Some(2));
}

#[test]
fn json_output_is_parseable() {
    let o = thurston(&["--format", "json", "mome", rule("lattes2x2").to_str().unwrap(), "--level", "1"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 8);
}

#[test]
fn dumped_levels_are_iterate_rules() {
    let dir = TempDir::new().unwrap();
    let p = rule("quadratic3");
    let dump = thurston(&["subdivide", p.to_str().unwrap(), "--level", "2", "--dump"], None);
    let iter = thurston(&["generate", "iterate", p.to_str().unwrap(), "--n", "2"], None);
    let (a, b) = (dir.path().join("dump.rule"), dir.path().join("iter.rule"));
    fs::write(&a, stdout(&dump)).unwrap();
    fs::write(&b, stdout(&iter)).unwrap();
    let info: Vec<String> = [&a, &b].iter().map(|f| stdout(&thurston(&["info", f.to_str().unwrap()], None))).collect();
    assert_eq!(thurston(&["validate", a.to_str().unwrap()], None).status.code(), Some(0));
    assert_eq!(info[0], info[1]);

    let counts = stdout(&thurston(&["subdivide", p.to_str().unwrap(), "--level", "3", "--counts"], None));
    assert_eq!(counts.lines().next().unwrap(), "level\tvertices\tedges\ttiles\teuler");
    assert_eq!(counts.lines().last().unwrap(), "3\t10\t24\t16\t2");
}
