use crate::cache::{Cache, CacheStats};
use crate::error::{CliError, CliResult};
use crate::output::{Format, Table};
use crate::{BaseColor, Cli, Command, Generate, Global, Series};
use std::path::Path;
use std::time::Instant;
use thurston_core::coding::{word_to_tile, CodingTable, Word};
use thurston_core::complex::{check_complex, complex_to_rule, cover_edge, find_expansion_level, iterate_rule, tile_class_counts, Hierarchy};
use thurston_core::dynamics::{analyze_critical, PointAddress, DEFAULT_DEPTH};
use thurston_core::measure::{
    backward_orbit_counts, compare, counts_to_measure, equidist_measure, equidist_tv, generic_point, mome, tv_envelope,
    EquidistKind, EquidistParams, TileMeasure,
};
use thurston_core::periodic::{
    circle_analysis_at, enumerate_fixed_points, exact_period_points, moebius_period_count, preperiodic_census,
    preperiodic_count_formula, Orientation,
};
use thurston_core::rulekit::{bundled, checkerboard, parse_rule, parse_rule_raw, rule_stats, save_rule, validate};
use thurston_core::{CellId, CellRef, Color, Error, SubdivisionRule};

/// Text for stdout and the exit status.
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

/// Deepest level `info` builds while looking for the expansion level.
const INFO_SEARCH_LEVELS: u32 = 6;

struct Session<'a> {
    global: &'a Global,
    cache: Option<Cache>,
    stats: CacheStats,
    start: Instant,
}

impl<'a> Session<'a> {
    fn new(global: &'a Global) -> Self {
        let dir = global.cache_dir.clone().or_else(|| std::env::var_os("THURSTON_CACHE").map(Into::into));
        Session { global, cache: dir.map(Cache::new), stats: CacheStats::default(), start: Instant::now() }
    }

    fn hierarchy(&mut self, rule: SubdivisionRule) -> CliResult<Hierarchy> {
        let mut hier = Hierarchy::new(rule)?.with_cap(self.global.level_cap);
        if let Some(cache) = &self.cache {
            cache.load(&mut hier, self.global.level_cap, &mut self.stats)?;
        }
        Ok(hier)
    }

    fn render(&self, table: &Table, default: Format) -> String {
        table.render(self.global.format.unwrap_or(default), self.global.float)
    }

    fn report_stats(&self, hier: Option<&Hierarchy>) {
        if !self.global.stats {
            return;
        }
        let s = &self.stats;
        let built = hier.map_or(s.built, |h| h.top().saturating_sub(1 + s.loaded + s.rebuilt));
        eprintln!("levels_loaded\t{}", s.loaded);
        eprintln!("levels_subdivided\t{built}");
        eprintln!("cache_rebuilt\t{}", s.rebuilt);
        eprintln!("cache_stored\t{}", s.stored);
        eprintln!("elapsed_ms\t{}", self.start.elapsed().as_millis());
    }
}

/// Reads a rule file. A path that does not exist but names a bundled rule (with or without
/// `.rule`) loads that rule.
fn load_rule(path: &Path) -> CliResult<SubdivisionRule> {
    match std::fs::read_to_string(path) {
        Ok(text) => Ok(parse_rule(&text)?),
        Err(e) => {
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
            let name = name.strip_suffix(".rule").unwrap_or(name);
            if !path.exists() && path.parent().map_or(true, |p| p.as_os_str().is_empty()) {
                if let Some(rule) = bundled(name) {
                    return Ok(rule);
                }
            }
            Err(CliError::io(path, e))
        }
    }
}

fn key_value(rows: Vec<(&str, String)>) -> Table {
    let mut t = Table::new(&["key", "value"]).numeric(&["value"]);
    for (k, v) in rows {
        t.push([k.to_string(), v]);
    }
    t
}

fn measure_rows(hier: &Hierarchy, a: &TileMeasure, b: &TileMeasure, name: &str) -> CliResult<Table> {
    let cx = hier.level(b.level)?;
    let report = compare(a, b)?;
    let mut t = Table::new(&["tile", "color", name, "mome", "deviation"]).numeric(&[name, "mome", "deviation"]);
    for (i, tile) in cx.tiles.iter().enumerate() {
        t.push([i.to_string(), tile.color.to_string(), a.masses[i].to_string(), b.masses[i].to_string(), report.deviations[i].to_string()]);
    }
    t.push(["skeleton".into(), String::new(), a.skeleton_mass.to_string(), b.skeleton_mass.to_string(), report.skeleton_deviation.to_string()]);
    t.push(["tv".into(), String::new(), String::new(), String::new(), report.tv.to_string()]);
    Ok(t)
}

fn base_point(hier: &mut Hierarchy, base: BaseColor) -> CliResult<PointAddress> {
    let color = match base {
        BaseColor::White => Color::White,
        BaseColor::Black => Color::Black,
    };
    Ok(generic_point(hier, color, DEFAULT_DEPTH)?)
}

fn address_cells(hier: &Hierarchy, p: &PointAddress) -> CliResult<String> {
    let upto = p.depth().min(hier.top() as usize);
    Ok(p.cells(hier, upto)?.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let mut s = Session::new(&cli.global);
    let tsv = Format::Tsv;
    match &cli.command {
        Command::Validate { rule } => cmd_validate(&s, rule),
        Command::Generate { what } => cmd_generate(what),
        Command::Info { rule } => {
            let rule = load_rule(rule)?;
            let stats = rule_stats(&rule)?;
            let mut hier = s.hierarchy(rule)?;
            let crit = analyze_critical(hier.cells());
            let expansion = match find_expansion_level(&mut hier, INFO_SEARCH_LEVELS) {
                Ok(n) => n.to_string(),
                Err(Error::ExpansionNotEstablished { max_level }) => format!("none up to {max_level}"),
                Err(e) => return Err(e.into()),
            };
            let cycles: Vec<String> =
                crit.cycles.iter().map(|c| c.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")).collect();
            let t = key_value(vec![
                ("m", stats.m.to_string()),
                ("d", stats.d.to_string()),
                ("w_w", stats.w_w.to_string()),
                ("w_b", stats.w_b.to_string()),
                ("b_w", stats.b_w.to_string()),
                ("b_b", stats.b_b.to_string()),
                ("w", stats.w.to_string()),
                ("b", stats.b.to_string()),
                ("lambda", stats.lambda.to_string()),
                ("degree_on_curve", stats.degree_on_curve.to_string()),
                ("entropy", format!("{:.12}", stats.entropy)),
                ("critical_points", crit.critical.len().to_string()),
                ("critical_multiplicity", crit.critical.iter().map(|&(_, k)| k - 1).sum::<u32>().to_string()),
                ("periodic_post_cycles", cycles.join("; ")),
                ("has_periodic_critical", crit.has_periodic_critical.to_string()),
                ("kappa", crit.kappa.to_string()),
                ("expansion_level", expansion),
            ]);
            s.report_stats(Some(&hier));
            Ok(Outcome::ok(s.render(&t, tsv)))
        }
        Command::Subdivide { rule, level, check, counts, dump } => {
            let mut hier = s.hierarchy(load_rule(rule)?)?;
            hier.ensure(*level)?;
            if *dump {
                let text = save_rule(&complex_to_rule(hier.level(*level)?, hier.d()));
                s.report_stats(Some(&hier));
                return Ok(Outcome::ok(text));
            }
            let columns: &[&str] = if *counts {
                &["level", "vertices", "edges", "tiles", "euler"]
            } else {
                &["level", "vertices", "edges", "tiles", "euler", "ww", "wb", "bw", "bb"]
            };
            let mut t = Table::new(columns);
            let mut problems = Vec::new();
            for n in 0..=*level {
                let cx = hier.level(n)?;
                let classes = if n == 0 {
                    vec![String::new(); 4]
                } else {
                    let c = tile_class_counts(&hier, n)?;
                    vec![c.ww.to_string(), c.wb.to_string(), c.bw.to_string(), c.bb.to_string()]
                };
                let mut row = vec![
                    n.to_string(),
                    cx.vertices.len().to_string(),
                    cx.edges.len().to_string(),
                    cx.tiles.len().to_string(),
                    cx.euler_characteristic().to_string(),
                ];
                if !*counts {
                    row.extend(classes);
                }
                t.push(row);
                if *check {
                    problems.extend(check_complex(&hier, n)?.into_iter().map(|p| format!("level {n}: {p}")));
                }
            }
            s.report_stats(Some(&hier));
            for p in &problems {
                eprintln!("{p}");
            }
            Ok(Outcome { text: s.render(&t, tsv), code: if problems.is_empty() { 0 } else { 1 } })
        }
        Command::CoverEdge { rule, edge, level, k } => {
            let mut hier = s.hierarchy(load_rule(rule)?)?;
            hier.ensure(level + k)?;
            let t = cover_table(&hier, CellRef { level: *level, dim: thurston_core::Dim::Edge, id: *edge }, *k)?;
            s.report_stats(Some(&hier));
            Ok(Outcome::ok(s.render(&t, tsv)))
        }
        Command::FixedPoints { rule, iterate, depth } => {
            let mut hier = s.hierarchy(load_rule(rule)?)?;
            let set = enumerate_fixed_points(&mut hier, *iterate, *depth)?;
            if set.iterate != set.n {
                eprintln!("note: analysed f^{} and kept the points of period dividing {}", set.iterate, set.n);
            }
            let mut t = Table::new(&["index", "locus", "weight", "site", "address", "itinerary"]);
            for (i, p) in set.points.iter().enumerate() {
                t.push([
                    i.to_string(),
                    p.locus.name().to_string(),
                    p.weight.to_string(),
                    p.site.to_string(),
                    address_cells(&hier, &p.address)?,
                    p.address.itinerary_string(),
                ]);
            }
            s.report_stats(Some(&hier));
            Ok(Outcome::ok(s.render(&t, tsv)))
        }
        Command::Preperiodic { rule, m, n, points } => {
            let mut hier = s.hierarchy(load_rule(rule)?)?;
            let census = preperiodic_census(&mut hier, *m, *n, DEFAULT_DEPTH)?;
            let t = if *points {
                let mut t = Table::new(&["index", "weight", "itinerary"]);
                for (i, (p, w)) in census.points.iter().enumerate() {
                    t.push([i.to_string(), w.to_string(), p.itinerary_string()]);
                }
                t
            } else {
                let expected = preperiodic_count_formula(hier.d(), *m, *n);
                key_value(vec![
                    ("m", m.to_string()),
                    ("n", n.to_string()),
                    ("s", census.weighted().to_string()),
                    ("s_tilde", census.distinct().to_string()),
                    ("expected", expected.to_string()),
                    ("ratio", format!("{}/{}", census.distinct(), census.weighted())),
                    ("matches", (census.weighted() == expected).to_string()),
                ])
            };
            s.report_stats(Some(&hier));
            Ok(Outcome::ok(s.render(&t, tsv)))
        }
        Command::Periods { rule, max } => {
            let mut hier = s.hierarchy(load_rule(rule)?)?;
            let mut t = Table::new(&["n", "enumerated", "moebius", "agree"]);
            for n in 1..=*max {
                let enumerated: u64 = exact_period_points(&mut hier, n, DEFAULT_DEPTH)?.iter().map(|p| p.weight).sum();
                let (formula, agree) = match moebius_period_count(&hier, n) {
                    Ok(v) => (v.to_string(), (i128::from(enumerated) == v).to_string()),
                    Err(Error::PeriodicCriticalPresent) => ("n/a".into(), "n/a".into()),
                    Err(e) => return Err(e.into()),
                };
                t.push([n.to_string(), enumerated.to_string(), formula, agree]);
            }
            s.report_stats(Some(&hier));
            Ok(Outcome::ok(s.render(&t, tsv)))
        }
        Command::Circle { rule } => {
            let hier = s.hierarchy(load_rule(rule)?)?;
            let c = circle_analysis_at(&hier, 1)?;
            let name = |o: Orientation| match o {
                Orientation::Preserve => "preserve",
                Orientation::Reverse => "reverse",
                Orientation::Fold => "fold",
            };
            let sites: Vec<String> = c.sites.iter().map(|x| format!("{}={}", x.cell, name(x.orientation))).collect();
            let t = key_value(vec![
                ("preserve", c.preserve.to_string()),
                ("reverse", c.reverse.to_string()),
                ("fold", c.fold.to_string()),
                ("degree_on_curve", c.degree_on_curve.to_string()),
                ("invariant_holds", (c.preserve as i64 - c.reverse as i64 == c.degree_on_curve - 1).to_string()),
                ("sites", sites.join(" ")),
            ]);
            s.report_stats(Some(&hier));
            Ok(Outcome::ok(s.render(&t, tsv)))
        }
        Command::Mome { rule, level } => {
            let mut hier = s.hierarchy(load_rule(rule)?)?;
            hier.ensure(*level)?;
            let mu = mome(&hier, *level)?;
            let cx = hier.level(*level)?;
            let mut t = Table::new(&["tile", "color", "location", "mass"]).numeric(&["mass"]);
            for (i, tile) in cx.tiles.iter().enumerate() {
                t.push([i.to_string(), tile.color.to_string(), tile.location.to_string(), mu.masses[i].to_string()]);
            }
            s.report_stats(Some(&hier));
            Ok(Outcome::ok(s.render(&t, tsv)))
        }
        Command::Equidist { rule, kind, i, pm, pn, level, base } => {
            let kind = EquidistKind::parse(kind).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut hier = s.hierarchy(load_rule(rule)?)?;
            hier.ensure(*level)?;
            let params = match kind {
                EquidistKind::PreimageWeighted | EquidistKind::PreimagePlain => {
                    EquidistParams::Preimage { base: base_point(&mut hier, *base)?, i: *i }
                }
                _ => EquidistParams::Preperiodic { m: *pm, n: *pn },
            };
            let nu = equidist_measure(&mut hier, kind, &params)?.evaluate(&hier, *level)?;
            let t = measure_rows(&hier, &nu, &mome(&hier, *level)?, "measure")?;
            s.report_stats(Some(&hier));
            Ok(Outcome::ok(s.render(&t, tsv)))
        }
        Command::Sample { rule, steps, seed, level } => {
            let mut hier = s.hierarchy(load_rule(rule)?)?;
            hier.ensure(*level)?;
            let z = base_point(&mut hier, BaseColor::White)?;
            let runs = backward_orbit_counts(&hier, &z, *steps, *seed, *level, &[])?;
            let empirical = counts_to_measure(*level, &runs.last().expect("one checkpoint").1);
            let mut t = measure_rows(&hier, &empirical, &mome(&hier, *level)?, "empirical")?;
            let envelope = tv_envelope(hier.level(*level)?.tiles.len(), *steps);
            t.push(["envelope".into(), String::new(), String::new(), String::new(), format!("{envelope:.12}")]);
            s.report_stats(Some(&hier));
            Ok(Outcome::ok(s.render(&t, tsv)))
        }
        Command::Code { rule, word, level } => {
            let mut hier = s.hierarchy(load_rule(rule)?)?;
            let word = Word::parse(word, hier.d()).map_err(|e| CliError::Usage(e.to_string()))?;
            let n = word.len() as u32;
            if *level > n {
                return Err(CliError::Usage(format!("--level {level} exceeds the word length {n}")));
            }
            hier.ensure(n)?;
            let table = CodingTable::new(&hier)?;
            let tile = word_to_tile(&hier, &table, &word)?;
            let shifted = if n == 0 { None } else { Some(word_to_tile(&hier, &table, &word.shift())?) };
            let image = hier.level(n)?.image(tile.cell()).map(|c| c.at(n - 1));
            let itinerary: Vec<String> = table.itinerary(&hier, &word).iter().map(CellId::to_string).collect();
            let show = |c: Option<CellRef>| c.map_or_else(|| "-".to_string(), |c| c.to_string());
            let t = key_value(vec![
                ("word", word.to_string()),
                ("tile", tile.to_string()),
                ("image", show(image)),
                ("shift_tile", show(shifted)),
                ("equivariant", (image == shifted).to_string()),
                ("ancestor", hier.ancestor(tile, *level)?.to_string()),
                ("itinerary", itinerary.join(" ")),
            ]);
            s.report_stats(Some(&hier));
            Ok(Outcome::ok(s.render(&t, tsv)))
        }
        Command::Cache { rule, level, clear } => {
            let Some(cache) = s.cache.clone() else {
                return Err(CliError::Usage("no cache directory: pass --cache-dir or set THURSTON_CACHE".into()));
            };
            if *clear {
                cache.clear()?;
                let t = key_value(vec![("cleared", cache.dir().display().to_string())]);
                return Ok(Outcome::ok(s.render(&t, tsv)));
            }
            let rule = rule.as_deref().ok_or_else(|| CliError::Usage("a rule file is required".into()))?;
            let mut hier = Hierarchy::new(load_rule(rule)?)?.with_cap(cli.global.level_cap);
            cache.store(&mut hier, *level, &mut s.stats)?;
            let t = key_value(vec![
                ("directory", cache.rule_dir(&hier).display().to_string()),
                ("level", level.to_string()),
                ("loaded", s.stats.loaded.to_string()),
                ("subdivided", s.stats.built.to_string()),
                ("rebuilt", s.stats.rebuilt.to_string()),
                ("stored", s.stats.stored.to_string()),
            ]);
            s.report_stats(None);
            Ok(Outcome::ok(s.render(&t, tsv)))
        }
        Command::Experiment { rule, series } => {
            let mut hier = s.hierarchy(load_rule(rule)?)?;
            let t = experiment(&mut hier, series)?;
            s.report_stats(Some(&hier));
            Ok(Outcome::ok(s.render(&t, Format::Csv)))
        }
    }
}

fn cover_table(hier: &Hierarchy, edge: CellRef, kmax: u32) -> CliResult<Table> {
    let mut t = Table::new(&["k", "vertices", "card", "scaled", "contains", "decreasing"]).numeric(&["scaled"]);
    let mut prev: Option<(usize, u64)> = None;
    for k in 0..=kmax {
        let cover = cover_edge(hier, edge, k)?;
        let dk = u64::from(hier.d()).pow(k);
        // card_k / d^k < card_{k-1} / d^{k-1}
        let decreasing = prev.map_or("-".to_string(), |(c, dp)| ((cover.card() as u64) * dp < (c as u64) * dk).to_string());
        t.push([
            k.to_string(),
            cover.vertices.len().to_string(),
            cover.card().to_string(),
            reduced(cover.card() as u64, dk),
            cover.contains_edge.to_string(),
            decreasing,
        ]);
        prev = Some((cover.card(), dk));
    }
    Ok(t)
}

fn reduced(p: u64, q: u64) -> String {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let g = gcd(p, q).max(1);
    if q / g == 1 {
        (p / g).to_string()
    } else {
        format!("{}/{}", p / g, q / g)
    }
}

fn experiment(hier: &mut Hierarchy, series: &Series) -> CliResult<Table> {
    match series {
        Series::Equidist { level, imax } => {
            hier.ensure(*level)?;
            let base = base_point(hier, BaseColor::White)?;
            let mu = mome(hier, *level)?;
            let mut t = Table::new(&["i", "tv", "closed_form", "match"]).numeric(&["tv", "closed_form"]);
            for i in *level..=*imax {
                let nu = equidist_measure(hier, EquidistKind::PreimageWeighted, &EquidistParams::Preimage { base: base.clone(), i })?
                    .evaluate(hier, *level)?;
                let tv = compare(&nu, &mu)?.tv;
                let closed = equidist_tv(hier, i, *level)?;
                t.push([i.to_string(), tv.to_string(), closed.to_string(), (tv == closed).to_string()]);
            }
            Ok(t)
        }
        Series::CoverEdge { edge, kmax } => {
            hier.ensure(*kmax)?;
            cover_table(hier, CellRef { level: 0, dim: thurston_core::Dim::Edge, id: *edge }, *kmax)
        }
        Series::Sampler { steps, every, seed, level } => {
            if *every == 0 {
                return Err(CliError::Usage("--every must be positive".into()));
            }
            hier.ensure(*level)?;
            let z = base_point(hier, BaseColor::White)?;
            let checkpoints: Vec<usize> = (1..=*steps / *every).map(|k| k * *every).collect();
            let runs = backward_orbit_counts(hier, &z, *steps, *seed, *level, &checkpoints)?;
            let mu = mome(hier, *level)?;
            let tiles = hier.level(*level)?.tiles.len();
            let mut t = Table::new(&["steps", "tv", "envelope"]);
            for (j, counts) in runs {
                let tv = compare(&counts_to_measure(*level, &counts), &mu)?.tv;
                let tv = crate::output::decimal(&tv.to_string()).unwrap_or(f64::NAN);
                t.push([j.to_string(), format!("{tv:.12}"), format!("{:.12}", tv_envelope(tiles, j))]);
            }
            Ok(t)
        }
    }
}

fn cmd_validate(s: &Session, path: &Path) -> CliResult<Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let rule = match parse_rule_raw(&text) {
        Ok(rule) => rule,
        Err(Error::Schema { field, message }) => {
            let mut t = Table::new(&["kind", "message", "cells"]);
            t.push(["schema".to_string(), format!("{field}: {message}"), String::new()]);
            return Ok(Outcome { text: s.render(&t, Format::Tsv), code: 1 });
        }
        Err(e) => return Err(e.into()),
    };
    let report = validate(&rule);
    if report.is_valid() {
        let t = key_value(vec![("status", "valid".into()), ("m", rule.m.to_string()), ("d", rule.d.to_string())]);
        return Ok(Outcome::ok(s.render(&t, Format::Tsv)));
    }
    let mut t = Table::new(&["kind", "message", "cells"]);
    for v in &report.violations {
        let cells: Vec<String> = v.cells.iter().map(CellId::to_string).collect();
        t.push([v.kind.name().to_string(), v.message.clone(), cells.join(" ")]);
    }
    Ok(Outcome { text: s.render(&t, Format::Tsv), code: 1 })
}

fn cmd_generate(what: &Generate) -> CliResult<Outcome> {
    let rule = match what {
        Generate::Checkerboard { a, b } => checkerboard(*a, *b)?,
        Generate::Bundled { name } => bundled(name).ok_or_else(|| {
            CliError::Usage(format!("unknown bundled rule `{name}` (known: {})", thurston_core::rulekit::bundled_names().join(", ")))
        })?,
        Generate::Iterate { rule, n } => iterate_rule(&load_rule(rule)?, *n)?,
    };
    Ok(Outcome::ok(save_rule(&rule)))
}
