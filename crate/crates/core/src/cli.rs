//! The `critmap` command line.

use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::chip::{critical_states, firing_round, is_critical, ChipState};
use crate::error::{Error, Result};
use crate::group::{
    critical_group, critical_group_for_tree, critical_group_via_laplacian,
    critical_group_via_tree_form, group_order, AbelianGroup,
};
use crate::io::{fixture, parse_map_file, render_map};
use crate::label::Label;
use crate::linalg::smith_normal_form;
use crate::map::{CombMap, EdgeSet};
use crate::matrices::build_a;
use crate::medial::medial_digraph;
use crate::quasi_trees::{
    bicycle_space, bicycle_space_for, count_quasitrees, enumerate_quasitrees, genus_polynomial,
    weighted_quasitree_poly, ENUMERATION_LIMIT,
};
use crate::random::random_edge_set;

#[derive(Parser, Debug)]
#[command(
    name = "critmap",
    version,
    about = "Critical groups of combinatorial maps"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct MapArg {
    /// A map file, or the name of a built-in fixture such as `ex1`.
    map: String,
}

#[derive(Args, Debug)]
struct TreeArg {
    /// Spanning quasi-tree to use instead of the default, as `e1,e2,...`.
    #[arg(long, allow_hyphen_values = true)]
    tree: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The critical group.
    Group {
        #[command(flatten)]
        map: MapArg,
        #[command(flatten)]
        tree: TreeArg,
        /// Presentation to compute from.
        #[arg(long, value_enum, default_value_t = Route::Quasitree)]
        route: Route,
        /// Deleted vertex for the medial route.
        #[arg(long)]
        source: Option<String>,
    },
    /// Spanning quasi-trees.
    Quasitrees {
        #[command(flatten)]
        map: MapArg,
        /// List every quasi-tree (the default).
        #[arg(long, conflicts_with = "count")]
        enumerate: bool,
        /// Only print the number of quasi-trees.
        #[arg(long)]
        count: bool,
    },
    /// Quasi-trees of a bouquet counted by genus. Other maps are first
    /// replaced by their partial dual along a spanning quasi-tree.
    Genuspoly {
        #[command(flatten)]
        map: MapArg,
        #[command(flatten)]
        tree: TreeArg,
    },
    /// The weighted quasi-tree generating polynomial.
    Weightedpoly {
        #[command(flatten)]
        map: MapArg,
    },
    /// The bicycle space over GF(2).
    Bicycle {
        #[command(flatten)]
        map: MapArg,
        #[command(flatten)]
        tree: TreeArg,
    },
    /// The directed medial graph Laplacian and its cokernel.
    Medial {
        #[command(flatten)]
        map: MapArg,
        /// Deleted vertex for the reduced Laplacian.
        #[arg(long)]
        source: Option<String>,
    },
    /// The chip-firing game on edges.
    Chipfire {
        #[command(flatten)]
        map: MapArg,
        /// Source edge; defaults to the first edge.
        #[arg(long)]
        source: Option<String>,
        /// Starting chips in edge order, as `c1,c2,...`. Without it the
        /// critical states are listed.
        #[arg(long, allow_hyphen_values = true)]
        state: Option<String>,
        /// Print every firing.
        #[arg(long)]
        trace: bool,
    },
    /// The partial dual along `--edges`, or the full dual.
    Dual {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, allow_hyphen_values = true)]
        edges: Option<String>,
    },
    /// Smith normal form of `A(G, T) + I`.
    Snf {
        #[command(flatten)]
        map: MapArg,
        #[command(flatten)]
        tree: TreeArg,
    },
    /// Cross-checks the three group routes, the order law and duality
    /// invariance on the given maps, or on every fixture.
    Selfcheck { maps: Vec<String> },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Route {
    Quasitree,
    TreeForm,
    Medial,
}

struct Loaded {
    name: String,
    map: CombMap,
}

fn load_map(arg: &str) -> Result<Loaded> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read {arg}: {e}")))?;
        let file = parse_map_file(&text)?;
        let stem = path
            .file_stem()
            .map_or(arg.to_string(), |s| s.to_string_lossy().into_owned());
        return Ok(Loaded {
            name: file.name.unwrap_or(stem),
            map: file.map,
        });
    }
    match fixture(arg) {
        Some(f) => Ok(Loaded {
            name: f.name.to_string(),
            map: f.map.clone(),
        }),
        None => Err(Error::Input(format!(
            "no map file or fixture named '{arg}'"
        ))),
    }
}

fn label_list(text: &str) -> Vec<Label> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Label::from)
        .collect()
}

fn edge_list(m: &CombMap, text: &str) -> Result<EdgeSet> {
    let set: EdgeSet = label_list(text).into_iter().collect();
    for l in &set {
        m.edge_index(l)?;
    }
    Ok(set)
}

fn chosen_tree(m: &CombMap, tree: &TreeArg) -> Result<EdgeSet> {
    match &tree.tree {
        Some(text) => edge_list(m, text),
        None => m.find_spanning_quasitree(),
    }
}

fn source_label(m: &CombMap, source: &Option<String>) -> Result<Label> {
    match source {
        Some(s) => {
            let l = Label::from(s.as_str());
            m.edge_index(&l)?;
            Ok(l)
        }
        None => m
            .labels()
            .first()
            .cloned()
            .ok_or_else(|| Error::Input("the map has no edges".into())),
    }
}

fn set_text(set: &EdgeSet) -> String {
    let parts: Vec<&str> = set.iter().map(Label::as_str).collect();
    format!("{{{}}}", parts.join(","))
}

fn set_json(set: &EdgeSet) -> Value {
    Value::from(
        set.iter()
            .map(|l| l.as_str().to_string())
            .collect::<Vec<_>>(),
    )
}

fn bigint_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => Value::from(v),
        Err(_) => Value::from(x.to_string()),
    }
}

/// The stable JSON envelope; every key is always present.
fn envelope(name: &str) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("map".into(), Value::from(name));
    for key in ["group", "quasitrees", "polys", "critical_states"] {
        obj.insert(key.into(), Value::Null);
    }
    obj
}

struct Output {
    text: Vec<String>,
    json: Map<String, Value>,
    ok: bool,
}

impl Output {
    fn new(name: &str) -> Self {
        Output {
            text: Vec::new(),
            json: envelope(name),
            ok: true,
        }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    fn set(&mut self, key: &str, value: Value) {
        self.json.insert(key.into(), value);
    }
}

fn run_command(command: Command) -> Result<Output> {
    match command {
        Command::Group {
            map,
            tree,
            route,
            source,
        } => {
            let loaded = load_map(&map.map)?;
            let m = &loaded.map;
            let group = match route {
                Route::Quasitree => match &tree.tree {
                    Some(_) => critical_group_for_tree(m, &chosen_tree(m, &tree)?)?,
                    None => critical_group(m),
                },
                Route::TreeForm => critical_group_via_tree_form(m)?,
                Route::Medial => critical_group_via_laplacian(m, &source_label(m, &source)?)?,
            };
            let mut out = Output::new(&loaded.name);
            out.line(format!("K = {group}"));
            out.set("group", serde_json::to_value(&group).expect("serializable"));
            Ok(out)
        }
        Command::Quasitrees { map, count, .. } => {
            let loaded = load_map(&map.map)?;
            let m = &loaded.map;
            let mut out = Output::new(&loaded.name);
            if count {
                let n = count_quasitrees(m)?;
                out.line(n.to_string());
                out.set(
                    "quasitrees",
                    json!({ "count": bigint_json(&n), "sets": Value::Null }),
                );
            } else {
                let report = enumerate_quasitrees(m)?;
                for t in &report.sets {
                    out.line(format!("{} genus {}", set_text(&t.edges), t.genus));
                }
                out.line(format!("count {}", report.count));
                let sets: Vec<Value> = report.sets.iter().map(|t| set_json(&t.edges)).collect();
                out.set("quasitrees", json!({ "count": report.count, "sets": sets }));
                out.set(
                    "polys",
                    json!({ "genus_distribution": report.genus_poly.to_string() }),
                );
            }
            Ok(out)
        }
        Command::Genuspoly { map, tree } => {
            let loaded = load_map(&map.map)?;
            let m = &loaded.map;
            let bouquet = if m.is_bouquet() && tree.tree.is_none() {
                m.clone()
            } else {
                let t = chosen_tree(m, &tree)?;
                if !m.is_spanning_quasitree(&t)? {
                    return Err(Error::NotQuasiTree);
                }
                m.partial_dual(&t)?
            };
            let p = genus_polynomial(&bouquet)?;
            let mut out = Output::new(&loaded.name);
            out.line(p.to_string());
            out.set("polys", json!({ "genus": p.to_string() }));
            Ok(out)
        }
        Command::Weightedpoly { map } => {
            let loaded = load_map(&map.map)?;
            let q = weighted_quasitree_poly(&loaded.map)?;
            let mut out = Output::new(&loaded.name);
            out.line(q.to_string());
            out.set(
                "polys",
                json!({ "weighted": serde_json::to_value(&q).expect("serializable") }),
            );
            Ok(out)
        }
        Command::Bicycle { map, tree } => {
            let loaded = load_map(&map.map)?;
            let m = &loaded.map;
            let b = match &tree.tree {
                Some(_) => bicycle_space_for(m, &chosen_tree(m, &tree)?)?,
                None => bicycle_space(m)?,
            };
            let mut out = Output::new(&loaded.name);
            out.line(format!("dimension {}, order {}", b.dimension, b.order));
            out.set("bicycle", serde_json::to_value(&b).expect("serializable"));
            Ok(out)
        }
        Command::Medial { map, source } => {
            let loaded = load_map(&map.map)?;
            let m = &loaded.map;
            let q = source_label(m, &source)?;
            let d = medial_digraph(m)?;
            let lap = d.laplacian();
            let snf = smith_normal_form(&lap);
            let group = critical_group_via_laplacian(m, &q)?;
            let mut out = Output::new(&loaded.name);
            out.line(lap.to_string().trim_end().to_string());
            let diag: Vec<String> = snf.diagonal().iter().map(ToString::to_string).collect();
            out.line(format!("SNF {}", diag.join(" ")));
            out.line(format!("K = {group}"));
            let rows: Vec<Value> = lap
                .rows()
                .iter()
                .map(|r| r.iter().map(bigint_json).collect())
                .collect();
            out.set("laplacian", Value::from(rows));
            out.set("snf", snf.diagonal().iter().map(bigint_json).collect());
            out.set("group", serde_json::to_value(&group).expect("serializable"));
            Ok(out)
        }
        Command::Chipfire {
            map,
            source,
            state,
            trace,
        } => {
            let loaded = load_map(&map.map)?;
            let m = &loaded.map;
            let q = source_label(m, &source)?;
            let mut out = Output::new(&loaded.name);
            match state {
                Some(text) => {
                    let chips = text
                        .split(',')
                        .map(|c| c.trim().parse::<i64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| Error::InvalidState(format!("bad chip count: {e}")))?;
                    let start = ChipState::new(m, chips, q)?;
                    let steps = firing_round(m, &start)?;
                    let last = steps.last().map_or(start.clone(), |(_, s)| s.clone());
                    if trace {
                        for (e, s) in &steps {
                            out.line(format!("fire {e} -> {s}"));
                        }
                    } else {
                        out.line(last.to_string());
                    }
                    let critical = is_critical(m, &last)?;
                    if !trace {
                        out.line(format!("critical {critical}"));
                    }
                    let steps_json: Vec<Value> = steps
                        .iter()
                        .map(|(e, s)| json!({ "fire": e.as_str(), "state": s.chips }))
                        .collect();
                    out.set("trace", Value::from(steps_json));
                    out.set("final", json!(last.chips));
                    out.set("critical", Value::from(critical));
                }
                None => {
                    let states = critical_states(m, &q)?;
                    for s in &states {
                        out.line(s.to_string());
                    }
                    out.line(format!("{} critical states", states.len()));
                    out.set(
                        "critical_states",
                        states.iter().map(|s| json!(s.chips)).collect(),
                    );
                }
            }
            out.set("source", Value::from(source_label(m, &source)?.as_str()));
            Ok(out)
        }
        Command::Dual { map, edges } => {
            let loaded = load_map(&map.map)?;
            let m = &loaded.map;
            let dual = match &edges {
                Some(text) => m.partial_dual(&edge_list(m, text)?)?,
                None => m.dual(),
            };
            let mut out = Output::new(&loaded.name);
            out.line(render_map(None, &dual).trim_end().to_string());
            out.set("sigma", Value::from(dual.to_string()));
            Ok(out)
        }
        Command::Snf { map, tree } => {
            let loaded = load_map(&map.map)?;
            let m = &loaded.map;
            let t = chosen_tree(m, &tree)?;
            let snf = smith_normal_form(&build_a(m, &t)?.plus_identity());
            let mut out = Output::new(&loaded.name);
            let diag: Vec<String> = snf.diagonal().iter().map(ToString::to_string).collect();
            out.line(diag.join(" "));
            out.set("snf", snf.diagonal().iter().map(bigint_json).collect());
            out.set(
                "group",
                serde_json::to_value(AbelianGroup::from_smith(&snf)).expect("serializable"),
            );
            Ok(out)
        }
        Command::Selfcheck { maps } => {
            let targets: Vec<Loaded> = if maps.is_empty() {
                crate::io::fixtures()
                    .iter()
                    .map(|f| Loaded {
                        name: f.name.to_string(),
                        map: f.map.clone(),
                    })
                    .collect()
            } else {
                maps.iter().map(|a| load_map(a)).collect::<Result<_>>()?
            };
            let mut out = Output::new(if maps.len() == 1 {
                &targets[0].name
            } else {
                "selfcheck"
            });
            let mut results = Vec::new();
            for t in &targets {
                let failures = self_check(&t.map);
                if failures.is_empty() {
                    out.line(format!("PASS {}", t.name));
                } else {
                    out.ok = false;
                    out.line(format!("FAIL {}: {}", t.name, failures.join("; ")));
                }
                results.push(json!({ "map": t.name, "failures": failures }));
            }
            out.set("checks", Value::from(results));
            Ok(out)
        }
    }
}

/// Route agreement, the order law and invariance under duality and
/// orientation reversal. Returns a description of every failed check.
pub fn self_check(m: &CombMap) -> Vec<String> {
    let mut failures = Vec::new();
    let group = critical_group(m);
    if !m.is_connected() {
        return failures;
    }
    match critical_group_via_tree_form(m) {
        Ok(g) if g == group => {}
        other => failures.push(format!("tree-form route gave {other:?}, expected {group}")),
    }
    for q in m.labels() {
        match critical_group_via_laplacian(m, q) {
            Ok(g) if g == group => {}
            other => failures.push(format!(
                "medial route at {q} gave {other:?}, expected {group}"
            )),
        }
    }
    let order = group_order(&group).expect("critical groups are finite");
    match count_quasitrees(m) {
        Ok(n) if n == order => {}
        other => failures.push(format!(
            "quasi-tree determinant {other:?} differs from |K| = {order}"
        )),
    }
    if m.edge_count() <= ENUMERATION_LIMIT.min(16) {
        match enumerate_quasitrees(m) {
            Ok(r) if BigInt::from(r.count) == order => {}
            other => failures.push(format!(
                "enumeration {:?} differs from |K| = {order}",
                other.map(|r| r.count)
            )),
        }
    }
    if critical_group(&m.dual()) != group {
        failures.push("dual has a different group".into());
    }
    if critical_group(&m.reverse_orientation()) != group {
        failures.push("orientation reversal changed the group".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0ffee);
    for _ in 0..5 {
        let a = random_edge_set(&mut rng, m);
        let pd = m.partial_dual(&a).expect("edges of the map");
        if critical_group(&pd) != group {
            failures.push(format!(
                "partial dual along {} changed the group",
                set_text(&a)
            ));
        }
    }
    failures
}

/// Runs the command line, writing results to `out` and diagnostics to
/// `err`. Returns the process exit code: 0 on success, 1 on a domain error
/// or failed check, 2 on a usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match run_command(cli.command) {
        Ok(output) => {
            let written = if cli.json {
                writeln!(out, "{}", Value::Object(output.json))
            } else {
                output.text.iter().try_for_each(|l| writeln!(out, "{l}"))
            };
            if written.is_err() {
                return 1;
            }
            if output.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
