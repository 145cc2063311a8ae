//! The map file format, the built-in fixture library and serialization
//! helpers.
//!
//! A map file holds optional `name:` and `directed:` lines and a `sigma:`
//! line listing the cycles of `σ`, for example
//!
//! ```text
//! # two vertices on the torus
//! name: EX1
//! sigma: (a- b+ c- b- d-)(a+ c+ d+)
//! ```
//!
//! Cycles may continue on following lines. `#` starts a comment.

use std::sync::OnceLock;

use num_bigint::BigInt;
use petgraph::graph::UnGraph;
use serde::Serializer;

use crate::error::{Error, Result};
use crate::group::{critical_group, AbelianGroup};
use crate::map::{edge_set, format_cycles, AbstractGraph, CombMap, Dart, EdgeSet, Sign};

/// Big integers are emitted as JSON numbers when they fit in `i64`, as
/// decimal strings otherwise.
pub(crate) fn serialize_bigint<S: Serializer>(
    value: &BigInt,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match i64::try_from(value) {
        Ok(v) => s.serialize_i64(v),
        Err(_) => s.serialize_str(&value.to_string()),
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MapFile {
    pub name: Option<String>,
    pub directed: Option<bool>,
    pub map: CombMap,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn is_label_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.'
}

/// Parses map-file text into a validated map.
pub fn parse_map(text: &str) -> Result<CombMap> {
    Ok(parse_map_file(text)?.map)
}

pub fn parse_map_file(text: &str) -> Result<MapFile> {
    let mut name = None;
    let mut directed = None;
    let mut sigma: Option<Vec<Vec<Dart>>> = None;
    let mut open: Option<Vec<Dart>> = None;
    let mut in_sigma = false;

    for (row, raw) in text.lines().enumerate() {
        let line_no = row + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - trimmed.len();
        let mut body_offset = indent;
        let mut body = trimmed;
        if let Some((key, rest)) = trimmed.split_once(':') {
            let key_trim = key.trim();
            if key_trim.chars().all(|c| c.is_ascii_alphabetic()) && !key_trim.is_empty() {
                if open.is_some() {
                    return Err(parse_error(
                        line_no,
                        indent + 1,
                        "unclosed cycle before new key",
                    ));
                }
                in_sigma = false;
                let value = rest.trim();
                match key_trim {
                    "name" => name = Some(value.to_string()),
                    "directed" => {
                        directed = Some(match value {
                            "true" | "yes" => true,
                            "false" | "no" => false,
                            _ => {
                                return Err(parse_error(
                                    line_no,
                                    indent + key.len() + 2,
                                    "expected true or false",
                                ))
                            }
                        })
                    }
                    "sigma" => {
                        if sigma.is_some() {
                            return Err(parse_error(line_no, indent + 1, "duplicate sigma"));
                        }
                        sigma = Some(Vec::new());
                        in_sigma = true;
                        body_offset = indent + key.len() + 1;
                        body = rest;
                    }
                    other => {
                        return Err(parse_error(
                            line_no,
                            indent + 1,
                            format!("unknown key '{other}'"),
                        ))
                    }
                }
                if !in_sigma {
                    continue;
                }
            }
        }
        if !in_sigma {
            return Err(parse_error(
                line_no,
                indent + 1,
                "expected 'name:', 'directed:' or 'sigma:'",
            ));
        }
        let cycles = sigma.as_mut().expect("inside sigma");
        parse_cycles(body, line_no, body_offset, cycles, &mut open)?;
    }
    if open.is_some() {
        let last = text.lines().count().max(1);
        return Err(parse_error(last, 1, "unclosed cycle at end of input"));
    }
    let cycles = sigma.ok_or_else(|| parse_error(1, 1, "missing 'sigma:'"))?;
    Ok(MapFile {
        name,
        directed,
        map: crate::map::make_map(&cycles)?,
    })
}

fn parse_cycles(
    body: &str,
    line: usize,
    offset: usize,
    cycles: &mut Vec<Vec<Dart>>,
    open: &mut Option<Vec<Dart>>,
) -> Result<()> {
    let chars: Vec<(usize, char)> = body.char_indices().collect();
    let column = |i: usize| {
        offset
            + body[..chars.get(i).map_or(body.len(), |c| c.0)]
                .chars()
                .count()
            + 1
    };
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i].1;
        if c.is_whitespace() || c == ',' {
            i += 1;
        } else if c == '(' {
            if open.is_some() {
                return Err(parse_error(line, column(i), "nested '('"));
            }
            *open = Some(Vec::new());
            i += 1;
        } else if c == ')' {
            let cycle = open
                .take()
                .ok_or_else(|| parse_error(line, column(i), "unmatched ')'"))?;
            cycles.push(cycle);
            i += 1;
        } else if is_label_char(c) {
            let start = i;
            while i < chars.len() && is_label_char(chars[i].1) {
                i += 1;
            }
            let label: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            let sign = match chars.get(i).map(|&(_, c)| c) {
                Some('+') | Some('⁺') => Sign::Plus,
                Some('-') | Some('⁻') | Some('−') => Sign::Minus,
                _ => {
                    return Err(parse_error(
                        line,
                        column(i),
                        format!("dart '{label}' needs a '+' or '-' sign"),
                    ))
                }
            };
            i += 1;
            let cycle = open
                .as_mut()
                .ok_or_else(|| parse_error(line, column(start), "dart outside a cycle"))?;
            cycle.push(Dart::new(label, sign));
        } else {
            return Err(parse_error(
                line,
                column(i),
                format!("unexpected character '{c}'"),
            ));
        }
    }
    Ok(())
}

/// Map-file text for `m`, with `σ` in canonical cycle form.
pub fn render_map(name: Option<&str>, m: &CombMap) -> String {
    let mut out = String::new();
    if let Some(name) = name {
        out.push_str(&format!("name: {name}\n"));
    }
    out.push_str(&format!("sigma: {}\n", format_cycles(&m.sigma_cycles())));
    out
}

/// The underlying graph a fixture must reproduce, up to isomorphism.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NamedGraph {
    K5,
    K33,
    Petersen,
    Heawood,
}

impl NamedGraph {
    pub fn graph(self) -> AbstractGraph {
        let pairs: Vec<(usize, usize)> = match self {
            NamedGraph::K5 => (0..5)
                .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
                .collect(),
            NamedGraph::K33 => (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect(),
            NamedGraph::Petersen => (0..5)
                .flat_map(|i| [(i, (i + 1) % 5), (i, i + 5), (i + 5, (i + 2) % 5 + 5)])
                .collect(),
            NamedGraph::Heawood => (0..14)
                .map(|i| (i, (i + 1) % 14))
                .chain((0..14).step_by(2).map(|i| (i, (i + 5) % 14)))
                .collect(),
        };
        let n = pairs.iter().map(|&(u, v)| u.max(v)).max().unwrap_or(0) + 1;
        AbstractGraph::from_pairs(n, &pairs)
    }
}

/// Whether two loopless graphs are isomorphic as undirected multigraphs.
pub fn isomorphic(g: &AbstractGraph, h: &AbstractGraph) -> bool {
    let to_petgraph = |g: &AbstractGraph| {
        let mut p = UnGraph::<(), ()>::with_capacity(g.vertex_count, g.edges.len());
        let nodes: Vec<_> = (0..g.vertex_count).map(|_| p.add_node(())).collect();
        for e in &g.edges {
            p.add_edge(nodes[e.tail], nodes[e.head], ());
        }
        p
    };
    petgraph::algo::is_isomorphic(&to_petgraph(g), &to_petgraph(h))
}

/// A built-in map with the facts it is known to satisfy.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub map: CombMap,
    pub genus: usize,
    pub group: AbelianGroup,
    pub classical_group: Option<AbelianGroup>,
    pub underlying: Option<NamedGraph>,
    /// A spanning tree of the underlying graph singled out for the fixture.
    pub tree: Option<EdgeSet>,
}

struct Entry {
    name: &'static str,
    text: &'static str,
    genus: usize,
    group: &'static [i64],
    classical: Option<&'static [i64]>,
    underlying: Option<NamedGraph>,
    tree: Option<&'static [&'static str]>,
}

const ENTRIES: &[Entry] = &[
    Entry {
        name: "EX1",
        text: include_str!("../fixtures/ex1.map"),
        genus: 1,
        group: &[6],
        classical: Some(&[3]),
        underlying: None,
        tree: Some(&["c"]),
    },
    Entry {
        name: "LOOP1",
        text: include_str!("../fixtures/loop1.map"),
        genus: 0,
        group: &[],
        classical: Some(&[]),
        underlying: None,
        tree: Some(&[]),
    },
    Entry {
        name: "N2",
        text: include_str!("../fixtures/n2.map"),
        genus: 1,
        group: &[2],
        classical: Some(&[]),
        underlying: None,
        tree: Some(&[]),
    },
    Entry {
        name: "N3",
        text: include_str!("../fixtures/n3.map"),
        genus: 1,
        group: &[2, 2],
        classical: Some(&[]),
        underlying: None,
        tree: Some(&[]),
    },
    Entry {
        name: "N10",
        text: include_str!("../fixtures/n10.map"),
        genus: 5,
        group: &[2, 2, 2, 2, 2, 2, 2, 2, 2],
        classical: Some(&[]),
        underlying: None,
        tree: Some(&[]),
    },
    Entry {
        name: "K5T",
        text: include_str!("../fixtures/k5t.map"),
        genus: 1,
        group: &[5, 5, 10],
        classical: Some(&[5, 5, 5]),
        underlying: Some(NamedGraph::K5),
        tree: Some(&["1", "2", "6", "9"]),
    },
    Entry {
        name: "K33T",
        text: include_str!("../fixtures/k33t.map"),
        genus: 1,
        group: &[6, 18],
        classical: Some(&[3, 3, 9]),
        underlying: Some(NamedGraph::K33),
        tree: Some(&["1", "2", "3", "4", "5"]),
    },
    Entry {
        name: "PETT",
        text: include_str!("../fixtures/pett.map"),
        genus: 1,
        group: &[2, 1270],
        classical: Some(&[2, 10, 10, 10]),
        underlying: Some(NamedGraph::Petersen),
        tree: Some(&["1", "2", "3", "4", "5", "6", "7", "8", "9"]),
    },
    Entry {
        name: "HEAT",
        text: include_str!("../fixtures/heat.map"),
        genus: 1,
        group: &[7, 7, 7, 14, 14],
        classical: Some(&[7, 7, 7, 7, 21]),
        underlying: Some(NamedGraph::Heawood),
        tree: Some(&[
            "1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11", "12", "13",
        ]),
    },
    Entry {
        name: "DM1",
        text: include_str!("../fixtures/dm1.map"),
        genus: 2,
        group: &[3, 6],
        classical: Some(&[]),
        underlying: None,
        tree: Some(&[]),
    },
    Entry {
        name: "DM2",
        text: include_str!("../fixtures/dm2.map"),
        genus: 2,
        group: &[18],
        classical: Some(&[]),
        underlying: None,
        tree: Some(&[]),
    },
];

fn load(entry: &Entry) -> Fixture {
    let file = parse_map_file(entry.text).unwrap_or_else(|e| panic!("fixture {}: {e}", entry.name));
    assert_eq!(file.name.as_deref(), Some(entry.name), "fixture name");
    let m = file.map;
    let group = AbelianGroup::from_i64(entry.group);
    let fail = |what: &str| -> ! { panic!("fixture {} does not reproduce its {what}", entry.name) };
    if m.genus() != Ok(entry.genus) {
        fail("genus");
    }
    if let Some(named) = entry.underlying {
        if !isomorphic(&m.underlying_graph(), &named.graph()) {
            fail("underlying graph");
        }
    }
    if critical_group(&m) != group {
        fail("critical group");
    }
    let tree = entry.tree.map(|t| edge_set(t.iter().copied()));
    if let Some(t) = &tree {
        if m.is_spanning_tree(t) != Ok(true) {
            fail("spanning tree");
        }
    }
    Fixture {
        name: entry.name,
        map: m,
        genus: entry.genus,
        group,
        classical_group: entry.classical.map(AbelianGroup::from_i64),
        underlying: entry.underlying,
        tree,
    }
}

/// Every built-in fixture, validated on first use. A fixture whose genus,
/// underlying graph or critical group disagrees with its recorded values is
/// refused with a panic.
pub fn fixtures() -> &'static [Fixture] {
    static FIXTURES: OnceLock<Vec<Fixture>> = OnceLock::new();
    FIXTURES.get_or_init(|| ENTRIES.iter().map(load).collect())
}

/// Looks a fixture up by name, ignoring case and an optional `.map` suffix.
pub fn fixture(name: &str) -> Option<&'static Fixture> {
    let key = name.strip_suffix(".map").unwrap_or(name);
    fixtures().iter().find(|f| f.name.eq_ignore_ascii_case(key))
}

/// The bouquet `(1+ 2+ … m+ 1- 2- … m-)` of `m` pairwise interlaced loops.
pub fn interlaced_bouquet(m: usize) -> CombMap {
    let darts: Vec<Dart> = (1..=m)
        .map(Dart::plus)
        .chain((1..=m).map(Dart::minus))
        .collect();
    crate::map::make_map(&[darts]).expect("valid bouquet")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::CombMap;

    #[test]
    fn parses_the_basic_forms() {
        let ex1 = parse_map("sigma: (a- b+ c- b- d-)(a+ c+ d+)").unwrap();
        assert_eq!(ex1.to_string(), "(a- b+ c- b- d-)(a+ c+ d+)");
        assert_eq!(
            parse_map("sigma: (1+ 2+ 1- 2-)").unwrap(),
            interlaced_bouquet(2)
        );
        assert_eq!(
            parse_map("sigma: (a-)(a+ b+)"),
            Err(Error::MissingDart("b".into(), '-'))
        );
        assert_eq!(parse_map("sigma: ()").unwrap(), CombMap::empty());
    }

    #[test]
    fn accepts_comments_names_and_continuation_lines() {
        let text = "# header\nname: EX1\ndirected: true\nsigma: (a- b+ c- # first vertex\n   b- d-)\n  (a+ c+ d+)\n";
        let file = parse_map_file(text).unwrap();
        assert_eq!(file.name.as_deref(), Some("EX1"));
        assert_eq!(file.directed, Some(true));
        assert_eq!(
            file.map,
            parse_map("sigma: (a- b+ c- b- d-)(a+ c+ d+)").unwrap()
        );
    }

    #[test]
    fn reports_positions() {
        assert_eq!(
            parse_map("sigma: (a- b)(a+ b+)"),
            Err(Error::Parse {
                line: 1,
                column: 13,
                message: "dart 'b' needs a '+' or '-' sign".into()
            })
        );
        assert!(matches!(
            parse_map("name: x\n(a+ a-)"),
            Err(Error::Parse {
                line: 2,
                column: 1,
                ..
            })
        ));
        assert!(matches!(
            parse_map("sigma: (a+ a-"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_map("sigma: a+ a-"),
            Err(Error::Parse {
                line: 1,
                column: 8,
                ..
            })
        ));
        assert!(matches!(parse_map("name: x"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_map("colour: red\nsigma: (a+ a-)"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn render_round_trips() {
        for f in fixtures() {
            let text = render_map(Some(f.name), &f.map);
            let back = parse_map_file(&text).unwrap();
            assert_eq!(back.map, f.map);
            assert_eq!(back.name.as_deref(), Some(f.name));
        }
    }

    #[test]
    fn named_graphs_have_the_right_shape() {
        for (g, v, e) in [
            (NamedGraph::K5, 5, 10),
            (NamedGraph::K33, 6, 9),
            (NamedGraph::Petersen, 10, 15),
            (NamedGraph::Heawood, 14, 21),
        ] {
            let graph = g.graph();
            assert_eq!((graph.vertex_count, graph.edges.len()), (v, e));
        }
        assert!(!isomorphic(
            &NamedGraph::K33.graph(),
            &NamedGraph::K5.graph()
        ));
    }

    #[test]
    fn fixtures_load_and_validate() {
        assert_eq!(fixtures().len(), 11);
        assert_eq!(fixture("ex1.map").unwrap().name, "EX1");
        assert_eq!(
            fixture("k33t").unwrap().group,
            AbelianGroup::from_i64(&[6, 18])
        );
        assert!(fixture("nope").is_none());
    }
}
