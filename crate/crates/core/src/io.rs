//! Edge-list file format.
//!
//! Undirected files hold one `u v` pair per line. Digraph files use `u > v`
//! per directed arc and `u = v` as shorthand for a digon. Both accept `#`
//! comments and an optional `n <count>` header line. With a header, vertex
//! ids must already be dense 0-based integers below the count (this is the
//! only way to represent isolated vertices). Without one, arbitrary labels
//! are remapped to dense ids and the mapping is returned: labels that all
//! parse as integers are sorted numerically, otherwise lexicographically.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};

/// Remapping from original labels to dense ids, in id order.
#[derive(Debug, Clone, Default)]
pub struct LabelMap {
    pub labels: Vec<String>,
}

impl LabelMap {
    fn identity(n: usize) -> LabelMap {
        LabelMap {
            labels: (0..n).map(|i| i.to_string()).collect(),
        }
    }
}

enum Line<'a> {
    Header(usize),
    Undirected(&'a str, &'a str),
    Arc(&'a str, &'a str),
    Digon(&'a str, &'a str),
}

fn parse_lines(text: &str) -> Result<Vec<Line<'_>>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let bad = || Error::invalid(format!("line {}: cannot parse `{raw}`", lineno + 1));
        if let Some(rest) = line.strip_prefix("n ") {
            if !out.is_empty() {
                return Err(Error::invalid(format!(
                    "line {}: header after data",
                    lineno + 1
                )));
            }
            let count = rest.trim().parse::<usize>().map_err(|_| bad())?;
            out.push(Line::Header(count));
            continue;
        }
        if let Some((u, v)) = line.split_once('>') {
            out.push(Line::Arc(u.trim(), v.trim()));
        } else if let Some((u, v)) = line.split_once('=') {
            out.push(Line::Digon(u.trim(), v.trim()));
        } else {
            let mut it = line.split_whitespace();
            let (u, v) = (it.next().ok_or_else(bad)?, it.next().ok_or_else(bad)?);
            if it.next().is_some() {
                return Err(bad());
            }
            out.push(Line::Undirected(u, v));
        }
    }
    Ok(out)
}

fn assign_ids<'a>(
    header: Option<usize>,
    tokens: impl Iterator<Item = &'a str>,
) -> Result<(usize, BTreeMap<&'a str, u32>, LabelMap)> {
    let tokens: Vec<&str> = tokens.collect();
    if let Some(n) = header {
        let mut map = BTreeMap::new();
        for t in tokens {
            let id = t.parse::<u32>().map_err(|_| {
                Error::invalid(format!("label `{t}` is not a dense id under header n {n}"))
            })?;
            if id as usize >= n {
                return Err(Error::invalid(format!(
                    "vertex {id} out of range for n={n}"
                )));
            }
            map.insert(t, id);
        }
        return Ok((n, map, LabelMap::identity(n)));
    }
    let mut labels: Vec<&str> = tokens;
    labels.sort_unstable();
    labels.dedup();
    if labels.iter().all(|t| t.parse::<u64>().is_ok()) {
        labels.sort_by_key(|t| t.parse::<u64>().unwrap());
    }
    let map: BTreeMap<&str, u32> = labels
        .iter()
        .enumerate()
        .map(|(i, &t)| (t, i as u32))
        .collect();
    let label_map = LabelMap {
        labels: labels.iter().map(|t| t.to_string()).collect(),
    };
    Ok((labels.len(), map, label_map))
}

/// Parses an undirected edge-list.
pub fn parse_graph(text: &str) -> Result<(Graph, LabelMap)> {
    let lines = parse_lines(text)?;
    let mut header = None;
    let mut pairs = Vec::new();
    for line in &lines {
        match line {
            Line::Header(n) => header = Some(*n),
            Line::Undirected(u, v) => pairs.push((*u, *v)),
            Line::Arc(..) | Line::Digon(..) => {
                return Err(Error::invalid(
                    "directed syntax (`>`/`=`) in an undirected edge list",
                ))
            }
        }
    }
    let (n, ids, label_map) = assign_ids(header, pairs.iter().flat_map(|&(u, v)| [u, v]))?;
    let edges: Vec<(u32, u32)> = pairs.iter().map(|&(u, v)| (ids[u], ids[v])).collect();
    Ok((Graph::from_edges(n, &edges)?, label_map))
}

/// Parses a digraph edge-list (`u > v` arcs, `u = v` digons).
pub fn parse_digraph(text: &str) -> Result<(Digraph, LabelMap)> {
    let lines = parse_lines(text)?;
    let mut header = None;
    let mut arcs = Vec::new();
    for line in &lines {
        match line {
            Line::Header(n) => header = Some(*n),
            Line::Arc(u, v) => arcs.push((*u, *v, false)),
            Line::Digon(u, v) => arcs.push((*u, *v, true)),
            Line::Undirected(..) => {
                return Err(Error::invalid(
                    "undirected syntax in a digraph edge list (use `u > v` or `u = v`)",
                ))
            }
        }
    }
    let (n, ids, label_map) = assign_ids(header, arcs.iter().flat_map(|&(u, v, _)| [u, v]))?;
    let mut dense = Vec::new();
    for &(u, v, digon) in &arcs {
        dense.push((ids[u], ids[v]));
        if digon {
            dense.push((ids[v], ids[u]));
        }
    }
    Ok((Digraph::from_arcs(n, &dense)?, label_map))
}

/// Serializes a graph in the edge-list format, byte-stable.
pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "n {}", g.n()).unwrap();
    for u in 0..g.n() as u32 {
        for &v in g.neighbors(u) {
            if u < v {
                writeln!(out, "{u} {v}").unwrap();
            }
        }
    }
    out
}

/// Serializes a digraph, collapsing digons to `u = v` lines.
pub fn write_digraph(d: &Digraph) -> String {
    let mut out = String::new();
    writeln!(out, "n {}", d.n()).unwrap();
    for u in 0..d.n() as u32 {
        for &v in d.out_neighbors(u) {
            if d.is_digon(u, v) {
                if u < v {
                    writeln!(out, "{u} = {v}").unwrap();
                }
            } else {
                writeln!(out, "{u} > {v}").unwrap();
            }
        }
    }
    out
}

pub fn load_graph(path: &Path) -> Result<(Graph, LabelMap)> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn load_digraph(path: &Path) -> Result<(Digraph, LabelMap)> {
    parse_digraph(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_comments_and_header() {
        let text = "# a triangle plus an isolated vertex\nn 4\n0 1\n1 2 # closing\n2 0\n";
        let (g, map) = parse_graph(text).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 3);
        assert!(!g.is_connected());
        assert_eq!(map.labels.len(), 4);
    }

    #[test]
    fn labels_remapped_numerically() {
        let (g, map) = parse_graph("10 2\n2 30\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(map.labels, vec!["2", "10", "30"]);
        // 2 -> 0, 10 -> 1, 30 -> 2: edges (1,0) and (0,2).
        assert!(g.has_edge(0, 1));
        assert!(g.has_edge(0, 2));
        assert!(!g.has_edge(1, 2));
    }

    #[test]
    fn digraph_round_trip_is_stable() {
        let (d, _) = parse_digraph("0 > 1\n1 = 2\n2 > 0\n").unwrap();
        assert!(d.has_arc(1, 2) && d.has_arc(2, 1));
        let text = write_digraph(&d);
        let (d2, _) = parse_digraph(&text).unwrap();
        assert_eq!(write_digraph(&d2), text);
    }

    #[test]
    fn undirected_round_trip_is_stable() {
        let g = crate::gen::named_fixture("petersen").unwrap();
        let text = write_graph(&g);
        let (g2, _) = parse_graph(&text).unwrap();
        assert_eq!(write_graph(&g2), text);
        assert_eq!(g2.girth(), Some(5));
    }

    #[test]
    fn mixed_syntax_rejected() {
        assert!(parse_graph("0 > 1\n").is_err());
        assert!(parse_digraph("0 1\n").is_err());
    }
}
