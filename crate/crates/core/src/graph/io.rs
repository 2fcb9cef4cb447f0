//! Plain-text edge lists.
//!
//! ```text
//! # comment
//! p 5
//! e 0 1
//! e 1 2
//! ```
//!
//! The `p` line gives the node count and must precede every `e` line. Ids are
//! 0-based. A file whose ids do not fit in `0..node_count` is compacted: the
//! distinct ids are renumbered in ascending order and the mapping is
//! returned alongside the graph.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{Graph, NodeId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `(file id, graph id)` pairs for renumbered nodes. Empty when the file
    /// already used dense ids.
    pub remapped: Vec<(u64, NodeId)>,
}

pub fn read_edge_list<R: BufRead>(reader: R) -> Result<LoadedGraph> {
    let mut node_count: Option<usize> = None;
    let mut raw_edges: Vec<(u64, u64)> = Vec::new();

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let number = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| parse_err(format!("expected a non-negative integer, found `{s}`")))
        };
        match fields.as_slice() {
            ["p", n] => {
                if node_count.is_some() {
                    return Err(parse_err("duplicate `p` line".into()));
                }
                let n = number(n)? as usize;
                if n == 0 {
                    return Err(parse_err("node count must be positive".into()));
                }
                node_count = Some(n);
            }
            ["e", u, v] => {
                if node_count.is_none() {
                    return Err(parse_err("`e` line before the `p` line".into()));
                }
                let (u, v) = (number(u)?, number(v)?);
                if u == v {
                    return Err(parse_err(format!("self-loop at node {u}")));
                }
                raw_edges.push((u, v));
            }
            _ => return Err(parse_err(format!("unrecognized line `{line}`"))),
        }
    }

    let n = node_count.ok_or_else(|| Error::Parse {
        line: 0,
        message: "missing `p <node_count>` line".into(),
    })?;

    let dense = raw_edges.iter().all(|&(u, v)| u < n as u64 && v < n as u64);
    if dense {
        let graph = Graph::from_edges(
            n,
            raw_edges
                .into_iter()
                .map(|(u, v)| (u as NodeId, v as NodeId)),
        )?;
        return Ok(LoadedGraph {
            graph,
            remapped: Vec::new(),
        });
    }

    let mut ids: BTreeMap<u64, NodeId> = raw_edges
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .map(|id| (id, 0))
        .collect();
    if ids.len() > n {
        return Err(Error::Parse {
            line: 0,
            message: format!("{} distinct node ids but `p {n}`", ids.len()),
        });
    }
    for (new, slot) in ids.values_mut().enumerate() {
        *slot = new;
    }
    let graph = Graph::from_edges(n, raw_edges.iter().map(|(u, v)| (ids[u], ids[v])))?;
    Ok(LoadedGraph {
        graph,
        remapped: ids.into_iter().collect(),
    })
}

pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "p {}", graph.node_count())?;
    for (u, v) in graph.edges() {
        writeln!(out, "e {u} {v}")?;
    }
    out.flush()
}

impl Graph {
    pub fn load(path: impl AsRef<Path>) -> Result<LoadedGraph> {
        let path = path.as_ref();
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        read_edge_list(BufReader::new(file))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        write_edge_list(self, std::io::BufWriter::new(file)).map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{path, random_geometric};
    use proptest::prelude::*;

    fn parse(text: &str) -> Result<LoadedGraph> {
        read_edge_list(text.as_bytes())
    }

    #[test]
    fn reads_with_comments() {
        let loaded = parse("# a path\np 3\n\ne 0 1\n# mid\ne 2 1\n").unwrap();
        assert_eq!(loaded.graph, path(3).unwrap());
        assert!(loaded.remapped.is_empty());
    }

    #[test]
    fn writer_sorts_edges() {
        let g = Graph::from_edges(4, [(3, 2), (1, 0), (2, 0)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "p 4\ne 0 1\ne 0 2\ne 2 3\n"
        );
    }

    #[test]
    fn compacts_sparse_ids() {
        let loaded = parse("p 3\ne 10 20\ne 20 30\n").unwrap();
        assert_eq!(loaded.graph, path(3).unwrap());
        assert_eq!(loaded.remapped, vec![(10, 0), (20, 1), (30, 2)]);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse("e 0 1\np 2\n").is_err());
        assert!(parse("p 2\ne 0 x\n").is_err());
        assert!(parse("p 2\ne 1 1\n").is_err());
        assert!(parse("p 2\nq\n").is_err());
        assert!(parse("# nothing\n").is_err());
        assert!(parse("p 2\ne 5 6\ne 6 7\n").is_err());
        match parse("p 2\n\ne 0 y\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn round_trip(n in 2usize..40, seed in any::<u64>()) {
            let g = random_geometric(n, 0.6, seed).unwrap();
            let mut buf = Vec::new();
            write_edge_list(&g, &mut buf).unwrap();
            let back = read_edge_list(buf.as_slice()).unwrap();
            prop_assert_eq!(back.graph, g);
        }
    }
}
