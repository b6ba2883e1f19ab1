//! Plain-text formats.
//!
//! * Edge list: `n m`, then `m` lines `u v` with `u < v`.
//! * Orientation: one line `u v d` per edge, `d` one of `+` (toward `v`),
//!   `-` (toward `u`) or `0` (unoriented), in canonical edge order.
//! * Coloring: one line `v c` per vertex.
//!
//! Blank lines and lines starting with `#` are ignored on input.

use std::fmt::Write as _;
use std::path::Path;

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::orientation::{Direction, PartialOrientation};
use crate::vertex_map::VertexMap;

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i, l.split_whitespace().collect()))
}

fn parse_num(line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected a non-negative integer, got {s:?}"),
    })
}

fn fields(line: usize, parts: &[&str], k: usize) -> Result<()> {
    if parts.len() != k {
        return Err(Error::Parse {
            line,
            message: format!("expected {k} fields, got {}", parts.len()),
        });
    }
    Ok(())
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut it = lines(text);
    let (line, header) = it.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    fields(line, &header, 2)?;
    let n = parse_num(line, header[0])?;
    let m = parse_num(line, header[1])?;
    let mut edges = Vec::with_capacity(m);
    for (line, parts) in it {
        fields(line, &parts, 2)?;
        edges.push((parse_num(line, parts[0])?, parse_num(line, parts[1])?));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, edges)
}

pub fn format_orientation(sigma: &PartialOrientation) -> String {
    let mut s = String::new();
    for (&(u, v), d) in sigma.graph().edges().iter().zip(sigma.directions()) {
        let c = match d {
            Direction::Forward => '+',
            Direction::Backward => '-',
            Direction::Unoriented => '0',
        };
        writeln!(s, "{u} {v} {c}").unwrap();
    }
    s
}

pub fn parse_orientation(g: &Graph, text: &str) -> Result<PartialOrientation> {
    let mut dirs = vec![None; g.m()];
    for (line, parts) in lines(text) {
        fields(line, &parts, 3)?;
        let (u, v) = (parse_num(line, parts[0])?, parse_num(line, parts[1])?);
        let e = g.edge_id(u, v).ok_or_else(|| Error::Parse {
            line,
            message: format!("({u}, {v}) is not an edge"),
        })?;
        let forward = match parts[2] {
            "+" => Direction::Forward,
            "-" => Direction::Backward,
            "0" => Direction::Unoriented,
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("direction must be +, - or 0, got {other:?}"),
                })
            }
        };
        // Lines written as `v u` with v > u flip the meaning.
        let dir = match (u < v, forward) {
            (false, Direction::Forward) => Direction::Backward,
            (false, Direction::Backward) => Direction::Forward,
            (_, d) => d,
        };
        if dirs[e].replace(dir).is_some() {
            return Err(Error::Parse {
                line,
                message: format!("edge ({u}, {v}) listed twice"),
            });
        }
    }
    let dirs = dirs
        .into_iter()
        .enumerate()
        .map(|(e, d)| {
            d.ok_or_else(|| {
                let (u, v) = g.edge(e);
                Error::Parse {
                    line: 0,
                    message: format!("edge ({u}, {v}) has no direction"),
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PartialOrientation::new(g, dirs)
}

pub fn format_coloring(c: &Coloring) -> String {
    let mut s = String::new();
    for (v, col) in c.colors().iter() {
        writeln!(s, "{v} {col}").unwrap();
    }
    s
}

/// Palette size is taken as the largest color present.
pub fn parse_coloring(n: usize, text: &str) -> Result<Coloring> {
    let mut colors = vec![0u32; n];
    for (line, parts) in lines(text) {
        fields(line, &parts, 2)?;
        let v = parse_num(line, parts[0])?;
        let c = parse_num(line, parts[1])?;
        if v == 0 || v > n {
            return Err(Error::Parse {
                line,
                message: format!("vertex {v} outside 1..={n}"),
            });
        }
        if c == 0 || c > u32::MAX as usize {
            return Err(Error::Parse {
                line,
                message: format!("color {c} is not a positive 32-bit value"),
            });
        }
        colors[v - 1] = c as u32;
    }
    if let Some(i) = colors.iter().position(|&c| c == 0) {
        return Err(Error::Parse {
            line: 0,
            message: format!("vertex {} has no color", i + 1),
        });
    }
    Coloring::from_colors(VertexMap::from_vec(colors))
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

pub fn write_graph(path: impl AsRef<Path>, g: &Graph) -> Result<()> {
    Ok(std::fs::write(path, format_edge_list(g))?)
}
