//! Text formats. Degree sequences: one integer per line or a single comma-separated
//! line. Trees and graphs: `n` on the first line, then one edge `u v` per line,
//! one-based. In both, blank lines and `#` comments are ignored.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graphs::SimpleGraph;
use crate::trees::LabeledTree;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.split('#').next().unwrap_or("").trim()))
        .filter(|(_, line)| !line.is_empty())
}

fn parse_u32(token: &str, line: usize) -> Result<u32> {
    token.parse().map_err(|_| Error::Parse(format!("line {line}: expected a nonnegative integer, got {token:?}")))
}

/// Integers separated by newlines, commas or whitespace.
pub fn parse_degrees(text: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for (line, content) in content_lines(text) {
        for token in content.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            out.push(parse_u32(token, line)?);
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("no degrees found".into()));
    }
    Ok(out)
}

/// Vertex count and zero-based edges.
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<(u32, u32)>)> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or_else(|| Error::Parse("empty edge list".into()))?;
    let n = parse_u32(header, line)? as usize;
    let mut edges = Vec::new();
    for (line, content) in lines {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let [u, v] = tokens[..] else {
            return Err(Error::Parse(format!("line {line}: expected `u v`, got {content:?}")));
        };
        let (u, v) = (parse_u32(u, line)?, parse_u32(v, line)?);
        if u == 0 || v == 0 || u as usize > n || v as usize > n {
            return Err(Error::Parse(format!("line {line}: vertices are numbered 1..={n}")));
        }
        edges.push((u - 1, v - 1));
    }
    Ok((n, edges))
}

pub fn parse_tree(text: &str) -> Result<LabeledTree> {
    let (n, edges) = parse_edge_list(text)?;
    LabeledTree::new(n, edges)
}

pub fn parse_graph(text: &str) -> Result<SimpleGraph> {
    let (n, edges) = parse_edge_list(text)?;
    SimpleGraph::new(n, edges)
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}
