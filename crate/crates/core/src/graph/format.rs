//! Edge-list text format.
//!
//! ```text
//! # optional comments
//! 4 3
//! 0 1
//! 1 2
//! 2 3
//! ```
//!
//! The header gives the vertex and edge counts, followed by one `u v` pair
//! per line (an arc `u -> v` for oriented graphs). `#` starts a comment and
//! blank lines are ignored. A comment of the form `# names: a b c` attaches
//! vertex names; writers emit it only for graphs with non-default names.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Graph, GraphError, OrientedGraph};

/// A syntax or validation error at a 1-based line and column.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

const NAMES_PRAGMA: &str = "names:";

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

struct Parsed {
    n: usize,
    pairs: Vec<(usize, usize, usize)>,
    names: Option<(usize, Vec<String>)>,
    last_line: usize,
}

fn tokens(body: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &body[s..i],
                    column: s + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn number(tok: &Token<'_>, line: usize, what: &str) -> Result<usize, ParseError> {
    tok.text
        .parse()
        .map_err(|_| ParseError::new(line, tok.column, format!("expected {what}, found {:?}", tok.text)))
}

fn parse_pairs(text: &str) -> Result<Parsed, ParseError> {
    let mut names = None;
    let mut lines = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        last_line = number;
        let (body, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(&raw[p + 1..])),
            None => (raw, None),
        };
        if let Some(rest) = comment.and_then(|c| c.trim_start().strip_prefix(NAMES_PRAGMA)) {
            let list = rest.split_whitespace().map(str::to_owned).collect();
            names = Some((number, list));
        }
        let tokens = tokens(body);
        if !tokens.is_empty() {
            lines.push(Line { number, tokens });
        }
    }

    let mut iter = lines.into_iter();
    let header = iter
        .next()
        .ok_or_else(|| ParseError::new(last_line.max(1), 1, "missing `n m` header"))?;
    if header.tokens.len() != 2 {
        let col = header.tokens.get(2).map_or(1, |t| t.column);
        return Err(ParseError::new(header.number, col, "header must be `n m`"));
    }
    let n = number(&header.tokens[0], header.number, "vertex count")?;
    let m = number(&header.tokens[1], header.number, "edge count")?;

    let mut pairs = Vec::with_capacity(m);
    for line in iter {
        if line.tokens.len() != 2 {
            let col = line.tokens.get(2).map_or(1, |t| t.column);
            return Err(ParseError::new(line.number, col, "expected a `u v` pair"));
        }
        let u = number(&line.tokens[0], line.number, "vertex id")?;
        let v = number(&line.tokens[1], line.number, "vertex id")?;
        for (id, tok) in [(u, &line.tokens[0]), (v, &line.tokens[1])] {
            if id >= n {
                return Err(ParseError::new(
                    line.number,
                    tok.column,
                    format!("vertex {id} is outside 0..{n}"),
                ));
            }
        }
        if u == v {
            return Err(ParseError::new(line.number, 1, format!("self-loop on vertex {u}")));
        }
        pairs.push((u, v, line.number));
    }
    if pairs.len() != m {
        return Err(ParseError::new(
            last_line.max(1),
            1,
            format!("header announces {m} pairs but {} were given", pairs.len()),
        ));
    }
    Ok(Parsed {
        n,
        pairs,
        names,
        last_line,
    })
}

fn names_error(line: usize, e: GraphError) -> ParseError {
    ParseError::new(line, 1, e.to_string())
}

/// Reads an undirected graph.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let parsed = parse_pairs(text)?;
    let g = Graph::from_edge_list(parsed.n, parsed.pairs.iter().map(|&(u, v, _)| (u, v)))
        .map_err(|e| ParseError::new(parsed.last_line, 1, e.to_string()))?;
    match parsed.names {
        Some((line, names)) => g.with_names(names).map_err(|e| names_error(line, e)),
        None => Ok(g),
    }
}

/// Reads an oriented graph; each pair is an arc `u -> v`.
pub fn parse_oriented(text: &str) -> Result<OrientedGraph, ParseError> {
    let parsed = parse_pairs(text)?;
    let mut seen = std::collections::BTreeSet::new();
    for &(u, v, line) in &parsed.pairs {
        if seen.contains(&(v, u)) {
            return Err(ParseError::new(
                line,
                1,
                format!("arc {u} -> {v} reverses an earlier arc"),
            ));
        }
        seen.insert((u, v));
    }
    let d = OrientedGraph::from_arcs(parsed.n, seen)
        .map_err(|e| ParseError::new(parsed.last_line, 1, e.to_string()))?;
    match parsed.names {
        Some((line, names)) => d.with_names(names).map_err(|e| names_error(line, e)),
        None => Ok(d),
    }
}

fn write_pairs(n: usize, names: Option<Vec<String>>, pairs: &[(usize, usize)]) -> String {
    let mut out = String::new();
    if let Some(names) = names {
        let _ = writeln!(out, "# {NAMES_PRAGMA} {}", names.join(" "));
    }
    let _ = writeln!(out, "{n} {}", pairs.len());
    for (u, v) in pairs {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub(super) fn write_graph(g: &Graph) -> String {
    let names = (!g.has_default_names()).then(|| g.names());
    write_pairs(g.n(), names, &g.edges())
}

pub(super) fn write_oriented(d: &OrientedGraph) -> String {
    let names = (!d.has_default_names()).then(|| d.names());
    write_pairs(d.n(), names, &d.arcs())
}
