//! Newick text with mandatory integer edge weights.
//!
//! `((a:2,b:0)p:2,(c:0,d:2)q:0)r;` describes a tree whose written root
//! (the *anchor*) is `r`. Every other vertex carries `:w`, the weight of
//! the edge to its parent; the anchor carries none. Interior names are
//! optional, leaf names are required. Read as an unrooted tree, a named
//! anchor with a single child is a leaf.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::{name_cmp, LabeledTree, TreeBuilder, Weight};
use crate::graph::ParseError;

/// A parsed tree together with the vertex the text was written from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewickTree {
    pub tree: LabeledTree,
    pub anchor: usize,
}

struct RawNode {
    name: Option<(String, usize)>,
    weight: Option<Weight>,
    children: Vec<RawNode>,
}

struct Parser {
    chars: Vec<char>,
    positions: Vec<(usize, usize)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        let chars: Vec<char> = text.chars().collect();
        let mut positions = Vec::with_capacity(chars.len() + 1);
        let (mut line, mut col) = (1, 1);
        for &c in &chars {
            positions.push((line, col));
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        positions.push((line, col));
        Parser {
            chars,
            positions,
            pos: 0,
        }
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        let (line, column) = self.positions[pos.min(self.chars.len())];
        ParseError::new(line, column, message)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn is_name_char(c: char) -> bool {
        !c.is_whitespace() && !matches!(c, '(' | ')' | ',' | ':' | ';' | '[' | ']')
    }

    fn node(&mut self, depth: usize) -> Result<RawNode, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut children = Vec::new();
        if self.peek() == Some('(') {
            self.pos += 1;
            loop {
                children.push(self.node(depth + 1)?);
                self.skip_ws();
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    Some(c) => return Err(self.error_at(self.pos, format!("expected ',' or ')', found {c:?}"))),
                    None => return Err(self.error_at(self.pos, "unexpected end of input; missing ')'")),
                }
            }
        }
        self.skip_ws();
        let name_start = self.pos;
        while self.peek().is_some_and(Self::is_name_char) {
            self.pos += 1;
        }
        let name = (self.pos > name_start)
            .then(|| (self.chars[name_start..self.pos].iter().collect::<String>(), name_start));
        if name.is_none() && children.is_empty() {
            return Err(self.error_at(start, "leaf without a name"));
        }
        self.skip_ws();
        let mut weight = None;
        if self.peek() == Some(':') {
            let colon = self.pos;
            self.pos += 1;
            self.skip_ws();
            let digits_start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let after = self.peek();
            if after.is_some_and(Self::is_name_char) {
                return Err(self.error_at(
                    digits_start,
                    "edge weight must be a non-negative integer",
                ));
            }
            if self.pos == digits_start {
                return Err(self.error_at(digits_start, "expected an integer edge weight"));
            }
            let text: String = self.chars[digits_start..self.pos].iter().collect();
            weight = Some(
                text.parse()
                    .map_err(|_| self.error_at(digits_start, "edge weight out of range"))?,
            );
            if depth == 0 {
                return Err(self.error_at(colon, "the written root has no parent edge to weigh"));
            }
        } else if depth > 0 {
            return Err(self.error_at(self.pos, "missing ':weight' for the edge to the parent"));
        }
        Ok(RawNode {
            name,
            weight,
            children,
        })
    }

    fn parse(mut self) -> Result<RawNode, ParseError> {
        let root = self.node(0)?;
        self.skip_ws();
        match self.peek() {
            Some(';') => self.pos += 1,
            Some(c) => return Err(self.error_at(self.pos, format!("expected ';', found {c:?}"))),
            None => return Err(self.error_at(self.pos, "missing ';'")),
        }
        self.skip_ws();
        if self.pos < self.chars.len() {
            return Err(self.error_at(self.pos, "trailing input after ';'"));
        }
        Ok(root)
    }
}

impl NewickTree {
    /// Parses Newick text. With `rooted`, the anchor is always an interior
    /// vertex; otherwise a named anchor with one child is read as a leaf.
    pub fn parse(text: &str, rooted: bool) -> Result<NewickTree, ParseError> {
        let parser = Parser::new(text);
        let positions = parser.positions.clone();
        let at = |pos: usize, msg: String| {
            let (line, column) = positions[pos.min(positions.len() - 1)];
            ParseError::new(line, column, msg)
        };
        let raw = parser.parse()?;

        let mut b = TreeBuilder::new();
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        let mut stack: Vec<(&RawNode, Option<usize>, bool)> = vec![(&raw, None, true)];
        let mut anchor = None;
        while let Some((node, parent, is_anchor)) = stack.pop() {
            if let Some((name, pos)) = &node.name {
                if seen.insert(name.clone(), *pos).is_some() {
                    return Err(at(*pos, format!("name {name:?} is used more than once")));
                }
            }
            let leaf = node.children.is_empty()
                || (is_anchor && !rooted && node.children.len() == 1 && node.name.is_some());
            let id = match (&node.name, leaf) {
                (Some((name, _)), true) => b.leaf(name.clone()),
                (Some((name, _)), false) => b.named_interior(name.clone()),
                (None, _) => b.interior(),
            };
            if is_anchor {
                anchor = Some(id);
            }
            if let (Some(p), Some(w)) = (parent, node.weight) {
                b.edge(p, id, w);
            }
            for child in node.children.iter().rev() {
                stack.push((child, Some(id), false));
            }
        }
        let tree = b.build().map_err(|e| at(0, e.to_string()))?;
        Ok(NewickTree {
            tree,
            anchor: anchor.expect("root visited"),
        })
    }
}

/// Reads a tree, interpreting the text as unrooted.
pub fn parse_tree(text: &str) -> Result<LabeledTree, ParseError> {
    NewickTree::parse(text, false).map(|t| t.tree)
}

fn child_order(t: &LabeledTree, parent: usize) -> impl Fn(&(usize, Weight), &(usize, Weight)) -> Ordering + '_ {
    move |&(a, wa), &(b, wb)| {
        let (ma, mb) = (t.subtree_min_leaf(a, Some(parent)), t.subtree_min_leaf(b, Some(parent)));
        let by_leaf = match (ma, mb) {
            (Some(x), Some(y)) => name_cmp(x, y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        };
        by_leaf
            .then_with(|| wa.cmp(&wb))
            .then_with(|| t.canonical_subtree(a, Some(parent)).cmp(&t.canonical_subtree(b, Some(parent))))
    }
}

fn write_subtree(t: &LabeledTree, v: usize, parent: Option<usize>, out: &mut String) {
    let mut children: Vec<(usize, Weight)> = t
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&(w, _)| Some(w) != parent)
        .collect();
    if !children.is_empty() {
        children.sort_by(child_order(t, v));
        out.push('(');
        for (i, &(c, w)) in children.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write_subtree(t, c, Some(v), out);
            out.push(':');
            out.push_str(&w.to_string());
        }
        out.push(')');
    }
    if let Some(name) = t.name(v) {
        out.push_str(name);
    }
}

/// Writes the tree with `anchor` as the outermost vertex.
pub(crate) fn write_from(t: &LabeledTree, anchor: usize) -> String {
    let mut out = String::new();
    write_subtree(t, anchor, None, &mut out);
    out.push(';');
    out
}

pub(super) fn write_unrooted(t: &LabeledTree) -> String {
    let anchor = match t.leaves().first() {
        Some(&leaf) => t
            .neighbors(leaf)
            .first()
            .map(|&(v, _)| v)
            .filter(|&v| !t.is_leaf(v))
            .unwrap_or(leaf),
        None => 0,
    };
    write_from(t, anchor)
}
