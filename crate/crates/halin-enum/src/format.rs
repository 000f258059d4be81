//! Text format for Halin graph files.
//!
//! ```text
//! # comment
//! halin 6
//! 0 : 1 2 5
//! 1 : 3 4
//! cycle: 3 4 2 5
//! ```
//!
//! Line 1 declares the vertex count. Each following line names an internal
//! vertex and its children left to right; the first such line is the root.
//! The optional `cycle:` line overrides the leaf order (it must be a rotation
//! or reflection of the plane traversal). Parsing then serializing then
//! parsing again reproduces the same structure.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::VertexId;
use crate::halin::{HalinGraph, TreeSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Parses the text format into a raw tree spec. Structural validation
/// (degree rules, leaf count) happens in [`crate::halin::build_halin`].
pub fn parse(text: &str) -> Result<TreeSpec, ParseError> {
    let mut declared_n: Option<(usize, usize)> = None; // (n, line)
    let mut labels: Vec<String> = Vec::new();
    let mut ids: HashMap<String, VertexId> = HashMap::new();
    let mut children: Vec<Vec<VertexId>> = Vec::new();
    let mut defined_internal: HashMap<VertexId, usize> = HashMap::new();
    let mut has_parent: Vec<bool> = Vec::new();
    let mut root: Option<VertexId> = None;
    let mut cycle_line: Option<(Vec<String>, usize)> = None;

    let intern = |label: &str,
                  labels: &mut Vec<String>,
                  ids: &mut HashMap<String, VertexId>,
                  children: &mut Vec<Vec<VertexId>>,
                  has_parent: &mut Vec<bool>|
     -> VertexId {
        if let Some(&id) = ids.get(label) {
            return id;
        }
        let id = VertexId(labels.len() as u32);
        labels.push(label.to_string());
        ids.insert(label.to_string(), id);
        children.push(Vec::new());
        has_parent.push(false);
        id
    };

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }

        if declared_n.is_none() {
            let mut parts = line.split_whitespace();
            if parts.next() != Some("halin") {
                return Err(err(lineno, "expected header `halin <n>`"));
            }
            let n: usize = parts
                .next()
                .ok_or_else(|| err(lineno, "missing vertex count after `halin`"))?
                .parse()
                .map_err(|_| err(lineno, "vertex count is not a number"))?;
            if parts.next().is_some() {
                return Err(err(lineno, "trailing tokens after `halin <n>`"));
            }
            declared_n = Some((n, lineno));
            continue;
        }

        let lower = line.to_ascii_lowercase();
        if lower.starts_with("cycle:") || lower.starts_with("cycle ") || lower == "cycle" {
            let rest = &line[line.find(':').map(|p| p + 1).unwrap_or(line.len())..];
            let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if names.is_empty() {
                return Err(err(lineno, "empty cycle line"));
            }
            if cycle_line.is_some() {
                return Err(err(lineno, "duplicate cycle line"));
            }
            cycle_line = Some((names, lineno));
            continue;
        }

        let colon = line
            .find(':')
            .ok_or_else(|| err(lineno, "expected `<vertex> : <child> ...`"))?;
        let head: Vec<&str> = line[..colon].split_whitespace().collect();
        if head.len() != 1 {
            return Err(err(lineno, "expected exactly one vertex label before `:`"));
        }
        let kid_names: Vec<&str> = line[colon + 1..].split_whitespace().collect();
        if kid_names.is_empty() {
            return Err(err(
                lineno,
                format!("vertex {} listed with no children", head[0]),
            ));
        }

        let v = intern(
            head[0],
            &mut labels,
            &mut ids,
            &mut children,
            &mut has_parent,
        );
        if let Some(first) = defined_internal.get(&v) {
            return Err(err(
                lineno,
                format!("vertex {} already defined on line {first}", head[0]),
            ));
        }
        defined_internal.insert(v, lineno);
        if root.is_none() {
            root = Some(v);
        }

        for name in kid_names {
            let c = intern(name, &mut labels, &mut ids, &mut children, &mut has_parent);
            if c == v {
                return Err(err(lineno, format!("vertex {name} is its own child")));
            }
            if Some(c) == root {
                return Err(err(lineno, "root cannot appear as a child"));
            }
            if has_parent[c.index()] {
                return Err(err(lineno, format!("vertex {name} already has a parent")));
            }
            has_parent[c.index()] = true;
            children[v.index()].push(c);
        }
    }

    let (n, header_line) = declared_n.ok_or_else(|| err(1, "missing `halin <n>` header"))?;
    let root = root.ok_or_else(|| err(header_line, "no tree specification found"))?;
    if labels.len() != n {
        return Err(err(
            header_line,
            format!("declared {} vertices but found {}", n, labels.len()),
        ));
    }

    let explicit_leaf_order = match cycle_line {
        None => None,
        Some((names, lineno)) => {
            let mut order = Vec::with_capacity(names.len());
            for name in names {
                let id = *ids
                    .get(&name)
                    .ok_or_else(|| err(lineno, format!("unknown vertex {name} in cycle line")))?;
                order.push(id);
            }
            Some(order)
        }
    };

    Ok(TreeSpec {
        labels,
        root,
        children,
        explicit_leaf_order,
    })
}

/// Renders a graph back into the text format: internal vertices in preorder,
/// plus a `cycle:` line whenever the stored leaf order is not the plain
/// traversal.
pub fn serialize(h: &HalinGraph) -> String {
    let mut out = String::new();
    out.push_str(&format!("halin {}\n", h.n()));
    let mut stack = vec![h.root()];
    while let Some(v) = stack.pop() {
        let kids = h.tree().children(v);
        if kids.is_empty() {
            continue;
        }
        out.push_str(h.label(v));
        out.push_str(" :");
        for &c in kids {
            out.push(' ');
            out.push_str(h.label(c));
        }
        out.push('\n');
        for &c in kids.iter().rev() {
            stack.push(c);
        }
    }
    if h.cycle().leaf_order() != h.tree().traversal_leaves() {
        out.push_str("cycle:");
        for &leaf in h.cycle().leaf_order() {
            out.push(' ');
            out.push_str(h.label(leaf));
        }
        out.push('\n');
    }
    out
}
