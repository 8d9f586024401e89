//! The `saito-tree v1` document format.
//!
//! ```text
//! saito-tree v1
//! # the cusp
//! vertex 0 parents=- n=0
//! vertex 1 parents=0 n=0
//! vertex 2 parents=0,1 n=1
//! ```
//!
//! Records are listed in construction order. A record with two parents
//! splits the edge between them, which must exist when the record is read.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::FormatError;
use crate::tree::{Numbering, ResolutionTree, Step, VertexId};

pub const HEADER: &str = "saito-tree v1";

struct Record {
    id: usize,
    parents: Vec<usize>,
    n: u32,
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_record(line: usize, text: &str) -> Result<Record, FormatError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let [keyword, id, parents, n] = tokens.as_slice() else {
        return Err(syntax(line, "expected `vertex <id> parents=<list|-> n=<int>`"));
    };
    if *keyword != "vertex" {
        return Err(syntax(line, format!("unknown record `{keyword}`")));
    }
    let id: usize = id.parse().map_err(|_| syntax(line, format!("bad vertex id `{id}`")))?;
    let parents = parents
        .strip_prefix("parents=")
        .ok_or_else(|| syntax(line, "missing `parents=`"))?;
    let parents: Vec<usize> = if parents == "-" {
        Vec::new()
    } else {
        parents
            .split(',')
            .map(|p| p.parse().map_err(|_| syntax(line, format!("bad parent id `{p}`"))))
            .collect::<Result<_, _>>()?
    };
    let n = n.strip_prefix("n=").ok_or_else(|| syntax(line, "missing `n=`"))?;
    let n: u32 = n
        .parse()
        .map_err(|_| syntax(line, format!("`{n}` is not a non-negative integer")))?;
    Ok(Record { id, parents, n })
}

/// Parses a document into a tree and its numbering.
pub fn parse_tree(text: &str) -> Result<(ResolutionTree, Numbering), FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, HEADER)) => {}
        Some((line, other)) => return Err(syntax(line, format!("expected header `{HEADER}`, got `{other}`"))),
        None => return Err(syntax(1, format!("expected header `{HEADER}`"))),
    }

    let mut steps = Vec::new();
    let mut numbering = Vec::new();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut first_line = 0;
    for (line, text) in lines {
        let rec = parse_record(line, text)?;
        let expected = numbering.len();
        if rec.id < expected {
            return Err(FormatError::DuplicateId { line, id: rec.id });
        }
        if rec.id > expected {
            return Err(FormatError::NonConsecutiveId {
                line,
                expected,
                got: rec.id,
            });
        }
        if let Some(&target) = rec.parents.iter().find(|p| **p >= rec.id) {
            return Err(FormatError::ForwardReference {
                line,
                id: rec.id,
                target,
            });
        }
        match (rec.id, rec.parents.as_slice()) {
            (0, []) => first_line = line,
            (0, _) => return Err(syntax(line, "the root takes `parents=-`")),
            (_, []) => return Err(syntax(line, "only vertex 0 may have no parents")),
            (_, [p]) => {
                edges.insert((*p, rec.id));
                steps.push(Step::free(*p));
            }
            (_, [a, b]) if a != b => {
                let key = (*a.min(b), *a.max(b));
                if !edges.remove(&key) {
                    return Err(FormatError::Rule2EdgeMissing {
                        line,
                        record: text.to_string(),
                        a: *a,
                        b: *b,
                    });
                }
                edges.insert((key.0, rec.id));
                edges.insert((key.1, rec.id));
                steps.push(Step::satellite(*a, *b));
            }
            _ => return Err(syntax(line, "expected one parent or two distinct parents")),
        }
        numbering.push(rec.n);
    }
    if numbering.is_empty() {
        return Err(FormatError::EmptyTree);
    }
    let tree = ResolutionTree::build(&steps).map_err(|source| FormatError::Tree {
        line: first_line,
        source,
    })?;
    Ok((tree, Numbering::new(numbering)))
}

/// Writes a document that [`parse_tree`] reads back to the same tree.
pub fn serialize_tree(tree: &ResolutionTree, n: &Numbering) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for v in tree.vertices() {
        let parents = tree.parents(v);
        let list = if parents.is_empty() {
            "-".to_string()
        } else {
            parents.iter().map(VertexId::to_string).collect::<Vec<_>>().join(",")
        };
        writeln!(out, "vertex {v} parents={list} n={}", n.get(v)).expect("writing to a string");
    }
    out
}
