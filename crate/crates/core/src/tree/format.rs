//! Line-oriented instance documents.
//!
//! ```text
//! # comment
//! n 3
//! v 0 1
//! v 1 2
//! v 2 1/2
//! e 0 1 4
//! e 1 2 2.5
//! ```
//!
//! Vertex ids may be any non-negative integers; they are renumbered densely
//! in order of their `v` lines and the original labels are kept for output.
//! The short header `v <count>` and vertex lines without the leading `v` are
//! also accepted.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_rational::BigRational;

use super::{validate, Edge, TreeError, TreeNetwork, VertexId};
use crate::numeric::{format_rational, parse_rational};

fn syntax(line: usize, message: impl Into<String>) -> TreeError {
    TreeError::Syntax { line, message: message.into() }
}

fn parse_label(token: &str, line: usize) -> Result<u64, TreeError> {
    token.parse().map_err(|_| syntax(line, format!("invalid vertex id {token:?}")))
}

fn parse_value(token: &str, line: usize, what: &str) -> Result<BigRational, TreeError> {
    parse_rational(token).ok_or_else(|| syntax(line, format!("invalid {what} {token:?}")))
}

/// Parses a document without checking tree invariants.
pub fn parse_document(text: &str) -> Result<TreeNetwork, TreeError> {
    let mut count: Option<usize> = None;
    let mut labels = Vec::new();
    let mut weights = Vec::new();
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut edges = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if count.is_none() {
            match tokens.as_slice() {
                ["n" | "v", c] => {
                    count = Some(c.parse().map_err(|_| syntax(line, format!("invalid vertex count {c:?}")))?);
                    continue;
                }
                _ => return Err(syntax(line, "expected header line \"n <count>\"")),
            }
        }
        let vertex = match tokens.as_slice() {
            ["v", id, w] | [id, w] => Some((*id, *w)),
            _ => None,
        };
        if let Some((id, w)) = vertex {
            if !edges.is_empty() {
                return Err(syntax(line, "vertex line after edge lines"));
            }
            let label = parse_label(id, line)?;
            if index.insert(label, labels.len()).is_some() {
                return Err(syntax(line, format!("duplicate vertex id {label}")));
            }
            labels.push(label);
            weights.push(parse_value(w, line, "weight")?);
            continue;
        }
        match tokens.as_slice() {
            ["e", a, b, len] => {
                let resolve = |tok: &str| -> Result<VertexId, TreeError> {
                    let label = parse_label(tok, line)?;
                    index
                        .get(&label)
                        .map(|&ix| VertexId(ix))
                        .ok_or_else(|| syntax(line, format!("unknown vertex id {label}")))
                };
                let a = resolve(a)?;
                let b = resolve(b)?;
                edges.push(Edge { a, b, length: parse_value(len, line, "length")? });
            }
            _ => return Err(syntax(line, format!("unrecognised line {content:?}"))),
        }
    }

    let count = count.ok_or_else(|| syntax(1, "missing header line \"n <count>\""))?;
    if labels.len() != count {
        return Err(syntax(
            text.lines().count().max(1),
            format!("header declares {count} vertices but {} vertex lines were given", labels.len()),
        ));
    }
    Ok(TreeNetwork { labels, weights, edges })
}

/// Parses and validates an instance document.
pub fn parse_tree(text: &str) -> Result<TreeNetwork, TreeError> {
    let t = parse_document(text)?;
    let report = validate(&t);
    if report.is_empty() {
        Ok(t)
    } else {
        Err(TreeError::Invalid(report))
    }
}

/// Renders `t` in the canonical instance format.
pub fn render_tree(t: &TreeNetwork) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n {}", t.len());
    for (label, w) in t.labels.iter().zip(&t.weights) {
        let _ = writeln!(out, "v {label} {}", format_rational(w));
    }
    for e in &t.edges {
        let _ = writeln!(out, "e {} {} {}", t.labels[e.a.0], t.labels[e.b.0], format_rational(&e.length));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn parses_three_vertex_path() {
        let t = parse_tree("n 3\nv 0 1\nv 1 1\nv 2 1\ne 0 1 4\ne 1 2 4\n").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.edges.len(), 2);
        assert!(t.edges.iter().all(|e| e.length == int(4)));
    }

    #[test]
    fn accepts_short_header_form() {
        let t = parse_tree("v 3\n0 1\n1 1\n2 1\ne 0 1 4\ne 1 2 4").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.weights, vec![int(1); 3]);
    }

    #[test]
    fn renumbers_in_first_appearance_order() {
        let t = parse_tree("# sparse ids\nn 2\nv 17 1/2\nv 4 2.5\ne 4 17 3\n").unwrap();
        assert_eq!(t.labels, vec![17, 4]);
        assert_eq!(t.edges[0].a, VertexId(1));
        assert_eq!(t.edges[0].b, VertexId(0));
        assert_eq!(t.weights[0], BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn wrong_edge_count_is_not_a_tree() {
        let err = parse_tree("n 3\nv 0 1\nv 1 1\nv 2 1\ne 0 1 4\n").unwrap_err();
        assert!(err.to_string().contains("not a tree"), "{err}");
    }

    #[test]
    fn negative_weight_is_rejected() {
        let err = parse_tree("n 2\nv 0 -1\nv 1 1\ne 0 1 4\n").unwrap_err();
        assert!(err.to_string().contains("negative weight"), "{err}");
    }

    #[test]
    fn syntax_errors_report_line_numbers() {
        let err = parse_tree("n 2\nv 0 1\nv 1 x\ne 0 1 4\n").unwrap_err();
        assert!(matches!(err, TreeError::Syntax { line: 3, .. }), "{err}");
        let err = parse_tree("n 2\nv 0 1\nv 1 1\ne 0 9 4\n").unwrap_err();
        assert!(matches!(err, TreeError::Syntax { line: 4, .. }), "{err}");
    }

    #[test]
    fn render_then_parse_is_identity() {
        let text = "n 3\nv 5 1/3\nv 2 0\nv 9 7\ne 5 2 3/2\ne 2 9 4\n";
        let t = parse_tree(text).unwrap();
        assert_eq!(render_tree(&t), text);
    }
}
