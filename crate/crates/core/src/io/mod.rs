//! File formats: DIMACS CNF, relation files, constraint formulas, graphs,
//! and abduction problems. Parsers report line-numbered errors; every
//! parser/serializer pair is the identity on normalized files.

mod dimacs;
mod formats;

pub use dimacs::{parse_dimacs, render_dimacs};
pub use formats::{
    parse_constraint_formula, parse_graph_instance, parse_pap, parse_relations, parse_var_map,
    render_constraint_formula, render_graph_instance, render_pap, render_relations,
    render_var_map, GraphInstanceFile,
};

use crate::error::{Error, Result};

/// Strips comments and blank lines, keeping 1-based line numbers. A
/// comment line is exactly "c" or starts with "c" plus whitespace, so
/// names beginning with the letter c survive.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(idx, raw)| {
        let line = raw.trim();
        if line.is_empty() || line == "c" || line.starts_with("c ") || line.starts_with("c\t") {
            None
        } else {
            Some((idx + 1, line))
        }
    })
}

fn parse_u32(line: usize, tok: &str, what: &str) -> Result<u32> {
    tok.parse::<u32>()
        .map_err(|_| Error::parse(line, format!("expected {what}, got '{tok}'")))
}

fn parse_i64(line: usize, tok: &str) -> Result<i64> {
    tok.parse::<i64>()
        .map_err(|_| Error::parse(line, format!("expected a literal, got '{tok}'")))
}
