//! DIMACS CNF reader and writer: "p cnf n m" header, clauses as
//! zero-terminated integer sequences, 'c' comment lines.

use crate::error::{Error, Result};
use crate::logic::{Clause, CnfFormula, Literal, Variable};

use super::{content_lines, parse_i64, parse_u32};

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "missing 'p cnf' header".to_string()))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "p" || toks[1] != "cnf" {
        return Err(Error::parse(
            header_line,
            format!("expected 'p cnf <vars> <clauses>', got '{header}'"),
        ));
    }
    let n = parse_u32(header_line, toks[2], "a variable count")?;
    let m = parse_u32(header_line, toks[3], "a clause count")? as usize;

    let mut clauses = Vec::with_capacity(m);
    let mut current: Vec<Literal> = Vec::new();
    for (line_no, line) in lines {
        for tok in line.split_whitespace() {
            let lit = parse_i64(line_no, tok)?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(Error::parse(line_no, "empty clause".to_string()));
                }
                clauses.push(
                    Clause::new(std::mem::take(&mut current))
                        .map_err(|e| Error::parse(line_no, e.to_string()))?,
                );
                continue;
            }
            let var = lit.unsigned_abs();
            if var > n as u64 {
                return Err(Error::parse(
                    line_no,
                    format!("literal {lit} outside the declared universe of {n}"),
                ));
            }
            current.push(Literal::new(Variable::new(var as u32), lit > 0));
        }
    }
    if !current.is_empty() {
        return Err(Error::parse(0, "unterminated clause at end of file".to_string()));
    }
    if clauses.len() != m {
        return Err(Error::parse(
            0,
            format!("header declares {m} clauses, file contains {}", clauses.len()),
        ));
    }
    CnfFormula::new(n, clauses)
}

pub fn render_dimacs(formula: &CnfFormula) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "p cnf {} {}\n",
        formula.universe_size(),
        formula.clauses().len()
    ));
    for clause in formula.clauses() {
        for lit in clause.literals() {
            out.push_str(&format!("{} ", lit.to_dimacs()));
        }
        out.push_str("0\n");
    }
    out
}
