//! External solver backend: spawns a process, feeds DIMACS on stdin, and
//! parses the usual "s SATISFIABLE" / "v ..." answer lines, so any
//! competition-style solver can replace the built-in one.

use std::io::Write;
use std::process::{Command, Stdio};

use crate::error::{Error, Result};
use crate::logic::{Assignment, CnfFormula, Literal};

use super::{Oracle, SatResult};

/// Runs `program args... < dimacs` per query. Assumptions are embedded as
/// unit clauses.
#[derive(Clone, Debug)]
pub struct ExternalSolver {
    program: String,
    args: Vec<String>,
}

impl ExternalSolver {
    /// Builds from a whitespace-separated command line.
    pub fn from_command(command: &str) -> Result<ExternalSolver> {
        let mut parts = command.split_whitespace().map(str::to_string);
        let program = parts
            .next()
            .ok_or_else(|| Error::ExternalSolver("empty solver command".into()))?;
        Ok(ExternalSolver {
            program,
            args: parts.collect(),
        })
    }

    fn render_dimacs(formula: &CnfFormula, assumptions: &[Literal]) -> String {
        let mut out = String::new();
        let m = formula.clauses().len() + assumptions.len();
        out.push_str(&format!("p cnf {} {}\n", formula.universe_size(), m));
        for lit in assumptions {
            out.push_str(&format!("{} 0\n", lit.to_dimacs()));
        }
        for clause in formula.clauses() {
            for lit in clause.literals() {
                out.push_str(&format!("{} ", lit.to_dimacs()));
            }
            out.push_str("0\n");
        }
        out
    }
}

impl Oracle for ExternalSolver {
    fn solve(&self, formula: &CnfFormula, assumptions: &[Literal]) -> Result<SatResult> {
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| Error::ExternalSolver(format!("spawn {}: {}", self.program, e)))?;
        child
            .stdin
            .take()
            .expect("piped")
            .write_all(Self::render_dimacs(formula, assumptions).as_bytes())
            .map_err(|e| Error::ExternalSolver(format!("write: {e}")))?;
        let output = child
            .wait_with_output()
            .map_err(|e| Error::ExternalSolver(format!("wait: {e}")))?;
        let stdout = String::from_utf8_lossy(&output.stdout);

        let mut verdict: Option<bool> = None;
        let mut true_vars: Vec<u32> = Vec::new();
        for line in stdout.lines() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix("s ") {
                verdict = match rest.trim() {
                    "SATISFIABLE" => Some(true),
                    "UNSATISFIABLE" => Some(false),
                    other => {
                        return Err(Error::ExternalSolver(format!(
                            "unrecognized status line: s {other}"
                        )))
                    }
                };
            } else if let Some(rest) = line.strip_prefix("v ") {
                for tok in rest.split_whitespace() {
                    let lit: i64 = tok.parse().map_err(|_| {
                        Error::ExternalSolver(format!("bad literal in v line: {tok}"))
                    })?;
                    if lit > 0 && lit <= formula.universe_size() as i64 {
                        true_vars.push(lit as u32);
                    }
                }
            }
        }
        match verdict {
            Some(true) => Ok(SatResult::sat(Assignment::new(
                formula.universe_size(),
                true_vars,
            )?)),
            Some(false) => Ok(SatResult::unsat()),
            None => Err(Error::ExternalSolver(
                "solver produced no status line".into(),
            )),
        }
    }

    fn name(&self) -> &str {
        &self.program
    }
}
