//! Text formats for relations, constraint formulas, graph instances,
//! abduction problems, and variable-correspondence sidecars.
//!
//! Relation file: blocks of "r <arity> [name]" followed by one tuple per
//! line as a bit string. Constraint formula file: a "vars <n>" line, a
//! relation table with named blocks, then application lines
//! "<relname> v1 v2 ...". Graph file: "p edge <n> <m>", optional
//! "q <vertex>" and "k <bound>" lines, then "e <u> <v>" lines. Abduction
//! file: "vars <n>", "hyp ...", "man ...", then zero-terminated theory
//! clauses. Correspondence sidecar: "<source> <target>" pairs.

use std::collections::BTreeMap;

use crate::abduction::Pap;
use crate::error::{Error, Result};
use crate::logic::{BooleanRelation, Clause, CnfFormula, ConstraintFormula, Graph, Literal, Variable};

use super::{content_lines, parse_i64, parse_u32};

fn parse_tuple(line_no: usize, tok: &str, arity: u32) -> Result<Vec<bool>> {
    if tok.len() as u32 != arity || !tok.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::parse(
            line_no,
            format!("expected a {arity}-bit tuple, got '{tok}'"),
        ));
    }
    Ok(tok.chars().map(|c| c == '1').collect())
}

/// Parses a relation file into (name, relation) pairs; unnamed blocks get
/// R1, R2, ... in order of appearance.
pub fn parse_relations(text: &str) -> Result<Vec<(String, BooleanRelation)>> {
    let mut out: Vec<(String, Vec<Vec<bool>>, u32)> = Vec::new();
    for (line_no, line) in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "r" {
            if toks.len() < 2 || toks.len() > 3 {
                return Err(Error::parse(
                    line_no,
                    "expected 'r <arity> [name]'".to_string(),
                ));
            }
            let arity = parse_u32(line_no, toks[1], "an arity")?;
            if arity == 0 {
                return Err(Error::parse(line_no, "arity must be at least 1".to_string()));
            }
            let name = toks
                .get(2)
                .map(|s| s.to_string())
                .unwrap_or_else(|| format!("R{}", out.len() + 1));
            out.push((name, Vec::new(), arity));
        } else {
            let (_, tuples, arity) = out.last_mut().ok_or_else(|| {
                Error::parse(line_no, "tuple before any 'r <arity>' block".to_string())
            })?;
            if toks.len() != 1 {
                return Err(Error::parse(line_no, format!("unexpected line '{line}'")));
            }
            tuples.push(parse_tuple(line_no, toks[0], *arity)?);
        }
    }
    out.into_iter()
        .map(|(name, tuples, arity)| Ok((name, BooleanRelation::new(arity, tuples)?)))
        .collect()
}

pub fn render_relations<'a, I: IntoIterator<Item = (&'a str, &'a BooleanRelation)>>(
    relations: I,
) -> String {
    let mut out = String::new();
    for (name, rel) in relations {
        out.push_str(&format!("r {} {}\n", rel.arity(), name));
        for tuple in rel.tuples() {
            for &b in tuple {
                out.push(if b { '1' } else { '0' });
            }
            out.push('\n');
        }
    }
    out
}

pub fn parse_constraint_formula(text: &str) -> Result<ConstraintFormula> {
    let mut lines = content_lines(text).peekable();
    let (first_no, first) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "empty constraint formula file".to_string()))?;
    let toks: Vec<&str> = first.split_whitespace().collect();
    if toks.len() != 2 || toks[0] != "vars" {
        return Err(Error::parse(first_no, "expected 'vars <n>' first".to_string()));
    }
    let n = parse_u32(first_no, toks[1], "a variable count")?;
    let mut cf = ConstraintFormula::new(n);

    let mut current: Option<(String, u32, Vec<Vec<bool>>, usize)> = None;
    let flush =
        |cf: &mut ConstraintFormula, cur: &mut Option<(String, u32, Vec<Vec<bool>>, usize)>| -> Result<()> {
            if let Some((name, arity, tuples, line_no)) = cur.take() {
                let rel = BooleanRelation::new(arity, tuples)
                    .map_err(|e| Error::parse(line_no, e.to_string()))?;
                cf.add_relation(&name, rel)
                    .map_err(|e| Error::parse(line_no, e.to_string()))?;
            }
            Ok(())
        };

    for (line_no, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "r" {
            flush(&mut cf, &mut current)?;
            if toks.len() != 3 {
                return Err(Error::parse(
                    line_no,
                    "expected 'r <arity> <name>' in a constraint file".to_string(),
                ));
            }
            let arity = parse_u32(line_no, toks[1], "an arity")?;
            current = Some((toks[2].to_string(), arity, Vec::new(), line_no));
        } else if toks.len() == 1
            && current.is_some()
            && toks[0].chars().all(|c| c == '0' || c == '1')
        {
            let (_, arity, tuples, _) = current.as_mut().expect("checked");
            tuples.push(parse_tuple(line_no, toks[0], *arity)?);
        } else {
            flush(&mut cf, &mut current)?;
            let rel = cf.relation_index(toks[0]).ok_or_else(|| {
                Error::parse(line_no, format!("unknown relation '{}'", toks[0]))
            })?;
            let vars = toks[1..]
                .iter()
                .map(|t| {
                    let id = parse_u32(line_no, t, "a variable id")?;
                    if id == 0 || id > n {
                        return Err(Error::parse(
                            line_no,
                            format!("variable {id} outside the declared universe of {n}"),
                        ));
                    }
                    Ok(Variable::new(id))
                })
                .collect::<Result<Vec<Variable>>>()?;
            cf.add_application(rel, vars)
                .map_err(|e| Error::parse(line_no, e.to_string()))?;
        }
    }
    flush(&mut cf, &mut current)?;
    Ok(cf)
}

pub fn render_constraint_formula(cf: &ConstraintFormula) -> String {
    let mut out = format!("vars {}\n", cf.universe_size());
    out.push_str(&render_relations(cf.relations()));
    for (rel, vars) in cf.applications() {
        out.push_str(cf.relation_name(*rel));
        for v in vars {
            out.push_str(&format!(" {}", v.id()));
        }
        out.push('\n');
    }
    out
}

/// A graph with an optional query vertex and an optional bound, as used by
/// the independent-set instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphInstanceFile {
    pub graph: Graph,
    pub query_vertex: Option<u32>,
    pub bound: Option<u32>,
}

pub fn parse_graph_instance(text: &str) -> Result<GraphInstanceFile> {
    let mut lines = content_lines(text);
    let (first_no, first) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "empty graph file".to_string()))?;
    let toks: Vec<&str> = first.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "p" || toks[1] != "edge" {
        return Err(Error::parse(
            first_no,
            "expected 'p edge <vertices> <edges>' first".to_string(),
        ));
    }
    let n = parse_u32(first_no, toks[2], "a vertex count")?;
    let m = parse_u32(first_no, toks[3], "an edge count")? as usize;
    let mut graph = Graph::new(n);
    let mut query_vertex = None;
    let mut bound = None;
    for (line_no, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "e" if toks.len() == 3 => {
                let u = parse_u32(line_no, toks[1], "a vertex")?;
                let v = parse_u32(line_no, toks[2], "a vertex")?;
                graph
                    .add_edge(u, v)
                    .map_err(|e| Error::parse(line_no, e.to_string()))?;
            }
            "q" if toks.len() == 2 => {
                query_vertex = Some(parse_u32(line_no, toks[1], "a vertex")?);
            }
            "k" if toks.len() == 2 => {
                bound = Some(parse_u32(line_no, toks[1], "a bound")?);
            }
            _ => return Err(Error::parse(line_no, format!("unexpected line '{line}'"))),
        }
    }
    if graph.edge_count() != m {
        return Err(Error::parse(
            0,
            format!("header declares {m} edges, file contains {}", graph.edge_count()),
        ));
    }
    Ok(GraphInstanceFile {
        graph,
        query_vertex,
        bound,
    })
}

pub fn render_graph_instance(inst: &GraphInstanceFile) -> String {
    let mut out = format!(
        "p edge {} {}\n",
        inst.graph.vertex_count(),
        inst.graph.edge_count()
    );
    if let Some(q) = inst.query_vertex {
        out.push_str(&format!("q {q}\n"));
    }
    if let Some(k) = inst.bound {
        out.push_str(&format!("k {k}\n"));
    }
    for &(u, v) in inst.graph.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

pub fn parse_pap(text: &str) -> Result<Pap> {
    let mut lines = content_lines(text);
    let (first_no, first) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "empty abduction file".to_string()))?;
    let toks: Vec<&str> = first.split_whitespace().collect();
    if toks.len() != 2 || toks[0] != "vars" {
        return Err(Error::parse(first_no, "expected 'vars <n>' first".to_string()));
    }
    let n = parse_u32(first_no, toks[1], "a variable count")?;

    let mut hyp: Option<Vec<u32>> = None;
    let mut man: Option<Vec<u32>> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    for (line_no, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "hyp" => {
                let ids = toks[1..]
                    .iter()
                    .map(|t| parse_u32(line_no, t, "a variable id"))
                    .collect::<Result<Vec<u32>>>()?;
                hyp = Some(ids);
            }
            "man" => {
                let ids = toks[1..]
                    .iter()
                    .map(|t| parse_u32(line_no, t, "a variable id"))
                    .collect::<Result<Vec<u32>>>()?;
                man = Some(ids);
            }
            _ => {
                for tok in toks {
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
        }
    }
    if !current.is_empty() {
        return Err(Error::parse(0, "unterminated clause at end of file".to_string()));
    }
    let theory = CnfFormula::new(n, clauses)?;
    Pap::new(
        theory,
        hyp.ok_or_else(|| Error::parse(0, "missing 'hyp' line".to_string()))?,
        man.ok_or_else(|| Error::parse(0, "missing 'man' line".to_string()))?,
    )
}

pub fn render_pap(pap: &Pap) -> String {
    let mut out = format!("vars {}\n", pap.universe_size());
    out.push_str("hyp");
    for v in pap.hypotheses() {
        out.push_str(&format!(" {v}"));
    }
    out.push_str("\nman");
    for v in pap.manifestations() {
        out.push_str(&format!(" {v}"));
    }
    out.push('\n');
    for clause in pap.theory().clauses() {
        for lit in clause.literals() {
            out.push_str(&format!("{} ", lit.to_dimacs()));
        }
        out.push_str("0\n");
    }
    out
}

/// The correspondence sidecar written next to reduction outputs.
pub fn render_var_map(map: &BTreeMap<u32, u32>) -> String {
    map.iter()
        .map(|(s, t)| format!("{s} {t}\n"))
        .collect()
}

pub fn parse_var_map(text: &str) -> Result<BTreeMap<u32, u32>> {
    let mut map = BTreeMap::new();
    for (line_no, line) in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::parse(line_no, "expected '<source> <target>'".to_string()));
        }
        let s = parse_u32(line_no, toks[0], "a source id")?;
        let t = parse_u32(line_no, toks[1], "a target id")?;
        map.insert(s, t);
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn relation_file_round_trip() {
        let text = "r 2 OR2\n01\n10\n11\nr 1 T\n1\n";
        let rels = parse_relations(text).unwrap();
        assert_eq!(rels.len(), 2);
        assert_eq!(rels[0].1, BooleanRelation::or2());
        assert_eq!(rels[1].1, BooleanRelation::constant(true));
        let rendered = render_relations(rels.iter().map(|(n, r)| (n.as_str(), r)));
        assert_eq!(rendered, text);

        // Unnamed blocks get positional names.
        let rels = parse_relations("r 2\n00\n11\n").unwrap();
        assert_eq!(rels[0].0, "R1");
        assert!(parse_relations("01\n").is_err());
        assert!(parse_relations("r 2\n011\n").is_err());
    }

    #[test]
    fn constraint_formula_round_trip() {
        let mut rng = gen::rng(0xC5B);
        for round in 0..100u32 {
            let cf = gen::random_width2affine(1 + round % 6, round % 8, &mut rng);
            let text = render_constraint_formula(&cf);
            let back = parse_constraint_formula(&text).unwrap();
            assert_eq!(cf, back);
            assert_eq!(render_constraint_formula(&back), text);
        }
        // Application referencing an unknown relation.
        assert!(parse_constraint_formula("vars 2\nOR2 1 2\n").is_err());
        // Arity mismatch surfaces as a parse error with a line number.
        let bad = "vars 2\nr 2 OR2\n01\n10\n11\nOR2 1\n";
        match parse_constraint_formula(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn graph_instance_round_trip() {
        let mut rng = gen::rng(0x64AF);
        for round in 0..100u32 {
            let graph = gen::random_graph(1 + round % 8, 0.4, &mut rng);
            let inst = GraphInstanceFile {
                query_vertex: Some(1 + round % graph.vertex_count().max(1)),
                bound: (round % 3 == 0).then_some(1 + round % 5),
                graph,
            };
            let text = render_graph_instance(&inst);
            let back = parse_graph_instance(&text).unwrap();
            assert_eq!(inst, back);
        }
        assert!(parse_graph_instance("p edge 2 1\ne 1 1\n").is_err());
        assert!(parse_graph_instance("p edge 2 2\ne 1 2\n").is_err());
    }

    #[test]
    fn pap_round_trip() {
        let text = "vars 3\nhyp 1 2\nman 3\n-1 3 0\n-2 3 0\n";
        let pap = parse_pap(text).unwrap();
        assert_eq!(pap.hypotheses().len(), 2);
        assert_eq!(pap.manifestations().len(), 1);
        assert_eq!(render_pap(&pap), text);

        assert!(parse_pap("vars 1\nhyp 1\n1 0\n").is_err()); // no man line
        assert!(parse_pap("vars 1\nhyp 1\nman 1\n1 0\n-1 0\n").is_err()); // inconsistent
    }

    #[test]
    fn var_map_round_trip() {
        let map: BTreeMap<u32, u32> = [(1, 4), (2, 5)].into_iter().collect();
        let text = render_var_map(&map);
        assert_eq!(parse_var_map(&text).unwrap(), map);
    }
}
