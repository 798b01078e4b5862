//! Reductions among the optimization SAT variants: lexicographic prefix
//! maximization to cardinality maximization, 3-CNF cardinality
//! maximization to bounded maximum independent set, bound elimination,
//! graphs to negative Krom, and the duplication gadget turning negative
//! cardinality maximization into positive cardinality minimization.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::logic::{Clause, CnfFormula, Graph, Literal, Variable, VariableOrder};
use crate::optsat::OptQuery;

use super::{IndSetInstance, ReductionOutput};

/// Copy counts grow as 2^(prefix length); refuse beyond this.
pub const LOGLEX_PREFIX_CAP: u32 = 20;

/// Couples cardinality to lexicographic rank: ordered variable i gains
/// 2^(l-i) - 1 biconditional copies, every unordered variable gains one
/// complementary copy, so model cardinality orders models exactly like the
/// prefix bit vector. The query becomes the last ordered variable.
pub fn reduce_loglex_to_cardmax(
    formula: &CnfFormula,
    prefix: &VariableOrder,
) -> Result<ReductionOutput<OptQuery>> {
    if prefix.is_empty() {
        return Err(Error::contract("prefix must contain at least one variable"));
    }
    prefix.check_within(formula.universe_size())?;
    let len = prefix.len() as u32;
    if len > LOGLEX_PREFIX_CAP {
        return Err(Error::Budget {
            what: format!("copy blowup for prefix length {len}"),
            cap: LOGLEX_PREFIX_CAP as u64,
        });
    }
    let n = formula.universe_size();
    let mut clauses = formula.clauses().to_vec();
    let mut next = n + 1;

    // Ordered variables first, most significant first.
    for (pos, &var) in prefix.vars().iter().enumerate() {
        let copies = (1u32 << (len - 1 - pos as u32)) - 1;
        for _ in 0..copies {
            let copy = Literal::pos(next);
            next += 1;
            let original = Literal::new(var, true);
            clauses.push(Clause::binary(original.negated(), copy));
            clauses.push(Clause::binary(original, copy.negated()));
        }
    }
    // Complementary copies for the unordered remainder, in id order.
    let ordered: std::collections::BTreeSet<u32> =
        prefix.vars().iter().map(|v| v.id()).collect();
    for v in 1..=n {
        if ordered.contains(&v) {
            continue;
        }
        let copy = Literal::pos(next);
        next += 1;
        let original = Literal::pos(v);
        clauses.push(Clause::binary(original.negated(), copy.negated()));
        clauses.push(Clause::binary(original, copy));
    }

    let target_formula = CnfFormula::new(next - 1, clauses)?;
    let query = *prefix.vars().last().expect("non-empty prefix");
    let var_map: BTreeMap<u32, u32> = (1..=n).map(|v| (v, v)).collect();
    Ok(ReductionOutput::new(
        OptQuery::new(target_formula, query)?,
        var_map,
        "prefix-rank-to-cardinality copy gadget",
    ))
}

/// Deterministic vertex numbering of the triangle gadget.
#[derive(Clone, Copy, Debug)]
pub struct TriangleLayout {
    /// Source variable count.
    pub n: u32,
    /// Source clause count.
    pub m: u32,
    /// Copies per clause, n + 1.
    pub l: u32,
}

impl TriangleLayout {
    pub fn bound(&self) -> u32 {
        self.l * self.m
    }

    pub fn vertex_count(&self) -> u32 {
        3 * self.bound() + self.n
    }

    /// Vertex of literal slot s (1..=3) in copy j (1..=l) of clause i (1..=m).
    pub fn literal_vertex(&self, i: u32, j: u32, s: u32) -> u32 {
        (((i - 1) * self.l + (j - 1)) * 3) + s
    }

    /// Vertex standing for "variable t is true".
    pub fn var_vertex(&self, t: u32) -> u32 {
        3 * self.bound() + t
    }

    /// Inverse of `literal_vertex`: (clause, copy, slot).
    pub fn decode_literal_vertex(&self, vertex: u32) -> Option<(u32, u32, u32)> {
        if vertex == 0 || vertex > 3 * self.bound() {
            return None;
        }
        let z = vertex - 1;
        let s = z % 3 + 1;
        let jc = z / 3;
        let j = jc % self.l + 1;
        let i = jc / self.l + 1;
        Some((i, j, s))
    }
}

/// Clause literal lists padded to exactly three by repeating the last
/// literal; repetition preserves semantics and the complementary-literal
/// edges never connect copies of the same literal.
fn padded_3cnf(formula: &CnfFormula) -> Result<Vec<[Literal; 3]>> {
    formula
        .clauses()
        .iter()
        .map(|c| {
            if c.len() > 3 {
                return Err(Error::contract(
                    "triangle gadget requires clauses of at most three literals",
                ));
            }
            let lits = c.literals();
            let last = *lits.last().expect("non-empty");
            Ok([
                lits[0],
                *lits.get(1).unwrap_or(&last),
                *lits.get(2).unwrap_or(&last),
            ])
        })
        .collect()
}

/// The triangle gadget: l = n+1 copies of the clause triangles keep model
/// cardinality visible in independent-set size, with bound l*m. Edge
/// groups: (1) the triangles, (2) complementary literal occurrences across
/// all copy pairs, (3) negative-occurrence copies to the variable vertex.
pub fn reduce_cardmax3cnf_to_maxindset(
    q: &OptQuery,
) -> Result<ReductionOutput<IndSetInstance>> {
    let formula = q.formula();
    let clauses = padded_3cnf(formula)?;
    let occurs = formula
        .clauses()
        .iter()
        .any(|c| c.literals().iter().any(|l| l.var() == q.query_var()));
    if !occurs {
        return Err(Error::contract(
            "query variable must occur in the formula",
        ));
    }
    let layout = TriangleLayout {
        n: formula.universe_size(),
        m: clauses.len() as u32,
        l: formula.universe_size() + 1,
    };
    let mut graph = Graph::new(layout.vertex_count());

    for i in 1..=layout.m {
        for j in 1..=layout.l {
            let v = |s| layout.literal_vertex(i, j, s);
            graph.add_edge(v(1), v(2))?;
            graph.add_edge(v(1), v(3))?;
            graph.add_edge(v(2), v(3))?;
        }
    }
    for i in 1..=layout.m {
        for s in 1..=3u32 {
            let lit = clauses[(i - 1) as usize][(s - 1) as usize];
            for i2 in 1..=layout.m {
                for s2 in 1..=3u32 {
                    let lit2 = clauses[(i2 - 1) as usize][(s2 - 1) as usize];
                    if lit2 != lit.negated() {
                        continue;
                    }
                    for j in 1..=layout.l {
                        for j2 in 1..=layout.l {
                            graph.add_edge(
                                layout.literal_vertex(i, j, s),
                                layout.literal_vertex(i2, j2, s2),
                            )?;
                        }
                    }
                }
            }
            if !lit.is_positive() {
                for j in 1..=layout.l {
                    graph.add_edge(
                        layout.literal_vertex(i, j, s),
                        layout.var_vertex(lit.var().id()),
                    )?;
                }
            }
        }
    }

    let var_map: BTreeMap<u32, u32> = (1..=layout.n)
        .map(|t| (t, layout.var_vertex(t)))
        .collect();
    let instance = IndSetInstance::new(
        graph,
        layout.var_vertex(q.query_var().id()),
        Some(layout.bound()),
    )?;
    Ok(ReductionOutput::new(
        instance,
        var_map,
        "clause-triangle copies gadget",
    ))
}

/// Encodes the explicit lower bound implicitly: K fresh pairwise
/// non-adjacent vertices, each adjacent to every original vertex, so an
/// independent set lives entirely in the original graph or is exactly the
/// fresh set of size K.
pub fn drop_bound(inst: &IndSetInstance) -> Result<ReductionOutput<IndSetInstance>> {
    let k = inst
        .bound()
        .ok_or_else(|| Error::contract("drop_bound requires a bounded instance"))?;
    let v = inst.graph().vertex_count();
    let mut graph = Graph::new(v + k);
    for &(a, b) in inst.graph().edges() {
        graph.add_edge(a, b)?;
    }
    for fresh in v + 1..=v + k {
        for original in 1..=v {
            graph.add_edge(fresh, original)?;
        }
    }
    let var_map: BTreeMap<u32, u32> = (1..=v).map(|x| (x, x)).collect();
    let instance = IndSetInstance::new(graph, inst.query_vertex(), None)?;
    Ok(ReductionOutput::new(
        instance,
        var_map,
        "bound-absorbing fresh clique-complement",
    ))
}

/// One variable per vertex and a negative two-clause per edge: models are
/// exactly the independent sets, so maximum-model membership is
/// maximum-independent-set membership.
pub fn graph_to_negative_krom(inst: &IndSetInstance) -> Result<ReductionOutput<OptQuery>> {
    if inst.bound().is_some() {
        return Err(Error::contract(
            "graph_to_negative_krom takes an unbounded instance",
        ));
    }
    let n = inst.graph().vertex_count();
    let clauses = inst
        .graph()
        .edges()
        .iter()
        .map(|&(u, v)| Clause::binary(Literal::neg(u), Literal::neg(v)))
        .collect();
    let formula = CnfFormula::new(n, clauses)?;
    let var_map: BTreeMap<u32, u32> = (1..=n).map(|x| (x, x)).collect();
    Ok(ReductionOutput::new(
        OptQuery::new(formula, Variable::new(inst.query_vertex()))?,
        var_map,
        "edge-to-negative-clause translation",
    ))
}

/// The duplication gadget: primed pairs x', x'' stand for "x is false",
/// flipping cardinality maximization over negative clauses into
/// cardinality minimization over positive ones. A model of cardinality c
/// maps to one of cardinality c + 2(n - c).
pub fn negkrom_cardmax_to_poskrom_cardmin(
    q: &OptQuery,
) -> Result<ReductionOutput<OptQuery>> {
    let formula = q.formula();
    if !formula.is_krom() || !formula.is_negative() {
        return Err(Error::contract(
            "duplication gadget requires a negative Krom formula",
        ));
    }
    let n = formula.universe_size();
    let prime = |v: u32| Literal::pos(n + v);
    let second = |v: u32| Literal::pos(2 * n + v);
    let mut clauses = Vec::new();
    for v in 1..=n {
        clauses.push(Clause::binary(Literal::pos(v), prime(v)));
        clauses.push(Clause::binary(Literal::pos(v), second(v)));
    }
    for clause in formula.clauses() {
        let lits = clause.literals();
        let x = lits[0].var().id();
        let y = lits.get(1).map_or(x, |l| l.var().id());
        clauses.push(Clause::binary(prime(x), prime(y)));
        clauses.push(Clause::binary(second(x), prime(y)));
        clauses.push(Clause::binary(prime(x), second(y)));
        clauses.push(Clause::binary(second(x), second(y)));
    }
    let target = CnfFormula::new(3 * n, clauses)?;
    let var_map: BTreeMap<u32, u32> = (1..=n).map(|v| (v, v)).collect();
    Ok(ReductionOutput::new(
        OptQuery::new(target, q.query_var())?,
        var_map,
        "false-indicator duplication gadget",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::logic::Assignment;
    use crate::optsat::{
        brute_force_card_max_capped, brute_force_card_min_capped, brute_force_log_lex,
        LogLexAnswer,
    };
    use crate::reductions::{in_some_maximum_is, max_independent_set_size};

    fn formula(n: u32, clauses: &[&[i64]]) -> CnfFormula {
        let cs = clauses
            .iter()
            .map(|c| {
                Clause::new(
                    c.iter()
                        .map(|&l| {
                            if l > 0 {
                                Literal::pos(l as u32)
                            } else {
                                Literal::neg((-l) as u32)
                            }
                        })
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        CnfFormula::new(n, cs).unwrap()
    }

    #[test]
    fn loglex_gadget_copy_counts() {
        // Prefix (x1, x2) over a 2-variable universe: x1 gets one copy,
        // x2 none, no unordered variables.
        let f = formula(2, &[&[-1, 2]]);
        let prefix = VariableOrder::from_ids(&[1, 2]).unwrap();
        let out = reduce_loglex_to_cardmax(&f, &prefix).unwrap();
        assert_eq!(out.target.formula().universe_size(), 3);
        assert_eq!(out.target.query_var(), Variable::new(2));

        // An unordered variable gains exactly one complementary copy.
        let f = formula(3, &[&[-1, 2]]);
        let out = reduce_loglex_to_cardmax(&f, &prefix).unwrap();
        assert_eq!(out.target.formula().universe_size(), 5);
        // Complementary pair appears as (!x3 | !x3') and (x3 | x3').
        let has_comp = out.target.formula().clauses().iter().any(|c| {
            c.literals() == [Literal::neg(3), Literal::neg(5)]
        });
        assert!(has_comp);
    }

    #[test]
    fn loglex_to_cardmax_preserves_answers() {
        use rand::seq::SliceRandom;
        let mut rng = gen::rng(0x7731);
        for round in 0..250u32 {
            let n = 1 + round % 5;
            let m = round % 7;
            let f = gen::random_cnf(n, m, 3, &mut rng);
            let len = 1 + round as usize % (n.min(4) as usize);
            let mut ids: Vec<u32> = (1..=n).collect();
            ids.shuffle(&mut rng);
            ids.truncate(len);
            let prefix = VariableOrder::from_ids(&ids).unwrap();
            let source = brute_force_log_lex(&f, &prefix, 25).unwrap();
            let out = reduce_loglex_to_cardmax(&f, &prefix).unwrap();
            let target = brute_force_card_max_capped(&out.target, 25).unwrap();
            let source_answer = match source {
                LogLexAnswer::Unsat => false,
                LogLexAnswer::Prefix { answer, .. } => answer,
            };
            assert_eq!(source_answer, target.answer, "formula {f:?} prefix {ids:?}");
        }
    }

    #[test]
    fn triangle_gadget_counts() {
        let f = formula(2, &[&[1, 2, 2]]);
        let q = OptQuery::new(f, Variable::new(1)).unwrap();
        let out = reduce_cardmax3cnf_to_maxindset(&q).unwrap();
        let g = out.target.graph();
        assert_eq!(g.vertex_count(), 11); // 3 * 3 + 2
        assert_eq!(out.target.bound(), Some(3));
        assert_eq!(out.target.query_vertex(), 10);
    }

    #[test]
    fn triangle_gadget_links_complementary_literals_within_a_clause() {
        let f = formula(2, &[&[1, -1, 2]]);
        let q = OptQuery::new(f, Variable::new(2)).unwrap();
        let out = reduce_cardmax3cnf_to_maxindset(&q).unwrap();
        let layout = TriangleLayout { n: 2, m: 1, l: 3 };
        // Copies of x1 and of !x1 are linked across every copy pair.
        for j in 1..=3 {
            for j2 in 1..=3 {
                assert!(out
                    .target
                    .graph()
                    .has_edge(layout.literal_vertex(1, j, 1), layout.literal_vertex(1, j2, 2)));
            }
        }
        // But copies of the duplicated literal x2 are never self-linked.
        assert!(!out
            .target
            .graph()
            .has_edge(layout.literal_vertex(1, 1, 3), layout.literal_vertex(1, 2, 3)));
    }

    #[test]
    fn triangle_gadget_requires_occurring_query() {
        let f = formula(2, &[&[1, 1, 1]]);
        let q = OptQuery::new(f, Variable::new(2)).unwrap();
        assert!(reduce_cardmax3cnf_to_maxindset(&q).is_err());
    }

    #[test]
    fn cardmax_to_indset_preserves_answers() {
        let mut rng = gen::rng(0x3CB5);
        for round in 0..60u32 {
            let n = 1 + round % 4;
            let m = 1 + round % 3;
            let f = gen::random_cnf(n, m, 3, &mut rng);
            for v in 1..=n {
                let q = OptQuery::new(f.clone(), Variable::new(v)).unwrap();
                let out = match reduce_cardmax3cnf_to_maxindset(&q) {
                    Ok(out) => out,
                    Err(_) => continue, // query variable does not occur
                };
                let source = brute_force_card_max_capped(&q, 25).unwrap();
                let inst = &out.target;
                let alpha = max_independent_set_size(inst.graph());
                let target_answer = alpha >= inst.bound().unwrap()
                    && in_some_maximum_is(inst.graph(), inst.query_vertex());
                assert_eq!(source.answer, target_answer, "formula {f:?} query {v}");
            }
        }
    }

    #[test]
    fn drop_bound_counts_and_preservation() {
        let tri = Graph::with_edges(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let inst = IndSetInstance::new(tri, 1, Some(2)).unwrap();
        let out = drop_bound(&inst).unwrap();
        assert_eq!(out.target.graph().vertex_count(), 5);
        assert_eq!(out.target.graph().edge_count(), 9);
        // The bound exceeds the triangle's independence number, so the
        // fresh set is the unique maximum and the query answer is false.
        assert_eq!(max_independent_set_size(out.target.graph()), 2);
        assert!(!in_some_maximum_is(out.target.graph(), 1));

        // Exhaustive over all graphs on up to 5 vertices, every query
        // vertex, every bound up to 4.
        for n in 1..=5u32 {
            let pairs: Vec<(u32, u32)> = (1..=n)
                .flat_map(|u| ((u + 1)..=n).map(move |v| (u, v)))
                .collect();
            for edge_mask in 0u64..(1 << pairs.len()) {
                let edges: Vec<(u32, u32)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| edge_mask & (1 << i) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                let g = Graph::with_edges(n, &edges).unwrap();
                for v in 1..=n {
                    for k in 1..=4u32 {
                        let inst = IndSetInstance::new(g.clone(), v, Some(k)).unwrap();
                        let out = drop_bound(&inst).unwrap();
                        let alpha = max_independent_set_size(&g);
                        let source = alpha >= k && in_some_maximum_is(&g, v);
                        let target = in_some_maximum_is(out.target.graph(), v);
                        assert_eq!(source, target, "n={n} mask={edge_mask} v={v} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn graph_to_negative_krom_examples_and_preservation() {
        let single = Graph::with_edges(2, &[(1, 2)]).unwrap();
        let inst = IndSetInstance::new(single, 1, None).unwrap();
        let out = graph_to_negative_krom(&inst).unwrap();
        assert_eq!(out.target.formula().clauses().len(), 1);
        assert_eq!(
            out.target.formula().clauses()[0].literals(),
            &[Literal::neg(1), Literal::neg(2)]
        );

        let empty = Graph::new(3);
        let inst = IndSetInstance::new(empty, 2, None).unwrap();
        let out = graph_to_negative_krom(&inst).unwrap();
        let ans = brute_force_card_max_capped(&out.target, 25).unwrap();
        assert!(ans.answer);
        assert_eq!(ans.optimum, Some(3));

        // Exhaustive over all graphs on up to 6 vertices (sampled edge
        // masks beyond 4 vertices to stay quick in this unit test; the
        // harness runs the full corpus).
        for n in 1..=4u32 {
            let pairs: Vec<(u32, u32)> = (1..=n)
                .flat_map(|u| ((u + 1)..=n).map(move |v| (u, v)))
                .collect();
            for edge_mask in 0u64..(1 << pairs.len()) {
                let edges: Vec<(u32, u32)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| edge_mask & (1 << i) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                let g = Graph::with_edges(n, &edges).unwrap();
                for v in 1..=n {
                    let inst = IndSetInstance::new(g.clone(), v, None).unwrap();
                    let out = graph_to_negative_krom(&inst).unwrap();
                    let ans = brute_force_card_max_capped(&out.target, 25).unwrap();
                    assert_eq!(ans.answer, in_some_maximum_is(&g, v));
                }
            }
        }
    }

    #[test]
    fn duplication_gadget_structure() {
        // No clauses: only the per-variable blocks.
        let f = formula(1, &[]);
        let q = OptQuery::new(f, Variable::new(1)).unwrap();
        let out = negkrom_cardmax_to_poskrom_cardmin(&q).unwrap();
        let t = out.target.formula();
        assert_eq!(t.universe_size(), 3);
        assert_eq!(t.clauses().len(), 2);
        assert!(t.is_krom() && t.is_positive());

        // tau maps I = {x} over {x, y} to {x, y', y''} of cardinality 3.
        let f = formula(2, &[]);
        let q = OptQuery::new(f, Variable::new(1)).unwrap();
        let out = negkrom_cardmax_to_poskrom_cardmin(&q).unwrap();
        let tau = Assignment::new(6, [1, 4, 6]).unwrap(); // x1, x2'=n+2, x2''=2n+2
        assert!(out.target.formula().evaluate(&tau).unwrap());
        assert_eq!(tau.cardinality(), 3);

        let bad = formula(2, &[&[1, -2]]);
        let q = OptQuery::new(bad, Variable::new(1)).unwrap();
        assert!(negkrom_cardmax_to_poskrom_cardmin(&q).is_err());
    }

    #[test]
    fn duplication_gadget_preserves_answers() {
        let mut rng = gen::rng(0xD0B1);
        for round in 0..120u32 {
            let n = 1 + round % 6;
            let f = gen::random_negative_krom(n, 0.5, &mut rng);
            for v in 1..=n {
                let q = OptQuery::new(f.clone(), Variable::new(v)).unwrap();
                let source = brute_force_card_max_capped(&q, 25).unwrap();
                let out = negkrom_cardmax_to_poskrom_cardmin(&q).unwrap();
                let target = brute_force_card_min_capped(&out.target, 25).unwrap();
                assert_eq!(source.answer, target.answer, "formula {f:?} query {v}");
                // Optimum shift: max weight c maps to minimum c + 2(n-c).
                let c = source.optimum.unwrap();
                assert_eq!(target.optimum, Some(c + 2 * (n - c)));
            }
        }
    }
}
