//! Constructive gadget library: every reduction emits a typed target
//! instance with a variable-correspondence map, numbered deterministically
//! so outputs are byte-reproducible. Answer preservation is checked by the
//! test suites with brute-force oracles on both sides.

mod csp;
mod indset;
mod kr;
mod optvariants;

pub use csp::{reduce_or2_to_r4p, s01_analysis, s01_witness_reduction, S01Analysis, S01Branch};
pub use indset::{
    find_maximum_is, in_some_maximum_is, max_independent_set_size, max_is_size_with_vertex,
};
pub use kr::{
    reduce_3sat_to_satoh_mc, reduce_cardmin_to_abduction, reduce_cardmin_to_dalal,
    DalalMcInstance, SatohMcInstance,
};
pub use optvariants::{
    drop_bound, graph_to_negative_krom, negkrom_cardmax_to_poskrom_cardmin,
    reduce_cardmax3cnf_to_maxindset, reduce_loglex_to_cardmax, TriangleLayout,
};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::logic::{ConstraintFormula, Graph, Variable};

/// A reduction's product: the target instance, an injective map from
/// source variable ids to target ids, and a note naming the construction.
#[derive(Clone, Debug)]
pub struct ReductionOutput<T> {
    pub target: T,
    pub var_map: BTreeMap<u32, u32>,
    pub note: &'static str,
}

impl<T> ReductionOutput<T> {
    pub(crate) fn new(target: T, var_map: BTreeMap<u32, u32>, note: &'static str) -> Self {
        debug_assert!({
            let values: std::collections::BTreeSet<u32> = var_map.values().copied().collect();
            values.len() == var_map.len()
        });
        ReductionOutput {
            target,
            var_map,
            note,
        }
    }
}

/// A maximum-independent-set query: is the query vertex in a maximum
/// independent set (of size at least `bound`, when present)?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndSetInstance {
    graph: Graph,
    query_vertex: u32,
    bound: Option<u32>,
}

impl IndSetInstance {
    pub fn new(graph: Graph, query_vertex: u32, bound: Option<u32>) -> Result<IndSetInstance> {
        if query_vertex == 0 || query_vertex > graph.vertex_count() {
            return Err(Error::VariableOutOfUniverse {
                var: query_vertex,
                universe: graph.vertex_count(),
            });
        }
        if bound == Some(0) {
            return Err(Error::contract("independent-set bound must be positive"));
        }
        Ok(IndSetInstance {
            graph,
            query_vertex,
            bound,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn query_vertex(&self) -> u32 {
        self.query_vertex
    }

    pub fn bound(&self) -> Option<u32> {
        self.bound
    }
}

/// A constraint formula together with the queried atom.
#[derive(Clone, Debug)]
pub struct CspQuery {
    pub formula: ConstraintFormula,
    pub query_var: Variable,
}

impl CspQuery {
    pub fn new(formula: ConstraintFormula, query_var: Variable) -> Result<CspQuery> {
        if query_var.id() > formula.universe_size() {
            return Err(Error::VariableOutOfUniverse {
                var: query_var.id(),
                universe: formula.universe_size(),
            });
        }
        Ok(CspQuery { formula, query_var })
    }
}
