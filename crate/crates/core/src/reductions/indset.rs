//! Exact maximum-independent-set search by branch and bound over bitset
//! adjacency. This is the answer oracle for the graph-side of the
//! reduction chain; it never touches the SAT machinery.

use std::collections::BTreeSet;

use crate::logic::Graph;

const MAX_VERTICES: u32 = 128;

fn adjacency(g: &Graph) -> Vec<u128> {
    assert!(
        g.vertex_count() <= MAX_VERTICES,
        "independent-set oracle handles up to {MAX_VERTICES} vertices"
    );
    let mut adj = vec![0u128; g.vertex_count() as usize + 1];
    for &(u, v) in g.edges() {
        adj[u as usize] |= 1 << (v - 1);
        adj[v as usize] |= 1 << (u - 1);
    }
    adj
}

fn bit(v: u32) -> u128 {
    1u128 << (v - 1)
}

/// Size of the largest independent set within `avail`.
fn mis(avail: u128, adj: &[u128]) -> u32 {
    if avail == 0 {
        return 0;
    }
    // Degree-within-avail rules: isolated and degree-one vertices can
    // always be taken.
    let mut rest = avail;
    while rest != 0 {
        let v = rest.trailing_zeros() + 1;
        rest &= rest - 1;
        let neighbors = adj[v as usize] & avail;
        if neighbors == 0 {
            return 1 + mis(avail & !bit(v), adj);
        }
        if neighbors.count_ones() == 1 {
            return 1 + mis(avail & !bit(v) & !neighbors, adj);
        }
    }
    // Branch on a maximum-degree vertex.
    let mut pick = 0;
    let mut best_deg = 0;
    let mut scan = avail;
    while scan != 0 {
        let v = scan.trailing_zeros() + 1;
        scan &= scan - 1;
        let deg = (adj[v as usize] & avail).count_ones();
        if deg > best_deg {
            best_deg = deg;
            pick = v;
        }
    }
    let without = mis(avail & !bit(pick), adj);
    let with = 1 + mis(avail & !bit(pick) & !adj[pick as usize], adj);
    without.max(with)
}

pub fn max_independent_set_size(g: &Graph) -> u32 {
    let adj = adjacency(g);
    let avail = if g.vertex_count() == 128 {
        u128::MAX
    } else {
        (1u128 << g.vertex_count()) - 1
    };
    mis(avail, &adj)
}

/// Size of the largest independent set that contains `v`.
pub fn max_is_size_with_vertex(g: &Graph, v: u32) -> u32 {
    let adj = adjacency(g);
    let all = if g.vertex_count() == 128 {
        u128::MAX
    } else {
        (1u128 << g.vertex_count()) - 1
    };
    1 + mis(all & !bit(v) & !adj[v as usize], &adj)
}

/// Is `v` in some maximum independent set?
pub fn in_some_maximum_is(g: &Graph, v: u32) -> bool {
    max_is_size_with_vertex(g, v) == max_independent_set_size(g)
}

/// One maximum independent set, deterministically.
pub fn find_maximum_is(g: &Graph) -> BTreeSet<u32> {
    let adj = adjacency(g);
    let all = if g.vertex_count() == 128 {
        u128::MAX
    } else {
        (1u128 << g.vertex_count()) - 1
    };
    let mut chosen = BTreeSet::new();
    let mut avail = all;
    let mut target = mis(all, &adj);
    while target > 0 {
        // Greedily commit the lowest vertex that keeps the target
        // attainable.
        let mut scan = avail;
        loop {
            let v = scan.trailing_zeros() + 1;
            scan &= scan - 1;
            let next = avail & !bit(v) & !adj[v as usize];
            if 1 + mis(next, &adj) == target {
                chosen.insert(v);
                avail = next;
                target -= 1;
                break;
            }
        }
    }
    chosen
}
