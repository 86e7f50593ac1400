//! Maximum edge counts of C6-free graphs: exhaustive search at toy sizes
//! and the closed-form bounds used as caps at real sizes.
//!
//! The searches are branch-and-bound over edge slots in lexicographic
//! order, include branch first. Adding an edge {a, b} creates a 6-cycle
//! exactly when a path of five edges already joins a and b; once a slot is
//! blocked it stays blocked along the branch (edges only accumulate), so
//! the count of not-yet-blocked slots is a valid optimistic bound.

use crate::sixcycle::first_six_cycle;
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

/// Result of an exhaustive search: the maximum together with one witness.
#[derive(Debug, Clone, Serialize)]
pub struct ExSearch {
    pub max_edges: usize,
    /// Edge list of one maximum C6-free graph, lexicographically first.
    pub witness: Vec<(u64, u64)>,
    pub nodes_explored: u64,
}

/// True iff the graph contains no cycle on exactly six vertices.
pub fn is_c6_free(edges: &[(u64, u64)]) -> bool {
    let mut adj: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    first_six_cycle(&adj).is_none()
}

const GENERAL_CAP: u64 = 9;
const BIPARTITE_CAP: u64 = 5;

/// Maximum edges of a C6-free graph on n vertices, by exhaustive search.
/// Capped at n <= 9; larger n would take more than minutes.
pub fn brute_force_ex_c6(n: u64) -> Result<ExSearch> {
    if n > GENERAL_CAP {
        return Err(Error::BudgetExceeded(format!(
            "exhaustive C6-free search capped at {GENERAL_CAP} vertices, got {n}"
        )));
    }
    let n = n as usize;
    let mut slots = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            slots.push((a, b));
        }
    }
    Ok(search(n, &slots))
}

/// Maximum edges of a C6-free bipartite graph with sides u and v, by
/// exhaustive search. Capped at u, v <= 5. Witness vertices are numbered
/// 0..u on one side and u..u+v on the other.
pub fn brute_force_ex_c6_bipartite(u: u64, v: u64) -> Result<ExSearch> {
    if u == 0 || v == 0 {
        return Err(Error::InvalidArgument(
            "bipartite sides must be nonempty".into(),
        ));
    }
    if u > BIPARTITE_CAP || v > BIPARTITE_CAP {
        return Err(Error::BudgetExceeded(format!(
            "exhaustive bipartite search capped at {BIPARTITE_CAP} per side, got {u} x {v}"
        )));
    }
    let (u, v) = (u as usize, v as usize);
    let mut slots = Vec::new();
    for a in 0..u {
        for b in 0..v {
            slots.push((a, u + b));
        }
    }
    Ok(search(u + v, &slots))
}

struct Searcher<'a> {
    slots: &'a [(usize, usize)],
    adj: Vec<u16>,
    chosen: Vec<(usize, usize)>,
    best: Vec<(usize, usize)>,
    nodes: u64,
}

fn search(n: usize, slots: &[(usize, usize)]) -> ExSearch {
    debug_assert!(n <= 16, "bitmask adjacency rows are u16");
    let mut s = Searcher {
        slots,
        adj: vec![0u16; n],
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 0,
    };
    s.recurse(0, slots.len());
    ExSearch {
        max_edges: s.best.len(),
        witness: s.best.iter().map(|&(a, b)| (a as u64, b as u64)).collect(),
        nodes_explored: s.nodes,
    }
}

impl Searcher<'_> {
    // `open` counts slots at index >= idx not yet known to be blocked.
    fn recurse(&mut self, idx: usize, open: usize) {
        self.nodes += 1;
        if self.chosen.len() + open <= self.best.len() {
            return;
        }
        let Some(&(a, b)) = self.slots.get(idx) else {
            if self.chosen.len() > self.best.len() {
                self.best = self.chosen.clone();
            }
            return;
        };
        if self.would_close_c6(a, b) {
            self.recurse(idx + 1, open - 1);
            return;
        }
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
        self.chosen.push((a, b));
        self.recurse(idx + 1, open - 1);
        self.chosen.pop();
        self.adj[a] &= !(1 << b);
        self.adj[b] &= !(1 << a);
        self.recurse(idx + 1, open - 1);
    }

    /// Is there a simple path of exactly five edges from a to b?
    fn would_close_c6(&self, a: usize, b: usize) -> bool {
        self.path_search(a, b, 1u16 << a, 5)
    }

    fn path_search(&self, cur: usize, target: usize, visited: u16, left: u32) -> bool {
        if left == 1 {
            return self.adj[cur] & (1 << target) != 0;
        }
        let mut candidates = self.adj[cur] & !visited & !(1 << target);
        while candidates != 0 {
            let w = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            if self.path_search(w, target, visited | (1 << w), left - 1) {
                return true;
            }
        }
        false
    }
}

/// Balanced C6-free edge bounds for an n-vertex graph, as
/// (strong, weak) = (0.6272 * n^(4/3), n^(4/3)). The strong constant only
/// holds for large n and is never asserted against data.
pub fn bound_furedi_balanced(n: u64) -> (f64, f64) {
    let weak = (n as f64).powf(4.0 / 3.0);
    (0.6272 * weak, weak)
}

/// Bipartite C6-free edge bound 2^(1/3) * (u*v)^(2/3) + 16 * (u + v).
pub fn bound_furedi_unbalanced(u: u64, v: u64) -> f64 {
    let uv = (u as f64) * (v as f64);
    2f64.powf(1.0 / 3.0) * uv.powf(2.0 / 3.0) + 16.0 * (u + v) as f64
}

/// Bipartite C6-free edge bound 2u + v^2 / 2, valid for v <= u at every
/// size (not just asymptotically).
pub fn bound_gyori(u: u64, v: u64) -> Result<f64> {
    if v > u {
        return Err(Error::InvalidArgument(format!(
            "bound requires v <= u, got u = {u}, v = {v}"
        )));
    }
    Ok(2.0 * u as f64 + (v as f64).powi(2) / 2.0)
}
