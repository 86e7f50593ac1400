//! Product-graph encoding of integer sets.
//!
//! Each element a of a set A within {1..n} becomes the edge {u, v} of its
//! minimal-v split a = u * v. Vertices are the integers up to n^(2/3)
//! together with the primes above n^(2/3); distinct elements always get
//! distinct edges because an edge's endpoint product is its label. Elements
//! whose split has u = v (necessarily perfect squares) cannot form an edge
//! and are set aside.
//!
//! The payoff is structural: a hexagon x1..x6 in this graph spells out the
//! six elements x1*x2, x2*x3, ..., x6*x1, and the alternating triples have
//! equal products. So a 6-cycle certifies the set is not multiplicative
//! 3-Sidon, and conversely a 3-Sidon set always produces a C6-free graph.

use crate::arith::FactorSieve;
use crate::decompose::{min_v_decompose, SplitCase};
use crate::sixcycle::first_six_cycle;
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

/// One element's edge: endpoints keep their split roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LabeledEdge {
    pub element: u64,
    pub u: u64,
    pub v: u64,
    pub case: SplitCase,
}

/// Product graph of a set. Construction is the only way to obtain one, so
/// every edge is a valid minimal-v split with u != v.
pub struct EdgeGraph {
    n: u64,
    floor_n23: u64,
    full_vertex_count: u64,
    edges: Vec<LabeledEdge>,
    adjacency: BTreeMap<u64, Vec<(u64, u64)>>,
    labels: BTreeMap<(u64, u64), u64>,
    skipped_squares: Vec<u64>,
}

/// A 6-cycle in an [`EdgeGraph`]: vertices in cycle order starting at the
/// smallest, with the element labeling each consecutive edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Hexagon {
    pub vertices: [u64; 6],
    pub labels: [u64; 6],
}

/// The violating triple pair a hexagon encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HexagonSolution {
    pub lhs: [u64; 3],
    pub rhs: [u64; 3],
    pub product: u128,
}

/// Largest integer t with t^3 <= n^2, i.e. floor(n^(2/3)), computed exactly.
pub fn floor_two_thirds(n: u64) -> u64 {
    let n2 = (n as u128).pow(2);
    let mut t = (n as f64).powf(2.0 / 3.0) as u64;
    while ((t + 1) as u128).pow(3) <= n2 {
        t += 1;
    }
    while t > 0 && (t as u128).pow(3) > n2 {
        t -= 1;
    }
    t
}

impl EdgeGraph {
    /// Builds the product graph of `a` relative to `n`. Input is treated
    /// as a set: duplicates collapse. Elements must lie in 1..=n.
    pub fn build(a: &[u64], n: u64, sieve: &FactorSieve) -> Result<EdgeGraph> {
        if n < 1 || n > sieve.limit() {
            return Err(Error::OutOfRange {
                what: "graph bound n",
                value: n,
                limit: sieve.limit(),
            });
        }
        let mut elements: Vec<u64> = a.to_vec();
        elements.sort_unstable();
        elements.dedup();
        if let Some(&bad) = elements.iter().find(|&&x| x < 1 || x > n) {
            return Err(Error::OutOfRange {
                what: "set element",
                value: bad,
                limit: n,
            });
        }

        let mut edges = Vec::new();
        let mut adjacency: BTreeMap<u64, Vec<(u64, u64)>> = BTreeMap::new();
        let mut labels = BTreeMap::new();
        let mut skipped_squares = Vec::new();
        for &element in &elements {
            let d = min_v_decompose(element, n, sieve)?;
            if d.u == d.v {
                skipped_squares.push(element);
                continue;
            }
            edges.push(LabeledEdge {
                element,
                u: d.u,
                v: d.v,
                case: d.case,
            });
            adjacency.entry(d.u).or_default().push((d.v, element));
            adjacency.entry(d.v).or_default().push((d.u, element));
            labels.insert((d.u.min(d.v), d.u.max(d.v)), element);
        }
        for list in adjacency.values_mut() {
            list.sort_unstable();
        }

        let floor_n23 = floor_two_thirds(n);
        let full_vertex_count = sieve.prime_pi(n)? + floor_n23 - sieve.prime_pi(floor_n23)?;
        Ok(EdgeGraph {
            n,
            floor_n23,
            full_vertex_count,
            edges,
            adjacency,
            labels,
            skipped_squares,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Edges in increasing element order.
    pub fn edges(&self) -> &[LabeledEdge] {
        &self.edges
    }

    /// Elements set aside because their split collapsed to u = v.
    pub fn skipped_squares(&self) -> &[u64] {
        &self.skipped_squares
    }

    /// Size of the whole vertex set {1..floor(n^(2/3))} plus primes above
    /// floor(n^(2/3)) up to n, isolated vertices included.
    pub fn full_vertex_count(&self) -> u64 {
        self.full_vertex_count
    }

    /// Vertices that carry at least one edge.
    pub fn incident_vertex_count(&self) -> u64 {
        self.adjacency.len() as u64
    }

    /// Vertices of the full set that carry no edge.
    pub fn isolated_vertex_count(&self) -> u64 {
        self.full_vertex_count - self.incident_vertex_count()
    }

    pub fn floor_n23(&self) -> u64 {
        self.floor_n23
    }

    /// Element labeling the edge {a, b}, if present.
    pub fn label(&self, a: u64, b: u64) -> Option<u64> {
        self.labels.get(&(a.min(b), a.max(b))).copied()
    }

    /// First 6-cycle in canonical order (ascending start vertex, ascending
    /// neighbors), or None when the graph is C6-free.
    pub fn find_hexagon(&self) -> Option<Hexagon> {
        let plain: BTreeMap<u64, Vec<u64>> = self
            .adjacency
            .iter()
            .map(|(&v, ns)| (v, ns.iter().map(|&(w, _)| w).collect()))
            .collect();
        let cycle = first_six_cycle(&plain)?;
        Some(Hexagon::from_cycle(self, &cycle).expect("cycle returned by search must be valid"))
    }

    /// Line-oriented export, one edge per line as `u v element`, sorted
    /// ascending. Endpoints keep their split roles.
    pub fn export(&self) -> String {
        let mut rows: Vec<(u64, u64, u64)> =
            self.edges.iter().map(|e| (e.u, e.v, e.element)).collect();
        rows.sort_unstable();
        let mut out = String::new();
        for (u, v, element) in rows {
            out.push_str(&format!("{u} {v} {element}\n"));
        }
        out
    }
}

impl Hexagon {
    /// Validates a cycle: exactly six distinct vertices, each consecutive
    /// pair (wrapping) an edge of the graph.
    pub fn from_cycle(g: &EdgeGraph, cycle: &[u64]) -> Result<Hexagon> {
        if cycle.len() != 6 {
            return Err(Error::InvalidArgument(format!(
                "hexagon needs exactly 6 vertices, got {}",
                cycle.len()
            )));
        }
        let mut sorted = cycle.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != 6 {
            return Err(Error::InvalidArgument(
                "hexagon vertices must be pairwise distinct".into(),
            ));
        }
        let mut vertices = [0u64; 6];
        vertices.copy_from_slice(cycle);
        let mut labels = [0u64; 6];
        for i in 0..6 {
            let a = vertices[i];
            let b = vertices[(i + 1) % 6];
            labels[i] = g.label(a, b).ok_or_else(|| {
                Error::InvalidArgument(format!("cycle step {a}-{b} is not an edge"))
            })?;
        }
        Ok(Hexagon { vertices, labels })
    }
}

/// Reads the violating triple pair off a hexagon: alternating edges around
/// the cycle. Both triples multiply to the product of all six vertices, so
/// the products are equal by construction.
pub fn hexagon_to_solution(h: &Hexagon) -> HexagonSolution {
    let lhs = [h.labels[0], h.labels[2], h.labels[4]];
    let rhs = [h.labels[1], h.labels[3], h.labels[5]];
    let product = lhs.iter().map(|&x| x as u128).product();
    debug_assert_eq!(product, rhs.iter().map(|&x| x as u128).product::<u128>());
    HexagonSolution { lhs, rhs, product }
}
