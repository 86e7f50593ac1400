//! Lexicographically-first 6-cycle search on small simple graphs.
//!
//! Shared by the product-graph hexagon finder and the C6-free predicate.
//! Vertices of degree < 2 cannot lie on a cycle, so the graph is peeled to
//! its 2-core first; the DFS then tries start vertices in ascending order
//! and extends paths through ascending neighbors greater than the start,
//! which makes the returned cycle a deterministic function of the graph.

use std::collections::BTreeMap;

/// Returns the first 6-cycle (six distinct vertices, in cycle order,
/// starting at the smallest) found in canonical order, or None.
///
/// `adj` must be symmetric; neighbor lists need not be sorted or deduped.
pub fn first_six_cycle(adj: &BTreeMap<u64, Vec<u64>>) -> Option<[u64; 6]> {
    let core = two_core(adj);
    if core.len() < 6 {
        return None;
    }
    let mut path = [0u64; 6];
    for (&start, _) in core.iter() {
        path[0] = start;
        if extend(&core, &mut path, 1) {
            return Some(path);
        }
    }
    None
}

fn extend(core: &BTreeMap<u64, Vec<u64>>, path: &mut [u64; 6], depth: usize) -> bool {
    let last = path[depth - 1];
    let start = path[0];
    if depth == 6 {
        return core[&last].binary_search(&start).is_ok();
    }
    for &w in &core[&last] {
        // Internal vertices stay above the start so each cycle is
        // attempted exactly where its minimum vertex is.
        if w <= start || path[..depth].contains(&w) {
            continue;
        }
        path[depth] = w;
        if extend(core, path, depth + 1) {
            return true;
        }
    }
    false
}

fn two_core(adj: &BTreeMap<u64, Vec<u64>>) -> BTreeMap<u64, Vec<u64>> {
    let mut core: BTreeMap<u64, Vec<u64>> = adj
        .iter()
        .map(|(&v, ns)| {
            let mut ns: Vec<u64> = ns.iter().copied().filter(|&w| w != v).collect();
            ns.sort_unstable();
            ns.dedup();
            (v, ns)
        })
        .collect();
    loop {
        let dead: Vec<u64> = core
            .iter()
            .filter(|(_, ns)| ns.len() < 2)
            .map(|(&v, _)| v)
            .collect();
        if dead.is_empty() {
            return core;
        }
        for v in &dead {
            core.remove(v);
        }
        for ns in core.values_mut() {
            ns.retain(|w| !dead.contains(w));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(edges: &[(u64, u64)]) -> BTreeMap<u64, Vec<u64>> {
        let mut adj: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &(a, b) in edges {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        adj
    }

    #[test]
    fn finds_plain_hexagon() {
        let adj = graph(&[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)]);
        assert_eq!(first_six_cycle(&adj), Some([1, 2, 3, 4, 5, 6]));
    }

    #[test]
    fn ignores_shorter_and_longer_cycles() {
        let c5 = graph(&[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]);
        assert_eq!(first_six_cycle(&c5), None);
        let c7 = graph(&[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 1)]);
        assert_eq!(first_six_cycle(&c7), None);
        // K5 has cycles of length 3..5 only.
        let mut k5 = Vec::new();
        for a in 1..=5u64 {
            for b in (a + 1)..=5 {
                k5.push((a, b));
            }
        }
        assert_eq!(first_six_cycle(&graph(&k5)), None);
    }

    #[test]
    fn finds_hexagon_behind_pendants() {
        // Hexagon 10..15 with degree-1 decorations that the peel removes.
        let adj = graph(&[
            (10, 11),
            (11, 12),
            (12, 13),
            (13, 14),
            (14, 15),
            (15, 10),
            (1, 10),
            (2, 11),
            (3, 3000),
        ]);
        assert_eq!(first_six_cycle(&adj), Some([10, 11, 12, 13, 14, 15]));
    }

    #[test]
    fn c7_with_chord_contains_c6() {
        // Chord (1, 3) shortcuts the 7-cycle to a 6-cycle avoiding vertex 2.
        let adj = graph(&[
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (6, 7),
            (7, 1),
            (1, 3),
        ]);
        assert_eq!(first_six_cycle(&adj), Some([1, 3, 4, 5, 6, 7]));
    }

    #[test]
    fn picks_lexicographically_first_cycle() {
        // Two disjoint hexagons; the one with smaller vertices wins.
        let adj = graph(&[
            (21, 22),
            (22, 23),
            (23, 24),
            (24, 25),
            (25, 26),
            (26, 21),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (6, 1),
        ]);
        assert_eq!(first_six_cycle(&adj), Some([1, 2, 3, 4, 5, 6]));
    }
}
