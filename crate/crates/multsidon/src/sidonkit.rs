//! Verifiers and builders for multiplicative Sidon-type sets.
//!
//! A set is multiplicatively k-Sidon when no 2k pairwise distinct elements
//! split into two k-tuples with equal products. This module checks that
//! property directly ([`verify_k_sidon`]), checks the related
//! no-square-product property ([`verify_square_free_products`]), and builds
//! sets: an exhaustive branch-and-bound maximiser, a greedy pass, and the
//! primes-plus-doubled-primes construction.

use crate::arith::FactorSieve;
use crate::{Error, Result};
use serde::Serialize;
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

/// Largest tuple length accepted by the subset-product verifiers. The work
/// grows as C(|A|, k), so anything past this is out of reach anyway.
const MAX_TUPLE_LEN: usize = 8;

/// A witnessed failure of the k-Sidon property: two disjoint k-element
/// subsets with the same product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Elements of the first subset, ascending.
    pub lhs: Vec<u64>,
    /// Elements of the second subset, ascending.
    pub rhs: Vec<u64>,
    /// The common product of both sides.
    pub product: u128,
}

fn normalize_set(a: &[u64]) -> Result<Vec<u64>> {
    let mut set = a.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.first() == Some(&0) {
        return Err(Error::InvalidArgument("set elements must be positive".into()));
    }
    if set.len() > u16::MAX as usize {
        return Err(Error::InvalidArgument(format!(
            "set has {} elements, the verifiers support at most {}",
            set.len(),
            u16::MAX
        )));
    }
    Ok(set)
}

fn check_tuple_len(k: usize) -> Result<()> {
    if !(2..=MAX_TUPLE_LEN).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "tuple length must be between 2 and {MAX_TUPLE_LEN}, got {k}"
        )));
    }
    Ok(())
}

/// Guard against `u128` overflow when multiplying `k` elements of `set`.
fn check_product_width(set: &[u64], k: usize) -> Result<()> {
    let max = set.last().copied().unwrap_or(1).max(1);
    let bits = 64 - max.leading_zeros() as usize;
    if bits * k > 126 {
        return Err(Error::InvalidArgument(format!(
            "products of {k} elements up to {max} may overflow 128 bits"
        )));
    }
    Ok(())
}

/// Visit every k-element index subset of `0..len` in lexicographic order.
fn for_each_k_subset<F: FnMut(&[u16])>(len: usize, k: usize, mut visit: F) {
    if k > len {
        return;
    }
    let mut idx: Vec<u16> = (0..k as u16).collect();
    loop {
        visit(&idx);
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if (idx[i] as usize) < len - (k - i) {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn indices_disjoint(a: &[u16], b: &[u16]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

fn values_of(set: &[u64], idx: &[u16]) -> Vec<u64> {
    idx.iter().map(|&i| set[i as usize]).collect()
}

/// Scan keyed k-subsets for a disjoint pair with equal keys and return the
/// lexicographically smallest such pair (compared by lhs values, then rhs).
///
/// `entries` must be sorted by key with ties in subset-generation order,
/// which is lexicographic on indices and hence on values.
fn smallest_disjoint_pair(
    set: &[u64],
    entries: &[(u128, Vec<u16>)],
) -> Option<(Vec<u64>, Vec<u64>, u128)> {
    let mut best: Option<(Vec<u64>, Vec<u64>, u128)> = None;
    let mut start = 0;
    while start < entries.len() {
        let key = entries[start].0;
        let mut end = start + 1;
        while end < entries.len() && entries[end].0 == key {
            end += 1;
        }
        for i in start..end {
            for j in i + 1..end {
                if !indices_disjoint(&entries[i].1, &entries[j].1) {
                    continue;
                }
                let lhs = values_of(set, &entries[i].1);
                let rhs = values_of(set, &entries[j].1);
                let better = match &best {
                    None => true,
                    Some((bl, br, _)) => (&lhs, &rhs) < (&(bl.clone()), &(br.clone())),
                };
                if better {
                    best = Some((lhs, rhs, key));
                }
            }
        }
        start = end;
    }
    best
}

/// Check whether `a` is multiplicatively k-Sidon.
///
/// Returns `Ok(None)` when no violation exists, otherwise the canonical
/// (lexicographically smallest) violation. Duplicate input elements are
/// collapsed first; the property concerns the underlying set.
pub fn verify_k_sidon(a: &[u64], k: usize) -> Result<Option<Violation>> {
    check_tuple_len(k)?;
    let set = normalize_set(a)?;
    if set.len() < 2 * k {
        return Ok(None);
    }
    check_product_width(&set, k)?;
    let mut entries: Vec<(u128, Vec<u16>)> = Vec::new();
    for_each_k_subset(set.len(), k, |idx| {
        let p: u128 = idx.iter().map(|&i| set[i as usize] as u128).product();
        entries.push((p, idx.to_vec()));
    });
    // Stable sort keeps generation (lexicographic) order within key groups.
    entries.sort_by_key(|e| e.0);
    Ok(smallest_disjoint_pair(&set, &entries)
        .map(|(lhs, rhs, product)| Violation { lhs, rhs, product }))
}

/// Check that no `count` pairwise distinct elements of `a` multiply to a
/// perfect square. `count` must be even; on failure the witness subset (its
/// `count` elements, ascending) is returned.
///
/// A product of 2k distinct elements is a square exactly when the elements
/// split into two k-subsets whose squarefree kernels merge to the same
/// value, so the scan works on kernels of k-subsets rather than on full
/// 2k-subsets.
pub fn verify_square_free_products(
    a: &[u64],
    count: usize,
    sieve: &FactorSieve,
) -> Result<Option<Vec<u64>>> {
    if count % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "subset size must be even, got {count}"
        )));
    }
    let k = count / 2;
    check_tuple_len(k)?;
    let set = normalize_set(a)?;
    if set.len() < count {
        return Ok(None);
    }
    check_product_width(&set, k)?;
    let kernels: Vec<u128> = set
        .iter()
        .map(|&m| sieve.squarefree_kernel(m).map(|v| v as u128))
        .collect::<Result<_>>()?;
    let mut entries: Vec<(u128, Vec<u16>)> = Vec::new();
    for_each_k_subset(set.len(), k, |idx| {
        let mut kernel = 1u128;
        for &i in idx {
            kernel = crate::arith::merge_kernels(kernel, kernels[i as usize]);
        }
        entries.push((kernel, idx.to_vec()));
    });
    entries.sort_by_key(|e| e.0);
    Ok(smallest_disjoint_pair(&set, &entries).map(|(lhs, rhs, _)| {
        let mut witness = lhs;
        witness.extend(rhs);
        witness.sort_unstable();
        witness
    }))
}

/// Outcome of [`exact_max_3sidon`].
#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    /// Ground-set bound: the search ran over {1, ..., n}.
    pub n: u64,
    /// The best set found, ascending.
    pub set: Vec<u64>,
    /// Size of `set`.
    pub size: usize,
    /// True when the search space was exhausted, so `set` is a maximum.
    pub optimal: bool,
    /// Number of search-tree nodes visited.
    pub nodes_explored: u64,
    /// True when the node budget stopped the search early.
    pub budget_hit: bool,
}

/// Map from a triple product to the triples of the current set having it.
///
/// Dense (indexed by product) for small ground sets, hashed otherwise.
enum ProductMap {
    Dense(Vec<Vec<[u32; 3]>>),
    Sparse(HashMap<u64, Vec<[u32; 3]>>),
}

impl ProductMap {
    fn new(n: u64) -> Self {
        if n <= 64 {
            ProductMap::Dense(vec![Vec::new(); (n * n * n + 1) as usize])
        } else {
            ProductMap::Sparse(HashMap::new())
        }
    }

    fn triples(&self, p: u64) -> &[[u32; 3]] {
        match self {
            ProductMap::Dense(v) => &v[p as usize],
            ProductMap::Sparse(m) => m.get(&p).map_or(&[], |v| v.as_slice()),
        }
    }

    fn push(&mut self, p: u64, t: [u32; 3]) {
        match self {
            ProductMap::Dense(v) => v[p as usize].push(t),
            ProductMap::Sparse(m) => m.entry(p).or_default().push(t),
        }
    }

    fn pop(&mut self, p: u64) {
        match self {
            ProductMap::Dense(v) => {
                v[p as usize].pop();
            }
            ProductMap::Sparse(m) => {
                if let Some(v) = m.get_mut(&p) {
                    v.pop();
                    if v.is_empty() {
                        m.remove(&p);
                    }
                }
            }
        }
    }
}

/// Incrementally maintained 3-Sidon state: the chosen set plus an index of
/// its triples keyed by product, supporting O(|set|^2) conflict checks.
struct TripleIndex {
    set: Vec<u64>,
    map: ProductMap,
}

impl TripleIndex {
    fn new(n: u64) -> Self {
        TripleIndex { set: Vec::new(), map: ProductMap::new(n) }
    }

    /// Would adding `m` create two disjoint equal-product triples? Checks
    /// every triple (m, a, b) with a, b already in the set against stored
    /// triples with the same product; m itself is new, so disjointness
    /// reduces to avoiding a and b.
    fn conflicts(&self, m: u64) -> bool {
        for (i, &a) in self.set.iter().enumerate() {
            for &b in &self.set[i + 1..] {
                let p = m * a * b;
                for t in self.map.triples(p) {
                    let a32 = a as u32;
                    let b32 = b as u32;
                    if !t.contains(&a32) && !t.contains(&b32) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn push(&mut self, m: u64) {
        for (i, &a) in self.set.iter().enumerate() {
            for &b in &self.set[i + 1..] {
                self.map.push(m * a * b, [a as u32, b as u32, m as u32]);
            }
        }
        self.set.push(m);
    }

    fn pop(&mut self) {
        let m = self.set.pop().expect("pop on empty set");
        for (i, &a) in self.set.iter().enumerate() {
            for &b in &self.set[i + 1..] {
                self.map.pop(m * a * b);
            }
        }
    }
}

fn check_ground_set(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("ground set must be nonempty".into()));
    }
    // Keep m * a * b inside u64 with headroom.
    if n > 2_000_000 {
        return Err(Error::OutOfRange { what: "ground set bound", value: n, limit: 2_000_000 });
    }
    Ok(())
}

/// Exhaustive search for a maximum multiplicative 3-Sidon subset of
/// {1, ..., n} by include-first branch and bound over ascending elements.
///
/// The first maximum encountered — and therefore the reported witness — is
/// the lexicographically smallest one. `budget` caps the number of visited
/// nodes; when it is hit the best set so far is returned with
/// `optimal = false`.
pub fn exact_max_3sidon(n: u64, budget: Option<u64>) -> Result<SearchResult> {
    check_ground_set(n)?;
    let budget = budget.unwrap_or(u64::MAX);
    let mut state = TripleIndex::new(n);
    let mut best: Vec<u64> = Vec::new();
    let mut nodes: u64 = 0;
    let mut budget_hit = false;

    fn recurse(
        m: u64,
        n: u64,
        state: &mut TripleIndex,
        best: &mut Vec<u64>,
        nodes: &mut u64,
        budget: u64,
        budget_hit: &mut bool,
    ) {
        if *budget_hit {
            return;
        }
        *nodes += 1;
        if *nodes >= budget {
            *budget_hit = true;
        }
        if m > n {
            if state.set.len() > best.len() {
                *best = state.set.clone();
            }
            return;
        }
        // Even taking every remaining element cannot beat the best.
        if state.set.len() + (n - m + 1) as usize <= best.len() {
            return;
        }
        if *budget_hit {
            return;
        }
        if !state.conflicts(m) {
            state.push(m);
            recurse(m + 1, n, state, best, nodes, budget, budget_hit);
            state.pop();
        }
        recurse(m + 1, n, state, best, nodes, budget, budget_hit);
    }

    recurse(1, n, &mut state, &mut best, &mut nodes, budget, &mut budget_hit);
    let size = best.len();
    Ok(SearchResult { n, set: best, size, optimal: !budget_hit, nodes_explored: nodes, budget_hit })
}

/// Greedy multiplicative 3-Sidon subset of {1, ..., n}: scan 1, 2, ..., n
/// and keep each element that creates no violation with the kept set.
///
/// Memory grows with the cube of the kept-set size, so this is intended for
/// n up to a few hundred.
pub fn greedy_3sidon(n: u64) -> Result<Vec<u64>> {
    check_ground_set(n)?;
    let mut state = TripleIndex::new(n);
    for m in 1..=n {
        if !state.conflicts(m) {
            state.push(m);
        }
    }
    Ok(state.set)
}

/// The primes-plus-doubled-primes set: {p ≤ n : p prime} ∪ {2p ≤ n : p
/// prime}, of size π(n) + π(n/2). Every element has at most two prime
/// factors, which keeps triple products from colliding.
pub fn base_construction(n: u64, sieve: &FactorSieve) -> Result<Vec<u64>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "construction needs n >= 2, got {n}"
        )));
    }
    if n > sieve.limit() {
        return Err(Error::OutOfRange { what: "construction bound", value: n, limit: sieve.limit() });
    }
    let mut set: Vec<u64> = sieve.primes_upto(n)?.collect();
    set.extend(sieve.primes_upto(n / 2)?.map(|p| 2 * p));
    set.sort_unstable();
    debug_assert_eq!(
        set.len() as u64,
        sieve.prime_pi(n).unwrap() + sieve.prime_pi(n / 2).unwrap()
    );
    Ok(set)
}

/// Read a set from a text file: one decimal integer per line, `#` starts a
/// comment, blank lines are ignored. The result is sorted and deduplicated.
pub fn read_set_file(path: &Path) -> Result<Vec<u64>> {
    let file = File::open(path)?;
    let mut set = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let value: u64 = body.parse().map_err(|_| {
            Error::Parse(format!("{}:{}: not a positive integer: {body:?}", path.display(), lineno + 1))
        })?;
        if value == 0 {
            return Err(Error::Parse(format!(
                "{}:{}: set elements must be positive",
                path.display(),
                lineno + 1
            )));
        }
        set.push(value);
    }
    set.sort_unstable();
    set.dedup();
    Ok(set)
}

/// Write a set as newline-delimited decimal integers.
pub fn write_set_file(path: &Path, set: &[u64]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for &m in set {
        writeln!(out, "{m}")?;
    }
    out.flush()?;
    Ok(())
}
