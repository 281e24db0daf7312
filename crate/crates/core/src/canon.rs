//! Canonical forms and isomorphism tests for small graphs.
//!
//! The canonical form is the lexicographically greatest adjacency encoding
//! over all vertex orderings, found by a backtracking search. The search
//! only branches over orderings that greedily maximize, position by
//! position, the pair (adjacency column to the placed prefix, vertex
//! invariant rank); any other ordering is lexicographically smaller and can
//! never win. Interchangeable twin vertices are expanded once.

use crate::graph::SimpleGraph;

/// Order-invariant encoding of a graph: equal iff the graphs are isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    n: usize,
    bits: Vec<u8>,
}

impl CanonicalForm {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bits
    }
}

/// Per-position search key: adjacency column to the placed prefix (earlier
/// positions in higher bits) plus the rank of a relabeling-invariant vertex
/// signature, used to narrow ties.
type Key = (u64, usize);

struct Search<'a> {
    g: &'a SimpleGraph,
    n: usize,
    rank: Vec<usize>,
    best: Option<Vec<Key>>,
}

impl<'a> Search<'a> {
    fn column_code(&self, v: usize, placed: &[usize]) -> u64 {
        let mut code = 0u64;
        for (p, &w) in placed.iter().enumerate() {
            if self.g.has_edge(v, w) {
                code |= 1 << (63 - p);
            }
        }
        code
    }

    fn dfs(&mut self, placed: &mut Vec<usize>, used: u64, keys: &mut Vec<Key>, ahead: bool) {
        let m = placed.len();
        if m == self.n {
            if ahead || self.best.is_none() {
                self.best = Some(keys.clone());
            }
            return;
        }
        let mut max_key = None;
        let mut ties: Vec<usize> = Vec::new();
        for v in 0..self.n {
            if used & (1 << v) != 0 {
                continue;
            }
            let key = (self.column_code(v, placed), self.rank[v]);
            match max_key {
                None => {
                    max_key = Some(key);
                    ties.push(v);
                }
                Some(best) if key > best => {
                    max_key = Some(key);
                    ties.clear();
                    ties.push(v);
                }
                Some(best) if key == best => ties.push(v),
                _ => {}
            }
        }
        let key = max_key.expect("at least one unplaced vertex");
        let mut ahead = ahead;
        if !ahead {
            if let Some(best) = &self.best {
                match key.cmp(&best[m]) {
                    std::cmp::Ordering::Less => return,
                    std::cmp::Ordering::Greater => ahead = true,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        // Twins (equal neighborhoods once each other is masked out) are
        // swapped by an automorphism fixing everything else: expand one.
        let mut reps: Vec<usize> = Vec::new();
        'next: for &v in &ties {
            for &w in &reps {
                let cut = !((1u64 << v) | (1u64 << w));
                if self.g.neighbor_mask(v) & cut == self.g.neighbor_mask(w) & cut {
                    continue 'next;
                }
            }
            reps.push(v);
        }
        for v in reps {
            placed.push(v);
            keys.push(key);
            self.dfs(placed, used | (1 << v), keys, ahead);
            placed.pop();
            keys.pop();
        }
    }
}

pub fn canonical_form(g: &SimpleGraph) -> CanonicalForm {
    let n = g.vertex_count();
    if n == 0 {
        return CanonicalForm { n, bits: Vec::new() };
    }
    // Vertex signature: (degree, sorted neighbor degrees), ranked within the
    // graph. Signatures are preserved by isomorphism, so ranks are too.
    let mut sigs: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).map(|w| g.degree(w)).collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect();
    let mut distinct = sigs.clone();
    distinct.sort();
    distinct.dedup();
    let rank: Vec<usize> = sigs
        .drain(..)
        .map(|s| distinct.binary_search(&s).expect("own signature"))
        .collect();

    let mut search = Search {
        g,
        n,
        rank,
        best: None,
    };
    search.dfs(&mut Vec::with_capacity(n), 0, &mut Vec::with_capacity(n), false);
    let keys = search.best.expect("search visits at least one leaf");

    // Pack the adjacency columns (m bits at depth m) into bytes.
    let mut bits = Vec::with_capacity(n * (n - 1) / 16 + 2);
    let mut acc = 0u8;
    let mut filled = 0;
    for (m, &(code, _)) in keys.iter().enumerate() {
        for p in 0..m {
            let bit = ((code >> (63 - p)) & 1) as u8;
            acc = (acc << 1) | bit;
            filled += 1;
            if filled == 8 {
                bits.push(acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        bits.push(acc << (8 - filled));
    }
    CanonicalForm { n, bits }
}

/// True iff the graphs are isomorphic.
pub fn are_isomorphic(g1: &SimpleGraph, g2: &SimpleGraph) -> bool {
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return false;
    }
    canonical_form(g1) == canonical_form(g2)
}
