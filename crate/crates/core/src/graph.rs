//! Undirected simple graphs on 0-based contiguous vertices, and clique
//! enumeration by exact size.
//!
//! Adjacency is stored as one bitmask per vertex, which caps graphs at
//! [`MAX_VERTICES`]; everything in this crate operates at desk scale.

use std::fmt;

use crate::error::{Error, Result};

/// Hard limit imposed by the bitmask adjacency representation.
pub const MAX_VERTICES: usize = 64;

/// Index of a vertex, contiguous `0..n` within its host graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Undirected simple graph: no loops, no multi-edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<u64>,
}

impl SimpleGraph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooLarge(format!(
                "graphs are limited to {MAX_VERTICES} vertices, got {n}"
            )));
        }
        Ok(SimpleGraph {
            n,
            adj: vec![0; n],
        })
    }

    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v)?;
            }
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidArgument(format!(
                "edge ({u},{v}) out of range for {} vertices",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidArgument(format!("self-loop at vertex {u}")));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] & (1 << v) != 0
    }

    /// Neighbor set of `v` as a bitmask.
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        BitIter(self.adj[v])
    }

    /// Edge list sorted with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in BitIter(self.adj[u]) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// True if all vertices in `mask` are pairwise adjacent.
    pub fn is_clique_mask(&self, mask: u64) -> bool {
        for v in BitIter(mask) {
            let rest = mask & !(1 << v);
            if self.adj[v] & rest != rest {
                return false;
            }
        }
        true
    }

    /// Copy of the graph with one extra vertex adjacent to exactly `anchors`.
    pub fn with_vertex_joined_to(&self, anchors: &[VertexId]) -> Result<Self> {
        let mut g = Self::empty(self.n + 1)?;
        g.adj[..self.n].copy_from_slice(&self.adj);
        for &a in anchors {
            g.add_edge(a.index(), self.n)?;
        }
        Ok(g)
    }

    /// Relabeled copy: vertex `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n || !is_permutation(perm) {
            return Err(Error::InvalidArgument(format!(
                "not a permutation of 0..{}",
                self.n
            )));
        }
        let mut g = Self::empty(self.n)?;
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v])?;
        }
        Ok(g)
    }
}

fn is_permutation(perm: &[usize]) -> bool {
    let n = perm.len();
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

/// Iterates set bit positions of a mask, ascending.
#[derive(Clone, Copy)]
pub(crate) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

/// Complete subgraph, kept as a strictly increasing member list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clique {
    members: Vec<VertexId>,
}

impl Clique {
    /// Builds a clique from vertex indices; rejects duplicates.
    pub fn new(members: &[usize]) -> Result<Self> {
        let mut sorted: Vec<usize> = members.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!(
                "duplicate vertex in clique {sorted:?}"
            )));
        }
        Ok(Clique {
            members: sorted.into_iter().map(VertexId).collect(),
        })
    }

    pub fn from_mask(mask: u64) -> Self {
        Clique {
            members: BitIter(mask).map(VertexId).collect(),
        }
    }

    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn mask(&self) -> u64 {
        self.members.iter().fold(0, |m, v| m | (1 << v.index()))
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.iter().any(|m| m.index() == v)
    }

    /// True if the members are pairwise adjacent in `g`.
    pub fn is_clique_in(&self, g: &SimpleGraph) -> bool {
        self.members.iter().all(|v| v.index() < g.vertex_count()) && g.is_clique_mask(self.mask())
    }

    /// Concatenated vertex ids, e.g. `{0,3}` prints as "03".
    pub fn label(&self) -> String {
        self.members.iter().map(|v| v.to_string()).collect()
    }
}

impl fmt::Display for Clique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// All cliques of size exactly `d`, in lexicographic order of member lists.
pub fn enumerate_cliques(g: &SimpleGraph, d: usize) -> Result<Vec<Clique>> {
    let n = g.vertex_count();
    if d == 0 || d > n {
        return Err(Error::InvalidArgument(format!(
            "clique size {d} out of range 1..={n}"
        )));
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(d);
    // Depth-first extension over ascending candidates yields lexicographic
    // order without a final sort.
    fn extend(
        g: &SimpleGraph,
        d: usize,
        current: &mut Vec<usize>,
        candidates: u64,
        out: &mut Vec<Clique>,
    ) {
        if current.len() == d {
            out.push(Clique::new(current).expect("members are distinct"));
            return;
        }
        if current.len() + (candidates.count_ones() as usize) < d {
            return;
        }
        for v in BitIter(candidates) {
            current.push(v);
            let higher = if v + 1 >= 64 { 0 } else { !0u64 << (v + 1) };
            extend(g, d, current, candidates & g.neighbor_mask(v) & higher, out);
            current.pop();
        }
    }
    let all = if n == 64 { !0u64 } else { (1u64 << n) - 1 };
    extend(g, d, &mut current, all, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        let mut r = 1usize;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r
    }

    /// 6-vertex 2-tree used as a worked example throughout the test suite:
    /// the triangles are 013, 034, 035 and 235.
    fn sample_2tree_6() -> SimpleGraph {
        SimpleGraph::new(
            6,
            &[
                (0, 1),
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 3),
                (2, 3),
                (2, 5),
                (3, 4),
                (3, 5),
            ],
        )
        .unwrap()
    }

    #[test]
    fn triangle_edges() {
        let g = SimpleGraph::complete(3).unwrap();
        let cliques = enumerate_cliques(&g, 2).unwrap();
        let got: Vec<_> = cliques.iter().map(Clique::label).collect();
        assert_eq!(got, ["01", "02", "12"]);
    }

    #[test]
    fn sample_2tree_two_cliques() {
        let g = sample_2tree_6();
        let cliques = enumerate_cliques(&g, 2).unwrap();
        let got: Vec<_> = cliques.iter().map(Clique::label).collect();
        assert_eq!(got, ["01", "03", "04", "05", "13", "23", "25", "34", "35"]);
    }

    #[test]
    fn sample_2tree_three_cliques() {
        let g = sample_2tree_6();
        let cliques = enumerate_cliques(&g, 3).unwrap();
        let got: Vec<_> = cliques.iter().map(Clique::label).collect();
        assert_eq!(got, ["013", "034", "035", "235"]);
    }

    #[test]
    fn clique_size_out_of_range() {
        let g = SimpleGraph::complete(3).unwrap();
        assert!(enumerate_cliques(&g, 0).is_err());
        assert!(enumerate_cliques(&g, 4).is_err());
    }

    #[test]
    fn complete_graph_counts_are_binomial() {
        for m in 1..=8 {
            let g = SimpleGraph::complete(m).unwrap();
            for d in 1..=m {
                assert_eq!(enumerate_cliques(&g, d).unwrap().len(), binomial(m, d));
            }
        }
    }

    #[test]
    fn cliques_sorted_and_valid() {
        let g = sample_2tree_6();
        for d in 1..=3 {
            let cliques = enumerate_cliques(&g, d).unwrap();
            for w in cliques.windows(2) {
                assert!(w[0] < w[1], "not strictly sorted: {} {}", w[0], w[1]);
            }
            for c in &cliques {
                assert!(c.is_clique_in(&g));
            }
        }
    }

    #[test]
    fn no_self_loops_or_range_errors() {
        let mut g = SimpleGraph::empty(3).unwrap();
        assert!(g.add_edge(0, 0).is_err());
        assert!(g.add_edge(0, 3).is_err());
    }

    #[test]
    fn permuted_preserves_edge_count() {
        let g = sample_2tree_6();
        let p = g.permuted(&[5, 4, 3, 2, 1, 0]).unwrap();
        assert_eq!(p.edge_count(), g.edge_count());
        assert!(p.has_edge(5, 4)); // image of (0,1)
    }
}
