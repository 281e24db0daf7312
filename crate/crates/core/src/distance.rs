//! d-clique adjacency graphs and d-distance matrices.
//!
//! Two d-cliques are adjacent when they lie in a common (d+1)-clique; the
//! d-distance is the shortest-path length in that adjacency graph, computed
//! by breadth-first search. For k-trees the matrix can equivalently be grown
//! one attachment at a time ([`extend_by_attachment`]), and both routes must
//! agree.

use std::collections::HashMap;
use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{enumerate_cliques, Clique, SimpleGraph};
use crate::ktree::{AttachmentStep, KTree};
use crate::linalg::IntMatrix;

/// Adjacency structure on the d-cliques of a graph.
#[derive(Debug, Clone)]
pub struct DCliqueGraph {
    d: usize,
    nodes: Vec<Clique>,
    neighbors: Vec<Vec<usize>>,
}

impl DCliqueGraph {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Clique] {
        &self.nodes
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.neighbors[i].contains(&j)
    }

    fn bfs(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.nodes.len()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.neighbors[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

/// Builds the d-clique graph; nodes are in lexicographic order. Multiple
/// shared (d+1)-cliques collapse to a single adjacency.
pub fn d_clique_graph(g: &SimpleGraph, d: usize) -> Result<DCliqueGraph> {
    let nodes = enumerate_cliques(g, d)?;
    let index: HashMap<u64, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.mask(), i))
        .collect();
    let mut adjacency = vec![vec![false; nodes.len()]; nodes.len()];
    if d < g.vertex_count() {
        for upper in enumerate_cliques(g, d + 1)? {
            let mask = upper.mask();
            let members: Vec<usize> = upper
                .members()
                .iter()
                .map(|v| index[&(mask & !(1 << v.index()))])
                .collect();
            for (a, &i) in members.iter().enumerate() {
                for &j in &members[a + 1..] {
                    adjacency[i][j] = true;
                    adjacency[j][i] = true;
                }
            }
        }
    }
    let neighbors = adjacency
        .into_iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter_map(|(j, &on)| on.then_some(j))
                .collect()
        })
        .collect();
    Ok(DCliqueGraph {
        d,
        nodes,
        neighbors,
    })
}

/// Square symmetric matrix of pairwise d-distances, indexed by the clique
/// list in `labels`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    matrix: IntMatrix,
    labels: Vec<Clique>,
}

impl DistanceMatrix {
    pub fn new(matrix: IntMatrix, labels: Vec<Clique>) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != labels.len() {
            return Err(Error::InvalidArgument(format!(
                "matrix is {}x{} but there are {} index labels",
                matrix.rows(),
                matrix.cols(),
                labels.len()
            )));
        }
        Ok(DistanceMatrix { matrix, labels })
    }

    pub fn order(&self) -> usize {
        self.matrix.rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        self.matrix.get(i, j)
    }

    pub fn labels(&self) -> &[Clique] {
        &self.labels
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.matrix
    }

    /// Reindexes so the labels appear exactly in `target` order.
    pub fn reorder_to(&self, target: &[Clique]) -> Result<DistanceMatrix> {
        if target.len() != self.labels.len() {
            return Err(Error::ContractViolation(
                "label lists have different lengths".into(),
            ));
        }
        let position: HashMap<&Clique, usize> =
            target.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut rho = Vec::with_capacity(self.labels.len());
        for c in &self.labels {
            match position.get(c) {
                Some(&p) => rho.push(p + 1),
                None => {
                    return Err(Error::ContractViolation(format!(
                        "clique {c} missing from target labels"
                    )))
                }
            }
        }
        permutation_conjugate(self, &rho)
    }
}

/// d-distance matrix of `g` by breadth-first search over the d-clique
/// graph; indexed lexicographically.
pub fn d_distance_matrix(g: &SimpleGraph, d: usize) -> Result<DistanceMatrix> {
    let cg = d_clique_graph(g, d)?;
    if cg.node_count() == 0 {
        return Err(Error::InvalidArgument(format!(
            "graph has no {d}-cliques"
        )));
    }
    let order = cg.node_count();
    let mut matrix = IntMatrix::zeros(order, order)?;
    for src in 0..order {
        for (dst, dist) in cg.bfs(src).into_iter().enumerate() {
            match dist {
                Some(len) => matrix.set(src, dst, BigInt::from(len)),
                None => return Err(Error::NotConnected { d }),
            }
        }
    }
    DistanceMatrix::new(matrix, cg.nodes)
}

/// Grows a k-distance matrix by one attachment through the clique labeled
/// `step`: the k new rows/columns copy column `step` plus one, and the new
/// diagonal block is all-ones-minus-identity.
pub fn extend_by_attachment(
    d: &DistanceMatrix,
    step: AttachmentStep,
    k: usize,
) -> Result<DistanceMatrix> {
    let i = step.target();
    let s = d.order();
    if i == 0 || i > s {
        return Err(Error::InvalidArgument(format!(
            "attachment target {i} out of range 1..={s}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let target = &d.labels[i - 1];
    if target.size() != k {
        return Err(Error::ContractViolation(format!(
            "index label {target} has size {} but k = {k}",
            target.size()
        )));
    }
    let new_vertex = 1 + d
        .labels
        .iter()
        .flat_map(|c| c.members())
        .map(|v| v.index())
        .max()
        .expect("labels are nonempty");

    let mut matrix = IntMatrix::zeros(s + k, s + k)?;
    for r in 0..s {
        for c in 0..s {
            matrix.set(r, c, d.entry(r, c).clone());
        }
    }
    for l in 0..k {
        for r in 0..s {
            let v = d.entry(r, i - 1) + BigInt::one();
            matrix.set(r, s + l, v.clone());
            matrix.set(s + l, r, v);
        }
        for m in 0..k {
            if m != l {
                matrix.set(s + l, s + m, BigInt::one());
            }
        }
    }

    let mut fresh: Vec<Clique> = target
        .members()
        .iter()
        .map(|&out| {
            let members: Vec<usize> = target
                .members()
                .iter()
                .map(|v| v.index())
                .filter(|&v| v != out.index())
                .chain(std::iter::once(new_vertex))
                .collect();
            Clique::new(&members).expect("swapped member lists are distinct")
        })
        .collect();
    fresh.sort();
    let mut labels = d.labels.clone();
    labels.extend(fresh);
    DistanceMatrix::new(matrix, labels)
}

/// k-distance matrix of a k-tree rebuilt from its trace, indexed by the
/// registry. Must agree entrywise with [`d_distance_matrix`] after
/// reindexing.
pub fn recursive_distance_matrix(t: &KTree) -> DistanceMatrix {
    let k = t.k();
    if t.vertex_count() == k {
        let matrix = IntMatrix::zeros(1, 1).expect("1x1");
        return DistanceMatrix::new(matrix, t.registry().to_vec()).expect("one label");
    }
    let base = KTree::base(k).expect("k >= 1");
    let matrix = IntMatrix::from_fn(k + 1, k + 1, |i, j| {
        if i == j {
            BigInt::zero()
        } else {
            BigInt::one()
        }
    })
    .expect("k+1 >= 2");
    let mut d =
        DistanceMatrix::new(matrix, base.registry().to_vec()).expect("registry matches order");
    for &step in t.trace() {
        d = extend_by_attachment(&d, step, k).expect("trace was already replayed by the k-tree");
    }
    debug_assert_eq!(d.labels(), t.registry());
    d
}

/// k-distance matrix of a k-tree by breadth-first search, indexed by the
/// registry instead of lexicographically.
pub fn registry_distance_matrix(t: &KTree) -> Result<DistanceMatrix> {
    d_distance_matrix(t.graph(), t.k())?.reorder_to(t.registry())
}

/// Conjugates by the permutation matrix of `rho` (1-based images): entry
/// (i, j) of the result is the (rho^-1(i), rho^-1(j)) entry of `d`.
pub fn permutation_conjugate(d: &DistanceMatrix, rho: &[usize]) -> Result<DistanceMatrix> {
    let s = d.order();
    if rho.len() != s {
        return Err(Error::InvalidArgument(format!(
            "permutation has length {} but the matrix has order {s}",
            rho.len()
        )));
    }
    let mut inverse = vec![usize::MAX; s];
    for (j, &image) in rho.iter().enumerate() {
        if image == 0 || image > s || inverse[image - 1] != usize::MAX {
            return Err(Error::InvalidArgument(format!(
                "not a bijection on 1..={s}: {rho:?}"
            )));
        }
        inverse[image - 1] = j;
    }
    let matrix = IntMatrix::from_fn(s, s, |i, j| d.entry(inverse[i], inverse[j]).clone())?;
    let labels = inverse.iter().map(|&j| d.labels[j].clone()).collect();
    DistanceMatrix::new(matrix, labels)
}
