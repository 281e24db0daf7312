//! Construction and enumeration of k-trees.
//!
//! A k-tree is grown from a complete graph by repeatedly joining a new
//! vertex to an existing k-clique. Every k-tree here carries an ordered
//! registry of its k-cliques (1-based labels) and the trace of attachment
//! choices that built it, so the object is reproducible from `(k, trace)`
//! alone.

use std::collections::BTreeMap;

use crate::canon::canonical_form;
use crate::error::{Error, Result};
use crate::graph::{enumerate_cliques, Clique, SimpleGraph};

/// One growth step: the 1-based registry label of the k-clique the new
/// vertex is joined to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AttachmentStep(pub usize);

impl AttachmentStep {
    pub fn target(self) -> usize {
        self.0
    }
}

/// A k-tree with its ordered k-clique registry and construction trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KTree {
    k: usize,
    graph: SimpleGraph,
    registry: Vec<Clique>,
    trace: Vec<AttachmentStep>,
}

impl KTree {
    /// The k-vertex k-tree: a single complete graph, registry of one clique.
    pub fn trivial(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        let members: Vec<usize> = (0..k).collect();
        Ok(KTree {
            k,
            graph: SimpleGraph::complete(k)?,
            registry: vec![Clique::new(&members)?],
            trace: Vec::new(),
        })
    }

    /// The unique k-tree on k+1 vertices, with all k+1 k-cliques registered
    /// in lexicographic order and an empty trace.
    pub fn base(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        let graph = SimpleGraph::complete(k + 1)?;
        let registry = enumerate_cliques(&graph, k)?;
        Ok(KTree {
            k,
            graph,
            registry,
            trace: Vec::new(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Ordered k-clique registry; label `i` (1-based) is `registry()[i-1]`.
    pub fn registry(&self) -> &[Clique] {
        &self.registry
    }

    pub fn registry_size(&self) -> usize {
        self.registry.len()
    }

    pub fn trace(&self) -> &[AttachmentStep] {
        &self.trace
    }

    /// Joins a new vertex to the clique labeled `step`, appending the k new
    /// k-cliques in lexicographic order of their member lists.
    pub fn attach(&self, step: AttachmentStep) -> Result<Self> {
        let i = step.target();
        if i == 0 || i > self.registry.len() {
            return Err(Error::InvalidArgument(format!(
                "attachment target {i} out of range 1..={}",
                self.registry.len()
            )));
        }
        let target = &self.registry[i - 1];
        let new_vertex = self.graph.vertex_count();
        let graph = self.graph.with_vertex_joined_to(target.members())?;
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
        let mut registry = self.registry.clone();
        registry.extend(fresh);
        let mut trace = self.trace.clone();
        trace.push(step);
        Ok(KTree {
            k: self.k,
            graph,
            registry,
            trace,
        })
    }

    /// Replays `steps` starting from the (k+1)-vertex base.
    pub fn from_trace(k: usize, steps: &[usize]) -> Result<Self> {
        let mut t = Self::base(k)?;
        for (pos, &i) in steps.iter().enumerate() {
            t = t.attach(AttachmentStep(i)).map_err(|_| {
                Error::InvalidArgument(format!(
                    "trace step {} (value {i}) out of range 1..={}",
                    pos + 1,
                    t.registry.len()
                ))
            })?;
        }
        Ok(t)
    }
}

/// k-tree recognition by reverse peeling: repeatedly remove a vertex of
/// degree exactly k whose neighborhood is a k-clique; accept iff the graph
/// shrinks to a complete graph on k vertices.
pub fn is_ktree(g: &SimpleGraph, k: usize) -> bool {
    if k == 0 {
        return false;
    }
    peel_verdict(g, k, |candidates| candidates[0])
}

/// Peeling core, parameterized over the choice among removable vertices.
/// The verdict does not depend on the choice.
fn peel_verdict(g: &SimpleGraph, k: usize, mut pick: impl FnMut(&[usize]) -> usize) -> bool {
    let n = g.vertex_count();
    if n < k {
        return false;
    }
    let mut alive: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let mut remaining = n;
    loop {
        if remaining == k {
            return g.is_clique_mask(alive);
        }
        let mut candidates = Vec::new();
        for v in 0..n {
            if alive & (1 << v) == 0 {
                continue;
            }
            let nbrs = g.neighbor_mask(v) & alive;
            if nbrs.count_ones() as usize == k && g.is_clique_mask(nbrs) {
                candidates.push(v);
            }
        }
        if candidates.is_empty() {
            return false;
        }
        let v = pick(&candidates);
        alive &= !(1 << v);
        remaining -= 1;
    }
}

/// One representative per isomorphism class of k-trees, for every order
/// n = k..=nmax; index 0 of the result holds the k-vertex base.
///
/// Generation is level by level: every clique of every representative of
/// order n-1 is attached to, and the resulting graphs are deduplicated by
/// canonical form. Representatives are returned sorted by canonical form.
pub fn generate_all(k: usize, nmax: usize) -> Result<Vec<Vec<KTree>>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if nmax < k {
        return Err(Error::InvalidArgument(format!(
            "nmax {nmax} is below the smallest k-tree order {k}"
        )));
    }
    let mut levels = vec![vec![KTree::trivial(k)?]];
    if nmax > k {
        levels.push(vec![KTree::base(k)?]);
    }
    for _ in (k + 2)..=nmax {
        let mut classes: BTreeMap<_, KTree> = BTreeMap::new();
        for parent in levels.last().unwrap() {
            for i in 1..=parent.registry_size() {
                let child = parent.attach(AttachmentStep(i))?;
                classes
                    .entry(canonical_form(child.graph()))
                    .or_insert(child);
            }
        }
        levels.push(classes.into_values().collect());
    }
    Ok(levels)
}
