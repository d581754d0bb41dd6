//! Finite labeled graphs (the defining data of a graph product) and the
//! graph-theoretic predicates the classification rules consume.

mod group;
mod parse;
mod separators;

use std::fmt;

pub use group::{AbstractGroup, FiniteGroup, GroupOrder, Tri, VertexGroup, MAX_ORDER};
pub use parse::{parse_graph, GraphDoc};
pub(crate) use separators::for_each_clique;
pub use separators::{
    enumerate_candidate_vc_separators, enumerate_vc_separators_exhaustive,
    enumerate_vc_separators_structured, has_vc_separator_shape, EXHAUSTIVE_BELOW,
    MAX_SEPARATOR_VERTICES,
};

use crate::error::{Error, Result};

/// Largest vertex count a [`LabeledGraph`] can hold (vertex sets are `u64` masks).
pub const MAX_VERTICES: usize = 64;

/// A set of vertices of a [`LabeledGraph`], always read as an induced subgraph.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(n: usize) -> Self {
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1 << v)
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        VertexSet(it.into_iter().fold(0, |m, v| m | (1 << v)))
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    #[inline]
    pub fn union(self, o: VertexSet) -> VertexSet {
        VertexSet(self.0 | o.0)
    }

    #[inline]
    pub fn intersection(self, o: VertexSet) -> VertexSet {
        VertexSet(self.0 & o.0)
    }

    #[inline]
    pub fn difference(self, o: VertexSet) -> VertexSet {
        VertexSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: VertexSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite simple graph with a vertex group on every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    labels: Vec<VertexGroup>,
    adj: Vec<VertexSet>,
}

impl LabeledGraph {
    /// Builds a graph, rejecting loops, repeated edges and out-of-range ids.
    pub fn new(labels: Vec<VertexGroup>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices(n, MAX_VERTICES));
        }
        for (v, l) in labels.iter().enumerate() {
            if l.order().is_some_and(|k| k < 2) {
                return Err(Error::TrivialGroup(v));
            }
        }
        let mut adj = vec![VertexSet::EMPTY; n];
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange(u));
            }
            if v >= n {
                return Err(Error::VertexOutOfRange(v));
            }
            if u == v {
                return Err(Error::Loop(u));
            }
            if adj[u].contains(v) {
                return Err(Error::MultiEdge(u.min(v), u.max(v)));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(LabeledGraph { labels, adj })
    }

    /// Same label on every vertex.
    pub fn uniform(n: usize, label: VertexGroup, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(vec![label; n], edges)
    }

    /// Cycle `0-1-...-(n-1)-0` with the given labels.
    pub fn cycle(labels: Vec<VertexGroup>) -> Result<Self> {
        let n = labels.len();
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(labels, &edges)
    }

    pub fn complete(labels: Vec<VertexGroup>) -> Result<Self> {
        let n = labels.len();
        let edges: Vec<_> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Self::new(labels, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    pub fn label(&self, v: usize) -> &VertexGroup {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[VertexGroup] {
        &self.labels
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    /// Sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.vertex_count())
            .flat_map(|u| {
                self.adj[u]
                    .iter()
                    .filter(move |&v| v > u)
                    .map(move |v| (u, v))
            })
            .collect()
    }

    pub fn all_finite(&self) -> bool {
        self.labels.iter().all(VertexGroup::is_finite)
    }

    /// First vertex whose label is not finite, if any.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.labels.iter().position(|l| !l.is_finite())
    }

    pub fn is_clique(&self, set: VertexSet) -> bool {
        set.iter().all(|v| {
            set.difference(VertexSet::singleton(v))
                .is_subset(self.adj[v])
        })
    }

    pub fn is_complete(&self) -> bool {
        self.is_clique(self.vertices())
    }

    /// Connected components of the subgraph induced on `within`, ordered by
    /// smallest vertex.
    pub fn components(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut rest = within;
        let mut out = Vec::new();
        while let Some(s) = rest.first() {
            let mut comp = VertexSet::singleton(s);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier.iter() {
                    next = next.union(self.adj[v]);
                }
                frontier = next.intersection(within).difference(comp);
                comp = comp.union(frontier);
            }
            rest = rest.difference(comp);
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components(self.vertices()).len() <= 1
    }

    /// True iff removing `set` leaves at least two components. `set` must be a
    /// proper subset of the vertices.
    pub fn is_separating(&self, set: VertexSet) -> Result<bool> {
        let all = self.vertices();
        if !set.is_subset(all) || set == all {
            return Err(Error::NotProperSubset);
        }
        Ok(self.components(all.difference(set)).len() >= 2)
    }

    /// Neighbours of `u`.
    pub fn link(&self, u: usize) -> VertexSet {
        self.adj[u]
    }

    /// `u` together with its neighbours.
    pub fn star(&self, u: usize) -> VertexSet {
        self.adj[u].union(VertexSet::singleton(u))
    }

    /// Vertices outside `set` adjacent to every vertex of `set`.
    pub fn link_of(&self, set: VertexSet) -> VertexSet {
        set.iter()
            .fold(self.vertices(), |acc, v| acc.intersection(self.adj[v]))
            .difference(set)
    }

    /// `set` together with [`Self::link_of`].
    pub fn star_of(&self, set: VertexSet) -> VertexSet {
        self.link_of(set).union(set)
    }

    /// An induced 4-cycle `[a, b, c, d]` (edges ab, bc, cd, da; no chords), if any.
    pub fn induced_square(&self) -> Option<[usize; 4]> {
        let n = self.vertex_count();
        for a in 0..n {
            for c in a + 1..n {
                if self.adjacent(a, c) {
                    continue;
                }
                let common = self.adj[a].intersection(self.adj[c]);
                for b in common.iter() {
                    let non_adj = common
                        .difference(self.adj[b])
                        .difference(VertexSet::singleton(b));
                    if let Some(d) = non_adj.iter().find(|&d| d > b) {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
        None
    }

    pub fn is_square_free(&self) -> bool {
        self.induced_square().is_none()
    }

    /// Splits the graph as `core * parts[0] * ... * parts[k]`: the parts are the
    /// complement components with at least two vertices, `core` collects the
    /// vertices isolated in the complement (a clique, possibly empty).
    pub fn join_decomposition(&self) -> JoinDecomposition {
        let n = self.vertex_count();
        let all = self.vertices();
        let mut core = VertexSet::EMPTY;
        let mut parts = Vec::new();
        let mut rest = all;
        while let Some(s) = rest.first() {
            let mut comp = VertexSet::singleton(s);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier.iter() {
                    let non_nbrs = all
                        .difference(self.adj[v])
                        .difference(VertexSet::singleton(v));
                    next = next.union(non_nbrs);
                }
                frontier = next.difference(comp);
                comp = comp.union(frontier);
            }
            rest = rest.difference(comp);
            if comp.len() == 1 {
                core = core.union(comp);
            } else {
                parts.push(comp);
            }
        }
        debug_assert!(
            n == 0 || core.union(parts.iter().fold(VertexSet::EMPTY, |a, &p| a.union(p))) == all
        );
        JoinDecomposition { core, parts }
    }

    /// True iff the induced subgraph on `set` is a single cycle.
    pub fn is_induced_cycle(&self, set: VertexSet) -> bool {
        set.len() >= 3
            && set.iter().all(|v| self.adj[v].intersection(set).len() == 2)
            && self.components(set).len() == 1
    }
}

/// Result of [`LabeledGraph::join_decomposition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinDecomposition {
    pub core: VertexSet,
    pub parts: Vec<VertexSet>,
}
