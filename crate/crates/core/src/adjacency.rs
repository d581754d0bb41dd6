//! Compact undirected graphs (CSR) used by the Cayley and cut modules.

use std::collections::VecDeque;

/// Marks unreachable vertices in BFS output.
pub const UNREACHED: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AdjGraph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl AdjGraph {
    /// Symmetric graph from an edge list; loops and repeated edges dropped.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut lists = vec![Vec::new(); n];
        for &(u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range");
            if u != v {
                lists[u].push(v as u32);
                lists[v].push(u as u32);
            }
        }
        for l in &mut lists {
            l.sort_unstable();
            l.dedup();
        }
        Self::from_lists(lists)
    }

    /// Trusts the lists to be symmetric and loop-free.
    pub fn from_lists(lists: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        for l in lists {
            targets.extend_from_slice(&l);
            offsets.push(targets.len());
        }
        AdjGraph { offsets, targets }
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::from_edges(n, &edges)
    }

    pub fn len(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).contains(&(v as u32))
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|u| {
                self.neighbors(u)
                    .iter()
                    .map(|&v| v as usize)
                    .filter(move |&v| v > u)
                    .map(move |v| (u, v))
            })
            .collect()
    }

    /// Multi-source BFS avoiding `blocked` vertices.
    pub fn bfs(&self, sources: &[usize], blocked: Option<&[bool]>) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if blocked.is_some_and(|b| b[s]) || dist[s] == 0 {
                continue;
            }
            dist[s] = 0;
            queue.push_back(s);
        }
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                let v = v as usize;
                if dist[v] == UNREACHED && !blocked.is_some_and(|b| b[v]) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Component label per vertex (`UNREACHED` for removed vertices) and the
    /// size of each component.
    pub fn components(&self, removed: &[bool]) -> (Vec<u32>, Vec<usize>) {
        let n = self.len();
        let mut label = vec![UNREACHED; n];
        let mut sizes = Vec::new();
        let mut stack = Vec::new();
        for s in 0..n {
            if removed[s] || label[s] != UNREACHED {
                continue;
            }
            let c = sizes.len() as u32;
            label[s] = c;
            stack.push(s);
            let mut size = 0;
            while let Some(u) = stack.pop() {
                size += 1;
                for &v in self.neighbors(u) {
                    let v = v as usize;
                    if !removed[v] && label[v] == UNREACHED {
                        label[v] = c;
                        stack.push(v);
                    }
                }
            }
            sizes.push(size);
        }
        (label, sizes)
    }

    pub fn is_connected(&self) -> bool {
        self.components(&vec![false; self.len()]).1.len() <= 1
    }

    /// Subgraph induced on `keep`, vertices renumbered in `keep` order.
    pub fn induced(&self, keep: &[usize]) -> AdjGraph {
        let mut index = vec![UNREACHED; self.len()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i as u32;
        }
        let lists = keep
            .iter()
            .map(|&v| {
                self.neighbors(v)
                    .iter()
                    .map(|&w| index[w as usize])
                    .filter(|&w| w != UNREACHED)
                    .collect()
            })
            .collect();
        AdjGraph::from_lists(lists)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures() {
        assert_eq!(AdjGraph::path(9).edge_count(), 8);
        assert_eq!(AdjGraph::cycle(12).edge_count(), 12);
        assert_eq!(AdjGraph::complete(5).edge_count(), 10);
        assert!(AdjGraph::cycle(5).has_edge(4, 0));
    }

    #[test]
    fn bfs_and_components() {
        let g = AdjGraph::path(5);
        assert_eq!(g.bfs(&[0], None), vec![0, 1, 2, 3, 4]);
        let mut removed = vec![false; 5];
        removed[2] = true;
        assert_eq!(g.bfs(&[0], Some(&removed))[4], UNREACHED);
        let (label, sizes) = g.components(&removed);
        assert_eq!(sizes, vec![2, 2]);
        assert_eq!(label[2], UNREACHED);
    }

    #[test]
    fn induced_subgraph() {
        let g = AdjGraph::cycle(6);
        let h = g.induced(&[0, 1, 2, 4]);
        assert_eq!(h.edges(), vec![(0, 1), (1, 2)]);
        assert!(!h.is_connected());
    }
}
