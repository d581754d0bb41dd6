//! Heuristic δ-cuts: BFS level sweeps from several seeds, greedy shrinking,
//! and vertex-move local search. Every result is verified before it is
//! reported.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{cut_report, removed_mask, Bound, CutReport, Delta, Method};
use crate::adjacency::{AdjGraph, UNREACHED};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HeuristicBudget {
    /// BFS seeds besides vertex 0. Zero seeds and zero passes means no search.
    pub seeds: usize,
    /// Level sets tried per seed, centred on the balancing level.
    pub levels_per_seed: usize,
    /// Local-search passes.
    pub passes: usize,
    pub seed: u64,
}

impl HeuristicBudget {
    pub fn none() -> Self {
        HeuristicBudget {
            seeds: 0,
            levels_per_seed: 0,
            passes: 0,
            seed: 0,
        }
    }

    pub fn with_seed(seed: u64) -> Self {
        HeuristicBudget {
            seeds: 4,
            levels_per_seed: 6,
            passes: 4,
            seed,
        }
    }

    fn is_none(&self) -> bool {
        self.levels_per_seed == 0
    }
}

struct Dsu {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return a;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
        a
    }
}

/// Drops cut vertices whose return merges components into one of size at
/// most `limit`. The input must be a valid cut.
fn shrink(g: &AdjGraph, cut: &[usize], limit: usize) -> Vec<usize> {
    let n = g.len();
    let mut removed = removed_mask(n, cut);
    let mut dsu = Dsu::new(n);
    for u in 0..n {
        if !removed[u] {
            for &v in g.neighbors(u) {
                if !removed[v as usize] {
                    dsu.union(u as u32, v);
                }
            }
        }
    }
    let mut order = cut.to_vec();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut roots = Vec::new();
    for v in order {
        roots.clear();
        for &w in g.neighbors(v) {
            if !removed[w as usize] {
                let r = dsu.find(w);
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
        let merged: usize = 1 + roots
            .iter()
            .map(|&r| dsu.size[r as usize] as usize)
            .sum::<usize>();
        if merged <= limit {
            removed[v] = false;
            for &r in &roots {
                dsu.union(v as u32, r);
            }
        }
    }
    (0..n).filter(|&v| removed[v]).collect()
}

/// Splits every oversized component along a BFS level from one of its
/// peripheral vertices until all components fit.
fn complete(g: &AdjGraph, cut: &mut Vec<usize>, limit: usize) {
    let n = g.len();
    let mut removed = removed_mask(n, cut);
    loop {
        let (label, sizes) = g.components(&removed);
        let Some(c) = sizes.iter().position(|&s| s > limit) else {
            break;
        };
        let start = (0..n).find(|&v| label[v] == c as u32).unwrap();
        let far = farthest(&g.bfs(&[start], Some(&removed)));
        let dist = g.bfs(&[far], Some(&removed));
        let level = balancing_level(&dist, sizes[c]);
        let before = cut.len();
        for v in 0..n {
            if dist[v] == level {
                removed[v] = true;
                cut.push(v);
            }
        }
        if cut.len() == before {
            // A single vertex component cannot be oversized when limit >= 1.
            removed[far] = true;
            cut.push(far);
        }
    }
}

fn farthest(dist: &[u32]) -> usize {
    (0..dist.len())
        .filter(|&v| dist[v] != UNREACHED)
        .max_by_key(|&v| (dist[v], std::cmp::Reverse(v)))
        .unwrap()
}

/// First level whose ball (levels below it) reaches half the component.
fn balancing_level(dist: &[u32], component: usize) -> u32 {
    let max = dist
        .iter()
        .filter(|&&d| d != UNREACHED)
        .max()
        .copied()
        .unwrap_or(0);
    let mut counts = vec![0usize; max as usize + 1];
    for &d in dist.iter().filter(|&&d| d != UNREACHED) {
        counts[d as usize] += 1;
    }
    let mut below = 0;
    for (l, &c) in counts.iter().enumerate() {
        if 2 * (below + c) >= component {
            return (l as u32).max(1).min(max);
        }
        below += c;
    }
    max
}

/// One pass of zero- or positive-gain vertex moves: a cut vertex `v` joins
/// an adjacent component `c` and its neighbours outside `c` enter the cut.
/// Sizes are tracked as upper bounds, so accepted moves stay valid.
fn local_search_pass(g: &AdjGraph, cut: &[usize], limit: usize) -> Vec<usize> {
    let n = g.len();
    let mut removed = removed_mask(n, cut);
    let (mut label, mut sizes) = g.components(&removed);
    let mut moved = vec![false; n];
    let mut order = cut.to_vec();
    order.sort_unstable();
    let mut queue = std::collections::VecDeque::from(order);
    while let Some(v) = queue.pop_front() {
        if !removed[v] || moved[v] {
            continue;
        }
        let mut adjacent: Vec<u32> = g
            .neighbors(v)
            .iter()
            .map(|&w| label[w as usize])
            .filter(|&l| l != UNREACHED)
            .collect();
        adjacent.sort_unstable();
        adjacent.dedup();
        let mut best: Option<(usize, u32)> = None;
        for &c in &adjacent {
            if sizes[c as usize] + 1 > limit {
                continue;
            }
            let pushed = g
                .neighbors(v)
                .iter()
                .filter(|&&w| label[w as usize] != UNREACHED && label[w as usize] != c)
                .count();
            if pushed <= 1 && best.is_none_or(|(p, _)| pushed < p) {
                best = Some((pushed, c));
            }
        }
        let Some((_, c)) = best else { continue };
        moved[v] = true;
        removed[v] = false;
        label[v] = c;
        sizes[c as usize] += 1;
        for &w in g.neighbors(v) {
            let w = w as usize;
            let l = label[w];
            if l != UNREACHED && l != c {
                removed[w] = true;
                label[w] = UNREACHED;
                sizes[l as usize] -= 1;
                queue.push_back(w);
            }
        }
    }
    (0..n).filter(|&v| removed[v]).collect()
}

/// Best δ-cut found within `budget`. With no budget the whole vertex set is
/// returned, flagged.
pub fn heuristic_cut(
    g: &AdjGraph,
    delta: Delta,
    budget: HeuristicBudget,
    subject: &str,
) -> Result<CutReport> {
    let n = g.len();
    if budget.is_none() || n == 0 {
        let mut r = cut_report(
            g,
            subject,
            delta,
            (0..n).collect(),
            Bound::Upper,
            Method::NoSearch,
        )?;
        r.note = Some("no search".into());
        return Ok(r);
    }
    let limit = delta.limit(n);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut seeds = vec![0];
    seeds.extend((0..budget.seeds).map(|_| rng.gen_range(0..n)));

    let mut best: Vec<usize> = (0..n).collect();
    for &s in &seeds {
        let dist = g.bfs(&[s], None);
        let reached = dist.iter().filter(|&&d| d != UNREACHED).count();
        let centre = balancing_level(&dist, reached) as i64;
        let max = dist
            .iter()
            .filter(|&&d| d != UNREACHED)
            .max()
            .copied()
            .unwrap_or(0) as i64;
        let half = budget.levels_per_seed as i64 / 2;
        for l in (centre - half).max(1)..=(centre + half).min(max) {
            let mut cut: Vec<usize> = (0..n).filter(|&v| dist[v] == l as u32).collect();
            complete(g, &mut cut, limit);
            let cut = shrink(g, &cut, limit);
            if cut.len() < best.len() {
                best = cut;
            }
        }
    }
    // Unreached vertices (disconnected input) are handled by `complete`.
    if best.len() == n && n > 0 {
        let mut cut = Vec::new();
        complete(g, &mut cut, limit);
        best = shrink(g, &cut, limit);
    }

    let mut method = Method::LayerSweep;
    for _ in 0..budget.passes {
        let moved = local_search_pass(g, &best, limit);
        let shrunk = shrink(g, &moved, limit);
        if shrunk.len() < best.len() {
            best = shrunk;
            method = Method::LocalSearch;
        } else {
            break;
        }
    }
    cut_report(g, subject, delta, best, Bound::Upper, method)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::cuts::exact::{exact_min_cut, tests::brute_force_min_cut};
    use crate::cuts::{is_delta_cut, verify_partition_lemma};

    #[test]
    fn no_search_returns_everything() {
        let g = AdjGraph::cycle(10);
        let r = heuristic_cut(&g, Delta::half(), HeuristicBudget::none(), "c").unwrap();
        assert_eq!(r.value, 10);
        assert_eq!(r.method, Method::NoSearch);
        assert_eq!(r.note.as_deref(), Some("no search"));
    }

    #[test]
    fn cycle_of_100() {
        let r = heuristic_cut(
            &AdjGraph::cycle(100),
            Delta::half(),
            HeuristicBudget::with_seed(1),
            "c",
        )
        .unwrap();
        assert_eq!(r.value, 2);
    }

    #[test]
    fn path_and_clique() {
        let b = HeuristicBudget::with_seed(2);
        assert_eq!(
            heuristic_cut(&AdjGraph::path(9), Delta::half(), b, "p")
                .unwrap()
                .value,
            1
        );
        assert_eq!(
            heuristic_cut(&AdjGraph::complete(5), Delta::half(), b, "k")
                .unwrap()
                .value,
            3
        );
    }

    #[test]
    fn grid_cut_is_a_column() {
        let (w, h) = (10, 5);
        let mut edges = Vec::new();
        for i in 0..w {
            for j in 0..h {
                let v = i * h + j;
                if i + 1 < w {
                    edges.push((v, v + h));
                }
                if j + 1 < h {
                    edges.push((v, v + 1));
                }
            }
        }
        let g = AdjGraph::from_edges(w * h, &edges);
        let r = heuristic_cut(&g, Delta::half(), HeuristicBudget::with_seed(3), "grid").unwrap();
        assert!(r.value <= 6, "{}", r.value);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]
        #[test]
        fn valid_and_not_below_exact(n in 1usize..13, edges in proptest::collection::vec((0usize..13, 0usize..13), 0..30), seed in any::<u64>()) {
            let edges: Vec<_> = edges.into_iter().filter(|&(u, v)| u < n && v < n).collect();
            let g = AdjGraph::from_edges(n, &edges);
            let r = heuristic_cut(&g, Delta::half(), HeuristicBudget::with_seed(seed), "r").unwrap();
            prop_assert!(is_delta_cut(&g, &r.cut_set, Delta::half()));
            prop_assert!(r.value >= brute_force_min_cut(&g, Delta::half()));
            prop_assert!(r.value >= exact_min_cut(&g, Delta::half(), 28, "r").unwrap().value);
            prop_assert!(verify_partition_lemma(&g, &r.cut_set, Delta::half()).unwrap().holds());
        }
    }
}
