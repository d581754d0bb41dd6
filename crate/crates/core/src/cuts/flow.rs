//! Vertex connectivity by node-split max-flow, and the far-pair lower bound.
//!
//! A small δ-cut leaves two large components, and points deep inside them
//! keep a ball of radius about `n/2` clear of the cut. The bound therefore
//! measures how many vertex-disjoint paths join two such protected balls
//! around far-apart points; any cut that separates them has at least that
//! many vertices. This bounds only cuts separating some sampled pair.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{Bound, CutReport, Delta, FlowCertificate, Method};
use crate::adjacency::{AdjGraph, UNREACHED};
use crate::error::{Error, Result};

const INF: i32 = i32::MAX / 2;

/// Graphs below this size evaluate pairs in parallel.
const PARALLEL_BELOW: usize = 200_000;

struct Network {
    head: Vec<usize>,
    to: Vec<u32>,
    cap: Vec<i32>,
    rev: Vec<u32>,
}

impl Network {
    fn build(nodes: usize, arcs: &[(u32, u32, i32)]) -> Self {
        let mut deg = vec![0usize; nodes + 1];
        for &(u, v, _) in arcs {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let mut head = vec![0usize; nodes + 1];
        for i in 0..nodes {
            head[i + 1] = head[i] + deg[i];
        }
        let m = head[nodes];
        let mut to = vec![0u32; m];
        let mut cap = vec![0i32; m];
        let mut rev = vec![0u32; m];
        let mut fill = head.clone();
        for &(u, v, c) in arcs {
            let (a, b) = (fill[u as usize], fill[v as usize]);
            fill[u as usize] += 1;
            fill[v as usize] += 1;
            to[a] = v;
            cap[a] = c;
            rev[a] = b as u32;
            to[b] = u;
            cap[b] = 0;
            rev[b] = a as u32;
        }
        Network { head, to, cap, rev }
    }

    fn max_flow(&mut self, s: usize, t: usize, stop_at: i64) -> i64 {
        let n = self.head.len() - 1;
        let mut flow = 0i64;
        let mut level = vec![-1i32; n];
        let mut it = vec![0usize; n];
        loop {
            level.iter_mut().for_each(|l| *l = -1);
            level[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for e in self.head[u]..self.head[u + 1] {
                    let v = self.to[e] as usize;
                    if self.cap[e] > 0 && level[v] < 0 {
                        level[v] = level[u] + 1;
                        q.push_back(v);
                    }
                }
            }
            if level[t] < 0 || flow >= stop_at {
                return flow;
            }
            it.copy_from_slice(&self.head[..n]);
            loop {
                let f = self.augment(s, t, &level, &mut it);
                if f == 0 {
                    break;
                }
                flow += f as i64;
                if flow >= stop_at {
                    return flow;
                }
            }
        }
    }

    /// One augmenting path in the level graph (iterative DFS).
    fn augment(&mut self, s: usize, t: usize, level: &[i32], it: &mut [usize]) -> i32 {
        let mut path: Vec<usize> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                let f = path.iter().map(|&e| self.cap[e]).min().unwrap_or(0);
                for &e in &path {
                    self.cap[e] -= f;
                    let r = self.rev[e] as usize;
                    self.cap[r] += f;
                }
                return f;
            }
            let mut advanced = false;
            while it[u] < self.head[u + 1] {
                let e = it[u];
                let v = self.to[e] as usize;
                if self.cap[e] > 0 && level[v] == level[u] + 1 {
                    path.push(e);
                    u = v;
                    advanced = true;
                    break;
                }
                it[u] += 1;
            }
            if !advanced {
                if u == s {
                    return 0;
                }
                let e = path.pop().unwrap();
                u = self.to[self.rev[e] as usize] as usize;
                it[u] += 1;
            }
        }
    }
}

/// Minimum number of vertices outside `a` and `b` whose removal disconnects
/// `a` from `b`. `None` when the sets meet or are adjacent.
pub fn vertex_connectivity(g: &AdjGraph, a: &[usize], b: &[usize]) -> Option<usize> {
    let n = g.len();
    let mut side = vec![0u8; n];
    for &v in a {
        side[v] = 1;
    }
    for &v in b {
        if side[v] == 1 {
            return None;
        }
        side[v] = 2;
    }
    for &v in a {
        if g.neighbors(v).iter().any(|&w| side[w as usize] == 2) {
            return None;
        }
    }
    // Node v splits into 2v (in) and 2v + 1 (out).
    let (s, t) = (2 * n, 2 * n + 1);
    let mut arcs = Vec::with_capacity(n + 2 * g.edge_count() + a.len() + b.len());
    for (v, &sd) in side.iter().enumerate() {
        let c = if sd == 0 { 1 } else { INF };
        arcs.push((2 * v as u32, 2 * v as u32 + 1, c));
        for &w in g.neighbors(v) {
            arcs.push((2 * v as u32 + 1, 2 * w, INF));
        }
    }
    for &v in a {
        arcs.push((s as u32, 2 * v as u32, INF));
    }
    for &v in b {
        arcs.push((2 * v as u32 + 1, t as u32, INF));
    }
    let mut net = Network::build(2 * n + 2, &arcs);
    Some(net.max_flow(s, t, INF as i64) as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairPolicy {
    /// Pairs are at intrinsic distance at least `rho * diameter`.
    pub rho: f64,
    pub max_pairs: usize,
    /// Radius of the protected balls; clipped so the balls stay apart.
    pub radius: usize,
    pub seed: u64,
}

impl PairPolicy {
    pub fn new(radius: usize, seed: u64) -> Self {
        PairPolicy {
            rho: 0.5,
            max_pairs: 32,
            radius,
            seed,
        }
    }
}

/// A pair with its protected radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub x: usize,
    pub y: usize,
    pub radius: usize,
}

/// Deepest vertices of the two largest components of `g \ cut`, with radius
/// `min(radius, depth - 1)` so both balls avoid the cut.
pub fn cut_witness(g: &AdjGraph, cut: &[usize], radius: usize) -> Option<Witness> {
    let removed = super::removed_mask(g.len(), cut);
    let (label, sizes) = g.components(&removed);
    if sizes.len() < 2 || cut.is_empty() {
        return None;
    }
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by_key(|&c| (std::cmp::Reverse(sizes[c]), c));
    let depth = g.bfs(cut, None);
    let deepest = |c: usize| {
        (0..g.len())
            .filter(|&v| label[v] == c as u32)
            .max_by_key(|&v| (depth[v], std::cmp::Reverse(v)))
            .unwrap()
    };
    let (x, y) = (deepest(order[0]), deepest(order[1]));
    let d = depth[x].min(depth[y]) as usize;
    Some(Witness {
        x,
        y,
        radius: radius.min(d.saturating_sub(1)),
    })
}

fn ball(g: &AdjGraph, dist: &[u32], r: usize) -> Vec<usize> {
    (0..g.len())
        .filter(|&v| dist[v] != UNREACHED && dist[v] as usize <= r)
        .collect()
}

fn eccentric(dist: &[u32]) -> (usize, usize) {
    let v = (0..dist.len())
        .filter(|&v| dist[v] != UNREACHED)
        .max_by_key(|&v| (dist[v], std::cmp::Reverse(v)))
        .unwrap();
    (v, dist[v] as usize)
}

/// Lower bound `min κ(B(x, r), B(y, r))` over far pairs `(x, y)` of `g`,
/// plus the optional witness pair.
pub fn flow_far_pair_lower_bound(
    g: &AdjGraph,
    delta: Delta,
    policy: PairPolicy,
    witness: Option<Witness>,
    subject: &str,
) -> Result<CutReport> {
    let n = g.len();
    if n == 0 || !g.is_connected() {
        return Err(Error::Disconnected);
    }
    // Diameter estimate by repeated sweeps.
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let (a, _) = eccentric(&g.bfs(&[0], None));
    let from_a = g.bfs(&[a], None);
    let (b, mut diameter) = eccentric(&from_a);
    let mut pairs: Vec<(usize, usize, usize)> = vec![(a, b, diameter)];
    let mut cursor = b;
    for _ in 0..3 {
        let dist = g.bfs(&[cursor], None);
        let (c, d) = eccentric(&dist);
        diameter = diameter.max(d);
        cursor = c;
    }
    let threshold = (policy.rho * diameter as f64).ceil() as usize;
    pairs.retain(|p| p.2 >= threshold);

    let mut attempts = 0;
    let order: Vec<usize> = {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(&mut rng);
        v
    };
    while pairs.len() < policy.max_pairs && attempts < order.len().min(4 * policy.max_pairs) {
        let x = order[attempts];
        attempts += 1;
        let dist = g.bfs(&[x], None);
        let far: Vec<usize> = (0..n)
            .filter(|&v| dist[v] != UNREACHED && dist[v] as usize >= threshold)
            .collect();
        if let Some(&y) = far.choose(&mut rng) {
            pairs.push((x, y, dist[y] as usize));
        }
    }

    let mut jobs: Vec<Witness> = pairs
        .iter()
        .filter(|p| p.2 >= 2)
        .map(|&(x, y, d)| Witness {
            x,
            y,
            radius: policy.radius.min(d.saturating_sub(2) / 2),
        })
        .collect();
    jobs.extend(witness);

    let eval = |w: &Witness| -> Option<(Witness, usize, usize)> {
        let dx = g.bfs(&[w.x], None);
        let dy = g.bfs(&[w.y], None);
        let k = vertex_connectivity(g, &ball(g, &dx, w.radius), &ball(g, &dy, w.radius))?;
        Some((*w, dx[w.y] as usize, k))
    };
    let results: Vec<(Witness, usize, usize)> = if n < PARALLEL_BELOW {
        jobs.par_iter().filter_map(eval).collect()
    } else {
        jobs.iter().filter_map(eval).collect()
    };
    let Some(&(w, distance, paths)) = results.iter().min_by_key(|r| (r.2, r.0.x, r.0.y)) else {
        return Ok(CutReport {
            subject: subject.to_string(),
            subject_size: n,
            delta,
            bound: Bound::Lower,
            method: Method::FlowFarPairs,
            value: 0,
            cut_set: Vec::new(),
            component_census: Vec::new(),
            certificate: None,
            note: Some("no pair at distance >= 2".into()),
        });
    };
    Ok(CutReport {
        subject: subject.to_string(),
        subject_size: n,
        delta,
        bound: Bound::Lower,
        method: Method::FlowFarPairs,
        value: paths,
        cut_set: Vec::new(),
        component_census: Vec::new(),
        certificate: Some(FlowCertificate {
            x: w.x,
            y: w.y,
            distance,
            radius: w.radius,
            paths,
            pairs_evaluated: results.len(),
            diameter_estimate: diameter,
        }),
        note: Some("bounds cuts that separate a sampled far pair with its protected balls".into()),
    })
}
