//! Exact minimum δ-cuts by iterative deepening branch-and-bound.
//!
//! Some vertex of every oversized component must be cut. The search picks
//! the oversized component with the smallest vertex and branches on its
//! vertices in index order, forbidding the earlier ones in later branches.

use super::{cut_report, Bound, CutReport, Delta, Method};
use crate::adjacency::AdjGraph;
use crate::error::{Error, Result};

pub const DEFAULT_EXACT_THRESHOLD: usize = 28;

struct Search {
    adj: Vec<u64>,
    full: u64,
    limit: usize,
}

impl Search {
    fn component(&self, start: usize, alive: u64) -> u64 {
        let mut comp = 1u64 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = self.adj[v] & alive & !comp;
            comp |= new;
            frontier |= new;
        }
        comp
    }

    /// Oversized components of the complement of `cut`, in order of their
    /// smallest vertex.
    fn oversized(&self, cut: u64) -> Vec<u64> {
        let alive = self.full & !cut;
        let mut rest = alive;
        let mut out = Vec::new();
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            let c = self.component(v, alive);
            rest &= !c;
            if c.count_ones() as usize > self.limit {
                out.push(c);
            }
        }
        out
    }

    fn run(&self, cut: u64, budget: usize, forbidden: u64) -> Option<u64> {
        let big = self.oversized(cut);
        let Some(&first) = big.first() else {
            return Some(cut);
        };
        // Disjoint oversized components each need a cut vertex.
        if big.len() > budget {
            return None;
        }
        let mut candidates = first & !forbidden;
        let mut forbidden = forbidden;
        while candidates != 0 {
            let v = candidates.trailing_zeros();
            candidates &= candidates - 1;
            if let Some(found) = self.run(cut | 1 << v, budget - 1, forbidden) {
                return Some(found);
            }
            forbidden |= 1 << v;
        }
        None
    }
}

/// Minimum δ-cut of `g`, for graphs with at most `threshold` (and at most
/// 64) vertices.
pub fn exact_min_cut(
    g: &AdjGraph,
    delta: Delta,
    threshold: usize,
    subject: &str,
) -> Result<CutReport> {
    let n = g.len();
    let threshold = threshold.min(64);
    if n > threshold {
        return Err(Error::TooLargeForExact(n, threshold));
    }
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let search = Search {
        adj,
        full,
        limit: delta.limit(n),
    };
    for k in 0..=n {
        if let Some(cut) = search.run(0, k, 0) {
            let set: Vec<usize> = (0..n).filter(|&v| cut >> v & 1 == 1).collect();
            return cut_report(g, subject, delta, set, Bound::Exact, Method::BranchAndBound);
        }
    }
    unreachable!("cutting every vertex is always a δ-cut")
}
