//! Separating subgraphs of the shape `A * B`: `A` complete, `B` empty or two
//! non-adjacent `Z_2` vertices.

use super::{LabeledGraph, VertexSet};
use crate::error::{Error, Result};

/// Vertex cap for separator enumeration.
pub const MAX_SEPARATOR_VERTICES: usize = 24;

/// Below this vertex count every subset is scanned.
pub const EXHAUSTIVE_BELOW: usize = 16;

/// True iff `set` induces `A * B` with `A` a clique and `B` empty or a
/// non-adjacent pair of `Z_2` vertices. Equivalently: `set` has no internal
/// non-edge, or exactly one whose endpoints are both `Z_2`.
pub fn has_vc_separator_shape(g: &LabeledGraph, set: VertexSet) -> bool {
    let mut missing = None;
    for u in set.iter() {
        let others = set
            .difference(g.neighbors(u))
            .difference(VertexSet::singleton(u));
        for v in others.iter().filter(|&v| v > u) {
            if missing.is_some() {
                return false;
            }
            missing = Some((u, v));
        }
    }
    match missing {
        None => true,
        Some((u, v)) => g.label(u).is_z2() && g.label(v).is_z2(),
    }
}

fn check_enumerable(g: &LabeledGraph) -> Result<()> {
    if let Some(v) = g.first_non_finite() {
        return Err(Error::NonFiniteLabel(v));
    }
    if g.vertex_count() > MAX_SEPARATOR_VERTICES {
        return Err(Error::TooManyVertices(
            g.vertex_count(),
            MAX_SEPARATOR_VERTICES,
        ));
    }
    Ok(())
}

fn separates(g: &LabeledGraph, set: VertexSet) -> bool {
    let all = g.vertices();
    set != all && g.components(all.difference(set)).len() >= 2
}

/// All separating subgraphs of the `A * B` shape, sorted by size then mask.
/// Requires finite labels and at most [`MAX_SEPARATOR_VERTICES`] vertices.
pub fn enumerate_candidate_vc_separators(g: &LabeledGraph) -> Result<Vec<VertexSet>> {
    check_enumerable(g)?;
    if g.vertex_count() < EXHAUSTIVE_BELOW {
        enumerate_vc_separators_exhaustive(g)
    } else {
        enumerate_vc_separators_structured(g)
    }
}

/// Scans every proper subset.
pub fn enumerate_vc_separators_exhaustive(g: &LabeledGraph) -> Result<Vec<VertexSet>> {
    check_enumerable(g)?;
    let all = g.vertices();
    let mut out: Vec<VertexSet> = (0..all.0)
        .map(VertexSet)
        .filter(|&s| has_vc_separator_shape(g, s) && separates(g, s))
        .collect();
    out.sort_by_key(|s| (s.len(), s.0));
    Ok(out)
}

/// Walks cliques, then cliques inside the common link of each non-adjacent
/// `Z_2` pair.
pub fn enumerate_vc_separators_structured(g: &LabeledGraph) -> Result<Vec<VertexSet>> {
    check_enumerable(g)?;
    let n = g.vertex_count();
    let mut out = Vec::new();

    for_each_clique(g, g.vertices(), &mut |c| {
        if separates(g, c) {
            out.push(c);
        }
    });

    for u in 0..n {
        if !g.label(u).is_z2() {
            continue;
        }
        for v in u + 1..n {
            if g.adjacent(u, v) || !g.label(v).is_z2() {
                continue;
            }
            let pair = VertexSet::from_vertices([u, v]);
            let link = g.link_of(pair);
            for_each_clique(g, link, &mut |a| {
                let s = a.union(pair);
                if separates(g, s) {
                    out.push(s);
                }
            });
        }
    }
    out.sort_by_key(|s| (s.len(), s.0));
    out.dedup();
    Ok(out)
}

/// Calls `f` on every clique (including the empty one) inside `within`.
pub(crate) fn for_each_clique(g: &LabeledGraph, within: VertexSet, f: &mut impl FnMut(VertexSet)) {
    fn rec(
        g: &LabeledGraph,
        current: VertexSet,
        candidates: VertexSet,
        f: &mut impl FnMut(VertexSet),
    ) {
        f(current);
        for v in candidates.iter() {
            let later = VertexSet(candidates.0 & u64::MAX.checked_shl(v as u32 + 1).unwrap_or(0));
            rec(
                g,
                current.union(VertexSet::singleton(v)),
                later.intersection(g.neighbors(v)),
                f,
            );
        }
    }
    rec(g, VertexSet::EMPTY, within, f);
}
