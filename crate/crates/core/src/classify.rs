//! Decision procedures for graph products `ΓG`: hyperbolicity, virtual
//! cyclicity, virtual surface, finite-index parabolic subgroups, splittings
//! over finite and virtually cyclic subgroups, and coarse separability by a
//! family of subexponential growth.
//!
//! Every procedure returns a [`Verdict`]. `Undecided` only appears when an
//! abstract vertex label leaves a flag the rule needs as unknown.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    enumerate_candidate_vc_separators, has_vc_separator_shape, LabeledGraph, Tri, VertexSet,
};

pub const RULE_HYPERBOLIC: &str = "graph-product-hyperbolicity";
pub const RULE_VIRTUALLY_CYCLIC: &str = "graph-product-virtually-cyclic";
pub const RULE_VIRTUAL_SURFACE: &str = "graph-product-virtual-surface";
pub const RULE_FINITE_INDEX: &str = "parabolic-finite-index";
pub const RULE_ENDS: &str = "graph-product-ends";
pub const RULE_VC_SPLITTING: &str = "graph-product-vc-splitting";
pub const RULE_SUBEXP_SEPARATION: &str = "subexponential-coarse-separation";
pub const RULE_STALLINGS: &str = "stallings-ends";
pub const RULE_DIRECT_PRODUCT: &str = "complete-graph-direct-product";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Yes,
    No,
    Undecided,
}

impl Answer {
    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Undecided => "undecided",
        }
    }
}

/// Which coarse-geometry regime the graph product falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Finite,
    VirtuallyCyclic,
    MultiEnded,
    VirtualSurface,
    OneEndedNotVirtualSurface,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub answer: Answer,
    #[serde(serialize_with = "ser_witness")]
    pub witness: Option<VertexSet>,
    pub reason: String,
    pub rules: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<Regime>,
}

fn ser_witness<S: serde::Serializer>(
    w: &Option<VertexSet>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match w {
        Some(set) => s.collect_seq(set.iter()),
        None => s.serialize_none(),
    }
}

impl Verdict {
    fn new(
        answer: Answer,
        witness: Option<VertexSet>,
        reason: impl Into<String>,
        rules: &[&'static str],
    ) -> Self {
        Verdict {
            answer,
            witness,
            reason: reason.into(),
            rules: rules.to_vec(),
            regime: None,
        }
    }

    fn yes(witness: Option<VertexSet>, reason: impl Into<String>, rules: &[&'static str]) -> Self {
        Self::new(Answer::Yes, witness, reason, rules)
    }

    fn no(witness: Option<VertexSet>, reason: impl Into<String>, rules: &[&'static str]) -> Self {
        Self::new(Answer::No, witness, reason, rules)
    }

    fn undecided(reason: impl Into<String>, rules: &[&'static str]) -> Self {
        Self::new(Answer::Undecided, None, reason, rules)
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }

    pub fn is_no(&self) -> bool {
        self.answer == Answer::No
    }
}

fn require_finite(g: &LabeledGraph) -> Result<()> {
    match g.first_non_finite() {
        Some(v) => Err(Error::NonFiniteLabel(v)),
        None => Ok(()),
    }
}

pub fn is_hyperbolic(g: &LabeledGraph) -> Verdict {
    let rules = &[RULE_HYPERBOLIC];
    let n = g.vertex_count();
    let infinite: Vec<usize> = (0..n).filter(|&v| !g.label(v).is_finite()).collect();

    if let Some(v) = (0..n).find(|&v| g.label(v).hyperbolic() == Tri::No) {
        return Verdict::no(
            Some(VertexSet::singleton(v)),
            format!("vertex group {v} is not hyperbolic"),
            rules,
        );
    }
    for (i, &u) in infinite.iter().enumerate() {
        if let Some(&v) = infinite[i + 1..].iter().find(|&&v| g.adjacent(u, v)) {
            return Verdict::no(
                Some(VertexSet::from_vertices([u, v])),
                format!("infinite vertex groups {u} and {v} are adjacent"),
                rules,
            );
        }
    }
    for &w in &infinite {
        let link = g.link(w);
        for a in link.iter() {
            if let Some(b) = link.difference(g.neighbors(a)).iter().find(|&b| b > a) {
                return Verdict::no(
                    Some(VertexSet::from_vertices([w, a, b])),
                    format!("{a} and {b} are both adjacent to infinite vertex {w} but not to each other"),
                    rules,
                );
            }
        }
    }
    if let Some(sq) = g.induced_square() {
        return Verdict::no(
            Some(VertexSet::from_vertices(sq)),
            format!("induced square {}-{}-{}-{}", sq[0], sq[1], sq[2], sq[3]),
            rules,
        );
    }
    if let Some(v) = (0..n).find(|&v| g.label(v).hyperbolic() == Tri::Unknown) {
        return Verdict::undecided(
            format!("hyperbolicity of vertex group {v} is unknown"),
            rules,
        );
    }
    Verdict::yes(None, "all four conditions hold", rules)
}

pub fn is_finite_group(g: &LabeledGraph) -> Verdict {
    let rules = &[RULE_DIRECT_PRODUCT];
    if let Some(v) = g.first_non_finite() {
        return Verdict::no(
            Some(VertexSet::singleton(v)),
            format!("vertex group {v} is infinite"),
            rules,
        );
    }
    if !g.is_complete() {
        let (u, v) = non_edge(g, g.vertices()).unwrap();
        return Verdict::no(
            Some(VertexSet::from_vertices([u, v])),
            format!("{u} and {v} are not adjacent, so they generate an infinite free product"),
            rules,
        );
    }
    let order: u128 = g
        .labels()
        .iter()
        .map(|l| l.order().unwrap() as u128)
        .product();
    Verdict::yes(
        Some(g.vertices()),
        format!("direct product of order {order}"),
        rules,
    )
}

fn non_edge(g: &LabeledGraph, within: VertexSet) -> Option<(usize, usize)> {
    within.iter().find_map(|u| {
        within
            .difference(g.neighbors(u))
            .iter()
            .find(|&v| v > u)
            .map(|v| (u, v))
    })
}

pub fn is_virtually_cyclic(g: &LabeledGraph) -> Verdict {
    let rules = &[RULE_VIRTUALLY_CYCLIC];
    let d = g.join_decomposition();
    match d.parts.len() {
        0 => {
            let infinite: Vec<usize> = (0..g.vertex_count())
                .filter(|&v| !g.label(v).is_finite())
                .collect();
            match infinite.as_slice() {
                [] => Verdict::yes(Some(g.vertices()), "complete graph with finite labels: finite group", rules),
                [v] => match g.label(*v).virtually_infinite_cyclic() {
                    Tri::Yes => Verdict::yes(
                        Some(VertexSet::singleton(*v)),
                        format!("complete graph, vertex {v} virtually infinite cyclic, rest finite"),
                        rules,
                    ),
                    Tri::No => Verdict::no(
                        Some(VertexSet::singleton(*v)),
                        format!("vertex group {v} is infinite but not virtually cyclic"),
                        rules,
                    ),
                    Tri::Unknown => Verdict::undecided(
                        format!("whether vertex group {v} is virtually infinite cyclic is unknown"),
                        rules,
                    ),
                },
                [u, v, ..] => Verdict::no(
                    Some(VertexSet::from_vertices([*u, *v])),
                    format!("infinite vertex groups {u} and {v} commute: product of two infinite groups"),
                    rules,
                ),
            }
        }
        1 => {
            let part = d.parts[0];
            if let Some(v) = d.core.iter().find(|&v| !g.label(v).is_finite()) {
                return Verdict::no(
                    Some(VertexSet::singleton(v)),
                    format!("infinite vertex group {v} joined to an infinite factor"),
                    rules,
                );
            }
            let pair = part.to_vec();
            if pair.len() == 2 && pair.iter().all(|&v| g.label(v).is_z2()) {
                Verdict::yes(
                    Some(part),
                    format!(
                        "finite clique joined to the non-adjacent Z2 pair {{{}, {}}}",
                        pair[0], pair[1]
                    ),
                    rules,
                )
            } else {
                Verdict::no(
                    Some(part),
                    "the single non-complete join factor is not a pair of non-adjacent Z2 vertices",
                    rules,
                )
            }
        }
        _ => Verdict::no(
            Some(d.parts[0].union(d.parts[1])),
            "join of two non-complete factors contains a product of two infinite groups",
            rules,
        ),
    }
}

pub fn is_virtual_surface(g: &LabeledGraph) -> Verdict {
    let rules = &[RULE_VIRTUAL_SURFACE];
    let d = g.join_decomposition();
    match d.parts.len() {
        0 => {
            let infinite: Vec<usize> = (0..g.vertex_count())
                .filter(|&v| !g.label(v).is_finite())
                .collect();
            match infinite.as_slice() {
                [] => Verdict::no(None, "finite group", rules),
                [v] => match g.label(*v).virtual_surface() {
                    Tri::Yes => Verdict::yes(
                        Some(VertexSet::singleton(*v)),
                        format!("complete graph, vertex {v} virtual surface, rest finite"),
                        rules,
                    ),
                    Tri::No => Verdict::no(
                        Some(VertexSet::singleton(*v)),
                        format!(
                            "the only infinite vertex group {v} is not a virtual surface group"
                        ),
                        rules,
                    ),
                    Tri::Unknown => Verdict::undecided(
                        format!("whether vertex group {v} is a virtual surface group is unknown"),
                        rules,
                    ),
                },
                [u, v, ..] => Verdict::no(
                    Some(VertexSet::from_vertices([*u, *v])),
                    format!("infinite vertex groups {u} and {v} commute"),
                    rules,
                ),
            }
        }
        1 => {
            let part = d.parts[0];
            if let Some(v) = d.core.iter().find(|&v| !g.label(v).is_finite()) {
                return Verdict::no(
                    Some(VertexSet::singleton(v)),
                    format!("infinite vertex group {v} joined to an infinite factor"),
                    rules,
                );
            }
            if part.len() >= 5
                && g.is_induced_cycle(part)
                && part.iter().all(|v| g.label(v).is_z2())
            {
                Verdict::yes(
                    Some(part),
                    format!(
                        "finite clique joined to a {}-cycle of Z2 vertices",
                        part.len()
                    ),
                    rules,
                )
            } else if let Some(v) = part.iter().find(|&v| !g.label(v).is_z2()) {
                Verdict::no(
                    Some(VertexSet::singleton(v)),
                    format!(
                        "join factor is not an all-Z2 cycle of length >= 5 (vertex {v} is not Z2)"
                    ),
                    rules,
                )
            } else {
                Verdict::no(
                    Some(part),
                    "join factor is not a cycle of length >= 5",
                    rules,
                )
            }
        }
        _ => Verdict::no(
            Some(d.parts[0].union(d.parts[1])),
            "join of two non-complete factors contains a product of two infinite groups",
            rules,
        ),
    }
}

/// Smallest separating clique (the empty set when the graph is disconnected).
fn separating_clique(g: &LabeledGraph) -> Option<VertexSet> {
    let all = g.vertices();
    let mut best: Option<VertexSet> = None;
    crate::graph::for_each_clique(g, all, &mut |c| {
        if c != all && g.components(all.difference(c)).len() >= 2 {
            let better = match best {
                None => true,
                Some(b) => (c.len(), c.0) < (b.len(), b.0),
            };
            if better {
                best = Some(c);
            }
        }
    });
    best
}

pub fn splits_over_finite(g: &LabeledGraph) -> Result<Verdict> {
    require_finite(g)?;
    let rules = &[RULE_ENDS];
    Ok(match separating_clique(g) {
        Some(c) if c.is_empty() => {
            Verdict::yes(Some(c), "graph is disconnected: free product", rules)
        }
        Some(c) => Verdict::yes(Some(c), format!("separating clique {c:?}"), rules),
        None => Verdict::no(None, "no separating complete subgraph", rules),
    })
}

/// Infinite and not multi-ended. Derived only for finite labels.
pub fn is_one_ended(g: &LabeledGraph) -> Verdict {
    let rules = &[RULE_ENDS, RULE_STALLINGS];
    if g.first_non_finite().is_some() {
        return Verdict::undecided(
            "one-endedness is only derived for finite vertex groups",
            rules,
        );
    }
    if is_finite_group(g).is_yes() {
        return Verdict::no(None, "finite group has no ends", rules);
    }
    match splits_over_finite(g) {
        Ok(v) if v.is_yes() => Verdict::no(v.witness, format!("multi-ended: {}", v.reason), rules),
        Ok(_) => Verdict::yes(None, "infinite and no separating complete subgraph", rules),
        Err(e) => Verdict::undecided(e.to_string(), rules),
    }
}

pub fn splits_over_virtually_cyclic(g: &LabeledGraph) -> Result<Verdict> {
    require_finite(g)?;
    let rules = &[RULE_VC_SPLITTING];
    let seps = enumerate_candidate_vc_separators(g)?;
    Ok(match seps.first() {
        Some(&s) => Verdict::yes(Some(s), describe_separator(g, s), rules),
        None => Verdict::no(None, "no separating subgraph of the form A*B", rules),
    })
}

fn describe_separator(g: &LabeledGraph, s: VertexSet) -> String {
    debug_assert!(has_vc_separator_shape(g, s));
    if s.is_empty() {
        "graph is disconnected".into()
    } else if g.is_clique(s) {
        format!("separating clique {s:?}")
    } else {
        let (u, v) = non_edge(g, s).unwrap();
        let a = s.difference(VertexSet::from_vertices([u, v]));
        format!("separating join of clique {a:?} with the non-adjacent Z2 pair {{{u}, {v}}}")
    }
}

/// Requires a square-free graph with finite labels.
pub fn is_coarsely_separable_subexp(g: &LabeledGraph) -> Result<Verdict> {
    require_finite(g)?;
    if let Some(sq) = g.induced_square() {
        return Err(Error::Hypothesis(format!(
            "graph has the induced square {}-{}-{}-{}",
            sq[0], sq[1], sq[2], sq[3]
        )));
    }
    let mut v = splits_over_virtually_cyclic(g)?;
    v.rules = vec![RULE_SUBEXP_SEPARATION, RULE_VC_SPLITTING];
    v.regime = Some(regime(g)?);
    Ok(v)
}

/// Regime of a graph product with finite labels.
pub fn regime(g: &LabeledGraph) -> Result<Regime> {
    require_finite(g)?;
    Ok(if is_finite_group(g).is_yes() {
        Regime::Finite
    } else if is_virtually_cyclic(g).is_yes() {
        Regime::VirtuallyCyclic
    } else if splits_over_finite(g)?.is_yes() {
        Regime::MultiEnded
    } else if is_virtual_surface(g).is_yes() {
        Regime::VirtualSurface
    } else {
        Regime::OneEndedNotVirtualSurface
    })
}

/// Whether the parabolic subgroup generated by `set` has finite index.
pub fn finite_index_subgraph(g: &LabeledGraph, set: VertexSet) -> Result<Verdict> {
    let rules = &[RULE_FINITE_INDEX];
    if !set.is_subset(g.vertices()) {
        return Err(Error::VertexOutOfRange(
            set.difference(g.vertices()).first().unwrap(),
        ));
    }
    let outside = g.vertices().difference(set);
    let link = g.link_of(set);
    if let Some(w) = outside.difference(link).first() {
        let v = set.difference(g.neighbors(w)).first().unwrap();
        return Ok(Verdict::no(
            Some(VertexSet::from_vertices([w, v])),
            format!("{w} lies outside the star and is not adjacent to {v}"),
            rules,
        ));
    }
    if let Some((a, b)) = non_edge(g, outside) {
        return Ok(Verdict::no(
            Some(VertexSet::from_vertices([a, b])),
            format!("link contains the non-adjacent pair {{{a}, {b}}}"),
            rules,
        ));
    }
    if let Some(w) = outside.iter().find(|&w| !g.label(w).is_finite()) {
        return Ok(Verdict::no(
            Some(VertexSet::singleton(w)),
            format!("link vertex {w} carries an infinite group"),
            rules,
        ));
    }
    Ok(Verdict::yes(
        Some(set),
        "graph is the star of the subgraph and its link is a finite clique",
        rules,
    ))
}
