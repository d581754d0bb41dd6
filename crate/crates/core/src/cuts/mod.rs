//! δ-cuts of finite graphs: exact search, heuristic upper bounds, far-pair
//! flow lower bounds, the partition lemma, and the cut-growth experiments.
//!
//! A vertex set `S` is a δ-cut of `A` when every component of `A \ S` has at
//! most `δ|A|` vertices. δ is a rational `p/q` and all comparisons are done
//! in integers.

pub mod exact;
pub mod experiment;
pub mod flow;
pub mod heuristic;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::adjacency::AdjGraph;
use crate::error::{Error, Result};

pub use exact::{exact_min_cut, DEFAULT_EXACT_THRESHOLD};
pub use experiment::{
    cut_growth_experiment, sep_profile_estimate, ExperimentConfig, ExperimentTable, SepProfile,
};
pub use flow::{flow_far_pair_lower_bound, vertex_connectivity, PairPolicy};
pub use heuristic::{heuristic_cut, HeuristicBudget};

/// A rational `num/den` in `(0, 1)`, stored in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Delta {
    num: u64,
    den: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Delta {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || num >= den {
            return Err(Error::InvalidParameter(format!(
                "delta {num}/{den} not in (0, 1)"
            )));
        }
        let g = gcd(num, den);
        Ok(Delta {
            num: num / g,
            den: den / g,
        })
    }

    pub fn half() -> Self {
        Delta { num: 1, den: 2 }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    /// `size <= δ * total`.
    pub fn allows(self, size: usize, total: usize) -> bool {
        size as u128 * self.den as u128 <= self.num as u128 * total as u128
    }

    /// Largest component size allowed in a subject of `total` vertices.
    pub fn limit(self, total: usize) -> usize {
        (self.num as u128 * total as u128 / self.den as u128) as usize
    }

    /// `δ' = min(δ, 1 - δ) / 4` as `(num, den)`.
    pub fn lemma_prime(self) -> (u64, u64) {
        (self.num.min(self.den - self.num), 4 * self.den)
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Delta {
    type Err = Error;

    /// Accepts `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse delta {s:?}; expected p/q"));
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        Delta::new(
            p.trim().parse().map_err(|_| bad())?,
            q.trim().parse().map_err(|_| bad())?,
        )
    }
}

impl Serialize for Delta {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Upper,
    Lower,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exhaustive,
    BranchAndBound,
    LayerSweep,
    LocalSearch,
    FlowFarPairs,
    NoSearch,
}

/// The pair realising a far-pair flow bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowCertificate {
    pub x: usize,
    pub y: usize,
    pub distance: usize,
    /// Radius of the protected balls around `x` and `y`.
    pub radius: usize,
    /// Number of vertex-disjoint paths between the two balls.
    pub paths: usize,
    pub pairs_evaluated: usize,
    pub diameter_estimate: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutReport {
    pub subject: String,
    pub subject_size: usize,
    pub delta: Delta,
    pub bound: Bound,
    pub method: Method,
    /// Cut size, or the lower bound for `Bound::Lower`.
    pub value: usize,
    pub cut_set: Vec<usize>,
    /// Component sizes of `subject \ cut_set`, largest first.
    pub component_census: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<FlowCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub(crate) fn removed_mask(n: usize, cut: &[usize]) -> Vec<bool> {
    let mut removed = vec![false; n];
    for &v in cut {
        removed[v] = true;
    }
    removed
}

/// Component sizes of `g \ cut`, largest first.
pub fn component_census(g: &AdjGraph, cut: &[usize]) -> Vec<usize> {
    let mut sizes = g.components(&removed_mask(g.len(), cut)).1;
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

pub fn is_delta_cut(g: &AdjGraph, cut: &[usize], delta: Delta) -> bool {
    component_census(g, cut)
        .first()
        .is_none_or(|&m| delta.allows(m, g.len()))
}

/// Builds a verified upper or exact report.
pub(crate) fn cut_report(
    g: &AdjGraph,
    subject: &str,
    delta: Delta,
    mut cut: Vec<usize>,
    bound: Bound,
    method: Method,
) -> Result<CutReport> {
    cut.sort_unstable();
    cut.dedup();
    let census = component_census(g, &cut);
    if let Some(&m) = census.first() {
        if !delta.allows(m, g.len()) {
            return Err(Error::InvalidCut {
                size: m,
                limit: format!("{delta} of {}", g.len()),
            });
        }
    }
    Ok(CutReport {
        subject: subject.to_string(),
        subject_size: g.len(),
        delta,
        bound,
        method,
        value: cut.len(),
        cut_set: cut,
        component_census: census,
        certificate: None,
        note: None,
    })
}

/// Which alternative of the partition lemma a δ-cut satisfies. The
/// partition is reported whenever it exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaOutcome {
    /// `|S| >= δ'|E|`.
    LargeCut,
    /// Components split into unions of sizes `a` and `b`, both `>= δ'|E|`.
    Partition { a: usize, b: usize },
    /// Neither alternative found. Cannot happen for a valid δ-cut.
    Failed,
}

impl LemmaOutcome {
    pub fn holds(self) -> bool {
        self != LemmaOutcome::Failed
    }
}

/// Checks the partition lemma for a δ-cut `cut` of `g`, building the
/// partition greedily from the largest component down.
pub fn verify_partition_lemma(g: &AdjGraph, cut: &[usize], delta: Delta) -> Result<LemmaOutcome> {
    let census = component_census(g, cut);
    let total = g.len() as u128;
    if let Some(&m) = census.first() {
        if !delta.allows(m, g.len()) {
            return Err(Error::InvalidCut {
                size: m,
                limit: format!("{delta} of {}", g.len()),
            });
        }
    }
    let (pn, pd) = delta.lemma_prime();
    let at_least = |x: usize| x as u128 * pd as u128 >= pn as u128 * total;
    let all: usize = census.iter().sum();
    let mut a = 0;
    for &c in &census {
        a += c;
        if at_least(a) {
            break;
        }
    }
    let b = all - a;
    if at_least(a) && at_least(b) {
        return Ok(LemmaOutcome::Partition { a, b });
    }
    let mut cut_size = cut.to_vec();
    cut_size.sort_unstable();
    cut_size.dedup();
    Ok(if at_least(cut_size.len()) {
        LemmaOutcome::LargeCut
    } else {
        LemmaOutcome::Failed
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_arithmetic() {
        let d: Delta = "2/4".parse().unwrap();
        assert_eq!(d, Delta::half());
        assert!(d.allows(4, 9));
        assert!(!d.allows(5, 9));
        assert_eq!(d.limit(9), 4);
        assert_eq!(d.lemma_prime(), (1, 8));
        assert!("1/1".parse::<Delta>().is_err());
        assert!("0.5".parse::<Delta>().is_err());
        assert_eq!(Delta::new(3, 4).unwrap().lemma_prime(), (1, 16));
    }

    #[test]
    fn lemma_on_cycle_and_path() {
        let c = AdjGraph::cycle(12);
        assert_eq!(
            verify_partition_lemma(&c, &[0, 6], Delta::half()).unwrap(),
            LemmaOutcome::Partition { a: 5, b: 5 }
        );
        let p = AdjGraph::path(9);
        assert_eq!(
            verify_partition_lemma(&p, &[4], Delta::half()).unwrap(),
            LemmaOutcome::Partition { a: 4, b: 4 }
        );
        let all: Vec<usize> = (0..9).collect();
        assert_eq!(
            verify_partition_lemma(&p, &all, Delta::half()).unwrap(),
            LemmaOutcome::LargeCut
        );
        assert!(matches!(
            verify_partition_lemma(&p, &[0], Delta::half()),
            Err(Error::InvalidCut { size: 8, .. })
        ));
    }

    #[test]
    fn report_rejects_invalid_cut() {
        let p = AdjGraph::path(9);
        assert!(cut_report(
            &p,
            "path",
            Delta::half(),
            vec![1],
            Bound::Upper,
            Method::LayerSweep
        )
        .is_err());
        let r = cut_report(
            &p,
            "path",
            Delta::half(),
            vec![4],
            Bound::Upper,
            Method::LayerSweep,
        )
        .unwrap();
        assert_eq!(r.component_census, vec![4, 4]);
    }
}
