//! The classification report emitted by `coarsesep classify`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::classify::{self, Answer, Regime, Verdict};
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;

pub const SCHEMA: &str = include_str!("../../schema/classify-report.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Detail {
    pub answer: String,
    pub witness: Option<Vec<usize>>,
    pub reason: String,
    pub rules: Vec<&'static str>,
}

impl From<Verdict> for Detail {
    fn from(v: Verdict) -> Self {
        Detail {
            answer: v.answer.as_str().to_string(),
            witness: v.witness.map(|w| w.to_vec()),
            reason: v.reason,
            rules: v.rules,
        }
    }
}

impl Detail {
    fn not_applicable(e: &Error) -> Self {
        Detail {
            answer: "not_applicable".to_string(),
            witness: None,
            reason: e.to_string(),
            rules: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyReport {
    pub graph: String,
    pub vertices: usize,
    pub finite: String,
    pub virtually_cyclic: String,
    pub hyperbolic: String,
    pub one_ended: String,
    pub virtual_surface: String,
    pub splits_over_finite: String,
    pub splits_over_virtually_cyclic: String,
    pub coarsely_separable_subexp: String,
    pub regime: Option<Regime>,
    #[serde(serialize_with = "ser_details")]
    pub details: Vec<(&'static str, Detail)>,
}

fn ser_details<S: serde::Serializer>(
    d: &[(&'static str, Detail)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(d.iter().map(|(k, v)| (k, v)))
}

fn lift(r: Result<Verdict>) -> Detail {
    match r {
        Ok(v) => v.into(),
        Err(e) => Detail::not_applicable(&e),
    }
}

impl ClassifyReport {
    pub fn build(name: &str, g: &LabeledGraph) -> Self {
        let details: Vec<(&'static str, Detail)> = vec![
            ("finite", classify::is_finite_group(g).into()),
            ("virtually_cyclic", classify::is_virtually_cyclic(g).into()),
            ("hyperbolic", classify::is_hyperbolic(g).into()),
            ("one_ended", classify::is_one_ended(g).into()),
            ("virtual_surface", classify::is_virtual_surface(g).into()),
            ("splits_over_finite", lift(classify::splits_over_finite(g))),
            (
                "splits_over_virtually_cyclic",
                lift(classify::splits_over_virtually_cyclic(g)),
            ),
            (
                "coarsely_separable_subexp",
                lift(classify::is_coarsely_separable_subexp(g)),
            ),
        ];
        let answer = |i: usize| details[i].1.answer.clone();
        ClassifyReport {
            graph: name.to_string(),
            vertices: g.vertex_count(),
            finite: answer(0),
            virtually_cyclic: answer(1),
            hyperbolic: answer(2),
            one_ended: answer(3),
            virtual_surface: answer(4),
            splits_over_finite: answer(5),
            splits_over_virtually_cyclic: answer(6),
            coarsely_separable_subexp: answer(7),
            regime: classify::regime(g).ok(),
            details,
        }
    }

    pub fn has_undecided(&self) -> bool {
        self.details
            .iter()
            .any(|(_, d)| d.answer == Answer::Undecided.as_str())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("graph: {} ({} vertices)\n", self.graph, self.vertices);
        for (name, d) in &self.details {
            let _ = write!(out, "{name:<30} {:<15}", d.answer);
            if let Some(w) = &d.witness {
                let _ = write!(out, " witness {w:?}");
            }
            let _ = writeln!(out, " {}", d.reason);
            if !d.rules.is_empty() {
                let _ = writeln!(out, "{:<46} rules: {}", "", d.rules.join(", "));
            }
        }
        match self.regime {
            Some(r) => {
                let _ = writeln!(out, "regime: {r:?}");
            }
            None => out.push_str("regime: n/a\n"),
        }
        out
    }
}
