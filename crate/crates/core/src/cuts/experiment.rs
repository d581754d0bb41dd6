//! Cut-growth experiments on thickened spheres and separation-profile
//! estimates on balls and thickened spheres.

use std::io::{self, Write};
use std::time::Instant;

use serde::Serialize;

use super::flow::{cut_witness, flow_far_pair_lower_bound, PairPolicy};
use super::{
    component_census, exact_min_cut, heuristic_cut, verify_partition_lemma, Bound, CutReport,
    Delta, HeuristicBudget, LemmaOutcome, Method,
};
use crate::cayley::{self, CayleySubgraph};
use crate::error::{Error, Result};
use crate::stats::{linear_fit, LinearFit};
use crate::words::GraphProduct;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub t: usize,
    pub delta: Delta,
    pub n_min: usize,
    pub n_max: usize,
    pub seed: u64,
    pub cap: usize,
    pub exact_threshold: usize,
    pub budget: HeuristicBudget,
    pub rho: f64,
    pub max_pairs: usize,
    /// Write measured runtimes to CSV. Off by default so reruns are
    /// byte-identical.
    pub record_timings: bool,
}

impl ExperimentConfig {
    pub fn new(t: usize, delta: Delta, n_min: usize, n_max: usize, seed: u64) -> Self {
        ExperimentConfig {
            t,
            delta,
            n_min,
            n_max,
            seed,
            cap: cayley::DEFAULT_CAP,
            exact_threshold: super::DEFAULT_EXACT_THRESHOLD,
            budget: HeuristicBudget::with_seed(seed),
            rho: 0.5,
            max_pairs: 32,
            record_timings: false,
        }
    }

    fn policy(&self, radius: usize, n: usize) -> PairPolicy {
        PairPolicy {
            rho: self.rho,
            max_pairs: self.max_pairs,
            radius,
            seed: self.seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentRow {
    pub n: usize,
    pub size: usize,
    pub connected: bool,
    pub upper: CutReport,
    pub lower: CutReport,
    pub exact: Option<CutReport>,
    pub lemma: Vec<LemmaOutcome>,
    pub runtime_ms: u128,
}

/// Fit of `ln(bound)` against `n`, with a verbal flag.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaFit {
    pub fit: Option<LinearFit>,
    pub flag: String,
}

impl LambdaFit {
    fn from_points(xs: &[f64], values: &[usize]) -> Self {
        let (xs, ys): (Vec<f64>, Vec<f64>) = xs
            .iter()
            .zip(values)
            .filter(|(_, &v)| v > 0)
            .map(|(&x, &v)| (x, (v as f64).ln()))
            .unzip();
        let fit = linear_fit(&xs, &ys);
        let flag = match &fit {
            None => "insufficient points",
            Some(f) if f.slope_significantly_positive() => "exponential cut growth",
            Some(f) if f.slope_indistinguishable_from_zero() => "subexponential cut growth",
            Some(_) => "inconclusive",
        };
        LambdaFit {
            fit,
            flag: flag.to_string(),
        }
    }

    pub fn slope(&self) -> Option<f64> {
        self.fit.map(|f| f.slope)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentTable {
    pub config: ExperimentConfig,
    pub rows: Vec<ExperimentRow>,
    pub lambda_upper: LambdaFit,
    pub lambda_lower: LambdaFit,
    /// Set when the element cap stopped the run early.
    pub truncated: Option<String>,
}

impl ExperimentTable {
    pub fn uppers(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.upper.value).collect()
    }

    pub fn lowers(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.lower.value).collect()
    }

    pub fn lemma_failures(&self) -> usize {
        self.rows
            .iter()
            .flat_map(|r| &r.lemma)
            .filter(|o| !o.holds())
            .count()
    }

    /// Every cut report in the table, for auditing.
    pub fn cut_reports(&self) -> impl Iterator<Item = &CutReport> {
        self.rows.iter().flat_map(|r| {
            std::iter::once(&r.upper)
                .chain(std::iter::once(&r.lower))
                .chain(r.exact.as_ref())
        })
    }

    fn flag(&self) -> String {
        format!(
            "upper:{};lower:{}",
            self.lambda_upper.flag, self.lambda_lower.flag
        )
    }

    /// `n,t,delta,size_subject,upper,lower,exact,lambda_fit_flag,runtime_ms,seed`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "n,t,delta,size_subject,upper,lower,exact,lambda_fit_flag,runtime_ms,seed"
        )?;
        let flag = self.flag();
        for r in &self.rows {
            let exact = r
                .exact
                .as_ref()
                .map(|e| e.value.to_string())
                .unwrap_or_default();
            let ms = if self.config.record_timings {
                r.runtime_ms.to_string()
            } else {
                String::new()
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.n,
                self.config.t,
                self.config.delta,
                r.size,
                r.upper.value,
                r.lower.value,
                exact,
                flag,
                ms,
                self.config.seed
            )?;
        }
        Ok(())
    }

    /// Whitespace-separated `n size upper lower` for plotting.
    pub fn write_dat<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# n size upper lower")?;
        for r in &self.rows {
            writeln!(
                out,
                "{} {} {} {}",
                r.n, r.size, r.upper.value, r.lower.value
            )?;
        }
        if let Some(note) = &self.truncated {
            writeln!(out, "# {note}")?;
        }
        Ok(())
    }
}

/// Upper, lower and (when small) exact cut bounds for one subject. Every
/// upper or exact cut is checked against the partition lemma.
fn bound_subject(
    s: &CayleySubgraph,
    delta: Delta,
    budget: HeuristicBudget,
    policy: PairPolicy,
    exact_threshold: usize,
    subject: &str,
) -> Result<(CutReport, CutReport, Option<CutReport>, Vec<LemmaOutcome>)> {
    let g = s.graph();
    let upper = heuristic_cut(g, delta, budget, subject)?;
    let exact = if g.len() <= exact_threshold.min(64) {
        Some(exact_min_cut(g, delta, exact_threshold, subject)?)
    } else {
        None
    };
    let best_cut = exact.as_ref().unwrap_or(&upper);
    let lower = if g.is_connected() {
        let witness = cut_witness(g, &best_cut.cut_set, policy.radius);
        flow_far_pair_lower_bound(g, delta, policy, witness, subject)?
    } else {
        CutReport {
            subject: subject.to_string(),
            subject_size: g.len(),
            delta,
            bound: Bound::Lower,
            method: Method::FlowFarPairs,
            value: 0,
            cut_set: Vec::new(),
            component_census: component_census(g, &[]),
            certificate: None,
            note: Some("disconnected subject".into()),
        }
    };
    let mut lemma = vec![verify_partition_lemma(g, &upper.cut_set, delta)?];
    if let Some(e) = &exact {
        lemma.push(verify_partition_lemma(g, &e.cut_set, delta)?);
    }
    Ok((upper, lower, exact, lemma))
}

/// For each `n` in range, bounds the minimal δ-cut of `S_n^{+t}` from above
/// and below and fits `λ̂` to both series.
pub fn cut_growth_experiment(gp: &GraphProduct, cfg: ExperimentConfig) -> Result<ExperimentTable> {
    if cfg.t == 0 || cfg.n_min <= cfg.t || cfg.n_min > cfg.n_max {
        return Err(Error::InvalidParameter(format!(
            "need 0 < t < n_min <= n_max, got t={} n={}..={}",
            cfg.t, cfg.n_min, cfg.n_max
        )));
    }
    let mut rows = Vec::new();
    let mut truncated = None;
    for n in cfg.n_min..=cfg.n_max {
        let start = Instant::now();
        let s = match cayley::thickened_sphere(gp, n, cfg.t, cfg.cap) {
            Ok(s) => s,
            Err(e @ Error::CapExceeded { .. }) => {
                truncated = Some(format!("stopped before n={n}: {e}"));
                break;
            }
            Err(e) => return Err(e),
        };
        let subject = format!("S_{n}^+{}", cfg.t);
        let (upper, lower, exact, lemma) = bound_subject(
            &s,
            cfg.delta,
            cfg.budget,
            cfg.policy(n / 2, n),
            cfg.exact_threshold,
            &subject,
        )?;
        rows.push(ExperimentRow {
            n,
            size: s.len(),
            connected: s.is_connected(),
            upper,
            lower,
            exact,
            lemma,
            runtime_ms: start.elapsed().as_millis(),
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ups: Vec<usize> = rows.iter().map(|r| r.upper.value).collect();
    let lows: Vec<usize> = rows.iter().map(|r| r.lower.value).collect();
    Ok(ExperimentTable {
        config: cfg,
        lambda_upper: LambdaFit::from_points(&xs, &ups),
        lambda_lower: LambdaFit::from_points(&xs, &lows),
        rows,
        truncated,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileSubject {
    Ball,
    ThickenedSphere,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileRow {
    pub subject: ProfileSubject,
    pub n: usize,
    pub size: usize,
    pub upper: usize,
    pub lower: usize,
    pub exact: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SepProfile {
    pub rows: Vec<ProfileRow>,
    /// Slope of `ln(lower)` against `ln(size)`.
    pub epsilon_lower: Option<LinearFit>,
    pub epsilon_upper: Option<LinearFit>,
    pub warning: Option<String>,
    pub lemma_failures: usize,
    pub seed: u64,
}

impl SepProfile {
    /// `subject,n,size,upper,lower,exact,seed`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "subject,n,size,upper,lower,exact,seed")?;
        for r in &self.rows {
            let subject = match r.subject {
                ProfileSubject::Ball => "ball",
                ProfileSubject::ThickenedSphere => "thickened_sphere",
            };
            let exact = r.exact.map(|e| e.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{subject},{},{},{},{},{exact},{}",
                r.n, r.size, r.upper, r.lower, self.seed
            )?;
        }
        Ok(())
    }
}

fn log_log_fit(rows: &[ProfileRow], value: impl Fn(&ProfileRow) -> usize) -> Option<LinearFit> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| value(r) > 0)
        .map(|r| ((r.size as f64).ln(), (value(r) as f64).ln()))
        .unzip();
    linear_fit(&xs, &ys)
}

/// Half-cut bounds for balls `B_n` and thickened spheres `S_n^{+1}`,
/// `1 <= n <= n_max`, and log-log fits of the bounds against size. A finite
/// group stops the table once the ball stops growing.
pub fn sep_profile_estimate(
    gp: &GraphProduct,
    n_max: usize,
    seed: u64,
    cap: usize,
) -> Result<SepProfile> {
    let delta = Delta::half();
    let budget = HeuristicBudget::with_seed(seed);
    let mut rows = Vec::new();
    let mut warning = None;
    let mut lemma_failures = 0;
    let mut previous = 0;
    for n in 1..=n_max {
        let b = match cayley::ball(gp, n, cap) {
            Ok(b) => b,
            Err(e @ Error::CapExceeded { .. }) => {
                warning = Some(format!("stopped before n={n}: {e}"));
                break;
            }
            Err(e) => return Err(e),
        };
        if b.len() == previous {
            warning = Some(format!(
                "finite group of order {previous}; table stops at n={}",
                n - 1
            ));
            break;
        }
        previous = b.len();
        let mut subjects = vec![(ProfileSubject::Ball, b)];
        if n > 1 {
            match cayley::thickened_sphere(gp, n, 1, cap) {
                Ok(s) => subjects.push((ProfileSubject::ThickenedSphere, s)),
                Err(e @ Error::CapExceeded { .. }) => {
                    warning = Some(format!("stopped at n={n}: {e}"));
                }
                Err(e) => return Err(e),
            }
        }
        for (kind, s) in subjects {
            let policy = PairPolicy::new(s.graph().len().min(n) / 2, seed ^ n as u64);
            let name = format!("{kind:?}_{n}");
            let (upper, lower, exact, lemma) = bound_subject(
                &s,
                delta,
                budget,
                policy,
                super::DEFAULT_EXACT_THRESHOLD,
                &name,
            )?;
            lemma_failures += lemma.iter().filter(|o| !o.holds()).count();
            rows.push(ProfileRow {
                subject: kind,
                n,
                size: s.len(),
                upper: upper.value,
                lower: lower.value,
                exact: exact.map(|e| e.value),
            });
        }
        if warning.is_some() {
            break;
        }
    }
    Ok(SepProfile {
        epsilon_lower: log_log_fit(&rows, |r| r.lower),
        epsilon_upper: log_log_fit(&rows, |r| r.upper),
        rows,
        warning,
        lemma_failures,
        seed,
    })
}
