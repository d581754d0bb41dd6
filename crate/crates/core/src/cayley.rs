//! Finite pieces of the Cayley graph of a graph product: balls, spheres,
//! thickened spheres, growth tables, persistence and intrinsic distortion.
//!
//! Elements are normal-form words. Edges join `x` and `x * s` for every
//! non-identity vertex element `s`.

use std::collections::HashSet;
use std::fmt;
use std::io::{self, Write};

use indexmap::IndexSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adjacency::{AdjGraph, UNREACHED};
use crate::error::{Error, Result};
use crate::stats::{linear_fit, LinearFit};
use crate::words::{GraphProduct, Word};

/// Default element cap for enumerations.
pub const DEFAULT_CAP: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    Ball(usize),
    Sphere(usize),
    ThickenedSphere { n: usize, t: usize },
    Custom,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Ball(n) => write!(f, "ball({n})"),
            Tag::Sphere(n) => write!(f, "sphere({n})"),
            Tag::ThickenedSphere { n, t } => write!(f, "thickened_sphere({n},{t})"),
            Tag::Custom => f.write_str("custom"),
        }
    }
}

/// The ball `B_n` about the identity, stored layer by layer.
#[derive(Debug, Clone)]
pub struct Ball {
    elements: IndexSet<Word>,
    /// `level_start[k]..level_start[k + 1]` is the sphere `S_k`.
    level_start: Vec<usize>,
}

impl Ball {
    pub fn radius(&self) -> usize {
        self.level_start.len() - 2
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &IndexSet<Word> {
        &self.elements
    }

    pub fn sphere_range(&self, k: usize) -> std::ops::Range<usize> {
        self.level_start[k]..self.level_start[k + 1]
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        self.level_start.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Distance from the identity, if the element lies in the ball.
    pub fn norm_of(&self, w: &Word) -> Option<usize> {
        let i = self.elements.get_index_of(w)?;
        Some(self.level_start.partition_point(|&s| s <= i) - 1)
    }
}

/// Breadth-first enumeration of `B_n`. Aborts as soon as the next sphere,
/// projected from the last growth ratio, would push the ball over `cap`.
pub fn enumerate_ball(gp: &GraphProduct, n: usize, cap: usize) -> Result<Ball> {
    let gens = gp.generators();
    let mut elements = IndexSet::new();
    elements.insert(Word::empty());
    let mut level_start = vec![0, 1];
    for k in 1..=n {
        let (lo, hi) = (level_start[k - 1], level_start[k]);
        let last = hi - lo;
        let before = if k >= 2 {
            level_start[k - 1] - level_start[k - 2]
        } else {
            1
        };
        let projected = hi as f64 + last as f64 * (last as f64 / before.max(1) as f64);
        if projected > cap as f64 {
            return Err(Error::CapExceeded { cap, radius: k });
        }
        for i in lo..hi {
            for &g in &gens {
                let x = gp.mul_syllable(&elements[i], g);
                elements.insert(x);
            }
            if elements.len() > cap {
                return Err(Error::CapExceeded { cap, radius: k });
            }
        }
        level_start.push(elements.len());
    }
    Ok(Ball {
        elements,
        level_start,
    })
}

/// An induced finite subgraph of the Cayley graph.
#[derive(Debug, Clone)]
pub struct CayleySubgraph {
    elements: IndexSet<Word>,
    graph: AdjGraph,
    tag: Tag,
    center: Word,
}

impl CayleySubgraph {
    /// Induced subgraph on arbitrary elements (duplicates dropped).
    pub fn custom(
        gp: &GraphProduct,
        center: Word,
        elements: impl IntoIterator<Item = Word>,
    ) -> Self {
        let elements: IndexSet<Word> = elements.into_iter().collect();
        let graph = induced_adjacency(gp, &elements);
        CayleySubgraph {
            elements,
            graph,
            tag: Tag::Custom,
            center,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn tag(&self) -> Tag {
        self.tag
    }

    pub fn center(&self) -> &Word {
        &self.center
    }

    pub fn graph(&self) -> &AdjGraph {
        &self.graph
    }

    pub fn elements(&self) -> &IndexSet<Word> {
        &self.elements
    }

    pub fn word(&self, i: usize) -> &Word {
        &self.elements[i]
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.elements.get_index_of(w)
    }

    pub fn is_connected(&self) -> bool {
        self.graph.is_connected()
    }

    /// `index,word,neighbors` with neighbours space-separated.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "index,word,neighbors")?;
        for (i, w) in self.elements.iter().enumerate() {
            let nb: Vec<String> = self.graph.neighbors(i).iter().map(u32::to_string).collect();
            writeln!(out, "{i},{w},{}", nb.join(" "))?;
        }
        Ok(())
    }
}

fn induced_adjacency(gp: &GraphProduct, elements: &IndexSet<Word>) -> AdjGraph {
    let gens = gp.generators();
    let lists = elements
        .iter()
        .map(|w| {
            let mut nb: Vec<u32> = gens
                .iter()
                .filter_map(|&g| elements.get_index_of(&gp.mul_syllable(w, g)))
                .map(|j| j as u32)
                .collect();
            nb.sort_unstable();
            nb
        })
        .collect();
    AdjGraph::from_lists(lists)
}

pub fn ball(gp: &GraphProduct, n: usize, cap: usize) -> Result<CayleySubgraph> {
    let b = enumerate_ball(gp, n, cap)?;
    let graph = induced_adjacency(gp, &b.elements);
    Ok(CayleySubgraph {
        elements: b.elements,
        graph,
        tag: Tag::Ball(n),
        center: Word::empty(),
    })
}

pub fn sphere(gp: &GraphProduct, n: usize, cap: usize) -> Result<CayleySubgraph> {
    let b = enumerate_ball(gp, n, cap)?;
    let elements: IndexSet<Word> = b.elements[b.sphere_range(n)].iter().cloned().collect();
    let graph = induced_adjacency(gp, &elements);
    Ok(CayleySubgraph {
        elements,
        graph,
        tag: Tag::Sphere(n),
        center: Word::empty(),
    })
}

/// `S_n^{+t}`: every element within distance `t` of the sphere `S_n`, found
/// by multi-source BFS from `S_n`. The cap bounds `|B_n|` and `|S_n^{+t}|`.
pub fn thickened_sphere(
    gp: &GraphProduct,
    n: usize,
    t: usize,
    cap: usize,
) -> Result<CayleySubgraph> {
    if t < 1 || n <= t {
        return Err(Error::InvalidParameter(format!(
            "thickened sphere needs t >= 1 and n > t (n = {n}, t = {t})"
        )));
    }
    let b = enumerate_ball(gp, n, cap)?;
    let gens = gp.generators();
    let mut elements: IndexSet<Word> = b.elements[b.sphere_range(n)].iter().cloned().collect();
    drop(b);
    let mut lo = 0;
    for k in 1..=t {
        let hi = elements.len();
        for i in lo..hi {
            for &g in &gens {
                let x = gp.mul_syllable(&elements[i], g);
                elements.insert(x);
            }
            if elements.len() > cap {
                return Err(Error::CapExceeded { cap, radius: n + k });
            }
        }
        lo = hi;
    }
    let graph = induced_adjacency(gp, &elements);
    Ok(CayleySubgraph {
        elements,
        graph,
        tag: Tag::ThickenedSphere { n, t },
        center: Word::empty(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthClass {
    Stabilized,
    Subexponential,
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub ball: usize,
    pub sphere: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthTable {
    pub rows: Vec<GrowthRow>,
    /// Slope of `ln |B_n|` against `n` over the fit window; 0 once stabilized.
    pub alpha_hat: f64,
    pub fit: Option<LinearFit>,
    pub fit_from: usize,
    pub class: GrowthClass,
}

impl GrowthTable {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n,ball,sphere")?;
        for r in &self.rows {
            writeln!(out, "{},{},{}", r.n, r.ball, r.sphere)?;
        }
        Ok(())
    }
}

/// Ball and sphere counts for `n = 0..=n_max`, with `ln |B_n|` fitted on
/// `n in [fit_from, n_max]`.
pub fn growth_table(
    gp: &GraphProduct,
    n_max: usize,
    fit_from: usize,
    cap: usize,
) -> Result<GrowthTable> {
    let b = enumerate_ball(gp, n_max, cap)?;
    let spheres = b.sphere_sizes();
    let mut ball = 0;
    let rows: Vec<GrowthRow> = spheres
        .iter()
        .enumerate()
        .map(|(n, &s)| {
            ball += s;
            GrowthRow { n, ball, sphere: s }
        })
        .collect();
    let window: Vec<&GrowthRow> = rows.iter().filter(|r| r.n >= fit_from.max(1)).collect();
    let xs: Vec<f64> = window.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = window.iter().map(|r| (r.ball as f64).ln()).collect();
    let fit = linear_fit(&xs, &ys);

    if rows.iter().skip(1).any(|r| r.sphere == 0) {
        return Ok(GrowthTable {
            rows,
            alpha_hat: 0.0,
            fit,
            fit_from,
            class: GrowthClass::Stabilized,
        });
    }
    let log_s: Vec<f64> = window.iter().map(|r| (r.sphere as f64).ln()).collect();
    let log_n: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let class = match (linear_fit(&xs, &log_s), linear_fit(&log_n, &log_s)) {
        (Some(exp), Some(poly))
            if exp.slope_significantly_positive() && exp.r_squared > poly.r_squared =>
        {
            GrowthClass::Exponential
        }
        _ => GrowthClass::Subexponential,
    };
    Ok(GrowthTable {
        rows,
        alpha_hat: fit.map_or(0.0, |f| f.slope),
        fit,
        fit_from,
        class,
    })
}

/// Pairs `(x, x * s)` with `x` a random word of at most `len` syllables and
/// `s` a uniform generator.
pub fn random_neighbor_pairs(
    gp: &GraphProduct,
    seed: u64,
    count: usize,
    len: usize,
) -> Vec<(Word, Word)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = gp.generators();
    (0..count)
        .map(|_| {
            let x = gp.random_word_with(&mut rng, len);
            let g = gens[rng.gen_range(0..gens.len())];
            let y = gp.mul_syllable(&x, g);
            (x, y)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct PersistenceRow {
    pub x: String,
    pub y: String,
    pub size_x: usize,
    pub size_y: usize,
    pub intersection: usize,
    pub ratio: f64,
    /// `intersection * |B_t| >= |A(r)|`.
    pub holds: bool,
    /// Every element of `A_x(r)` lies in `B(x, 4r)`.
    pub within_4r: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PersistenceReport {
    pub r: usize,
    pub t: usize,
    pub family_size: usize,
    pub ball_t: usize,
    pub rows: Vec<PersistenceRow>,
}

impl PersistenceReport {
    pub fn violations(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| !r.holds || !r.within_4r || r.size_x != r.size_y)
            .count()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,y,r,t,size_x,size_y,intersection,ratio,bound,holds")?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{:.6},{:.6},{}",
                row.x,
                row.y,
                self.r,
                self.t,
                row.size_x,
                row.size_y,
                row.intersection,
                row.ratio,
                1.0 / self.ball_t as f64,
                row.holds
            )?;
        }
        Ok(())
    }
}

/// Overlap of the translates `A_x(r) = x * S_r^{+t}` for neighbouring `x, y`.
/// `x == y` is accepted and gives ratio 1.
pub fn persistence_check(
    gp: &GraphProduct,
    r: usize,
    t: usize,
    pairs: &[(Word, Word)],
    cap: usize,
) -> Result<PersistenceReport> {
    let family = thickened_sphere(gp, r, t, cap)?.elements;
    let ball_t = enumerate_ball(gp, t, cap)?.len();
    let mut rows = Vec::with_capacity(pairs.len());
    for (x, y) in pairs {
        let d = gp.distance(x, y)?;
        if d > 1 {
            return Err(Error::NotAdjacent);
        }
        let ax: HashSet<Word> = family
            .iter()
            .map(|a| gp.multiply(x, a))
            .collect::<Result<_>>()?;
        let ay: HashSet<Word> = family
            .iter()
            .map(|a| gp.multiply(y, a))
            .collect::<Result<_>>()?;
        let intersection = ax.intersection(&ay).count();
        let mut within_4r = true;
        for z in &ax {
            within_4r &= gp.distance(x, z)? <= 4 * r;
        }
        rows.push(PersistenceRow {
            x: x.to_string(),
            y: y.to_string(),
            size_x: ax.len(),
            size_y: ay.len(),
            intersection,
            ratio: intersection as f64 / family.len() as f64,
            holds: intersection * ball_t >= family.len(),
            within_4r,
        });
    }
    Ok(PersistenceReport {
        r,
        t,
        family_size: family.len(),
        ball_t,
        rows,
    })
}

/// BFS distance inside `s`; `None` when `x` and `y` lie in different
/// components.
pub fn intrinsic_distance(s: &CayleySubgraph, x: &Word, y: &Word) -> Result<Option<usize>> {
    let i = s.index_of(x).ok_or(Error::NotInSubgraph)?;
    let j = s.index_of(y).ok_or(Error::NotInSubgraph)?;
    let d = s.graph.bfs(&[i], None)[j];
    Ok((d != UNREACHED).then_some(d as usize))
}

#[derive(Debug, Clone, Serialize)]
pub struct DistortionRow {
    pub x: String,
    pub y: String,
    pub extrinsic: usize,
    pub intrinsic: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistortionReport {
    pub n: usize,
    pub t: usize,
    pub threshold: usize,
    pub connected: bool,
    pub rows: Vec<DistortionRow>,
    /// `ln d_int` against `d_ext` over rows with `d_ext >= threshold`.
    pub fit: Option<LinearFit>,
}

impl DistortionReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,y,n,t,extrinsic,intrinsic")?;
        for r in &self.rows {
            let d = r.intrinsic.map_or("inf".to_string(), |d| d.to_string());
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.x, r.y, self.n, self.t, r.extrinsic, d
            )?;
        }
        Ok(())
    }
}

/// Threshold `9 * delta_hat + 6 * t` above which pairs enter the fit.
pub fn distortion_threshold(delta_hat: usize, t: usize) -> usize {
    9 * delta_hat + 6 * t
}

/// `count` pairs drawn uniformly from the sphere `S_n`.
pub fn random_sphere_pairs(
    gp: &GraphProduct,
    n: usize,
    count: usize,
    seed: u64,
    cap: usize,
) -> Result<Vec<(Word, Word)>> {
    let b = enumerate_ball(gp, n, cap)?;
    let sphere: Vec<&Word> = b.elements[b.sphere_range(n)].iter().collect();
    if sphere.is_empty() {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let x = *sphere.choose(&mut rng).unwrap();
            let y = *sphere.choose(&mut rng).unwrap();
            (x.clone(), y.clone())
        })
        .collect())
}

/// Extrinsic against intrinsic distances for pairs of `S_n^{+t}`.
pub fn distortion_report(
    gp: &GraphProduct,
    n: usize,
    t: usize,
    pairs: &[(Word, Word)],
    threshold: usize,
    cap: usize,
) -> Result<DistortionReport> {
    let s = thickened_sphere(gp, n, t, cap)?;
    let mut rows = Vec::with_capacity(pairs.len());
    for (x, y) in pairs {
        rows.push(DistortionRow {
            x: x.to_string(),
            y: y.to_string(),
            extrinsic: gp.distance(x, y)?,
            intrinsic: intrinsic_distance(&s, x, y)?,
        });
    }
    let used: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.extrinsic >= threshold.max(1))
        .filter_map(|r| r.intrinsic.map(|d| (r.extrinsic as f64, (d as f64).ln())))
        .collect();
    let xs: Vec<f64> = used.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = used.iter().map(|p| p.1).collect();
    Ok(DistortionReport {
        n,
        t,
        threshold,
        connected: s.is_connected(),
        rows,
        fit: linear_fit(&xs, &ys),
    })
}
