//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N: PASS|FAIL` line to standard error.

use std::collections::{HashMap, HashSet, VecDeque};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coarsesep::adjacency::AdjGraph;
use coarsesep::cayley::{self, DEFAULT_CAP};
use coarsesep::classify::{self, Answer};
use coarsesep::cli::{self, Manifest};
use coarsesep::cuts::{
    self, exact_min_cut, heuristic_cut, verify_partition_lemma, vertex_connectivity, CutReport,
    Delta, ExperimentTable, HeuristicBudget,
};
use coarsesep::graph::{FiniteGroup, LabeledGraph, VertexGroup};
use coarsesep::words::{GraphProduct, Syllable, Word};

const CLASSIFY_LIMIT: Duration = Duration::from_secs(1);
const WORDS_LIMIT: Duration = Duration::from_secs(30);
const GROWTH_LIMIT: Duration = Duration::from_secs(120);
const CUTS_LIMIT: Duration = Duration::from_secs(300);
const CONTRAST_LIMIT: Duration = Duration::from_secs(15 * 60);
const GROWTH_R2: f64 = 0.99;
const RANDOM_TRIPLES: usize = 10_000;
const RANDOM_RAW: usize = 10_000;
const CUT_CASES: usize = 200;
const FLOW_CASES: usize = 200;
const PERSIST_PAIRS: usize = 50;

/// Serializes the memory-heavy sections.
static HEAVY: Mutex<()> = Mutex::new(());

fn heavy() -> std::sync::MutexGuard<'static, ()> {
    HEAVY.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(n: usize, pass: bool, detail: &str) {
    let line = format!(
        "criterion {n}: {} {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn graph(name: &str) -> LabeledGraph {
    cli::load_graph(&root().join("graphs").join(format!("{name}.json"))).unwrap()
}

fn product(name: &str) -> GraphProduct {
    GraphProduct::new(graph(name)).unwrap()
}

fn manifest(name: &str) -> Manifest {
    Manifest::load(&root().join("manifests").join(format!("{name}.toml"))).unwrap()
}

struct Run {
    table: ExperimentTable,
    csv: Vec<u8>,
    elapsed: Duration,
}

fn run_manifest(name: &str) -> Run {
    let _guard = heavy();
    let m = manifest(name);
    let cfg = cli::experiment_config(&m).unwrap();
    let gp = cli::load_product(&m).unwrap();
    let start = Instant::now();
    let table = cuts::cut_growth_experiment(&gp, cfg).unwrap();
    let elapsed = start.elapsed();
    let mut csv = Vec::new();
    table.write_csv(&mut csv).unwrap();
    Run {
        table,
        csv,
        elapsed,
    }
}

fn z3_run() -> &'static Run {
    static RUN: OnceLock<Run> = OnceLock::new();
    RUN.get_or_init(|| run_manifest("cut-spheres-pentagon-Z3"))
}

fn z2_run() -> &'static Run {
    static RUN: OnceLock<Run> = OnceLock::new();
    RUN.get_or_init(|| run_manifest("cut-spheres-pentagon-Z2"))
}

// ---------------------------------------------------------------- 1

#[test]
fn criterion_1_classification() {
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut check = |name: &str, expect: &[(&str, Answer)]| {
        let g = graph(name);
        let start = Instant::now();
        let got = [
            ("hyperbolic", classify::is_hyperbolic(&g).answer),
            ("one_ended", classify::is_one_ended(&g).answer),
            ("virtual_surface", classify::is_virtual_surface(&g).answer),
            (
                "coarsely_separable",
                classify::is_coarsely_separable_subexp(&g).map_or(Answer::Undecided, |v| v.answer),
            ),
        ];
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        if elapsed >= CLASSIFY_LIMIT {
            failures.push(format!("{name} took {elapsed:?}"));
        }
        for (key, want) in expect {
            let have = got.iter().find(|(k, _)| k == key).unwrap().1;
            if have != *want {
                failures.push(format!("{name}.{key} = {have:?}, expected {want:?}"));
            }
        }
    };
    use Answer::{No, Yes};
    check(
        "pentagon-Z2",
        &[
            ("hyperbolic", Yes),
            ("one_ended", Yes),
            ("virtual_surface", Yes),
            ("coarsely_separable", Yes),
        ],
    );
    check(
        "pentagon-one-Z3",
        &[
            ("hyperbolic", Yes),
            ("one_ended", Yes),
            ("virtual_surface", No),
        ],
    );
    check("square-Z2", &[("hyperbolic", No)]);
    check("pentagon-Z3", &[("coarsely_separable", No)]);
    let pass = failures.is_empty();
    report(1, pass, &format!("slowest {slowest:?} {failures:?}"));
    assert!(pass, "{failures:?}");
}

// ---------------------------------------------------------------- 2

/// Independent model of a finite label: its multiplication.
#[derive(Clone, Copy)]
enum Model {
    Cyclic(usize),
    Klein,
}

impl Model {
    fn order(self) -> usize {
        match self {
            Model::Cyclic(k) => k,
            Model::Klein => 4,
        }
    }

    fn mul(self, a: usize, b: usize) -> usize {
        match self {
            Model::Cyclic(k) => (a + b) % k,
            Model::Klein => a ^ b,
        }
    }

    fn label(self) -> VertexGroup {
        match self {
            Model::Cyclic(k) => VertexGroup::cyclic(k).unwrap(),
            Model::Klein => {
                let rows: Vec<Vec<usize>> =
                    (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
                VertexGroup::Concrete(FiniteGroup::from_table(&rows).unwrap())
            }
        }
    }
}

/// Coordinates of a word in the direct product: each vertex's syllables
/// multiplied in order.
fn coords(models: &[Model], w: &Word) -> Vec<usize> {
    let mut c = vec![0; models.len()];
    for s in w.syllables() {
        let v = s.vertex as usize;
        c[v] = models[v].mul(c[v], s.elem as usize);
    }
    c
}

fn closure(gp: &GraphProduct) -> Vec<Word> {
    let gens = gp.generators();
    let mut seen = HashSet::new();
    let mut out = vec![Word::empty()];
    seen.insert(Word::empty());
    let mut queue = VecDeque::from([Word::empty()]);
    while let Some(w) = queue.pop_front() {
        for &g in &gens {
            let x = gp.mul_syllable(&w, g);
            if seen.insert(x.clone()) {
                out.push(x.clone());
                queue.push_back(x);
            }
        }
    }
    out
}

fn check_direct_product(models: &[Model]) -> Result<usize, String> {
    let n = models.len();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let g = LabeledGraph::new(models.iter().map(|m| m.label()).collect(), &edges).unwrap();
    let gp = GraphProduct::new(g).unwrap();
    let elements = closure(&gp);
    let expected: usize = models.iter().map(|m| m.order()).product();
    if elements.len() != expected {
        return Err(format!(
            "closure has {} elements, expected {expected}",
            elements.len()
        ));
    }
    let mut index = HashMap::new();
    for w in &elements {
        if index.insert(coords(models, w), w.clone()).is_some() {
            return Err(format!("coordinates collide at {w}"));
        }
    }
    for x in &elements {
        let cx = coords(models, x);
        for y in &elements {
            let cy = coords(models, y);
            let want: Vec<usize> = (0..n).map(|v| models[v].mul(cx[v], cy[v])).collect();
            let got = gp.multiply(x, y).unwrap();
            if index.get(&want) != Some(&got) {
                return Err(format!("{x} * {y} = {got}, table says {want:?}"));
            }
        }
    }
    Ok(expected)
}

fn random_identities(gp: &GraphProduct, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let e = Word::empty();
    for _ in 0..RANDOM_TRIPLES / 2 {
        let len = rng.gen_range(0..10);
        let x = gp.random_word_with(rng, len);
        let len = rng.gen_range(0..10);
        let y = gp.random_word_with(rng, len);
        let len = rng.gen_range(0..10);
        let z = gp.random_word_with(rng, len);
        let left = gp.multiply(&gp.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = gp.multiply(&x, &gp.multiply(&y, &z).unwrap()).unwrap();
        if left != right {
            return Err(format!("associativity fails on {x} | {y} | {z}"));
        }
        let xi = gp.inverse(&x).unwrap();
        if gp.multiply(&x, &xi).unwrap() != e || gp.multiply(&xi, &x).unwrap() != e {
            return Err(format!("inverse fails on {x}"));
        }
    }
    for _ in 0..RANDOM_RAW / 2 {
        let len = rng.gen_range(0..16);
        let raw: Vec<Syllable> = gp.random_raw(rng, len);
        let w = gp.reduce(&raw).unwrap();
        if gp.reduce(w.syllables()).unwrap() != w || !gp.is_normal_form(&w) {
            return Err(format!("reduce not idempotent on {w}"));
        }
    }
    Ok(())
}

#[test]
fn criterion_2_word_arithmetic() {
    let start = Instant::now();
    let labels = [
        Model::Cyclic(2),
        Model::Cyclic(3),
        Model::Cyclic(4),
        Model::Klein,
    ];
    let mut configs: Vec<Vec<Model>> = Vec::new();
    for &a in &labels {
        configs.push(vec![a]);
        for &b in &labels {
            configs.push(vec![a, b]);
            for &c in &labels {
                configs.push(vec![a, b, c]);
            }
        }
    }
    let mut failures = Vec::new();
    let (mut smallest, mut largest) = (usize::MAX, 0);
    for models in &configs {
        match check_direct_product(models) {
            Ok(size) => {
                smallest = smallest.min(size);
                largest = largest.max(size);
            }
            Err(e) => failures.push(e),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for name in ["pentagon-Z3", "hexagon-alternating"] {
        if let Err(e) = random_identities(&product(name), &mut rng) {
            failures.push(format!("{name}: {e}"));
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < WORDS_LIMIT && smallest == 2 && largest == 64;
    report(
        2,
        pass,
        &format!(
            "{} products of orders {smallest}..{largest}, {elapsed:?} {failures:?}",
            configs.len()
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------- 3

#[test]
fn criterion_3_growth() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let dihedral = cayley::growth_table(&product("dihedral"), 20, 1, DEFAULT_CAP).unwrap();
    for r in &dihedral.rows[1..] {
        if r.sphere != 2 {
            failures.push(format!("dihedral |S_{}| = {}", r.n, r.sphere));
        }
    }
    let free = cayley::growth_table(&product("free-z2-cubed"), 12, 1, DEFAULT_CAP).unwrap();
    for r in &free.rows[1..] {
        if r.sphere != 3 << (r.n - 1) {
            failures.push(format!("free |S_{}| = {}", r.n, r.sphere));
        }
    }
    let pentagon = cayley::growth_table(&product("pentagon-Z2"), 10, 4, DEFAULT_CAP).unwrap();
    let r2 = pentagon.fit.map_or(0.0, |f| f.r_squared);
    if r2 < GROWTH_R2 {
        failures.push(format!("pentagon R^2 {r2}"));
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < GROWTH_LIMIT;
    report(
        3,
        pass,
        &format!("pentagon-Z2 R^2 {r2:.5}, {elapsed:?} {failures:?}"),
    );
    assert!(pass);
}

// ---------------------------------------------------------------- 4

/// Largest component of `g` minus the vertices in `removed`.
fn largest_component(g: &AdjGraph, removed: u32) -> usize {
    let n = g.len();
    let mut seen = removed;
    let mut best = 0;
    for s in 0..n {
        if seen >> s & 1 == 1 {
            continue;
        }
        seen |= 1 << s;
        let mut stack = vec![s];
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for &w in g.neighbors(v) {
                if seen >> w & 1 == 0 {
                    seen |= 1 << w;
                    stack.push(w as usize);
                }
            }
        }
        best = best.max(size);
    }
    best
}

fn brute_min_cut(g: &AdjGraph, p: u64, q: u64) -> usize {
    let n = g.len();
    (0..1u32 << n)
        .filter(|&m| largest_component(g, m) as u64 * q <= p * n as u64)
        .map(|m| m.count_ones() as usize)
        .min()
        .unwrap()
}

fn connects(g: &AdjGraph, a: &[usize], b: &[usize], removed: u32) -> bool {
    let mut seen = removed;
    let mut stack = Vec::new();
    for &x in a {
        seen |= 1 << x;
        stack.push(x);
    }
    while let Some(v) = stack.pop() {
        if b.contains(&v) {
            return true;
        }
        for &w in g.neighbors(v) {
            if seen >> w & 1 == 0 {
                seen |= 1 << w;
                stack.push(w as usize);
            }
        }
    }
    false
}

fn brute_kappa(g: &AdjGraph, a: &[usize], b: &[usize]) -> usize {
    let fixed: u32 = a.iter().chain(b).fold(0, |m, &v| m | 1 << v);
    (0..1u32 << g.len())
        .filter(|&m| m & fixed == 0 && !connects(g, a, b, m))
        .map(|m| m.count_ones() as usize)
        .min()
        .unwrap()
}

/// Random induced subgraphs of a Cayley ball, half grown connected and half
/// arbitrary subsets.
fn random_subgraphs(count: usize, rng: &mut ChaCha8Rng) -> Vec<AdjGraph> {
    let ball = cayley::ball(&product("pentagon-Z3"), 3, DEFAULT_CAP).unwrap();
    let big = ball.graph();
    (0..count)
        .map(|i| {
            let k = rng.gen_range(2..=14);
            let mut keep = vec![rng.gen_range(0..big.len())];
            while keep.len() < k {
                let v = if i % 2 == 0 {
                    let u = keep[rng.gen_range(0..keep.len())];
                    let nb = big.neighbors(u);
                    nb[rng.gen_range(0..nb.len())] as usize
                } else {
                    let u = keep[rng.gen_range(0..keep.len())];
                    let d = big.bfs(&[u], None);
                    let near: Vec<usize> = (0..big.len()).filter(|&w| d[w] <= 2).collect();
                    near[rng.gen_range(0..near.len())]
                };
                if !keep.contains(&v) {
                    keep.push(v);
                }
            }
            big.induced(&keep)
        })
        .collect()
}

fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> AdjGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    AdjGraph::from_edges(n, &edges)
}

const DELTAS: [(u64, u64); 5] = [(1, 4), (1, 3), (1, 2), (2, 3), (3, 4)];

#[test]
fn criterion_4_cut_solvers() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    for (i, g) in random_subgraphs(CUT_CASES, &mut rng).iter().enumerate() {
        let (p, q) = DELTAS[i % DELTAS.len()];
        let got = exact_min_cut(g, Delta::new(p, q).unwrap(), 28, "random")
            .unwrap()
            .value;
        let want = brute_min_cut(g, p, q);
        if got != want {
            failures.push(format!("cut case {i}: exact {got}, brute force {want}"));
        }
    }
    let mut flows = 0;
    while flows < FLOW_CASES {
        let n = rng.gen_range(3..=12);
        let g = random_graph(n, rng.gen_range(0.15..0.6), &mut rng);
        let (a, b) = if flows % 2 == 0 {
            (vec![rng.gen_range(0..n)], vec![rng.gen_range(0..n)])
        } else {
            let mut a: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.2)).collect();
            let mut b: Vec<usize> = (0..n)
                .filter(|v| !a.contains(v) && rng.gen_bool(0.2))
                .collect();
            a.truncate(3);
            b.truncate(3);
            (a, b)
        };
        let adjacent = a
            .iter()
            .any(|&x| b.iter().any(|&y| x == y || g.has_edge(x, y)));
        if a.is_empty() || b.is_empty() || adjacent {
            continue;
        }
        flows += 1;
        let got = vertex_connectivity(&g, &a, &b);
        let want = brute_kappa(&g, &a, &b);
        if got != Some(want) {
            failures.push(format!(
                "flow {a:?}->{b:?} on {:?}: {got:?}, brute force {want}",
                g.edges()
            ));
        }
    }
    let half = Delta::half();
    let budget = HeuristicBudget::with_seed(4);
    let fixtures = [
        ("path 9", AdjGraph::path(9), 1),
        ("cycle 12", AdjGraph::cycle(12), 2),
        ("K5", AdjGraph::complete(5), 3),
    ];
    for (name, g, want) in &fixtures {
        let exact = exact_min_cut(g, half, 28, name).unwrap().value;
        let heur = heuristic_cut(g, half, budget, name).unwrap().value;
        if exact != *want || heur != *want {
            failures.push(format!(
                "{name}: exact {exact}, heuristic {heur}, expected {want}"
            ));
        }
    }
    let mut k5_minus = AdjGraph::complete(5).edges();
    k5_minus.retain(|&e| e != (0, 1));
    let flow_fixtures = [
        (
            "path ends",
            vertex_connectivity(&AdjGraph::path(9), &[0], &[8]),
            1,
        ),
        (
            "cycle",
            vertex_connectivity(&AdjGraph::cycle(12), &[0], &[6]),
            2,
        ),
        (
            "K5 minus edge",
            vertex_connectivity(&AdjGraph::from_edges(5, &k5_minus), &[0], &[1]),
            3,
        ),
    ];
    for (name, got, want) in flow_fixtures {
        if got != Some(want) {
            failures.push(format!("flow {name}: {got:?}, expected {want}"));
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < CUTS_LIMIT;
    report(
        4,
        pass,
        &format!("{CUT_CASES} cut cases, {FLOW_CASES} flow cases, {elapsed:?} {failures:?}"),
    );
    assert!(pass);
}

// ---------------------------------------------------------------- 5

/// Checks the δ-component condition independently and the lemma.
fn audit(g: &AdjGraph, r: &CutReport, failures: &mut Vec<String>) -> usize {
    if r.bound == cuts::Bound::Lower {
        return 0;
    }
    let removed: HashSet<usize> = r.cut_set.iter().copied().collect();
    let mut seen = vec![false; g.len()];
    for s in 0..g.len() {
        if seen[s] || removed.contains(&s) {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut size = 0u64;
        while let Some(v) = stack.pop() {
            size += 1;
            for &w in g.neighbors(v) {
                let w = w as usize;
                if !seen[w] && !removed.contains(&w) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if size * r.delta.den() > r.delta.num() * g.len() as u64 {
            failures.push(format!(
                "{}: component of {size} exceeds {}",
                r.subject, r.delta
            ));
        }
    }
    match verify_partition_lemma(g, &r.cut_set, r.delta) {
        Ok(o) if o.holds() => {}
        other => failures.push(format!("{}: lemma {other:?}", r.subject)),
    }
    1
}

#[test]
fn criterion_5_partition_lemma() {
    let mut failures = Vec::new();
    let mut audited = 0;
    for run in [z2_run(), z3_run()] {
        let t = &run.table;
        if t.lemma_failures() > 0 {
            failures.push(format!("{} recorded lemma failures", t.lemma_failures()));
        }
        audited += t.rows.iter().map(|r| r.lemma.len()).sum::<usize>();
    }
    // Rebuild the small subjects so every upper and exact cut is re-audited.
    {
        let _guard = heavy();
        let z2 = product("pentagon-Z2");
        for r in &z2_run().table.rows {
            let s =
                cayley::thickened_sphere(&z2, r.n, z2_run().table.config.t, DEFAULT_CAP).unwrap();
            for c in [&r.upper].into_iter().chain(r.exact.as_ref()) {
                audited += audit(s.graph(), c, &mut failures);
            }
        }
        let dihedral = product("dihedral");
        for delta in DELTAS {
            let cfg =
                cuts::ExperimentConfig::new(1, Delta::new(delta.0, delta.1).unwrap(), 2, 10, 5);
            let table = cuts::cut_growth_experiment(&dihedral, cfg).unwrap();
            for r in &table.rows {
                let s = cayley::thickened_sphere(&dihedral, r.n, 1, DEFAULT_CAP).unwrap();
                for c in [&r.upper].into_iter().chain(r.exact.as_ref()) {
                    audited += audit(s.graph(), c, &mut failures);
                }
            }
        }
        for (name, n_max) in [
            ("pentagon-Z3", 4),
            ("dihedral", 12),
            ("k2-z2-z3", 4),
            ("pentagon-Z2", 6),
        ] {
            let p = cuts::sep_profile_estimate(&product(name), n_max, 5, DEFAULT_CAP).unwrap();
            if p.lemma_failures > 0 {
                failures.push(format!(
                    "sep profile {name}: {} lemma failures",
                    p.lemma_failures
                ));
            }
            audited += p.rows.len();
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (i, g) in random_subgraphs(CUT_CASES, &mut rng).iter().enumerate() {
        let (p, q) = DELTAS[i % DELTAS.len()];
        let d = Delta::new(p, q).unwrap();
        let exact = exact_min_cut(g, d, 28, "random").unwrap();
        let heur = heuristic_cut(g, d, HeuristicBudget::with_seed(i as u64), "random").unwrap();
        let none = heuristic_cut(g, d, HeuristicBudget::none(), "random").unwrap();
        for c in [&exact, &heur, &none] {
            audited += audit(g, c, &mut failures);
        }
    }
    let pass = failures.is_empty();
    report(5, pass, &format!("{audited} cuts audited {failures:?}"));
    assert!(pass);
}

// ---------------------------------------------------------------- 6

fn translate(gp: &GraphProduct, x: &Word, set: &[Word]) -> HashSet<Word> {
    set.iter().map(|w| gp.multiply(x, w).unwrap()).collect()
}

#[test]
fn criterion_6_persistence() {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (name, seed) in [("pentagon-Z2", 61u64), ("dihedral", 62)] {
        let gp = product(name);
        let pairs = cayley::random_neighbor_pairs(&gp, seed, PERSIST_PAIRS, 10);
        for t in [1, 2] {
            let ball_t = cayley::ball(&gp, t, DEFAULT_CAP).unwrap().len();
            for r in 3..=7 {
                let rep = cayley::persistence_check(&gp, r, t, &pairs, DEFAULT_CAP).unwrap();
                if rep.violations() > 0 {
                    failures.push(format!(
                        "{name} r={r} t={t}: {} violations",
                        rep.violations()
                    ));
                }
                let family: Vec<Word> = cayley::thickened_sphere(&gp, r, t, DEFAULT_CAP)
                    .unwrap()
                    .elements()
                    .iter()
                    .cloned()
                    .collect();
                for ((x, y), row) in pairs.iter().zip(&rep.rows) {
                    let ax = translate(&gp, x, &family);
                    let ay = translate(&gp, y, &family);
                    let inter = ax.intersection(&ay).count();
                    checked += 1;
                    if inter != row.intersection || inter * ball_t < family.len() {
                        failures.push(format!(
                            "{name} r={r} t={t} {x}/{y}: {inter} of {} (reported {})",
                            family.len(),
                            row.intersection
                        ));
                    }
                }
            }
        }
    }
    let pass = failures.is_empty() && checked == 2 * 2 * 5 * PERSIST_PAIRS;
    report(6, pass, &format!("{checked} pair checks {failures:?}"));
    assert!(pass);
}

// ---------------------------------------------------------------- 7

#[test]
fn criterion_7_cut_growth_contrast() {
    let z3 = z3_run();
    let z2 = z2_run();
    let lowers = z3.table.lowers();
    let ns: Vec<usize> = z3.table.rows.iter().map(|r| r.n).collect();
    let increasing = lowers.windows(2).all(|w| w[0] < w[1]);
    let lambda = z3.table.lambda_lower.fit;
    let positive = lambda.is_some_and(|f| f.slope > 0.0);
    let covered = ns.first() == Some(&3) && ns.last() == Some(&8);
    let upper_fit = z2.table.lambda_upper.fit;
    let flat = upper_fit.is_some_and(|f| f.slope_indistinguishable_from_zero());
    let z2_covered = z2.table.rows.len() == 6;
    let elapsed = z3.elapsed + z2.elapsed;
    let pass = increasing && positive && covered && flat && z2_covered && elapsed < CONTRAST_LIMIT;
    report(
        7,
        pass,
        &format!(
            "Z3 n={ns:?} lower={lowers:?} strictly_increasing={increasing} lambda_lower={:?}±{:?} \
             covers_3..8={covered} ({}); Z2 upper={:?} slope={:?}±{:?} flat={flat}; {elapsed:?}",
            lambda.map(|f| f.slope),
            lambda.and_then(|f| f.slope_stderr),
            z3.table.truncated.as_deref().unwrap_or("not truncated"),
            z2.table.uppers(),
            upper_fit.map(|f| f.slope),
            upper_fit.and_then(|f| f.slope_stderr),
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------- 8

fn run_cli(args: &[&str], out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_coarsesep"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .output()
        .unwrap()
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn criterion_8_determinism() {
    let mut failures = Vec::new();
    let mut compared = 0;
    let mut entries: Vec<PathBuf> = std::fs::read_dir(root().join("manifests"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    entries.sort();
    for path in &entries {
        let m = Manifest::load(path).unwrap();
        let command = m.command.clone().unwrap();
        let name = path.file_stem().unwrap().to_string_lossy().into_owned();
        let manifest_arg = path.to_string_lossy().into_owned();
        let args = [command.as_str(), "--manifest", manifest_arg.as_str()];
        let dir = tempfile::tempdir().unwrap();
        let first = dir.path().join("a");
        let out = {
            let _guard = heavy();
            run_cli(&args, &first)
        };
        if !out.status.success() {
            failures.push(format!(
                "{name}: exit {:?} {}",
                out.status.code(),
                String::from_utf8_lossy(&out.stderr)
            ));
            continue;
        }
        let a = dir_bytes(&first);
        // The Z3 experiment is expensive; its in-process run is the rerun.
        let b = if name == "cut-spheres-pentagon-Z3" {
            let run = z3_run();
            let mut dat = Vec::new();
            run.table.write_dat(&mut dat).unwrap();
            vec![
                ("cut_spheres.csv".to_string(), run.csv.clone()),
                ("cut_spheres.dat".to_string(), dat),
            ]
        } else {
            let second = dir.path().join("b");
            let _guard = heavy();
            run_cli(&args, &second);
            dir_bytes(&second)
        };
        compared += a.len();
        if a.is_empty() || a != b {
            failures.push(format!("{name}: outputs differ"));
        }
    }
    let pass = failures.is_empty() && entries.len() >= 8;
    report(
        8,
        pass,
        &format!("{} manifests, {compared} files {failures:?}", entries.len()),
    );
    assert!(pass);
}
