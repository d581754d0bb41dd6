//! Command-line front end: argument parsing, manifests, and CSV, JSON and
//! plot-data output.
//!
//! Exit codes: 0 on success, 1 on error, 2 when `classify` leaves a verdict
//! undecided.

pub mod manifest;
pub mod report;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cayley;
use crate::cuts::{self, ExperimentConfig, HeuristicBudget};
use crate::graph::{parse_graph, LabeledGraph};
use crate::words::GraphProduct;
pub use manifest::Manifest;
pub use report::ClassifyReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "coarsesep",
    version,
    about = "Graph products of finite groups: verdicts, growth and cut experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classification verdicts with witnesses and rules.
    Classify {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ball and sphere sizes: `n,ball,sphere`.
    Grow(ExpArgs),
    /// Cut bounds for thickened spheres, with a plot-data file.
    CutSpheres(ExpArgs),
    /// Intrinsic against extrinsic distances on a thickened sphere.
    Distort(ExpArgs),
    /// Overlap of translated thickened spheres for neighbouring pairs.
    Persist(ExpArgs),
    /// Separation-profile estimate from balls and thickened spheres.
    SepProfile(ExpArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Both,
}

/// Flags shared by the experiment commands. Each overrides the manifest.
#[derive(Debug, Clone, Default, Args)]
pub struct ExpArgs {
    /// Graph file; alternative to `graph` in the manifest.
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Directory for CSV output; standard output when absent.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n_min: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    /// Rational `p/q`.
    #[arg(long)]
    pub delta: Option<String>,
    /// Element cap; falls back to the environment, then 5,000,000.
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long)]
    pub exact_threshold: Option<usize>,
    #[arg(long)]
    pub record_timings: bool,
    #[arg(long)]
    pub fit_from: Option<usize>,
    #[arg(long)]
    pub r_min: Option<usize>,
    #[arg(long)]
    pub r_max: Option<usize>,
    #[arg(long)]
    pub pairs: Option<usize>,
    #[arg(long)]
    pub word_length: Option<usize>,
    #[arg(long)]
    pub delta_hat: Option<usize>,
    #[arg(long)]
    pub include_diagonal: bool,
}

impl ExpArgs {
    fn manifest(&self, command: &str) -> anyhow::Result<Manifest> {
        let base = match &self.manifest {
            Some(p) => Manifest::load(p)?,
            None => Manifest::default(),
        };
        base.check_command(command)?;
        Ok(base.merge(Manifest {
            graph: self.graph.clone(),
            command: None,
            output_dir: self.out_dir.clone(),
            seed: self.seed,
            n_min: self.n_min,
            n_max: self.n_max,
            t: self.t,
            delta: self.delta.clone(),
            cap: self.cap,
            exact_threshold: self.exact_threshold,
            record_timings: self.record_timings.then_some(true),
            fit_from: self.fit_from,
            r_min: self.r_min,
            r_max: self.r_max,
            pairs: self.pairs,
            word_length: self.word_length,
            delta_hat: self.delta_hat,
            include_diagonal: self.include_diagonal.then_some(true),
        }))
    }
}

/// Parses `args` (program name first) and runs the command. Errors are
/// printed to standard error.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

pub fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Classify { graph, format, out } => classify(&graph, format, out.as_deref()),
        Command::Grow(a) => grow(&a.manifest("grow")?),
        Command::CutSpheres(a) => cut_spheres(&a.manifest("cut-spheres")?),
        Command::Distort(a) => distort(&a.manifest("distort")?),
        Command::Persist(a) => persist(&a.manifest("persist")?),
        Command::SepProfile(a) => sep_profile(&a.manifest("sep-profile")?),
    }
}

pub fn load_graph(path: &Path) -> anyhow::Result<LabeledGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("in {}", path.display()))
}

pub fn load_product(m: &Manifest) -> anyhow::Result<GraphProduct> {
    Ok(GraphProduct::new(load_graph(m.graph()?)?)?)
}

/// Writes `name` into the output directory, or to standard output.
fn emit(
    m: &Manifest,
    name: &str,
    write: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> anyhow::Result<()> {
    match &m.output_dir {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(name);
            let mut f = BufWriter::new(
                File::create(&path).with_context(|| format!("creating {}", path.display()))?,
            );
            write(&mut f)?;
            f.flush()?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
        }
    }
    Ok(())
}

fn classify(path: &Path, format: Format, out: Option<&Path>) -> anyhow::Result<i32> {
    let g = load_graph(path)?;
    let name = path.file_name().map_or_else(
        || path.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    );
    let report = ClassifyReport::build(&name, &g);
    if matches!(format, Format::Text | Format::Both) {
        print!("{}", report.to_text());
    }
    if matches!(format, Format::Json | Format::Both) {
        println!("{}", report.to_json());
    }
    if let Some(out) = out {
        fs::write(out, report.to_json() + "\n")
            .with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(if report.has_undecided() {
        EXIT_UNDECIDED
    } else {
        EXIT_OK
    })
}

fn grow(m: &Manifest) -> anyhow::Result<i32> {
    let gp = load_product(m)?;
    let n_max = m.require(m.n_max, "n_max")?;
    let table = cayley::growth_table(&gp, n_max, m.fit_from.unwrap_or(n_max / 2), m.cap()?)?;
    emit(m, "growth.csv", |w| table.write_csv(w))?;
    eprintln!("alpha_hat {:.4}, class {:?}", table.alpha_hat, table.class);
    Ok(EXIT_OK)
}

/// Experiment configuration described by a `cut-spheres` manifest.
pub fn experiment_config(m: &Manifest) -> anyhow::Result<ExperimentConfig> {
    let seed = m.seed()?;
    let t = m.t.unwrap_or(2);
    let mut cfg = ExperimentConfig::new(
        t,
        m.delta()?,
        m.n_min.unwrap_or(t + 1),
        m.require(m.n_max, "n_max")?,
        seed,
    );
    cfg.cap = m.cap()?;
    cfg.exact_threshold = m.exact_threshold.unwrap_or(cuts::DEFAULT_EXACT_THRESHOLD);
    cfg.budget = HeuristicBudget::with_seed(seed);
    cfg.record_timings = m.record_timings.unwrap_or(false);
    Ok(cfg)
}

fn cut_spheres(m: &Manifest) -> anyhow::Result<i32> {
    let cfg = experiment_config(m)?;
    let gp = load_product(m)?;
    let table = cuts::cut_growth_experiment(&gp, cfg)?;
    emit(m, "cut_spheres.csv", |w| table.write_csv(w))?;
    if m.output_dir.is_some() {
        emit(m, "cut_spheres.dat", |w| table.write_dat(w))?;
    }
    if let Some(note) = &table.truncated {
        eprintln!("warning: table truncated, {note}");
    }
    eprintln!(
        "lambda_upper {:?} ({}), lambda_lower {:?} ({}), lemma failures {}",
        table.lambda_upper.slope(),
        table.lambda_upper.flag,
        table.lambda_lower.slope(),
        table.lambda_lower.flag,
        table.lemma_failures()
    );
    if table.lemma_failures() > 0 {
        bail!("partition lemma failed on {} cuts", table.lemma_failures());
    }
    Ok(EXIT_OK)
}

fn distort(m: &Manifest) -> anyhow::Result<i32> {
    let seed = m.seed()?;
    let gp = load_product(m)?;
    let cap = m.cap()?;
    let t = m.t.unwrap_or(1);
    let n = m.require(m.n_max, "n_max")?;
    let mut pairs = cayley::random_sphere_pairs(&gp, n, m.pairs.unwrap_or(50), seed, cap)?;
    if m.include_diagonal.unwrap_or(false) {
        if let Some((x, _)) = pairs.first().cloned() {
            pairs.insert(0, (x.clone(), x));
        }
    }
    let threshold = cayley::distortion_threshold(m.delta_hat.unwrap_or(1), t);
    let report = cayley::distortion_report(&gp, n, t, &pairs, threshold, cap)?;
    emit(m, "distortion.csv", |w| report.write_csv(w))?;
    match report.fit {
        Some(f) => eprintln!(
            "ln(intrinsic) ~ {:.4} * extrinsic, R^2 {:.4}",
            f.slope, f.r_squared
        ),
        None => eprintln!("warning: fewer than two pairs above threshold {threshold}; no fit"),
    }
    Ok(EXIT_OK)
}

fn persist(m: &Manifest) -> anyhow::Result<i32> {
    let seed = m.seed()?;
    let gp = load_product(m)?;
    let cap = m.cap()?;
    let t = m.t.unwrap_or(1);
    let r_min = m.require(m.r_min.or(m.n_min), "r_min")?;
    let r_max = m.r_max.or(m.n_max).unwrap_or(r_min);
    let pairs =
        cayley::random_neighbor_pairs(&gp, seed, m.pairs.unwrap_or(50), m.word_length.unwrap_or(8));
    let mut reports = Vec::new();
    for r in r_min..=r_max {
        reports.push(cayley::persistence_check(&gp, r, t, &pairs, cap)?);
    }
    emit(m, "persistence.csv", |w| {
        let mut buf = Vec::new();
        for (i, rep) in reports.iter().enumerate() {
            buf.clear();
            rep.write_csv(&mut buf)?;
            let body = if i == 0 {
                &buf[..]
            } else {
                let skip = buf
                    .iter()
                    .position(|&b| b == b'\n')
                    .map_or(buf.len(), |p| p + 1);
                &buf[skip..]
            };
            w.write_all(body)?;
        }
        Ok(())
    })?;
    let violations: usize = reports.iter().map(|r| r.violations()).sum();
    eprintln!("persistence violations {violations}");
    if violations > 0 {
        bail!("{violations} persistence violations");
    }
    Ok(EXIT_OK)
}

fn sep_profile(m: &Manifest) -> anyhow::Result<i32> {
    let seed = m.seed()?;
    let gp = load_product(m)?;
    let profile = cuts::sep_profile_estimate(&gp, m.require(m.n_max, "n_max")?, seed, m.cap()?)?;
    emit(m, "sep_profile.csv", |w| profile.write_csv(w))?;
    if let Some(w) = &profile.warning {
        eprintln!("warning: {w}");
    }
    match profile.epsilon_lower {
        Some(f) => eprintln!("epsilon_hat {:.4}, R^2 {:.4}", f.slope, f.r_squared),
        None => eprintln!("epsilon_hat: insufficient points"),
    }
    Ok(EXIT_OK)
}
