//! Experiment manifests: TOML files naming a graph, a command and its
//! parameters. Relative paths resolve against the manifest's directory.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::Deserialize;

use crate::cayley::DEFAULT_CAP;
use crate::cuts::Delta;

pub const CAP_ENV: &str = "COARSESEP_MEM_CAP";

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub graph: Option<PathBuf>,
    pub command: Option<String>,
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub t: Option<usize>,
    pub delta: Option<String>,
    pub cap: Option<usize>,
    pub exact_threshold: Option<usize>,
    pub record_timings: Option<bool>,
    pub fit_from: Option<usize>,
    pub r_min: Option<usize>,
    pub r_max: Option<usize>,
    pub pairs: Option<usize>,
    pub word_length: Option<usize>,
    pub delta_hat: Option<usize>,
    pub include_diagonal: Option<bool>,
}

impl Manifest {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading manifest {}", path.display()))?;
        let mut m: Manifest = toml::from_str(&text)
            .with_context(|| format!("parsing manifest {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        m.graph = m.graph.map(|g| base.join(g));
        m.output_dir = m.output_dir.map(|o| base.join(o));
        Ok(m)
    }

    /// Fields set in `over` replace those in `self`.
    pub fn merge(self, over: Manifest) -> Manifest {
        macro_rules! pick {
            ($($f:ident),*) => { Manifest { $($f: over.$f.or(self.$f)),* } };
        }
        pick!(
            graph,
            command,
            output_dir,
            seed,
            n_min,
            n_max,
            t,
            delta,
            cap,
            exact_threshold,
            record_timings,
            fit_from,
            r_min,
            r_max,
            pairs,
            word_length,
            delta_hat,
            include_diagonal
        )
    }

    pub fn check_command(&self, invoked: &str) -> anyhow::Result<()> {
        match &self.command {
            Some(c) if c != invoked => bail!("manifest is for `{c}`, not `{invoked}`"),
            _ => Ok(()),
        }
    }

    pub fn graph(&self) -> anyhow::Result<&Path> {
        self.graph.as_deref().context("graph file required")
    }

    pub fn seed(&self) -> anyhow::Result<u64> {
        self.seed.context("seed required")
    }

    pub fn require(&self, value: Option<usize>, name: &str) -> anyhow::Result<usize> {
        value.with_context(|| format!("{name} required"))
    }

    pub fn delta(&self) -> anyhow::Result<Delta> {
        match &self.delta {
            Some(d) => Ok(d.parse()?),
            None => Ok(Delta::half()),
        }
    }

    /// Manifest or flag value, then the environment, then the default.
    pub fn cap(&self) -> anyhow::Result<usize> {
        if let Some(c) = self.cap {
            return Ok(c);
        }
        match std::env::var(CAP_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .with_context(|| format!("{CAP_ENV}={v:?} is not a count")),
            Err(_) => Ok(DEFAULT_CAP),
        }
    }
}
