use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelKind {
    Kg,
    Cn,
    Rt,
    Lb,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Kg => "kg",
            ModelKind::Cn => "cn",
            ModelKind::Rt => "rt",
            ModelKind::Lb => "lb",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kg" => Ok(ModelKind::Kg),
            "cn" => Ok(ModelKind::Cn),
            "rt" => Ok(ModelKind::Rt),
            "lb" => Ok(ModelKind::Lb),
            other => Err(Error::Config(format!("unknown model `{other}` (expected kg, cn, rt or lb)"))),
        }
    }
}

/// Sample counts at which a cell records its metrics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Checkpoints {
    /// Strictly increasing, positive.
    List(Vec<usize>),
    /// One pass over every translated text, recorded as `m = ∞`.
    FullPass,
}

/// A recorded sample count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SampleCount {
    Finite(usize),
    Infinite,
}

impl fmt::Display for SampleCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleCount::Finite(m) => write!(f, "{m}"),
            SampleCount::Infinite => f.write_str("inf"),
        }
    }
}

/// Parameter lists; a run covers their Cartesian product. Lists a model does
/// not use are ignored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Grid {
    pub alpha: Vec<f64>,
    /// Knowledge graph edge density.
    pub p: Vec<f64>,
    /// Knowledge graph source nodes.
    pub r: Vec<usize>,
    /// Knowledge graph target nodes.
    pub n: Vec<usize>,
    pub t_size: Vec<usize>,
    pub p_size: Vec<usize>,
    pub family_size: Vec<usize>,
    /// `|Θ|` emulated by lower-bound grids.
    pub theta_count: Vec<u128>,
    pub vocab_size: Vec<usize>,
    pub depth: Vec<usize>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preset: String,
    pub model: ModelKind,
    pub grid: Grid,
    pub checkpoints: Checkpoints,
    pub replicates: usize,
    pub seed: u64,
    /// Holdout size for plausible-set error.
    pub holdout: usize,
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be at least 1".into()));
        }
        match &self.checkpoints {
            Checkpoints::List(list) => {
                if list.is_empty() {
                    return Err(Error::Config("empty checkpoint list".into()));
                }
                if list[0] == 0 || list.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Config("checkpoints must be positive and strictly increasing".into()));
                }
            }
            Checkpoints::FullPass => {
                if self.model != ModelKind::Kg {
                    return Err(Error::Config("full-pass checkpoints are only defined for kg".into()));
                }
            }
        }
        let g = &self.grid;
        let required: &[(&str, usize)] = match self.model {
            ModelKind::Kg => &[("alpha", g.alpha.len()), ("p", g.p.len()), ("r", g.r.len()), ("n", g.n.len())],
            ModelKind::Cn => &[
                ("alpha", g.alpha.len()),
                ("t_size", g.t_size.len()),
                ("p_size", g.p_size.len()),
                ("family_size", g.family_size.len()),
            ],
            ModelKind::Rt => {
                &[("vocab_size", g.vocab_size.len()), ("depth", g.depth.len()), ("a", g.a.len()), ("b", g.b.len())]
            }
            ModelKind::Lb => {
                &[("alpha", g.alpha.len()), ("t_size", g.t_size.len()), ("theta_count", g.theta_count.len())]
            }
        };
        if let Some((name, _)) = required.iter().find(|(_, len)| *len == 0) {
            return Err(Error::Config(format!("grid list `{name}` is empty for model {}", self.model)));
        }
        if self.model == ModelKind::Cn && self.holdout == 0 {
            return Err(Error::Config("holdout must be at least 1".into()));
        }
        Ok(())
    }
}
