use std::cmp::Ordering;
use std::fmt::Write as _;

use super::config::{Checkpoints, ExperimentConfig, ModelKind};
use crate::error::{Error, Result};
use crate::models::format::format_float;
use crate::rng::{hash_str, mix};
use crate::translator::injection_count;

/// Model parameters of one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellParams {
    Kg { n: usize, r: usize, p: f64, alpha: f64 },
    Cn { t_size: usize, p_size: usize, alpha: f64, family_size: usize },
    Rt { vocab_size: usize, depth: usize, a: usize, b: usize },
    Lb { theta_count: u128, alpha: f64, t_size: usize },
}

/// The parameter columns shared by both CSV schemas. Columns a model does not
/// use are `None` and serialize empty.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ParamColumns {
    pub alpha: Option<f64>,
    pub p: Option<f64>,
    pub r: Option<usize>,
    pub n: Option<usize>,
    pub t_size: Option<u128>,
    pub p_size: Option<u128>,
    pub theta_count: Option<u128>,
}

impl ParamColumns {
    /// Total order: floats by `total_cmp`, `None` first.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        fn float(a: Option<f64>, b: Option<f64>) -> Ordering {
            match (a, b) {
                (Some(a), Some(b)) => a.total_cmp(&b),
                (a, b) => a.is_some().cmp(&b.is_some()),
            }
        }
        float(self.alpha, other.alpha)
            .then_with(|| float(self.p, other.p))
            .then_with(|| self.r.cmp(&other.r))
            .then_with(|| self.n.cmp(&other.n))
            .then_with(|| self.t_size.cmp(&other.t_size))
            .then_with(|| self.p_size.cmp(&other.p_size))
            .then_with(|| self.theta_count.cmp(&other.theta_count))
    }
}

fn checked_pow(base: usize, exp: usize) -> Option<u128> {
    (base as u128).checked_pow(u32::try_from(exp).ok()?)
}

fn factorial(k: usize) -> Option<u128> {
    (1..=k as u128).try_fold(1u128, |acc, i| acc.checked_mul(i))
}

impl CellParams {
    pub fn model(&self) -> ModelKind {
        match self {
            CellParams::Kg { .. } => ModelKind::Kg,
            CellParams::Cn { .. } => ModelKind::Cn,
            CellParams::Rt { .. } => ModelKind::Rt,
            CellParams::Lb { .. } => ModelKind::Lb,
        }
    }

    /// Canonical text form, e.g. `kg n=10 r=9 p=0.5 alpha=0.33`.
    pub fn descriptor(&self) -> String {
        let f = format_float;
        match *self {
            CellParams::Kg { n, r, p, alpha } => format!("kg n={n} r={r} p={} alpha={}", f(p), f(alpha)),
            CellParams::Cn { t_size, p_size, alpha, family_size } => {
                format!("cn t_size={t_size} p_size={p_size} alpha={} family_size={family_size}", f(alpha))
            }
            CellParams::Rt { vocab_size, depth, a, b } => {
                format!("rt vocab_size={vocab_size} depth={depth} a={a} b={b}")
            }
            CellParams::Lb { theta_count, alpha, t_size } => {
                format!("lb theta_count={theta_count} alpha={} t_size={t_size}", f(alpha))
            }
        }
    }

    /// CSV columns. For tree languages `n` is the depth and the sizes are
    /// `aⁿ` and `bⁿ`.
    pub fn columns(&self) -> ParamColumns {
        match *self {
            CellParams::Kg { n, r, p, alpha } => ParamColumns {
                alpha: Some(alpha),
                p: Some(p),
                r: Some(r),
                n: Some(n),
                theta_count: injection_count(r, n),
                ..ParamColumns::default()
            },
            CellParams::Cn { t_size, p_size, alpha, family_size } => ParamColumns {
                alpha: Some(alpha),
                t_size: Some(t_size as u128),
                p_size: Some(p_size as u128),
                theta_count: Some(family_size as u128),
                ..ParamColumns::default()
            },
            CellParams::Rt { vocab_size, depth, a, b } => ParamColumns {
                n: Some(depth),
                t_size: checked_pow(a, depth),
                p_size: checked_pow(b, depth),
                theta_count: factorial(vocab_size),
                ..ParamColumns::default()
            },
            CellParams::Lb { theta_count, alpha, t_size } => ParamColumns {
                alpha: Some(alpha),
                t_size: Some(t_size as u128),
                theta_count: Some(theta_count),
                ..ParamColumns::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentCell {
    pub preset: String,
    pub params: CellParams,
    pub replicate: usize,
    pub seed: u64,
    pub checkpoints: Checkpoints,
    pub holdout: usize,
}

impl ExperimentCell {
    pub fn model(&self) -> ModelKind {
        self.params.model()
    }

    pub fn descriptor(&self) -> String {
        let mut s = self.params.descriptor();
        let _ = write!(s, " replicate={}", self.replicate);
        s
    }
}

/// Seed of the cell with this descriptor; independent of scheduling.
pub fn cell_seed(master_seed: u64, descriptor: &str) -> u64 {
    mix(master_seed, hash_str(descriptor))
}

fn product<A: Copy, B: Copy>(xs: &[A], ys: &[B]) -> Vec<(A, B)> {
    xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect()
}

/// Cartesian product of the grid, replicates innermost.
pub fn plan_cells(config: &ExperimentConfig) -> Result<Vec<ExperimentCell>> {
    config.validate()?;
    let g = &config.grid;
    let points: Vec<CellParams> = match config.model {
        ModelKind::Kg => product(&product(&g.n, &g.r), &product(&g.p, &g.alpha))
            .into_iter()
            .map(|((n, r), (p, alpha))| CellParams::Kg { n, r, p, alpha })
            .collect(),
        ModelKind::Cn => product(&product(&g.t_size, &g.p_size), &product(&g.family_size, &g.alpha))
            .into_iter()
            .map(|((t_size, p_size), (family_size, alpha))| CellParams::Cn { t_size, p_size, alpha, family_size })
            .collect(),
        ModelKind::Rt => product(&product(&g.vocab_size, &g.depth), &product(&g.a, &g.b))
            .into_iter()
            .map(|((vocab_size, depth), (a, b))| CellParams::Rt { vocab_size, depth, a, b })
            .collect(),
        ModelKind::Lb => product(&product(&g.theta_count, &g.t_size), &g.alpha)
            .into_iter()
            .map(|((theta_count, t_size), alpha)| CellParams::Lb { theta_count, alpha, t_size })
            .collect(),
    };
    if points.is_empty() {
        return Err(Error::Config("empty parameter grid".into()));
    }
    let mut cells = Vec::with_capacity(points.len() * config.replicates);
    for params in points {
        for replicate in 0..config.replicates {
            let mut cell = ExperimentCell {
                preset: config.preset.clone(),
                params,
                replicate,
                seed: 0,
                checkpoints: config.checkpoints.clone(),
                holdout: config.holdout,
            };
            cell.seed = cell_seed(config.seed, &cell.descriptor());
            cells.push(cell);
        }
    }
    Ok(cells)
}
