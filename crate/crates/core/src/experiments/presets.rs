use super::config::{Checkpoints, ExperimentConfig, Grid, ModelKind};
use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 1;

pub const PRESET_NAMES: &[&str] = &["fig4-left", "fig4-right", "fig5", "rt-demo", "lb-floor", "kg-smoke", "cn-smoke"];

fn base(preset: &str, model: ModelKind, grid: Grid, checkpoints: Checkpoints, replicates: usize) -> ExperimentConfig {
    ExperimentConfig {
        preset: preset.to_string(),
        model,
        grid,
        checkpoints,
        replicates,
        seed: DEFAULT_SEED,
        holdout: 1000,
        out_dir: None,
    }
}

fn upto(m: usize) -> Checkpoints {
    Checkpoints::List((1..=m).collect())
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let cfg = match name {
        // Error against sample count at r = 9; checkpoints run to r² samples.
        "fig4-left" => base(
            name,
            ModelKind::Kg,
            Grid { alpha: vec![0.0, 0.33, 0.66, 1.0], p: vec![0.5], r: vec![9], n: vec![10], ..Grid::default() },
            upto(81),
            20,
        ),
        "fig4-right" => base(
            name,
            ModelKind::Kg,
            Grid { alpha: vec![0.5], p: vec![0.5], r: vec![1, 4, 7, 10], n: vec![10], ..Grid::default() },
            Checkpoints::FullPass,
            20,
        ),
        "fig5" => base(
            name,
            ModelKind::Cn,
            Grid {
                alpha: (0..=8).map(|k| k as f64 / 10.0).collect(),
                t_size: vec![100_000],
                p_size: vec![1_000_000],
                family_size: vec![100_000],
                ..Grid::default()
            },
            upto(100),
            5,
        ),
        "rt-demo" => base(
            name,
            ModelKind::Rt,
            Grid { vocab_size: vec![8], depth: vec![4], a: vec![1, 2], b: vec![2], ..Grid::default() },
            upto(20),
            10,
        ),
        "lb-floor" => base(
            name,
            ModelKind::Lb,
            Grid { alpha: vec![0.5], t_size: vec![1000], theta_count: vec![1 << 20], ..Grid::default() },
            Checkpoints::List(vec![40, 80]),
            100,
        ),
        "kg-smoke" => base(
            name,
            ModelKind::Kg,
            Grid { alpha: vec![0.5, 1.0], p: vec![0.5], r: vec![4], n: vec![6], ..Grid::default() },
            upto(8),
            3,
        ),
        "cn-smoke" => {
            let mut cfg = base(
                name,
                ModelKind::Cn,
                Grid {
                    alpha: vec![0.0, 0.3],
                    t_size: vec![1000],
                    p_size: vec![10_000],
                    family_size: vec![2000],
                    ..Grid::default()
                },
                upto(10),
                3,
            );
            cfg.holdout = 100;
            cfg
        }
        other => return Err(Error::Config(format!("unknown preset `{other}` (known: {})", PRESET_NAMES.join(", ")))),
    };
    Ok(cfg)
}
