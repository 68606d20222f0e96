use rayon::prelude::*;

use super::aggregate::{aggregate, AggregateRow};
use super::config::{Checkpoints, ExperimentConfig, SampleCount};
use super::plan::{plan_cells, CellParams, ExperimentCell};
use crate::dist::{FiniteDistribution, Sampler, TextId};
use crate::error::{Error, Result};
use crate::learner::{grid_mle, KgScoreboard, PlausibleState, PlausibleTracker};
use crate::measures::err;
use crate::models::{gen_cn, gen_kg, gen_lower_bound_instance, gen_rt, CnParams, KgParams, LbParams, RtParams};
use crate::rng::{stream, StreamRng};
use crate::translator::TranslatorFamily;

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub m: SampleCount,
    pub metric: &'static str,
    pub value: f64,
}

/// What the generated instance looked like.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InstanceMeta {
    /// Support size of `μ`.
    pub source_support: usize,
    pub family_size: usize,
    pub degenerate: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub cell: ExperimentCell,
    pub measurements: Vec<Measurement>,
    pub meta: InstanceMeta,
}

pub const KG_METRIC: &str = "error";
pub const CN_METRIC: &str = "plausible_avg_error";
pub const MLE_METRIC: &str = "mle_error";
pub const FULL_ROWS_METRIC: &str = "full_rows";

/// `err(θ)` under `μ`; an exact mismatch fraction when `μ` is uniform on its
/// support, so identical error counts give identical values.
fn error_rate<F: TranslatorFamily + ?Sized>(family: &F, theta: usize, mu: &FiniteDistribution) -> Result<f64> {
    let support = mu.support();
    let uniform = support.iter().all(|&x| mu.prob(x) == mu.prob(support[0]));
    if !uniform || support.is_empty() {
        return err(family, theta, mu);
    }
    let star = family.require_star()?;
    let (mut ours, mut truth) = (Vec::new(), Vec::new());
    family.translate_many(theta, &support, &mut ours);
    family.translate_many(star, &support, &mut truth);
    let wrong = ours.iter().zip(&truth).filter(|(a, b)| a != b).count();
    Ok(wrong as f64 / support.len() as f64)
}

fn checkpoint_list(cell: &ExperimentCell) -> Result<&[usize]> {
    match &cell.checkpoints {
        Checkpoints::List(list) if !list.is_empty() => Ok(list),
        Checkpoints::List(_) => Err(Error::Config("empty checkpoint list".into())),
        Checkpoints::FullPass => {
            Err(Error::Config(format!("full-pass checkpoints are not defined for {}", cell.model())))
        }
    }
}

/// Draws samples up to each checkpoint and hands `visit` the checkpoint with
/// the samples drawn since the previous one.
fn stream_checkpoints(
    checkpoints: &[usize],
    sampler: &Sampler,
    rng: &mut StreamRng,
    mut visit: impl FnMut(usize, &[TextId]) -> Result<()>,
) -> Result<()> {
    let mut seen = 0;
    let mut fresh = Vec::new();
    for &m in checkpoints {
        fresh.clear();
        fresh.extend((seen..m).map(|_| sampler.sample(rng)));
        seen = m;
        visit(m, &fresh)?;
    }
    Ok(())
}

fn run_kg(cell: &ExperimentCell, params: KgParams) -> Result<CellResult> {
    let inst = gen_kg(cell.seed, params)?;
    let mut board = KgScoreboard::new(&inst.family, &inst.plausible)?;
    let mut measurements = Vec::new();
    match &cell.checkpoints {
        Checkpoints::FullPass => {
            for &x in &inst.t_edges {
                board.update(x);
            }
            let top = board.top_scorer();
            measurements.push(Measurement {
                m: SampleCount::Infinite,
                metric: KG_METRIC,
                value: error_rate(&inst.family, top.theta_index, &inst.mu)?,
            });
        }
        Checkpoints::List(list) => {
            let sampler = inst.mu.sampler();
            let mut rng = stream(cell.seed, "kg/samples");
            let mut picks = Vec::new();
            stream_checkpoints(list, &sampler, &mut rng, |m, fresh| {
                for &x in fresh {
                    board.update(x);
                }
                picks.push((m, board.top_scorer().theta_index));
                Ok(())
            })?;
            for (m, theta) in picks {
                measurements.push(Measurement {
                    m: SampleCount::Finite(m),
                    metric: KG_METRIC,
                    value: error_rate(&inst.family, theta, &inst.mu)?,
                });
            }
        }
    }
    Ok(CellResult {
        cell: cell.clone(),
        measurements,
        meta: InstanceMeta {
            source_support: inst.t_edges.len(),
            family_size: inst.family.len(),
            degenerate: inst.degenerate,
            warnings: Vec::new(),
        },
    })
}

fn run_cn(cell: &ExperimentCell, params: CnParams) -> Result<CellResult> {
    let checkpoints = checkpoint_list(cell)?;
    let inst = gen_cn(cell.seed, params)?;
    let sampler = inst.mu.sampler();
    let holdout = sampler.sample_n(&mut stream(cell.seed, "cn/holdout"), cell.holdout);
    let mut tracker = PlausibleTracker::new(&inst.family, &holdout)?;
    let mut rng = stream(cell.seed, "cn/samples");
    let mut values = Vec::new();
    stream_checkpoints(checkpoints, &sampler, &mut rng, |m, fresh| {
        for &x in fresh {
            tracker.update(x, &inst.sensical, &inst.family);
        }
        values.push((m, tracker.avg_error()));
        Ok(())
    })?;
    Ok(CellResult {
        cell: cell.clone(),
        measurements: values
            .into_iter()
            .map(|(m, value)| Measurement { m: SampleCount::Finite(m), metric: CN_METRIC, value })
            .collect(),
        meta: InstanceMeta {
            source_support: inst.mu_support.len(),
            family_size: inst.family.len(),
            degenerate: inst.degenerate,
            warnings: inst.warnings.clone(),
        },
    })
}

fn run_rt(cell: &ExperimentCell, params: RtParams) -> Result<CellResult> {
    let checkpoints = checkpoint_list(cell)?;
    let inst = gen_rt(cell.seed, params)?;
    let mut sensical = vec![false; inst.family.target_size()];
    for &y in &inst.p_texts {
        sensical[y as usize] = true;
    }
    let sampler = inst.mu.sampler();
    let mut rng = stream(cell.seed, "rt/samples");
    let mut state = PlausibleState::new(inst.family.len());
    let mut picks = Vec::new();
    // Under the uniform prior on P every surviving member has the same
    // likelihood, so the first survivor is the likelihood argmin.
    stream_checkpoints(checkpoints, &sampler, &mut rng, |m, fresh| {
        for &x in fresh {
            state.update(x, &sensical, &inst.family);
        }
        let theta = state.first_alive().ok_or_else(|| Error::Contract("ground truth ruled out".into()))?;
        picks.push((m, theta));
        Ok(())
    })?;
    let measurements = picks
        .into_iter()
        .map(|(m, theta)| {
            Ok(Measurement {
                m: SampleCount::Finite(m),
                metric: MLE_METRIC,
                value: error_rate(&inst.family, theta, &inst.mu)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CellResult {
        cell: cell.clone(),
        measurements,
        meta: InstanceMeta {
            source_support: inst.t_texts.len(),
            family_size: inst.family.len(),
            degenerate: false,
            warnings: Vec::new(),
        },
    })
}

fn run_lb(cell: &ExperimentCell, theta_count: u128, alpha: f64, t_size: usize) -> Result<CellResult> {
    let checkpoints = checkpoint_list(cell)?;
    // The grid is laid out for the smallest checkpoint; larger ones reuse it.
    let inst = gen_lower_bound_instance(cell.seed, LbParams::new(theta_count, alpha, checkpoints[0], t_size))?;
    let max = *checkpoints.last().expect("non-empty");
    let samples = inst.mu.sampler().sample_n(&mut stream(cell.seed, "lb/samples"), max);
    let full_rows = inst.full_rows().len() as f64;
    let mut measurements = Vec::with_capacity(2 * checkpoints.len());
    for &m in checkpoints {
        let theta = grid_mle(&inst.family, &inst.sensical, &samples[..m]);
        measurements.push(Measurement { m: SampleCount::Finite(m), metric: FULL_ROWS_METRIC, value: full_rows });
        measurements.push(Measurement {
            m: SampleCount::Finite(m),
            metric: MLE_METRIC,
            value: error_rate(&inst.family, theta, &inst.mu)?,
        });
    }
    Ok(CellResult {
        cell: cell.clone(),
        measurements,
        meta: InstanceMeta {
            source_support: inst.mu.support().len(),
            family_size: inst.family.len(),
            degenerate: inst.degenerate,
            warnings: Vec::new(),
        },
    })
}

/// Runs one cell; a deterministic function of the cell.
pub fn run_cell(cell: &ExperimentCell) -> Result<CellResult> {
    let result = match cell.params {
        CellParams::Kg { n, r, p, alpha } => run_kg(cell, KgParams { n, r, p, alpha }),
        CellParams::Cn { t_size, p_size, alpha, family_size } => {
            run_cn(cell, CnParams { t_size, p_size, alpha, family_size })
        }
        CellParams::Rt { vocab_size, depth, a, b } => run_rt(cell, RtParams::new(vocab_size, depth, a, b)),
        CellParams::Lb { theta_count, alpha, t_size } => run_lb(cell, theta_count, alpha, t_size),
    };
    result.map_err(|e| e.with_context(format!("cell `{}`", cell.descriptor())))
}

/// Runs every cell in plan order on the current rayon pool. The first failing
/// cell in plan order determines the error.
pub fn run_cells(cells: &[ExperimentCell]) -> Result<Vec<CellResult>> {
    cells.par_iter().map(run_cell).collect::<Vec<_>>().into_iter().collect()
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub cells: Vec<CellResult>,
    pub aggregate: Vec<AggregateRow>,
}

/// Plans, runs and aggregates; `threads = None` uses the global pool.
pub fn run_experiment(config: &ExperimentConfig, threads: Option<usize>) -> Result<ExperimentOutput> {
    let cells = plan_cells(config)?;
    let results = match threads {
        None => run_cells(&cells)?,
        Some(0) => return Err(Error::Config("thread count must be at least 1".into())),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {k} worker threads: {e}")))?
            .install(|| run_cells(&cells))?,
    };
    let aggregate = aggregate(&results)?;
    Ok(ExperimentOutput { cells: results, aggregate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::presets::preset;

    #[test]
    fn cells_are_reproducible() {
        let cells = plan_cells(&preset("kg-smoke").unwrap()).unwrap();
        let a = run_cell(&cells[0]).unwrap();
        let b = run_cell(&cells[0]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.measurements.len(), 8);
        assert!(a.measurements.iter().all(|r| (0.0..=1.0).contains(&r.value)));
    }

    #[test]
    fn cn_without_nonsense_is_flat() {
        let cfg = preset("cn-smoke").unwrap();
        let cells = plan_cells(&cfg).unwrap();
        let flat = cells.iter().find(|c| matches!(c.params, CellParams::Cn { alpha, .. } if alpha == 0.0));
        let result = run_cell(flat.unwrap()).unwrap();
        let first = result.measurements[0].value;
        assert!(result.measurements.iter().all(|r| r.value == first));
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let cfg = preset("kg-smoke").unwrap();
        let one = run_experiment(&cfg, Some(1)).unwrap();
        let three = run_experiment(&cfg, Some(3)).unwrap();
        assert_eq!(one.cells, three.cells);
        assert_eq!(one.aggregate, three.aggregate);
    }

    #[test]
    fn errors_carry_the_cell() {
        let mut cfg = preset("kg-smoke").unwrap();
        cfg.grid.p = vec![1.5];
        let e = run_experiment(&cfg, Some(1)).unwrap_err();
        assert!(e.to_string().contains("kg n=6 r=4 p=1.5"), "{e}");
        assert!(matches!(e.root(), Error::Parameter(_)));
    }
}
