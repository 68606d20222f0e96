use super::config::{ModelKind, SampleCount};
use super::plan::ParamColumns;
use super::run::CellResult;
use crate::error::{Error, Result};

/// Mean and standard error of one metric at one checkpoint of one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub model: ModelKind,
    pub preset: String,
    pub columns: ParamColumns,
    pub m: SampleCount,
    pub metric: &'static str,
    pub mean: f64,
    /// Sample standard deviation over `√replicates`; 0 for one replicate.
    pub stderr: f64,
    pub replicates: usize,
    /// Set when `stderr` is 0 only because there was a single replicate.
    pub single_replicate: bool,
}

/// Mean and sample standard error of `values`, summed in the given order.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt() / n.sqrt())
}

/// Groups results by grid point, sorted by model, preset and parameter
/// columns, and summarizes every `(checkpoint, metric)` in recorded order.
pub fn aggregate(results: &[CellResult]) -> Result<Vec<AggregateRow>> {
    let mut order: Vec<(&CellResult, String)> = results.iter().map(|r| (r, r.cell.params.descriptor())).collect();
    order.sort_by(|(a, da), (b, db)| {
        a.cell
            .model()
            .cmp(&b.cell.model())
            .then_with(|| a.cell.preset.cmp(&b.cell.preset))
            .then_with(|| a.cell.params.columns().total_cmp(&b.cell.params.columns()))
            .then_with(|| da.cmp(db))
            .then_with(|| a.cell.replicate.cmp(&b.cell.replicate))
    });

    let mut rows = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let (head, key) = &order[start];
        let end =
            start + order[start..].iter().take_while(|(r, d)| d == key && r.cell.preset == head.cell.preset).count();
        let group = &order[start..end];
        let layout: Vec<(SampleCount, &str)> = head.measurements.iter().map(|r| (r.m, r.metric)).collect();
        for (r, _) in group {
            let other: Vec<(SampleCount, &str)> = r.measurements.iter().map(|r| (r.m, r.metric)).collect();
            if other != layout {
                return Err(Error::Aggregation(format!(
                    "replicate {} of `{key}` recorded different checkpoints than replicate {}",
                    r.cell.replicate, head.cell.replicate
                )));
            }
        }
        for (k, &(m, metric)) in layout.iter().enumerate() {
            let values: Vec<f64> = group.iter().map(|(r, _)| r.measurements[k].value).collect();
            let (mean, stderr) = mean_stderr(&values);
            rows.push(AggregateRow {
                model: head.cell.model(),
                preset: head.cell.preset.clone(),
                columns: head.cell.params.columns(),
                m,
                metric,
                mean,
                stderr,
                replicates: values.len(),
                single_replicate: values.len() == 1,
            });
        }
        start = end;
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::Checkpoints;
    use crate::experiments::plan::{CellParams, ExperimentCell};
    use crate::experiments::run::{InstanceMeta, Measurement};

    fn result(alpha: f64, replicate: usize, values: &[(usize, f64)]) -> CellResult {
        CellResult {
            cell: ExperimentCell {
                preset: "t".into(),
                params: CellParams::Kg { n: 3, r: 2, p: 0.5, alpha },
                replicate,
                seed: 0,
                checkpoints: Checkpoints::List(values.iter().map(|v| v.0).collect()),
                holdout: 0,
            },
            measurements: values
                .iter()
                .map(|&(m, value)| Measurement { m: SampleCount::Finite(m), metric: "error", value })
                .collect(),
            meta: InstanceMeta::default(),
        }
    }

    #[test]
    fn two_point_formula() {
        let rows = aggregate(&[result(0.5, 0, &[(1, 0.2)]), result(0.5, 1, &[(1, 0.4)])]).unwrap();
        assert_eq!(rows.len(), 1);
        assert!((rows[0].mean - 0.3).abs() < 1e-15);
        assert!((rows[0].stderr - 0.1).abs() < 1e-15);
        assert_eq!(rows[0].replicates, 2);
        assert!(!rows[0].single_replicate);
    }

    #[test]
    fn constant_and_single() {
        let rows = aggregate(&[result(0.0, 0, &[(1, 0.7)]), result(0.0, 1, &[(1, 0.7)])]).unwrap();
        assert_eq!((rows[0].mean, rows[0].stderr), (0.7, 0.0));
        let single = aggregate(&[result(0.0, 0, &[(1, 0.7)])]).unwrap();
        assert!(single[0].single_replicate && single[0].stderr == 0.0);
    }

    #[test]
    fn groups_sorted_and_checked() {
        let rows = aggregate(&[result(1.0, 0, &[(1, 0.0), (2, 0.0)]), result(0.0, 0, &[(1, 1.0), (2, 0.5)])]).unwrap();
        let alphas: Vec<f64> = rows.iter().map(|r| r.columns.alpha.unwrap()).collect();
        assert_eq!(alphas, [0.0, 0.0, 1.0, 1.0]);
        let bad = aggregate(&[result(0.0, 0, &[(1, 1.0), (2, 0.5)]), result(0.0, 1, &[(1, 1.0)])]);
        assert!(matches!(bad, Err(Error::Aggregation(_))));
    }
}
