//! CSV schemas and the run manifest.

use std::io::Write;

use umtlab_core::experiments::{AggregateRow, CellResult, ExperimentConfig, ParamColumns};
use umtlab_core::models::format::format_float;

pub const CELLS_HEADER: [&str; 14] = [
    "model",
    "preset",
    "seed",
    "replicate",
    "alpha",
    "p",
    "r",
    "n",
    "t_size",
    "p_size",
    "theta_count",
    "m",
    "metric",
    "value",
];

pub const AGGREGATE_HEADER: [&str; 14] = [
    "model",
    "preset",
    "alpha",
    "p",
    "r",
    "n",
    "t_size",
    "p_size",
    "theta_count",
    "m",
    "metric",
    "mean",
    "stderr",
    "replicates",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

fn param_fields(c: &ParamColumns) -> [String; 7] {
    [
        c.alpha.map_or_else(String::new, format_float),
        c.p.map_or_else(String::new, format_float),
        opt(c.r),
        opt(c.n),
        opt(c.t_size),
        opt(c.p_size),
        opt(c.theta_count),
    ]
}

pub fn write_cells<W: Write>(results: &[CellResult], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CELLS_HEADER)?;
    for result in results {
        let cell = &result.cell;
        let params = param_fields(&cell.params.columns());
        for rec in &result.measurements {
            let mut row =
                vec![cell.model().to_string(), cell.preset.clone(), cell.seed.to_string(), cell.replicate.to_string()];
            row.extend(params.iter().cloned());
            row.extend([rec.m.to_string(), rec.metric.to_string(), format_float(rec.value)]);
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_aggregate<W: Write>(rows: &[AggregateRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(AGGREGATE_HEADER)?;
    for row in rows {
        let mut fields = vec![row.model.to_string(), row.preset.clone()];
        fields.extend(param_fields(&row.columns));
        fields.extend([
            row.m.to_string(),
            row.metric.to_string(),
            format_float(row.mean),
            format_float(row.stderr),
            row.replicates.to_string(),
        ]);
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

/// Everything needed to trace an output directory back to its inputs.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub tool_version: &'static str,
    pub config_echo: String,
    pub seed: u64,
    pub generator: &'static str,
    pub start_unix: u64,
    pub end_unix: u64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "tool = umtlab {}", self.tool_version)?;
        writeln!(out, "seed = {}", self.seed)?;
        writeln!(out, "generator = {}", self.generator)?;
        writeln!(out, "start_unix = {}", self.start_unix)?;
        writeln!(out, "end_unix = {}", self.end_unix)?;
        for file in &self.outputs {
            writeln!(out, "output = {file}")?;
        }
        writeln!(out, "[config]")?;
        out.write_all(self.config_echo.as_bytes())?;
        if !self.config_echo.ends_with('\n') {
            writeln!(out)?;
        }
        Ok(())
    }
}

/// The effective config in file syntax.
pub fn echo_config(config: &ExperimentConfig) -> String {
    use umtlab_core::experiments::Checkpoints;
    fn join<T: ToString>(xs: &[T]) -> String {
        xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    }
    fn floats(xs: &[f64]) -> String {
        xs.iter().map(|&x| format_float(x)).collect::<Vec<_>>().join(", ")
    }
    fn push(s: &mut String, key: &str, value: String) {
        if !value.is_empty() {
            s.push_str(&format!("{key} = {value}\n"));
        }
    }
    let mut s = format!("# preset {}\n", config.preset);
    push(&mut s, "model", config.model.to_string());
    push(&mut s, "seed", config.seed.to_string());
    push(&mut s, "replicates", config.replicates.to_string());
    push(&mut s, "holdout", config.holdout.to_string());
    let checkpoints = match &config.checkpoints {
        Checkpoints::FullPass => "full".into(),
        Checkpoints::List(list) => join(list),
    };
    push(&mut s, "checkpoints", checkpoints);
    let g = &config.grid;
    s.push_str("[grid]\n");
    push(&mut s, "alpha", floats(&g.alpha));
    push(&mut s, "p", floats(&g.p));
    push(&mut s, "r", join(&g.r));
    push(&mut s, "n", join(&g.n));
    push(&mut s, "t_size", join(&g.t_size));
    push(&mut s, "p_size", join(&g.p_size));
    push(&mut s, "family_size", join(&g.family_size));
    push(&mut s, "theta_count", join(&g.theta_count));
    push(&mut s, "vocab_size", join(&g.vocab_size));
    push(&mut s, "depth", join(&g.depth));
    push(&mut s, "a", join(&g.a));
    push(&mut s, "b", join(&g.b));
    s
}
