//! Experiment config files.
//!
//! ```text
//! # comments start with '#'
//! preset = fig4-left        # optional base; later keys override it
//! model = kg                # required without a preset: kg | cn | rt | lb
//! seed = 7
//! replicates = 20
//! holdout = 1000
//! checkpoints = 1..=81, 100 # or `full` for one pass over T (kg only)
//! out_dir = results
//!
//! [grid]
//! alpha = 0, 0.33, 0.66, 1
//! p = 0.5
//! r = 9
//! n = 10
//! ```
//!
//! Grid keys: `alpha p r n t_size p_size family_size theta_count vocab_size
//! depth a b`. Lists are comma separated; integer lists also accept
//! inclusive ranges `lo..=hi`.

use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;
use umtlab_core::experiments::{preset, Checkpoints, ExperimentConfig, Grid, ModelKind};

#[derive(Debug, Error, PartialEq)]
#[error("line {line}, column {column}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A value with its position in the file, for error reporting.
#[derive(Debug, Clone, Copy)]
struct Spanned<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl<'a> Spanned<'a> {
    fn error(&self, message: impl Into<String>) -> ConfigError {
        ConfigError { line: self.line, column: self.column, message: message.into() }
    }

    /// Comma-separated items, each with its own column.
    fn items(&self) -> Vec<Spanned<'a>> {
        let mut out = Vec::new();
        let mut offset = 0;
        for raw in self.text.split(',') {
            let lead = raw.len() - raw.trim_start().len();
            out.push(Spanned { text: raw.trim(), line: self.line, column: self.column + offset + lead });
            offset += raw.len() + 1;
        }
        out
    }

    fn parse<T: FromStr>(&self, what: &str) -> Result<T, ConfigError> {
        self.text.parse().map_err(|_| self.error(format!("expected {what}, found `{}`", self.text)))
    }

    fn list<T: FromStr>(&self, what: &str) -> Result<Vec<T>, ConfigError> {
        self.items()
            .iter()
            .map(|item| if item.text.is_empty() { Err(item.error("empty list item")) } else { item.parse(what) })
            .collect()
    }

    fn int_list<T>(&self) -> Result<Vec<T>, ConfigError>
    where
        T: FromStr + Copy + TryFrom<u128>,
        u128: From<T>,
    {
        let mut out = Vec::new();
        for item in self.items() {
            match item.text.split_once("..=") {
                Some((lo, hi)) => {
                    let lo: T = Spanned { text: lo.trim(), ..item }.parse("an integer")?;
                    let hi: T = Spanned { text: hi.trim(), ..item }.parse("an integer")?;
                    let (lo, hi) = (u128::from(lo), u128::from(hi));
                    if lo > hi {
                        return Err(item.error(format!("empty range `{}`", item.text)));
                    }
                    if hi - lo >= 10_000_000 {
                        return Err(item.error("range has more than 10⁷ values"));
                    }
                    out.extend((lo..=hi).map(|v| T::try_from(v).ok().expect("within the range bounds")));
                }
                None if item.text.is_empty() => return Err(item.error("empty list item")),
                None => out.push(item.parse("an integer")?),
            }
        }
        Ok(out)
    }
}

#[derive(Default)]
struct Seen {
    keys: Vec<(String, String)>,
}

impl Seen {
    fn insert(&mut self, section: &str, key: &Spanned) -> Result<(), ConfigError> {
        let entry = (section.to_string(), key.text.to_string());
        if self.keys.contains(&entry) {
            return Err(key.error(format!("duplicate key `{}`", key.text)));
        }
        self.keys.push(entry);
        Ok(())
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(before, _)| before)
}

/// Parses a config file. The result is validated.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut entries: Vec<(String, Spanned, Spanned)> = Vec::new();
    let mut section = String::new();
    let mut seen = Seen::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = strip_comment(raw);
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let column = body.len() - body.trim_start().len() + 1;
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError { line, column, message: "unterminated section header".into() })?
                .trim();
            if name != "grid" {
                return Err(ConfigError {
                    line,
                    column: column + 1,
                    message: format!("unknown section `[{name}]` (expected `[grid]`)"),
                });
            }
            section = name.to_string();
            continue;
        }
        let Some(eq) = body.find('=') else {
            return Err(ConfigError { line, column, message: "expected `key = value`".into() });
        };
        let key_text = body[..eq].trim();
        let value_raw = &body[eq + 1..];
        let value_lead = value_raw.len() - value_raw.trim_start().len();
        let key = Spanned { text: key_text, line, column };
        let value = Spanned { text: value_raw.trim(), line, column: eq + 2 + value_lead };
        if key.text.is_empty() {
            return Err(key.error("missing key before `=`"));
        }
        if value.text.is_empty() {
            return Err(value.error(format!("missing value for `{}`", key.text)));
        }
        seen.insert(&section, &key)?;
        entries.push((section.clone(), key, value));
    }

    let base = entries.iter().find(|(s, k, _)| s.is_empty() && k.text == "preset");
    let mut config = match base {
        Some((_, _, v)) => preset(v.text).map_err(|e| v.error(e.to_string()))?,
        None => {
            let Some((_, _, v)) = entries.iter().find(|(s, k, _)| s.is_empty() && k.text == "model") else {
                return Err(ConfigError { line: 1, column: 1, message: "missing `model` (or `preset`)".into() });
            };
            ExperimentConfig {
                preset: "custom".into(),
                model: v.parse("kg, cn, rt or lb")?,
                grid: Grid::default(),
                checkpoints: Checkpoints::List(Vec::new()),
                replicates: 1,
                seed: umtlab_core::experiments::DEFAULT_SEED,
                holdout: 1000,
                out_dir: None,
            }
        }
    };

    let mut last = (1, 1);
    for (section, key, value) in &entries {
        last = (key.line, key.column);
        if section.is_empty() {
            apply_top(&mut config, key, value)?;
        } else {
            apply_grid(&mut config.grid, key, value)?;
        }
    }
    config.validate().map_err(|e| ConfigError { line: last.0, column: last.1, message: e.to_string() })?;
    Ok(config)
}

fn apply_top(config: &mut ExperimentConfig, key: &Spanned, value: &Spanned) -> Result<(), ConfigError> {
    match key.text {
        "preset" => {}
        "model" => {
            let model: ModelKind = value.parse("kg, cn, rt or lb")?;
            if model != config.model {
                return Err(value.error(format!("model `{model}` conflicts with preset model `{}`", config.model)));
            }
        }
        "seed" => config.seed = value.parse("an unsigned 64-bit seed")?,
        "replicates" => config.replicates = value.parse("a replicate count")?,
        "holdout" => config.holdout = value.parse("a holdout size")?,
        "out_dir" => config.out_dir = Some(PathBuf::from(value.text)),
        "checkpoints" => {
            config.checkpoints = if value.text == "full" {
                Checkpoints::FullPass
            } else {
                Checkpoints::List(value.int_list::<u64>()?.into_iter().map(|v| v as usize).collect())
            }
        }
        other => return Err(key.error(format!("unknown key `{other}`"))),
    }
    Ok(())
}

fn apply_grid(grid: &mut Grid, key: &Spanned, value: &Spanned) -> Result<(), ConfigError> {
    fn usizes(value: &Spanned) -> Result<Vec<usize>, ConfigError> {
        Ok(value.int_list::<u64>()?.into_iter().map(|v| v as usize).collect())
    }
    match key.text {
        "alpha" => grid.alpha = value.list("a number")?,
        "p" => grid.p = value.list("a number")?,
        "r" => grid.r = usizes(value)?,
        "n" => grid.n = usizes(value)?,
        "t_size" => grid.t_size = usizes(value)?,
        "p_size" => grid.p_size = usizes(value)?,
        "family_size" => grid.family_size = usizes(value)?,
        "theta_count" => grid.theta_count = value.int_list::<u128>()?,
        "vocab_size" => grid.vocab_size = usizes(value)?,
        "depth" => grid.depth = usizes(value)?,
        "a" => grid.a = usizes(value)?,
        "b" => grid.b = usizes(value)?,
        other => return Err(key.error(format!("unknown grid key `{other}`"))),
    }
    Ok(())
}
