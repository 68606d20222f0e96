//! Line-oriented instance dumps.
//!
//! ```text
//! umtlab-instance v1
//! <kind> <id>... <value>
//! ```
//!
//! Every record after the header is whitespace-separated: a kind tag, zero or
//! more ids, and a final value. Kinds per model:
//!
//! | model | kind | ids | value |
//! |-------|------|-----|-------|
//! | all | `param` | name | parameter value |
//! | all | `meta` | name | derived value |
//! | kg | `S` | node | 1 |
//! | kg | `star` | source node | target node |
//! | kg | `P` | a b | `ρ((a, b))` |
//! | kg | `T` | u v | `μ((u, v))` |
//! | cn | `star` | member index | 1 |
//! | cn | `nonsense` | target text | 1 |
//! | cn | `mu` | source text | `μ(x)` |
//! | rt | `star` | word | translated word |
//! | rt | `P` | words... | `ρ(y)` |
//! | rt | `T` | words... | 1 |
//! | lb | `star` | row | +1 or -1 |
//! | lb | `nonsense` | text | 1 |
//! | lb | `full_row` | row | 1 |

use std::io::{self, BufRead, Write};

use super::{
    CommonNonsenseInstance, KnowledgeGraphInstance, LanguageInstance, LowerBoundInstance, TreeLanguageInstance,
};
use crate::error::{Error, Result};
use crate::translator::TranslatorFamily;

pub const INSTANCE_HEADER: &str = "umtlab-instance v1";

/// `%g`-style formatting with nine significant digits: no trailing zeros,
/// scientific notation outside `[1e-4, 1e9)`, `inf`/`nan` spelled out.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        trim_zeros(&format!("{v:.*}", (8 - exp) as usize)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub kind: String,
    pub ids: Vec<String>,
    pub value: String,
}

struct Writer<W: Write> {
    out: W,
}

impl<W: Write> Writer<W> {
    fn record(&mut self, kind: &str, ids: &[String], value: &str) -> io::Result<()> {
        write!(self.out, "{kind}")?;
        for id in ids {
            write!(self.out, " {id}")?;
        }
        writeln!(self.out, " {value}")
    }

    fn param(&mut self, name: &str, value: impl ToString) -> io::Result<()> {
        self.record("param", &[name.to_string()], &value.to_string())
    }

    fn meta(&mut self, name: &str, value: impl ToString) -> io::Result<()> {
        self.record("meta", &[name.to_string()], &value.to_string())
    }
}

fn ids<T: ToString>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

fn io_err(e: io::Error) -> Error {
    Error::Config(format!("writing instance: {e}"))
}

fn start<W: Write>(out: W, model: &str, seed: u64) -> io::Result<Writer<W>> {
    let mut w = Writer { out };
    writeln!(w.out, "{INSTANCE_HEADER}")?;
    w.record("model", &[], model)?;
    w.param("seed", seed)?;
    Ok(w)
}

pub fn write_kg<W: Write>(inst: &KnowledgeGraphInstance, seed: u64, out: W) -> Result<()> {
    (|| {
        let p = &inst.params;
        let mut w = start(out, "kg", seed)?;
        w.param("n", p.n)?;
        w.param("r", p.r)?;
        w.param("p", format_float(p.p))?;
        w.param("alpha", format_float(p.alpha))?;
        w.meta("avg_degree", format_float(inst.avg_degree))?;
        w.meta("degenerate", inst.degenerate as u8)?;
        w.meta("theta_count", inst.family.len())?;
        for &s in &inst.s_nodes {
            w.record("S", &ids([s]), "1")?;
        }
        for (u, &a) in inst.star_nodes.iter().enumerate() {
            w.record("star", &ids([u as u32]), &a.to_string())?;
        }
        let (n, r) = (p.n as u32, p.r as u32);
        for y in inst.p_edges() {
            w.record("P", &ids([y / n, y % n]), &format_float(inst.rho.prob(y)))?;
        }
        for &x in &inst.t_edges {
            w.record("T", &ids([x / r, x % r]), &format_float(inst.mu.prob(x)))?;
        }
        w.out.flush()
    })()
    .map_err(io_err)
}

pub fn write_cn<W: Write>(inst: &CommonNonsenseInstance, seed: u64, out: W) -> Result<()> {
    (|| {
        let p = &inst.params;
        let mut w = start(out, "cn", seed)?;
        w.param("t_size", p.t_size)?;
        w.param("p_size", p.p_size)?;
        w.param("alpha", format_float(p.alpha))?;
        w.param("family_size", p.family_size)?;
        w.meta("degenerate", inst.degenerate as u8)?;
        w.record("star", &ids([inst.star_index()]), "1")?;
        for (y, _) in inst.sensical.iter().enumerate().filter(|(_, &s)| !s) {
            w.record("nonsense", &ids([y]), "1")?;
        }
        for &x in &inst.mu_support {
            w.record("mu", &ids([x]), &format_float(inst.mu.prob(x)))?;
        }
        w.out.flush()
    })()
    .map_err(io_err)
}

pub fn write_rt<W: Write>(inst: &TreeLanguageInstance, seed: u64, out: W) -> Result<()> {
    (|| {
        let p = &inst.params;
        let mut w = start(out, "rt", seed)?;
        w.param("vocab_size", p.vocab_size)?;
        w.param("depth", p.depth)?;
        w.param("a", p.a)?;
        w.param("b", p.b)?;
        w.meta("theta_count", inst.family.len())?;
        for (v, s) in inst.family.word_map(inst.star_index()).into_iter().enumerate() {
            w.record("star", &ids([v as u32]), &s.to_string())?;
        }
        for &y in &inst.p_texts {
            w.record("P", &ids(inst.words(y)), &format_float(inst.rho.prob(y)))?;
        }
        for &y in &inst.t_texts {
            w.record("T", &ids(inst.words(y)), "1")?;
        }
        w.out.flush()
    })()
    .map_err(io_err)
}

pub fn write_lb<W: Write>(inst: &LowerBoundInstance, seed: u64, out: W) -> Result<()> {
    (|| {
        let p = &inst.params;
        let f = inst.family();
        let mut w = start(out, "lb", seed)?;
        w.param("n_params", p.n_params)?;
        w.param("alpha", format_float(p.alpha))?;
        w.param("m", p.m)?;
        w.param("t_size", p.t_size)?;
        w.param("column_constant", format_float(p.column_constant))?;
        w.meta("rows", f.rows())?;
        w.meta("columns", f.columns())?;
        w.meta("degenerate", inst.degenerate as u8)?;
        for row in 0..f.rows() {
            let sign = if f.shifted(inst.star_index(), row) { "-1" } else { "+1" };
            w.record("star", &ids([row]), sign)?;
        }
        for (y, _) in inst.sensical.iter().enumerate().filter(|(_, &s)| !s) {
            w.record("nonsense", &ids([y]), "1")?;
        }
        for row in inst.full_rows() {
            w.record("full_row", &ids([row]), "1")?;
        }
        w.out.flush()
    })()
    .map_err(io_err)
}

/// Parses a dump, checking the header. Line numbers in errors are 1-based.
pub fn read_records<R: BufRead>(input: R) -> Result<Vec<Record>> {
    let mut lines = input.lines().enumerate();
    match lines.next() {
        Some((_, Ok(h))) if h.trim_end() == INSTANCE_HEADER => {}
        Some((_, Ok(h))) => return Err(Error::Config(format!("line 1: expected `{INSTANCE_HEADER}`, got `{h}`"))),
        Some((_, Err(e))) => return Err(Error::Config(format!("line 1: {e}"))),
        None => return Err(Error::Config("empty instance file".into())),
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let line = line.map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))?;
        let mut fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() < 2 {
            return Err(Error::Config(format!("line {}: record needs a kind and a value", i + 1)));
        }
        let value = fields.pop().expect("two fields").to_string();
        let kind = fields.remove(0).to_string();
        out.push(Record { kind, ids: fields.into_iter().map(String::from).collect(), value });
    }
    Ok(out)
}
