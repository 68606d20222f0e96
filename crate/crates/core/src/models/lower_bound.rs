//! Hard instances for the common nonsense model: two `a × b` grids where each
//! parameter bit chooses between the identity and a cyclic shift of one row.

use rand::Rng;

use super::LanguageInstance;
use crate::dist::{FiniteDistribution, TextId};
use crate::error::{Error, Result};
use crate::rng;
use crate::translator::TranslatorFamily;

/// The constant in the column-count formula.
pub const DEFAULT_COLUMN_CONSTANT: f64 = 1e5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbParams {
    /// `|Θ|` of the family being emulated; the grid has `⌊log₂ |Θ|⌋` rows.
    pub n_params: u128,
    pub alpha: f64,
    pub m: usize,
    pub t_size: usize,
    pub column_constant: f64,
}

impl LbParams {
    pub fn new(n_params: u128, alpha: f64, m: usize, t_size: usize) -> Self {
        Self { n_params, alpha, m, t_size, column_constant: DEFAULT_COLUMN_CONSTANT }
    }

    pub fn rows(&self) -> usize {
        (u128::BITS - 1 - self.n_params.leading_zeros()) as usize
    }

    pub fn columns(&self) -> usize {
        let ratio = self.t_size as f64 / (self.column_constant * self.m as f64);
        (ratio.max(1.0) / self.alpha).floor() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 0.5) {
            return Err(Error::Parameter(format!("α = {} outside (0, 1/2]", self.alpha)));
        }
        if self.n_params < 2 {
            return Err(Error::Admissibility(format!("|Θ| = {} < 2", self.n_params)));
        }
        if self.m == 0 || self.t_size == 0 {
            return Err(Error::Parameter("m and t_size must be positive".into()));
        }
        if self.column_constant.is_nan() || self.column_constant <= 0.0 {
            return Err(Error::Parameter("column constant must be positive".into()));
        }
        let log_theta = (self.n_params as f64).log2();
        let cap = self.alpha * self.m.min(self.t_size) as f64;
        if log_theta > cap {
            return Err(Error::Admissibility(format!("log₂|Θ| <= α·min(m, |T|) fails: {log_theta} > {cap}")));
        }
        let (a, b) = (self.rows(), self.columns());
        if a > 62 {
            return Err(Error::Parameter(format!("{a} rows exceed 62")));
        }
        if a * b > self.t_size {
            return Err(Error::Parameter(format!("a·b = {} exceeds |T| = {}", a * b, self.t_size)));
        }
        Ok(())
    }
}

/// `2^a` translators on `0..t_size`. Grid cell `(i, j)` is text `i·b + j` on
/// both sides; texts past the grid map to themselves. Bit `a - 1 - i` of `θ`
/// set means row `i` is shifted, so index order is lexicographic in the sign
/// vector with `+1` before `-1`.
#[derive(Debug, Clone)]
pub struct GridShiftFamily {
    rows: usize,
    columns: usize,
    size: usize,
    star: Option<usize>,
}

impl GridShiftFamily {
    pub fn new(rows: usize, columns: usize, size: usize, star: Option<usize>) -> Result<Self> {
        if rows * columns > size || rows > 62 {
            return Err(Error::Parameter(format!("{rows}×{columns} grid does not fit {size} texts")));
        }
        if matches!(star, Some(s) if s >> rows != 0) {
            return Err(Error::Config("ground-truth index out of range".into()));
        }
        Ok(Self { rows, columns, size, star })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn shifted(&self, theta: usize, row: usize) -> bool {
        theta >> (self.rows - 1 - row) & 1 == 1
    }

    pub fn cell(&self, x: TextId) -> Option<(usize, usize)> {
        let x = x as usize;
        (x < self.rows * self.columns).then(|| (x / self.columns, x % self.columns))
    }

    pub fn text(&self, row: usize, column: usize) -> TextId {
        (row * self.columns + column) as TextId
    }

    /// Index of the sign vector with the given shifted rows.
    pub fn index_of(&self, shifted: &[bool]) -> usize {
        shifted.iter().fold(0, |acc, &s| acc << 1 | s as usize)
    }

    /// Image of grid cell `(row, column)` under a row map.
    pub fn row_map(&self, shifted: bool, row: usize, column: usize) -> TextId {
        let c = if shifted { (column + 1) % self.columns } else { column };
        self.text(row, c)
    }
}

impl TranslatorFamily for GridShiftFamily {
    fn len(&self) -> usize {
        1 << self.rows
    }
    fn source_size(&self) -> usize {
        self.size
    }
    fn target_size(&self) -> usize {
        self.size
    }
    fn translate(&self, theta: usize, x: TextId) -> TextId {
        match self.cell(x) {
            Some((i, j)) => self.row_map(self.shifted(theta, i), i, j),
            None => x,
        }
    }
    fn star_index(&self) -> Option<usize> {
        self.star
    }
}

#[derive(Debug, Clone)]
pub struct LowerBoundInstance {
    pub params: LbParams,
    pub family: GridShiftFamily,
    /// Sensical texts `S`.
    pub sensical: Vec<bool>,
    pub mu: FiniteDistribution,
    pub rho: FiniteDistribution,
    pub degenerate: bool,
}

impl LowerBoundInstance {
    pub fn star_index(&self) -> usize {
        self.family.star_index().expect("generated instances carry ⋆")
    }

    /// Rows whose every target cell is sensical. Samples carry no information
    /// about such rows.
    pub fn full_rows(&self) -> Vec<usize> {
        let f = &self.family;
        (0..f.rows()).filter(|&i| (0..f.columns()).all(|j| self.sensical[f.text(i, j) as usize])).collect()
    }
}

impl LanguageInstance for LowerBoundInstance {
    type Family = GridShiftFamily;
    fn family(&self) -> &GridShiftFamily {
        &self.family
    }
    fn mu(&self) -> &FiniteDistribution {
        &self.mu
    }
    fn rho(&self) -> &FiniteDistribution {
        &self.rho
    }
}

pub fn gen_lower_bound_instance(seed: u64, params: LbParams) -> Result<LowerBoundInstance> {
    params.validate()?;
    let (a, b, t) = (params.rows(), params.columns(), params.t_size);
    let star = rng::stream(seed, "lb/star").random_range(0..1usize << a);
    let family = GridShiftFamily::new(a, b, t, Some(star))?;

    let mut rng_s = rng::stream(seed, "lb/S");
    let mut sensical: Vec<bool> = (0..t).map(|_| !rng_s.random_bool(params.alpha)).collect();
    let degenerate = !sensical.iter().any(|&s| s);
    if degenerate {
        sensical[family.translate(star, 0) as usize] = true;
    }
    let star_map = family.translator(star);
    let sources: Vec<TextId> = (0..t as TextId).filter(|&x| sensical[star_map.apply(x) as usize]).collect();
    let mu = FiniteDistribution::uniform(t, &sources)?;
    let rho = FiniteDistribution::uniform_mask(&sensical)?;
    Ok(LowerBoundInstance { params, family, sensical, mu, rho, degenerate })
}
