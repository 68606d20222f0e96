//! Uniform languages over `T ⊆ P` with a shared random fraction of
//! nonsensical texts removed.

use rand::Rng;

use super::LanguageInstance;
use crate::dist::{FiniteDistribution, TextId};
use crate::error::{Error, Result};
use crate::rng;
use crate::translator::TranslatorFamily;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnParams {
    /// Source texts `0..t_size`.
    pub t_size: usize,
    /// Target texts `0..p_size`; the plausible set is the whole target space.
    pub p_size: usize,
    /// Probability that a target text is nonsensical.
    pub alpha: f64,
    pub family_size: usize,
}

impl CnParams {
    pub fn validate(&self) -> Result<()> {
        if self.t_size == 0 || self.t_size > self.p_size {
            return Err(Error::Parameter(format!(
                "need 1 <= t_size <= p_size, got {} and {}",
                self.t_size, self.p_size
            )));
        }
        if self.p_size > 1 << 31 {
            return Err(Error::Parameter(format!("p_size = {} exceeds 2^31", self.p_size)));
        }
        if self.family_size == 0 {
            return Err(Error::Parameter("family_size must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::Parameter(format!("α = {} outside [0, 1]", self.alpha)));
        }
        Ok(())
    }
}

const FEISTEL_ROUNDS: usize = 4;

/// Pseudorandom injections `[t_size] ↪ [p_size]`: member `θ` is a keyed
/// balanced Feistel permutation of `[p_size]` (cycle-walking over the
/// enclosing power of four) restricted to `[t_size]`.
#[derive(Debug, Clone)]
pub struct FeistelFamily {
    len: usize,
    source_size: usize,
    target_size: usize,
    key_seed: u64,
    half_bits: u32,
    star: Option<usize>,
}

impl FeistelFamily {
    pub fn new(len: usize, source_size: usize, target_size: usize, key_seed: u64, star: Option<usize>) -> Result<Self> {
        if source_size > target_size || target_size == 0 {
            return Err(Error::Parameter(format!("cannot inject {source_size} texts into {target_size}")));
        }
        if matches!(star, Some(s) if s >= len) {
            return Err(Error::Config("ground-truth index out of range".into()));
        }
        let bits = usize::BITS - (target_size - 1).max(1).leading_zeros();
        Ok(Self { len, source_size, target_size, key_seed, half_bits: bits.div_ceil(2), star })
    }

    fn round_keys(&self, theta: usize) -> [u64; FEISTEL_ROUNDS] {
        let key = rng::mix(self.key_seed, theta as u64);
        std::array::from_fn(|round| rng::mix(key, round as u64))
    }

    fn permute(&self, keys: &[u64; FEISTEL_ROUNDS], x: u64) -> u64 {
        let mask = (1u64 << self.half_bits) - 1;
        let mut v = x;
        loop {
            let (mut left, mut right) = (v >> self.half_bits, v & mask);
            for key in keys {
                let f = rng::splitmix64(key ^ right) & mask;
                (left, right) = (right, left ^ f);
            }
            v = (left << self.half_bits) | right;
            if v < self.target_size as u64 {
                return v;
            }
        }
    }
}

impl TranslatorFamily for FeistelFamily {
    fn len(&self) -> usize {
        self.len
    }
    fn source_size(&self) -> usize {
        self.source_size
    }
    fn target_size(&self) -> usize {
        self.target_size
    }
    fn translate(&self, theta: usize, x: TextId) -> TextId {
        self.permute(&self.round_keys(theta), x as u64) as TextId
    }
    fn star_index(&self) -> Option<usize> {
        self.star
    }
    fn translate_many(&self, theta: usize, xs: &[TextId], out: &mut Vec<TextId>) {
        let keys = self.round_keys(theta);
        out.clear();
        out.extend(xs.iter().map(|&x| self.permute(&keys, x as u64) as TextId));
    }
}

#[derive(Debug, Clone)]
pub struct CommonNonsenseInstance {
    pub params: CnParams,
    /// Sensical target texts `S`.
    pub sensical: Vec<bool>,
    pub family: FeistelFamily,
    /// Source texts whose ground-truth translation is sensical, ascending.
    pub mu_support: Vec<TextId>,
    pub mu: FiniteDistribution,
    pub rho: FiniteDistribution,
    pub degenerate: bool,
    pub warnings: Vec<String>,
}

impl CommonNonsenseInstance {
    pub fn star_index(&self) -> usize {
        self.family.star_index().expect("generated instances carry ⋆")
    }
}

impl LanguageInstance for CommonNonsenseInstance {
    type Family = FeistelFamily;
    fn family(&self) -> &FeistelFamily {
        &self.family
    }
    fn mu(&self) -> &FiniteDistribution {
        &self.mu
    }
    fn rho(&self) -> &FiniteDistribution {
        &self.rho
    }
}

pub fn gen_cn(seed: u64, params: CnParams) -> Result<CommonNonsenseInstance> {
    params.validate()?;
    let CnParams { t_size, p_size, alpha, family_size } = params;
    let mut warnings = Vec::new();
    if alpha > 0.5 {
        warnings.push(format!("α = {alpha} exceeds 1/2; the upper bound does not cover it"));
    }

    let key_seed = rng::stream_seed(seed, "cn/family");
    let star = rng::stream(seed, "cn/star").random_range(0..family_size);
    let family = FeistelFamily::new(family_size, t_size, p_size, key_seed, Some(star))?;

    let mut rng_s = rng::stream(seed, "cn/S");
    let mut sensical: Vec<bool> = (0..p_size).map(|_| !rng_s.random_bool(alpha)).collect();

    let star_map = family.translator(star);
    let mut mu_support: Vec<TextId> = (0..t_size as TextId).filter(|&x| sensical[star_map.apply(x) as usize]).collect();
    let degenerate = mu_support.is_empty();
    if degenerate {
        let y0 = *star_map.map().iter().min().expect("t_size >= 1");
        sensical[y0 as usize] = true;
        let x0 = star_map.map().iter().position(|&y| y == y0).expect("y0 is an image") as TextId;
        mu_support = vec![x0];
    }
    let mu = FiniteDistribution::uniform(t_size, &mu_support)?;
    let rho = FiniteDistribution::uniform_mask(&sensical)?;
    Ok(CommonNonsenseInstance { params, sensical, family, mu_support, mu, rho, degenerate, warnings })
}
