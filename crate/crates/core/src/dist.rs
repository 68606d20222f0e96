//! Explicit probability tables over dense text ids.

use rand::Rng;

use crate::error::{Error, Result};
use crate::translator::Translator;

/// Index of a text inside a finite text space. Ids are dense: `0 <= id < size`.
pub type TextId = u32;

/// Absolute tolerance on the total mass of a distribution.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// A probability distribution over `0..space_size`, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDistribution {
    mass: Vec<f64>,
}

impl FiniteDistribution {
    pub fn new(mass: Vec<f64>) -> Result<Self> {
        if mass.is_empty() {
            return Err(Error::Parameter("distribution over an empty space".into()));
        }
        if let Some((id, &p)) = mass.iter().enumerate().find(|(_, p)| !p.is_finite() || **p < 0.0) {
            return Err(Error::Parameter(format!("invalid probability {p} at text {id}")));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::Parameter(format!("total mass {total} differs from 1 by more than {MASS_TOLERANCE}")));
        }
        Ok(Self { mass })
    }

    /// Uniform distribution over `support` (duplicates are ignored).
    pub fn uniform(space_size: usize, support: &[TextId]) -> Result<Self> {
        let mut mask = vec![false; space_size];
        for &id in support {
            let slot = mask.get_mut(id as usize).ok_or(Error::Dimension {
                what: "uniform support id",
                expected: space_size,
                got: id as usize,
            })?;
            *slot = true;
        }
        Self::uniform_mask(&mask)
    }

    /// Uniform distribution over the ids whose mask entry is set.
    pub fn uniform_mask(mask: &[bool]) -> Result<Self> {
        let count = mask.iter().filter(|&&b| b).count();
        if count == 0 {
            return Err(Error::Parameter("uniform distribution over an empty set".into()));
        }
        let p = 1.0 / count as f64;
        Self::new(mask.iter().map(|&b| if b { p } else { 0.0 }).collect())
    }

    pub fn point(space_size: usize, id: TextId) -> Result<Self> {
        Self::uniform(space_size, &[id])
    }

    pub fn space_size(&self) -> usize {
        self.mass.len()
    }

    pub fn prob(&self, id: TextId) -> f64 {
        self.mass.get(id as usize).copied().unwrap_or(0.0)
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    /// Ids with strictly positive mass, ascending.
    pub fn support(&self) -> Vec<TextId> {
        self.iter_support().map(|(id, _)| id).collect()
    }

    pub fn iter_support(&self) -> impl Iterator<Item = (TextId, f64)> + '_ {
        self.mass.iter().enumerate().filter(|(_, &p)| p > 0.0).map(|(id, &p)| (id as TextId, p))
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        self.iter_support().map(|(_, p)| -p * p.log2()).sum()
    }

    /// The image distribution `f ∘ self` over the translator's target space.
    pub fn pushforward(&self, translator: &Translator) -> Result<Self> {
        if translator.source_size() != self.space_size() {
            return Err(Error::Dimension {
                what: "pushforward source space",
                expected: translator.source_size(),
                got: self.space_size(),
            });
        }
        let mut mass = vec![0.0; translator.target_size()];
        for (x, p) in self.iter_support() {
            mass[translator.apply(x) as usize] += p;
        }
        Ok(Self { mass })
    }

    pub fn sampler(&self) -> Sampler {
        Sampler::new(self)
    }
}

/// Draws iid ids from a distribution. Uniform distributions are sampled by
/// index, so their draws are exact.
#[derive(Debug, Clone)]
pub struct Sampler {
    ids: Vec<TextId>,
    cumulative: Option<Vec<f64>>,
}

impl Sampler {
    pub fn new(dist: &FiniteDistribution) -> Self {
        let (ids, probs): (Vec<TextId>, Vec<f64>) = dist.iter_support().unzip();
        let uniform = probs.windows(2).all(|w| w[0] == w[1]);
        let cumulative = (!uniform).then(|| {
            let mut acc = 0.0;
            probs
                .iter()
                .map(|p| {
                    acc += p;
                    acc
                })
                .collect()
        });
        Self { ids, cumulative }
    }

    pub fn support(&self) -> &[TextId] {
        &self.ids
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> TextId {
        match &self.cumulative {
            None => self.ids[rng.random_range(0..self.ids.len())],
            Some(cdf) => {
                let total = *cdf.last().expect("non-empty support");
                let u = rng.random::<f64>() * total;
                let i = cdf.partition_point(|&c| c <= u).min(self.ids.len() - 1);
                self.ids[i]
            }
        }
    }

    pub fn sample_n<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<TextId> {
        (0..n).map(|_| self.sample(rng)).collect()
    }
}
