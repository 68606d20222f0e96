//! Elimination of members that translate some sample into nonsense.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use super::mle::BLOCK;
use crate::dist::TextId;
use crate::error::{Error, Result};
use crate::translator::TranslatorFamily;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlausibleState {
    alive: FixedBitSet,
    samples_seen: usize,
}

impl PlausibleState {
    pub fn new(family_size: usize) -> Self {
        let mut alive = FixedBitSet::with_capacity(family_size);
        alive.insert_range(..);
        Self { alive, samples_seen: 0 }
    }

    pub fn alive(&self) -> &FixedBitSet {
        &self.alive
    }

    pub fn alive_count(&self) -> usize {
        self.alive.count_ones(..)
    }

    pub fn is_alive(&self, theta: usize) -> bool {
        self.alive.contains(theta)
    }

    pub fn first_alive(&self) -> Option<usize> {
        self.alive.ones().next()
    }

    pub fn samples_seen(&self) -> usize {
        self.samples_seen
    }

    /// Kills every alive member that maps `sample` outside `sensical`;
    /// returns the killed indices in ascending order.
    pub fn update<F: TranslatorFamily + ?Sized>(
        &mut self,
        sample: TextId,
        sensical: &[bool],
        family: &F,
    ) -> Vec<usize> {
        let alive: Vec<usize> = self.alive.ones().collect();
        let killed: Vec<usize> = alive
            .par_chunks(BLOCK)
            .flat_map_iter(|chunk| {
                chunk
                    .iter()
                    .copied()
                    .filter(|&theta| !sensical[family.translate(theta, sample) as usize])
                    .collect::<Vec<_>>()
            })
            .collect();
        for &theta in &killed {
            self.alive.set(theta, false);
        }
        self.samples_seen += 1;
        killed
    }
}

pub fn plausible_update<F: TranslatorFamily + ?Sized>(
    state: &PlausibleState,
    sample: TextId,
    sensical: &[bool],
    family: &F,
) -> PlausibleState {
    let mut next = state.clone();
    next.update(sample, sensical, family);
    next
}

/// Disagreements of every member with the ground truth on the holdout.
pub fn holdout_disagreements<F: TranslatorFamily + ?Sized>(family: &F, holdout: &[TextId]) -> Result<Vec<u32>> {
    let star = family.require_star()?;
    let mut truth = Vec::new();
    family.translate_many(star, holdout, &mut truth);
    Ok((0..family.len())
        .into_par_iter()
        .with_min_len(BLOCK)
        .map_init(Vec::new, |images, theta| {
            family.translate_many(theta, holdout, images);
            images.iter().zip(&truth).filter(|(a, b)| a != b).count() as u32
        })
        .collect())
}

/// Mean over alive members of their holdout disagreement fraction, computed
/// as total disagreements over `alive × |holdout|`.
pub fn plausible_avg_error<F: TranslatorFamily + ?Sized>(
    state: &PlausibleState,
    family: &F,
    holdout: &[TextId],
) -> Result<f64> {
    if holdout.is_empty() {
        return Err(Error::Parameter("empty holdout".into()));
    }
    let star = family.require_star()?;
    let mut truth = Vec::new();
    family.translate_many(star, holdout, &mut truth);
    let alive: Vec<usize> = state.alive.ones().collect();
    if alive.is_empty() {
        return Err(Error::Contract("no plausible member left".into()));
    }
    let total: u64 = alive
        .par_iter()
        .map_init(Vec::new, |images, &theta| {
            family.translate_many(theta, holdout, images);
            images.iter().zip(&truth).filter(|(a, b)| a != b).count() as u64
        })
        .sum();
    Ok(total as f64 / (alive.len() as f64 * holdout.len() as f64))
}

/// A plausible set together with the holdout disagreement total of its
/// members, kept current as members die.
#[derive(Debug, Clone)]
pub struct PlausibleTracker {
    state: PlausibleState,
    disagreements: Vec<u32>,
    alive_total: u64,
    alive_count: usize,
    holdout_len: usize,
}

impl PlausibleTracker {
    pub fn new<F: TranslatorFamily + ?Sized>(family: &F, holdout: &[TextId]) -> Result<Self> {
        if holdout.is_empty() {
            return Err(Error::Parameter("empty holdout".into()));
        }
        let disagreements = holdout_disagreements(family, holdout)?;
        Ok(Self {
            state: PlausibleState::new(family.len()),
            alive_total: disagreements.iter().map(|&d| d as u64).sum(),
            alive_count: family.len(),
            disagreements,
            holdout_len: holdout.len(),
        })
    }

    pub fn state(&self) -> &PlausibleState {
        &self.state
    }

    pub fn update<F: TranslatorFamily + ?Sized>(&mut self, sample: TextId, sensical: &[bool], family: &F) {
        for theta in self.state.update(sample, sensical, family) {
            self.alive_total -= self.disagreements[theta] as u64;
            self.alive_count -= 1;
        }
    }

    pub fn avg_error(&self) -> f64 {
        self.alive_total as f64 / (self.alive_count as f64 * self.holdout_len as f64)
    }
}
