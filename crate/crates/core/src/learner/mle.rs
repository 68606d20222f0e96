use rayon::prelude::*;

use crate::dist::{FiniteDistribution, TextId};
use crate::error::{Error, Result};
use crate::translator::TranslatorFamily;

/// Members scored per parallel task.
pub(crate) const BLOCK: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleResult {
    /// Smallest index attaining the minimal objective.
    pub theta_index: usize,
    /// `Σᵢ -log₂ ρ(f_θ(xᵢ))` in bits, possibly `+∞`.
    pub objective: f64,
    /// Number of members attaining the minimum.
    pub ties: usize,
}

pub(crate) fn check_samples<F: TranslatorFamily + ?Sized>(family: &F, samples: &[TextId]) -> Result<()> {
    if family.is_empty() {
        return Err(Error::Config("empty translator family".into()));
    }
    if let Some(&x) = samples.iter().find(|&&x| x as usize >= family.source_size()) {
        return Err(Error::Dimension { what: "sample id", expected: family.source_size(), got: x as usize });
    }
    Ok(())
}

/// Sums the terms in ascending order, so that equal multisets of terms give
/// bitwise-equal totals.
pub(crate) fn sorted_sum(terms: &mut [f64]) -> f64 {
    terms.sort_unstable_by(f64::total_cmp);
    terms.iter().sum()
}

fn objective_of(images: &[TextId], rho: &FiniteDistribution, terms: &mut Vec<f64>) -> f64 {
    terms.clear();
    for &y in images {
        let q = rho.prob(y);
        if q == 0.0 {
            return f64::INFINITY;
        }
        terms.push(-q.log2());
    }
    sorted_sum(terms)
}

/// The negative log-likelihood of the samples' translations under one member.
pub fn mle_objective<F: TranslatorFamily + ?Sized>(
    samples: &[TextId],
    rho: &FiniteDistribution,
    family: &F,
    theta: usize,
) -> Result<f64> {
    check_samples(family, samples)?;
    check_prior(family, rho)?;
    let mut images = Vec::new();
    family.translate_many(theta, samples, &mut images);
    Ok(objective_of(&images, rho, &mut Vec::new()))
}

fn check_prior<F: TranslatorFamily + ?Sized>(family: &F, rho: &FiniteDistribution) -> Result<()> {
    if rho.space_size() != family.target_size() {
        return Err(Error::Dimension { what: "prior space", expected: family.target_size(), got: rho.space_size() });
    }
    Ok(())
}

/// Merges per-block `(first minimiser, minimum, ties)` triples in block order.
pub(crate) fn merge_minima<T: PartialOrd + Copy>(
    blocks: impl IntoIterator<Item = (usize, T, usize)>,
) -> Option<(usize, T, usize)> {
    let mut best: Option<(usize, T, usize)> = None;
    for (idx, value, ties) in blocks {
        best = match best {
            None => Some((idx, value, ties)),
            Some((bi, bv, bt)) => {
                if value < bv {
                    Some((idx, value, ties))
                } else if value == bv {
                    Some((bi, bv, bt + ties))
                } else {
                    Some((bi, bv, bt))
                }
            }
        };
    }
    best
}

/// Exhaustive maximum-likelihood translator: the smallest index minimising
/// the summed negative log prior of the translated samples.
pub fn mle<F: TranslatorFamily + ?Sized>(
    samples: &[TextId],
    rho: &FiniteDistribution,
    family: &F,
) -> Result<MleResult> {
    check_samples(family, samples)?;
    check_prior(family, rho)?;
    let len = family.len();
    let blocks: Vec<(usize, f64, usize)> = (0..len.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut images = Vec::with_capacity(samples.len());
            let mut terms = Vec::with_capacity(samples.len());
            let scored = (b * BLOCK..((b + 1) * BLOCK).min(len)).map(|theta| {
                family.translate_many(theta, samples, &mut images);
                (theta, objective_of(&images, rho, &mut terms), 1)
            });
            merge_minima(scored).expect("non-empty block")
        })
        .collect();
    let (theta_index, objective, ties) = merge_minima(blocks).expect("non-empty family");
    Ok(MleResult { theta_index, objective, ties })
}
