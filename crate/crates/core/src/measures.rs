//! Error, semantic loss and divergence of a translator against the hidden
//! ground truth.

use crate::dist::{FiniteDistribution, TextId};
use crate::error::{Error, Result};
use crate::translator::{Translator, TranslatorFamily};

/// A semantic difference `ℓ : Y × Y → [0, 1]` with `ℓ(y, y) = 0`.
pub trait SemanticDifference: Sync {
    fn difference(&self, truth: TextId, candidate: TextId) -> f64;
}

/// The 0-1 difference; its semantic loss is the semantic error.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroOne;

impl SemanticDifference for ZeroOne {
    fn difference(&self, truth: TextId, candidate: TextId) -> f64 {
        if truth == candidate {
            0.0
        } else {
            1.0
        }
    }
}

impl<F> SemanticDifference for F
where
    F: Fn(TextId, TextId) -> f64 + Sync,
{
    fn difference(&self, truth: TextId, candidate: TextId) -> f64 {
        self(truth, candidate)
    }
}

/// Evaluates `ℓ` and enforces its contract.
pub(crate) fn checked_difference(
    ell: &(impl SemanticDifference + ?Sized),
    truth: TextId,
    candidate: TextId,
) -> Result<f64> {
    let d = ell.difference(truth, candidate);
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::Contract(format!("semantic difference ℓ({truth}, {candidate}) = {d} outside [0, 1]")));
    }
    if truth == candidate && d != 0.0 {
        return Err(Error::Contract(format!("ℓ({truth}, {truth}) = {d}, expected 0")));
    }
    Ok(d)
}

fn check_source_space<F: TranslatorFamily + ?Sized>(family: &F, mu: &FiniteDistribution) -> Result<()> {
    if family.source_size() != mu.space_size() {
        return Err(Error::Dimension {
            what: "source distribution",
            expected: family.source_size(),
            got: mu.space_size(),
        });
    }
    Ok(())
}

/// `err(θ) = Pr_{x∼μ}[f_θ(x) ≠ f_⋆(x)]`, summed over the support of `μ` in
/// ascending id order.
pub fn err<F: TranslatorFamily + ?Sized>(family: &F, theta: usize, mu: &FiniteDistribution) -> Result<f64> {
    semantic_loss(family, theta, mu, &ZeroOne)
}

/// `L(θ) = E_{x∼μ}[ℓ(f_⋆(x), f_θ(x))]`.
pub fn semantic_loss<F, L>(family: &F, theta: usize, mu: &FiniteDistribution, ell: &L) -> Result<f64>
where
    F: TranslatorFamily + ?Sized,
    L: SemanticDifference + ?Sized,
{
    let star = family.require_star()?;
    check_source_space(family, mu)?;
    if theta >= family.len() {
        return Err(Error::Parameter(format!("member {theta} outside family")));
    }
    let (xs, probs): (Vec<TextId>, Vec<f64>) = mu.iter_support().unzip();
    let mut truth = Vec::new();
    let mut cand = Vec::new();
    family.translate_many(star, &xs, &mut truth);
    family.translate_many(theta, &xs, &mut cand);
    let mut total = 0.0;
    for ((p, &t), &c) in probs.iter().zip(&truth).zip(&cand) {
        total += p * checked_difference(ell, t, c)?;
    }
    Ok(total)
}

/// `D(θ) = KL(f ∘ μ ‖ ρ)` in bits; `+∞` iff some supported `x` has
/// `ρ(f(x)) = 0`.
pub fn divergence(mu: &FiniteDistribution, rho: &FiniteDistribution, translator: &Translator) -> Result<f64> {
    check_spaces(mu, rho, translator)?;
    let mut total = 0.0;
    for (x, p) in mu.iter_support() {
        let q = rho.prob(translator.apply(x));
        if q == 0.0 {
            return Ok(f64::INFINITY);
        }
        total += p * (p / q).log2();
    }
    Ok(total)
}

/// Population cross-entropy `E_{x∼μ}[-log₂ ρ(f(x))]`, the expectation of the
/// per-sample MLE objective.
pub fn cross_entropy(mu: &FiniteDistribution, rho: &FiniteDistribution, translator: &Translator) -> Result<f64> {
    check_spaces(mu, rho, translator)?;
    let mut total = 0.0;
    for (x, p) in mu.iter_support() {
        let q = rho.prob(translator.apply(x));
        if q == 0.0 {
            return Ok(f64::INFINITY);
        }
        total -= p * q.log2();
    }
    Ok(total)
}

fn check_spaces(mu: &FiniteDistribution, rho: &FiniteDistribution, translator: &Translator) -> Result<()> {
    if translator.source_size() != mu.space_size() {
        return Err(Error::Dimension {
            what: "translator source space",
            expected: mu.space_size(),
            got: translator.source_size(),
        });
    }
    if translator.target_size() != rho.space_size() {
        return Err(Error::Dimension {
            what: "translator target space",
            expected: rho.space_size(),
            got: translator.target_size(),
        });
    }
    Ok(())
}
