//! (γ, κ)-plausible ambiguities: members whose revised translations land on
//! prior mass `≤ κ` with `τ`-probability at most `γ`.

use rayon::prelude::*;

use crate::dist::{FiniteDistribution, TextId};
use crate::error::{Error, Result};
use crate::measures::{checked_difference, SemanticDifference};
use crate::translator::TranslatorFamily;

/// Default cap on `|Θ| × |support(τ)|` member evaluations.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct PlausibleAmbiguitySet {
    pub gamma: f64,
    pub kappa: f64,
    /// Member indices, ascending.
    pub members: Vec<usize>,
    /// Largest loss among members; 0 when there are none.
    pub epsilon_gamma: f64,
}

/// Per-member quantities behind the ambiguity sets at one `κ`:
/// the implausible mass `Pr_{y∼τ}[ρ(π_θ(y)) ≤ κ]` and the loss `L(θ)`.
#[derive(Debug, Clone)]
pub struct AmbiguityProfile {
    pub kappa: f64,
    pub implausible_mass: Vec<f64>,
    pub loss: Vec<f64>,
}

impl AmbiguityProfile {
    /// Enumerates every member against every text in the support of `τ`.
    ///
    /// For `y = f_⋆(x)` in the support, `π_θ(y) = f_θ(x)`, so the completion of
    /// the revision off `f_⋆(X)` never matters here.
    pub fn compute<F, L>(
        family: &F,
        tau: &FiniteDistribution,
        rho: &FiniteDistribution,
        kappa: f64,
        ell: &L,
        budget: u128,
    ) -> Result<Self>
    where
        F: TranslatorFamily + ?Sized,
        L: SemanticDifference + ?Sized,
    {
        if !(0.0..=1.0).contains(&kappa) {
            return Err(Error::Parameter(format!("κ = {kappa} outside [0, 1]")));
        }
        let star = family.require_star()?;
        for (what, d) in [("τ", tau), ("ρ", rho)] {
            if d.space_size() != family.target_size() {
                return Err(Error::Dimension {
                    what: if what == "τ" { "τ target space" } else { "ρ target space" },
                    expected: family.target_size(),
                    got: d.space_size(),
                });
            }
        }
        let (ys, probs): (Vec<TextId>, Vec<f64>) = tau.iter_support().unzip();
        let needed = family.len() as u128 * ys.len() as u128;
        if needed > budget {
            return Err(Error::Budget { needed, cap: budget });
        }

        let inverse = family.translator(star).inverse();
        let xs = ys
            .iter()
            .map(|&y| {
                inverse[y as usize].ok_or_else(|| {
                    Error::Contract(format!("τ puts mass on {y}, which is not a ground-truth translation"))
                })
            })
            .collect::<Result<Vec<TextId>>>()?;

        let per_member = (0..family.len())
            .into_par_iter()
            .map_init(Vec::new, |images, theta| {
                family.translate_many(theta, &xs, images);
                let mut bad = 0.0;
                let mut loss = 0.0;
                for ((&p, &y), &z) in probs.iter().zip(&ys).zip(images.iter()) {
                    if rho.prob(z) <= kappa {
                        bad += p;
                    }
                    loss += p * checked_difference(ell, y, z)?;
                }
                Ok((bad, loss))
            })
            .collect::<Result<Vec<(f64, f64)>>>()?;
        let (implausible_mass, loss) = per_member.into_iter().unzip();
        Ok(Self { kappa, implausible_mass, loss })
    }

    pub fn at(&self, gamma: f64) -> PlausibleAmbiguitySet {
        let members: Vec<usize> =
            self.implausible_mass.iter().enumerate().filter(|(_, &m)| m <= gamma).map(|(i, _)| i).collect();
        let epsilon_gamma = members.iter().map(|&i| self.loss[i]).fold(0.0, f64::max);
        PlausibleAmbiguitySet { gamma, kappa: self.kappa, members, epsilon_gamma }
    }
}

pub fn plausible_ambiguities<F, L>(
    family: &F,
    tau: &FiniteDistribution,
    rho: &FiniteDistribution,
    gamma: f64,
    kappa: f64,
    ell: &L,
) -> Result<PlausibleAmbiguitySet>
where
    F: TranslatorFamily + ?Sized,
    L: SemanticDifference + ?Sized,
{
    plausible_ambiguities_with_budget(family, tau, rho, gamma, kappa, ell, DEFAULT_ENUMERATION_BUDGET)
}

pub fn plausible_ambiguities_with_budget<F, L>(
    family: &F,
    tau: &FiniteDistribution,
    rho: &FiniteDistribution,
    gamma: f64,
    kappa: f64,
    ell: &L,
    budget: u128,
) -> Result<PlausibleAmbiguitySet>
where
    F: TranslatorFamily + ?Sized,
    L: SemanticDifference + ?Sized,
{
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Parameter(format!("γ = {gamma} outside [0, 1]")));
    }
    Ok(AmbiguityProfile::compute(family, tau, rho, kappa, ell, budget)?.at(gamma))
}
