use crate::ambiguity::{plausible_ambiguities_with_budget, DEFAULT_ENUMERATION_BUDGET};
use crate::bounds::{gamma_threshold, ThetaCount};
use crate::dist::FiniteDistribution;
use crate::error::{Error, Result};
use crate::learner::mle;
use crate::measures::{err, ZeroOne};
use crate::models::{gen_kg, KgParams, LanguageInstance};
use crate::rng::{mix, stream};
use crate::translator::TranslatorFamily;

/// Monte-Carlo check that the likelihood maximizer's error stays below `ε_γ`
/// at `γ = ln(|Θ|/δ)/m` with probability at least `1 − δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifyConfig {
    pub seed: u64,
    pub r: usize,
    pub n: usize,
    pub p: f64,
    pub m: usize,
    pub trials: usize,
    pub delta: f64,
    pub budget: u128,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self { seed: 1, r: 4, n: 5, p: 0.5, m: 100, trials: 200, delta: 0.1, budget: DEFAULT_ENUMERATION_BUDGET }
    }
}

/// Losses are sums of `1/|T|` terms accumulated along different paths.
const LOSS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyReport {
    /// Seed of the instance actually used (the first non-degenerate one).
    pub instance_seed: u64,
    pub family_size: usize,
    pub gamma: f64,
    pub epsilon_gamma: f64,
    pub ambiguity_count: usize,
    pub successes: usize,
    pub trials: usize,
    pub frequency: f64,
    /// `1 − δ`.
    pub target: f64,
    /// Three binomial standard deviations at the target.
    pub slack: f64,
    pub passed: bool,
}

/// Runs the certification on a knowledge graph instance with `α = 1`, so
/// the ground truth maps every edge into `P`, under the unsmoothed prior
/// `U(P)`. Members that put an edge outside `P` then have infinite
/// objective, which makes the ambiguity set a proper subset of the family.
pub fn certify_ambiguity_bound(config: &CertifyConfig) -> Result<CertifyReport> {
    if config.m == 0 {
        return Err(Error::Parameter("m must be at least 1: γ is undefined at m = 0".into()));
    }
    if config.trials == 0 {
        return Err(Error::Parameter("at least one trial is required".into()));
    }
    if !(config.delta > 0.0 && config.delta < 1.0) {
        return Err(Error::Parameter(format!("δ = {} outside (0, 1)", config.delta)));
    }
    let params = KgParams { n: config.n, r: config.r, p: config.p, alpha: 1.0 };
    let (instance_seed, inst) = (0..1000u64)
        .map(|k| mix(config.seed, k))
        .map(|s| gen_kg(s, params).map(|inst| (s, inst)))
        .find(|res| res.as_ref().map_or(true, |(_, inst)| !inst.degenerate))
        .ok_or_else(|| Error::Contract("no non-degenerate instance in 1000 seeds".into()))??;

    let family = &inst.family;
    let rho = FiniteDistribution::uniform_mask(&inst.plausible)?;
    let tau = inst.tau()?;
    let theta = ThetaCount::from_count(family.len() as u128)?;
    let gamma = gamma_threshold(config.m as f64, theta, config.delta)?.min(1.0);
    let set = plausible_ambiguities_with_budget(family, &tau, &rho, gamma, 0.0, &ZeroOne, config.budget)?;

    let sampler = inst.mu.sampler();
    let mut successes = 0;
    for trial in 0..config.trials {
        let mut rng = stream(mix(instance_seed, trial as u64), "certify/samples");
        let samples = sampler.sample_n(&mut rng, config.m);
        let best = mle(&samples, &rho, family)?;
        if err(family, best.theta_index, &inst.mu)? <= set.epsilon_gamma + LOSS_TOLERANCE {
            successes += 1;
        }
    }
    let frequency = successes as f64 / config.trials as f64;
    let target = 1.0 - config.delta;
    let slack = 3.0 * (config.delta * target / config.trials as f64).sqrt();
    Ok(CertifyReport {
        instance_seed,
        family_size: family.len(),
        gamma,
        epsilon_gamma: set.epsilon_gamma,
        ambiguity_count: set.members.len(),
        successes,
        trials: config.trials,
        frequency,
        target,
        slack,
        passed: frequency >= target - slack,
    })
}
