//! Seeded generators for the synthetic language models.
//!
//! Every generator is a pure function of `(seed, params)`: each random
//! structure is drawn from its own tagged stream (see [`crate::rng::stream`]).

pub mod cn;
pub mod format;
pub mod kg;
pub mod lower_bound;
pub mod rt;

use crate::dist::FiniteDistribution;
use crate::error::Result;
use crate::translator::TranslatorFamily;

pub use cn::{gen_cn, CnParams, CommonNonsenseInstance, FeistelFamily};
pub use kg::{gen_kg, kg_prior, KgParams, KnowledgeGraphInstance, NodeInjectionFamily};
pub use lower_bound::{gen_lower_bound_instance, GridShiftFamily, LbParams, LowerBoundInstance};
pub use rt::{gen_rt, RtParams, TreeLanguageInstance, WordPermutationFamily};

/// A generated language pair: a family with a hidden ground truth, the
/// source distribution `μ` and the prior `ρ`.
pub trait LanguageInstance {
    type Family: TranslatorFamily;

    fn family(&self) -> &Self::Family;

    fn mu(&self) -> &FiniteDistribution;

    fn rho(&self) -> &FiniteDistribution;

    /// `τ = f_⋆ ∘ μ`.
    fn tau(&self) -> Result<FiniteDistribution> {
        let star = self.family().require_star()?;
        self.mu().pushforward(&self.family().translator(star))
    }
}
