//! Simulation library for unsupervised translation between synthetic
//! languages: translator families with a hidden ground truth, seeded language
//! generators, likelihood-based learners, closed-form sample-complexity
//! bounds and an experiment harness.
//!
//! Texts are dense integer ids ([`TextId`]); every family member is an
//! injective map from source ids to target ids.

pub mod ambiguity;
pub mod bounds;
pub mod combinatorics;
pub mod dist;
pub mod error;
pub mod experiments;
pub mod learner;
pub mod measures;
pub mod models;
pub mod revision;
pub mod rng;
pub mod translator;

pub use dist::{FiniteDistribution, Sampler, TextId};
pub use error::{Error, Result};
pub use measures::{SemanticDifference, ZeroOne};
pub use translator::{ExplicitFamily, InjectionFamily, Translator, TranslatorFamily};
