//! Learners: the exhaustive likelihood maximiser and its specialisations.

mod erm;
mod grid;
mod kg;
mod mle;
mod plausible;

pub use erm::erm_supervised;
pub use grid::grid_mle;
pub use kg::{kg_implausibility_score, kg_scores, InjectionTable, KgScoreboard, TopScorer, TABLE_BYTE_CAP};
pub use mle::{mle, mle_objective, MleResult};
pub use plausible::{holdout_disagreements, plausible_avg_error, plausible_update, PlausibleState, PlausibleTracker};
