//! Winning sets and strategy templates for the five objectives.

pub mod basic;
pub mod parity;
pub mod reduce;

use crate::error::SynthesisError;
use crate::game::{StochasticGame, VertexSet};
use crate::objective::Objective;
use crate::template::StrategyTemplate;

pub use basic::{
    buchi_template, cobuchi_priorities, cobuchi_template, cobuchi_template_direct, live_groups,
    reachability_template, safety_template,
};
pub use parity::{
    det_parity_template, parity_template, parity_winning_set, zielonka_solve, DetParityResult,
};
pub use reduce::{reduce, Gadget, ReducedGame};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisResult {
    /// Vertices from which Even wins almost surely.
    pub winning_set: VertexSet,
    pub template: StrategyTemplate,
}

/// Dispatches to the template construction for `objective`.
pub fn synthesize(
    game: &StochasticGame,
    objective: &Objective,
) -> Result<SynthesisResult, SynthesisError> {
    Ok(match objective {
        Objective::Safety(x) => safety_template(game, x),
        Objective::Reachability(x) => reachability_template(game, x),
        Objective::Buchi(x) => buchi_template(game, x),
        Objective::CoBuchi(x) => cobuchi_template(game, x),
        Objective::Parity(p) => parity_template(game, p)?,
    })
}
