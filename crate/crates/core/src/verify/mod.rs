//! Independent checkers: brute-force oracles, lasso enumeration and simulation.

pub mod chain;
pub mod lassos;
pub mod monte_carlo;
pub mod oracle;

use crate::error::BudgetError;
use crate::game::{StochasticGame, VertexSet};
use crate::objective::{Lasso, Objective};
use crate::template::StrategyTemplate;

pub use chain::{chain_satisfies_as, InducedChain, MemorylessProfile};
pub use lassos::{enumerate_lassos, for_each_lasso, is_random_fair, LassoBudget};
pub use oracle::{oracle_winning_set, randomized_strategy_winning_set, OracleBudget};

/// Outcome of [`check_template_winning`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateCheck {
    pub bound: usize,
    /// Lassos that satisfy the template and were evaluated against the objective.
    pub compliant: usize,
    pub counterexample: Option<Lasso>,
}

impl TemplateCheck {
    pub fn is_winning(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Bounded check that every lasso from `from` complying with `template` satisfies
/// `objective`.
///
/// On games with Random vertices only lassos that are fair at those vertices
/// are considered: any other ultimately periodic play has probability zero.
pub fn check_template_winning(
    game: &StochasticGame,
    template: &StrategyTemplate,
    from: &VertexSet,
    objective: &Objective,
    bound: usize,
    budget: LassoBudget,
) -> Result<TemplateCheck, BudgetError> {
    let deterministic = game.is_deterministic();
    let mut compliant = 0usize;
    let mut counterexample = None;
    for_each_lasso(
        game,
        from,
        bound,
        budget,
        |e| !template.prohibited.contains(&e),
        |lasso| {
            if counterexample.is_some() {
                return;
            }
            if !deterministic && !is_random_fair(game, lasso) {
                return;
            }
            if !template.satisfied_by(lasso) {
                return;
            }
            compliant += 1;
            if !lasso.satisfies_unchecked(objective) {
                counterexample = Some(lasso.clone());
            }
        },
    )?;
    Ok(TemplateCheck {
        bound,
        compliant,
        counterexample,
    })
}
