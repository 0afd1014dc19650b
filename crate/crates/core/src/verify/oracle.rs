//! Brute-force almost-sure winning sets by enumerating memoryless pure profiles.

use crate::error::BudgetError;
use crate::game::{Owner, StochasticGame, VertexId, VertexSet};
use crate::objective::Objective;

use super::chain::{InducedChain, MemorylessProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vertices: usize,
    /// Bound on the number of profiles of each player.
    pub max_profiles: u128,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: 7,
            max_profiles: 1_000_000,
        }
    }
}

/// Number of memoryless pure profiles of `owner`.
pub fn profile_count(game: &StochasticGame, owner: Owner) -> u128 {
    game.vertices()
        .filter(|&v| game.owner(v) == owner)
        .map(|v| game.successors(v).len() as u128)
        .product()
}

fn check_budget(game: &StochasticGame, budget: OracleBudget) -> Result<(), BudgetError> {
    if game.num_vertices() > budget.max_vertices {
        return Err(BudgetError::TooManyVertices {
            found: game.num_vertices(),
            limit: budget.max_vertices,
        });
    }
    for (owner, what) in [(Owner::Even, "Even"), (Owner::Odd, "Odd")] {
        let needed = profile_count(game, owner);
        if needed > budget.max_profiles {
            return Err(BudgetError::TooManyProfiles {
                what,
                needed,
                limit: budget.max_profiles,
            });
        }
    }
    Ok(())
}

/// Calls `f` on every memoryless pure profile of `owner`; stops when `f` returns false.
pub fn for_each_profile<F>(game: &StochasticGame, owner: Owner, mut f: F)
where
    F: FnMut(&MemorylessProfile) -> bool,
{
    let controlled: Vec<VertexId> = game
        .vertices()
        .filter(|&v| game.owner(v) == owner)
        .collect();
    let mut digits = vec![0usize; controlled.len()];
    let mut profile = MemorylessProfile {
        choice: vec![None; game.num_vertices()],
    };
    loop {
        for (i, &v) in controlled.iter().enumerate() {
            profile.choice[v.0] = Some(game.successors(v)[digits[i]]);
        }
        if !f(&profile) {
            return;
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == controlled.len() {
                return;
            }
            digits[i] += 1;
            if digits[i] < game.successors(controlled[i]).len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Vertices from which some Even profile wins almost surely against every Odd profile.
pub fn oracle_winning_set(
    game: &StochasticGame,
    objective: &Objective,
    budget: OracleBudget,
) -> Result<VertexSet, BudgetError> {
    check_budget(game, budget)?;
    let mut winning = game.empty_set();
    for_each_profile(game, Owner::Even, |even| {
        let good = worst_case(game, objective, |odd| {
            InducedChain::from_profiles(game, even, odd)
        });
        winning.union_with(&good);
        winning.len() < game.num_vertices()
    });
    Ok(winning)
}

/// Almost-sure winning set of a fixed memoryless randomized Even strategy that
/// plays every listed successor with positive probability.
pub fn randomized_strategy_winning_set(
    game: &StochasticGame,
    support: &[Vec<VertexId>],
    objective: &Objective,
    budget: OracleBudget,
) -> Result<VertexSet, BudgetError> {
    check_budget(game, budget)?;
    Ok(worst_case(game, objective, |odd| {
        let successors = game
            .vertices()
            .map(|v| match game.owner(v) {
                Owner::Even => support[v.0].clone(),
                Owner::Odd => vec![odd.choice[v.0].expect("Odd choice")],
                Owner::Random => game.successors(v).to_vec(),
            })
            .collect();
        InducedChain::new(successors)
    }))
}

fn worst_case<C>(game: &StochasticGame, objective: &Objective, mut chain: C) -> VertexSet
where
    C: FnMut(&MemorylessProfile) -> InducedChain,
{
    let mut good = game.full_set();
    for_each_profile(game, Owner::Odd, |odd| {
        good.intersect_with(&chain(odd).almost_sure_states(objective));
        !good.is_empty()
    });
    good
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g_ex, g_r, R_V0, R_V1, W};

    #[test]
    fn g_ex_reach_w_everywhere() {
        let g = g_ex();
        let w = oracle_winning_set(
            &g,
            &Objective::Reachability(g.set_of([W])),
            OracleBudget::default(),
        );
        assert_eq!(w.unwrap(), g.full_set());
    }

    #[test]
    fn safety_of_everything() {
        let g = g_r();
        let w = oracle_winning_set(
            &g,
            &Objective::Safety(g.full_set()),
            OracleBudget::default(),
        );
        assert_eq!(w.unwrap(), g.full_set());
    }

    #[test]
    fn g_r_cannot_stay_away_from_w() {
        let g = g_r();
        let w = oracle_winning_set(
            &g,
            &Objective::Safety(g.set_of([R_V0, R_V1])),
            OracleBudget::default(),
        );
        assert!(w.unwrap().is_empty());
    }

    #[test]
    fn profile_enumeration_is_complete() {
        let g = g_ex();
        let mut seen = Vec::new();
        for_each_profile(&g, Owner::Even, |p| {
            seen.push(p.clone());
            true
        });
        assert_eq!(seen.len() as u128, profile_count(&g, Owner::Even));
        assert_eq!(seen.len(), 2);
        assert!(seen.iter().all(|p| p.is_valid_for(&g)));
    }

    #[test]
    fn vertex_budget() {
        let g = g_ex();
        let b = OracleBudget {
            max_vertices: 2,
            ..OracleBudget::default()
        };
        assert!(matches!(
            oracle_winning_set(&g, &Objective::Safety(g.full_set()), b),
            Err(BudgetError::TooManyVertices { found: 3, limit: 2 })
        ));
    }
}
