//! Seeded generators of small random games for tests and benchmarks.

use rand::seq::index::sample;
use rand::Rng;

use crate::game::{Owner, PriorityFunction, StochasticGame, VertexId, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomGameConfig {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub max_out_degree: usize,
    pub max_priority: u32,
    /// Allow Random vertices; `false` yields deterministic games.
    pub stochastic: bool,
}

impl Default for RandomGameConfig {
    fn default() -> Self {
        RandomGameConfig {
            min_vertices: 1,
            max_vertices: 7,
            max_out_degree: 3,
            max_priority: 3,
            stochastic: true,
        }
    }
}

impl RandomGameConfig {
    pub fn deterministic(self) -> Self {
        RandomGameConfig {
            stochastic: false,
            ..self
        }
    }

    pub fn with_max_vertices(self, max_vertices: usize) -> Self {
        RandomGameConfig {
            max_vertices,
            ..self
        }
    }
}

/// A random game with priorities. Owners, out-degrees (1 to the maximum,
/// capped by `|V|`), successors and priorities are drawn uniformly.
pub fn random_game<R: Rng + ?Sized>(
    rng: &mut R,
    config: RandomGameConfig,
) -> (StochasticGame, PriorityFunction) {
    let n = rng.random_range(config.min_vertices..=config.max_vertices);
    let owner_kinds = if config.stochastic { 3 } else { 2 };
    let owners: Vec<Owner> = (0..n)
        .map(|_| Owner::from_code(rng.random_range(0..owner_kinds)).expect("valid code"))
        .collect();
    let successors = (0..n)
        .map(|_| {
            let degree = rng.random_range(1..=config.max_out_degree.min(n));
            sample(rng, n, degree).into_iter().map(VertexId).collect()
        })
        .collect();
    let priorities = (0..n)
        .map(|_| rng.random_range(0..=config.max_priority))
        .collect();
    let game = StochasticGame::new(owners, successors).expect("generated games have no dead ends");
    (game, PriorityFunction::new(priorities))
}

/// Each vertex joins the set independently with probability 1/2.
pub fn random_subset<R: Rng + ?Sized>(rng: &mut R, n: usize) -> VertexSet {
    VertexSet::from_iter(n, (0..n).filter(|_| rng.random_bool(0.5)))
}
