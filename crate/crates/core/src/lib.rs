//! Permissive strategy templates for 2.5-player stochastic games.
//!
//! A game has vertices owned by Even, Odd or Random (uniform choice). The crate
//! computes almost-sure winning sets for safety, reachability, Büchi, co-Büchi
//! and parity objectives, builds strategy templates `(P, L, C)` describing every
//! winning behaviour at once, and extracts concrete strategies from them.

pub mod adapt;
pub mod error;
pub mod extraction;
pub mod fixpoint;
pub mod fixtures;
pub mod format;
pub mod game;
pub mod objective;
pub mod random;
pub mod synthesis;
pub mod template;
pub mod verify;

pub use error::{
    BudgetError, Conflict, ExtractError, GameError, LassoError, SynthesisError, TemplateError,
};
pub use game::{Edge, Owner, PriorityFunction, StochasticGame, VertexId, VertexSet};
pub use objective::{lasso_satisfies, Lasso, Objective, ObjectiveKind};
pub use synthesis::{synthesize, SynthesisResult};
pub use template::{LiveGroup, StrategyTemplate};
