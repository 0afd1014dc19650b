use thiserror::Error;

use crate::game::{Edge, VertexId};

fn list<T: std::fmt::Display>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(T::to_string).collect();
    format!("[{}]", parts.join(", "))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("vertex {0} has no outgoing edge")]
    DeadEnd(VertexId),
    #[error("edge {src}->{dst} points to an undeclared vertex")]
    DanglingSuccessor { src: VertexId, dst: VertexId },
    #[error("edge {src}->{dst} is listed twice")]
    DuplicateSuccessor { src: VertexId, dst: VertexId },
    #[error("{owners} owners but {successor_lists} successor lists")]
    ShapeMismatch {
        owners: usize,
        successor_lists: usize,
    },
    #[error("priority function covers {found} vertices, game has {expected}")]
    PriorityArity { expected: usize, found: usize },
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LassoError {
    #[error("lasso cycle is empty")]
    EmptyCycle,
    #[error("lasso step {0} is not an edge of the game")]
    NotAnEdge(Edge),
    #[error("lasso visits vertex {0}, which is out of range")]
    VertexOutOfRange(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("template edge {0} is not an edge of the game")]
    NotAnEdge(Edge),
    #[error("template edge {0} does not leave an Even vertex")]
    NotEvenEdge(Edge),
}

/// Why two templates cannot be merged.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Conflict {
    /// Every edge of a live-group is prohibited or co-live in the merged template.
    #[error(
        "live-group {} cannot recur: all its edges are prohibited or co-live",
        list(group)
    )]
    BlockedLiveGroup { group: Vec<Edge> },
    /// An Even vertex of the winning set has no permitted edge left.
    #[error("Even vertex {vertex} in the winning set has every outgoing edge prohibited")]
    TrappedVertex { vertex: VertexId },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("Even vertices {} keep no successor after removing prohibited and co-live edges", list(.0))]
    DeadEnds(Vec<VertexId>),
    #[error("parameters out of range: need 0 < alpha < 1 <= beta")]
    Parameters,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("input game has Random vertices; a deterministic game is required")]
    NotDeterministic,
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Enumeration budgets of the brute-force checkers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BudgetError {
    #[error("game has {found} vertices, oracle bound is {limit}")]
    TooManyVertices { found: usize, limit: usize },
    #[error("{what} would need {needed} profiles, budget is {limit}")]
    TooManyProfiles {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
    #[error("lasso enumeration exceeded {limit} lassos")]
    TooManyLassos { limit: usize },
}
