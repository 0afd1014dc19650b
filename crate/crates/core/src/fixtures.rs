//! Small named games shared by tests, examples and documentation.

use crate::game::{Edge, Owner, StochasticGame, VertexId};
use crate::template::StrategyTemplate;

pub const U: VertexId = VertexId(0);
pub const V: VertexId = VertexId(1);
pub const W: VertexId = VertexId(2);

/// Three Even vertices: `u -> v`, `v -> u`, `v -> w`, `w -> w`.
pub fn g_ex() -> StochasticGame {
    StochasticGame::new(vec![Owner::Even; 3], vec![vec![V], vec![U, W], vec![W]])
        .expect("valid fixture")
}

pub const R_V0: VertexId = VertexId(0);
pub const R_V1: VertexId = VertexId(1);
pub const R_W: VertexId = VertexId(2);

/// `v0` is Random with successors `w, v1`; `v1` is Odd and returns to `v0`;
/// `w` is an Even sink.
pub fn g_r() -> StochasticGame {
    StochasticGame::new(
        vec![Owner::Random, Owner::Odd, Owner::Even],
        vec![vec![R_W, R_V1], vec![R_V0], vec![R_W]],
    )
    .expect("valid fixture")
}

/// `(∅, ∅, {(u,v),(v,u)})`.
pub fn t1() -> StrategyTemplate {
    StrategyTemplate::colive_only([Edge::new(U, V), Edge::new(V, U)])
}

/// `(∅, ∅, {(u,v)})`.
pub fn t2() -> StrategyTemplate {
    StrategyTemplate::colive_only([Edge::new(U, V)])
}

/// `(∅, ∅, {(v,u)})`.
pub fn t3() -> StrategyTemplate {
    StrategyTemplate::colive_only([Edge::new(V, U)])
}
