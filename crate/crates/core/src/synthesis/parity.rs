//! Parity games: Zielonka's recursion, templates for deterministic games and
//! the back-mapping through the gadget reduction for stochastic games.

use std::collections::BTreeSet;

use crate::error::SynthesisError;
use crate::fixpoint::SubGame;
use crate::game::{Edge, PriorityFunction, StochasticGame, VertexId, VertexSet};
use crate::template::{LiveGroup, StrategyTemplate};

use super::basic::live_groups;
use super::reduce::reduce;
use super::SynthesisResult;

/// Vertices of minimum priority in the subgame, and that priority.
fn min_priority(sub: &SubGame<'_>, p: &PriorityFunction) -> Option<(u32, VertexSet)> {
    let x = sub.active().iter().map(|v| p.get(v)).min()?;
    let set = VertexSet::from_iter(
        sub.game().num_vertices(),
        sub.active().iter().filter(|&v| p.get(v) == x).map(|v| v.0),
    );
    Some((x, set))
}

fn check_deterministic(game: &StochasticGame, p: &PriorityFunction) -> Result<(), SynthesisError> {
    if !game.is_deterministic() {
        return Err(SynthesisError::NotDeterministic);
    }
    p.check_total(game)?;
    Ok(())
}

/// Winning regions `(W□, W○)` of a deterministic parity game.
pub fn zielonka_solve(
    game: &StochasticGame,
    p: &PriorityFunction,
) -> Result<(VertexSet, VertexSet), SynthesisError> {
    check_deterministic(game, p)?;
    Ok(solve(&SubGame::full(game), p, 0))
}

fn solve(sub: &SubGame<'_>, p: &PriorityFunction, depth: usize) -> (VertexSet, VertexSet) {
    let n = sub.game().num_vertices();
    assert!(
        depth <= n + 1,
        "recursion deeper than the number of vertices"
    );
    let Some((x, min_set)) = min_priority(sub, p) else {
        return (VertexSet::empty(n), VertexSet::empty(n));
    };
    let all = sub.active().clone();
    if x % 2 == 0 {
        let a = sub.attr_even(&min_set);
        let (_, w_odd) = solve(&sub.without(&a), p, depth + 1);
        if w_odd.is_empty() {
            return (all, VertexSet::empty(n));
        }
        let b = sub.attr_odd(&w_odd);
        let (w_even2, mut w_odd2) = solve(&sub.without(&b), p, depth + 1);
        w_odd2.union_with(&b);
        (w_even2, w_odd2)
    } else {
        let a = sub.attr_odd(&min_set);
        let (w_even, _) = solve(&sub.without(&a), p, depth + 1);
        if w_even.is_empty() {
            return (VertexSet::empty(n), all);
        }
        let b = sub.attr_even(&w_even);
        let (mut w_even2, w_odd2) = solve(&sub.without(&b), p, depth + 1);
        w_even2.union_with(&b);
        (w_even2, w_odd2)
    }
}

/// Output of [`det_parity_template`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetParityResult {
    pub even: VertexSet,
    pub odd: VertexSet,
    pub live_groups: BTreeSet<LiveGroup>,
    pub colive: BTreeSet<Edge>,
}

impl DetParityResult {
    fn empty(n: usize) -> Self {
        DetParityResult {
            even: VertexSet::empty(n),
            odd: VertexSet::empty(n),
            live_groups: BTreeSet::new(),
            colive: BTreeSet::new(),
        }
    }

    /// The template `(Edges□(W□, W○), L, C)`.
    pub fn template(&self, game: &StochasticGame) -> StrategyTemplate {
        StrategyTemplate {
            prohibited: game.even_edges(&self.even, &self.odd),
            live_groups: self.live_groups.clone(),
            colive: self.colive.clone(),
        }
    }
}

/// Template construction for deterministic parity games, following Zielonka's
/// recursion and collecting live-groups and co-live edges on the way.
pub fn det_parity_template(
    game: &StochasticGame,
    p: &PriorityFunction,
) -> Result<DetParityResult, SynthesisError> {
    check_deterministic(game, p)?;
    Ok(det_parity(&SubGame::full(game), p, 0))
}

fn det_parity(sub: &SubGame<'_>, p: &PriorityFunction, depth: usize) -> DetParityResult {
    let game = sub.game();
    let n = game.num_vertices();
    assert!(
        depth <= n + 1,
        "recursion deeper than the number of vertices"
    );
    let Some((x, min_set)) = min_priority(sub, p) else {
        return DetParityResult::empty(n);
    };
    let all = sub.active().clone();
    if x % 2 == 0 {
        let a = sub.attr_even(&min_set);
        if a == all {
            return DetParityResult {
                even: all,
                odd: VertexSet::empty(n),
                live_groups: live_groups(sub, &min_set, sub.active())
                    .into_iter()
                    .collect(),
                colive: BTreeSet::new(),
            };
        }
        let first = det_parity(&sub.without(&a), p, depth + 1);
        if first.odd.is_empty() {
            let mut groups = first.live_groups;
            groups.extend(live_groups(sub, &min_set, sub.active()));
            return DetParityResult {
                even: all,
                odd: VertexSet::empty(n),
                live_groups: groups,
                colive: first.colive,
            };
        }
        let b = sub.attr_odd(&first.odd);
        let mut second = det_parity(&sub.without(&b), p, depth + 1);
        second.odd.union_with(&b);
        second
    } else {
        let a = sub.attr_odd(&min_set);
        if a == all {
            return DetParityResult {
                even: VertexSet::empty(n),
                odd: all,
                ..DetParityResult::empty(n)
            };
        }
        let first = det_parity(&sub.without(&a), p, depth + 1);
        if first.even.is_empty() {
            return DetParityResult {
                even: VertexSet::empty(n),
                odd: all,
                ..DetParityResult::empty(n)
            };
        }
        let mut groups = first.live_groups;
        groups.extend(live_groups(sub, &first.even, &all));
        let mut colive = first.colive;
        colive.extend(game.even_edges(&first.even, &all.difference(&first.even)));
        let b = sub.attr_even(&first.even);
        let second = det_parity(&sub.without(&b), p, depth + 1);
        groups.extend(second.live_groups);
        colive.extend(second.colive);
        DetParityResult {
            even: second.even.union(&b),
            odd: second.odd,
            live_groups: groups,
            colive,
        }
    }
}

/// Parity templates for stochastic games: reduce, solve the deterministic game,
/// then keep only the template edges whose source is an input vertex.
pub fn parity_template(
    game: &StochasticGame,
    p: &PriorityFunction,
) -> Result<SynthesisResult, SynthesisError> {
    p.check_total(game)?;
    let reduced = reduce(game, p);
    let det = det_parity(&SubGame::full(&reduced.game), &reduced.priorities, 0);
    let n = game.num_vertices();
    // Input vertex v is represented by reduced vertex v.
    let back = |e: &Edge| -> Option<Edge> {
        let src = reduced.origin[e.src.0]?;
        let dst = reduced.origin[e.dst.0]?;
        game.has_edge(src, dst).then_some(Edge { src, dst })
    };
    let winning = VertexSet::from_iter(n, (0..n).filter(|&v| det.even.contains(VertexId(v))));
    let prohibited = reduced
        .game
        .even_edges(&det.even, &det.odd)
        .iter()
        .filter_map(back)
        .collect();
    let live_groups = det
        .live_groups
        .iter()
        .map(|group| group.iter().filter_map(back).collect::<LiveGroup>())
        .filter(|group| !group.is_empty())
        .collect();
    let colive = det.colive.iter().filter_map(back).collect();
    Ok(SynthesisResult {
        winning_set: winning,
        template: StrategyTemplate {
            prohibited,
            live_groups,
            colive,
        },
    })
}

/// Almost-sure parity winning set through the reduction and Zielonka's algorithm.
pub fn parity_winning_set(
    game: &StochasticGame,
    p: &PriorityFunction,
) -> Result<VertexSet, SynthesisError> {
    p.check_total(game)?;
    let reduced = reduce(game, p);
    let (even, _) = solve(&SubGame::full(&reduced.game), &reduced.priorities, 0);
    let n = game.num_vertices();
    Ok(VertexSet::from_iter(
        n,
        (0..n).filter(|&v| even.contains(VertexId(v))),
    ))
}
