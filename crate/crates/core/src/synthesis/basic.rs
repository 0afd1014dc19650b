//! Templates for safety, reachability, Büchi and co-Büchi objectives.

use std::collections::BTreeSet;

use crate::fixpoint::SubGame;
use crate::game::{PriorityFunction, StochasticGame, VertexSet};
use crate::template::{LiveGroup, StrategyTemplate};

use super::parity::{parity_template, parity_winning_set};
use super::SynthesisResult;

fn leaving(game: &StochasticGame, winning: &VertexSet) -> BTreeSet<crate::game::Edge> {
    game.even_edges(winning, &winning.complement())
}

/// `□X`: stay in the safe set, prohibiting every Even edge that leaves it.
pub fn safety_template(game: &StochasticGame, target: &VertexSet) -> SynthesisResult {
    let winning = SubGame::full(game).safe_set(target);
    let template = StrategyTemplate {
        prohibited: leaving(game, &winning),
        ..StrategyTemplate::default()
    };
    SynthesisResult {
        winning_set: winning,
        template,
    }
}

/// `◇X`: Even edges looping outside the almost-sure attractor of `X` are co-live.
pub fn reachability_template(game: &StochasticGame, target: &VertexSet) -> SynthesisResult {
    let sub = SubGame::full(game);
    let a = sub.attr_prime(target);
    let winning = sub.attr_prime_even(&a);
    let rest = winning.difference(&a);
    let template = StrategyTemplate {
        prohibited: leaving(game, &winning),
        live_groups: BTreeSet::new(),
        colive: game.even_edges(&rest, &rest),
    };
    SynthesisResult {
        winning_set: winning,
        template,
    }
}

/// `□◇X`: live-groups force progress towards `X` inside the winning set.
///
/// The live-group iteration runs on the whole game. It never leaves the
/// winning set: a vertex that is forced into, or can move into, a winning
/// vertex is winning itself. Random vertices join a layer as soon as one
/// successor is in it, because every successor is winning.
pub fn buchi_template(game: &StochasticGame, target: &VertexSet) -> SynthesisResult {
    let sub = SubGame::full(game);
    let winning = sub.buchi_winning_set(target);
    let groups = live_groups(&sub, &target.intersection(&winning), &winning);
    let template = StrategyTemplate {
        prohibited: leaving(game, &winning),
        live_groups: groups.into_iter().collect(),
        colive: BTreeSet::new(),
    };
    SynthesisResult {
        winning_set: winning,
        template,
    }
}

/// Iterates `A ← Attr′(X)`, `X ← A ∪ Pre□(A)` and records the Even edges from
/// `X \ A` into `A` of every round, until `X = A`. Plays are assumed to stay
/// in `within`, which replaces the outer fixpoint of `Attr′`.
pub fn live_groups(sub: &SubGame<'_>, target: &VertexSet, within: &VertexSet) -> Vec<LiveGroup> {
    let game = sub.game();
    let mut x = target.intersection(sub.active());
    let mut groups = Vec::new();
    for _ in 0..=game.num_vertices() {
        let a = sub.attr_within(&x, within);
        let mut next = sub.pre_even(&a);
        next.union_with(&a);
        if next == a {
            return groups;
        }
        groups.push(game.even_edges(&next.difference(&a), &a));
        x = next;
    }
    unreachable!("live-group iteration grows strictly and must stop within |V| rounds")
}

/// `◇□X`. Uses [`cobuchi_template_direct`] when it finds the whole winning
/// set. A single safe-core pass can miss vertices that keep returning to `X`
/// through vertices outside the core. In that case the objective is solved
/// as the parity objective that gives `X` priority 2 and every other vertex
/// priority 1.
pub fn cobuchi_template(game: &StochasticGame, target: &VertexSet) -> SynthesisResult {
    let direct = cobuchi_template_direct(game, target);
    let priorities = cobuchi_priorities(game, target);
    let winning = parity_winning_set(game, &priorities).expect("priorities cover every vertex");
    if direct.winning_set == winning {
        return direct;
    }
    parity_template(game, &priorities).expect("priorities cover every vertex")
}

pub fn cobuchi_priorities(game: &StochasticGame, target: &VertexSet) -> PriorityFunction {
    PriorityFunction::new(
        game.vertices()
            .map(|v| if target.contains(v) { 2 } else { 1 })
            .collect(),
    )
}

/// Reach the safe part of `X` almost surely, then leave it only finitely often.
pub fn cobuchi_template_direct(game: &StochasticGame, target: &VertexSet) -> SynthesisResult {
    let sub = SubGame::full(game);
    let safe = sub.safe_set(target);
    let a = sub.attr_prime(&safe);
    let winning = sub.attr_prime_even(&a);
    let rest = winning.difference(&a);
    let mut colive = game.even_edges(&safe, &winning.difference(&safe));
    colive.extend(game.even_edges(&rest, &rest));
    let template = StrategyTemplate {
        prohibited: leaving(game, &winning),
        live_groups: BTreeSet::new(),
        colive,
    };
    SynthesisResult {
        winning_set: winning,
        template,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g_ex, g_r, t1, R_V0, R_V1, R_W, U, V, W};
    use crate::game::{Edge, Owner};

    fn group(edges: &[(usize, usize)]) -> LiveGroup {
        edges.iter().map(|&(a, b)| Edge::new(a, b)).collect()
    }

    #[test]
    fn safety_examples() {
        let g = g_ex();
        let all = safety_template(&g, &g.full_set());
        assert_eq!(all.winning_set, g.full_set());
        assert!(all.template.is_empty());
        let uv = safety_template(&g, &g.set_of([U, V]));
        assert_eq!(uv.winning_set, g.set_of([U, V]));
        assert_eq!(
            uv.template,
            StrategyTemplate::prohibited_only([Edge::new(V, W)])
        );
        let r = g_r();
        assert!(safety_template(&r, &r.set_of([R_V0, R_V1]))
            .winning_set
            .is_empty());
    }

    #[test]
    fn reachability_reproduces_t1() {
        let g = g_ex();
        let res = reachability_template(&g, &g.set_of([W]));
        assert_eq!(res.winning_set, g.full_set());
        assert_eq!(res.template, t1());
        let everything = reachability_template(&g, &g.full_set());
        assert!(everything.template.is_empty());
        let r = g_r();
        let res = reachability_template(&r, &r.set_of([R_W]));
        assert_eq!(res.winning_set, r.full_set());
        assert!(res.template.colive.is_empty());
    }

    #[test]
    fn buchi_on_u_requires_returning() {
        let g = g_ex();
        let res = buchi_template(&g, &g.set_of([U]));
        assert_eq!(res.winning_set, g.set_of([U, V]));
        assert!(res.template.live_groups.contains(&group(&[(1, 0)])));
        assert_eq!(res.template.prohibited, [Edge::new(V, W)].into());
    }

    #[test]
    fn buchi_everything_needs_no_groups() {
        let g = g_ex();
        let res = buchi_template(&g, &g.full_set());
        assert!(res.template.live_groups.is_empty());
        assert_eq!(
            live_groups(&SubGame::full(&g), &g.full_set(), &g.full_set()),
            Vec::<LiveGroup>::new()
        );
    }

    #[test]
    fn live_groups_on_w_stop_after_one_round() {
        // u reaches v's attractor without Even's help, so only (v, w) is needed.
        let g = g_ex();
        let groups = live_groups(&SubGame::full(&g), &g.set_of([W]), &g.full_set());
        assert_eq!(groups, vec![group(&[(1, 2)])]);
        let res = buchi_template(&g, &g.set_of([W]));
        assert_eq!(res.winning_set, g.full_set());
    }

    #[test]
    fn live_groups_without_even_help() {
        // Random v0 -> {w, v1}, v1 (now Random) -> v0: w is reached almost surely.
        let g = StochasticGame::new(
            vec![Owner::Random, Owner::Random, Owner::Even],
            vec![vec![R_W, R_V1], vec![R_V0], vec![R_W]],
        )
        .unwrap();
        let groups = live_groups(&SubGame::full(&g), &g.set_of([R_W]), &g.full_set());
        assert!(groups.is_empty());
    }

    #[test]
    fn cobuchi_examples() {
        let g = g_ex();
        let all = cobuchi_template(&g, &g.full_set());
        assert_eq!(all.winning_set, g.full_set());
        assert!(all.template.colive.is_empty());
        let w = cobuchi_template(&g, &g.set_of([W]));
        assert_eq!(w.winning_set, g.full_set());
        assert_eq!(w.template, t1());
        // w only loops on itself, so it stays outside the winning set.
        let uv = cobuchi_template(&g, &g.set_of([U, V]));
        assert_eq!(uv.winning_set, g.set_of([U, V]));
        let safe = g.set_of([U, V]);
        let required = g.even_edges(&safe, &uv.winning_set.difference(&safe));
        assert!(uv.template.colive.is_superset(&required));
    }

    fn game(owners: &[Owner], succ: &[&[usize]]) -> StochasticGame {
        StochasticGame::new(
            owners.to_vec(),
            succ.iter()
                .map(|s| s.iter().map(|&v| crate::game::VertexId(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn cobuchi_without_a_safe_core() {
        // Odd can leave X = {0, 1, 3} through 2, but each visit to the Random
        // vertex 2 may end in the sink 1.
        use Owner::*;
        let g = game(
            &[Random, Odd, Random, Odd],
            &[&[0, 3], &[1], &[2, 3, 1], &[3, 0, 2]],
        );
        let x = g.set_of([0, 1, 3].map(crate::game::VertexId));
        assert_eq!(
            cobuchi_template_direct(&g, &x).winning_set,
            g.set_of([crate::game::VertexId(1)])
        );
        assert_eq!(cobuchi_template(&g, &x).winning_set, g.full_set());
    }

    #[test]
    fn buchi_group_behind_a_random_vertex() {
        // 2 may loop forever unless it is made to move to the Random vertex 3.
        use Owner::*;
        let g = game(
            &[Even, Even, Even, Random, Odd],
            &[&[4, 0], &[0, 3, 2], &[3, 2], &[1, 3, 2], &[4]],
        );
        let res = buchi_template(&g, &g.set_of([crate::game::VertexId(4)]));
        assert_eq!(res.winning_set, g.full_set());
        assert!(res.template.live_groups.contains(&group(&[(2, 3)])));
    }

    #[test]
    fn cobuchi_odd_loop_outside_the_safe_core() {
        // Odd vertex 1 may loop in X forever, but its edge to 2 keeps it out of the safe core.
        use Owner::*;
        let g = game(
            &[Even, Odd, Odd, Even],
            &[&[3, 1], &[3, 2, 1], &[0], &[1, 3, 0]],
        );
        let x = g.set_of([1, 2, 3].map(crate::game::VertexId));
        assert!(!cobuchi_template_direct(&g, &x)
            .winning_set
            .contains(crate::game::VertexId(1)));
        assert_eq!(cobuchi_template(&g, &x).winning_set, g.full_set());
    }
}
