//! Fault adaptation: disabled Even edges become a prohibited-only template that
//! is merged into an existing template.

use std::time::{Duration, Instant};

use crate::error::{BudgetError, Conflict, GameError, SynthesisError, TemplateError};
use crate::extraction::{extract_pure_partial, FloatMixed};
use crate::game::{Edge, Owner, StochasticGame, VertexId, VertexSet};
use crate::objective::Objective;
use crate::synthesis::synthesize;
use crate::template::StrategyTemplate;
use crate::verify::{
    check_template_winning, randomized_strategy_winning_set, LassoBudget, OracleBudget,
    TemplateCheck,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AdaptConfig {
    /// Lasso bound of the winningness check; `None` means `2·|V|`.
    pub bound: Option<usize>,
    pub lassos: LassoBudget,
    pub oracle: OracleBudget,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AdaptError {
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Budget(#[from] BudgetError),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
}

#[derive(Clone, Debug)]
pub struct AdaptReport {
    pub disabled: Vec<Edge>,
    /// Merged template, absent on conflict.
    pub combined: Option<StrategyTemplate>,
    pub conflict: Option<Conflict>,
    /// Bounded check of the merged template over lassos from the winning set.
    pub lasso_check: Option<TemplateCheck>,
    /// Whether the randomized strategy that spreads over the permitted
    /// non-co-live edges wins from every vertex of the winning set.
    pub strategy_wins: Option<bool>,
    /// Even vertices that only keep co-live edges after the merge.
    pub pure_dead_ends: Vec<VertexId>,
    /// Winning set of a fresh synthesis on the game without the disabled edges;
    /// `None` if removing them leaves a vertex without successors.
    pub fresh_winning: Option<VertexSet>,
    pub fresh_error: Option<GameError>,
    /// Even vertices of the winning set whose remaining successors all lie
    /// outside it.
    pub forced_out: Vec<VertexId>,
    pub adapt_time: Duration,
    pub fresh_time: Duration,
}

impl AdaptReport {
    pub fn preserved(&self) -> bool {
        self.conflict.is_none()
            && self
                .lasso_check
                .as_ref()
                .is_some_and(TemplateCheck::is_winning)
            && self.strategy_wins == Some(true)
    }

    /// The disabled edges cost Even part of the winning set, or push some
    /// winning Even vertex out of it.
    pub fn critical(&self, winning: &VertexSet) -> bool {
        if !self.forced_out.is_empty() {
            return true;
        }
        match &self.fresh_winning {
            Some(w) => !winning.is_subset(w),
            None => true,
        }
    }

    /// Short human-readable reason when winning is not preserved.
    pub fn diagnosis(&self) -> Option<String> {
        if let Some(c) = &self.conflict {
            return Some(format!("conflict: {c}"));
        }
        if let Some(l) = self
            .lasso_check
            .as_ref()
            .and_then(|c| c.counterexample.as_ref())
        {
            return Some(format!("not winning: lasso {l} complies but loses"));
        }
        match self.strategy_wins {
            Some(true) => None,
            Some(false) => {
                Some("not winning: some winning vertex can no longer enforce the objective".into())
            }
            None => Some("not verified: strategy check exceeded its budget".into()),
        }
    }
}

/// Support of the limit of the mixed strategy: permitted non-co-live edges,
/// or the permitted co-live ones where nothing else is left.
pub fn limit_support(game: &StochasticGame, template: &StrategyTemplate) -> Vec<Vec<VertexId>> {
    game.vertices()
        .map(|v| {
            if game.owner(v) != Owner::Even {
                return Vec::new();
            }
            let permitted: Vec<VertexId> = game
                .successors(v)
                .iter()
                .copied()
                .filter(|&w| !template.prohibited.contains(&Edge { src: v, dst: w }))
                .collect();
            let preferred: Vec<VertexId> = permitted
                .iter()
                .copied()
                .filter(|&w| !template.colive.contains(&Edge { src: v, dst: w }))
                .collect();
            match (preferred.is_empty(), permitted.is_empty()) {
                (false, _) => preferred,
                (true, false) => permitted,
                (true, true) => game.successors(v).to_vec(),
            }
        })
        .collect()
}

fn forced_out(game: &StochasticGame, winning: &VertexSet, disabled: &[Edge]) -> Vec<VertexId> {
    winning
        .iter()
        .filter(|&v| game.owner(v) == Owner::Even)
        .filter(|&v| {
            game.successors(v)
                .iter()
                .all(|&w| !winning.contains(w) || disabled.contains(&Edge { src: v, dst: w }))
        })
        .collect()
}

/// Merges the fault template `(disabled, ∅, ∅)` into `template`, re-extracts
/// strategies and checks that the result still wins from `winning`.
pub fn adapt(
    game: &StochasticGame,
    objective: &Objective,
    template: &StrategyTemplate,
    winning: &VertexSet,
    disabled: &[Edge],
    config: AdaptConfig,
) -> Result<AdaptReport, AdaptError> {
    let fault = StrategyTemplate::prohibited_only(disabled.iter().copied());
    fault.validate(game)?;
    let bound = config.bound.unwrap_or(2 * game.num_vertices());

    let started = Instant::now();
    let merged = template.combine_in(&fault, game, winning);
    let extracted = merged.as_ref().ok().map(|t| {
        let pure = extract_pure_partial(game, t, winning);
        let mixed = FloatMixed::new(game, t, 0.5, 2.0);
        (pure.dead_ends().to_vec(), mixed.is_ok())
    });
    let adapt_time = started.elapsed();

    let started = Instant::now();
    let fresh = game
        .without_edges(disabled)
        .map(|faulted| synthesize(&faulted, objective).map(|r| r.winning_set));
    let fresh_time = started.elapsed();
    let (fresh_winning, fresh_error) = match fresh {
        Ok(res) => (Some(res?), None),
        Err(e) => (None, Some(e)),
    };

    let mut report = AdaptReport {
        disabled: disabled.to_vec(),
        combined: None,
        conflict: None,
        lasso_check: None,
        strategy_wins: None,
        pure_dead_ends: Vec::new(),
        fresh_winning,
        fresh_error,
        forced_out: forced_out(game, winning, disabled),
        adapt_time,
        fresh_time,
    };
    match merged {
        Err(c) => report.conflict = Some(c),
        Ok(t) => {
            report.lasso_check = Some(check_template_winning(
                game,
                &t,
                winning,
                objective,
                bound,
                config.lassos,
            )?);
            report.strategy_wins = match randomized_strategy_winning_set(
                game,
                &limit_support(game, &t),
                objective,
                config.oracle,
            ) {
                Ok(w) => Some(winning.is_subset(&w)),
                Err(_) => None,
            };
            if let Some((dead, _)) = extracted {
                report.pure_dead_ends = dead;
            }
            report.combined = Some(t);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g_ex, t1, U, V, W};
    use crate::synthesis::reachability_template;

    #[test]
    fn disabling_the_only_way_to_w_is_reported() {
        let g = g_ex();
        let reach = Objective::Reachability(g.set_of([W]));
        let r = adapt(
            &g,
            &reach,
            &t1(),
            &g.full_set(),
            &[Edge::new(V, W)],
            AdaptConfig::default(),
        )
        .unwrap();
        assert!(!r.preserved());
        assert!(r.critical(&g.full_set()));
        assert!(r.diagnosis().is_some());
    }

    #[test]
    fn disabling_a_spare_edge_preserves_winning() {
        // u -> {v, w}: the fresh template for reaching w needs no co-live edge at u.
        let g = StochasticGame::new(vec![Owner::Even; 3], vec![vec![V, W], vec![U, W], vec![W]])
            .unwrap();
        let reach = Objective::Reachability(g.set_of([W]));
        let res = reachability_template(&g, &g.set_of([W]));
        let r = adapt(
            &g,
            &reach,
            &res.template,
            &res.winning_set,
            &[Edge::new(U, W)],
            AdaptConfig::default(),
        )
        .unwrap();
        assert!(r.preserved(), "{:?}", r.diagnosis());
        assert!(!r.critical(&res.winning_set));
    }

    #[test]
    fn losing_the_last_edge_inside_the_winning_set_is_critical() {
        // 0 is a target vertex whose only other edge leads to the losing sink 2.
        let g = StochasticGame::new(
            vec![Owner::Even, Owner::Even, Owner::Odd],
            vec![
                vec![VertexId(1), VertexId(2)],
                vec![VertexId(1)],
                vec![VertexId(2)],
            ],
        )
        .unwrap();
        let target = g.set_of([VertexId(0), VertexId(1)]);
        let res = reachability_template(&g, &target);
        assert_eq!(res.winning_set, target);
        let r = adapt(
            &g,
            &Objective::Reachability(target.clone()),
            &res.template,
            &res.winning_set,
            &[Edge::new(0, 1)],
            AdaptConfig::default(),
        )
        .unwrap();
        assert_eq!(r.forced_out, vec![VertexId(0)]);
        assert!(target.is_subset(r.fresh_winning.as_ref().unwrap()));
        assert!(r.critical(&res.winning_set));
        assert!(!r.preserved());
    }

    #[test]
    fn limit_support_prefers_non_colive() {
        let g = g_ex();
        let s = limit_support(&g, &t1());
        assert_eq!(s[U.0], vec![V]);
        assert_eq!(s[V.0], vec![W]);
    }

    #[test]
    fn non_even_edges_are_rejected() {
        let g = g_ex();
        let reach = Objective::Reachability(g.set_of([W]));
        let err = adapt(
            &g,
            &reach,
            &t1(),
            &g.full_set(),
            &[Edge::new(U, W)],
            AdaptConfig::default(),
        )
        .unwrap_err();
        assert_eq!(
            err,
            AdaptError::Template(TemplateError::NotAnEdge(Edge::new(U, W)))
        );
    }
}
