//! Strategy templates `(P, L, C)`: prohibited edges, live-groups and co-live edges.

use std::collections::BTreeSet;

use crate::error::{BudgetError, Conflict, LassoError, TemplateError};
use crate::game::{Edge, Owner, StochasticGame, VertexId, VertexSet};
use crate::objective::Lasso;
use crate::verify::lassos::{for_each_lasso, LassoBudget};

pub type LiveGroup = BTreeSet<Edge>;

/// A strategy template over the Even edges of a game.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct StrategyTemplate {
    pub prohibited: BTreeSet<Edge>,
    pub live_groups: BTreeSet<LiveGroup>,
    pub colive: BTreeSet<Edge>,
}

/// Non-fatal findings of [`StrategyTemplate::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TemplateLint {
    /// Edges that are both prohibited and co-live; prohibition wins.
    pub prohibited_and_colive: Vec<Edge>,
}

impl TemplateLint {
    pub fn is_clean(&self) -> bool {
        self.prohibited_and_colive.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TemplateSize {
    /// `|P| + Σ|L| + |C|`.
    pub overall: usize,
    pub prohibited: usize,
    pub live: usize,
    pub colive: usize,
}

impl TemplateSize {
    pub fn element_wise(&self) -> (usize, usize, usize) {
        (self.prohibited, self.live, self.colive)
    }

    /// Component-wise `<=`.
    pub fn no_element_wise_larger(&self, other: &TemplateSize) -> bool {
        self.prohibited <= other.prohibited
            && self.live <= other.live
            && self.colive <= other.colive
    }
}

/// Outcome of comparing two lasso languages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Permissiveness {
    Equal,
    /// The first template allows strictly fewer lassos.
    FirstLess,
    /// The second template allows strictly fewer lassos.
    SecondLess,
    Incomparable,
}

/// Result of [`compare_permissiveness_bounded`]; the verdict only covers the
/// enumerated lassos.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedComparison {
    pub verdict: Permissiveness,
    pub bound: usize,
    pub lassos_checked: usize,
    /// A lasso allowed by the first template only.
    pub only_first: Option<Lasso>,
    /// A lasso allowed by the second template only.
    pub only_second: Option<Lasso>,
}

impl StrategyTemplate {
    pub fn new(
        prohibited: impl IntoIterator<Item = Edge>,
        live_groups: impl IntoIterator<Item = LiveGroup>,
        colive: impl IntoIterator<Item = Edge>,
    ) -> Self {
        StrategyTemplate {
            prohibited: prohibited.into_iter().collect(),
            live_groups: live_groups.into_iter().collect(),
            colive: colive.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        StrategyTemplate::default()
    }

    pub fn prohibited_only(edges: impl IntoIterator<Item = Edge>) -> Self {
        StrategyTemplate::new(edges, [], [])
    }

    pub fn colive_only(edges: impl IntoIterator<Item = Edge>) -> Self {
        StrategyTemplate::new([], [], edges)
    }

    pub fn is_empty(&self) -> bool {
        self.prohibited.is_empty() && self.live_groups.is_empty() && self.colive.is_empty()
    }

    /// Every edge mentioned by the template.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.prohibited
            .iter()
            .chain(self.live_groups.iter().flatten())
            .chain(self.colive.iter())
    }

    pub fn mentions(&self, e: &Edge) -> bool {
        self.prohibited.contains(e)
            || self.colive.contains(e)
            || self.live_groups.iter().any(|l| l.contains(e))
    }

    pub fn validate(&self, game: &StochasticGame) -> Result<TemplateLint, TemplateError> {
        for &e in self.edges() {
            if e.src.0 >= game.num_vertices() || !game.has_edge(e.src, e.dst) {
                return Err(TemplateError::NotAnEdge(e));
            }
            if game.owner(e.src) != Owner::Even {
                return Err(TemplateError::NotEvenEdge(e));
            }
        }
        Ok(TemplateLint {
            prohibited_and_colive: self
                .prohibited
                .intersection(&self.colive)
                .copied()
                .collect(),
        })
    }

    pub fn size(&self) -> TemplateSize {
        let prohibited = self.prohibited.len();
        let live = self.live_groups.iter().map(BTreeSet::len).sum();
        let colive = self.colive.len();
        TemplateSize {
            overall: prohibited + live + colive,
            prohibited,
            live,
            colive,
        }
    }

    /// `ψ_T` on the word of `lasso`, without checking the lasso against a game.
    pub fn satisfied_by(&self, lasso: &Lasso) -> bool {
        // ψ_P: no prohibited edge anywhere.
        if lasso
            .prefix_edges()
            .chain(lasso.cycle_edges())
            .any(|e| self.prohibited.contains(&e))
        {
            return false;
        }
        let cycle_edges: BTreeSet<Edge> = lasso.cycle_edges().collect();
        // ψ_C: co-live edges may only occur before the cycle.
        if cycle_edges.iter().any(|e| self.colive.contains(e)) {
            return false;
        }
        // ψ_L: a recurring source forces a recurring group edge.
        self.live_groups.iter().all(|group| {
            let triggered = group.iter().any(|e| lasso.cycle.contains(&e.src));
            !triggered || group.iter().any(|e| cycle_edges.contains(e))
        })
    }

    /// Component-wise union. Fails if some live-group can no longer recur.
    pub fn combine(&self, other: &StrategyTemplate) -> Result<StrategyTemplate, Conflict> {
        let merged = StrategyTemplate {
            prohibited: self.prohibited.union(&other.prohibited).copied().collect(),
            live_groups: self
                .live_groups
                .union(&other.live_groups)
                .cloned()
                .collect(),
            colive: self.colive.union(&other.colive).copied().collect(),
        };
        if let Some(group) = merged.live_groups.iter().find(|group| {
            group
                .iter()
                .all(|e| merged.prohibited.contains(e) || merged.colive.contains(e))
        }) {
            return Err(Conflict::BlockedLiveGroup {
                group: group.iter().copied().collect(),
            });
        }
        Ok(merged)
    }

    /// [`StrategyTemplate::combine`], additionally rejecting merges that leave an
    /// Even vertex of `winning` with every outgoing edge prohibited.
    pub fn combine_in(
        &self,
        other: &StrategyTemplate,
        game: &StochasticGame,
        winning: &VertexSet,
    ) -> Result<StrategyTemplate, Conflict> {
        let merged = self.combine(other)?;
        if let Some(vertex) = trapped_vertex(game, winning, &merged.prohibited) {
            return Err(Conflict::TrappedVertex { vertex });
        }
        Ok(merged)
    }
}

fn trapped_vertex(
    game: &StochasticGame,
    winning: &VertexSet,
    prohibited: &BTreeSet<Edge>,
) -> Option<VertexId> {
    winning
        .iter()
        .filter(|&v| game.owner(v) == Owner::Even)
        .find(|&v| {
            game.successors(v)
                .iter()
                .all(|&w| prohibited.contains(&Edge { src: v, dst: w }))
        })
}

/// Checks the lasso against `game`, then evaluates `ψ_T`.
pub fn lasso_satisfies_template(
    game: &StochasticGame,
    lasso: &Lasso,
    template: &StrategyTemplate,
) -> Result<bool, LassoError> {
    lasso.validate(game)?;
    Ok(template.satisfied_by(lasso))
}

/// Syntactic sufficient condition for `first` being no more permissive than
/// `second`: `P ⊇ P'`, `L ⊇ L'` and `C ⊇ C'`.
pub fn superset_implies_less_permissive(
    first: &StrategyTemplate,
    second: &StrategyTemplate,
) -> bool {
    first.prohibited.is_superset(&second.prohibited)
        && first.live_groups.is_superset(&second.live_groups)
        && first.colive.is_superset(&second.colive)
}

/// Compares the sets of lassos from `from` with `|prefix| + |cycle| <= bound`
/// that satisfy each template.
pub fn compare_permissiveness_bounded(
    game: &StochasticGame,
    first: &StrategyTemplate,
    second: &StrategyTemplate,
    from: &VertexSet,
    bound: usize,
    budget: LassoBudget,
) -> Result<BoundedComparison, BudgetError> {
    let mut only_first = None;
    let mut only_second = None;
    let mut checked = 0usize;
    for_each_lasso(
        game,
        from,
        bound,
        budget,
        |_| true,
        |lasso| {
            checked += 1;
            let a = first.satisfied_by(lasso);
            let b = second.satisfied_by(lasso);
            if a && !b && only_first.is_none() {
                only_first = Some(lasso.clone());
            }
            if b && !a && only_second.is_none() {
                only_second = Some(lasso.clone());
            }
        },
    )?;
    let verdict = match (&only_first, &only_second) {
        (None, None) => Permissiveness::Equal,
        (None, Some(_)) => Permissiveness::FirstLess,
        (Some(_), None) => Permissiveness::SecondLess,
        (Some(_), Some(_)) => Permissiveness::Incomparable,
    };
    Ok(BoundedComparison {
        verdict,
        bound,
        lassos_checked: checked,
        only_first,
        only_second,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g_ex, t1, t2, t3, U, V, W};

    fn group(edges: &[(usize, usize)]) -> LiveGroup {
        edges.iter().map(|&(a, b)| Edge::new(a, b)).collect()
    }

    #[test]
    fn colive_edges_allowed_in_prefix_only() {
        let g = g_ex();
        let ok = Lasso::new(vec![U, V], vec![W]);
        assert!(lasso_satisfies_template(&g, &ok, &t1()).unwrap());
        let bad = Lasso::new(vec![], vec![U, V]);
        assert!(!lasso_satisfies_template(&g, &bad, &t1()).unwrap());
        assert!(lasso_satisfies_template(&g, &bad, &StrategyTemplate::empty()).unwrap());
    }

    #[test]
    fn prohibited_edge_blocks_prefix_use() {
        let g = g_ex();
        let t = StrategyTemplate::prohibited_only([Edge::new(V, W)]);
        assert!(!t.satisfied_by(&Lasso::new(vec![U, V], vec![W])));
        assert!(t.satisfied_by(&Lasso::new(vec![], vec![U, V])));
        assert!(t.validate(&g).unwrap().is_clean());
    }

    #[test]
    fn live_group_needs_recurring_edge() {
        let t = StrategyTemplate::new([], [group(&[(1, 2)])], []);
        // v recurs but (v,w) never does.
        assert!(!t.satisfied_by(&Lasso::new(vec![], vec![U, V])));
        // v only in the prefix: not triggered.
        assert!(t.satisfied_by(&Lasso::new(vec![U, V], vec![W])));
    }

    #[test]
    fn combine_t2_t3_is_t1() {
        assert_eq!(t2().combine(&t3()).unwrap(), t1());
        assert_eq!(t1().combine(&StrategyTemplate::empty()).unwrap(), t1());
    }

    #[test]
    fn combine_reports_prohibited_live_group() {
        let a = StrategyTemplate::prohibited_only([Edge::new(U, V)]);
        let b = StrategyTemplate::new([], [group(&[(0, 1)])], []);
        assert_eq!(
            a.combine(&b),
            Err(Conflict::BlockedLiveGroup {
                group: vec![Edge::new(U, V)]
            })
        );
    }

    #[test]
    fn combine_in_reports_trapped_vertex() {
        let g = g_ex();
        let a = StrategyTemplate::prohibited_only([Edge::new(V, U)]);
        let b = StrategyTemplate::prohibited_only([Edge::new(V, W)]);
        assert_eq!(
            a.combine_in(&b, &g, &g.full_set()),
            Err(Conflict::TrappedVertex { vertex: V })
        );
        assert!(a.combine_in(&b, &g, &g.set_of([W])).is_ok());
    }

    #[test]
    fn superset_condition() {
        assert!(superset_implies_less_permissive(&t1(), &t2()));
        assert!(!superset_implies_less_permissive(&t2(), &t3()));
        assert!(superset_implies_less_permissive(&t3(), &t3()));
    }

    #[test]
    fn sizes() {
        assert_eq!(t1().size().overall, 2);
        assert_eq!(t1().size().element_wise(), (0, 0, 2));
        assert_eq!(StrategyTemplate::empty().size().overall, 0);
        let t = StrategyTemplate::new(
            [Edge::new(0, 1)],
            [group(&[(1, 0), (1, 2)])],
            [Edge::new(2, 2)],
        );
        assert_eq!(t.size().overall, 4);
        assert_eq!(t.size().element_wise(), (1, 2, 1));
        assert!(t2().size().no_element_wise_larger(&t1().size()));
    }

    #[test]
    fn bounded_comparison_on_running_example() {
        let g = g_ex();
        let all = g.full_set();
        let budget = LassoBudget::default();
        let cmp = compare_permissiveness_bounded(&g, &t1(), &t2(), &all, 6, budget).unwrap();
        assert_eq!(cmp.verdict, Permissiveness::Equal);
        let same = compare_permissiveness_bounded(&g, &t3(), &t3(), &all, 6, budget).unwrap();
        assert_eq!(same.verdict, Permissiveness::Equal);
        let looser =
            compare_permissiveness_bounded(&g, &StrategyTemplate::empty(), &t1(), &all, 6, budget)
                .unwrap();
        assert_eq!(looser.verdict, Permissiveness::SecondLess);
        assert_eq!(looser.only_first, Some(Lasso::new(vec![], vec![U, V])));
    }

    #[test]
    fn lint_reports_prohibited_colive_overlap() {
        let g = g_ex();
        let t = StrategyTemplate::new([Edge::new(U, V)], [], [Edge::new(U, V)]);
        assert_eq!(
            t.validate(&g).unwrap().prohibited_and_colive,
            vec![Edge::new(U, V)]
        );
        let bad = StrategyTemplate::colive_only([Edge::new(U, W)]);
        assert_eq!(
            bad.validate(&g),
            Err(TemplateError::NotAnEdge(Edge::new(U, W)))
        );
    }
}
