//! Qualitative analysis of finite Markov chains induced by memoryless strategies.

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::game::{Owner, StochasticGame, VertexId, VertexSet};
use crate::objective::Objective;

/// One fixed successor per controlled vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemorylessProfile {
    pub choice: Vec<Option<VertexId>>,
}

impl MemorylessProfile {
    pub fn is_valid_for(&self, game: &StochasticGame) -> bool {
        self.choice.len() == game.num_vertices()
            && self
                .choice
                .iter()
                .enumerate()
                .all(|(v, c)| c.is_none_or(|w| game.has_edge(VertexId(v), w)))
    }
}

/// Support graph of a finite Markov chain. Only which transitions have
/// positive probability matters for almost-sure verdicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedChain {
    successors: Vec<Vec<VertexId>>,
}

impl InducedChain {
    pub fn new(successors: Vec<Vec<VertexId>>) -> Self {
        debug_assert!(successors.iter().all(|s| !s.is_empty()));
        InducedChain { successors }
    }

    /// Fixes the choices of both players; Random vertices keep all successors.
    pub fn from_profiles(
        game: &StochasticGame,
        even: &MemorylessProfile,
        odd: &MemorylessProfile,
    ) -> Self {
        let successors = game
            .vertices()
            .map(|v| match game.owner(v) {
                Owner::Even => vec![even.choice[v.0].expect("Even choice")],
                Owner::Odd => vec![odd.choice[v.0].expect("Odd choice")],
                Owner::Random => game.successors(v).to_vec(),
            })
            .collect();
        InducedChain { successors }
    }

    pub fn num_states(&self) -> usize {
        self.successors.len()
    }

    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.successors[v.0]
    }

    /// Row `v` of the transition matrix when branching is uniform.
    pub fn row(&self, v: VertexId) -> Vec<(VertexId, f64)> {
        let succ = &self.successors[v.0];
        let p = 1.0 / succ.len() as f64;
        succ.iter().map(|&w| (w, p)).collect()
    }

    fn graph(&self) -> DiGraph<(), ()> {
        let mut g = DiGraph::with_capacity(self.successors.len(), 0);
        for _ in 0..self.successors.len() {
            g.add_node(());
        }
        for (v, succ) in self.successors.iter().enumerate() {
            for w in succ {
                g.add_edge(NodeIndex::new(v), NodeIndex::new(w.0), ());
            }
        }
        g
    }

    /// Bottom strongly connected components.
    pub fn bottom_sccs(&self) -> Vec<VertexSet> {
        let n = self.num_states();
        let mut out = Vec::new();
        for scc in tarjan_scc(&self.graph()) {
            let set = VertexSet::from_iter(n, scc.iter().map(|i| i.index()));
            let closed = set
                .iter()
                .all(|v| self.successors[v.0].iter().all(|w| set.contains(*w)));
            if closed {
                out.push(set);
            }
        }
        out
    }

    /// States with a positive-probability path into `targets`.
    pub fn can_reach(&self, targets: &VertexSet) -> VertexSet {
        let n = self.num_states();
        let mut preds = vec![Vec::new(); n];
        for (v, succ) in self.successors.iter().enumerate() {
            for w in succ {
                preds[w.0].push(VertexId(v));
            }
        }
        let mut seen = targets.clone();
        let mut stack: Vec<VertexId> = targets.iter().collect();
        while let Some(v) = stack.pop() {
            for &u in &preds[v.0] {
                if seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen
    }

    /// Copy where every state of `x` is absorbing.
    fn absorbing(&self, x: &VertexSet) -> InducedChain {
        let successors = self
            .successors
            .iter()
            .enumerate()
            .map(|(v, s)| {
                if x.contains(VertexId(v)) {
                    vec![VertexId(v)]
                } else {
                    s.clone()
                }
            })
            .collect();
        InducedChain { successors }
    }

    /// States from which `objective` holds with probability one.
    pub fn almost_sure_states(&self, objective: &Objective) -> VertexSet {
        let n = self.num_states();
        let bad_union = |chain: &InducedChain, bad: &dyn Fn(&VertexSet) -> bool| {
            let mut acc = VertexSet::empty(n);
            for b in chain.bottom_sccs() {
                if bad(&b) {
                    acc.union_with(&b);
                }
            }
            chain.can_reach(&acc)
        };
        let losing = match objective {
            Objective::Safety(x) => self.can_reach(&x.complement()),
            Objective::Reachability(x) => {
                // Prob-1 reach: no BSCC avoiding X is reachable while avoiding X.
                let chain = self.absorbing(x);
                bad_union(&chain, &|b| b.is_disjoint(x))
            }
            Objective::Buchi(x) => bad_union(self, &|b| b.is_disjoint(x)),
            Objective::CoBuchi(x) => bad_union(self, &|b| !b.is_subset(x)),
            Objective::Parity(p) => bad_union(self, &|b| {
                b.iter().map(|v| p.get(v)).min().is_some_and(|m| m % 2 == 1)
            }),
        };
        losing.complement()
    }
}

/// Probability-one verdict for a single start state.
pub fn chain_satisfies_as(chain: &InducedChain, objective: &Objective, start: VertexId) -> bool {
    chain.almost_sure_states(objective).contains(start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g_r, R_V0, R_V1, R_W};
    use crate::game::PriorityFunction;

    fn chain(succ: &[&[usize]]) -> InducedChain {
        InducedChain::new(
            succ.iter()
                .map(|s| s.iter().map(|&v| VertexId(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn absorbing_target_is_reached() {
        let c = chain(&[&[0]]);
        assert!(chain_satisfies_as(
            &c,
            &Objective::Reachability(VertexSet::full(1)),
            VertexId(0)
        ));
    }

    #[test]
    fn g_r_chain_reaches_w() {
        let g = g_r();
        let even = MemorylessProfile {
            choice: vec![None, None, Some(R_W)],
        };
        let odd = MemorylessProfile {
            choice: vec![None, Some(R_V0), None],
        };
        assert!(even.is_valid_for(&g) && odd.is_valid_for(&g));
        let c = InducedChain::from_profiles(&g, &even, &odd);
        let reach = Objective::Reachability(g.set_of([R_W]));
        assert!(chain_satisfies_as(&c, &reach, R_V0));
        assert!(chain_satisfies_as(&c, &reach, R_V1));
        assert_eq!(c.bottom_sccs(), vec![g.set_of([R_W])]);
        // Safety inside {v0, v1} fails: the uniform branch escapes.
        assert!(!chain_satisfies_as(
            &c,
            &Objective::Safety(g.set_of([R_V0, R_V1])),
            R_V0
        ));
        let row = c.row(R_V0);
        assert!((row.iter().map(|(_, p)| p).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn buchi_fails_with_avoiding_bscc() {
        // 0 branches to two sinks 1 and 2; only 1 is accepting.
        let c = chain(&[&[1, 2], &[1], &[2]]);
        let x = VertexSet::from_iter(3, [1usize]);
        assert!(!chain_satisfies_as(
            &c,
            &Objective::Buchi(x.clone()),
            VertexId(0)
        ));
        assert!(chain_satisfies_as(&c, &Objective::Buchi(x), VertexId(1)));
    }

    #[test]
    fn reachability_through_transient_states() {
        // 0 -> {1, 2}, 1 -> 0, 2 absorbing: reaches 2 with probability one.
        let c = chain(&[&[1, 2], &[0], &[2]]);
        let x = VertexSet::from_iter(3, [2usize]);
        assert!(chain_satisfies_as(
            &c,
            &Objective::Reachability(x),
            VertexId(0)
        ));
        // Visiting 1 is only positive-probability.
        let y = VertexSet::from_iter(3, [1usize]);
        assert!(!chain_satisfies_as(
            &c,
            &Objective::Reachability(y),
            VertexId(0)
        ));
    }

    #[test]
    fn parity_and_cobuchi_on_bsccs() {
        let c = chain(&[&[1], &[0]]);
        let p = PriorityFunction::new(vec![1, 2]);
        assert!(!chain_satisfies_as(&c, &Objective::Parity(p), VertexId(0)));
        let q = PriorityFunction::new(vec![3, 2]);
        assert!(chain_satisfies_as(&c, &Objective::Parity(q), VertexId(0)));
        let x = VertexSet::from_iter(2, [0usize]);
        assert!(!chain_satisfies_as(&c, &Objective::CoBuchi(x), VertexId(1)));
        assert!(chain_satisfies_as(
            &c,
            &Objective::CoBuchi(VertexSet::full(2)),
            VertexId(1)
        ));
    }
}
