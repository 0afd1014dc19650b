//! Winning objectives and their evaluation on ultimately periodic paths.

use crate::error::LassoError;
use crate::game::{Edge, PriorityFunction, StochasticGame, VertexId, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    /// Always stay in the set.
    Safety(VertexSet),
    /// Eventually visit the set.
    Reachability(VertexSet),
    /// Visit the set infinitely often.
    Buchi(VertexSet),
    /// Eventually stay in the set forever.
    CoBuchi(VertexSet),
    /// Minimum priority seen infinitely often is even.
    Parity(PriorityFunction),
}

impl Objective {
    pub fn kind(&self) -> ObjectiveKind {
        match self {
            Objective::Safety(_) => ObjectiveKind::Safety,
            Objective::Reachability(_) => ObjectiveKind::Reachability,
            Objective::Buchi(_) => ObjectiveKind::Buchi,
            Objective::CoBuchi(_) => ObjectiveKind::CoBuchi,
            Objective::Parity(_) => ObjectiveKind::Parity,
        }
    }

    /// Checks that the embedded set or priority function fits `game`.
    pub fn fits(&self, game: &StochasticGame) -> bool {
        match self {
            Objective::Safety(x)
            | Objective::Reachability(x)
            | Objective::Buchi(x)
            | Objective::CoBuchi(x) => x.capacity() == game.num_vertices(),
            Objective::Parity(p) => p.len() == game.num_vertices(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ObjectiveKind {
    Safety,
    Reachability,
    Buchi,
    CoBuchi,
    Parity,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 5] = [
        ObjectiveKind::Safety,
        ObjectiveKind::Reachability,
        ObjectiveKind::Buchi,
        ObjectiveKind::CoBuchi,
        ObjectiveKind::Parity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ObjectiveKind::Safety => "safety",
            ObjectiveKind::Reachability => "reach",
            ObjectiveKind::Buchi => "buchi",
            ObjectiveKind::CoBuchi => "cobuchi",
            ObjectiveKind::Parity => "parity",
        }
    }

    pub fn parse(s: &str) -> Option<ObjectiveKind> {
        ObjectiveKind::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Builds the objective from a target set (ignored for parity) and priorities.
    pub fn with(self, target: VertexSet, priorities: &PriorityFunction) -> Objective {
        match self {
            ObjectiveKind::Safety => Objective::Safety(target),
            ObjectiveKind::Reachability => Objective::Reachability(target),
            ObjectiveKind::Buchi => Objective::Buchi(target),
            ObjectiveKind::CoBuchi => Objective::CoBuchi(target),
            ObjectiveKind::Parity => Objective::Parity(priorities.clone()),
        }
    }
}

/// The infinite path `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lasso {
    pub prefix: Vec<VertexId>,
    pub cycle: Vec<VertexId>,
}

impl std::fmt::Display for Lasso {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let word = |vs: &[VertexId]| {
            vs.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "[{}]({})^w", word(&self.prefix), word(&self.cycle))
    }
}

impl Lasso {
    pub fn new(prefix: Vec<VertexId>, cycle: Vec<VertexId>) -> Self {
        Lasso { prefix, cycle }
    }

    /// Convenience constructor from raw indices.
    pub fn from_indices(prefix: &[usize], cycle: &[usize]) -> Self {
        Lasso {
            prefix: prefix.iter().map(|&v| VertexId(v)).collect(),
            cycle: cycle.iter().map(|&v| VertexId(v)).collect(),
        }
    }

    /// First vertex of the infinite word.
    pub fn start(&self) -> VertexId {
        self.prefix.first().copied().unwrap_or(self.cycle[0])
    }

    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    /// Transitions taken only finitely often: inside the prefix and prefix -> cycle head.
    pub fn prefix_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let entry = self.prefix.last().map(|&last| Edge {
            src: last,
            dst: self.cycle[0],
        });
        self.prefix
            .windows(2)
            .map(|w| Edge {
                src: w[0],
                dst: w[1],
            })
            .chain(entry)
    }

    /// Transitions taken infinitely often, including the wrap-around.
    pub fn cycle_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.cycle.len();
        (0..n).map(move |i| Edge {
            src: self.cycle[i],
            dst: self.cycle[(i + 1) % n],
        })
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.prefix.iter().chain(self.cycle.iter()).copied()
    }

    pub fn validate(&self, game: &StochasticGame) -> Result<(), LassoError> {
        if self.cycle.is_empty() {
            return Err(LassoError::EmptyCycle);
        }
        if let Some(v) = self.vertices().find(|v| v.0 >= game.num_vertices()) {
            return Err(LassoError::VertexOutOfRange(v));
        }
        match self
            .prefix_edges()
            .chain(self.cycle_edges())
            .find(|e| !game.has_edge(e.src, e.dst))
        {
            Some(e) => Err(LassoError::NotAnEdge(e)),
            None => Ok(()),
        }
    }

    /// Word-level evaluation without validating against a game.
    pub fn satisfies_unchecked(&self, objective: &Objective) -> bool {
        match objective {
            Objective::Safety(x) => self.vertices().all(|v| x.contains(v)),
            Objective::Reachability(x) => self.vertices().any(|v| x.contains(v)),
            Objective::Buchi(x) => self.cycle.iter().any(|&v| x.contains(v)),
            Objective::CoBuchi(x) => self.cycle.iter().all(|&v| x.contains(v)),
            Objective::Parity(p) => {
                let min = self
                    .cycle
                    .iter()
                    .map(|&v| p.get(v))
                    .min()
                    .expect("non-empty cycle");
                min % 2 == 0
            }
        }
    }
}

/// Truth of `objective` on the infinite word of `lasso`.
pub fn lasso_satisfies(
    game: &StochasticGame,
    lasso: &Lasso,
    objective: &Objective,
) -> Result<bool, LassoError> {
    lasso.validate(game)?;
    Ok(lasso.satisfies_unchecked(objective))
}
