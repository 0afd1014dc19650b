//! Stochastic game graphs, vertex sets and priority functions.

use std::collections::HashSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::GameError;

/// Dense index of a vertex inside its game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for VertexId {
    fn from(v: usize) -> Self {
        VertexId(v)
    }
}

/// Which player moves the token at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Owner {
    Even,
    Odd,
    Random,
}

impl Owner {
    /// Numeric code used by the game file format.
    pub fn code(self) -> u8 {
        match self {
            Owner::Even => 0,
            Owner::Odd => 1,
            Owner::Random => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Owner> {
        match code {
            0 => Some(Owner::Even),
            1 => Some(Owner::Odd),
            2 => Some(Owner::Random),
            _ => None,
        }
    }
}

/// A directed edge `(src, dst)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
}

impl Edge {
    pub fn new(src: impl Into<VertexId>, dst: impl Into<VertexId>) -> Self {
        Edge {
            src: src.into(),
            dst: dst.into(),
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.src, self.dst)
    }
}

/// A set of vertices backed by a bitset whose capacity is the vertex count of the game.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn empty(capacity: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(capacity),
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(capacity);
        bits.insert_range(..);
        VertexSet { bits }
    }

    pub fn from_iter<I>(capacity: usize, vertices: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<VertexId>,
    {
        let mut set = VertexSet::empty(capacity);
        for v in vertices {
            set.insert(v.into());
        }
        set
    }

    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.bits.contains(v.0)
    }

    #[inline]
    pub fn insert(&mut self, v: VertexId) -> bool {
        let fresh = !self.bits.contains(v.0);
        self.bits.insert(v.0);
        fresh
    }

    #[inline]
    pub fn remove(&mut self, v: VertexId) {
        self.bits.set(v.0, false);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.bits.ones().map(VertexId)
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    /// `V \ self`, for the capacity of this set.
    pub fn complement(&self) -> VertexSet {
        let mut out = self.clone();
        out.bits.toggle_range(..);
        out
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.0)).finish()
    }
}

/// A finite turn-based game graph with Even, Odd and uniformly random vertices.
///
/// Every vertex has at least one successor; successor lists are duplicate free
/// and keep their input order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StochasticGame {
    owners: Vec<Owner>,
    successors: Vec<Vec<VertexId>>,
    predecessors: Vec<Vec<VertexId>>,
    edges: HashSet<Edge>,
}

impl StochasticGame {
    /// Builds a game, rejecting dead ends, dangling endpoints and duplicate successors.
    pub fn new(owners: Vec<Owner>, successors: Vec<Vec<VertexId>>) -> Result<Self, GameError> {
        let n = owners.len();
        if successors.len() != n {
            return Err(GameError::ShapeMismatch {
                owners: n,
                successor_lists: successors.len(),
            });
        }
        for (v, succ) in successors.iter().enumerate() {
            if succ.is_empty() {
                return Err(GameError::DeadEnd(VertexId(v)));
            }
        }
        Self::build(owners, successors)
    }

    /// Like [`StochasticGame::new`] but tolerates vertices without successors.
    pub(crate) fn new_allow_dead_ends(
        owners: Vec<Owner>,
        successors: Vec<Vec<VertexId>>,
    ) -> Result<Self, GameError> {
        Self::build(owners, successors)
    }

    fn build(owners: Vec<Owner>, successors: Vec<Vec<VertexId>>) -> Result<Self, GameError> {
        let n = owners.len();
        let mut edges = HashSet::new();
        let mut predecessors = vec![Vec::new(); n];
        for (v, succ) in successors.iter().enumerate() {
            for &w in succ {
                if w.0 >= n {
                    return Err(GameError::DanglingSuccessor {
                        src: VertexId(v),
                        dst: w,
                    });
                }
                if !edges.insert(Edge::new(v, w)) {
                    return Err(GameError::DuplicateSuccessor {
                        src: VertexId(v),
                        dst: w,
                    });
                }
                predecessors[w.0].push(VertexId(v));
            }
        }
        Ok(StochasticGame {
            owners,
            successors,
            predecessors,
            edges,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.owners.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> {
        (0..self.owners.len()).map(VertexId)
    }

    pub fn owner(&self, v: VertexId) -> Owner {
        self.owners[v.0]
    }

    pub fn owners(&self) -> &[Owner] {
        &self.owners
    }

    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.successors[v.0]
    }

    pub fn predecessors(&self, v: VertexId) -> &[VertexId] {
        &self.predecessors[v.0]
    }

    #[inline]
    pub fn has_edge(&self, src: VertexId, dst: VertexId) -> bool {
        self.edges.contains(&Edge { src, dst })
    }

    /// All edges in vertex order, then successor-list order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices().flat_map(move |v| {
            self.successors(v)
                .iter()
                .map(move |&w| Edge { src: v, dst: w })
        })
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.num_vertices())
    }

    pub fn full_set(&self) -> VertexSet {
        VertexSet::full(self.num_vertices())
    }

    pub fn set_of<I>(&self, vertices: I) -> VertexSet
    where
        I: IntoIterator,
        I::Item: Into<VertexId>,
    {
        VertexSet::from_iter(self.num_vertices(), vertices)
    }

    /// Vertices owned by `owner`.
    pub fn owned_by(&self, owner: Owner) -> VertexSet {
        self.set_of(self.vertices().filter(|&v| self.owner(v) == owner))
    }

    pub fn is_deterministic(&self) -> bool {
        !self.owners.contains(&Owner::Random)
    }

    /// `Edges□(X, Y)`: Even edges from `from` into `to`.
    pub fn even_edges(&self, from: &VertexSet, to: &VertexSet) -> std::collections::BTreeSet<Edge> {
        from.iter()
            .filter(|&u| self.owner(u) == Owner::Even)
            .flat_map(|u| {
                self.successors(u)
                    .iter()
                    .filter(|w| to.contains(**w))
                    .map(move |&w| Edge { src: u, dst: w })
            })
            .collect()
    }

    /// Removes `removed` and every incident edge; see [`Restriction`].
    pub fn restrict(&self, removed: &VertexSet) -> Restriction {
        let n = self.num_vertices();
        let mut from_original = vec![None; n];
        let mut to_original = Vec::with_capacity(n);
        for v in self.vertices().filter(|&v| !removed.contains(v)) {
            from_original[v.0] = Some(VertexId(to_original.len()));
            to_original.push(v);
        }
        let owners = to_original.iter().map(|&v| self.owner(v)).collect();
        let successors: Vec<Vec<VertexId>> = to_original
            .iter()
            .map(|&v| {
                self.successors(v)
                    .iter()
                    .filter_map(|w| from_original[w.0])
                    .collect()
            })
            .collect();
        let dead_ends = successors
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_empty())
            .map(|(i, _)| to_original[i])
            .collect();
        let game = StochasticGame::new_allow_dead_ends(owners, successors)
            .expect("restriction of a valid game is well formed");
        Restriction {
            game,
            to_original,
            from_original,
            dead_ends,
        }
    }

    /// A copy of this game without the given edges. Vertices left without
    /// successors are reported as an error.
    pub fn without_edges<'a, I>(&self, removed: I) -> Result<StochasticGame, GameError>
    where
        I: IntoIterator<Item = &'a Edge>,
    {
        let removed: HashSet<Edge> = removed.into_iter().copied().collect();
        let successors = self
            .vertices()
            .map(|v| {
                self.successors(v)
                    .iter()
                    .copied()
                    .filter(|&w| !removed.contains(&Edge { src: v, dst: w }))
                    .collect()
            })
            .collect();
        StochasticGame::new(self.owners.clone(), successors)
    }
}

/// Result of [`StochasticGame::restrict`].
#[derive(Clone, Debug)]
pub struct Restriction {
    /// Subgame on the surviving vertices, renumbered densely.
    pub game: StochasticGame,
    /// Subgame vertex -> original vertex.
    pub to_original: Vec<VertexId>,
    /// Original vertex -> subgame vertex, `None` for removed vertices.
    pub from_original: Vec<Option<VertexId>>,
    /// Surviving vertices (original ids) that lost all successors.
    pub dead_ends: Vec<VertexId>,
}

impl Restriction {
    pub fn has_dead_ends(&self) -> bool {
        !self.dead_ends.is_empty()
    }

    /// Maps a subgame vertex set back to original ids.
    pub fn lift(&self, set: &VertexSet, original_capacity: usize) -> VertexSet {
        VertexSet::from_iter(original_capacity, set.iter().map(|v| self.to_original[v.0]))
    }
}

/// Priority assignment `p : V -> {0, ..., d}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PriorityFunction {
    priorities: Vec<u32>,
    max: u32,
}

impl PriorityFunction {
    pub fn new(priorities: Vec<u32>) -> Self {
        let max = priorities.iter().copied().max().unwrap_or(0);
        PriorityFunction { priorities, max }
    }

    /// Constant priority for `n` vertices.
    pub fn constant(n: usize, priority: u32) -> Self {
        PriorityFunction::new(vec![priority; n])
    }

    pub fn get(&self, v: VertexId) -> u32 {
        self.priorities[v.0]
    }

    pub fn max_priority(&self) -> u32 {
        self.max
    }

    pub fn len(&self) -> usize {
        self.priorities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.priorities.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.priorities
    }

    pub fn check_total(&self, game: &StochasticGame) -> Result<(), GameError> {
        if self.priorities.len() != game.num_vertices() {
            return Err(GameError::PriorityArity {
                expected: game.num_vertices(),
                found: self.priorities.len(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g_ex, U, V, W};

    #[test]
    fn construction_rejects_dead_end() {
        let err = StochasticGame::new(vec![Owner::Even], vec![vec![]]).unwrap_err();
        assert_eq!(err, GameError::DeadEnd(VertexId(0)));
    }

    #[test]
    fn construction_rejects_duplicate_and_dangling() {
        let dup = StochasticGame::new(vec![Owner::Even], vec![vec![VertexId(0), VertexId(0)]]);
        assert!(matches!(dup, Err(GameError::DuplicateSuccessor { .. })));
        let dangling = StochasticGame::new(vec![Owner::Even], vec![vec![VertexId(3)]]);
        assert!(matches!(dangling, Err(GameError::DanglingSuccessor { .. })));
    }

    #[test]
    fn restrict_nothing_is_identity() {
        let g = g_ex();
        let r = g.restrict(&g.empty_set());
        assert_eq!(r.game, g);
        assert!(!r.has_dead_ends());
    }

    #[test]
    fn restrict_w_keeps_two_cycle() {
        let g = g_ex();
        let r = g.restrict(&g.set_of([W]));
        assert_eq!(r.to_original, vec![U, V]);
        let edges: Vec<_> = r.game.edges().collect();
        assert_eq!(edges, vec![Edge::new(0, 1), Edge::new(1, 0)]);
        assert!(!r.has_dead_ends());
    }

    #[test]
    fn restrict_v_flags_dead_end_at_u() {
        let g = g_ex();
        let r = g.restrict(&g.set_of([V]));
        assert_eq!(r.to_original, vec![U, W]);
        assert_eq!(r.dead_ends, vec![U]);
    }

    #[test]
    fn even_edges_filters_owner_and_target() {
        let g = g_ex();
        let e = g.even_edges(&g.set_of([U, V]), &g.set_of([W]));
        assert_eq!(e.into_iter().collect::<Vec<_>>(), vec![Edge::new(V, W)]);
    }

    #[test]
    fn vertex_set_complement_respects_capacity() {
        let s = VertexSet::from_iter(5, [1usize, 3]);
        assert_eq!(
            s.complement().to_vec(),
            vec![VertexId(0), VertexId(2), VertexId(4)]
        );
        assert_eq!(VertexSet::full(3).len(), 3);
    }
}
