//! Gadget reduction from stochastic to deterministic parity games.

use crate::game::{Owner, PriorityFunction, StochasticGame, VertexId};

/// The three layers replacing one Random vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    /// The Random vertex; its id is reused for the Odd entry vertex `v'`.
    pub entry: VertexId,
    /// `v'_i` for `i = 0..=⌈p/2⌉`, all owned by Even.
    pub children: Vec<VertexId>,
    /// `(v'_{⌈j/2⌉,j}, j)` for `j = 0..=p`.
    pub grandchildren: Vec<(VertexId, u32)>,
}

impl Gadget {
    /// Vertices the gadget occupies, including the entry vertex.
    pub fn size(&self) -> usize {
        1 + self.children.len() + self.grandchildren.len()
    }
}

/// Output of [`reduce`]. Vertices `0..n` keep the ids of the input game;
/// gadget-internal vertices are appended after them.
#[derive(Clone, Debug)]
pub struct ReducedGame {
    pub game: StochasticGame,
    pub priorities: PriorityFunction,
    /// Reduced vertex -> input vertex, `None` for gadget-internal vertices.
    pub origin: Vec<Option<VertexId>>,
    pub gadgets: Vec<Gadget>,
}

impl ReducedGame {
    pub fn original_count(&self) -> usize {
        self.origin.iter().filter(|o| o.is_some()).count()
    }

    /// Image of an input vertex.
    pub fn image(&self, v: VertexId) -> VertexId {
        v
    }

    pub fn is_gadget_internal(&self, v: VertexId) -> bool {
        self.origin[v.0].is_none()
    }
}

/// Replaces every Random vertex by the three-layer gadget; other vertices and
/// their edges are copied unchanged.
pub fn reduce(game: &StochasticGame, priorities: &PriorityFunction) -> ReducedGame {
    let n = game.num_vertices();
    let mut owners: Vec<Owner> = game.owners().to_vec();
    let mut successors: Vec<Vec<VertexId>> = game
        .vertices()
        .map(|v| game.successors(v).to_vec())
        .collect();
    let mut prio: Vec<u32> = priorities.as_slice().to_vec();
    let mut origin: Vec<Option<VertexId>> = game.vertices().map(Some).collect();
    let mut gadgets = Vec::new();

    let mut fresh =
        |owners: &mut Vec<Owner>, prio: &mut Vec<u32>, succ: &mut Vec<Vec<VertexId>>, owner, p| {
            owners.push(owner);
            prio.push(p);
            succ.push(Vec::new());
            origin.push(None);
            VertexId(owners.len() - 1)
        };

    for v in game.vertices().filter(|&v| game.owner(v) == Owner::Random) {
        let p = priorities.get(v);
        let original_succ = game.successors(v).to_vec();
        owners[v.0] = Owner::Odd;
        let children: Vec<VertexId> = (0..=p.div_ceil(2))
            .map(|_| fresh(&mut owners, &mut prio, &mut successors, Owner::Even, p))
            .collect();
        successors[v.0] = children.clone();
        let mut grandchildren = Vec::new();
        for j in 0..=p {
            let owner = if j % 2 == 0 { Owner::Odd } else { Owner::Even };
            let g = fresh(&mut owners, &mut prio, &mut successors, owner, j);
            successors[g.0] = original_succ.clone();
            successors[children[j.div_ceil(2) as usize].0].push(g);
            grandchildren.push((g, j));
        }
        gadgets.push(Gadget {
            entry: v,
            children,
            grandchildren,
        });
    }
    debug_assert!(owners.len() >= n);
    let game =
        StochasticGame::new(owners, successors).expect("gadget reduction yields a valid game");
    ReducedGame {
        game,
        priorities: PriorityFunction::new(prio),
        origin,
        gadgets,
    }
}
