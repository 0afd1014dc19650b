//! One-step predecessor operators, attractors and the nested almost-sure
//! fixpoints, evaluated by plain Kleene iteration.
//!
//! Every operator works on a [`SubGame`]: a game together with the set of
//! vertices still in play. Vertices outside the active set and the edges
//! touching them are ignored, which is how `G \ X` is realised inside the
//! recursive solvers without copying the graph.

use crate::game::{Owner, StochasticGame, VertexId, VertexSet};

/// `G` restricted to `active`.
#[derive(Clone, Debug)]
pub struct SubGame<'a> {
    game: &'a StochasticGame,
    active: VertexSet,
}

impl<'a> SubGame<'a> {
    pub fn full(game: &'a StochasticGame) -> Self {
        SubGame {
            game,
            active: game.full_set(),
        }
    }

    pub fn new(game: &'a StochasticGame, active: VertexSet) -> Self {
        SubGame { game, active }
    }

    pub fn game(&self) -> &'a StochasticGame {
        self.game
    }

    pub fn active(&self) -> &VertexSet {
        &self.active
    }

    /// `self \ removed`.
    pub fn without(&self, removed: &VertexSet) -> SubGame<'a> {
        SubGame {
            game: self.game,
            active: self.active.difference(removed),
        }
    }

    pub fn empty_set(&self) -> VertexSet {
        self.game.empty_set()
    }

    fn successors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.game
            .successors(v)
            .iter()
            .copied()
            .filter(|w| self.active.contains(*w))
    }

    fn owned(&self, v: VertexId, owner: Owner) -> bool {
        self.game.owner(v) == owner
    }

    /// `Pre(X)`: vertices all of whose successors lie in `x`.
    pub fn pre(&self, x: &VertexSet) -> VertexSet {
        let mut out = self.empty_set();
        for u in self.active.iter() {
            let mut succ = self.successors(u).peekable();
            if succ.peek().is_some() && succ.all(|w| x.contains(w)) {
                out.insert(u);
            }
        }
        out
    }

    fn pre_exists(&self, x: &VertexSet, owner: Owner) -> VertexSet {
        let mut out = self.empty_set();
        for u in self.active.iter().filter(|&u| self.owned(u, owner)) {
            if self.successors(u).any(|w| x.contains(w)) {
                out.insert(u);
            }
        }
        out
    }

    /// `Pre□(X)`: Even vertices with some successor in `x`.
    pub fn pre_even(&self, x: &VertexSet) -> VertexSet {
        self.pre_exists(x, Owner::Even)
    }

    /// `Pre○(X)`: Odd vertices with some successor in `x`.
    pub fn pre_odd(&self, x: &VertexSet) -> VertexSet {
        self.pre_exists(x, Owner::Odd)
    }

    /// `Pre△(X', X)`: Random vertices with every successor in `x_all` and some in `x_some`.
    pub fn pre_random(&self, x_all: &VertexSet, x_some: &VertexSet) -> VertexSet {
        let mut out = self.empty_set();
        for u in self.active.iter().filter(|&u| self.owned(u, Owner::Random)) {
            let mut all = true;
            let mut some = false;
            for w in self.successors(u) {
                all &= x_all.contains(w);
                some |= x_some.contains(w);
            }
            if all && some {
                out.insert(u);
            }
        }
        out
    }

    fn restrict_to_active(&self, x: &VertexSet) -> VertexSet {
        x.intersection(&self.active)
    }

    /// `Attr(X) = μY. X ∪ Pre(Y)`.
    pub fn attr(&self, x: &VertexSet) -> VertexSet {
        let x = self.restrict_to_active(x);
        lfp(&self.empty_set(), None, |y| x.union(&self.pre(y)))
    }

    /// `Attr□(X) = μY. X ∪ Pre(Y) ∪ Pre□(Y)`.
    pub fn attr_even(&self, x: &VertexSet) -> VertexSet {
        let x = self.restrict_to_active(x);
        lfp(&self.empty_set(), None, |y| {
            let mut next = x.union(&self.pre(y));
            next.union_with(&self.pre_even(y));
            next
        })
    }

    /// `Attr○(X) = μY. X ∪ Pre(Y) ∪ Pre○(Y)`.
    pub fn attr_odd(&self, x: &VertexSet) -> VertexSet {
        let x = self.restrict_to_active(x);
        lfp(&self.empty_set(), None, |y| {
            let mut next = x.union(&self.pre(y));
            next.union_with(&self.pre_odd(y));
            next
        })
    }

    /// `Attr′(X) = νZ. μY. X ∪ Pre(Y) ∪ Pre△(Z, Y)`: vertices from which every
    /// play reaches `x` almost surely, whatever both players do.
    pub fn attr_prime(&self, x: &VertexSet) -> VertexSet {
        self.attr_prime_traced(x, None)
    }

    pub fn attr_prime_traced(&self, x: &VertexSet, trace: Option<&mut FixpointTrace>) -> VertexSet {
        let x = self.restrict_to_active(x);
        nested(self, trace, |z, y| {
            let mut next = x.union(&self.pre(y));
            next.union_with(&self.pre_random(z, y));
            next
        })
    }

    /// `μY. X ∪ Pre(Y) ∪ Pre△(within, Y)`: `Attr′` with the outer fixpoint
    /// replaced by a fixed set that plays are known to stay in.
    pub fn attr_within(&self, x: &VertexSet, within: &VertexSet) -> VertexSet {
        let x = self.restrict_to_active(x);
        lfp(&self.empty_set(), None, |y| {
            let mut next = x.union(&self.pre(y));
            next.union_with(&self.pre_random(within, y));
            next
        })
    }

    /// `Attr′□(X) = νZ. μY. X ∪ Pre□(Y) ∪ Pre(Y) ∪ Pre△(Z, Y)`: the almost-sure
    /// reachability winning set of Even.
    pub fn attr_prime_even(&self, x: &VertexSet) -> VertexSet {
        self.attr_prime_even_traced(x, None)
    }

    pub fn attr_prime_even_traced(
        &self,
        x: &VertexSet,
        trace: Option<&mut FixpointTrace>,
    ) -> VertexSet {
        let x = self.restrict_to_active(x);
        nested(self, trace, |z, y| {
            let mut next = x.union(&self.pre_even(y));
            next.union_with(&self.pre(y));
            next.union_with(&self.pre_random(z, y));
            next
        })
    }

    /// Almost-sure Büchi winning set:
    /// `νZ. μY. (X ∩ (Pre□(Z) ∪ Pre(Z))) ∪ Pre□(Y) ∪ Pre(Y) ∪ Pre△(Z, Y)`.
    ///
    /// The recurrence seed keeps the target vertices from which Even can stay
    /// inside `Z` for one more step; Odd and Random targets qualify through
    /// `Pre(Z)`.
    pub fn buchi_winning_set(&self, x: &VertexSet) -> VertexSet {
        self.buchi_winning_set_traced(x, None)
    }

    pub fn buchi_winning_set_traced(
        &self,
        x: &VertexSet,
        trace: Option<&mut FixpointTrace>,
    ) -> VertexSet {
        let x = self.restrict_to_active(x);
        nested(self, trace, |z, y| {
            let mut seed = self.pre_even(z);
            seed.union_with(&self.pre(z));
            seed.intersect_with(&x);
            seed.union_with(&self.pre_even(y));
            seed.union_with(&self.pre(y));
            seed.union_with(&self.pre_random(z, y));
            seed
        })
    }

    /// `νY. X ∩ (Pre□(Y) ∪ Pre(Y))`: the almost-sure safety winning set.
    pub fn safe_set(&self, x: &VertexSet) -> VertexSet {
        let x = self.restrict_to_active(x);
        gfp(&self.active, None, |y| {
            let mut next = self.pre_even(y);
            next.union_with(&self.pre(y));
            next.intersect_with(&x);
            next
        })
    }
}

/// Kleene iterates of a (nested) fixpoint computation.
///
/// `outer` holds the successive `Z` approximants of a `νZ.μY` formula and
/// `inner[i]` the `Y` approximants computed for `outer[i]`.
#[derive(Clone, Debug, Default)]
pub struct FixpointTrace {
    pub outer: Vec<VertexSet>,
    pub inner: Vec<Vec<VertexSet>>,
}

impl FixpointTrace {
    pub fn outer_steps(&self) -> usize {
        self.outer.len()
    }

    /// `Z` iterates decrease and every `Y` sequence increases.
    pub fn is_monotone(&self) -> bool {
        let outer_ok = self.outer.windows(2).all(|w| w[1].is_subset(&w[0]));
        let inner_ok = self
            .inner
            .iter()
            .all(|seq| seq.windows(2).all(|w| w[0].is_subset(&w[1])));
        outer_ok && inner_ok
    }
}

/// Least fixed point from `bottom`.
pub(crate) fn lfp<F>(
    bottom: &VertexSet,
    mut trace: Option<&mut Vec<VertexSet>>,
    mut f: F,
) -> VertexSet
where
    F: FnMut(&VertexSet) -> VertexSet,
{
    let mut current = bottom.clone();
    loop {
        if let Some(t) = trace.as_deref_mut() {
            t.push(current.clone());
        }
        let next = f(&current);
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Greatest fixed point from `top`.
pub(crate) fn gfp<F>(top: &VertexSet, trace: Option<&mut Vec<VertexSet>>, f: F) -> VertexSet
where
    F: FnMut(&VertexSet) -> VertexSet,
{
    lfp(top, trace, f)
}

/// `νZ. μY. body(Z, Y)`, restarting the inner iteration from `∅` for every `Z`.
fn nested<F>(sub: &SubGame<'_>, mut trace: Option<&mut FixpointTrace>, mut body: F) -> VertexSet
where
    F: FnMut(&VertexSet, &VertexSet) -> VertexSet,
{
    let bottom = sub.empty_set();
    let mut z = sub.active.clone();
    loop {
        let mut inner = Vec::new();
        let y = lfp(&bottom, trace.as_ref().map(|_| &mut inner), |y| body(&z, y));
        if let Some(t) = trace.as_deref_mut() {
            t.outer.push(z.clone());
            t.inner.push(inner);
        }
        if y == z {
            return z;
        }
        z = y;
    }
}

/// Shorthands on the whole game.
pub fn pre(g: &StochasticGame, x: &VertexSet) -> VertexSet {
    SubGame::full(g).pre(x)
}

pub fn pre_even(g: &StochasticGame, x: &VertexSet) -> VertexSet {
    SubGame::full(g).pre_even(x)
}

pub fn pre_odd(g: &StochasticGame, x: &VertexSet) -> VertexSet {
    SubGame::full(g).pre_odd(x)
}

pub fn pre_random(g: &StochasticGame, x_all: &VertexSet, x_some: &VertexSet) -> VertexSet {
    SubGame::full(g).pre_random(x_all, x_some)
}

pub fn attr(g: &StochasticGame, x: &VertexSet) -> VertexSet {
    SubGame::full(g).attr(x)
}

pub fn attr_even(g: &StochasticGame, x: &VertexSet) -> VertexSet {
    SubGame::full(g).attr_even(x)
}

pub fn attr_odd(g: &StochasticGame, x: &VertexSet) -> VertexSet {
    SubGame::full(g).attr_odd(x)
}

pub fn attr_prime(g: &StochasticGame, x: &VertexSet) -> VertexSet {
    SubGame::full(g).attr_prime(x)
}

pub fn attr_prime_even(g: &StochasticGame, x: &VertexSet) -> VertexSet {
    SubGame::full(g).attr_prime_even(x)
}

pub fn buchi_winning_set(g: &StochasticGame, x: &VertexSet) -> VertexSet {
    SubGame::full(g).buchi_winning_set(x)
}

pub fn safe_set(g: &StochasticGame, x: &VertexSet) -> VertexSet {
    SubGame::full(g).safe_set(x)
}
