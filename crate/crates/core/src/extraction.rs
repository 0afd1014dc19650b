//! Executable strategies from templates and a small play engine.
//!
//! [`PureStrategy`] deletes prohibited and co-live edges and round-robins over
//! what is left. [`MixedStrategy`] only deletes prohibited edges and keeps a
//! per-play weight for each remaining edge: using a co-live edge multiplies its
//! weight by `alpha < 1`, using a live-group edge multiplies it by `beta >= 1`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
pub use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::ExtractError;
use crate::game::{Edge, Owner, StochasticGame, VertexId, VertexSet};
use crate::template::StrategyTemplate;

/// Even's side of a play.
pub trait EvenStrategy {
    /// Successor to play at `v` and its probability, `None` at a dead end.
    fn choose(&mut self, v: VertexId, rng: &mut dyn rand::RngCore) -> Option<(VertexId, f64)>;
    /// Probability of moving along `v -> w` in the current memory state.
    fn probability(&self, v: VertexId, w: VertexId) -> f64;
    /// Memory update after an edge has been traversed.
    fn observe(&mut self, edge: Edge);
    /// Back to the initial memory state.
    fn reset(&mut self);
}

/// Odd's side of a play.
pub trait Adversary {
    fn choose(
        &mut self,
        game: &StochasticGame,
        v: VertexId,
        rng: &mut dyn rand::RngCore,
    ) -> VertexId;
    fn probability(&self, game: &StochasticGame, v: VertexId, w: VertexId) -> f64;
}

/// Round-robin over the edges that survive removing `P` and `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PureStrategy {
    allowed: Vec<Vec<VertexId>>,
    cursor: Vec<usize>,
    dead_ends: Vec<VertexId>,
}

impl PureStrategy {
    /// Successors kept at `v`, in input order.
    pub fn allowed(&self, v: VertexId) -> &[VertexId] {
        &self.allowed[v.0]
    }

    /// Even vertices of the winning set left without successors.
    pub fn dead_ends(&self) -> &[VertexId] {
        &self.dead_ends
    }

    /// Edge the strategy plays next at `v`.
    pub fn next(&self, v: VertexId) -> Option<VertexId> {
        self.allowed[v.0].get(self.cursor[v.0]).copied()
    }

    pub fn describe(&self, game: &StochasticGame) -> String {
        let mut out = String::new();
        for v in game.vertices().filter(|&v| game.owner(v) == Owner::Even) {
            let succ: Vec<String> = self.allowed[v.0].iter().map(|w| w.to_string()).collect();
            let _ = writeln!(out, "{v}: round-robin [{}]", succ.join(","));
        }
        out
    }
}

impl EvenStrategy for PureStrategy {
    fn choose(&mut self, v: VertexId, _rng: &mut dyn rand::RngCore) -> Option<(VertexId, f64)> {
        self.next(v).map(|w| (w, 1.0))
    }

    fn probability(&self, v: VertexId, w: VertexId) -> f64 {
        if self.next(v) == Some(w) {
            1.0
        } else {
            0.0
        }
    }

    fn observe(&mut self, edge: Edge) {
        let list = &self.allowed[edge.src.0];
        if let Some(i) = list.iter().position(|&w| w == edge.dst) {
            self.cursor[edge.src.0] = (i + 1) % list.len();
        }
    }

    fn reset(&mut self) {
        self.cursor.iter_mut().for_each(|c| *c = 0);
    }
}

fn pure_strategy(
    game: &StochasticGame,
    template: &StrategyTemplate,
    winning: &VertexSet,
) -> PureStrategy {
    let allowed: Vec<Vec<VertexId>> = game
        .vertices()
        .map(|v| {
            if game.owner(v) != Owner::Even {
                return Vec::new();
            }
            game.successors(v)
                .iter()
                .copied()
                .filter(|&w| {
                    let e = Edge { src: v, dst: w };
                    !template.prohibited.contains(&e) && !template.colive.contains(&e)
                })
                .collect()
        })
        .collect();
    let dead_ends = winning
        .iter()
        .filter(|&v| game.owner(v) == Owner::Even && allowed[v.0].is_empty())
        .collect();
    PureStrategy {
        cursor: vec![0; allowed.len()],
        allowed,
        dead_ends,
    }
}

/// Pure round-robin strategy; fails if an Even vertex of `winning` loses every edge.
pub fn extract_pure(
    game: &StochasticGame,
    template: &StrategyTemplate,
    winning: &VertexSet,
) -> Result<PureStrategy, ExtractError> {
    let s = pure_strategy(game, template, winning);
    if s.dead_ends.is_empty() {
        Ok(s)
    } else {
        Err(ExtractError::DeadEnds(s.dead_ends))
    }
}

/// Like [`extract_pure`] but keeps going and reports dead ends through
/// [`PureStrategy::dead_ends`]; plays reaching one stop there.
pub fn extract_pure_partial(
    game: &StochasticGame,
    template: &StrategyTemplate,
    winning: &VertexSet,
) -> PureStrategy {
    pure_strategy(game, template, winning)
}

/// Number type of the mixed strategy's edge weights.
pub trait Weight: Clone + PartialOrd + std::fmt::Debug {
    fn one() -> Self;
    fn zero() -> Self;
    fn scale(&mut self, factor: &Self);
    fn add(&self, other: &Self) -> Self;
    fn ratio(&self, total: &Self) -> f64;
    fn to_f64(&self) -> f64;
}

impl Weight for f64 {
    fn one() -> Self {
        1.0
    }
    fn zero() -> Self {
        0.0
    }
    fn scale(&mut self, factor: &Self) {
        *self *= factor;
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn ratio(&self, total: &Self) -> f64 {
        self / total
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Weight for BigRational {
    fn one() -> Self {
        One::one()
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn scale(&mut self, factor: &Self) {
        *self *= factor;
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn ratio(&self, total: &Self) -> f64 {
        ToPrimitive::to_f64(&(self / total)).unwrap_or(0.0)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(0.0)
    }
}

/// Parses `"3/4"`, `"2"` or a decimal such as `"0.5"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        return (!d.is_zero()).then(|| BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{int}{frac}").parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        return Some(BigRational::new(digits, scale));
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

/// Weighted randomized strategy with `alpha`-decay on co-live edges and
/// `beta`-boost on live-group edges.
#[derive(Clone, Debug)]
pub struct MixedStrategy<W: Weight> {
    allowed: Vec<Vec<VertexId>>,
    weights: Vec<Vec<W>>,
    colive: BTreeSet<Edge>,
    live: BTreeSet<Edge>,
    alpha: W,
    beta: W,
}

pub type FloatMixed = MixedStrategy<f64>;
pub type ExactMixed = MixedStrategy<BigRational>;

impl<W: Weight> MixedStrategy<W> {
    /// Requires `0 < alpha < 1 <= beta`.
    pub fn new(
        game: &StochasticGame,
        template: &StrategyTemplate,
        alpha: W,
        beta: W,
    ) -> Result<Self, ExtractError> {
        if !(alpha > W::zero() && alpha < W::one() && beta >= W::one()) {
            return Err(ExtractError::Parameters);
        }
        let allowed: Vec<Vec<VertexId>> = game
            .vertices()
            .map(|v| {
                if game.owner(v) != Owner::Even {
                    return Vec::new();
                }
                game.successors(v)
                    .iter()
                    .copied()
                    .filter(|&w| !template.prohibited.contains(&Edge { src: v, dst: w }))
                    .collect()
            })
            .collect();
        let weights = allowed.iter().map(|s| vec![W::one(); s.len()]).collect();
        Ok(MixedStrategy {
            allowed,
            weights,
            colive: template.colive.clone(),
            live: template.live_groups.iter().flatten().copied().collect(),
            alpha,
            beta,
        })
    }

    pub fn allowed(&self, v: VertexId) -> &[VertexId] {
        &self.allowed[v.0]
    }

    /// Current weight `d(v)(w)`, `None` if the edge is not available.
    pub fn weight(&self, v: VertexId, w: VertexId) -> Option<&W> {
        let i = self.allowed[v.0].iter().position(|&x| x == w)?;
        Some(&self.weights[v.0][i])
    }

    fn total(&self, v: VertexId) -> W {
        self.weights[v.0]
            .iter()
            .fold(W::zero(), |acc, x| acc.add(x))
    }

    /// `(successor, d(v)(w) / Σ d(v)(·))` for every available successor.
    pub fn distribution(&self, v: VertexId) -> Vec<(VertexId, f64)> {
        let total = self.total(v);
        self.allowed[v.0]
            .iter()
            .zip(&self.weights[v.0])
            .map(|(&w, d)| (w, d.ratio(&total)))
            .collect()
    }
}

impl MixedStrategy<BigRational> {
    /// Exact probability of `v -> w`.
    pub fn exact_probability(&self, v: VertexId, w: VertexId) -> BigRational {
        match self.weight(v, w) {
            Some(d) => d / self.total(v),
            None => Zero::zero(),
        }
    }
}

impl<W: Weight> EvenStrategy for MixedStrategy<W> {
    fn choose(&mut self, v: VertexId, rng: &mut dyn rand::RngCore) -> Option<(VertexId, f64)> {
        let dist = self.distribution(v);
        let (&(last, last_p), rest) = dist.split_last()?;
        let mut u: f64 = rng.random();
        for &(w, p) in rest {
            if u < p {
                return Some((w, p));
            }
            u -= p;
        }
        Some((last, last_p))
    }

    fn probability(&self, v: VertexId, w: VertexId) -> f64 {
        match self.weight(v, w) {
            Some(d) => d.ratio(&self.total(v)),
            None => 0.0,
        }
    }

    fn observe(&mut self, edge: Edge) {
        let Some(i) = self.allowed[edge.src.0].iter().position(|&x| x == edge.dst) else {
            return;
        };
        let d = &mut self.weights[edge.src.0][i];
        if self.colive.contains(&edge) {
            d.scale(&self.alpha);
        }
        if self.live.contains(&edge) {
            d.scale(&self.beta);
        }
    }

    fn reset(&mut self) {
        for row in &mut self.weights {
            row.iter_mut().for_each(|d| *d = W::one());
        }
    }
}

/// Picks uniformly among all successors.
#[derive(Clone, Copy, Debug, Default)]
pub struct UniformAdversary;

impl Adversary for UniformAdversary {
    fn choose(
        &mut self,
        game: &StochasticGame,
        v: VertexId,
        rng: &mut dyn rand::RngCore,
    ) -> VertexId {
        let succ = game.successors(v);
        succ[rng.random_range(0..succ.len())]
    }

    fn probability(&self, game: &StochasticGame, v: VertexId, w: VertexId) -> f64 {
        if game.has_edge(v, w) {
            1.0 / game.successors(v).len() as f64
        } else {
            0.0
        }
    }
}

/// A fixed memoryless choice per Odd vertex; unlisted vertices play their first successor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableAdversary {
    pub choice: Vec<Option<VertexId>>,
}

impl TableAdversary {
    fn pick(&self, game: &StochasticGame, v: VertexId) -> VertexId {
        self.choice
            .get(v.0)
            .copied()
            .flatten()
            .unwrap_or(game.successors(v)[0])
    }
}

impl Adversary for TableAdversary {
    fn choose(
        &mut self,
        game: &StochasticGame,
        v: VertexId,
        _rng: &mut dyn rand::RngCore,
    ) -> VertexId {
        self.pick(game, v)
    }

    fn probability(&self, game: &StochasticGame, v: VertexId, w: VertexId) -> f64 {
        if self.pick(game, v) == w {
            1.0
        } else {
            0.0
        }
    }
}

/// Replays a fixed list of Odd moves, then falls back to uniform choices.
#[derive(Clone, Debug, Default)]
pub struct ScriptedAdversary {
    moves: std::collections::VecDeque<VertexId>,
}

impl ScriptedAdversary {
    pub fn new(moves: impl IntoIterator<Item = VertexId>) -> Self {
        ScriptedAdversary {
            moves: moves.into_iter().collect(),
        }
    }
}

impl Adversary for ScriptedAdversary {
    fn choose(
        &mut self,
        game: &StochasticGame,
        v: VertexId,
        rng: &mut dyn rand::RngCore,
    ) -> VertexId {
        match self.moves.pop_front() {
            Some(w) if game.has_edge(v, w) => w,
            _ => UniformAdversary.choose(game, v, rng),
        }
    }

    fn probability(&self, game: &StochasticGame, v: VertexId, w: VertexId) -> f64 {
        match self.moves.front() {
            Some(&next) if game.has_edge(v, next) => f64::from(u8::from(next == w)),
            _ => UniformAdversary.probability(game, v, w),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TranscriptStep {
    pub src: VertexId,
    pub owner: Owner,
    pub chosen: VertexId,
    /// Probability of `chosen` at the moment of choice.
    pub prob: f64,
}

/// A finite play together with the choice probabilities along it.
#[derive(Clone, Debug, PartialEq)]
pub struct PlayTranscript {
    pub start: VertexId,
    pub steps: Vec<TranscriptStep>,
    /// `(master seed, stream)` of the random source, when known.
    pub seed: Option<(u64, u64)>,
    /// The play stopped early at an Even vertex without successors.
    pub truncated: bool,
}

impl PlayTranscript {
    pub fn vertices(&self) -> Vec<VertexId> {
        std::iter::once(self.start)
            .chain(self.steps.iter().map(|s| s.chosen))
            .collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.steps.iter().map(|s| Edge {
            src: s.src,
            dst: s.chosen,
        })
    }

    /// One line per step: `step src owner chosen prob`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        if let Some((seed, stream)) = self.seed {
            let _ = writeln!(out, "# seed {seed} stream {stream}");
        }
        for (i, s) in self.steps.iter().enumerate() {
            let _ = writeln!(
                out,
                "{i} {} {} {} {:.6}",
                s.src,
                s.owner.code(),
                s.chosen,
                s.prob
            );
        }
        if self.truncated {
            let _ = writeln!(
                out,
                "# truncated at dead end {}",
                self.vertices().last().expect("non-empty")
            );
        }
        out
    }
}

/// Plays `horizon` steps from `start`. Random vertices move uniformly.
pub fn play<S, A>(
    game: &StochasticGame,
    even: &mut S,
    odd: &mut A,
    start: VertexId,
    horizon: usize,
    rng: &mut dyn rand::RngCore,
) -> PlayTranscript
where
    S: EvenStrategy + ?Sized,
    A: Adversary + ?Sized,
{
    let mut steps = Vec::with_capacity(horizon);
    let mut current = start;
    let mut truncated = false;
    for _ in 0..horizon {
        let owner = game.owner(current);
        let (next, prob) = match owner {
            Owner::Even => match even.choose(current, rng) {
                Some(choice) => choice,
                None => {
                    truncated = true;
                    break;
                }
            },
            Owner::Odd => {
                let w = odd.choose(game, current, rng);
                (w, odd.probability(game, current, w))
            }
            Owner::Random => {
                let succ = game.successors(current);
                (
                    succ[rng.random_range(0..succ.len())],
                    1.0 / succ.len() as f64,
                )
            }
        };
        let edge = Edge {
            src: current,
            dst: next,
        };
        even.observe(edge);
        steps.push(TranscriptStep {
            src: current,
            owner,
            chosen: next,
            prob,
        });
        current = next;
    }
    PlayTranscript {
        start,
        steps,
        seed: None,
        truncated,
    }
}

/// Probabilities Even's strategy assigns to its own moves along `path`,
/// starting from the initial memory state. Non-Even steps are skipped.
pub fn replay_even_probabilities<S: EvenStrategy + ?Sized>(
    game: &StochasticGame,
    strategy: &mut S,
    path: &[VertexId],
) -> Vec<f64> {
    strategy.reset();
    let mut out = Vec::new();
    for pair in path.windows(2) {
        let edge = Edge {
            src: pair[0],
            dst: pair[1],
        };
        if game.owner(edge.src) == Owner::Even {
            out.push(strategy.probability(edge.src, edge.dst));
        }
        strategy.observe(edge);
    }
    out
}

/// A shortest path from `from` that avoids prohibited edges, reaches the source
/// of a co-live edge and then takes it. Such a play is possible under the mixed
/// strategy and impossible under the pure one.
pub fn colive_witness(
    game: &StochasticGame,
    template: &StrategyTemplate,
    from: &VertexSet,
) -> Option<Vec<VertexId>> {
    let n = game.num_vertices();
    let mut parent: Vec<Option<VertexId>> = vec![None; n];
    let mut seen = from.clone();
    let mut queue: std::collections::VecDeque<VertexId> = from.iter().collect();
    while let Some(v) = queue.pop_front() {
        let colive_out = game.successors(v).iter().find(|&&w| {
            template.colive.contains(&Edge { src: v, dst: w })
                && !template.prohibited.contains(&Edge { src: v, dst: w })
        });
        if let Some(&w) = colive_out {
            let mut path = vec![w, v];
            let mut cur = v;
            while let Some(p) = parent[cur.0] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &w in game.successors(v) {
            if !template.prohibited.contains(&Edge { src: v, dst: w }) && seen.insert(w) {
                parent[w.0] = Some(v);
                queue.push_back(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g_ex, g_r, t1, R_V0, U, V, W};
    use crate::synthesis::buchi_template;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn pure_t1_on_g_ex() {
        let g = g_ex();
        assert_eq!(
            extract_pure(&g, &t1(), &g.full_set()),
            Err(ExtractError::DeadEnds(vec![U]))
        );
        let s = extract_pure_partial(&g, &t1(), &g.full_set());
        assert_eq!(s.allowed(V), &[W]);
        assert_eq!(s.next(V), Some(W));
    }

    #[test]
    fn pure_empty_template_round_robins() {
        let g = g_ex();
        let mut s = extract_pure(&g, &StrategyTemplate::empty(), &g.full_set()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let picks: Vec<VertexId> = (0..4)
            .map(|_| {
                let (w, p) = s.choose(V, &mut rng).unwrap();
                assert_eq!(p, 1.0);
                s.observe(Edge { src: V, dst: w });
                w
            })
            .collect();
        assert_eq!(picks, vec![U, W, U, W]);
    }

    #[test]
    fn pure_buchi_template_alternates_through_w() {
        let g = g_ex();
        let res = buchi_template(&g, &g.set_of([W]));
        let mut s = extract_pure(&g, &res.template, &res.winning_set).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let t = play(&g, &mut s, &mut UniformAdversary, U, 10, &mut rng);
        assert!(t.vertices().contains(&W));
        assert!(t.edges().any(|e| e == Edge::new(V, W)));
    }

    #[test]
    fn mixed_starts_uniform_and_decays() {
        let g = g_ex();
        let mut m = ExactMixed::new(&g, &t1(), q("1/2"), q("1")).unwrap();
        assert_eq!(m.exact_probability(V, U), q("1/2"));
        m.observe(Edge::new(V, U));
        assert_eq!(m.exact_probability(V, U), q("1/3"));
        for _ in 0..3 {
            m.observe(Edge::new(V, U));
        }
        assert_eq!(m.weight(V, U), Some(&q("1/16")));
        m.reset();
        assert_eq!(m.weight(V, U), Some(&q("1")));
    }

    #[test]
    fn colive_and_live_updates_multiply() {
        let g = g_ex();
        let e = Edge::new(V, U);
        let t = StrategyTemplate::new([], [[e].into()], [e]);
        let mut m = ExactMixed::new(&g, &t, q("1/2"), q("3")).unwrap();
        m.observe(e);
        assert_eq!(m.weight(V, U), Some(&q("3/2")));
    }

    #[test]
    fn parameters_are_checked() {
        let g = g_ex();
        assert!(FloatMixed::new(&g, &t1(), 1.0, 2.0).is_err());
        assert!(FloatMixed::new(&g, &t1(), 0.5, 0.9).is_err());
        assert!(FloatMixed::new(&g, &t1(), 0.0, 1.0).is_err());
        assert!(FloatMixed::new(&g, &t1(), 0.5, 1.0).is_ok());
    }

    #[test]
    fn float_distribution_sums_to_one() {
        let g = g_ex();
        let mut m = FloatMixed::new(&g, &t1(), 0.3, 2.0).unwrap();
        for _ in 0..50 {
            m.observe(Edge::new(V, U));
            let total: f64 = m.distribution(V).iter().map(|(_, p)| p).sum();
            assert!((total - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn random_vertex_is_uniform() {
        let g = g_r();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut s = extract_pure_partial(&g, &StrategyTemplate::empty(), &g.full_set());
        let mut hits = 0usize;
        let n = 10_000;
        for _ in 0..n {
            let t = play(&g, &mut s, &mut UniformAdversary, R_V0, 1, &mut rng);
            if t.steps[0].chosen == crate::fixtures::R_W {
                hits += 1;
            }
            assert_eq!(t.steps[0].prob, 0.5);
        }
        let freq = hits as f64 / n as f64;
        assert!((freq - 0.5).abs() <= 0.02, "{freq}");
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("0.25"), Some(q("1/4")));
        assert_eq!(parse_rational("2"), Some(q("2/1")));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn witness_uses_colive_edge() {
        let g = g_ex();
        let w = colive_witness(&g, &t1(), &g.set_of([U])).unwrap();
        assert_eq!(w, vec![U, V]);
        let mut pure = extract_pure_partial(&g, &t1(), &g.full_set());
        assert_eq!(replay_even_probabilities(&g, &mut pure, &w), vec![0.0]);
        let mut mixed = FloatMixed::new(&g, &t1(), 0.5, 2.0).unwrap();
        assert!(replay_even_probabilities(&g, &mut mixed, &w)
            .iter()
            .all(|&p| p > 0.0));
    }

    #[test]
    fn dump_format() {
        let g = g_ex();
        let mut s = extract_pure_partial(&g, &t1(), &g.full_set());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let t = play(&g, &mut s, &mut UniformAdversary, V, 2, &mut rng);
        assert_eq!(t.dump(), "0 1 0 2 1.000000\n1 2 0 2 1.000000\n");
    }
}
