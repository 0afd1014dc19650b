//! Seeded simulation of plays with per-run statistics.
//!
//! Run `r` draws from a ChaCha8 generator seeded with the master seed on
//! stream `r`, so every run can be reproduced on its own.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::extraction::{play, Adversary, EvenStrategy, PlayTranscript};
use crate::game::{StochasticGame, VertexId};
use crate::objective::Objective;
use crate::template::StrategyTemplate;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonteCarloConfig {
    pub runs: usize,
    pub horizon: usize,
    pub seed: u64,
}

/// Per-run random source.
pub fn run_rng(seed: u64, run: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run);
    rng
}

/// Verdict of `objective` on a finite play. Safety and reachability are exact
/// for the prefix; the recurrence objectives look at the second half only.
pub fn finite_verdict(objective: &Objective, vertices: &[VertexId], horizon: usize) -> bool {
    let tail = &vertices[(horizon / 2).min(vertices.len().saturating_sub(1))..];
    match objective {
        Objective::Safety(x) => vertices.iter().all(|&v| x.contains(v)),
        Objective::Reachability(x) => vertices.iter().any(|&v| x.contains(v)),
        Objective::Buchi(x) => tail.iter().any(|&v| x.contains(v)),
        Objective::CoBuchi(x) => tail.iter().all(|&v| x.contains(v)),
        Objective::Parity(p) => tail
            .iter()
            .map(|&v| p.get(v))
            .min()
            .is_some_and(|m| m % 2 == 0),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloStats {
    pub config: MonteCarloConfig,
    pub satisfied: usize,
    pub truncated: usize,
    /// Co-live edge traversals per run.
    pub colive_uses: Vec<usize>,
    /// Step of the last co-live traversal per run.
    pub colive_last_use: Vec<Option<usize>>,
    /// `(run, group)` pairs whose group source recurs in the second half of the run.
    pub groups_triggered: usize,
    /// Triggered pairs in which some group edge was taken in the second half.
    pub groups_fired: usize,
    /// Step at which the objective was first met, for reachability.
    pub first_hit: Vec<Option<usize>>,
}

impl MonteCarloStats {
    pub fn frequency(&self) -> f64 {
        self.satisfied as f64 / self.config.runs.max(1) as f64
    }

    pub fn mean_colive_uses(&self) -> f64 {
        self.colive_uses.iter().sum::<usize>() as f64 / self.colive_uses.len().max(1) as f64
    }

    pub fn firing_rate(&self) -> Option<f64> {
        (self.groups_triggered > 0).then(|| self.groups_fired as f64 / self.groups_triggered as f64)
    }

    /// Plain `key value` lines for golden files.
    pub fn report(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(out, "seed {}", c.seed);
        let _ = writeln!(out, "runs {}", c.runs);
        let _ = writeln!(out, "horizon {}", c.horizon);
        let _ = writeln!(out, "satisfied {}", self.satisfied);
        let _ = writeln!(out, "frequency {:.6}", self.frequency());
        let _ = writeln!(out, "truncated {}", self.truncated);
        let _ = writeln!(
            out,
            "colive_uses_total {}",
            self.colive_uses.iter().sum::<usize>()
        );
        let _ = writeln!(out, "colive_uses_mean {:.6}", self.mean_colive_uses());
        let max_last = self.colive_last_use.iter().flatten().max();
        match max_last {
            Some(m) => {
                let _ = writeln!(out, "colive_last_use_max {m}");
            }
            None => {
                let _ = writeln!(out, "colive_last_use_max none");
            }
        }
        let _ = writeln!(out, "groups_triggered {}", self.groups_triggered);
        let _ = writeln!(out, "groups_fired {}", self.groups_fired);
        match self.firing_rate() {
            Some(r) => {
                let _ = writeln!(out, "firing_rate {r:.6}");
            }
            None => {
                let _ = writeln!(out, "firing_rate none");
            }
        }
        let _ = writeln!(out, "verdicts heuristic for buchi/cobuchi/parity");
        out
    }
}

/// Simulates `config.runs` plays; run `r` starts at `starts[r % starts.len()]`.
/// The strategy is reset before every run.
pub fn monte_carlo<S, A>(
    game: &StochasticGame,
    strategy: &mut S,
    adversary: &mut A,
    objective: &Objective,
    template: &StrategyTemplate,
    starts: &[VertexId],
    config: MonteCarloConfig,
) -> MonteCarloStats
where
    S: EvenStrategy + ?Sized,
    A: Adversary + ?Sized,
{
    assert!(!starts.is_empty(), "need at least one start vertex");
    let mut stats = MonteCarloStats {
        config,
        satisfied: 0,
        truncated: 0,
        colive_uses: Vec::with_capacity(config.runs),
        colive_last_use: Vec::with_capacity(config.runs),
        groups_triggered: 0,
        groups_fired: 0,
        first_hit: Vec::with_capacity(config.runs),
    };
    for run in 0..config.runs {
        strategy.reset();
        let mut rng = run_rng(config.seed, run as u64);
        let mut t = play(
            game,
            strategy,
            adversary,
            starts[run % starts.len()],
            config.horizon,
            &mut rng,
        );
        t.seed = Some((config.seed, run as u64));
        account(&mut stats, &t, objective, template, config.horizon);
    }
    stats
}

fn account(
    stats: &mut MonteCarloStats,
    t: &PlayTranscript,
    objective: &Objective,
    template: &StrategyTemplate,
    horizon: usize,
) {
    let vertices = t.vertices();
    if finite_verdict(objective, &vertices, horizon) {
        stats.satisfied += 1;
    }
    if t.truncated {
        stats.truncated += 1;
    }
    let mut uses = 0;
    let mut last = None;
    for (i, e) in t.edges().enumerate() {
        if template.colive.contains(&e) {
            uses += 1;
            last = Some(i);
        }
    }
    stats.colive_uses.push(uses);
    stats.colive_last_use.push(last);
    stats.first_hit.push(match objective {
        Objective::Reachability(x) => vertices.iter().position(|&v| x.contains(v)),
        _ => None,
    });
    let window = horizon / 2;
    let tail_edges: Vec<_> = t.edges().skip(window).collect();
    for group in &template.live_groups {
        let visits = tail_edges
            .iter()
            .filter(|e| group.iter().any(|g| g.src == e.src))
            .count();
        if visits >= 2 {
            stats.groups_triggered += 1;
            if tail_edges.iter().any(|e| group.contains(e)) {
                stats.groups_fired += 1;
            }
        }
    }
}
