//! Exhaustive enumeration of ultimately periodic paths.

use crate::error::BudgetError;
use crate::game::{Edge, Owner, StochasticGame, VertexId, VertexSet};
use crate::objective::Lasso;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LassoBudget {
    pub max_lassos: usize,
}

impl Default for LassoBudget {
    fn default() -> Self {
        LassoBudget {
            max_lassos: 50_000_000,
        }
    }
}

/// Visits every lasso starting in `from` with `|prefix| + |cycle| <= bound`
/// whose transitions all pass `allow`.
///
/// Each infinite word is produced once, in its shortest form: the cycle is
/// primitive and, when the prefix is non-empty, its last vertex differs from
/// the last cycle vertex (otherwise the cycle could be rotated into the prefix).
pub fn for_each_lasso<A, F>(
    game: &StochasticGame,
    from: &VertexSet,
    bound: usize,
    budget: LassoBudget,
    mut allow: A,
    mut visit: F,
) -> Result<usize, BudgetError>
where
    A: FnMut(Edge) -> bool,
    F: FnMut(&Lasso),
{
    let mut count = 0usize;
    let mut path: Vec<VertexId> = Vec::with_capacity(bound);
    // Per depth: index of the next successor to try.
    let mut cursor: Vec<usize> = Vec::with_capacity(bound);
    for start in from.iter() {
        if bound == 0 {
            break;
        }
        path.clear();
        cursor.clear();
        path.push(start);
        cursor.push(0);
        emit_closings(game, &path, &mut allow, &mut visit, &mut count, budget)?;
        while let Some(&last) = path.last() {
            let depth = path.len() - 1;
            let succ = game.successors(last);
            if path.len() < bound && cursor[depth] < succ.len() {
                let next = succ[cursor[depth]];
                cursor[depth] += 1;
                if allow(Edge {
                    src: last,
                    dst: next,
                }) {
                    path.push(next);
                    cursor.push(0);
                    emit_closings(game, &path, &mut allow, &mut visit, &mut count, budget)?;
                }
            } else {
                path.pop();
                cursor.pop();
            }
        }
    }
    Ok(count)
}

fn emit_closings<A, F>(
    game: &StochasticGame,
    path: &[VertexId],
    allow: &mut A,
    visit: &mut F,
    count: &mut usize,
    budget: LassoBudget,
) -> Result<(), BudgetError>
where
    A: FnMut(Edge) -> bool,
    F: FnMut(&Lasso),
{
    let n = path.len();
    let last = path[n - 1];
    for i in 0..n {
        if i > 0 && path[i - 1] == last {
            continue;
        }
        let cycle = &path[i..];
        if !is_primitive(cycle) {
            continue;
        }
        if !game.has_edge(last, path[i])
            || !allow(Edge {
                src: last,
                dst: path[i],
            })
        {
            continue;
        }
        *count += 1;
        if *count > budget.max_lassos {
            return Err(BudgetError::TooManyLassos {
                limit: budget.max_lassos,
            });
        }
        visit(&Lasso {
            prefix: path[..i].to_vec(),
            cycle: cycle.to_vec(),
        });
    }
    Ok(())
}

/// `true` if the sequence is not a proper power of a shorter block.
pub fn is_primitive(cycle: &[VertexId]) -> bool {
    let m = cycle.len();
    (1..m)
        .filter(|d| m.is_multiple_of(*d))
        .all(|d| (d..m).any(|i| cycle[i] != cycle[i - d]))
}

/// All lassos from `from` up to `bound`, in enumeration order.
pub fn enumerate_lassos(
    game: &StochasticGame,
    from: &VertexSet,
    bound: usize,
    budget: LassoBudget,
) -> Result<Vec<Lasso>, BudgetError> {
    let mut out = Vec::new();
    for_each_lasso(game, from, bound, budget, |_| true, |l| out.push(l.clone()))?;
    Ok(out)
}

/// A lasso has positive probability under fair randomisation only if every
/// Random vertex on its cycle leaves through each of its edges on the cycle.
pub fn is_random_fair(game: &StochasticGame, lasso: &Lasso) -> bool {
    let n = lasso.cycle.len();
    lasso.cycle.iter().all(|&v| {
        game.owner(v) != Owner::Random
            || game
                .successors(v)
                .iter()
                .all(|&w| (0..n).any(|j| lasso.cycle[j] == v && lasso.cycle[(j + 1) % n] == w))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g_ex, U, V, W};
    use std::collections::HashSet;

    /// First `len` letters of the infinite word.
    fn unroll(l: &Lasso, len: usize) -> Vec<VertexId> {
        l.prefix
            .iter()
            .copied()
            .chain(l.cycle.iter().copied().cycle())
            .take(len)
            .collect()
    }

    /// Independent recount: every vertex sequence of length <= k, every split,
    /// deduplicated by comparing long unrollings of the words.
    fn brute_force_words(
        game: &StochasticGame,
        from: &VertexSet,
        k: usize,
    ) -> HashSet<Vec<VertexId>> {
        let n = game.num_vertices();
        let horizon = k + k * k;
        let mut words = HashSet::new();
        for len in 1..=k {
            let total = n.pow(len as u32);
            for code in 0..total {
                let mut c = code;
                let seq: Vec<VertexId> = (0..len)
                    .map(|_| {
                        let v = VertexId(c % n);
                        c /= n;
                        v
                    })
                    .collect();
                for split in 0..len {
                    let l = Lasso::new(seq[..split].to_vec(), seq[split..].to_vec());
                    if from.contains(l.start()) && l.validate(game).is_ok() {
                        words.insert(unroll(&l, horizon));
                    }
                }
            }
        }
        words
    }

    #[test]
    fn self_loop_only_from_w() {
        let g = g_ex();
        let all = enumerate_lassos(&g, &g.set_of([W]), 1, LassoBudget::default()).unwrap();
        assert_eq!(all, vec![Lasso::new(vec![], vec![W])]);
    }

    #[test]
    fn two_cycle_from_u() {
        let g = g_ex();
        let all = enumerate_lassos(&g, &g.set_of([U]), 2, LassoBudget::default()).unwrap();
        assert!(all.contains(&Lasso::new(vec![], vec![U, V])));
    }

    #[test]
    fn count_matches_brute_force_recount() {
        let g = g_ex();
        for k in 1..=6 {
            let all = enumerate_lassos(&g, &g.full_set(), k, LassoBudget::default()).unwrap();
            let horizon = k + k * k;
            let distinct: HashSet<_> = all.iter().map(|l| unroll(l, horizon)).collect();
            assert_eq!(distinct.len(), all.len(), "duplicate words at k={k}");
            assert_eq!(distinct, brute_force_words(&g, &g.full_set(), k), "k={k}");
        }
        let k3 = enumerate_lassos(&g, &g.full_set(), 3, LassoBudget::default()).unwrap();
        assert_eq!(k3.len(), brute_force_words(&g, &g.full_set(), 3).len());
    }

    #[test]
    fn every_lasso_is_a_path() {
        let g = crate::fixtures::g_r();
        for l in enumerate_lassos(&g, &g.full_set(), 5, LassoBudget::default()).unwrap() {
            l.validate(&g).unwrap();
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = g_ex();
        let err =
            enumerate_lassos(&g, &g.full_set(), 6, LassoBudget { max_lassos: 3 }).unwrap_err();
        assert_eq!(err, BudgetError::TooManyLassos { limit: 3 });
    }

    #[test]
    fn primitive_cycles() {
        assert!(is_primitive(&[U]));
        assert!(is_primitive(&[U, V, U]));
        assert!(!is_primitive(&[U, V, U, V]));
        assert!(!is_primitive(&[W, W]));
    }

    #[test]
    fn fairness_requires_all_random_edges() {
        let g = crate::fixtures::g_r();
        use crate::fixtures::{R_V0, R_V1};
        assert!(!is_random_fair(&g, &Lasso::new(vec![], vec![R_V0, R_V1])));
        assert!(is_random_fair(
            &g,
            &Lasso::new(vec![R_V0], vec![crate::fixtures::R_W])
        ));
    }
}
