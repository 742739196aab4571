use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::reduction::Graph;

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Exact maximum independent set with the branch-and-bound node count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependentSetResult {
    pub alpha: usize,
    /// 0-based, ascending.
    pub witness: Vec<usize>,
    pub node_count: u64,
}

struct Search<'a> {
    nbr: &'a [u64],
    best: u64,
    best_size: u32,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn run(&mut self, mut cand: u64, mut chosen: u64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        // Vertices of degree <= 1 among the candidates belong to some
        // maximum independent set of the remaining graph; take them greedily.
        loop {
            let forced = bits(cand).find(|&v| (self.nbr[v] & cand).count_ones() <= 1);
            match forced {
                Some(v) => {
                    chosen |= 1 << v;
                    cand &= !(self.nbr[v] | 1 << v);
                }
                None => break,
            }
        }
        let size = chosen.count_ones();
        if cand == 0 {
            if size > self.best_size {
                self.best = chosen;
                self.best_size = size;
            }
            return Ok(());
        }
        if size + cand.count_ones() <= self.best_size {
            return Ok(());
        }
        let v = bits(cand).max_by_key(|&v| ((self.nbr[v] & cand).count_ones(), std::cmp::Reverse(v))).expect("cand nonempty");
        self.run(cand & !(self.nbr[v] | 1 << v), chosen | 1 << v)?;
        self.run(cand & !(1 << v), chosen)
    }
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

pub fn max_independent_set(g: &Graph) -> Result<IndependentSetResult> {
    max_independent_set_with_budget(g, DEFAULT_NODE_BUDGET)
}

/// Branch and bound on vertex inclusion. Branches on a vertex of maximum
/// degree among the remaining candidates and prunes when the chosen set
/// plus every remaining candidate cannot beat the incumbent.
pub fn max_independent_set_with_budget(g: &Graph, budget: u64) -> Result<IndependentSetResult> {
    let n = g.vertex_count();
    if n > 64 {
        return Err(domain(format!("exhaustive search supports n <= 64, got {n}")));
    }
    let nbr: Vec<u64> = (0..n).map(|u| g.neighbors(u).fold(0u64, |m, v| m | 1 << v)).collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut s = Search { nbr: &nbr, best: 0, best_size: 0, nodes: 0, budget };
    s.run(all, 0)?;
    Ok(IndependentSetResult { alpha: s.best_size as usize, witness: bits(s.best).collect(), node_count: s.nodes })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Enumerates all 2^n subsets.
    fn brute_alpha(g: &Graph) -> usize {
        let n = g.vertex_count();
        (0u32..1 << n)
            .filter(|&mask| g.is_independent(&bits(mask as u64).collect::<Vec<_>>()))
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn named_graphs() {
        assert_eq!(max_independent_set(&Graph::empty(5).unwrap()).unwrap().alpha, 5);
        assert_eq!(max_independent_set(&Graph::complete(4).unwrap()).unwrap().alpha, 1);
        assert_eq!(max_independent_set(&Graph::cycle(5).unwrap()).unwrap().alpha, 2);
        assert_eq!(max_independent_set(&Graph::petersen()).unwrap().alpha, 4);
        // frozen from the subset enumeration above
        assert_eq!(brute_alpha(&Graph::cycle(5).unwrap()), 2);
        assert_eq!(brute_alpha(&Graph::petersen()), 4);
    }

    #[test]
    fn witness_is_independent_and_maximum() {
        for mask in 0u64..1 << 10 {
            let g = Graph::from_edge_mask(5, mask).unwrap();
            let r = max_independent_set(&g).unwrap();
            assert!(g.is_independent(&r.witness));
            assert_eq!(r.witness.len(), r.alpha);
            assert_eq!(r.alpha, brute_alpha(&g), "mask {mask:b}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = Graph::cycle(30).unwrap();
        assert!(matches!(max_independent_set_with_budget(&g, 1), Err(Error::BudgetExceeded(1))));
        assert_eq!(max_independent_set(&g).unwrap().alpha, 15);
    }

    #[test]
    fn deterministic() {
        let g = Graph::petersen();
        assert_eq!(max_independent_set(&g).unwrap(), max_independent_set(&g).unwrap());
    }
}
