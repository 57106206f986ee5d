//! Ground-truth solvers. Both work on a private `u64` bitset adjacency so
//! that they share no distance or quadruple code with the main solver.
//!
//! - [`opt_bruteforce`] tries every edge subset by increasing size.
//! - [`solve_3k`] is the plain three-way branching on conflict quadruples,
//!   without any reduction rule or case analysis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::reduction::Instance;

#[derive(Clone)]
struct BitGraph {
    adj: Vec<u64>,
}

impl BitGraph {
    fn new(g: &Graph) -> Result<Self> {
        let n = g.vertex_count();
        if n > 64 {
            return Err(Error::TooLarge(n));
        }
        let mut adj = vec![0u64; n];
        for e in g.edges() {
            adj[e.lo()] |= 1 << e.hi();
            adj[e.hi()] |= 1 << e.lo();
        }
        Ok(BitGraph { adj })
    }

    fn toggle(&mut self, e: Edge) {
        self.adj[e.lo()] ^= 1 << e.hi();
        self.adj[e.hi()] ^= 1 << e.lo();
    }

    fn expand(&self, set: u64) -> u64 {
        let mut out = set;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= self.adj[v];
        }
        out
    }

    /// Some `(v, far)` with `far` exactly three steps from `v`.
    fn distance_three_pair(&self) -> Option<(usize, usize)> {
        for v in 0..self.adj.len() {
            let ball2 = self.expand(self.adj[v] | 1 << v);
            let ball3 = self.expand(ball2);
            let ring = ball3 & !ball2;
            if ring != 0 {
                return Some((v, ring.trailing_zeros() as usize));
            }
        }
        None
    }

    fn is_two_clubs(&self) -> bool {
        self.distance_three_pair().is_none()
    }

    /// A path `a-b-c-d` between a distance-three pair.
    fn conflict(&self) -> Option<[usize; 4]> {
        let (a, d) = self.distance_three_pair()?;
        let near_a = self.adj[a];
        let near_d = self.adj[d];
        for b in bits(near_a) {
            if let Some(c) = bits(self.adj[b] & near_d).next() {
                return Some([a, b, c, d]);
            }
        }
        unreachable!("distance-three pair without a connecting path")
    }
}

fn bits(mut set: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            None
        } else {
            let v = set.trailing_zeros() as usize;
            set &= set - 1;
            Some(v)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    /// `None` when no solution of size at most `cap` exists.
    pub opt: Option<usize>,
    pub witness: Option<Vec<Edge>>,
    pub subsets_examined: u64,
}

/// Minimum solution by exhaustive search over edge subsets of size
/// `0..=cap`, each size in lexicographic order of sorted edge positions.
pub fn opt_bruteforce(g: &Graph, cap: usize) -> Result<OracleResult> {
    let base = BitGraph::new(g)?;
    let edges: Vec<Edge> = g.edges().collect();
    let m = edges.len();
    let mut examined = 0u64;
    for size in 0..=cap.min(m) {
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            examined += 1;
            let mut h = base.clone();
            for &i in &pick {
                h.toggle(edges[i]);
            }
            if h.is_two_clubs() {
                return Ok(OracleResult {
                    opt: Some(size),
                    witness: Some(pick.iter().map(|&i| edges[i]).collect()),
                    subsets_examined: examined,
                });
            }
            if !next_combination(&mut pick, m) {
                break;
            }
        }
    }
    Ok(OracleResult {
        opt: None,
        witness: None,
        subsets_examined: examined,
    })
}

fn next_combination(pick: &mut [usize], m: usize) -> bool {
    let k = pick.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if pick[i] < m - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Decision by naive three-way branching: resolve some conflict quadruple by
/// deleting one of its three edges. Returns a witness on yes.
pub fn solve_3k(inst: &Instance) -> Result<Option<Vec<Edge>>> {
    let mut g = BitGraph::new(&inst.graph)?;
    let mut trail = Vec::new();
    Ok(branch3(&mut g, inst.budget, &mut trail).then(|| trail.into_iter().map(|e| inst.original_edge(e)).collect()))
}

fn branch3(g: &mut BitGraph, budget: i64, trail: &mut Vec<Edge>) -> bool {
    let Some([a, b, c, d]) = g.conflict() else {
        return budget >= 0;
    };
    if budget <= 0 {
        return false;
    }
    for e in [Edge::new(a, b), Edge::new(b, c), Edge::new(c, d)] {
        g.toggle(e);
        trail.push(e);
        if branch3(g, budget - 1, trail) {
            return true;
        }
        trail.pop();
        g.toggle(e);
    }
    false
}

/// Optimum by iterative deepening over [`solve_3k`]; `None` past `cap`.
pub fn opt_3k(g: &Graph, cap: usize) -> Result<Option<usize>> {
    for k in 0..=cap {
        if solve_3k(&Instance::new(g.clone(), k as i64))?.is_some() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Optimum with no cap; deleting every edge always works.
pub fn opt(g: &Graph) -> usize {
    opt_3k(g, g.edge_count())
        .expect("graph fits the bitset oracle")
        .expect("deleting all edges is a solution")
}

/// Independent 2-clubs test on the bitset representation.
pub fn is_two_clubs(g: &Graph) -> Result<bool> {
    Ok(BitGraph::new(g)?.is_two_clubs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::delete_edges;

    #[test]
    fn small_optima() {
        assert_eq!(opt_bruteforce(&fixtures::path(4), 3).unwrap().opt, Some(1));
        assert_eq!(opt_bruteforce(&fixtures::cycle(6), 6).unwrap().opt, Some(2));
        assert_eq!(opt_bruteforce(&fixtures::cycle(7), 7).unwrap().opt, Some(3));
        assert_eq!(opt_bruteforce(&Graph::new(0), 0).unwrap().opt, Some(0));
    }

    #[test]
    fn cycle_closed_form_for_both_oracles() {
        for n in 6..=12 {
            let g = fixtures::cycle(n);
            let expect = n.div_ceil(3);
            assert_eq!(opt_bruteforce(&g, n).unwrap().opt, Some(expect), "C{n}");
            assert_eq!(opt_3k(&g, n).unwrap(), Some(expect), "C{n}");
        }
    }

    #[test]
    fn gadget_optimum_and_witness() {
        let g = fixtures::liu_gadget();
        let res = opt_bruteforce(&g, 8).unwrap();
        assert_eq!(res.opt, Some(2));
        let w = res.witness.unwrap();
        assert!(is_two_clubs(&delete_edges(&g, &w).unwrap()).unwrap());
        assert_eq!(opt_3k(&g, 8).unwrap(), Some(2));

        let id = |s: &str| g.vertex_by_label(s).unwrap();
        let cert = [Edge::new(id("u"), id("t")), Edge::new(id("s"), id("w"))];
        assert!(is_two_clubs(&delete_edges(&g, &cert).unwrap()).unwrap());
    }

    #[test]
    fn cap_is_respected() {
        let res = opt_bruteforce(&fixtures::cycle(6), 1).unwrap();
        assert_eq!(res.opt, None);
        assert_eq!(res.subsets_examined, 1 + 6);
    }

    #[test]
    fn three_way_decisions() {
        assert!(solve_3k(&Instance::new(fixtures::path(4), 1)).unwrap().is_some());
        assert!(solve_3k(&Instance::new(fixtures::cycle(6), 1)).unwrap().is_none());
        assert_eq!(solve_3k(&Instance::new(Graph::new(0), 0)).unwrap(), Some(vec![]));
    }

    #[test]
    fn witness_minimality_spot_check() {
        for g in [fixtures::cycle(7), fixtures::liu_gadget(), fixtures::path(8)] {
            let res = opt_bruteforce(&g, g.edge_count()).unwrap();
            let opt = res.opt.unwrap();
            assert!(opt <= 3);
            if opt > 0 {
                assert_eq!(opt_bruteforce(&g, opt - 1).unwrap().opt, None);
            }
        }
    }

    #[test]
    fn too_large_graph_is_rejected() {
        assert_eq!(opt_bruteforce(&Graph::new(65), 0).unwrap_err(), Error::TooLarge(65));
    }
}
