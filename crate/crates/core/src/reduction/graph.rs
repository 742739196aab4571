use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{domain, Error, Result};
use crate::linalg::{Matrix, Scalar};

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<bool>>,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Edgeless graph on `n >= 1` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain("graph needs at least one vertex"));
        }
        Ok(Self { n, adj: vec![vec![false; n]; n], edges: BTreeSet::new() })
    }

    /// Builds a graph from 0-based edges. Self-loops, out-of-range endpoints
    /// and repeated edges are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(domain(format!("edge ({}, {}) out of range for n = {}", u + 1, v + 1, self.n)));
        }
        if u == v {
            return Err(domain(format!("self-loop at vertex {}", u + 1)));
        }
        let key = (u.min(v), u.max(v));
        if !self.edges.insert(key) {
            return Err(domain(format!("duplicate edge ({}, {})", key.0 + 1, key.1 + 1)));
        }
        self.adj[u][v] = true;
        self.adj[v][u] = true;
        Ok(())
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(domain("a cycle needs at least three vertices"));
        }
        Self::from_edges(n, (0..n).map(|u| (u, (u + 1) % n)))
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Self::from_edges(10, outer.chain(spokes).chain(inner)).expect("petersen edges are valid")
    }

    /// Erdos-Renyi `G(n, p)`.
    pub fn gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                if rng.random::<f64>() < p {
                    g.add_edge(u, v)?;
                }
            }
        }
        Ok(g)
    }

    /// Graph whose edge set is selected by the bits of `mask`, enumerating
    /// the pairs `(u, v)`, `u < v`, in lexicographic order.
    pub fn from_edge_mask(n: usize, mask: u64) -> Result<Self> {
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::from_edges(n, pairs.enumerate().filter(|(bit, _)| mask >> bit & 1 == 1).map(|(_, e)| e))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as 0-based pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u][v]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.adj[u][v])
    }

    pub fn degree(&self, u: usize) -> usize {
        self.neighbors(u).count()
    }

    /// Symmetric zero-one adjacency matrix with zero diagonal.
    pub fn adjacency_matrix<T: Scalar>(&self) -> Matrix<T> {
        Matrix::from_fn(self.n, |u, v| if self.adj[u][v] { T::one() } else { T::zero() })
    }

    /// Checks that `set` (0-based) is independent; the error names the first
    /// offending edge with 1-based vertices.
    pub fn check_independent(&self, set: &[usize]) -> Result<()> {
        for (a, &u) in set.iter().enumerate() {
            if u >= self.n {
                return Err(domain(format!("vertex {} out of range", u + 1)));
            }
            if let Some(&v) = set[..a].iter().find(|&&v| v == u || self.adj[u][v]) {
                if v == u {
                    return Err(domain(format!("vertex {} listed twice", u + 1)));
                }
                return Err(Error::NotIndependent(v.min(u) + 1, v.max(u) + 1));
            }
        }
        Ok(())
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        self.check_independent(set).is_ok()
    }

    /// Parses the line-oriented DIMACS-like format: `c` comments, one
    /// `p edge <n> <m>` line, then `m` lines `e <u> <v>` with 1-based
    /// vertices.
    pub fn from_dimacs(text: &str) -> Result<Self> {
        let mut graph: Option<(Graph, usize)> = None;
        let mut seen = 0usize;
        for (lineno, line) in text.lines().enumerate() {
            let err = |msg: &str| Error::Parse(format!("line {}: {msg}", lineno + 1));
            let mut tok = line.split_whitespace();
            match tok.next() {
                None | Some("c") => continue,
                Some("p") => {
                    if graph.is_some() {
                        return Err(err("repeated problem line"));
                    }
                    if tok.next() != Some("edge") {
                        return Err(err("expected \"p edge <n> <m>\""));
                    }
                    let n: usize = tok.next().and_then(|t| t.parse().ok()).ok_or_else(|| err("bad vertex count"))?;
                    let m: usize = tok.next().and_then(|t| t.parse().ok()).ok_or_else(|| err("bad edge count"))?;
                    if tok.next().is_some() {
                        return Err(err("trailing tokens"));
                    }
                    graph = Some((Graph::empty(n).map_err(|_| err("vertex count must be positive"))?, m));
                }
                Some("e") => {
                    let (g, _) = graph.as_mut().ok_or_else(|| err("edge before problem line"))?;
                    let u: usize = tok.next().and_then(|t| t.parse().ok()).ok_or_else(|| err("bad endpoint"))?;
                    let v: usize = tok.next().and_then(|t| t.parse().ok()).ok_or_else(|| err("bad endpoint"))?;
                    if tok.next().is_some() {
                        return Err(err("trailing tokens"));
                    }
                    if u == 0 || v == 0 {
                        return Err(err("vertices are 1-based"));
                    }
                    g.add_edge(u - 1, v - 1).map_err(|e| err(&e.to_string()))?;
                    seen += 1;
                }
                Some(other) => return Err(err(&format!("unknown line type {other:?}"))),
            }
        }
        let (g, m) = graph.ok_or_else(|| Error::Parse("missing \"p edge\" line".into()))?;
        if seen != m {
            return Err(Error::Parse(format!("header declares {m} edges, found {seen}")));
        }
        Ok(g)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p edge {} {}\n", self.n, self.edges.len());
        for (u, v) in self.edges() {
            writeln!(out, "e {} {}", u + 1, v + 1).expect("writing to a String");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_round_trip() {
        let text = "c a comment\np edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n";
        let g = Graph::from_dimacs(text).unwrap();
        assert_eq!(g, Graph::cycle(5).unwrap());
        assert_eq!(Graph::from_dimacs(&g.to_dimacs()).unwrap(), g);
    }

    #[test]
    fn dimacs_errors() {
        for bad in [
            "",
            "e 1 2\n",
            "p edge 2 1\n",
            "p edge 2 1\ne 1 1\n",
            "p edge 2 2\ne 1 2\ne 2 1\n",
            "p edge 2 1\ne 1 3\n",
            "p edge 0 0\n",
            "p col 2 0\n",
            "p edge 2 0\nx\n",
            "p edge 2 1\ne 0 1\n",
        ] {
            assert!(Graph::from_dimacs(bad).is_err(), "{bad:?}");
        }
        assert_eq!(Graph::from_dimacs("p edge 2 0\n").unwrap().edge_count(), 0);
    }

    #[test]
    fn adjacency_is_symmetric_zero_one() {
        let c = Graph::petersen().adjacency_matrix::<f64>();
        assert!(c.is_symmetric(0.0));
        assert!((0..10).all(|i| c[(i, i)] == 0.0));
        assert!(c.as_slice().iter().all(|&x| x == 0.0 || x == 1.0));
        assert!((0..10).all(|u| Graph::petersen().degree(u) == 3));
    }

    #[test]
    fn independence_check() {
        let c5 = Graph::cycle(5).unwrap();
        assert!(c5.is_independent(&[0, 2]));
        assert!(matches!(c5.check_independent(&[0, 1]), Err(Error::NotIndependent(1, 2))));
        assert!(c5.check_independent(&[0, 0]).is_err());
        assert!(c5.check_independent(&[7]).is_err());
    }

    #[test]
    fn edge_mask_enumerates_pairs() {
        assert_eq!(Graph::from_edge_mask(3, 0b111).unwrap(), Graph::complete(3).unwrap());
        assert_eq!(Graph::from_edge_mask(3, 0b001).unwrap(), Graph::from_edges(3, [(0, 1)]).unwrap());
    }
}
