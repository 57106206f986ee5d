//! Simple undirected graphs over dense vertex indices and the distance
//! machinery used by the reduction rules and branching cases.
//!
//! Vertices are `0..vertex_count`. Adjacency is kept in ordered sets so that
//! every scan below visits candidates in increasing index order, which is what
//! makes "first match" selections lexicographic.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Marker for "no path" in a [`DistanceMatrix`].
pub const UNREACHABLE: u32 = u32::MAX;

/// Undirected edge stored as `(min, max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(usize, usize);

impl Edge {
    /// Panics on `u == v`; self-loops never name a valid edge.
    pub fn new(u: usize, v: usize) -> Self {
        assert_ne!(u, v, "an edge needs two distinct endpoints");
        if u < v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn lo(self) -> usize {
        self.0
    }

    pub fn hi(self) -> usize {
        self.1
    }

    pub fn endpoints(self) -> (usize, usize) {
        (self.0, self.1)
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.0, self.1)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<BTreeSet<usize>>,
    labels: Option<Vec<String>>,
}

impl Graph {
    pub fn new(vertex_count: usize) -> Self {
        Graph {
            adjacency: vec![BTreeSet::new(); vertex_count],
            labels: None,
        }
    }

    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(vertex_count);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Inserts `uv`; returns `false` if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let fresh = self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
        Ok(fresh)
    }

    pub fn remove_edge(&mut self, e: Edge) -> Result<()> {
        let (u, v) = e.endpoints();
        if v >= self.vertex_count() || !self.adjacency[u].remove(&v) {
            return Err(Error::MissingEdge(e));
        }
        self.adjacency[v].remove(&u);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.adjacency[u].contains(&v)
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.has_edge(e.lo(), e.hi())
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// All edges in increasing `(min, max)` order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.range(u + 1..).map(move |&v| Edge(u, v)))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn set_labels(&mut self, labels: Vec<String>) -> Result<()> {
        if labels.len() != self.vertex_count() {
            return Err(Error::InvalidSpec(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.vertex_count()
            )));
        }
        self.labels = Some(labels);
        Ok(())
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        self.set_labels(labels.into_iter().map(Into::into).collect())?;
        Ok(self)
    }

    /// External name of `v`: its label, or the 1-based index.
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => (v + 1).to_string(),
        }
    }

    /// Vertex index carrying `label`, if labels are present.
    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    /// Subgraph induced on `keep` (must be sorted ascending); vertex `keep[i]`
    /// becomes `i`, so relative index order is preserved.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Graph {
        let mut position = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            position[v] = i;
        }
        let adjacency = keep
            .iter()
            .map(|&v| {
                self.adjacency[v]
                    .iter()
                    .filter_map(|&u| (position[u] != usize::MAX).then_some(position[u]))
                    .collect()
            })
            .collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| keep.iter().map(|&v| l[v].clone()).collect());
        Graph { adjacency, labels }
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn distance_matrix(&self) -> DistanceMatrix {
        let n = self.vertex_count();
        let mut dist = vec![UNREACHABLE; n * n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let du = row[u];
                for &w in &self.adjacency[u] {
                    if row[w] == UNREACHABLE {
                        row[w] = du + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        DistanceMatrix { n, dist }
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                count: self.vertex_count(),
            })
        }
    }
}

/// All-pairs BFS distances.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
}

impl DistanceMatrix {
    /// Raw distance, [`UNREACHABLE`] when disconnected.
    #[inline]
    pub fn raw(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.n + v]
    }

    pub fn get(&self, u: usize, v: usize) -> Option<usize> {
        match self.raw(u, v) {
            UNREACHABLE => None,
            d => Some(d as usize),
        }
    }

    /// `d(u, v) > t`, treating disconnected pairs as infinitely far.
    #[inline]
    pub fn farther_than(&self, u: usize, v: usize, t: u32) -> bool {
        self.raw(u, v) > t
    }
}

/// An induced path `a-b-c-d` with `d(a, d) = 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ConflictQuadruple {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl ConflictQuadruple {
    pub fn reversed(self) -> Self {
        ConflictQuadruple {
            a: self.d,
            b: self.c,
            c: self.b,
            d: self.a,
        }
    }

    pub fn edges(self) -> [Edge; 3] {
        [
            Edge::new(self.a, self.b),
            Edge::new(self.b, self.c),
            Edge::new(self.c, self.d),
        ]
    }

    /// Checks the type invariants against `g`.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let ConflictQuadruple { a, b, c, d } = *self;
        let n = g.vertex_count();
        if a >= n || b >= n || c >= n || d >= n {
            return false;
        }
        g.has_edge(a, b)
            && g.has_edge(b, c)
            && g.has_edge(c, d)
            && !g.has_edge(a, c)
            && !g.has_edge(b, d)
            && !g.has_edge(a, d)
            && distances_from(g, a).map(|dist| dist[d] == Some(3)).unwrap_or(false)
    }
}

/// BFS distances from `source`; `None` marks unreachable vertices.
pub fn distances_from(g: &Graph, source: usize) -> Result<Vec<Option<usize>>> {
    g.check_vertex(source)?;
    let mut dist = vec![None; g.vertex_count()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    Ok(dist)
}

/// `N_t[v]` when `closed`, otherwise the vertices at distance exactly `t`.
pub fn neighborhood_within(g: &Graph, v: usize, t: usize, closed: bool) -> Result<BTreeSet<usize>> {
    let dist = distances_from(g, v)?;
    Ok(dist
        .iter()
        .enumerate()
        .filter_map(|(u, d)| match d {
            Some(d) if (closed && *d <= t) || (!closed && *d == t) => Some(u),
            _ => None,
        })
        .collect())
}

/// Each connected component with its diameter (0 for singletons).
pub fn component_diameters(g: &Graph) -> Vec<(Vec<usize>, usize)> {
    let dm = g.distance_matrix();
    g.components()
        .into_iter()
        .map(|comp| {
            let diameter = comp
                .iter()
                .flat_map(|&u| comp.iter().map(move |&v| (u, v)))
                .map(|(u, v)| dm.raw(u, v) as usize)
                .max()
                .unwrap_or(0);
            (comp, diameter)
        })
        .collect()
}

/// True iff every component has diameter at most two.
pub fn is_two_clubs_graph(g: &Graph) -> bool {
    let dm = g.distance_matrix();
    let n = g.vertex_count();
    (0..n).all(|u| (0..n).all(|v| dm.raw(u, v) <= 2 || dm.raw(u, v) == UNREACHABLE))
}

/// Lexicographically smallest conflict quadruple, if any.
pub fn find_conflict_quadruple(g: &Graph) -> Option<ConflictQuadruple> {
    let dm = g.distance_matrix();
    (0..g.vertex_count()).find_map(|a| first_quadruple_from(g, &dm, a))
}

fn first_quadruple_from(g: &Graph, dm: &DistanceMatrix, a: usize) -> Option<ConflictQuadruple> {
    for &b in g.neighbors(a) {
        for &c in g.neighbors(b) {
            if dm.raw(a, c) != 2 {
                continue;
            }
            if let Some(&d) = g.neighbors(c).iter().find(|&&d| dm.raw(a, d) == 3) {
                return Some(ConflictQuadruple { a, b, c, d });
            }
        }
    }
    None
}

/// Every conflict quadruple in lexicographic order. Each path shows up in
/// both orientations.
pub fn conflict_quadruples(g: &Graph, dm: &DistanceMatrix) -> Vec<ConflictQuadruple> {
    let mut out = Vec::new();
    for a in 0..g.vertex_count() {
        for &b in g.neighbors(a) {
            for &c in g.neighbors(b) {
                if dm.raw(a, c) != 2 {
                    continue;
                }
                for &d in g.neighbors(c) {
                    if dm.raw(a, d) == 3 {
                        out.push(ConflictQuadruple { a, b, c, d });
                    }
                }
            }
        }
    }
    out
}

/// Copy of `g` without `edges`. Fails if any edge is absent.
pub fn delete_edges<'a>(g: &Graph, edges: impl IntoIterator<Item = &'a Edge>) -> Result<Graph> {
    let mut out = g.clone();
    for &e in edges {
        out.remove_edge(e)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn path(n: usize) -> Graph {
        fixtures::path(n)
    }

    /// Floyd-Warshall, kept apart from the BFS code it checks.
    fn floyd(g: &Graph) -> Vec<Vec<Option<usize>>> {
        let n = g.vertex_count();
        let inf = usize::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 0;
        }
        for e in g.edges() {
            d[e.lo()][e.hi()] = 1;
            d[e.hi()][e.lo()] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        d.into_iter()
            .map(|row| row.into_iter().map(|x| (x < inf).then_some(x)).collect())
            .collect()
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut g = Graph::new(n);
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[k] {
                            g.add_edge(u, v).unwrap();
                        }
                        k += 1;
                    }
                }
                g
            })
        })
    }

    #[test]
    fn path_distances() {
        let d = distances_from(&path(4), 0).unwrap();
        assert_eq!(d, vec![Some(0), Some(1), Some(2), Some(3)]);
    }

    #[test]
    fn unreachable_component() {
        let g = Graph::from_edges(4, &[(1, 2), (2, 3)]).unwrap();
        let d = distances_from(&g, 0).unwrap();
        assert_eq!(d, vec![Some(0), None, None, None]);
    }

    #[test]
    fn out_of_range_source() {
        assert_eq!(
            distances_from(&path(3), 3),
            Err(Error::VertexOutOfRange { vertex: 3, count: 3 })
        );
    }

    #[test]
    fn gadget_distances_match_floyd() {
        let g = fixtures::liu_gadget();
        let t = g.vertex_by_label("t").unwrap();
        let y = g.vertex_by_label("y").unwrap();
        let d = distances_from(&g, t).unwrap();
        assert_eq!(d[y], Some(3));
        assert_eq!(d, floyd(&g)[t]);
    }

    #[test]
    fn neighborhoods() {
        let star = fixtures::star(4);
        let leaves: BTreeSet<usize> = (1..=4).collect();
        assert_eq!(neighborhood_within(&star, 0, 1, false).unwrap(), leaves);
        let mut closed = leaves.clone();
        closed.insert(0);
        assert_eq!(neighborhood_within(&star, 0, 1, true).unwrap(), closed);

        let p5 = path(5);
        assert_eq!(neighborhood_within(&p5, 0, 2, false).unwrap(), BTreeSet::from([2]));
        assert_eq!(neighborhood_within(&p5, 0, 2, true).unwrap(), BTreeSet::from([0, 1, 2]));

        let g = fixtures::liu_gadget();
        let id = |s: &str| g.vertex_by_label(s).unwrap();
        assert_eq!(
            neighborhood_within(&g, id("t"), 3, false).unwrap(),
            BTreeSet::from([id("y")])
        );
        let expect: BTreeSet<usize> = ["t", "u", "s", "v", "x", "w"].iter().map(|s| id(s)).collect();
        assert_eq!(neighborhood_within(&g, id("t"), 2, true).unwrap(), expect);
    }

    #[test]
    fn diameters() {
        assert_eq!(component_diameters(&fixtures::cycle(5)), vec![((0..5).collect(), 2)]);
        assert_eq!(component_diameters(&fixtures::cycle(6)), vec![((0..6).collect(), 3)]);
        let two = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(component_diameters(&two), vec![(vec![0, 1, 2], 1), (vec![3, 4, 5], 1)]);
        assert_eq!(component_diameters(&Graph::new(1)), vec![(vec![0], 0)]);
    }

    #[test]
    fn two_clubs_recognition() {
        // K3 + C5 + K1,4
        let mut edges = vec![(0, 1), (1, 2), (0, 2)];
        edges.extend((0..5).map(|i| (3 + i, 3 + (i + 1) % 5)));
        edges.extend((9..13).map(|i| (8, i)));
        let g = Graph::from_edges(13, &edges).unwrap();
        assert!(is_two_clubs_graph(&g));
        assert!(!is_two_clubs_graph(&path(4)));
        assert!(!is_two_clubs_graph(&fixtures::liu_gadget()));
    }

    #[test]
    fn canonical_quadruples() {
        assert_eq!(
            find_conflict_quadruple(&path(4)),
            Some(ConflictQuadruple { a: 0, b: 1, c: 2, d: 3 })
        );
        assert_eq!(find_conflict_quadruple(&fixtures::cycle(5)), None);
    }

    #[test]
    fn c6_quadruple_is_lexicographic_minimum() {
        let g = fixtures::cycle(6);
        // brute force over all 4-tuples
        let dm = g.distance_matrix();
        let mut all = Vec::new();
        for a in 0..6 {
            for b in 0..6 {
                for c in 0..6 {
                    for d in 0..6 {
                        if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(c, d) && dm.raw(a, d) == 3 {
                            all.push(ConflictQuadruple { a, b, c, d });
                        }
                    }
                }
            }
        }
        let best = all.into_iter().min();
        assert_eq!(best, Some(ConflictQuadruple { a: 0, b: 1, c: 2, d: 3 }));
        assert_eq!(find_conflict_quadruple(&g), best);
    }

    #[test]
    fn edge_deletion() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let p3 = delete_edges(&k3, &[Edge::new(0, 2)]).unwrap();
        assert_eq!(p3, path(3));
        assert_eq!(k3.edge_count(), 3);

        let g = fixtures::liu_gadget();
        let id = |s: &str| g.vertex_by_label(s).unwrap();
        let cut = [Edge::new(id("u"), id("t")), Edge::new(id("s"), id("w"))];
        let h = delete_edges(&g, &cut).unwrap();
        let comps = h.components();
        let ts: Vec<usize> = {
            let mut v = vec![id("t"), id("s")];
            v.sort();
            v
        };
        assert!(comps.contains(&ts));
        let mut cyc: Vec<usize> = ["u", "v", "y", "w", "x"].iter().map(|s| id(s)).collect();
        cyc.sort();
        assert!(comps.contains(&cyc));
        let five = h.induced_subgraph(&cyc);
        assert_eq!(five.edge_count(), 5);
        assert!((0..5).all(|v| five.degree(v) == 2));

        let p4 = path(4);
        let all: Vec<Edge> = p4.edges().collect();
        let empty = delete_edges(&p4, &all).unwrap();
        assert_eq!(empty.edge_count(), 0);
        assert_eq!(empty.vertex_count(), 4);

        assert_eq!(
            delete_edges(&p4, &[Edge::new(0, 3)]),
            Err(Error::MissingEdge(Edge::new(0, 3)))
        );
    }

    proptest! {
        #[test]
        fn open_radius_one_is_adjacency(g in arb_graph(8)) {
            for v in 0..g.vertex_count() {
                prop_assert_eq!(&neighborhood_within(&g, v, 1, false).unwrap(), g.neighbors(v));
            }
        }

        #[test]
        fn bfs_agrees_with_floyd(g in arb_graph(8)) {
            let fw = floyd(&g);
            for (v, row) in fw.iter().enumerate() {
                prop_assert_eq!(&distances_from(&g, v).unwrap(), row);
            }
        }

        #[test]
        fn three_way_two_club_agreement(g in arb_graph(9)) {
            let none = find_conflict_quadruple(&g).is_none();
            let clubs = is_two_clubs_graph(&g);
            let diam = component_diameters(&g).iter().all(|(_, d)| *d <= 2);
            prop_assert_eq!(none, clubs);
            prop_assert_eq!(clubs, diam);
            if let Some(q) = find_conflict_quadruple(&g) {
                prop_assert!(q.is_valid_in(&g));
            }
        }

        #[test]
        fn deletion_counts(g in arb_graph(8), mask in any::<u64>()) {
            let del: Vec<Edge> = g.edges().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, e)| e).collect();
            let h = delete_edges(&g, &del).unwrap();
            prop_assert_eq!(h.edge_count(), g.edge_count() - del.len());
            prop_assert_eq!(h.vertex_count(), g.vertex_count());
        }
    }
}
