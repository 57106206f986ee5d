//! Named small graphs: paths, cycles, stars, and the gadgets each branching
//! case and reduction rule is drawn around.
//!
//! Role-labelled gadgets list their vertices so that `a, b, c, d` get the
//! smallest indices; the lexicographically first conflict quadruple is then
//! `(a, b, c, d)`.

use crate::graph::Graph;

fn labelled(names: &[&str], edges: &[(&str, &str)]) -> Graph {
    let idx = |s: &str| names.iter().position(|n| *n == s).expect("unknown role");
    let pairs: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (idx(u), idx(v))).collect();
    Graph::from_edges(names.len(), &pairs)
        .and_then(|g| g.with_labels(names.iter().copied()))
        .expect("fixture is well formed")
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Centre 0 with `leaves` pendant neighbours.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..=leaves).map(|i| (0, i)).collect();
    Graph::from_edges(leaves + 1, &edges).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

/// Liu et al.'s Case 2.2.4 picture: vertices `v,u,t,s,x,w,y`.
pub fn liu_gadget() -> Graph {
    labelled(
        &["v", "u", "t", "s", "x", "w", "y"],
        &[
            ("t", "s"),
            ("u", "t"),
            ("v", "u"),
            ("s", "w"),
            ("u", "x"),
            ("x", "w"),
            ("v", "y"),
            ("y", "w"),
        ],
    )
}

/// Two pendants `x, y` on `a` and the 3-tail `a-b-c-d`.
pub fn three_tail() -> Graph {
    labelled(
        &["a", "b", "c", "d", "x", "y"],
        &[("a", "b"), ("b", "c"), ("c", "d"), ("a", "x"), ("a", "y")],
    )
}

/// Path `v1..v5` with a pendant `p` on `v3`.
pub fn p5_with_pendant() -> Graph {
    labelled(
        &["v1", "v2", "v3", "v4", "v5", "p"],
        &[("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v5"), ("v3", "p")],
    )
}

/// Bull: triangle `b,c,z` with pendants `a` on `b` and `d` on `c`. Its only
/// conflict quadruple has two pendant endpoints.
pub fn bull() -> Graph {
    labelled(
        &["a", "b", "c", "d", "z"],
        &[("a", "b"), ("b", "c"), ("c", "d"), ("b", "z"), ("c", "z")],
    )
}

/// `b` and `d` share a second neighbour `w`.
pub fn common_neighbor_gadget() -> Graph {
    labelled(
        &["a", "b", "c", "d", "w"],
        &[("a", "b"), ("b", "c"), ("c", "d"), ("b", "w"), ("w", "d")],
    )
}

/// Induced `b-x-y-d` alongside `a-b-c-d`, with `d(a, y) = 3`.
pub fn distance_three_gadget() -> Graph {
    labelled(
        &["a", "b", "c", "d", "x", "y"],
        &[("a", "b"), ("b", "c"), ("c", "d"), ("b", "x"), ("x", "y"), ("y", "d")],
    )
}

/// `d(a, y) = 2` through `v`, with `w` joining `v` and `c` (`w != b`).
pub fn separate_w_gadget() -> Graph {
    labelled(
        &["a", "b", "c", "d", "v", "w", "x", "y"],
        &[
            ("a", "b"),
            ("b", "c"),
            ("c", "d"),
            ("b", "x"),
            ("x", "y"),
            ("y", "d"),
            ("a", "v"),
            ("v", "w"),
            ("w", "c"),
            ("v", "y"),
        ],
    )
}

/// As [`separate_w_gadget`] but `v` is adjacent to `b` (`w = b`).
pub fn shared_w_gadget() -> Graph {
    labelled(
        &["a", "b", "c", "d", "v", "x", "y"],
        &[
            ("a", "b"),
            ("b", "c"),
            ("c", "d"),
            ("b", "x"),
            ("x", "y"),
            ("y", "d"),
            ("a", "v"),
            ("v", "b"),
            ("v", "y"),
        ],
    )
}
