//! Undirected simple graphs and their clique complexes.
//!
//! Vertices are 0-indexed in the Rust API. Text formats (edge lists, cochain
//! and matrix files, JSON reports) use 1-indexed vertex ids.
//!
//! The clique complex stores, for every order `s = 1, 2, ...`, the list of
//! `s`-cliques as strictly ascending vertex tuples, sorted lexicographically.
//! That ordering is the canonical basis for every cochain and operator matrix
//! built on top of the complex.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

/// A clique stored as a strictly ascending vertex tuple.
pub type Clique = Vec<usize>;

/// Default clique order: enough for Δ₀ and Δ₁ including the curl term.
pub const DEFAULT_MAX_ORDER: usize = 3;

/// Undirected simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from 0-indexed vertex pairs. Duplicate pairs (in either
    /// orientation) collapse to a single edge.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v + 1, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop {
                    line: 0,
                    vertex: a + 1,
                });
            }
            set.insert((a.min(b), a.max(b)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(i, j)` with `i < j`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbour list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && self.adj[a].binary_search(&b).is_ok()
    }

    /// Connected-component label of every vertex. Labels are assigned in
    /// order of each component's smallest vertex.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.n);
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        let mut root_label = vec![usize::MAX; self.n];
        let mut next = 0;
        (0..self.n)
            .map(|v| {
                let r = uf.find(v);
                if root_label[r] == usize::MAX {
                    root_label[r] = next;
                    next += 1;
                }
                root_label[r]
            })
            .collect()
    }

    pub fn n_components(&self) -> usize {
        self.component_labels()
            .into_iter()
            .max()
            .map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.n_components() <= 1
    }

    /// Same graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Invalid(format!(
                "permutation has length {}, graph has {} vertices",
                perm.len(),
                self.n
            )));
        }
        Graph::new(self.n, self.edges.iter().map(|&(a, b)| (perm[a], perm[b])))
    }

    /// Cycle graph C_n on vertices `0..n` (edges `i -- i+1` and `n-1 -- 0`).
    pub fn cycle(n: usize) -> Self {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle needs n >= 3")
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Graph::new(n, edges).expect("valid complete graph")
    }

    /// Wheel W_n: a cycle on the first `n - 1` vertices plus a hub `n - 1`
    /// joined to all of them.
    pub fn wheel(n: usize) -> Self {
        let rim = n - 1;
        let edges = (0..rim)
            .map(move |i| (i, (i + 1) % rim))
            .chain((0..rim).map(move |i| (i, rim)));
        Graph::new(n, edges).expect("wheel needs n >= 4")
    }

    /// Edge list in the text format accepted by [`parse_graph`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("p {} {}\n", self.n, self.edges.len());
        for &(a, b) in &self.edges {
            out.push_str(&format!("{} {}\n", a + 1, b + 1));
        }
        out
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Parses an edge-list document.
///
/// `#` starts a comment. An optional header `p <n> <m>` declares the vertex
/// count; otherwise it is the largest id seen. Every other non-blank line holds
/// two distinct positive (1-indexed) vertex ids. Duplicate edges collapse.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut declared = 0usize;
    let mut max_seen = 0usize;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] == "p" {
            if tokens.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "header must read `p <n_vertices> <n_edges>`".into(),
                });
            }
            declared = parse_uint(tokens[1], line_no)?;
            parse_uint(tokens[2], line_no)?;
            continue;
        }
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected two vertex ids, found {} tokens", tokens.len()),
            });
        }
        let a = parse_vertex(tokens[0], line_no)?;
        let b = parse_vertex(tokens[1], line_no)?;
        if a == b {
            return Err(Error::SelfLoop {
                line: line_no,
                vertex: a,
            });
        }
        max_seen = max_seen.max(a).max(b);
        edges.push((a - 1, b - 1));
    }
    Graph::new(declared.max(max_seen), edges)
}

fn parse_uint(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>().map_err(|_| Error::Parse {
        line,
        msg: format!("`{tok}` is not a non-negative integer"),
    })
}

fn parse_vertex(tok: &str, line: usize) -> Result<usize> {
    match parse_uint(tok, line)? {
        0 => Err(Error::Parse {
            line,
            msg: "vertex ids are 1-indexed; found 0".into(),
        }),
        v => Ok(v),
    }
}

/// Clique complex of a graph, enumerated up to a maximum clique order.
#[derive(Debug, Clone)]
pub struct CliqueComplex {
    graph: Graph,
    max_order: usize,
    /// `levels[s - 1]` holds the `s`-cliques.
    levels: Vec<Vec<Clique>>,
    /// Set when an empty level was reached, so every higher level is known
    /// to be empty as well.
    exhausted: bool,
}

/// Enumerates all cliques of `g` with at most `max_order` vertices.
///
/// Cliques are grown one vertex at a time: each `(s-1)`-clique is extended by
/// every larger common neighbour. Walking the `(s-1)`-cliques in lexicographic
/// order and extensions in ascending order yields the `s`-cliques in
/// lexicographic order without sorting. Pass `usize::MAX` to enumerate the
/// whole complex.
pub fn enumerate_cliques(g: &Graph, max_order: usize) -> Result<CliqueComplex> {
    if max_order == 0 {
        return Err(Error::Invalid("max_order must be at least 1".into()));
    }
    let mut levels: Vec<Vec<Clique>> = vec![(0..g.n_vertices()).map(|v| vec![v]).collect()];
    let mut exhausted = levels[0].is_empty();
    while !exhausted && levels.len() < max_order {
        let prev = levels.last().expect("at least one level");
        let mut next = Vec::new();
        for clique in prev {
            let last = *clique.last().expect("cliques are nonempty");
            let head = &clique[..clique.len() - 1];
            for &v in g.neighbors(last).iter().filter(|&&v| v > last) {
                if head.iter().all(|&u| g.has_edge(u, v)) {
                    let mut ext = clique.clone();
                    ext.push(v);
                    next.push(ext);
                }
            }
        }
        exhausted = next.is_empty();
        levels.push(next);
    }
    Ok(CliqueComplex {
        graph: g.clone(),
        max_order,
        levels,
        exhausted,
    })
}

/// Enumerates the full clique complex (every order up to the clique number,
/// plus the first empty level).
pub fn full_complex(g: &Graph) -> CliqueComplex {
    enumerate_cliques(g, usize::MAX).expect("max_order is positive")
}

impl CliqueComplex {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// The requested maximum clique order.
    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Number of levels actually stored (orders `1..=n_levels()`).
    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    /// The `order`-cliques, if that level is known: either enumerated or
    /// implied empty by an empty lower level.
    pub fn cliques(&self, order: usize) -> Option<&[Clique]> {
        if order == 0 {
            return None;
        }
        match self.levels.get(order - 1) {
            Some(level) => Some(level.as_slice()),
            None if self.exhausted => Some(&[]),
            None => None,
        }
    }

    /// Like [`cliques`](Self::cliques) but errors when the level is unknown.
    pub fn level(&self, order: usize) -> Result<&[Clique]> {
        self.cliques(order)
            .ok_or(Error::LevelNotEnumerated { order })
    }

    /// Number of `order`-cliques, or `None` when the level is unknown.
    pub fn count(&self, order: usize) -> Option<usize> {
        self.cliques(order).map(<[Clique]>::len)
    }

    /// Dimension of the space of `degree`-cochains (number of
    /// `(degree + 1)`-cliques).
    pub fn cochain_dim(&self, degree: usize) -> Result<usize> {
        self.level(degree + 1).map(<[Clique]>::len)
    }

    /// Position of an ascending clique within its level.
    pub fn index_of(&self, clique: &[usize]) -> Option<usize> {
        let level = self.cliques(clique.len())?;
        level.binary_search_by(|c| c.as_slice().cmp(clique)).ok()
    }

    /// Clique number ω(G), known once enumeration has reached an empty level.
    pub fn clique_number(&self) -> Option<usize> {
        if !self.exhausted {
            return None;
        }
        Some(self.levels.iter().take_while(|l| !l.is_empty()).count())
    }

    /// Sizes of the stored levels, `counts()[s - 1] = #K_s`.
    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// JSON-friendly summary with 1-indexed vertex ids.
    pub fn summary(&self) -> ComplexSummary {
        ComplexSummary {
            n_vertices: self.graph.n_vertices(),
            n_edges: self.graph.n_edges(),
            max_order: if self.max_order == usize::MAX {
                None
            } else {
                Some(self.max_order)
            },
            clique_number: self.clique_number(),
            counts: self.counts(),
            cliques: self
                .levels
                .iter()
                .map(|l| {
                    l.iter()
                        .map(|c| c.iter().map(|v| v + 1).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplexSummary {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub max_order: Option<usize>,
    pub clique_number: Option<usize>,
    pub counts: Vec<usize>,
    pub cliques: Vec<Vec<Vec<usize>>>,
}
