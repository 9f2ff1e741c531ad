//! Undirected edge-weighted graphs with optional vertex weights, plus the
//! connectivity and shortest-path primitives the rest of the crate builds on.
//!
//! Vertices are dense identifiers `0..n`. Edge lengths and vertex weights are
//! non-negative `f64`; comparisons that need equality use [`EPS`].

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Absolute tolerance for distance comparisons.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    /// Smaller endpoint.
    pub u: usize,
    /// Larger endpoint.
    pub v: usize,
    pub length: f64,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, usize)>>,
    weights: Vec<f64>,
    index: HashMap<(usize, usize), usize>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges && self.weights == other.weights
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices with unit vertex weights.
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            weights: vec![1.0; n],
            index: HashMap::new(),
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut g = Graph::new(n);
        for (u, v, length) in edges {
            g.add_edge(u, v, length)?;
        }
        Ok(g)
    }

    /// Unit-length convenience constructor.
    pub fn from_unit_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    /// Adds `{u, v}` and returns its edge id.
    pub fn add_edge(&mut self, u: usize, v: usize, length: f64) -> Result<usize> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !length.is_finite() || length < 0.0 {
            return Err(Error::NegativeLength { u, v, length });
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        if self.index.contains_key(&(a, b)) {
            return Err(Error::DuplicateEdge(a, b));
        }
        let id = self.edges.len();
        self.edges.push(Edge { u: a, v: b, length });
        self.adj[a].push((b, id));
        self.adj[b].push((a, id));
        self.index.insert((a, b), id);
        Ok(id)
    }

    pub fn set_weights(&mut self, weights: Vec<f64>) -> Result<()> {
        if weights.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "expected {} weights, got {}",
                self.n,
                weights.len()
            )));
        }
        if let Some((vertex, &weight)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(Error::NegativeWeight { vertex, weight });
        }
        self.weights = weights;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    /// `(neighbor, edge id)` pairs in insertion order.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.index.get(&key).copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_between(u, v).is_some()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn has_unit_weights(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    /// Subgraph induced by the vertices with `keep[v]`, relabelled densely.
    /// Returns the subgraph and the map from new to old identifiers.
    pub fn induced_subgraph(&self, keep: &[bool]) -> (Graph, Vec<usize>) {
        let old_of: Vec<usize> = (0..self.n).filter(|&v| keep[v]).collect();
        let mut new_of = vec![usize::MAX; self.n];
        for (i, &v) in old_of.iter().enumerate() {
            new_of[v] = i;
        }
        let mut sub = Graph::new(old_of.len());
        sub.weights = old_of.iter().map(|&v| self.weights[v]).collect();
        for e in &self.edges {
            if keep[e.u] && keep[e.v] {
                sub.add_edge(new_of[e.u], new_of[e.v], e.length)
                    .expect("induced edges are valid");
            }
        }
        (sub, old_of)
    }

    /// Same vertex set, keeping only the listed edge ids (in ascending order).
    pub fn edge_subgraph(&self, edge_ids: &[usize]) -> Graph {
        let mut ids = edge_ids.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let mut sub = Graph::new(self.n);
        sub.weights = self.weights.clone();
        for id in ids {
            let e = self.edges[id];
            sub.add_edge(e.u, e.v, e.length).expect("edge of a valid graph");
        }
        sub
    }

    /// Serializes to the text graph format read by [`parse_graph`]. The weight
    /// section is omitted when all weights are 1.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.m());
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, e.length);
        }
        if !self.has_unit_weights() {
            out.push_str("weights\n");
            for (v, w) in self.weights.iter().enumerate() {
                let _ = writeln!(out, "{v} {w}");
            }
        }
        out
    }
}

/// Parses the line-oriented graph format: a header `n m`, then `m` lines
/// `u v length`, then optionally a `weights` line followed by `n` lines
/// `v w`. `#` starts a comment; blank lines are ignored.
pub fn parse_graph(text: &[u8]) -> Result<Graph> {
    let text = std::str::from_utf8(text).map_err(|e| Error::Syntax {
        line: 0,
        message: format!("input is not UTF-8: {e}"),
    })?;
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let syntax = |line: usize, message: String| Error::Syntax { line, message };

    let (hline, header) = lines
        .next()
        .ok_or_else(|| syntax(1, "missing header `n m`".into()))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(syntax(hline, format!("expected `n m`, found `{header}`")));
    }
    let n: usize = parse_field(head[0], hline, "vertex count")?;
    let m: usize = parse_field(head[1], hline, "edge count")?;

    let mut g = Graph::new(n);
    for k in 0..m {
        let (lno, line) = lines
            .next()
            .ok_or_else(|| syntax(hline, format!("expected {m} edges, found {k}")))?;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(syntax(lno, format!("expected `u v length`, found `{line}`")));
        }
        let u: usize = parse_field(f[0], lno, "vertex")?;
        let v: usize = parse_field(f[1], lno, "vertex")?;
        let len: f64 = parse_field(f[2], lno, "length")?;
        g.add_edge(u, v, len).map_err(|e| match e {
            Error::NegativeLength { .. } | Error::DuplicateEdge(..) => e,
            other => syntax(lno, other.to_string()),
        })?;
    }

    if let Some((lno, line)) = lines.next() {
        if line != "weights" {
            return Err(syntax(lno, format!("unexpected trailing content `{line}`")));
        }
        let mut weights = vec![f64::NAN; n];
        for k in 0..n {
            let (wl, wline) = lines
                .next()
                .ok_or_else(|| syntax(lno, format!("expected {n} weights, found {k}")))?;
            let f: Vec<&str> = wline.split_whitespace().collect();
            if f.len() != 2 {
                return Err(syntax(wl, format!("expected `v w`, found `{wline}`")));
            }
            let v: usize = parse_field(f[0], wl, "vertex")?;
            let w: f64 = parse_field(f[1], wl, "weight")?;
            if v >= n {
                return Err(syntax(wl, format!("vertex {v} out of range")));
            }
            if !weights[v].is_nan() {
                return Err(syntax(wl, format!("weight for vertex {v} given twice")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::NegativeWeight { vertex: v, weight: w });
            }
            weights[v] = w;
        }
        g.set_weights(weights)?;
        if let Some((extra, line)) = lines.next() {
            return Err(syntax(extra, format!("unexpected trailing content `{line}`")));
        }
    }
    Ok(g)
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Syntax {
        line,
        message: format!("invalid {what} `{s}`"),
    })
}

/// Labels each vertex not in `removed` with a component index; removed
/// vertices get `None`. Components are numbered in order of their smallest
/// vertex.
pub fn component_labels(g: &Graph, removed: &[bool]) -> (Vec<Option<usize>>, usize) {
    let mut label = vec![None; g.n()];
    let mut count = 0;
    let mut stack = Vec::new();
    for s in 0..g.n() {
        if removed[s] || label[s].is_some() {
            continue;
        }
        label[s] = Some(count);
        stack.push(s);
        while let Some(x) = stack.pop() {
            for &(y, _) in g.neighbors(x) {
                if !removed[y] && label[y].is_none() {
                    label[y] = Some(count);
                    stack.push(y);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

/// Components of `G` minus the `removed` vertices, each sorted, ordered by
/// smallest member.
pub fn components_without(g: &Graph, removed: &[bool]) -> Vec<Vec<usize>> {
    let (label, count) = component_labels(g, removed);
    let mut parts = vec![Vec::new(); count];
    for (v, l) in label.iter().enumerate() {
        if let Some(c) = l {
            parts[*c].push(v);
        }
    }
    parts
}

pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    components_without(g, &vec![false; g.n()])
}

pub fn is_connected(g: &Graph) -> bool {
    g.n() <= 1 || connected_components(g).len() == 1
}

#[derive(Clone, Copy, PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (dist, vertex)
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra from `source`; returns distances (`+inf` when unreachable) and
/// the settle order.
fn dijkstra(g: &Graph, source: usize) -> (Vec<f64>, Vec<usize>) {
    let mut dist = vec![f64::INFINITY; g.n()];
    let mut done = vec![false; g.n()];
    let mut order = Vec::with_capacity(g.n());
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapItem(0.0, source));
    while let Some(HeapItem(d, x)) = heap.pop() {
        if done[x] || d > dist[x] {
            continue;
        }
        done[x] = true;
        order.push(x);
        for &(y, id) in g.neighbors(x) {
            let nd = d + g.edge(id).length;
            if nd < dist[y] {
                dist[y] = nd;
                heap.push(HeapItem(nd, y));
            }
        }
    }
    (dist, order)
}

pub fn single_source_distances(g: &Graph, source: usize) -> Vec<f64> {
    dijkstra(g, source).0
}

/// Shortest-path tree rooted at `root`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootedSPTree {
    root: usize,
    parent: Vec<usize>,
    dist: Vec<f64>,
    children: Vec<Vec<usize>>,
}

impl RootedSPTree {
    pub fn root(&self) -> usize {
        self.root
    }

    /// The root is its own parent.
    pub fn parent(&self, v: usize) -> usize {
        self.parent[v]
    }

    pub fn parents(&self) -> &[usize] {
        &self.parent
    }

    pub fn dist(&self, v: usize) -> f64 {
        self.dist[v]
    }

    pub fn distances(&self) -> &[f64] {
        &self.dist
    }

    /// Children in increasing identifier order.
    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    /// Builds a tree from an explicit parent array (root maps to itself).
    /// Distances are depths under unit lengths; meant for tree-only callers
    /// such as the caterpillar decomposition.
    pub fn from_parents(root: usize, parent: Vec<usize>) -> Result<Self> {
        let n = parent.len();
        if root >= n || parent[root] != root {
            return Err(Error::InvalidRoot { root, n });
        }
        let mut children = vec![Vec::new(); n];
        for (v, &p) in parent.iter().enumerate() {
            if p >= n {
                return Err(Error::VertexOutOfRange { vertex: p, n });
            }
            if v != root {
                children[p].push(v);
            }
        }
        let mut dist = vec![f64::NAN; n];
        dist[root] = 0.0;
        let mut stack = vec![root];
        let mut seen = 1;
        while let Some(x) = stack.pop() {
            for &c in &children[x] {
                dist[c] = dist[x] + 1.0;
                seen += 1;
                stack.push(c);
            }
        }
        if seen != n {
            return Err(Error::InvalidParameter(
                "parent array does not form a tree".into(),
            ));
        }
        Ok(RootedSPTree {
            root,
            parent,
            dist,
            children,
        })
    }
}

/// Shortest-path tree of a connected graph. Among equally short parents the
/// smallest identifier settled earlier wins, so the tree is deterministic.
pub fn shortest_path_tree(g: &Graph, root: usize) -> Result<RootedSPTree> {
    if root >= g.n() {
        return Err(Error::InvalidRoot { root, n: g.n() });
    }
    let (dist, order) = dijkstra(g, root);
    if order.len() != g.n() {
        return Err(Error::Disconnected);
    }
    let mut rank = vec![0usize; g.n()];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let mut parent = vec![root; g.n()];
    let mut children = vec![Vec::new(); g.n()];
    for &v in order.iter().skip(1) {
        let p = g
            .neighbors(v)
            .iter()
            .filter(|&&(u, id)| {
                rank[u] < rank[v] && (dist[u] + g.edge(id).length - dist[v]).abs() <= EPS
            })
            .map(|&(u, _)| u)
            .min()
            .expect("a settled vertex has a tight predecessor");
        parent[v] = p;
        children[p].push(v);
    }
    for c in &mut children {
        c.sort_unstable();
    }
    Ok(RootedSPTree {
        root,
        parent,
        dist,
        children,
    })
}

/// Dense symmetric distance matrix; `+inf` across components.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.d[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[f64] {
        &self.d[u * self.n..(u + 1) * self.n]
    }
}

/// Exact all-pairs distances by one Dijkstra run per source. Sources run in
/// parallel; rows are assembled in source order.
pub fn all_pairs_distances(g: &Graph) -> DistanceMatrix {
    let rows: Vec<Vec<f64>> = (0..g.n())
        .into_par_iter()
        .map(|s| single_source_distances(g, s))
        .collect();
    DistanceMatrix {
        n: g.n(),
        d: rows.concat(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_unit_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn parses_path_graph() {
        let g = parse_graph(b"3 2\n0 1 1.0\n1 2 2.0").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
        assert_eq!(g.edge(1).length, 2.0);
        assert!(g.has_unit_weights());
    }

    #[test]
    fn rejects_negative_length() {
        assert!(matches!(
            parse_graph(b"2 1\n0 1 -1"),
            Err(Error::NegativeLength { .. })
        ));
    }

    #[test]
    fn parses_single_vertex() {
        let g = parse_graph(b"1 0").unwrap();
        assert_eq!((g.n(), g.m()), (1, 0));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_graph(b"# header next\n3 2\n0 1 1\n\n0 x 1\n").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 5,
                message: "invalid vertex `x`".into()
            }
        );
        assert!(matches!(
            parse_graph(b"3 2\n0 1 1\n1 0 2"),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            parse_graph(b"2 1\n0 1 1\nweights\n0 1\n1 -2"),
            Err(Error::NegativeWeight { vertex: 1, .. })
        ));
        assert!(matches!(parse_graph(b"2 1\n0 0 1"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(parse_graph(b"3 2\n0 1 1"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn weights_section_and_text_round_trip() {
        let text = "3 2 # path\n0 1 1.5\n1 2 2\nweights\n2 0.5\n0 1\n1 0\n";
        let g = parse_graph(text.as_bytes()).unwrap();
        assert_eq!(g.weights(), &[1.0, 0.0, 0.5]);
        let back = parse_graph(g.to_text().as_bytes()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn components_examples() {
        assert_eq!(connected_components(&path3()), vec![vec![0, 1, 2]]);
        let two = Graph::from_unit_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(connected_components(&two), vec![vec![0, 1], vec![2, 3]]);
        let empty = Graph::new(4);
        assert_eq!(connected_components(&empty).len(), 4);
    }

    #[test]
    fn spt_on_path() {
        let t = shortest_path_tree(&path3(), 0).unwrap();
        assert_eq!(t.parents(), &[0, 0, 1]);
        assert_eq!(t.distances(), &[0.0, 1.0, 2.0]);
    }

    #[test]
    fn spt_on_triangle_prefers_direct_edges() {
        let g = Graph::from_edges(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 3.0)]).unwrap();
        let t = shortest_path_tree(&g, 0).unwrap();
        assert_eq!(t.parent(1), 0);
        assert_eq!(t.parent(2), 0);
    }

    #[test]
    fn spt_breaks_ties_by_smallest_parent() {
        // 0-1, 0-2, 1-3, 2-3: vertex 3 has two tight parents.
        let g = Graph::from_unit_edges(4, [(0, 2), (2, 3), (0, 1), (1, 3)]).unwrap();
        let t = shortest_path_tree(&g, 0).unwrap();
        assert_eq!(t.parent(3), 1);
    }

    #[test]
    fn spt_handles_zero_length_cycles() {
        let g = Graph::from_edges(3, [(0, 1, 0.0), (1, 2, 0.0), (0, 2, 0.0)]).unwrap();
        let t = shortest_path_tree(&g, 2).unwrap();
        // 0 settles before 1, so it is the smallest tight parent of 1
        assert_eq!(t.parents(), &[2, 0, 2]);
    }

    #[test]
    fn spt_errors() {
        assert_eq!(
            shortest_path_tree(&path3(), 7).unwrap_err(),
            Error::InvalidRoot { root: 7, n: 3 }
        );
        let two = Graph::from_unit_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(shortest_path_tree(&two, 0).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn apsp_examples() {
        let tri = Graph::from_unit_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let d = all_pairs_distances(&tri);
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(d.get(u, v), if u == v { 0.0 } else { 1.0 });
            }
        }
        assert_eq!(all_pairs_distances(&path3()).get(0, 2), 2.0);
        let two = Graph::from_unit_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(all_pairs_distances(&two).get(0, 3), f64::INFINITY);
    }

    #[test]
    fn from_parents_rejects_cycles() {
        assert!(RootedSPTree::from_parents(0, vec![0, 2, 1]).is_err());
        let t = RootedSPTree::from_parents(0, vec![0, 0, 1]).unwrap();
        assert_eq!(t.dist(2), 2.0);
    }
}
