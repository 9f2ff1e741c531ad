//! Balanced path separators.
//!
//! A caterpillar decomposition of a spanning tree `T` collapses into a
//! quotient graph with one node per decomposition path. Removing a set of
//! quotient nodes splits the quotient exactly as removing the union of the
//! corresponding paths splits the original graph, so a balanced node
//! separator of the quotient lifts to a balanced vertex separator of `G`.
//! Replacing each chosen path by the root path of its representative leaf
//! only removes more vertices, which keeps the separator balanced.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{component_labels, Graph, RootedSPTree, EPS};
use crate::tree_paths::{caterpillar_decomposition, CaterpillarDecomposition};

/// Largest quotient handled by [`separator_exact`].
pub const EXACT_MAX_NODES: usize = 20;

/// Balance used by the path separator unless told otherwise.
pub const DEFAULT_ALPHA: f64 = 0.75;

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientGraph {
    /// Sorted neighbor lists; simple graph.
    pub adj: Vec<Vec<usize>>,
    pub node_weight: Vec<f64>,
    /// Vertices of `G` represented by each node.
    pub expansion: Vec<Vec<usize>>,
}

impl QuotientGraph {
    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, nb) in self.adj.iter().enumerate() {
            out.extend(nb.iter().filter(|&&j| j > i).map(|&j| (i, j)));
        }
        out
    }

    pub fn total_weight(&self) -> f64 {
        self.node_weight.iter().sum()
    }

    /// Components of the quotient minus `removed`, each sorted, with weights.
    pub fn components_without(&self, removed: &[bool]) -> Vec<(Vec<usize>, f64)> {
        let mut seen = removed.to_vec();
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                for &y in &self.adj[comp[i]] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            let w = comp.iter().map(|&x| self.node_weight[x]).sum();
            out.push((comp, w));
        }
        out
    }

    /// Heaviest remaining component as a fraction of the total weight.
    pub fn balance_of(&self, removed: &[bool]) -> f64 {
        let total = self.total_weight();
        let heaviest = self
            .components_without(removed)
            .into_iter()
            .map(|(_, w)| w)
            .fold(0.0, f64::max);
        if total > 0.0 {
            heaviest / total
        } else {
            0.0
        }
    }
}

pub fn build_quotient_graph(g: &Graph, d: &CaterpillarDecomposition, w: &[f64]) -> Result<QuotientGraph> {
    let n = g.n();
    let k = d.paths.len();
    if d.owner.len() != n || w.len() != n || d.owner.iter().any(|&o| o >= k) {
        return Err(Error::IncompleteDecomposition);
    }
    let mut counted = vec![0usize; k];
    for (v, &o) in d.owner.iter().enumerate() {
        if !d.paths[o].contains(&v) {
            return Err(Error::IncompleteDecomposition);
        }
        counted[o] += 1;
    }
    if counted.iter().zip(&d.paths).any(|(&c, p)| c != p.len()) {
        return Err(Error::IncompleteDecomposition);
    }

    let mut node_weight = vec![0.0; k];
    for (v, &o) in d.owner.iter().enumerate() {
        node_weight[o] += w[v];
    }
    let mut pairs = BTreeSet::new();
    for e in g.edges() {
        let (a, b) = (d.owner[e.u], d.owner[e.v]);
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    let mut adj = vec![Vec::new(); k];
    for (a, b) in pairs {
        adj[a].push(b);
        adj[b].push(a);
    }
    for nb in &mut adj {
        nb.sort_unstable();
    }
    let expansion = d
        .paths
        .iter()
        .map(|p| {
            let mut p = p.clone();
            p.sort_unstable();
            p
        })
        .collect();
    Ok(QuotientGraph {
        adj,
        node_weight,
        expansion,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparatorResult {
    /// Chosen quotient nodes, ascending.
    pub chosen: Vec<usize>,
    pub alpha: f64,
    pub achieved_balance: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

fn feasible(heaviest: f64, alpha: f64, total: f64) -> bool {
    heaviest <= alpha * total + EPS
}

fn result_for(q: &QuotientGraph, chosen: Vec<usize>, alpha: f64) -> SeparatorResult {
    let mut removed = vec![false; q.len()];
    for &c in &chosen {
        removed[c] = true;
    }
    SeparatorResult {
        achieved_balance: q.balance_of(&removed),
        chosen,
        alpha,
    }
}

/// Minimum-cardinality alpha-balanced node separator by exhaustive search,
/// ties broken by the lexicographically smallest index set.
pub fn separator_exact(q: &QuotientGraph, alpha: f64) -> Result<SeparatorResult> {
    check_alpha(alpha)?;
    let k = q.len();
    if k > EXACT_MAX_NODES {
        return Err(Error::TooLarge {
            size: k,
            limit: EXACT_MAX_NODES,
        });
    }
    let adj: Vec<u32> = q
        .adj
        .iter()
        .map(|nb| nb.iter().fold(0u32, |m, &j| m | (1 << j)))
        .collect();
    let total = q.total_weight();
    let heaviest = |removed: u32| -> f64 {
        let mut left = ((1u64 << k) - 1) as u32 & !removed;
        let mut best = 0.0f64;
        while left != 0 {
            let s = left.trailing_zeros();
            let mut comp = 1u32 << s;
            let mut frontier = comp;
            while frontier != 0 {
                let x = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = adj[x] & left & !comp;
                comp |= new;
                frontier |= new;
            }
            left &= !comp;
            let mut w = 0.0;
            let mut bits = comp;
            while bits != 0 {
                w += q.node_weight[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            best = best.max(w);
        }
        best
    };

    for size in 0..=k {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let mask = combo.iter().fold(0u32, |m, &i| m | (1 << i));
            if feasible(heaviest(mask), alpha, total) {
                return Ok(result_for(q, combo, alpha));
            }
            if !next_combination(&mut combo, k) {
                break;
            }
        }
    }
    unreachable!("removing every node is always balanced")
}

/// Advances to the next `combo.len()`-subset of `0..k` in lexicographic
/// order; false once exhausted.
fn next_combination(combo: &mut [usize], k: usize) -> bool {
    let size = combo.len();
    for i in (0..size).rev() {
        if combo[i] < k - size + i {
            combo[i] += 1;
            for j in i + 1..size {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// BFS-layer sweep. While some component is too heavy, the heaviest one is
/// layered by BFS from its heaviest node and one layer is removed: the
/// smallest layer that leaves only alpha-feasible pieces, or failing that
/// the layer leaving the lightest heaviest piece. The chosen nodes are then
/// pruned to an inclusion-minimal set in reverse insertion order.
pub fn separator_heuristic(q: &QuotientGraph, alpha: f64) -> Result<SeparatorResult> {
    check_alpha(alpha)?;
    let total = q.total_weight();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    let k = q.len();
    let mut removed = vec![false; k];
    let mut inserted = Vec::new();

    loop {
        let comps = q.components_without(&removed);
        let worst = comps
            .iter()
            .filter(|(_, w)| !feasible(*w, alpha, total))
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0[0].cmp(&a.0[0])));
        let Some((comp, _)) = worst else { break };

        let source = *comp
            .iter()
            .max_by(|&&a, &&b| q.node_weight[a].total_cmp(&q.node_weight[b]).then(b.cmp(&a)))
            .unwrap();
        let layers = bfs_layers(q, &removed, source);

        // (feasible, layer size, heaviest piece, layer index)
        let mut best: Option<(bool, usize, f64, usize)> = None;
        for (i, layer) in layers.iter().enumerate() {
            let mut trial = removed.clone();
            for &x in layer {
                trial[x] = true;
            }
            let heaviest = q
                .components_without(&trial)
                .into_iter()
                .filter(|(c, _)| comp.binary_search(&c[0]).is_ok())
                .map(|(_, w)| w)
                .fold(0.0, f64::max);
            let ok = feasible(heaviest, alpha, total);
            let better = match best {
                None => true,
                Some((bok, bsize, bheavy, _)) => match (ok, bok) {
                    (true, false) => true,
                    (false, true) => false,
                    (true, true) => {
                        layer.len() < bsize || (layer.len() == bsize && heaviest < bheavy)
                    }
                    (false, false) => {
                        heaviest < bheavy || (heaviest == bheavy && layer.len() < bsize)
                    }
                },
            };
            if better {
                best = Some((ok, layer.len(), heaviest, i));
            }
        }
        let (_, _, _, idx) = best.expect("a component has at least one layer");
        for &x in &layers[idx] {
            removed[x] = true;
            inserted.push(x);
        }
    }

    for &x in inserted.iter().rev() {
        removed[x] = false;
        if !feasible(q.balance_of(&removed) * total, alpha, total) {
            removed[x] = true;
        }
    }
    let chosen = (0..k).filter(|&x| removed[x]).collect();
    Ok(result_for(q, chosen, alpha))
}

fn bfs_layers(q: &QuotientGraph, removed: &[bool], source: usize) -> Vec<Vec<usize>> {
    let mut depth = vec![usize::MAX; q.len()];
    depth[source] = 0;
    let mut layers = vec![vec![source]];
    loop {
        let mut next = Vec::new();
        for &x in layers.last().unwrap() {
            for &y in &q.adj[x] {
                if !removed[y] && depth[y] == usize::MAX {
                    depth[y] = layers.len();
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        layers.push(next);
    }
    layers
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverChoice {
    /// Exact search up to [`EXACT_MAX_NODES`] quotient nodes, heuristic above.
    Auto,
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSeparator {
    /// Leaves `Y` whose root paths form the separator, ascending.
    pub leaves: Vec<usize>,
    /// Quotient nodes picked by the solver.
    pub quotient_nodes: Vec<usize>,
    pub quotient_size: usize,
    /// Vertices on the selected root paths, ascending.
    pub removed: Vec<usize>,
    pub alpha: f64,
    /// Heaviest component of `G` minus `removed`, as a fraction of `w(V)`.
    pub achieved_balance: f64,
    pub exact: bool,
}

/// Marks every vertex on the root paths of `roots`.
pub fn root_path_union(t: &RootedSPTree, roots: &[usize]) -> Vec<bool> {
    let mut mark = vec![false; t.len()];
    for &u in roots {
        let mut x = u;
        while !mark[x] {
            mark[x] = true;
            if x == t.root() {
                break;
            }
            x = t.parent(x);
        }
    }
    mark
}

/// Heaviest component of `G` minus the marked vertices under weights `w`,
/// as a fraction of `w(V(G))`.
pub fn weighted_balance(g: &Graph, removed: &[bool], w: &[f64]) -> f64 {
    let (label, count) = component_labels(g, removed);
    let mut cw = vec![0.0; count];
    for (v, l) in label.iter().enumerate() {
        if let Some(c) = l {
            cw[*c] += w[v];
        }
    }
    let total: f64 = w.iter().sum();
    let heaviest = cw.into_iter().fold(0.0, f64::max);
    if total > 0.0 {
        heaviest / total
    } else {
        0.0
    }
}

pub fn approximate_path_separator(g: &Graph, t: &RootedSPTree, w: &[f64], alpha: f64) -> Result<PathSeparator> {
    approximate_path_separator_with(g, t, w, alpha, SolverChoice::Auto)
}

pub fn approximate_path_separator_with(
    g: &Graph,
    t: &RootedSPTree,
    w: &[f64],
    alpha: f64,
    solver: SolverChoice,
) -> Result<PathSeparator> {
    check_alpha(alpha)?;
    if t.len() != g.n() || w.len() != g.n() {
        return Err(Error::IncompleteDecomposition);
    }
    let total: f64 = w.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    let d = caterpillar_decomposition(t);
    let q = build_quotient_graph(g, &d, w)?;
    let use_exact = match solver {
        SolverChoice::Exact => true,
        SolverChoice::Heuristic => false,
        SolverChoice::Auto => q.len() <= EXACT_MAX_NODES,
    };
    let sep = if use_exact {
        separator_exact(&q, alpha)?
    } else {
        separator_heuristic(&q, alpha)?
    };
    let mut leaves: Vec<usize> = sep.chosen.iter().map(|&i| d.leaf_rep[i]).collect();
    leaves.sort_unstable();
    leaves.dedup();
    let mark = root_path_union(t, &leaves);
    let achieved_balance = weighted_balance(g, &mark, w);
    if !feasible(achieved_balance * total, alpha, total) {
        return Err(Error::contract(
            "path separator balance",
            format!("achieved {achieved_balance} > alpha {alpha}"),
        ));
    }
    Ok(PathSeparator {
        leaves,
        quotient_nodes: sep.chosen,
        quotient_size: q.len(),
        removed: (0..g.n()).filter(|&v| mark[v]).collect(),
        alpha,
        achieved_balance,
        exact: use_exact,
    })
}
