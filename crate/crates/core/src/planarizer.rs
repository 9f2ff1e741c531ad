//! Planarizing sets of shortest root paths.
//!
//! Starting from a shortest-path tree `T` rooted at `r`, each round takes the
//! non-planar components of what is left, weights the vertices of each such
//! component `C` with its indicator function and asks for root paths forming
//! a 3/4-balanced separator of `(G, w_C)`. Separators always use the full
//! graph and the same tree; only the weights change. Every non-planar
//! component therefore shrinks by a factor 3/4 per round, which bounds the
//! number of rounds by `ceil(log_{4/3} n)`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{components_without, Graph, RootedSPTree, shortest_path_tree};
use crate::planarity::is_planar;
use crate::separator::{
    approximate_path_separator_with, root_path_union, weighted_balance, PathSeparator, SolverChoice,
    DEFAULT_ALPHA,
};
use crate::tree_paths::caterpillar_decomposition;

/// How the separator for one component was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparatorSource {
    /// First call succeeded (exact or heuristic according to size).
    Solver,
    /// The first result did not shrink the component; exact search redid it.
    ExactRetry,
    /// All decomposition paths meeting the component were taken.
    Cover,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentRecord {
    /// Vertices of the non-planar component, ascending.
    pub vertices: Vec<usize>,
    /// Leaves `Z_C` chosen for this component, ascending.
    pub separator: Vec<usize>,
    pub quotient_size: usize,
    pub exact: bool,
    pub source: SeparatorSource,
    /// Largest number of vertices of `C` left in one component of
    /// `G` minus the root paths of `separator`.
    pub largest_piece: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundRecord {
    /// One-based round number.
    pub round: usize,
    pub components: Vec<ComponentRecord>,
    /// New leaves added this round (`X_i`), ascending.
    pub added: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanarizationResult {
    pub root: usize,
    /// `X`, ascending.
    pub path_roots: Vec<usize>,
    pub iterations: Vec<RoundRecord>,
    /// Union of the root paths of `X`, ascending.
    pub removed: Vec<usize>,
    pub remainder_planar: bool,
    #[serde(skip)]
    pub tree: RootedSPTree,
}

impl PlanarizationResult {
    pub fn removed_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.tree.len()];
        for &v in &self.removed {
            mask[v] = true;
        }
        mask
    }
}

/// `ceil(log_{4/3} n)`: the smallest `k` with `(4/3)^k >= n`.
pub fn iteration_bound(n: usize) -> usize {
    let mut k = 0;
    let mut p = 1.0f64;
    while p < n as f64 {
        p *= 4.0 / 3.0;
        k += 1;
    }
    k
}

/// Components of `G` minus `removed` that are not planar, each ascending.
pub fn nonplanar_components(g: &Graph, removed: &[bool]) -> Vec<Vec<usize>> {
    components_without(g, removed)
        .into_iter()
        .filter(|comp| {
            // graphs on at most four vertices are planar
            if comp.len() < 5 {
                return false;
            }
            let mut keep = vec![false; g.n()];
            for &v in comp {
                keep[v] = true;
            }
            !is_planar(&g.induced_subgraph(&keep).0).planar
        })
        .collect()
}

pub fn planarizing_path_roots(g: &Graph, root: usize) -> Result<PlanarizationResult> {
    let tree = shortest_path_tree(g, root)?;
    let mut roots = BTreeSet::new();
    let mut removed = vec![false; g.n()];
    let mut iterations = Vec::new();

    loop {
        let bad = nonplanar_components(g, &removed);
        if bad.is_empty() {
            break;
        }
        let records: Vec<ComponentRecord> = bad
            .par_iter()
            .map(|comp| separate_component(g, &tree, comp))
            .collect::<Result<_>>()?;
        let mut added = BTreeSet::new();
        for rec in &records {
            added.extend(rec.separator.iter().copied());
        }
        let added: Vec<usize> = added.into_iter().filter(|v| !roots.contains(v)).collect();
        roots.extend(added.iter().copied());
        let root_list: Vec<usize> = roots.iter().copied().collect();
        removed = root_path_union(&tree, &root_list);
        iterations.push(RoundRecord {
            round: iterations.len() + 1,
            components: records,
            added,
        });
        if iterations.len() > g.n() {
            return Err(Error::contract(
                "planarizer progress",
                "more rounds than vertices",
            ));
        }
    }

    let (rest, _) = g.induced_subgraph(&removed.iter().map(|r| !r).collect::<Vec<_>>());
    let remainder_planar = is_planar(&rest).planar;
    if !remainder_planar {
        return Err(Error::RemainderNotPlanar);
    }
    Ok(PlanarizationResult {
        root,
        path_roots: roots.into_iter().collect(),
        iterations,
        removed: (0..g.n()).filter(|&v| removed[v]).collect(),
        remainder_planar,
        tree,
    })
}

fn largest_piece(g: &Graph, tree: &RootedSPTree, leaves: &[usize], w: &[f64]) -> usize {
    let mark = root_path_union(tree, leaves);
    // indicator weights make the weighted balance a vertex count
    let total: f64 = w.iter().sum();
    (weighted_balance(g, &mark, w) * total).round() as usize
}

fn separate_component(g: &Graph, tree: &RootedSPTree, comp: &[usize]) -> Result<ComponentRecord> {
    let mut w = vec![0.0; g.n()];
    for &v in comp {
        w[v] = 1.0;
    }
    let limit = (DEFAULT_ALPHA * comp.len() as f64).floor() as usize;
    let shrinks = |sep: &PathSeparator| largest_piece(g, tree, &sep.leaves, &w) <= limit;

    let record = |sep: PathSeparator, source: SeparatorSource| ComponentRecord {
        vertices: comp.to_vec(),
        largest_piece: largest_piece(g, tree, &sep.leaves, &w),
        separator: sep.leaves,
        quotient_size: sep.quotient_size,
        exact: sep.exact,
        source,
    };

    match approximate_path_separator_with(g, tree, &w, DEFAULT_ALPHA, SolverChoice::Auto) {
        Ok(sep) if shrinks(&sep) => return Ok(record(sep, SeparatorSource::Solver)),
        Ok(_) | Err(Error::Contract { .. }) => {}
        Err(e) => return Err(e),
    }
    if let Ok(sep) = approximate_path_separator_with(g, tree, &w, DEFAULT_ALPHA, SolverChoice::Exact) {
        if shrinks(&sep) {
            return Ok(record(sep, SeparatorSource::ExactRetry));
        }
    }
    // every path meeting C: removes all of C
    let d = caterpillar_decomposition(tree);
    let nodes: BTreeSet<usize> = comp.iter().map(|&v| d.owner[v]).collect();
    let mut leaves: Vec<usize> = nodes.iter().map(|&i| d.leaf_rep[i]).collect();
    leaves.sort_unstable();
    leaves.dedup();
    Ok(ComponentRecord {
        vertices: comp.to_vec(),
        largest_piece: largest_piece(g, tree, &leaves, &w),
        separator: leaves,
        quotient_size: d.len(),
        exact: false,
        source: SeparatorSource::Cover,
    })
}
