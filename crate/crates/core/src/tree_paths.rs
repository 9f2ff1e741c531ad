//! Root paths of a rooted tree and its caterpillar decomposition.
//!
//! The decomposition is the heavy-path decomposition: each vertex continues
//! its path into the child with the largest subtree (smallest identifier on
//! ties). Leaving a heavy path halves the subtree size, so any root path
//! meets at most `floor(log2 n) + 1` decomposition paths.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::RootedSPTree;

/// Vertices from the root down to `v`.
pub fn root_leaf_path(t: &RootedSPTree, v: usize) -> Result<Vec<usize>> {
    if v >= t.len() {
        return Err(Error::VertexOutOfRange { vertex: v, n: t.len() });
    }
    let mut path = vec![v];
    let mut x = v;
    while x != t.root() {
        x = t.parent(x);
        path.push(x);
    }
    path.reverse();
    Ok(path)
}

/// Vertex-disjoint cover of a rooted tree by downward subpaths of root-leaf
/// paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaterpillarDecomposition {
    /// Each path listed from its top (closest to the root) downwards.
    pub paths: Vec<Vec<usize>>,
    /// Index of the path containing each vertex.
    pub owner: Vec<usize>,
    /// For each path, a leaf whose root path contains it.
    pub leaf_rep: Vec<usize>,
}

impl CaterpillarDecomposition {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Verifies disjointness, coverage, the subpath property, owner
    /// consistency and the leaf representatives. Returns the first broken
    /// property.
    pub fn check(&self, t: &RootedSPTree) -> std::result::Result<(), String> {
        let n = t.len();
        if self.owner.len() != n || self.leaf_rep.len() != self.paths.len() {
            return Err("owner or leaf_rep has the wrong length".into());
        }
        let mut seen = vec![false; n];
        for (i, p) in self.paths.iter().enumerate() {
            if p.is_empty() {
                return Err(format!("path {i} is empty"));
            }
            for &v in p {
                if v >= n {
                    return Err(format!("path {i} has unknown vertex {v}"));
                }
                if seen[v] {
                    return Err(format!("vertex {v} lies on two paths"));
                }
                seen[v] = true;
                if self.owner[v] != i {
                    return Err(format!("owner of {v} is not {i}"));
                }
            }
            if p.windows(2).any(|w| t.parent(w[1]) != w[0] || w[1] == t.root()) {
                return Err(format!("path {i} is not a downward tree path"));
            }
            let leaf = self.leaf_rep[i];
            if leaf >= n || !t.is_leaf(leaf) {
                return Err(format!("leaf_rep of path {i} is not a leaf"));
            }
            let above: HashSet<usize> = root_leaf_path(t, leaf)
                .map_err(|e| e.to_string())?
                .into_iter()
                .collect();
            if p.iter().any(|v| !above.contains(v)) {
                return Err(format!("path {i} is not inside the root path of its leaf"));
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(format!("vertex {v} is not covered"));
        }
        Ok(())
    }
}

/// Subtree sizes, computed without recursion.
pub fn subtree_sizes(t: &RootedSPTree) -> Vec<usize> {
    let mut order = Vec::with_capacity(t.len());
    let mut stack = vec![t.root()];
    while let Some(x) = stack.pop() {
        order.push(x);
        stack.extend_from_slice(t.children(x));
    }
    let mut size = vec![1usize; t.len()];
    for &x in order.iter().rev() {
        if x != t.root() {
            size[t.parent(x)] += size[x];
        }
    }
    size
}

pub fn caterpillar_decomposition(t: &RootedSPTree) -> CaterpillarDecomposition {
    let n = t.len();
    let size = subtree_sizes(t);
    let heavy = |v: usize| -> Option<usize> {
        // on equal sizes the smaller identifier compares greater
        t.children(v)
            .iter()
            .copied()
            .max_by(|&a, &b| size[a].cmp(&size[b]).then(b.cmp(&a)))
    };

    let mut paths = Vec::new();
    let mut owner = vec![usize::MAX; n];
    let mut leaf_rep = Vec::new();
    let mut heads = vec![t.root()];
    while let Some(head) = heads.pop() {
        let idx = paths.len();
        let mut path = Vec::new();
        let mut x = head;
        loop {
            path.push(x);
            owner[x] = idx;
            let h = heavy(x);
            for &c in t.children(x).iter().rev() {
                if Some(c) != h {
                    heads.push(c);
                }
            }
            match h {
                Some(c) => x = c,
                None => break,
            }
        }
        // the heavy chain ends at a leaf
        leaf_rep.push(x);
        paths.push(path);
    }
    CaterpillarDecomposition {
        paths,
        owner,
        leaf_rep,
    }
}

/// Number of distinct decomposition paths meeting the root path of `u`.
pub fn crossing_count(d: &CaterpillarDecomposition, t: &RootedSPTree, u: usize) -> Result<usize> {
    let path = root_leaf_path(t, u)?;
    let mut owners: Vec<usize> = path.iter().map(|&v| d.owner[v]).collect();
    owners.sort_unstable();
    owners.dedup();
    Ok(owners.len())
}

/// `floor(log2 n) + 1`, the crossing bound met by heavy paths.
pub fn crossing_bound(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        (usize::BITS - 1 - n.leading_zeros()) as usize + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> RootedSPTree {
        RootedSPTree::from_parents(0, vec![0, 0, 0, 0]).unwrap()
    }

    #[test]
    fn root_paths() {
        let t = RootedSPTree::from_parents(0, vec![0, 0, 1]).unwrap();
        assert_eq!(root_leaf_path(&t, 0).unwrap(), vec![0]);
        assert_eq!(root_leaf_path(&t, 2).unwrap(), vec![0, 1, 2]);
        assert_eq!(root_leaf_path(&star(), 3).unwrap(), vec![0, 3]);
        assert!(root_leaf_path(&t, 5).is_err());
    }

    #[test]
    fn single_path_tree() {
        let t = RootedSPTree::from_parents(0, vec![0, 0, 1, 2]).unwrap();
        let d = caterpillar_decomposition(&t);
        assert_eq!(d.paths, vec![vec![0, 1, 2, 3]]);
        assert_eq!(d.leaf_rep, vec![3]);
        for u in 0..4 {
            assert_eq!(crossing_count(&d, &t, u).unwrap(), 1);
        }
    }

    #[test]
    fn star_uses_smallest_child_as_heavy() {
        let t = star();
        let d = caterpillar_decomposition(&t);
        d.check(&t).unwrap();
        let mut paths = d.paths.clone();
        paths.sort();
        assert_eq!(paths, vec![vec![0, 1], vec![2], vec![3]]);
        assert_eq!(crossing_count(&d, &t, 2).unwrap(), 2);
        assert_eq!(crossing_count(&d, &t, 0).unwrap(), 1);
        let max = (1..4).map(|u| crossing_count(&d, &t, u).unwrap()).max().unwrap();
        assert_eq!(max, 2);
        assert!(max <= crossing_bound(4));
    }

    #[test]
    fn complete_binary_tree_depth_5() {
        let n = 63;
        let parent: Vec<usize> = (0..n).map(|v| if v == 0 { 0 } else { (v - 1) / 2 }).collect();
        let t = RootedSPTree::from_parents(0, parent).unwrap();
        let d = caterpillar_decomposition(&t);
        d.check(&t).unwrap();
        let worst = (0..n)
            .filter(|&v| t.is_leaf(v))
            .map(|u| crossing_count(&d, &t, u).unwrap())
            .max()
            .unwrap();
        assert!(worst <= 6, "worst crossing {worst}");
    }

    #[test]
    fn bound_values() {
        assert_eq!(crossing_bound(1), 1);
        assert_eq!(crossing_bound(4), 3);
        assert_eq!(crossing_bound(63), 6);
        assert_eq!(crossing_bound(64), 7);
    }
}
