//! Graph families of known genus, and random edge lengths.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    ToroidalGrid { m: usize, k: usize },
    GenusChain { g: usize, m: usize, k: usize },
    Complete { n: usize },
    PlanarGrid { m: usize, k: usize },
}

/// Genus of a family with where the value comes from. Only `verified`
/// claims are backed by a local check and used in hard assertions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusClaim {
    pub genus: usize,
    pub verified: bool,
    pub provenance: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub family: Family,
    pub genus_claim: GenusClaim,
}

impl FamilySpec {
    pub fn new(family: Family) -> Result<Self> {
        let genus_claim = match family {
            Family::ToroidalGrid { m, k } => {
                check_cycle_sizes(m, k)?;
                GenusClaim {
                    genus: 1,
                    verified: true,
                    provenance: "grid rotation system has Euler characteristic 0; non-planar",
                }
            }
            Family::GenusChain { g, m, k } => {
                if g == 0 {
                    return Err(Error::InvalidParameter("genus_chain needs g >= 1".into()));
                }
                check_cycle_sizes(m, k)?;
                GenusClaim {
                    genus: g,
                    verified: true,
                    provenance: "block additivity over toroidal grid blocks and bridges",
                }
            }
            Family::Complete { n } => {
                if n == 0 {
                    return Err(Error::InvalidParameter("complete_graph needs n >= 1".into()));
                }
                let genus = if n < 3 { 0 } else { ((n - 3) * (n - 4)).div_ceil(12) };
                let (verified, provenance) = if n <= 4 {
                    (true, "planar")
                } else if n == 5 {
                    (true, "exhaustive rotation-system search")
                } else {
                    (false, "Ringel-Youngs formula; not re-verified locally")
                };
                GenusClaim {
                    genus,
                    verified,
                    provenance,
                }
            }
            Family::PlanarGrid { m, k } => {
                if m == 0 || k == 0 {
                    return Err(Error::InvalidParameter("planar_grid needs m, k >= 1".into()));
                }
                GenusClaim {
                    genus: 0,
                    verified: true,
                    provenance: "planar",
                }
            }
        };
        Ok(FamilySpec {
            family,
            genus_claim,
        })
    }

    pub fn build(&self) -> Graph {
        match self.family {
            Family::ToroidalGrid { m, k } => torus_unchecked(m, k),
            Family::GenusChain { g, m, k } => chain_unchecked(g, m, k),
            Family::Complete { n } => complete_unchecked(n),
            Family::PlanarGrid { m, k } => grid_unchecked(m, k),
        }
    }
}

fn check_cycle_sizes(m: usize, k: usize) -> Result<()> {
    if m < 3 || k < 3 {
        return Err(Error::InvalidParameter(format!(
            "toroidal grid needs m, k >= 3 (got {m} x {k})"
        )));
    }
    Ok(())
}

/// `C_m x C_k` with unit lengths; vertex `(i, j)` is `i * k + j`.
pub fn toroidal_grid(m: usize, k: usize) -> Result<Graph> {
    Ok(FamilySpec::new(Family::ToroidalGrid { m, k })?.build())
}

/// `g` toroidal grids joined in a path by unit bridges between their
/// vertex 0s.
pub fn genus_chain(g: usize, m: usize, k: usize) -> Result<Graph> {
    Ok(FamilySpec::new(Family::GenusChain { g, m, k })?.build())
}

pub fn complete_graph(n: usize) -> Result<Graph> {
    Ok(FamilySpec::new(Family::Complete { n })?.build())
}

/// `m x k` grid; vertex `(i, j)` is `i * k + j`.
pub fn planar_grid(m: usize, k: usize) -> Result<Graph> {
    Ok(FamilySpec::new(Family::PlanarGrid { m, k })?.build())
}

fn torus_unchecked(m: usize, k: usize) -> Graph {
    let mut g = Graph::new(m * k);
    for i in 0..m {
        for j in 0..k {
            let v = i * k + j;
            g.add_edge(v, i * k + (j + 1) % k, 1.0).unwrap();
            g.add_edge(v, ((i + 1) % m) * k + j, 1.0).unwrap();
        }
    }
    g
}

fn chain_unchecked(copies: usize, m: usize, k: usize) -> Graph {
    let block = m * k;
    let torus = torus_unchecked(m, k);
    let mut g = Graph::new(copies * block);
    for c in 0..copies {
        for e in torus.edges() {
            g.add_edge(c * block + e.u, c * block + e.v, e.length).unwrap();
        }
    }
    for c in 1..copies {
        g.add_edge((c - 1) * block, c * block, 1.0).unwrap();
    }
    g
}

fn complete_unchecked(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v, 1.0).unwrap();
        }
    }
    g
}

fn grid_unchecked(m: usize, k: usize) -> Graph {
    let mut g = Graph::new(m * k);
    for i in 0..m {
        for j in 0..k {
            let v = i * k + j;
            if j + 1 < k {
                g.add_edge(v, v + 1, 1.0).unwrap();
            }
            if i + 1 < m {
                g.add_edge(v, v + k, 1.0).unwrap();
            }
        }
    }
    g
}

/// Replaces every length by an independent uniform draw from `[lo, hi]`,
/// in edge order. Vertex weights are kept.
pub fn random_lengths(g: &Graph, seed: u64, lo: f64, hi: f64) -> Result<Graph> {
    if !(lo >= 0.0 && lo <= hi && hi.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "length bounds must satisfy 0 <= lo <= hi (got [{lo}, {hi}])"
        )));
    }
    let mut rng = rng::stream(seed);
    let mut out = Graph::new(g.n());
    for e in g.edges() {
        let len = lo + (hi - lo) * rng::unit(&mut rng);
        out.add_edge(e.u, e.v, len)?;
    }
    out.set_weights(g.weights().to_vec())?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::components_without;
    use crate::planarity::is_planar;

    #[test]
    fn torus_sizes() {
        let g = toroidal_grid(3, 3).unwrap();
        assert_eq!((g.n(), g.m()), (9, 18));
        assert!(!is_planar(&g).planar);
        let g = toroidal_grid(3, 4).unwrap();
        assert_eq!((g.n(), g.m()), (12, 24));
        let g = toroidal_grid(5, 5).unwrap();
        assert!((0..25).all(|v| g.degree(v) == 4));
        assert!(toroidal_grid(2, 5).is_err());
    }

    #[test]
    fn chain_sizes_and_blocks() {
        let one = genus_chain(1, 3, 3).unwrap();
        assert_eq!(one, toroidal_grid(3, 3).unwrap());
        let two = genus_chain(2, 3, 3).unwrap();
        assert_eq!((two.n(), two.m()), (18, 37));
        assert_eq!(FamilySpec::new(Family::GenusChain { g: 2, m: 3, k: 3 }).unwrap().genus_claim.genus, 2);

        let three = genus_chain(3, 3, 3).unwrap();
        let bridges: Vec<usize> = vec![three.edge_between(0, 9).unwrap(), three.edge_between(9, 18).unwrap()];
        let keep: Vec<usize> = (0..three.m()).filter(|id| !bridges.contains(id)).collect();
        let split = three.edge_subgraph(&keep);
        let parts = components_without(&split, &vec![false; split.n()]);
        assert_eq!(parts.len(), 3);
        for p in parts {
            let mut mask = vec![false; split.n()];
            p.iter().for_each(|&v| mask[v] = true);
            assert!(!is_planar(&split.induced_subgraph(&mask).0).planar);
        }
        assert!(genus_chain(0, 3, 3).is_err());
    }

    #[test]
    fn complete_claims() {
        let k5 = FamilySpec::new(Family::Complete { n: 5 }).unwrap();
        assert_eq!(k5.genus_claim.genus, 1);
        let k4 = FamilySpec::new(Family::Complete { n: 4 }).unwrap();
        assert_eq!(k4.genus_claim.genus, 0);
        let k8 = FamilySpec::new(Family::Complete { n: 8 }).unwrap();
        assert_eq!(k8.genus_claim.genus, 2);
        assert!(!k8.genus_claim.verified);
        assert_eq!(complete_graph(8).unwrap().m(), 28);
        assert!(complete_graph(0).is_err());
    }

    #[test]
    fn grid_and_lengths() {
        let g = planar_grid(4, 4).unwrap();
        assert!(is_planar(&g).planar);
        assert_eq!(g.m(), 24);
        assert_eq!(random_lengths(&g, 1, 1.0, 1.0).unwrap(), g);
        let a = random_lengths(&g, 7, 0.5, 2.0).unwrap();
        let b = random_lengths(&g, 7, 0.5, 2.0).unwrap();
        assert_eq!(a, b);
        assert!(a.edges().iter().all(|e| (0.5..=2.0).contains(&e.length)));
        assert_ne!(a, random_lengths(&g, 8, 0.5, 2.0).unwrap());
        assert!(random_lengths(&g, 1, 2.0, 1.0).is_err());
        assert!(random_lengths(&g, 1, -1.0, 1.0).is_err());
    }
}
