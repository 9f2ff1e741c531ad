//! Stochastic embeddings into planar host graphs.
//!
//! Hosts are spanning subgraphs of `G`, so the vertex map is the identity
//! and distances can only grow: every sample is non-contracting by
//! construction, and [`verify_noncontraction`] re-checks it numerically.
//! How much distances grow is measured, not assumed; [`estimate_distortion`]
//! reports the largest ratio of mean host distance to graph distance.
//!
//! Two samplers are provided behind [`HostSampler`]:
//!
//! * `star` keeps each planar component of `G` minus the removed paths, the
//!   tree edges on the removed paths, and one uniformly random edge from
//!   each component to the removed set.
//! * `greedy-augment` starts from the star host and then offers every other
//!   edge of `G` in a random order, keeping it when the host stays planar.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{component_labels, is_connected, single_source_distances, Graph, EPS};
use crate::planarity::is_planar;
use crate::planarizer::PlanarizationResult;
use crate::rng::{self, Stream};

/// Graphs up to this size measure distortion over all pairs.
pub const ALL_PAIRS_LIMIT: usize = 400;
/// Pairs drawn above [`ALL_PAIRS_LIMIT`].
pub const SAMPLED_PAIRS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Star,
    #[default]
    GreedyAugment,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Star => "star",
            Backend::GreedyAugment => "greedy-augment",
        }
    }

    pub fn sampler(self) -> &'static dyn HostSampler {
        match self {
            Backend::Star => &StarSampler,
            Backend::GreedyAugment => &GreedyAugmentSampler,
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "star" => Ok(Backend::Star),
            "greedy-augment" => Ok(Backend::GreedyAugment),
            other => Err(Error::InvalidParameter(format!("unknown backend `{other}`"))),
        }
    }
}

/// Everything a sampler may use: the graph and the planarizing paths, all
/// of which are shortest paths from the common root `result.root`.
pub struct SamplerContext<'a> {
    pub graph: &'a Graph,
    pub result: &'a PlanarizationResult,
}

pub trait HostSampler: Sync {
    /// Edge ids of `G` forming the host.
    fn sample_edges(&self, ctx: &SamplerContext<'_>, rng: &mut Stream) -> Vec<usize>;
}

pub struct StarSampler;

impl HostSampler for StarSampler {
    fn sample_edges(&self, ctx: &SamplerContext<'_>, rng: &mut Stream) -> Vec<usize> {
        let g = ctx.graph;
        let removed = ctx.result.removed_mask();
        let tree = &ctx.result.tree;
        let (label, count) = component_labels(g, &removed);

        let mut host = Vec::new();
        let mut cross: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (id, e) in g.edges().iter().enumerate() {
            match (label[e.u], label[e.v]) {
                (Some(a), Some(b)) if a == b => host.push(id),
                (Some(a), None) | (None, Some(a)) => cross[a].push(id),
                (None, None) => {
                    let tree_edge = tree.parent(e.u) == e.v && e.u != tree.root()
                        || tree.parent(e.v) == e.u && e.v != tree.root();
                    if tree_edge {
                        host.push(id);
                    }
                }
                _ => {}
            }
        }
        for edges in &cross {
            if !edges.is_empty() {
                host.push(edges[rng::index(rng, edges.len())]);
            }
        }
        host.sort_unstable();
        host
    }
}

pub struct GreedyAugmentSampler;

impl HostSampler for GreedyAugmentSampler {
    fn sample_edges(&self, ctx: &SamplerContext<'_>, rng: &mut Stream) -> Vec<usize> {
        let g = ctx.graph;
        let mut kept = StarSampler.sample_edges(ctx, rng);
        let mut in_host = vec![false; g.m()];
        for &id in &kept {
            in_host[id] = true;
        }
        let mut rest: Vec<usize> = (0..g.m()).filter(|&id| !in_host[id]).collect();
        rng::shuffle(rng, &mut rest);
        let mut host = g.edge_subgraph(&kept);
        for id in rest {
            let e = g.edge(id);
            let mut trial = host.clone();
            trial.add_edge(e.u, e.v, e.length).expect("edge absent from host");
            if is_planar(&trial).planar {
                host = trial;
                kept.push(id);
            }
        }
        kept.sort_unstable();
        kept
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarHostSample {
    pub host: Graph,
    /// Identity map from `V(G)` to `V(host)`.
    pub mapping: Vec<usize>,
    pub seed: u64,
    pub backend: Backend,
}

/// Structural host checks: same vertex set, `E(H) ⊆ E(G)` with equal
/// lengths, connected, planar.
pub fn check_host(g: &Graph, host: &Graph) -> Result<()> {
    if host.n() != g.n() {
        return Err(Error::contract(
            "host spans V(G)",
            format!("host has {} vertices, graph {}", host.n(), g.n()),
        ));
    }
    for e in host.edges() {
        match g.edge_between(e.u, e.v) {
            Some(id) if g.edge(id).length == e.length => {}
            _ => {
                return Err(Error::contract(
                    "E(H) subset of E(G)",
                    format!("host edge {{{}, {}}} is not an edge of G with the same length", e.u, e.v),
                ))
            }
        }
    }
    if !is_connected(host) {
        return Err(Error::contract("host connected", "host is disconnected"));
    }
    if !is_planar(host).planar {
        return Err(Error::contract("host planar", "host is not planar"));
    }
    Ok(())
}

fn check_inputs(g: &Graph, result: &PlanarizationResult) -> Result<()> {
    if !result.remainder_planar {
        return Err(Error::RemainderNotPlanar);
    }
    if result.tree.len() != g.n() {
        return Err(Error::InvalidParameter(
            "planarization result belongs to a different graph".into(),
        ));
    }
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    Ok(())
}

pub fn sample_planar_host(
    g: &Graph,
    result: &PlanarizationResult,
    seed: u64,
    backend: Backend,
) -> Result<PlanarHostSample> {
    check_inputs(g, result)?;
    draw(g, result, seed, backend)
}

fn draw(g: &Graph, result: &PlanarizationResult, seed: u64, backend: Backend) -> Result<PlanarHostSample> {
    let ctx = SamplerContext { graph: g, result };
    let mut stream = rng::stream(seed);
    let edges = backend.sampler().sample_edges(&ctx, &mut stream);
    let host = g.edge_subgraph(&edges);
    check_host(g, &host)?;
    Ok(PlanarHostSample {
        host,
        mapping: (0..g.n()).collect(),
        seed,
        backend,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoncontractionCheck {
    pub ok: bool,
    pub worst_pair: Option<(usize, usize)>,
    /// Largest `d_H / d_G` over pairs at positive distance.
    pub worst_ratio: f64,
    pub violation: Option<String>,
}

pub fn verify_noncontraction(g: &Graph, sample: &PlanarHostSample) -> NoncontractionCheck {
    let h = &sample.host;
    let structural = if h.n() != g.n() {
        Some(format!("host has {} vertices, graph {}", h.n(), g.n()))
    } else {
        h.edges()
            .iter()
            .find(|e| match g.edge_between(e.u, e.v) {
                Some(id) => g.edge(id).length != e.length,
                None => true,
            })
            .map(|e| format!("E(H) subset of E(G) violated by {{{}, {}}}", e.u, e.v))
    };
    if let Some(violation) = structural {
        return NoncontractionCheck {
            ok: false,
            worst_pair: None,
            worst_ratio: f64::NAN,
            violation: Some(violation),
        };
    }

    let pairs = PairSet::All.pairs(g.n(), 0);
    let dg = pair_distances(g, &pairs);
    let dh = pair_distances(h, &pairs);
    let mut check = NoncontractionCheck {
        ok: true,
        worst_pair: None,
        worst_ratio: 1.0,
        violation: None,
    };
    for (i, &(u, v)) in pairs.iter().enumerate() {
        if dh[i] < dg[i] - EPS {
            check.ok = false;
            check.violation.get_or_insert_with(|| {
                format!("d_H({u},{v}) = {} < d_G = {}", dh[i], dg[i])
            });
        }
        if dh[i].is_infinite() && dg[i].is_finite() {
            check.ok = false;
            check
                .violation
                .get_or_insert_with(|| format!("host disconnects {u} and {v}"));
        }
        if dg[i] > 0.0 {
            let ratio = dh[i] / dg[i];
            if ratio > check.worst_ratio || check.worst_pair.is_none() {
                check.worst_ratio = ratio;
                check.worst_pair = Some((u, v));
            }
        }
    }
    check
}

/// Pairs over which distortion is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairSet {
    All,
    Sampled,
}

impl PairSet {
    pub fn for_size(n: usize) -> Self {
        if n <= ALL_PAIRS_LIMIT {
            PairSet::All
        } else {
            PairSet::Sampled
        }
    }

    /// Pairs `(u, v)` with `u < v`, ascending. Sampled pairs come from the
    /// stream `seed` and are deduplicated.
    pub fn pairs(self, n: usize, seed: u64) -> Vec<(usize, usize)> {
        match self {
            PairSet::All => (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect(),
            PairSet::Sampled => {
                if n < 2 {
                    return Vec::new();
                }
                let mut rng = rng::stream(seed);
                let mut out = Vec::with_capacity(SAMPLED_PAIRS);
                while out.len() < SAMPLED_PAIRS {
                    let u = rng::index(&mut rng, n);
                    let v = rng::index(&mut rng, n);
                    if u != v {
                        out.push((u.min(v), u.max(v)));
                    }
                }
                out.sort_unstable();
                out.dedup();
                out
            }
        }
    }
}

/// Distances for each pair, one Dijkstra per distinct first endpoint.
fn pair_distances(g: &Graph, pairs: &[(usize, usize)]) -> Vec<f64> {
    let mut sources: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    sources.dedup();
    let rows: Vec<(usize, Vec<f64>)> = sources
        .par_iter()
        .map(|&s| (s, single_source_distances(g, s)))
        .collect();
    let mut out = Vec::with_capacity(pairs.len());
    let mut r = 0;
    for &(u, v) in pairs {
        while rows[r].0 != u {
            r += 1;
        }
        out.push(rows[r].1[v]);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairStat {
    pub u: usize,
    pub v: usize,
    pub d_g: f64,
    pub mean_host: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionReport {
    pub backend: Backend,
    pub seed: u64,
    pub samples: usize,
    pub pair_set: PairSet,
    pub pair_count: usize,
    /// Largest ratio of mean host distance to graph distance.
    pub d_hat: f64,
    pub worst_pair: Option<(usize, usize)>,
    pub max_single_sample_expansion: f64,
    pub pair_stats: Vec<PairStat>,
}

fn expansion(mean: f64, d: f64) -> Option<f64> {
    if d > 0.0 {
        Some(mean / d)
    } else if mean > 0.0 {
        Some(f64::INFINITY)
    } else {
        None
    }
}

fn draw_all(
    g: &Graph,
    result: &PlanarizationResult,
    samples: usize,
    seed: u64,
    backend: Backend,
) -> Result<Vec<PlanarHostSample>> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    check_inputs(g, result)?;
    (1..=samples as u64)
        .into_par_iter()
        .map(|i| draw(g, result, rng::sample_seed(seed, i), backend))
        .collect()
}

/// Draws hosts with seeds `seed + 1 ..= seed + samples` and measures the
/// expected expansion of every pair.
pub fn estimate_distortion(
    g: &Graph,
    result: &PlanarizationResult,
    samples: usize,
    seed: u64,
    backend: Backend,
) -> Result<DistortionReport> {
    let hosts = draw_all(g, result, samples, seed, backend)?;
    let pair_set = PairSet::for_size(g.n());
    let pairs = pair_set.pairs(g.n(), seed);
    let dg = pair_distances(g, &pairs);

    let per_sample: Vec<Vec<f64>> = hosts
        .par_iter()
        .map(|s| pair_distances(&s.host, &pairs))
        .collect();

    // accumulating the excess over d_G keeps hosts equal to G at ratio 1 exactly
    let mut excess = vec![0.0; pairs.len()];
    let mut max_single = 1.0f64;
    for (s, dh) in hosts.iter().zip(&per_sample) {
        for (i, &d) in dh.iter().enumerate() {
            if d < dg[i] - EPS || d.is_infinite() {
                let (u, v) = pairs[i];
                return Err(Error::contract(
                    "non-contraction",
                    format!("sample seed {}: d_H({u},{v}) = {d}, d_G = {}", s.seed, dg[i]),
                ));
            }
            excess[i] += d - dg[i];
            if let Some(x) = expansion(d, dg[i]) {
                max_single = max_single.max(x);
            }
        }
    }

    let mut d_hat = 1.0f64;
    let mut worst_pair = None;
    let mut pair_stats = Vec::with_capacity(pairs.len());
    for (i, &(u, v)) in pairs.iter().enumerate() {
        let mean = dg[i] + excess[i] / samples as f64;
        if let Some(x) = expansion(mean, dg[i]) {
            if x > d_hat || worst_pair.is_none() && x >= d_hat {
                d_hat = d_hat.max(x);
                worst_pair = Some((u, v));
            }
        }
        pair_stats.push(PairStat {
            u,
            v,
            d_g: dg[i],
            mean_host: mean,
        });
    }
    Ok(DistortionReport {
        backend,
        seed,
        samples,
        pair_set,
        pair_count: pairs.len(),
        d_hat,
        worst_pair,
        max_single_sample_expansion: max_single,
        pair_stats,
    })
}

/// Kruskal; `None` when the graph is disconnected.
pub fn minimum_spanning_tree_cost(g: &Graph) -> Option<f64> {
    let mut ids: Vec<usize> = (0..g.m()).collect();
    ids.sort_by(|&a, &b| g.edge(a).length.total_cmp(&g.edge(b).length).then(a.cmp(&b)));
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut cost = 0.0;
    let mut joined = 0;
    for id in ids {
        let e = g.edge(id);
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a != b {
            parent[a] = b;
            cost += e.length;
            joined += 1;
        }
    }
    (joined + 1 >= g.n()).then_some(cost)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MstDemo {
    pub mst_g: f64,
    pub mean_mst_host: f64,
    /// `mean_mst_host / mst_g`.
    pub ratio: f64,
    pub per_sample: Vec<f64>,
}

/// MST cost on `G` against the mean MST cost over sampled hosts, using the
/// same seeds as [`estimate_distortion`].
pub fn mst_reduction_demo(
    g: &Graph,
    result: &PlanarizationResult,
    samples: usize,
    seed: u64,
    backend: Backend,
) -> Result<MstDemo> {
    let mst_g = minimum_spanning_tree_cost(g).ok_or(Error::Disconnected)?;
    let hosts = draw_all(g, result, samples, seed, backend)?;
    let per_sample = hosts
        .iter()
        .map(|s| {
            minimum_spanning_tree_cost(&s.host)
                .ok_or_else(|| Error::contract("host connected", format!("sample seed {}", s.seed)))
        })
        .collect::<Result<Vec<f64>>>()?;
    let mean_mst_host = mst_g + per_sample.iter().map(|c| c - mst_g).sum::<f64>() / samples as f64;
    let ratio = expansion(mean_mst_host, mst_g).unwrap_or(1.0);
    Ok(MstDemo {
        mst_g,
        mean_mst_host,
        ratio,
        per_sample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, planar_grid, toroidal_grid};
    use crate::planarizer::planarizing_path_roots;

    #[test]
    fn greedy_host_of_planar_graph_is_the_graph() {
        let g = planar_grid(4, 5).unwrap();
        let res = planarizing_path_roots(&g, 0).unwrap();
        for seed in 0..5 {
            let s = sample_planar_host(&g, &res, seed, Backend::GreedyAugment).unwrap();
            assert_eq!(s.host, g);
        }
    }

    #[test]
    fn k5_host_is_planar_spanning_subgraph() {
        let g = complete_graph(5).unwrap();
        let res = planarizing_path_roots(&g, 0).unwrap();
        for backend in [Backend::Star, Backend::GreedyAugment] {
            let s = sample_planar_host(&g, &res, 11, backend).unwrap();
            assert!(s.host.m() <= 9);
            check_host(&g, &s.host).unwrap();
            assert!(verify_noncontraction(&g, &s).ok);
        }
    }

    #[test]
    fn star_edge_count() {
        let g = toroidal_grid(4, 4).unwrap();
        let res = planarizing_path_roots(&g, 0).unwrap();
        let removed = res.removed_mask();
        let (label, count) = component_labels(&g, &removed);
        let inner = g
            .edges()
            .iter()
            .filter(|e| label[e.u].is_some() && label[e.u] == label[e.v])
            .count();
        let with_cross = (0..count)
            .filter(|&c| {
                g.edges().iter().any(|e| {
                    (label[e.u] == Some(c) && removed[e.v]) || (label[e.v] == Some(c) && removed[e.u])
                })
            })
            .count();
        let tree_edges = res.removed.len() - 1;
        let s = sample_planar_host(&g, &res, 3, Backend::Star).unwrap();
        assert_eq!(s.host.m(), inner + tree_edges + with_cross);
    }

    #[test]
    fn noncontraction_examples() {
        let tri = Graph::from_unit_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let same = PlanarHostSample {
            host: tri.clone(),
            mapping: vec![0, 1, 2],
            seed: 0,
            backend: Backend::Star,
        };
        let c = verify_noncontraction(&tri, &same);
        assert!(c.ok);
        assert_eq!(c.worst_ratio, 1.0);

        let missing = PlanarHostSample {
            host: Graph::from_unit_edges(3, [(0, 1), (1, 2)]).unwrap(),
            ..same.clone()
        };
        let c = verify_noncontraction(&tri, &missing);
        assert!(c.ok);
        assert_eq!(c.worst_ratio, 2.0);
        assert_eq!(c.worst_pair, Some((0, 2)));

        let path = Graph::from_unit_edges(3, [(0, 1), (1, 2)]).unwrap();
        let shortcut = PlanarHostSample {
            host: tri.clone(),
            ..same
        };
        let c = verify_noncontraction(&path, &shortcut);
        assert!(!c.ok);
        assert!(c.violation.unwrap().contains("E(H) subset of E(G)"));
    }

    #[test]
    fn distortion_on_planar_input_is_one() {
        let g = planar_grid(3, 4).unwrap();
        let res = planarizing_path_roots(&g, 0).unwrap();
        let rep = estimate_distortion(&g, &res, 3, 9, Backend::GreedyAugment).unwrap();
        assert_eq!(rep.d_hat, 1.0);
        assert_eq!(rep.pair_count, 66);
    }

    #[test]
    fn single_sample_distortion_matches_worst_ratio() {
        let g = toroidal_grid(3, 4).unwrap();
        let res = planarizing_path_roots(&g, 0).unwrap();
        let rep = estimate_distortion(&g, &res, 1, 5, Backend::Star).unwrap();
        let s = sample_planar_host(&g, &res, 6, Backend::Star).unwrap();
        let check = verify_noncontraction(&g, &s);
        assert!((rep.d_hat - check.worst_ratio).abs() < 1e-12);
        assert_eq!(rep.d_hat, rep.max_single_sample_expansion);
    }

    #[test]
    fn mst_demo_bounds() {
        let g = toroidal_grid(3, 3).unwrap();
        let res = planarizing_path_roots(&g, 0).unwrap();
        let demo = mst_reduction_demo(&g, &res, 10, 42, Backend::GreedyAugment).unwrap();
        assert_eq!(demo.mst_g, 8.0);
        assert!(demo.per_sample.iter().all(|&c| c >= demo.mst_g));
        let rep = estimate_distortion(&g, &res, 10, 42, Backend::GreedyAugment).unwrap();
        assert!(demo.mean_mst_host <= rep.d_hat * demo.mst_g + 1e-9);

        let planar = planar_grid(3, 3).unwrap();
        let res = planarizing_path_roots(&planar, 0).unwrap();
        let demo = mst_reduction_demo(&planar, &res, 2, 1, Backend::GreedyAugment).unwrap();
        assert_eq!(demo.ratio, 1.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = toroidal_grid(3, 3).unwrap();
        let mut res = planarizing_path_roots(&g, 0).unwrap();
        assert!(estimate_distortion(&g, &res, 0, 1, Backend::Star).is_err());
        res.remainder_planar = false;
        assert_eq!(
            sample_planar_host(&g, &res, 1, Backend::Star).unwrap_err(),
            Error::RemainderNotPlanar
        );
        assert!("bogus".parse::<Backend>().is_err());
        assert_eq!("greedy-augment".parse::<Backend>().unwrap(), Backend::GreedyAugment);
    }
}
