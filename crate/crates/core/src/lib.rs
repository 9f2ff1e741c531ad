//! Planarizing shortest paths and planar host embeddings for graphs of
//! bounded genus.

pub mod embedding;
pub mod error;
pub mod generators;
pub mod graph;
pub mod planarity;
pub mod planarizer;
pub mod rng;
pub mod separator;
pub mod tree_paths;

pub use embedding::{
    estimate_distortion, mst_reduction_demo, sample_planar_host, verify_noncontraction, Backend,
    DistortionReport, MstDemo, NoncontractionCheck, PlanarHostSample,
};
pub use error::{Error, Result};
pub use graph::{all_pairs_distances, parse_graph, shortest_path_tree, DistanceMatrix, Edge, Graph, RootedSPTree};
pub use planarity::{is_planar, KuratowskiWitness, PlanarityVerdict};
pub use planarizer::{planarizing_path_roots, PlanarizationResult};
pub use separator::{approximate_path_separator, PathSeparator};
pub use tree_paths::{caterpillar_decomposition, CaterpillarDecomposition};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
