use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use planarize::embedding::{
    estimate_distortion, mst_reduction_demo, sample_planar_host, verify_noncontraction, Backend,
    MstDemo, NoncontractionCheck, PairSet, PairStat,
};
use planarize::generators::{random_lengths, Family, FamilySpec};
use planarize::planarity::{is_planar, KuratowskiWitness};
use planarize::planarizer::{iteration_bound, planarizing_path_roots, PlanarizationResult};
use planarize::separator::{
    approximate_path_separator_with, root_path_union, weighted_balance, PathSeparator,
    SolverChoice,
};
use planarize::{parse_graph, shortest_path_tree, Graph};

use crate::report::{render, RunReport, Stopwatch};
use crate::{
    CliError, Command, DistortionArgs, EmbedArgs, FamilyCommand, GenArgs, InputArgs, PlanarizeArgs,
    SampleArgs, SeparatorArgs, MAX_VERTICES,
};

/// What a command prints, plus a failure to report after printing.
pub struct Output {
    pub stdout: String,
    pub failure: Option<CliError>,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            stdout,
            failure: None,
        }
    }
}

pub fn execute(command: Command, echo: Vec<String>) -> Result<Output, CliError> {
    let ctx = Context {
        echo,
        clock: Stopwatch::default(),
    };
    match command {
        Command::Gen(a) => gen(ctx, a),
        Command::Planarity(a) => planarity(ctx, a),
        Command::Planarize(a) => planarize(ctx, a),
        Command::Separator(a) => separator(ctx, a),
        Command::Embed(a) => embed(ctx, a),
        Command::Distortion(a) => distortion(ctx, a),
        Command::MstDemo(a) => mst_demo(ctx, a),
    }
}

struct Context {
    echo: Vec<String>,
    clock: Stopwatch,
}

impl Context {
    fn finish<T: Serialize>(self, digest: Option<String>, seed: Option<u64>, results: T) -> String {
        render(&RunReport {
            command: self.echo,
            version: env!("CARGO_PKG_VERSION"),
            input_digest: digest,
            seed,
            results,
            timings_ms: self.clock.into_map(),
        })
    }
}

fn sha256(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

fn load(ctx: &mut Context, input: &InputArgs) -> Result<(Graph, String), CliError> {
    let path = input.input.display().to_string();
    let bytes = fs::read(&input.input).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let g = ctx
        .clock
        .time("parse", || parse_graph(&bytes))
        .map_err(|source| CliError::Input {
            path: path.clone(),
            source,
        })?;
    if g.n() > MAX_VERTICES {
        return Err(CliError::Input {
            path,
            source: planarize::Error::TooLarge {
                size: g.n(),
                limit: MAX_VERTICES,
            },
        });
    }
    Ok((g, sha256(&bytes)))
}

#[derive(Serialize)]
struct GenResults {
    #[serde(flatten)]
    spec: FamilySpec,
    n: usize,
    m: usize,
    lengths: Option<(f64, f64)>,
    output: Option<String>,
    output_digest: String,
}

fn gen(mut ctx: Context, a: GenArgs) -> Result<Output, CliError> {
    let family = match a.family {
        FamilyCommand::ToroidalGrid { m, k } => Family::ToroidalGrid { m, k },
        FamilyCommand::GenusChain { g, m, k } => Family::GenusChain { g, m, k },
        FamilyCommand::Complete { n } => Family::Complete { n },
        FamilyCommand::PlanarGrid { m, k } => Family::PlanarGrid { m, k },
    };
    let spec = FamilySpec::new(family)?;
    let mut g = ctx.clock.time("generate", || spec.build());
    let lengths = a.min_length.zip(a.max_length);
    if let Some((lo, hi)) = lengths {
        g = random_lengths(&g, a.seed, lo, hi)?;
    }
    let text = g.to_text();
    let Some(path) = a.output else {
        return Ok(Output::ok(text));
    };
    fs::write(&path, &text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let results = GenResults {
        spec,
        n: g.n(),
        m: g.m(),
        lengths,
        output: Some(path.display().to_string()),
        output_digest: sha256(text.as_bytes()),
    };
    let seed = lengths.map(|_| a.seed);
    Ok(Output::ok(ctx.finish(None, seed, results)))
}

#[derive(Serialize)]
struct PlanarityResults {
    n: usize,
    m: usize,
    planar: bool,
    witness: Option<KuratowskiWitness>,
}

fn planarity(mut ctx: Context, a: InputArgs) -> Result<Output, CliError> {
    let (g, digest) = load(&mut ctx, &a)?;
    let verdict = ctx.clock.time("planarity", || is_planar(&g));
    let results = PlanarityResults {
        n: g.n(),
        m: g.m(),
        planar: verdict.planar,
        witness: verdict.witness,
    };
    Ok(Output::ok(ctx.finish(Some(digest), None, results)))
}

#[derive(Serialize)]
struct PlanarizeResults<'a> {
    n: usize,
    m: usize,
    path_count: usize,
    iteration_bound: usize,
    #[serde(flatten)]
    result: &'a PlanarizationResult,
}

fn planarize(mut ctx: Context, a: PlanarizeArgs) -> Result<Output, CliError> {
    let (g, digest) = load(&mut ctx, &a.input)?;
    let res = ctx
        .clock
        .time("planarize", || planarizing_path_roots(&g, a.root))?;
    let results = PlanarizeResults {
        n: g.n(),
        m: g.m(),
        path_count: res.path_roots.len(),
        iteration_bound: iteration_bound(g.n()),
        result: &res,
    };
    Ok(Output::ok(ctx.finish(Some(digest), a.seed, results)))
}

#[derive(Serialize)]
struct BalanceCheck {
    ok: bool,
    heaviest_fraction: f64,
    alpha: f64,
}

#[derive(Serialize)]
struct SeparatorResults {
    n: usize,
    m: usize,
    root: usize,
    solver: SolverChoice,
    path_count: usize,
    #[serde(flatten)]
    separator: PathSeparator,
    balance_check: BalanceCheck,
}

fn separator(mut ctx: Context, a: SeparatorArgs) -> Result<Output, CliError> {
    let (g, digest) = load(&mut ctx, &a.input)?;
    let solver: SolverChoice = a.solver.into();
    let sep = ctx.clock.time("separator", || -> Result<_, CliError> {
        let t = shortest_path_tree(&g, a.root)?;
        let sep = approximate_path_separator_with(&g, &t, g.weights(), a.alpha, solver)?;
        let mark = root_path_union(&t, &sep.leaves);
        Ok((sep, weighted_balance(&g, &mark, g.weights())))
    });
    let (sep, heaviest) = sep?;
    let ok = heaviest <= a.alpha + 1e-9;
    let results = SeparatorResults {
        n: g.n(),
        m: g.m(),
        root: a.root,
        solver,
        path_count: sep.leaves.len(),
        separator: sep,
        balance_check: BalanceCheck {
            ok,
            heaviest_fraction: heaviest,
            alpha: a.alpha,
        },
    };
    let stdout = ctx.finish(Some(digest), None, results);
    let failure = (!ok).then(|| CliError::Failed {
        invariant: "separator balance",
        detail: format!("heaviest component {heaviest} exceeds alpha {}", a.alpha),
    });
    Ok(Output { stdout, failure })
}

fn prepare(ctx: &mut Context, a: &SampleArgs) -> Result<(Graph, String, PlanarizationResult), CliError> {
    let (g, digest) = load(ctx, &a.input)?;
    let res = ctx
        .clock
        .time("planarize", || planarizing_path_roots(&g, a.root))?;
    Ok((g, digest, res))
}

#[derive(Serialize)]
struct HostRecord {
    index: usize,
    seed: u64,
    file: String,
    edges: usize,
    digest: String,
    check: NoncontractionCheck,
}

#[derive(Serialize)]
struct EmbedResults {
    root: usize,
    backend: Backend,
    path_roots: Vec<usize>,
    all_ok: bool,
    hosts: Vec<HostRecord>,
}

fn host_file(dir: &Path, index: usize) -> PathBuf {
    dir.join(format!("host-{index:04}.txt"))
}

fn embed(mut ctx: Context, a: EmbedArgs) -> Result<Output, CliError> {
    let s = &a.sample;
    if s.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let (g, digest, res) = prepare(&mut ctx, s)?;
    fs::create_dir_all(&a.out_dir).map_err(|source| CliError::Io {
        path: a.out_dir.display().to_string(),
        source,
    })?;
    let mut hosts = Vec::with_capacity(s.samples);
    for i in 1..=s.samples {
        let seed = planarize::rng::sample_seed(s.seed, i as u64);
        let sample = ctx
            .clock
            .time("sample", || sample_planar_host(&g, &res, seed, s.backend))?;
        let check = ctx.clock.time("verify", || verify_noncontraction(&g, &sample));
        let path = host_file(&a.out_dir, i);
        let text = sample.host.to_text();
        fs::write(&path, &text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        hosts.push(HostRecord {
            index: i,
            seed,
            file: path.display().to_string(),
            edges: sample.host.m(),
            digest: sha256(text.as_bytes()),
            check,
        });
    }
    let failure = hosts.iter().find(|h| !h.check.ok).map(|h| CliError::Failed {
        invariant: "non-contraction",
        detail: format!(
            "host {} (seed {}): {}",
            h.index,
            h.seed,
            h.check.violation.clone().unwrap_or_default()
        ),
    });
    let results = EmbedResults {
        root: s.root,
        backend: s.backend,
        path_roots: res.path_roots.clone(),
        all_ok: failure.is_none(),
        hosts,
    };
    let stdout = ctx.finish(Some(digest), Some(s.seed), results);
    Ok(Output { stdout, failure })
}

#[derive(Serialize)]
struct DistortionResults {
    root: usize,
    backend: Backend,
    samples: usize,
    path_count: usize,
    pair_set: PairSet,
    pair_count: usize,
    d_hat: f64,
    worst_pair: Option<(usize, usize)>,
    max_single_sample_expansion: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pair_stats: Option<Vec<PairStat>>,
}

fn distortion(mut ctx: Context, a: DistortionArgs) -> Result<Output, CliError> {
    let s = &a.sample;
    let (g, digest, res) = prepare(&mut ctx, s)?;
    let rep = ctx.clock.time("distortion", || {
        estimate_distortion(&g, &res, s.samples, s.seed, s.backend)
    })?;
    let results = DistortionResults {
        root: s.root,
        backend: s.backend,
        samples: rep.samples,
        path_count: res.path_roots.len(),
        pair_set: rep.pair_set,
        pair_count: rep.pair_count,
        d_hat: rep.d_hat,
        worst_pair: rep.worst_pair,
        max_single_sample_expansion: rep.max_single_sample_expansion,
        pair_stats: a.pair_stats.then_some(rep.pair_stats),
    };
    Ok(Output::ok(ctx.finish(Some(digest), Some(s.seed), results)))
}

#[derive(Serialize)]
struct MstResults {
    root: usize,
    backend: Backend,
    samples: usize,
    #[serde(flatten)]
    demo: MstDemo,
    d_hat: f64,
    /// `mst_g <= mean_mst_host <= d_hat * mst_g` within 1e-9.
    bound_holds: bool,
}

fn mst_demo(mut ctx: Context, a: SampleArgs) -> Result<Output, CliError> {
    let (g, digest, res) = prepare(&mut ctx, &a)?;
    let demo = ctx.clock.time("mst", || {
        mst_reduction_demo(&g, &res, a.samples, a.seed, a.backend)
    })?;
    let rep = ctx.clock.time("distortion", || {
        estimate_distortion(&g, &res, a.samples, a.seed, a.backend)
    })?;
    let bound_holds = demo.mst_g <= demo.mean_mst_host + 1e-9
        && demo.mean_mst_host <= rep.d_hat * demo.mst_g + 1e-9;
    let results = MstResults {
        root: a.root,
        backend: a.backend,
        samples: a.samples,
        demo,
        d_hat: rep.d_hat,
        bound_holds,
    };
    Ok(Output::ok(ctx.finish(Some(digest), Some(a.seed), results)))
}
