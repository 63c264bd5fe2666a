//! The `plandscape` command line.
//!
//! Every subcommand builds one primary output (CSV, JSON, a graph file or a
//! single line of text). With `--out PATH` the output goes to `PATH` and a
//! manifest `PATH.manifest.json` records the subcommand, every argument
//! including defaults, the tool version, the wall time and the SHA-256 of
//! the output. Without `--out` the output goes to stdout and the manifest to
//! stderr.
//!
//! Instance-level commands sample `G(n, k, 1/2)` from `--seed` unless
//! `--graph` names a file. Their own randomness (local search, chains)
//! uses `derive_seed(seed, 1)` so that it never shares a stream with the
//! instance.
//!
//! Exit codes: 0 success, 1 failure, 2 usage or parameter error, 5 search
//! budget exceeded; `ogp` returns 3 when refuted and 4 when the curve is
//! heuristic.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::flatness::{density_scale, is_flat, sample_conditioned, CheckMode};
use crate::landscape::{exact_densest, exact_overlap_densest, local_search_densest, Method, DEFAULT_BUDGET};
use crate::mcmc::{
    beta_advisory, censored_median, exact_gibbs, few_ratio, few_ratio_bound, hitting_time, overlap_first_passage,
    run_chain, MCMCConfig, WellPartition, EXACT_BUDGET,
};
use crate::model::{graph_to_string, read_graph, sample_planted, ModelParams, PlantedGraph, VertexSubset};
use crate::numerics::{
    classify_asymptotic, classify_empirical, phase_diagram, ClassifierConfig, CurveKind, OverlapCurve,
};
use crate::ogp::{auto_certify_curve, certify_ogp, d_curve, type_m_witness, LocalOptions};
use crate::rng::{derive_seed, seeded};

pub const SCHEMA: &str = "v1";

#[derive(Parser, Debug, Serialize)]
#[command(name = "plandscape", version, about = "Planted clique landscape laboratory")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "PLANDSCAPE_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Sample a planted clique instance and write it in graph format.
    Sample(SampleArgs),
    /// Evaluate a first moment curve over the overlap range.
    Curve(CurveArgs),
    /// Classify the monotonicity of a first moment curve.
    Classify(ClassifyArgs),
    /// Tabulate phase regions over a (k, kbar) grid.
    Phase(PhaseArgs),
    /// Densest kbar-subgraph of an instance, optionally at a fixed overlap.
    Dense(DenseArgs),
    /// Overlap-restricted densest values d(z) of an instance.
    DCurve(DCurveArgs),
    /// Check flatness of an edge-conditioned random graph.
    Flatness(FlatnessArgs),
    /// Run the Metropolis chain and write its trace.
    Mcmc(McmcArgs),
    /// Hitting times of the upper well boundary over independent replicas.
    Hit(HitArgs),
    /// Free energy well ratios over a sweep of inverse temperatures.
    Few(FewArgs),
    /// Certify or refute the overlap gap property of an instance.
    Ogp(OgpArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Output {
    /// Output path; a manifest is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Instance {
    /// Number of vertices.
    #[arg(long, default_value_t = 14)]
    pub n: usize,
    /// Planted clique size.
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    /// Seed of the instance and of all derived randomness.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Read the instance from a graph file instead of sampling it.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

impl Instance {
    fn load(&self) -> Result<PlantedGraph> {
        match &self.graph {
            Some(path) => {
                let f = File::open(path).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
                read_graph(BufReader::new(f))
            }
            None => sample_planted(self.n, self.k, self.seed),
        }
    }

    fn work_seed(&self) -> u64 {
        derive_seed(self.seed, 1)
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Classifier {
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1.4)]
    pub c0: f64,
    #[arg(long, default_value_t = 0.25)]
    pub d1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub d2: f64,
    #[arg(long, default_value_t = 4.0)]
    pub e: f64,
}

impl Classifier {
    fn config(&self) -> ClassifierConfig {
        ClassifierConfig {
            epsilon: self.epsilon,
            c0: self.c0,
            d1: self.d1,
            d2: self.d2,
            e: self.e,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Well {
    /// Well boundary constants in units of sqrt(kbar / ln(n/kbar)).
    #[arg(long, default_value_t = 0.25)]
    pub d1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub d2: f64,
    /// Explicit thresholds `a0_max,a1_min,a1_max,a2_min`, overriding D1, D2.
    #[arg(long, value_delimiter = ',')]
    pub bands: Option<Vec<usize>>,
}

impl Well {
    fn partition(&self, g: &PlantedGraph, kbar: usize) -> Result<WellPartition> {
        match self.explicit()? {
            Some(p) => Ok(p),
            None => WellPartition::from_scale(g.n(), g.k(), kbar, self.d1, self.d2),
        }
    }

    fn explicit(&self) -> Result<Option<WellPartition>> {
        match self.bands.as_deref() {
            None => Ok(None),
            Some(&[a0, a1, b1, a2]) => WellPartition::explicit(a0, a1, b1, a2).map(Some),
            Some(_) => Err(crate::error::param("--bands takes exactly four values")),
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct CurveArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub kbar: u64,
    /// gamma, gamma-tilde, gamma-tilde-caption or phi.
    #[arg(long, default_value = "gamma-tilde")]
    pub kind: CurveKind,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub kbar: u64,
    #[arg(long, default_value = "gamma-tilde")]
    pub kind: CurveKind,
    /// Use the closed-form rule instead of evaluating the curve.
    #[arg(long)]
    pub asymptotic: bool,
    /// Safety factor of the closed-form rule.
    #[arg(long, default_value_t = 1.0)]
    pub margin: f64,
    /// Print the full classification as JSON.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub classifier: Classifier,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct PhaseArgs {
    #[arg(long)]
    pub n: u64,
    /// Comma separated, strictly increasing.
    #[arg(long, value_delimiter = ',', required = true)]
    pub k_grid: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub kbar_grid: Vec<u64>,
    #[arg(long, default_value_t = 1.0)]
    pub margin: f64,
    #[command(flatten)]
    pub classifier: Classifier,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct DenseArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long, default_value_t = 5)]
    pub kbar: usize,
    /// Fix the overlap with the planted clique.
    #[arg(long)]
    pub z: Option<usize>,
    /// exhaustive or local-search.
    #[arg(long, default_value = "exhaustive")]
    pub method: Method,
    #[arg(long, default_value_t = 16)]
    pub restarts: u64,
    /// Node budget of the exhaustive search.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct DCurveArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long, default_value_t = 5)]
    pub kbar: usize,
    #[arg(long, default_value = "exhaustive")]
    pub method: Method,
    #[arg(long, default_value_t = 16)]
    pub restarts: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct FlatnessArgs {
    /// Number of vertices K of the conditioned graph.
    #[arg(long = "size", default_value_t = 18)]
    pub size: usize,
    /// Edge density; defaults to the densest-subgraph scale of K vertices in G(n, 1/2).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// n used for the default density.
    #[arg(long, default_value_t = 50)]
    pub n: u64,
    #[arg(long, default_value_t = 0.2)]
    pub delta: f64,
    /// exhaustive, sampled:COUNT or sampled:COUNT:SEED.
    #[arg(long, default_value = "exhaustive")]
    pub mode: CheckMode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct McmcArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long, default_value_t = 5)]
    pub kbar: usize,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 100_000)]
    pub t_max: u64,
    #[arg(long, default_value_t = 100)]
    pub stride: u64,
    /// Start from the planted clique padded with the smallest other vertices.
    #[arg(long)]
    pub from_planted: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct HitArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long, default_value_t = 5)]
    pub kbar: usize,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub t_max: u64,
    #[arg(long, default_value_t = 100)]
    pub replicas: u64,
    #[command(flatten)]
    pub well: Well,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct FewArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long, default_value_t = 5)]
    pub kbar: usize,
    /// Comma separated inverse temperatures.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,4")]
    pub betas: Vec<f64>,
    #[command(flatten)]
    pub well: Well,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct OgpArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long, default_value_t = 5)]
    pub kbar: usize,
    #[arg(long, default_value = "exhaustive")]
    pub method: Method,
    /// Explicit thresholds; all three or none (chosen from the curve).
    #[arg(long, requires_all = ["zeta2", "r_n"])]
    pub zeta1: Option<u64>,
    #[arg(long, requires_all = ["zeta1", "r_n"])]
    pub zeta2: Option<u64>,
    #[arg(long, requires_all = ["zeta1", "zeta2"])]
    pub r_n: Option<f64>,
    #[arg(long, default_value_t = 16)]
    pub restarts: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[command(flatten)]
    pub output: Output,
}

/// What a subcommand produced.
struct Report {
    body: Vec<u8>,
    /// Printed when the body goes to a file.
    summary: String,
    code: u8,
}

impl Report {
    fn new(body: Vec<u8>, summary: impl Into<String>) -> Self {
        Self {
            body,
            summary: summary.into(),
            code: 0,
        }
    }

    fn json(value: &impl Serialize, summary: impl Into<String>) -> Result<Self> {
        let mut body = serde_json::to_vec_pretty(value)?;
        body.push(b'\n');
        Ok(Self::new(body, summary))
    }
}

fn csv(write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Vec<u8> {
    let mut buf = Vec::new();
    write(&mut buf).expect("writing to memory");
    buf
}

fn sample(a: &SampleArgs) -> Result<Report> {
    let g = a.instance.load()?;
    let summary = format!("n={} k={} planted={}", g.n(), g.k(), g.planted().to_dashed());
    Ok(Report::new(graph_to_string(&g).into_bytes(), summary))
}

fn curve(a: &CurveArgs) -> Result<Report> {
    let p = ModelParams::new(a.n, a.k, a.kbar)?;
    let c = OverlapCurve::first_moment(p, a.kind)?;
    let summary = format!("{} points of {} on [{}, {}]", c.len(), a.kind, c.z_lo, c.z_hi);
    Ok(Report::new(csv(|w| c.write_csv(w)), summary))
}

fn classify(a: &ClassifyArgs) -> Result<Report> {
    let p = ModelParams::new(a.n, a.k, a.kbar)?;
    let cfg = a.classifier.config();
    cfg.validate()?;
    let class = if a.asymptotic {
        classify_asymptotic(&p, &cfg, a.margin)
    } else {
        classify_empirical(&OverlapCurve::first_moment(p, a.kind)?, &cfg)?
    };
    let label = class.label.to_string();
    if a.json {
        Report::json(
            &json!({ "schema": SCHEMA, "params": p, "kind": a.kind, "asymptotic": a.asymptotic, "class": class }),
            label,
        )
    } else {
        Ok(Report::new(format!("{label}\n").into_bytes(), label))
    }
}

fn phase(a: &PhaseArgs) -> Result<Report> {
    let t = phase_diagram(a.n, &a.k_grid, &a.kbar_grid, &a.classifier.config(), a.margin)?;
    let summary = format!("{} cells", t.cells.len());
    Ok(Report::new(csv(|w| t.write_csv(w)), summary))
}

fn dense(a: &DenseArgs) -> Result<Report> {
    let g = a.instance.load()?;
    let r = match (a.method, a.z) {
        (Method::Exhaustive, Some(z)) => exact_overlap_densest(&g, a.kbar, z, a.budget)?,
        (Method::Exhaustive, None) => exact_densest(&g, a.kbar, a.budget)?,
        (Method::LocalSearch, z) => local_search_densest(&g, a.kbar, z, a.restarts, a.instance.work_seed())?,
    };
    let summary = format!("{} edges on {}", r.value, r.witness.to_dashed());
    Report::json(
        &json!({ "schema": SCHEMA, "n": g.n(), "k": g.k(), "kbar": a.kbar, "z": a.z, "result": r }),
        summary,
    )
}

fn dcurve(a: &DCurveArgs) -> Result<Report> {
    let g = a.instance.load()?;
    let opts = LocalOptions {
        restarts: a.restarts,
        seed: a.instance.work_seed(),
    };
    let d = d_curve(&g, a.kbar, a.method, a.budget, opts)?;
    let body = csv(|w| {
        writeln!(w, "z,value,method,witness")?;
        for (p, s) in d.curve.points().iter().zip(&d.witnesses) {
            writeln!(w, "{},{:.16e},{},{}", p.z, p.value, d.method, s.to_dashed())?;
        }
        Ok(())
    });
    let dip = type_m_witness(&d.curve).map_or("no dip".to_string(), |t| format!("dip at z={}", t.z_star));
    Ok(Report::new(body, format!("{} points, {dip}", d.curve.len())))
}

fn flatness(a: &FlatnessArgs) -> Result<Report> {
    let gamma = match a.gamma {
        Some(g) => g,
        None => density_scale(a.n, a.size as u64)?,
    };
    let g = sample_conditioned(a.size, gamma, a.seed)?;
    let r = is_flat(&g, gamma, a.delta, a.mode)?;
    let summary = format!(
        "{} ({} violating subsets)",
        if r.is_flat { "flat" } else { "not flat" },
        r.violation_count
    );
    Report::json(&json!({ "schema": SCHEMA, "report": r }), summary)
}

fn mcmc(a: &McmcArgs) -> Result<Report> {
    let g = a.instance.load()?;
    let mut cfg = MCMCConfig::new(a.beta, a.kbar, a.t_max, derive_seed(a.instance.work_seed(), 1));
    cfg.stride = a.stride;
    let init = if a.from_planted {
        let mut m = g.planted().members().to_vec();
        m.extend(g.non_planted().into_iter().take(a.kbar.saturating_sub(g.k())));
        m.truncate(a.kbar);
        VertexSubset::new(m, g.n())?
    } else {
        let mut r = seeded(a.instance.work_seed());
        VertexSubset::new(rand::seq::index::sample(&mut r, g.n(), a.kbar).into_vec(), g.n())?
    };
    let t = run_chain(&g, &cfg, &init)?;
    let mut summary = format!(
        "{} steps, acceptance {:.4}, final overlap {}",
        a.t_max,
        t.accepted as f64 / a.t_max.max(1) as f64,
        t.steps.last().unwrap().overlap
    );
    if beta_advisory(g.n(), a.kbar, a.beta) {
        summary.push_str(", beta above the trapping scale");
    }
    Ok(Report::new(csv(|w| t.write_csv(w)), summary))
}

fn hit(a: &HitArgs) -> Result<Report> {
    let g = a.instance.load()?;
    let mut cfg = MCMCConfig::new(a.beta, a.kbar, a.t_max, a.instance.work_seed());
    cfg.d1 = a.well.d1;
    cfg.d2 = a.well.d2;
    cfg.partition = a.well.explicit()?;
    cfg.stride = a.t_max.max(1);
    let part = cfg.well_partition(g.n(), g.k())?;
    let runs: Vec<serde_json::Value> = (0..a.replicas)
        .map(|r| {
            let mut c = cfg;
            c.seed = derive_seed(cfg.seed, r);
            hitting_time(&g, &c).map(|t| {
                json!({ "config": c, "hit_time": t.hit_time, "censored": t.hit_time.is_none(), "burn_in": t.burn_in })
            })
        })
        .collect::<Result<_>>()?;
    let times: Vec<Option<u64>> = runs.iter().map(|r| r["hit_time"].as_u64()).collect();
    let median = censored_median(&times);
    let censored = times.iter().filter(|t| t.is_none()).count();
    let passage = (a.beta == 0.0)
        .then(|| overlap_first_passage(g.n() as u64, g.k() as u64, a.kbar as u64, part.a1_max as u64).ok())
        .flatten();
    let summary = format!(
        "median hitting time {} ({censored} of {} censored)",
        median.map_or("censored".into(), |m| m.to_string()),
        a.replicas
    );
    Report::json(
        &json!({
            "schema": SCHEMA,
            "partition": part,
            "advisory": beta_advisory(g.n(), a.kbar, a.beta),
            "median": median,
            "censored": censored,
            "first_passage_beta0": passage,
            "runs": runs,
        }),
        summary,
    )
}

fn few(a: &FewArgs) -> Result<Report> {
    let g = a.instance.load()?;
    let part = a.well.partition(&g, a.kbar)?;
    let d = d_curve(&g, a.kbar, Method::Exhaustive, a.budget, LocalOptions::default())?;
    let mut dz = vec![f64::NEG_INFINITY; d.curve.z_lo as usize];
    dz.extend(d.curve.points().iter().map(|p| p.value));
    let rows: Vec<serde_json::Value> = a
        .betas
        .iter()
        .map(|&beta| {
            let exact = match exact_gibbs(&g, a.kbar, beta, EXACT_BUDGET) {
                Ok(ex) => Some(few_ratio(&ex, &part)),
                Err(Error::BudgetExceeded { .. }) => None,
                Err(e) => return Err(e),
            };
            let bound = few_ratio_bound(&dz, g.n() as u64, g.k() as u64, a.kbar as u64, beta, &part);
            Ok(json!({ "beta": beta, "exact": exact, "bound": bound }))
        })
        .collect::<Result<_>>()?;
    let summary = rows
        .iter()
        .map(|r| {
            let v = r["exact"]["ln_ratio"]
                .as_f64()
                .or(r["bound"].as_f64())
                .unwrap_or(f64::NAN);
            format!("beta={}: {v:.4}", r["beta"])
        })
        .collect::<Vec<_>>()
        .join(", ");
    Report::json(
        &json!({ "schema": SCHEMA, "partition": part, "valid": part.is_valid(), "d_curve": dz, "rows": rows }),
        summary,
    )
}

fn ogp(a: &OgpArgs) -> Result<Report> {
    let g = a.instance.load()?;
    let opts = LocalOptions {
        restarts: a.restarts,
        seed: a.instance.work_seed(),
    };
    let d = d_curve(&g, a.kbar, a.method, a.budget, opts)?;
    if a.method != Method::Exhaustive {
        let values: Vec<f64> = d.curve.points().iter().map(|p| p.value).collect();
        let mut r = Report::json(
            &json!({
                "schema": SCHEMA,
                "certifiable": false,
                "evidence": { "d_curve_lower_bounds": values, "dip": type_m_witness(&d.curve) },
            }),
            "not certifiable: heuristic curve",
        )?;
        r.code = 4;
        return Ok(r);
    }
    let cert = match (a.zeta1, a.zeta2, a.r_n) {
        (Some(z1), Some(z2), Some(r)) => certify_ogp(&g, a.kbar, &d, z1, z2, r)?,
        _ => auto_certify_curve(&g, a.kbar, &d)?,
    };
    let summary = format!(
        "{}: {}",
        if cert.holds { "certified" } else { "refuted" },
        cert.explanation
    );
    let mut r = Report::json(&json!({ "schema": SCHEMA, "certificate": cert }), summary)?;
    r.code = if cert.holds { 0 } else { 3 };
    Ok(r)
}

fn dispatch(cmd: &Command) -> Result<(Report, Option<PathBuf>)> {
    Ok(match cmd {
        Command::Sample(a) => (sample(a)?, a.output.out.clone()),
        Command::Curve(a) => (curve(a)?, a.output.out.clone()),
        Command::Classify(a) => (classify(a)?, a.output.out.clone()),
        Command::Phase(a) => (phase(a)?, a.output.out.clone()),
        Command::Dense(a) => (dense(a)?, a.output.out.clone()),
        Command::DCurve(a) => (dcurve(a)?, a.output.out.clone()),
        Command::Flatness(a) => (flatness(a)?, a.output.out.clone()),
        Command::Mcmc(a) => (mcmc(a)?, a.output.out.clone()),
        Command::Hit(a) => (hit(a)?, a.output.out.clone()),
        Command::Few(a) => (few(a)?, a.output.out.clone()),
        Command::Ogp(a) => (ogp(a)?, a.output.out.clone()),
    })
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Path of the manifest written next to `out`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 5,
        Error::Parameter(_) | Error::Domain(_) => 2,
        Error::NotCertifiable => 4,
        _ => 1,
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> u8 {
    if let Some(t) = cli.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let start = Instant::now();
    let (report, out) = match dispatch(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let subcommand = serde_json::to_value(&cli.command)
        .ok()
        .and_then(|v| v.as_object().and_then(|o| o.keys().next().cloned()))
        .unwrap_or_default();
    let mut manifest = json!({
        "schema": SCHEMA,
        "tool": "plandscape",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": subcommand,
        "arguments": cli.command,
        "threads": cli.threads,
        "wall_ms": wall_ms,
        "exit_code": report.code,
    });
    let output = json!({
        "path": out.as_ref().map(|p| p.display().to_string()),
        "bytes": report.body.len(),
        "sha256": sha256_hex(&report.body),
    });
    manifest["outputs"] = json!([output]);
    let result = match &out {
        Some(path) => write_file(path, &report.body).and_then(|_| {
            let mut m = serde_json::to_vec_pretty(&manifest)?;
            m.push(b'\n');
            write_file(&manifest_path(path), &m)?;
            println!("{}", report.summary);
            Ok(())
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(&report.body);
            eprintln!("{manifest}");
            Ok(())
        }
    };
    match result {
        Ok(()) => report.code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point of the binary: parses `std::env::args` (usage errors exit
/// with code 2) and runs the command.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(&cli))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_line_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn missing_flag_is_a_usage_error() {
        let e = Cli::try_parse_from(["plandscape", "curve", "--n", "100"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn classify_large_kbar_is_increasing() {
        let cli = Cli::try_parse_from([
            "plandscape",
            "classify",
            "--n",
            "10000000",
            "--k",
            "4000",
            "--kbar",
            "6250000",
        ])
        .unwrap();
        let Command::Classify(a) = &cli.command else {
            unreachable!()
        };
        let r = classify(a).unwrap();
        assert_eq!(r.body, b"Increasing\n");
    }

    #[test]
    fn curve_writes_file_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("c.csv");
        let cli = Cli::try_parse_from([
            "plandscape",
            "curve",
            "--n",
            "10000000",
            "--k",
            "700",
            "--kbar",
            "700",
            "--kind",
            "gamma-tilde",
            "--out",
            out.to_str().unwrap(),
        ])
        .unwrap();
        assert_eq!(run(&cli), 0);
        let body = std::fs::read(&out).unwrap();
        let text = String::from_utf8(body.clone()).unwrap();
        assert_eq!(text.lines().count(), 1 + 701);
        let m: serde_json::Value = serde_json::from_slice(&std::fs::read(manifest_path(&out)).unwrap()).unwrap();
        assert_eq!(m["schema"], "v1");
        assert_eq!(m["subcommand"], "curve");
        assert_eq!(m["outputs"][0]["sha256"], sha256_hex(&body));
        assert_eq!(m["arguments"]["curve"]["kind"], "gamma-tilde");
    }

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
