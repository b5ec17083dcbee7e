//! Seeded Monte Carlo sweeps over model parameters.
//!
//! Every trial draws from its own `ChaCha8Rng` seeded by
//! [`mix_seed`]`(master_seed, cell_index, trial_index)`, so a record can be
//! reproduced alone and tables do not depend on the worker count. Trials run
//! on a rayon pool and are collected in `(cell, trial)` order.
//!
//! The default triangular density grid is `{0.40, 0.45, 0.48}`: densities
//! just above 1/3 only show the asymptotic behaviour at sizes far beyond a
//! desktop machine.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::linkgraph::{build_link_graph, collapse_duplicates, split_link_parts};
use crate::matching::{
    find_perfect_matching, sample_tripartite, Alphabet, MatchMode, MatchOptions,
};
use crate::models::{sample_graph, sample_triangular, GraphKind};
use crate::spectral::{bound, graph_report, spectral_criterion, BoundKind, SpectralReport};

/// splitmix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `trial` in cell `cell`.
pub fn mix_seed(master: u64, cell: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ cell) ^ trial)
}

pub const DEFAULT_DENSITIES: [f64; 3] = [0.40, 0.45, 0.48];
pub const DEFAULT_TRIALS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Criterion,
    Matching,
    Gap,
    Duplicates,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Criterion => "criterion",
            ExperimentKind::Matching => "matching",
            ExperimentKind::Gap => "gap",
            ExperimentKind::Duplicates => "duplicates",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "criterion" => ExperimentKind::Criterion,
            "matching" => ExperimentKind::Matching,
            "gap" => ExperimentKind::Gap,
            "duplicates" => ExperimentKind::Duplicates,
            _ => return None,
        })
    }

    /// Model names accepted by this experiment.
    pub fn models(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Criterion => &["triangular", "positive-triangular"],
            ExperimentKind::Matching => &["g3", "g3-reduced"],
            ExperimentKind::Gap => &[
                "configuration",
                "configuration-reduced",
                "gnp",
                "gnm",
                "bipartite-regular",
            ],
            ExperimentKind::Duplicates => &["triangular"],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

/// A sweep: the cartesian grid of models and parameters relevant to the
/// experiment, `trials` trials per cell.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub experiment: ExperimentKind,
    pub models: Vec<String>,
    /// `m` for criterion and duplicates, part size for matching, vertex
    /// parameter `n` for gap.
    pub sizes: Vec<usize>,
    pub densities: Vec<f64>,
    pub v: Vec<usize>,
    /// Edge counts (matching, gnm).
    pub edges: Vec<usize>,
    pub p: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    pub match_mode: MatchMode,
    /// Record wall-clock time per trial (makes output nondeterministic).
    pub timing: bool,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl SweepConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        SweepConfig {
            experiment,
            models: vec![experiment.models()[0].to_string()],
            sizes: Vec::new(),
            densities: DEFAULT_DENSITIES.to_vec(),
            v: Vec::new(),
            edges: Vec::new(),
            p: Vec::new(),
            trials: DEFAULT_TRIALS,
            master_seed: 0,
            match_mode: MatchMode::Heuristic,
            timing: false,
            jobs: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials", "must be >= 1"));
        }
        if self.models.is_empty() {
            return Err(invalid("model", "at least one model is required"));
        }
        for m in &self.models {
            if !self.experiment.models().contains(&m.as_str()) {
                return Err(invalid(
                    "model",
                    format!(
                        "`{m}` is not valid for {} (expected one of {})",
                        self.experiment.as_str(),
                        self.experiment.models().join(", ")
                    ),
                ));
            }
        }
        if self.jobs == Some(0) {
            return Err(invalid("jobs", "must be >= 1"));
        }
        if self.sizes.is_empty() {
            return Err(invalid(
                size_flag(self.experiment),
                "at least one size is required",
            ));
        }
        for &d in &self.densities {
            if !(d > 0.0 && d < 1.0) {
                return Err(invalid("d", format!("density must lie in (0,1), got {d}")));
            }
        }
        for &p in &self.p {
            if !(p > 0.0 && p < 1.0) {
                return Err(invalid(
                    "p",
                    format!("probability must lie in (0,1), got {p}"),
                ));
            }
        }
        if self.v.contains(&0) {
            return Err(invalid("v", "must be >= 1"));
        }
        let cells = self.cells();
        if cells.is_empty() {
            return Err(invalid(
                missing_grid_flag(self),
                "the parameter grid is empty for the selected models",
            ));
        }
        for c in &cells {
            c.check()?;
        }
        Ok(())
    }

    /// Cells in canonical order; the position is the cell id.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for model in &self.models {
            let base = Cell::new(self.experiment, model);
            for &size in &self.sizes {
                match (self.experiment, model.as_str()) {
                    (ExperimentKind::Criterion | ExperimentKind::Duplicates, _) => {
                        for &d in &self.densities {
                            out.push(Cell {
                                m: Some(size),
                                d: Some(d),
                                ..base.clone()
                            });
                        }
                    }
                    (ExperimentKind::Matching, _) | (ExperimentKind::Gap, "gnm") => {
                        for &e in &self.edges {
                            out.push(Cell {
                                n: Some(size),
                                big_m: Some(e),
                                ..base.clone()
                            });
                        }
                    }
                    (ExperimentKind::Gap, "gnp") => {
                        for &p in &self.p {
                            out.push(Cell {
                                n: Some(size),
                                p: Some(p),
                                ..base.clone()
                            });
                        }
                    }
                    (ExperimentKind::Gap, _) => {
                        for &v in &self.v {
                            out.push(Cell {
                                n: Some(size),
                                v: Some(v),
                                ..base.clone()
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// `# key=value` lines describing the normalized config. The worker
    /// count is omitted so that output does not depend on it.
    pub fn comment_lines(&self) -> Vec<String> {
        let list = |xs: Vec<String>| {
            if xs.is_empty() {
                "-".to_string()
            } else {
                xs.join(",")
            }
        };
        let ints = |xs: &[usize]| list(xs.iter().map(|x| x.to_string()).collect());
        let floats = |xs: &[f64]| list(xs.iter().map(|x| x.to_string()).collect());
        vec![
            format!("# experiment={}", self.experiment.as_str()),
            format!("# model={}", self.models.join(",")),
            format!("# sizes={}", ints(&self.sizes)),
            format!("# d={}", floats(&self.densities)),
            format!("# v={}", ints(&self.v)),
            format!("# M={}", ints(&self.edges)),
            format!("# p={}", floats(&self.p)),
            format!("# trials={}", self.trials),
            format!("# seed={}", self.master_seed),
            format!(
                "# mode={}",
                match self.match_mode {
                    MatchMode::Exact => "exact",
                    MatchMode::Heuristic => "heuristic",
                }
            ),
        ]
    }
}

fn size_flag(kind: ExperimentKind) -> &'static str {
    match kind {
        ExperimentKind::Criterion | ExperimentKind::Duplicates => "m",
        ExperimentKind::Matching | ExperimentKind::Gap => "n",
    }
}

fn missing_grid_flag(cfg: &SweepConfig) -> &'static str {
    match cfg.experiment {
        ExperimentKind::Criterion | ExperimentKind::Duplicates => "d",
        ExperimentKind::Matching => "M",
        ExperimentKind::Gap => {
            if cfg.models.iter().any(|m| m == "gnm") && cfg.edges.is_empty() {
                "M"
            } else if cfg.models.iter().any(|m| m == "gnp") && cfg.p.is_empty() {
                "p"
            } else {
                "v"
            }
        }
    }
}

/// One point of the parameter grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cell {
    pub experiment: &'static str,
    pub model: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub l: Option<usize>,
    pub d: Option<f64>,
    pub v: Option<usize>,
    #[serde(rename = "M")]
    pub big_m: Option<usize>,
    pub p: Option<f64>,
}

impl Cell {
    fn new(kind: ExperimentKind, model: &str) -> Self {
        Cell {
            experiment: kind.as_str(),
            model: model.to_string(),
            n: None,
            m: None,
            l: None,
            d: None,
            v: None,
            big_m: None,
            p: None,
        }
    }

    fn check(&self) -> Result<()> {
        match self.experiment {
            "criterion" | "duplicates" => {
                if self.m.unwrap_or(0) < 2 {
                    return Err(invalid("m", "triangular models need m >= 2"));
                }
            }
            "matching" => {
                let n = self.n.unwrap_or(0);
                if n == 0 {
                    return Err(invalid("n", "part size must be >= 1"));
                }
                if self.model == "g3-reduced" && !n.is_multiple_of(2) {
                    return Err(invalid(
                        "n",
                        "reduced hypergraphs need an even part size (2m)",
                    ));
                }
                let cap = n.saturating_pow(3);
                if self.big_m.unwrap_or(0) > cap {
                    return Err(invalid(
                        "M",
                        format!("at most {cap} triples exist for part size {n}"),
                    ));
                }
            }
            _ => {
                if self.n.unwrap_or(0) == 0 {
                    return Err(invalid("n", "must be >= 1"));
                }
                if self.model == "gnm" {
                    let n = self.n.unwrap();
                    let pairs = n * (n - 1) / 2;
                    if self.big_m.unwrap_or(0) > pairs {
                        return Err(invalid(
                            "M",
                            format!("at most {pairs} edges exist on {n} vertices"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn graph_kind(&self) -> Result<GraphKind> {
        let n = self.n.unwrap_or(0);
        Ok(match self.model.as_str() {
            "configuration" => GraphKind::Configuration {
                n,
                v: self.v.unwrap_or(0),
            },
            "configuration-reduced" => GraphKind::ConfigurationReduced {
                n,
                v: self.v.unwrap_or(0),
            },
            "gnp" => GraphKind::Gnp {
                n,
                p: self.p.unwrap_or(0.0),
            },
            "gnm" => GraphKind::Gnm {
                n,
                m: self.big_m.unwrap_or(0),
            },
            "bipartite-regular" => GraphKind::BipartiteRegular {
                n,
                v: self.v.unwrap_or(0),
            },
            other => return Err(invalid("model", format!("unknown graph model `{other}`"))),
        })
    }

    /// Closed-form lower bound on `lambda_1` for gap cells.
    pub fn bound(&self) -> Option<f64> {
        let kind = match (self.model.as_str(), self.n) {
            ("configuration" | "configuration-reduced", _) => BoundKind::Friedman {
                v: self.v? as f64,
                c: 0.0,
            },
            ("bipartite-regular", _) => BoundKind::FriedmanBipartite {
                v: self.v? as f64,
                eps: 0.0,
            },
            ("gnp", Some(n)) => BoundKind::Chung {
                n: n as f64,
                p: self.p?,
                g: 0.0,
            },
            ("gnm", Some(n)) => {
                let pairs = (n * (n - 1) / 2) as f64;
                BoundKind::Chung {
                    n: n as f64,
                    p: self.big_m? as f64 / pairs,
                    g: 0.0,
                }
            }
            _ => return None,
        };
        bound(kind).ok()
    }
}

/// Measurements that are not part of the CSV/JSONL row.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrialExtras {
    pub min_degree: Option<f64>,
    pub max_degree: Option<f64>,
    pub mean_degree: Option<f64>,
    pub bound: Option<f64>,
    pub edge_count: Option<usize>,
    /// Max degree of the graph of removed duplicate edges.
    pub removed_max_degree: Option<usize>,
    /// Link graph bipartite between generators and inverses.
    pub bipartite: Option<bool>,
}

/// One output row. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub experiment: &'static str,
    pub model: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub l: Option<usize>,
    pub d: Option<f64>,
    pub v: Option<usize>,
    #[serde(rename = "M")]
    pub big_m: Option<usize>,
    pub p: Option<f64>,
    pub trial: usize,
    pub seed: u64,
    pub lambda1: Option<f64>,
    pub connected: Option<bool>,
    pub criterion: Option<bool>,
    pub matching: Option<String>,
    pub duplicates: Option<usize>,
    pub runtime_ms: Option<f64>,
    #[serde(skip)]
    pub extras: TrialExtras,
}

pub const CSV_HEADER: &str =
    "experiment,model,n,m,l,d,v,M,p,trial,seed,lambda1,connected,criterion,matching,duplicates,runtime_ms";

impl TrialRecord {
    fn blank(cell: &Cell, trial: usize, seed: u64) -> Self {
        TrialRecord {
            experiment: cell.experiment,
            model: cell.model.clone(),
            n: cell.n,
            m: cell.m,
            l: cell.l,
            d: cell.d,
            v: cell.v,
            big_m: cell.big_m,
            p: cell.p,
            trial,
            seed,
            lambda1: None,
            connected: None,
            criterion: None,
            matching: None,
            duplicates: None,
            runtime_ms: None,
            extras: TrialExtras::default(),
        }
    }

    fn apply_report(&mut self, r: &SpectralReport) {
        self.lambda1 = r.lambda1;
        self.connected = Some(r.connected);
        self.criterion = Some(r.criterion);
        self.extras.min_degree = Some(r.min_degree);
        self.extras.max_degree = Some(r.max_degree);
        self.extras.mean_degree = Some(r.mean_degree);
    }

    pub fn csv_row(&self) -> String {
        fn opt<T: ToString>(x: &Option<T>) -> String {
            x.as_ref().map(|v| v.to_string()).unwrap_or_default()
        }
        [
            self.experiment.to_string(),
            self.model.clone(),
            opt(&self.n),
            opt(&self.m),
            opt(&self.l),
            opt(&self.d),
            opt(&self.v),
            opt(&self.big_m),
            opt(&self.p),
            self.trial.to_string(),
            self.seed.to_string(),
            opt(&self.lambda1),
            opt(&self.connected),
            opt(&self.criterion),
            opt(&self.matching),
            opt(&self.duplicates),
            opt(&self.runtime_ms),
        ]
        .join(",")
    }

    pub fn json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// Run one trial of `cell` from its derived seed.
pub fn run_trial(cfg: &SweepConfig, cell: &Cell, trial: usize, seed: u64) -> Result<TrialRecord> {
    let start = cfg.timing.then(Instant::now);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = TrialRecord::blank(cell, trial, seed);
    match cell.experiment {
        "criterion" => {
            let m = cell.m.unwrap();
            let positive = cell.model == "positive-triangular";
            let p = sample_triangular(m, cell.d.unwrap(), &mut rng, positive)?;
            let (_, report) = spectral_criterion(&p)?;
            rec.apply_report(&report);
            let g = build_link_graph(&p)?;
            let side: Vec<bool> = (0..2 * m).map(|i| i < m).collect();
            rec.extras.bipartite = Some(g.is_bipartite_between(&side));
            rec.extras.edge_count = Some(g.edge_count());
            rec.duplicates = Some(collapse_duplicates(&g).1.edge_count());
        }
        "matching" => {
            let n = cell.n.unwrap();
            let reduced = cell.model == "g3-reduced";
            let alphabet = if reduced {
                Alphabet::Signed { m: n / 2 }
            } else {
                Alphabet::Plain { part_size: n }
            };
            let h = sample_tripartite(alphabet, cell.big_m.unwrap(), reduced, &mut rng)?;
            let opts = MatchOptions {
                mode: cfg.match_mode,
                seed,
                ..MatchOptions::default()
            };
            rec.matching = Some(find_perfect_matching(&h, &opts)?.label().to_string());
            rec.extras.edge_count = Some(h.edge_count());
        }
        "gap" => {
            let g = sample_graph(cell.graph_kind()?, &mut rng)?;
            rec.apply_report(&graph_report(&g));
            rec.extras.bound = cell.bound();
            rec.extras.edge_count = Some(g.edge_count());
        }
        "duplicates" => {
            let p = sample_triangular(cell.m.unwrap(), cell.d.unwrap(), &mut rng, false)?;
            let mut dup = 0;
            let mut removed_max = 0;
            let mut edges = 0;
            for part in split_link_parts(&p)? {
                edges += part.edge_count();
                let (_, removed) = collapse_duplicates(&part);
                dup += removed.edge_count();
                removed_max = removed_max.max(removed.degrees().into_iter().max().unwrap_or(0));
            }
            rec.duplicates = Some(dup);
            rec.extras.edge_count = Some(edges);
            rec.extras.removed_max_degree = Some(removed_max);
        }
        other => return Err(Error::Internal(format!("unknown experiment {other}"))),
    }
    if let Some(t) = start {
        rec.runtime_ms = Some(t.elapsed().as_secs_f64() * 1e3);
    }
    Ok(rec)
}

/// All trials of all cells, in `(cell, trial)` order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let cells = cfg.cells();
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..cfg.trials).map(move |t| (c, t)))
        .collect();
    let work = || {
        jobs.par_iter()
            .map(|&(c, t)| {
                run_trial(
                    cfg,
                    &cells[c],
                    t,
                    mix_seed(cfg.master_seed, c as u64, t as u64),
                )
            })
            .collect::<Result<Vec<_>>>()
    };
    match cfg.jobs {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

fn expect_kind(cfg: &SweepConfig, kind: ExperimentKind) -> Result<()> {
    if cfg.experiment != kind {
        return Err(invalid(
            "experiment",
            format!("expected a {} sweep", kind.as_str()),
        ));
    }
    Ok(())
}

pub fn run_criterion_sweep(cfg: &SweepConfig) -> Result<Vec<TrialRecord>> {
    expect_kind(cfg, ExperimentKind::Criterion)?;
    run_sweep(cfg)
}

pub fn run_matching_sweep(cfg: &SweepConfig) -> Result<Vec<TrialRecord>> {
    expect_kind(cfg, ExperimentKind::Matching)?;
    run_sweep(cfg)
}

pub fn run_gap_sweep(cfg: &SweepConfig) -> Result<Vec<TrialRecord>> {
    expect_kind(cfg, ExperimentKind::Gap)?;
    run_sweep(cfg)
}

pub fn run_duplicate_stats(cfg: &SweepConfig) -> Result<Vec<TrialRecord>> {
    expect_kind(cfg, ExperimentKind::Duplicates)?;
    run_sweep(cfg)
}

/// Config comments, header and rows.
pub fn write_table<W: Write>(
    out: &mut W,
    cfg: &SweepConfig,
    records: &[TrialRecord],
    format: OutputFormat,
) -> io::Result<()> {
    for line in cfg.comment_lines() {
        writeln!(out, "{line}")?;
    }
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for r in records {
                writeln!(out, "{}", r.csv_row())?;
            }
        }
        OutputFormat::Jsonl => {
            for r in records {
                writeln!(out, "{}", r.json_line())?;
            }
        }
    }
    Ok(())
}

pub fn render_table(cfg: &SweepConfig, records: &[TrialRecord], format: OutputFormat) -> String {
    let mut buf = Vec::new();
    write_table(&mut buf, cfg, records, format).expect("writing to memory");
    String::from_utf8(buf).expect("utf-8 output")
}

/// Per-cell aggregates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellSummary {
    #[serde(flatten)]
    pub cell: Cell,
    pub trials: usize,
    /// Fraction with `criterion` true, or with a found matching.
    pub success_fraction: f64,
    pub connected_fraction: Option<f64>,
    pub lambda1_median: Option<f64>,
    pub lambda1_min: Option<f64>,
    pub bound: Option<f64>,
    /// Largest max/min degree ratio among trials.
    pub degree_ratio_max: Option<f64>,
    pub duplicates_mean: Option<f64>,
    /// Mean duplicates per edge.
    pub duplicate_ratio: Option<f64>,
    pub bipartite_fraction: Option<f64>,
}

pub fn median(xs: &mut [f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let k = xs.len();
    Some(if k % 2 == 1 {
        xs[k / 2]
    } else {
        0.5 * (xs[k / 2 - 1] + xs[k / 2])
    })
}

fn fraction(it: impl Iterator<Item = bool>) -> Option<f64> {
    let (mut hit, mut all) = (0usize, 0usize);
    for b in it {
        all += 1;
        hit += usize::from(b);
    }
    (all > 0).then(|| hit as f64 / all as f64)
}

pub fn summarize(cfg: &SweepConfig, records: &[TrialRecord]) -> Vec<CellSummary> {
    cfg.cells()
        .into_iter()
        .enumerate()
        .map(|(c, cell)| {
            let rs = &records[c * cfg.trials..(c + 1) * cfg.trials];
            let success = rs
                .iter()
                .filter(|r| r.criterion == Some(true) || r.matching.as_deref() == Some("found"))
                .count() as f64
                / rs.len() as f64;
            let mut l1: Vec<f64> = rs.iter().filter_map(|r| r.lambda1).collect();
            let lambda1_min = l1.iter().copied().reduce(f64::min);
            let ratios: Vec<f64> = rs
                .iter()
                .filter_map(|r| Some(r.extras.max_degree? / r.extras.min_degree?))
                .collect();
            let dups: Vec<(usize, usize)> = rs
                .iter()
                .filter_map(|r| Some((r.duplicates?, r.extras.edge_count?)))
                .collect();
            CellSummary {
                trials: rs.len(),
                success_fraction: success,
                connected_fraction: fraction(rs.iter().filter_map(|r| r.connected)),
                lambda1_median: median(&mut l1),
                lambda1_min,
                bound: cell.bound(),
                degree_ratio_max: ratios.iter().copied().reduce(f64::max),
                duplicates_mean: (!dups.is_empty())
                    .then(|| dups.iter().map(|d| d.0 as f64).sum::<f64>() / dups.len() as f64),
                duplicate_ratio: {
                    let edges: usize = dups.iter().map(|d| d.1).sum();
                    (edges > 0)
                        .then(|| dups.iter().map(|d| d.0).sum::<usize>() as f64 / edges as f64)
                },
                bipartite_fraction: fraction(rs.iter().filter_map(|r| r.extras.bipartite)),
                cell,
            }
        })
        .collect()
}

pub const SUMMARY_HEADER: &str = "experiment,model,n,m,l,d,v,M,p,trials,success_fraction,connected_fraction,lambda1_median,lambda1_min,bound,degree_ratio_max,duplicates_mean,duplicate_ratio,bipartite_fraction";

pub fn render_summary(summaries: &[CellSummary]) -> String {
    fn opt<T: ToString>(x: &Option<T>) -> String {
        x.as_ref().map(|v| v.to_string()).unwrap_or_default()
    }
    let mut s = String::new();
    writeln!(s, "{SUMMARY_HEADER}").unwrap();
    for c in summaries {
        let row = [
            c.cell.experiment.to_string(),
            c.cell.model.clone(),
            opt(&c.cell.n),
            opt(&c.cell.m),
            opt(&c.cell.l),
            opt(&c.cell.d),
            opt(&c.cell.v),
            opt(&c.cell.big_m),
            opt(&c.cell.p),
            c.trials.to_string(),
            c.success_fraction.to_string(),
            opt(&c.connected_fraction),
            opt(&c.lambda1_median),
            opt(&c.lambda1_min),
            opt(&c.bound),
            opt(&c.degree_ratio_max),
            opt(&c.duplicates_mean),
            opt(&c.duplicate_ratio),
            opt(&c.bipartite_fraction),
        ];
        writeln!(s, "{}", row.join(",")).unwrap();
    }
    s
}

/// Whether `fractions` never drops by more than `2/sqrt(trials)`.
pub fn monotone_within_noise(fractions: &[f64], trials: usize) -> bool {
    let tol = 2.0 / (trials as f64).sqrt();
    fractions.windows(2).all(|w| w[1] >= w[0] - tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_criterion() -> SweepConfig {
        SweepConfig {
            sizes: vec![20],
            densities: vec![0.1, 0.45],
            trials: 4,
            master_seed: 9,
            ..SweepConfig::new(ExperimentKind::Criterion)
        }
    }

    #[test]
    fn seed_mixing_is_pure_and_spread() {
        assert_eq!(mix_seed(1, 2, 3), mix_seed(1, 2, 3));
        assert_ne!(mix_seed(1, 2, 3), mix_seed(1, 3, 2));
        assert_ne!(mix_seed(0, 0, 0), mix_seed(0, 0, 1));
        // reference value of the splitmix64 finalizer
        assert_eq!(splitmix64(0), 0xe220_a839_7b1d_cdaf);
    }

    #[test]
    fn records_reproduce_individually() {
        let cfg = small_criterion();
        let recs = run_criterion_sweep(&cfg).unwrap();
        assert_eq!(recs.len(), 8);
        let cells = cfg.cells();
        for (i, r) in recs.iter().enumerate() {
            let c = i / cfg.trials;
            assert_eq!(r.seed, mix_seed(9, c as u64, r.trial as u64));
            let again = run_trial(&cfg, &cells[c], r.trial, r.seed).unwrap();
            assert_eq!(&again, r);
        }
    }

    #[test]
    fn output_independent_of_workers() {
        let mut cfg = small_criterion();
        cfg.jobs = Some(1);
        let a = render_table(&cfg, &run_sweep(&cfg).unwrap(), OutputFormat::Csv);
        cfg.jobs = Some(3);
        let b = render_table(&cfg, &run_sweep(&cfg).unwrap(), OutputFormat::Csv);
        assert_eq!(a, b);
        assert!(a.contains(CSV_HEADER));
        assert!(!a.contains("jobs"));
    }

    #[test]
    fn csv_leaves_missing_fields_empty() {
        let cfg = small_criterion();
        let recs = run_sweep(&cfg).unwrap();
        let row = recs[0].csv_row();
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), CSV_HEADER.split(',').count());
        assert_eq!(cols[2], "");
        assert_eq!(cols[3], "20");
        assert_eq!(cols[14], "");
        assert_eq!(cols[16], "");
        let v: serde_json::Value = serde_json::from_str(&recs[0].json_line()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        let mut expected: Vec<&str> = CSV_HEADER.split(',').collect();
        let mut got = keys.clone();
        expected.sort();
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn validation_names_flags() {
        let mut cfg = small_criterion();
        cfg.densities = vec![1.5];
        assert!(matches!(
            cfg.validate(),
            Err(Error::InvalidParameter { name: "d", .. })
        ));
        let mut cfg = small_criterion();
        cfg.trials = 0;
        assert!(matches!(
            cfg.validate(),
            Err(Error::InvalidParameter { name: "trials", .. })
        ));
        let mut cfg = SweepConfig::new(ExperimentKind::Gap);
        cfg.models = vec!["gnm".into()];
        cfg.sizes = vec![10];
        assert!(matches!(
            cfg.validate(),
            Err(Error::InvalidParameter { name: "M", .. })
        ));
        cfg.edges = vec![100];
        assert!(matches!(
            cfg.validate(),
            Err(Error::InvalidParameter { name: "M", .. })
        ));
        let mut cfg = SweepConfig::new(ExperimentKind::Matching);
        cfg.models = vec!["g3-reduced".into()];
        cfg.sizes = vec![7];
        cfg.edges = vec![10];
        assert!(matches!(
            cfg.validate(),
            Err(Error::InvalidParameter { name: "n", .. })
        ));
    }

    #[test]
    fn duplicate_stats_zero_relators() {
        // m = 2, d small: floor(3^(3d)) = 1 relator, no duplicates possible
        let cfg = SweepConfig {
            sizes: vec![2],
            densities: vec![0.01],
            trials: 3,
            ..SweepConfig::new(ExperimentKind::Duplicates)
        };
        let recs = run_duplicate_stats(&cfg).unwrap();
        assert!(recs.iter().all(|r| r.duplicates == Some(0)));
    }

    #[test]
    fn gap_and_matching_smoke() {
        let cfg = SweepConfig {
            models: vec![
                "configuration".into(),
                "gnp".into(),
                "bipartite-regular".into(),
            ],
            sizes: vec![30],
            v: vec![3],
            p: vec![0.3],
            trials: 2,
            ..SweepConfig::new(ExperimentKind::Gap)
        };
        let recs = run_gap_sweep(&cfg).unwrap();
        assert_eq!(recs.len(), 6);
        assert!(recs
            .iter()
            .all(|r| r.lambda1.is_some() && r.extras.bound.is_some()));
        let s = summarize(&cfg, &recs);
        assert_eq!(s.len(), 3);
        assert!(render_summary(&s).starts_with(SUMMARY_HEADER));

        let cfg = SweepConfig {
            models: vec!["g3".into(), "g3-reduced".into()],
            sizes: vec![20],
            edges: vec![10, 400],
            trials: 2,
            ..SweepConfig::new(ExperimentKind::Matching)
        };
        let recs = run_matching_sweep(&cfg).unwrap();
        let s = summarize(&cfg, &recs);
        assert_eq!(s[0].success_fraction, 0.0);
        assert_eq!(s[2].success_fraction, 0.0);
    }

    #[test]
    fn noise_tolerant_monotonicity() {
        assert!(monotone_within_noise(&[0.0, 0.5, 0.45, 1.0], 100));
        assert!(!monotone_within_noise(&[0.9, 0.2], 100));
    }
}
