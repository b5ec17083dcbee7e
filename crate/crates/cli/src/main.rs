//! `randgroups`: samplers, link graphs, spectral checks, matchings,
//! embeddings and sweeps from the command line.
//!
//! Exit status: 0 on success, 1 on a usage error, 2 on a runtime error.

use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use randgroups::embed::{build_word_table, coset_normal_form, phi_map, sample_gromov_restricted};
use randgroups::experiments::{
    render_summary, run_sweep, summarize, write_table, ExperimentKind, OutputFormat, SweepConfig,
    DEFAULT_TRIALS,
};
use randgroups::linkgraph::{build_link_graph, split_link_parts};
use randgroups::matching::{
    build_hypergraph, build_positive_hypergraph, extract_permutation_subsets,
    find_perfect_matching, sample_tripartite, Alphabet, Extraction, MatchMode, MatchOptions,
    MatchOutcome, RelatorHypergraph,
};
use randgroups::models::{
    sample_graph, sample_gromov, sample_permutation_model, sample_triangular, GraphKind,
};
use randgroups::spectral::{graph_report, spectral_criterion, SpectralReport};
use randgroups::{Error, Multigraph, Presentation, Word};

#[derive(Parser)]
#[command(
    name = "randgroups",
    version,
    about = "Random group presentations and the spectral criterion for property (T)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a presentation, graph or hypergraph.
    Sample(SampleArgs),
    /// Build the link graph of a presentation.
    Link(LinkArgs),
    /// Normalized Laplacian spectrum of a graph.
    Spectrum(SpectrumArgs),
    /// Connectivity and lambda_1 > 1/2 on the link graph.
    Criterion(CriterionArgs),
    /// Perfect matchings in relator hypergraphs.
    Match(MatchArgs),
    /// Word tables, the triangular-to-Gromov map and coset normal forms.
    Embed(EmbedArgs),
    /// Monte Carlo parameter sweeps.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Model {
    Gromov,
    Triangular,
    PositiveTriangular,
    Permutation,
    PermutationReduced,
    GromovRestricted,
    Configuration,
    ConfigurationReduced,
    Gnp,
    Gnm,
    BipartiteRegular,
    G3,
    G3Reduced,
}

#[derive(Args, Clone, Debug)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: Option<Model>,
    /// Generators of a triangular model.
    #[arg(long)]
    m: Option<usize>,
    /// Generators (group models), vertices (graph models) or part size (g3).
    #[arg(long)]
    n: Option<usize>,
    /// Relator length.
    #[arg(long)]
    l: Option<usize>,
    /// Density.
    #[arg(long)]
    d: Option<f64>,
    /// Number of permutation pairs or permutations.
    #[arg(long)]
    v: Option<usize>,
    /// Edge count.
    #[arg(long = "M", value_name = "M")]
    big_m: Option<usize>,
    /// Edge probability.
    #[arg(long)]
    p: Option<f64>,
    /// Relator count multiplier for gromov-restricted.
    #[arg(long, default_value_t = 0.5)]
    count_scale: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LinkArgs {
    #[arg(long)]
    presentation: PathBuf,
    /// Only the edges contributed by this relator position.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    part: Option<u8>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(
        long,
        conflicts_with = "presentation",
        required_unless_present = "presentation"
    )]
    graph: Option<PathBuf>,
    /// Use the link graph of this presentation.
    #[arg(long)]
    presentation: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CriterionArgs {
    #[arg(long, conflicts_with = "model")]
    presentation: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Heuristic,
}

impl From<ModeArg> for MatchMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => MatchMode::Exact,
            ModeArg::Heuristic => MatchMode::Heuristic,
        }
    }
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long, conflicts_with_all = ["presentation", "model"])]
    hypergraph: Option<PathBuf>,
    #[arg(long, conflicts_with = "model")]
    presentation: Option<PathBuf>,
    /// Read the presentation as positive (alphabet of m letters).
    #[arg(long, requires = "presentation")]
    positive: bool,
    /// Extract this many permutation pairs from the presentation.
    #[arg(long, requires = "presentation")]
    v: Option<usize>,
    /// Sample a g3 or g3-reduced hypergraph.
    #[arg(long, value_parser = ["g3", "g3-reduced"])]
    model: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "M", value_name = "M")]
    big_m: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Heuristic)]
    mode: ModeArg,
    /// Heuristic restarts.
    #[arg(long)]
    restarts: Option<usize>,
    /// Kick-out steps per restart.
    #[arg(long)]
    steps: Option<usize>,
    /// Exact-solver node budget.
    #[arg(long)]
    budget: Option<u64>,
    /// Largest part size for the exact solver.
    #[arg(long)]
    exact_cap: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    l: usize,
    /// Coset normal form of this word.
    #[arg(long, conflicts_with_all = ["presentation", "table"], allow_hyphen_values = true)]
    word: Option<String>,
    /// Map a positive triangular presentation to length-l relators.
    #[arg(long, conflicts_with = "table")]
    presentation: Option<PathBuf>,
    /// Print the word table.
    #[arg(long)]
    table: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    experiment: String,
    #[arg(long = "model", value_delimiter = ',')]
    models: Vec<String>,
    /// Generator counts (criterion, duplicates).
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    /// Part sizes (matching) or vertex parameters (gap).
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    d: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    v: Vec<usize>,
    #[arg(long = "M", value_name = "M", value_delimiter = ',')]
    big_m: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Heuristic)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Record per-trial wall-clock time.
    #[arg(long)]
    timing: bool,
    /// Print a per-cell summary to stderr.
    #[arg(long)]
    summary: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { name, reason } => {
                Failure::Usage(format!("invalid value for --{name}: {reason}"))
            }
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Sample(a) => cmd_sample(a),
        Command::Link(a) => cmd_link(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Criterion(a) => cmd_criterion(a),
        Command::Match(a) => cmd_match(a),
        Command::Embed(a) => cmd_embed(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn need<T>(value: Option<T>, flag: &str, why: &str) -> CliResult<T> {
    value.ok_or_else(|| Failure::Usage(format!("missing --{flag} (required for {why})")))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn read_artifact<T>(path: &Path) -> CliResult<T>
where
    T: FromStr<Err = Error>,
{
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Runtime(format!("cannot read {}: {e}", path.display())))?;
    text.parse()
        .map_err(|e: Error| Failure::Runtime(format!("{}: {e}", path.display())))
}

enum Artifact {
    Presentation(Presentation),
    Graph(Multigraph),
    Hypergraph(RelatorHypergraph),
}

impl Display for Artifact {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Artifact::Presentation(p) => p.fmt(f),
            Artifact::Graph(g) => g.fmt(f),
            Artifact::Hypergraph(h) => h.fmt(f),
        }
    }
}

fn model_name(model: Model) -> String {
    model
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

fn sample_artifact(a: &ModelArgs) -> CliResult<Artifact> {
    let model = need(a.model, "model", "sampling")?;
    let name = &model_name(model);
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let rng = &mut rng;
    let pres = |p| Ok(Artifact::Presentation(p));
    match model {
        Model::Gromov => {
            let (n, l, d) = (
                need(a.n, "n", name)?,
                need(a.l, "l", name)?,
                need(a.d, "d", name)?,
            );
            pres(sample_gromov(n, l, d, rng)?)
        }
        Model::Triangular | Model::PositiveTriangular => {
            let (m, d) = (need(a.m, "m", name)?, need(a.d, "d", name)?);
            pres(sample_triangular(
                m,
                d,
                rng,
                model == Model::PositiveTriangular,
            )?)
        }
        Model::Permutation | Model::PermutationReduced => {
            let (n, v) = (need(a.n, "n", name)?, need(a.v, "v", name)?);
            pres(sample_permutation_model(n, v, rng, model == Model::PermutationReduced)?.0)
        }
        Model::GromovRestricted => {
            let (n, l, d) = (
                need(a.n, "n", name)?,
                need(a.l, "l", name)?,
                need(a.d, "d", name)?,
            );
            pres(sample_gromov_restricted(n, l, d, a.count_scale, rng)?)
        }
        Model::Configuration => {
            let (n, v) = (need(a.n, "n", name)?, need(a.v, "v", name)?);
            Ok(Artifact::Graph(sample_graph(
                GraphKind::Configuration { n, v },
                rng,
            )?))
        }
        Model::ConfigurationReduced => {
            let (n, v) = (need(a.n, "n", name)?, need(a.v, "v", name)?);
            Ok(Artifact::Graph(sample_graph(
                GraphKind::ConfigurationReduced { n, v },
                rng,
            )?))
        }
        Model::BipartiteRegular => {
            let (n, v) = (need(a.n, "n", name)?, need(a.v, "v", name)?);
            Ok(Artifact::Graph(sample_graph(
                GraphKind::BipartiteRegular { n, v },
                rng,
            )?))
        }
        Model::Gnp => {
            let (n, p) = (need(a.n, "n", name)?, need(a.p, "p", name)?);
            Ok(Artifact::Graph(sample_graph(GraphKind::Gnp { n, p }, rng)?))
        }
        Model::Gnm => {
            let (n, m) = (need(a.n, "n", name)?, need(a.big_m, "M", name)?);
            Ok(Artifact::Graph(sample_graph(GraphKind::Gnm { n, m }, rng)?))
        }
        Model::G3 | Model::G3Reduced => {
            let (n, big_m) = (need(a.n, "n", name)?, need(a.big_m, "M", name)?);
            Ok(Artifact::Hypergraph(sample_g3(
                model == Model::G3Reduced,
                n,
                big_m,
                rng,
            )?))
        }
    }
}

fn sample_g3(
    reduced: bool,
    n: usize,
    big_m: usize,
    rng: &mut ChaCha8Rng,
) -> CliResult<RelatorHypergraph> {
    let alphabet = if reduced {
        if !n.is_multiple_of(2) {
            return Err(Failure::Usage(
                "invalid value for --n: g3-reduced needs an even part size".into(),
            ));
        }
        Alphabet::Signed { m: n / 2 }
    } else {
        Alphabet::Plain { part_size: n }
    };
    Ok(sample_tripartite(alphabet, big_m, reduced, rng)?)
}

fn cmd_sample(a: SampleArgs) -> CliResult<()> {
    let artifact = sample_artifact(&a.model)?;
    match &artifact {
        Artifact::Presentation(p) => eprintln!(
            "sampled {}: {} generators, {} relators",
            p.model_tag.as_str(),
            p.generator_count,
            p.relators.len()
        ),
        Artifact::Graph(g) => eprintln!(
            "sampled graph: {} vertices, {} edges",
            g.vertex_count(),
            g.edge_count()
        ),
        Artifact::Hypergraph(h) => eprintln!(
            "sampled hypergraph: part size {}, {} edges",
            h.part_size(),
            h.edge_count()
        ),
    }
    emit(a.out.as_deref(), &artifact.to_string())
}

fn cmd_link(a: LinkArgs) -> CliResult<()> {
    let p: Presentation = read_artifact(&a.presentation)?;
    let g = match a.part {
        None => build_link_graph(&p)?,
        Some(k) => split_link_parts(&p)?[usize::from(k) - 1].clone(),
    };
    eprintln!(
        "link graph: {} vertices, {} edges, {}",
        g.vertex_count(),
        g.edge_count(),
        if g.is_connected() {
            "connected"
        } else {
            "disconnected"
        }
    );
    emit(a.out.as_deref(), &g.to_string())
}

fn describe(r: &SpectralReport) -> String {
    match (r.lambda1, &r.note) {
        (_, Some(note)) => format!("spectrum unavailable: {note}"),
        (Some(l1), None) => format!(
            "lambda_1 = {l1:.6}, {}",
            if r.connected {
                "connected"
            } else {
                "disconnected"
            }
        ),
        (None, None) => "lambda_1 undefined (disconnected)".to_string(),
    }
}

fn cmd_spectrum(a: SpectrumArgs) -> CliResult<()> {
    let g = match (&a.graph, &a.presentation) {
        (Some(path), _) => read_artifact::<Multigraph>(path)?,
        (None, Some(path)) => build_link_graph(&read_artifact::<Presentation>(path)?)?,
        (None, None) => return Err(Failure::Usage("missing --graph or --presentation".into())),
    };
    let report = graph_report(&g);
    eprintln!("{}", describe(&report));
    emit(a.out.as_deref(), &format!("{}\n", report.to_json()))?;
    match report.note {
        Some(note) => Err(Failure::Runtime(note)),
        None => Ok(()),
    }
}

fn cmd_criterion(a: CriterionArgs) -> CliResult<()> {
    let p = match &a.presentation {
        Some(path) => read_artifact::<Presentation>(path)?,
        None => match sample_artifact(&a.model)? {
            Artifact::Presentation(p) => p,
            _ => {
                return Err(Failure::Usage(
                    "invalid value for --model: the criterion needs a group model".into(),
                ))
            }
        },
    };
    let (holds, report) = spectral_criterion(&p)?;
    let verdict = if holds {
        format!("criterion holds: {}; property (T)", describe(&report))
    } else {
        format!("criterion fails: {}; inconclusive", describe(&report))
    };
    eprintln!("{verdict}");
    emit(a.out.as_deref(), &format!("{}\n", report.to_json()))
}

fn match_options(a: &MatchArgs) -> MatchOptions {
    let mut opts = MatchOptions {
        mode: a.mode.into(),
        seed: a.seed,
        ..MatchOptions::default()
    };
    if let Some(r) = a.restarts {
        opts.restarts = r;
    }
    if a.steps.is_some() {
        opts.steps_per_restart = a.steps;
    }
    if let Some(b) = a.budget {
        opts.node_budget = b;
    }
    if let Some(c) = a.exact_cap {
        opts.exact_cap = c;
    }
    opts
}

fn cmd_match(a: MatchArgs) -> CliResult<()> {
    let opts = match_options(&a);
    if let (Some(path), Some(v)) = (&a.presentation, a.v) {
        let p: Presentation = read_artifact(path)?;
        let value = match extract_permutation_subsets(&p, v, &opts)? {
            Extraction::Found {
                pairs,
                relator_indices,
            } => {
                eprintln!(
                    "extracted {v} permutation pairs, reduced: {}",
                    pairs.is_reduced()
                );
                json!({
                    "outcome": "found",
                    "reduced": pairs.is_reduced(),
                    "pairs": pairs.pairs.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
                    "relator_indices": relator_indices,
                })
            }
            Extraction::NotFound => {
                eprintln!("no extraction of {v} permutation pairs found");
                json!({ "outcome": "not_found" })
            }
        };
        return emit(a.out.as_deref(), &format!("{value}\n"));
    }
    let h = if let Some(path) = &a.hypergraph {
        read_artifact::<RelatorHypergraph>(path)?
    } else if let Some(path) = &a.presentation {
        let p: Presentation = read_artifact(path)?;
        if a.positive {
            build_positive_hypergraph(&p)?
        } else {
            build_hypergraph(&p)?
        }
    } else if let Some(model) = &a.model {
        let n = need(a.n, "n", model)?;
        let big_m = need(a.big_m, "M", model)?;
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        sample_g3(model == "g3-reduced", n, big_m, &mut rng)?
    } else {
        return Err(Failure::Usage(
            "missing --hypergraph, --presentation or --model".into(),
        ));
    };
    let outcome = find_perfect_matching(&h, &opts)?;
    eprintln!(
        "perfect matching: {} (part size {}, {} edges)",
        outcome.label(),
        h.part_size(),
        h.edge_count()
    );
    let value = match &outcome {
        MatchOutcome::Found(mt) => json!({
            "outcome": outcome.label(),
            "reduced": mt.reduced,
            "edges": mt.edges,
        }),
        _ => json!({ "outcome": outcome.label() }),
    };
    emit(a.out.as_deref(), &format!("{value}\n"))?;
    match outcome {
        MatchOutcome::BudgetExhausted => Err(Failure::Runtime(
            "exact search exhausted its node budget".into(),
        )),
        _ => Ok(()),
    }
}

fn cmd_embed(a: EmbedArgs) -> CliResult<()> {
    let t = build_word_table(a.n, a.l)?;
    if let Some(text) = &a.word {
        let w: Word = text
            .parse()
            .map_err(|e: Error| Failure::Usage(format!("invalid value for --word: {e}")))?;
        if w.max_generator() as usize > a.n {
            return Err(Failure::Usage(format!(
                "invalid value for --word: uses a generator beyond n = {}",
                a.n
            )));
        }
        let form = coset_normal_form(&w, &t)?;
        eprintln!(
            "coset normal form: prefix length {}, {} factors",
            form.prefix.len(),
            form.factors.len()
        );
        emit(a.out.as_deref(), &form.to_string())
    } else if let Some(path) = &a.presentation {
        let p: Presentation = read_artifact(path)?;
        let image = phi_map(&p, &t)?;
        eprintln!("mapped {} relators to length {}", image.relators.len(), a.l);
        emit(a.out.as_deref(), &image.to_string())
    } else if a.table {
        eprintln!(
            "word table: {} words of length {}",
            t.len(),
            t.block_length()
        );
        let mut text = String::new();
        for w in t.words() {
            text.push_str(&w.to_string());
            text.push('\n');
        }
        emit(a.out.as_deref(), &text)
    } else {
        Err(Failure::Usage(
            "missing --word, --presentation or --table".into(),
        ))
    }
}

fn sweep_config(a: &SweepArgs) -> CliResult<SweepConfig> {
    let kind = ExperimentKind::parse(&a.experiment).ok_or_else(|| {
        Failure::Usage(format!(
            "invalid value for --experiment: `{}` (expected criterion, matching, gap or duplicates)",
            a.experiment
        ))
    })?;
    let mut cfg = SweepConfig::new(kind);
    if !a.models.is_empty() {
        cfg.models = a.models.clone();
    }
    let (size_flag, sizes, other_flag, other) = match kind {
        ExperimentKind::Criterion | ExperimentKind::Duplicates => ("m", &a.m, "n", &a.n),
        ExperimentKind::Matching | ExperimentKind::Gap => ("n", &a.n, "m", &a.m),
    };
    if !other.is_empty() {
        return Err(Failure::Usage(format!(
            "unexpected --{other_flag} for a {} sweep (use --{size_flag})",
            kind.as_str()
        )));
    }
    if sizes.is_empty() {
        return Err(Failure::Usage(format!(
            "missing --{size_flag} (required for {} sweeps)",
            kind.as_str()
        )));
    }
    cfg.sizes = sizes.clone();
    cfg.densities = a.d.clone();
    cfg.v = a.v.clone();
    cfg.edges = a.big_m.clone();
    cfg.p = a.p.clone();
    cfg.trials = a.trials;
    cfg.master_seed = a.seed;
    cfg.match_mode = a.mode.into();
    cfg.timing = a.timing;
    cfg.jobs = a.jobs;
    for model in &cfg.models {
        let required: &[(&str, bool)] = match (kind, model.as_str()) {
            (ExperimentKind::Criterion | ExperimentKind::Duplicates, _) => {
                &[("d", cfg.densities.is_empty())]
            }
            (ExperimentKind::Matching, _) | (ExperimentKind::Gap, "gnm") => {
                &[("M", cfg.edges.is_empty())]
            }
            (ExperimentKind::Gap, "gnp") => &[("p", cfg.p.is_empty())],
            (ExperimentKind::Gap, _) => &[("v", cfg.v.is_empty())],
        };
        for &(flag, missing) in required {
            if missing {
                return Err(Failure::Usage(format!(
                    "missing --{flag} (required for model {model})"
                )));
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_sweep(a: SweepArgs) -> CliResult<()> {
    let cfg = sweep_config(&a)?;
    let records = run_sweep(&cfg)?;
    let format = match a.format {
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Jsonl => OutputFormat::Jsonl,
    };
    let mut buf = Vec::new();
    writeln!(buf, "# format={}", format_name(a.format))?;
    write_table(&mut buf, &cfg, &records, format)?;
    let text = String::from_utf8(buf).map_err(|e| Failure::Runtime(e.to_string()))?;
    emit(a.out.as_deref(), &text)?;
    if a.summary {
        eprint!("{}", render_summary(&summarize(&cfg, &records)));
    } else {
        eprintln!(
            "{} sweep: {} trials in {} cells",
            cfg.experiment.as_str(),
            records.len(),
            cfg.cells().len()
        );
    }
    Ok(())
}

fn format_name(f: FormatArg) -> &'static str {
    match f {
        FormatArg::Csv => "csv",
        FormatArg::Jsonl => "jsonl",
    }
}
