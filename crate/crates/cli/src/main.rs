use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use regsub::experiment::{
    emit_results, emit_rounds, load_dataset, results_csv, rounds_path, run_on_dataset, write_edge_list,
    write_matrix, ExperimentConfig, ObjectiveKind,
};
use regsub::modefinding::sample_slc_matrix;
use regsub::synth::{random_digraph, random_features};
use regsub::validate::check_oracle;

#[derive(Parser)]
#[command(name = "regsub", version, about = "Regularized submodular maximization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (algorithm, k, seed) cell and write a results CSV.
    Run(RunArgs),
    /// Spot-check monotonicity, submodularity and g(∅) = 0 of a dataset's objective.
    Validate(ValidateArgs),
    /// Generate synthetic inputs.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Args)]
struct DatasetArgs {
    /// TOML experiment file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// coverage, facility, logdet, saturating or slc.
    #[arg(long)]
    objective: Option<String>,
    /// Degree threshold of the coverage cost.
    #[arg(long)]
    q: Option<i64>,
    /// Uniform element cost for objectives without built-in costs.
    #[arg(long)]
    cost: Option<f64>,
    /// Slack of the slc objective.
    #[arg(long)]
    gamma: Option<f64>,
    /// CSV inputs start with a header row.
    #[arg(long)]
    header: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    data: DatasetArgs,
    /// Comma-separated algorithm ids.
    #[arg(long, value_delimiter = ',')]
    algo: Vec<String>,
    /// Comma-separated budgets.
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    machines: Option<usize>,
    /// Comma-separated seeds.
    #[arg(long, value_delimiter = ',')]
    seed: Vec<u64>,
    /// natural, shuffled or file:<path>.
    #[arg(long)]
    stream_order: Option<String>,
    /// Results CSV; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    data: DatasetArgs,
    #[arg(long, default_value_t = 500)]
    triples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Directed G(n, p) edge list.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Gaussian feature matrix, one row per element.
    Features {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// SLC kernel with log-normal spectrum; parameters go to `<out>.meta.toml`.
    Slc {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn base_config(data: &DatasetArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &data.config {
        Some(p) => ExperimentConfig::load(p).with_context(|| format!("reading config {}", p.display()))?,
        None => ExperimentConfig::default(),
    };
    if let Some(d) = &data.dataset {
        cfg.dataset = d.clone();
    }
    if let Some(o) = &data.objective {
        cfg.objective = o.parse::<ObjectiveKind>()?;
    }
    if let Some(q) = data.q {
        cfg.q = q;
    }
    if let Some(c) = data.cost {
        cfg.cost = c;
    }
    if let Some(g) = data.gamma {
        cfg.gamma = g;
    }
    if data.header {
        cfg.header = true;
    }
    Ok(cfg)
}

fn run(args: RunArgs) -> Result<()> {
    let mut cfg = base_config(&args.data)?;
    if !args.algo.is_empty() {
        cfg.algorithms = args.algo;
    }
    if !args.k.is_empty() {
        cfg.k = args.k;
    }
    if !args.seed.is_empty() {
        cfg.seeds = args.seed;
    }
    if let Some(v) = args.eps {
        cfg.eps = v;
    }
    if let Some(v) = args.delta {
        cfg.delta = v;
    }
    if let Some(v) = args.machines {
        cfg.machines = v;
    }
    if let Some(v) = args.stream_order {
        cfg.stream_order = v;
    }
    if args.out.is_some() {
        cfg.out = args.out;
    }
    cfg.validate()?;

    let dataset = load_dataset(&cfg).with_context(|| format!("loading dataset {}", cfg.dataset.display()))?;
    eprintln!(
        "dataset {} ({} elements, objective {})",
        dataset.name,
        dataset.n(),
        cfg.objective.id()
    );
    let output = run_on_dataset(&cfg, &dataset)?;
    match &cfg.out {
        Some(out) => {
            emit_results(&output.rows, out)?;
            eprintln!("wrote {} rows to {}", output.rows.len(), out.display());
            if !output.rounds.is_empty() {
                let rp = rounds_path(out);
                emit_rounds(&output.rounds, &rp)?;
                eprintln!("wrote {} round rows to {}", output.rounds.len(), rp.display());
            }
        }
        None => print!("{}", results_csv(&output.rows)?),
    }
    Ok(())
}

fn validate(args: ValidateArgs) -> Result<bool> {
    let cfg = base_config(&args.data)?;
    if cfg.dataset.as_os_str().is_empty() {
        bail!("no dataset given");
    }
    let dataset = load_dataset(&cfg).with_context(|| format!("loading dataset {}", cfg.dataset.display()))?;
    let report = check_oracle(&*dataset.oracle, args.triples, args.seed);
    let ok = report.passes(args.tol);
    println!("dataset: {} ({} elements, objective {})", dataset.name, dataset.n(), cfg.objective.id());
    println!("triples: {}", report.triples);
    println!("g(empty): {}", report.empty_value + 0.0);
    println!("max submodularity violation: {:e}", report.submodular_violation);
    println!("max monotonicity violation: {:e}", report.monotone_violation + 0.0);
    println!("result: {}", if ok { "pass" } else { "FAIL" });
    Ok(ok)
}

fn meta_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.meta.toml"))
}

fn generate(cmd: GenCommand) -> Result<()> {
    match cmd {
        GenCommand::Graph { n, p, seed, out } => {
            if !(0.0..=1.0).contains(&p) {
                bail!("p must lie in [0, 1], got {p}");
            }
            let g = random_digraph(n, p, seed);
            write_edge_list(&out, &g)?;
            eprintln!("wrote {} edges to {}", g.edge_count(), out.display());
        }
        GenCommand::Features { n, dim, seed, out } => {
            write_matrix(&out, &random_features(n, dim, seed))?;
            eprintln!("wrote {n}x{dim} features to {}", out.display());
        }
        GenCommand::Slc {
            n,
            mu,
            sigma,
            seed,
            out,
        } => {
            let s = sample_slc_matrix(n, mu, sigma, seed)?;
            write_matrix(&out, &s.matrix)?;
            let spectrum: Vec<String> = s.spectrum.iter().map(|v| format!("{v:e}")).collect();
            let meta = format!(
                "n = {n}\nmu = {mu:?}\nsigma = {sigma:?}\nseed = {seed}\nspectrum = [{}]\n",
                spectrum.join(", ")
            );
            let mp = meta_path(&out);
            std::fs::write(&mp, meta).with_context(|| format!("writing {}", mp.display()))?;
            eprintln!("wrote {n}x{n} kernel to {} and parameters to {}", out.display(), mp.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a).map(|_| true),
        Command::Validate(a) => validate(a),
        Command::Gen(g) => generate(g).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
