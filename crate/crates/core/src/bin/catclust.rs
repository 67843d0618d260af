use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use catclust::manifest::RunManifest;
use catclust::{
    cluster_best_of, discretize_numeric, generate_synthetic, load_csv_with, load_numeric_csv, pairwise_matrix,
    silhouette_values, sweep, Algorithm, CategoricalDataset, ClusteringConfig, CsvOptions, Error, GradeLabels, Measure,
    Precision, RestartSelection, SweepConfig, SyntheticParams,
};

#[derive(Parser)]
#[command(
    name = "catclust",
    version,
    about = "Categorical clustering and cluster-count estimation"
)]
struct Cli {
    /// Worker threads for matrix, restart and sweep computation.
    #[arg(long, global = true, env = "CATCLUST_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the pairwise dissimilarity matrix of a dataset.
    Matrix(MatrixArgs),
    /// Cluster a dataset for one k.
    Cluster(ClusterArgs),
    /// Cluster for every k in a range and pick the best by average silhouette.
    Sweep(SweepArgs),
    /// Generate a planted-partition categorical dataset.
    Generate(GenerateArgs),
    /// Turn a numeric CSV into equal-width grades.
    Discretize(DiscretizeArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Categorical CSV file.
    input: PathBuf,
    /// The first row is a header.
    #[arg(long)]
    header: bool,
    /// The first column holds object identifiers.
    #[arg(long)]
    id_column: bool,
}

impl InputArgs {
    fn load(&self) -> Result<CategoricalDataset, Error> {
        let file = File::open(&self.input)
            .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", self.input.display()))))?;
        load_csv_with(
            BufReader::new(file),
            CsvOptions {
                has_header: self.header,
                id_column: self.id_column,
            },
        )
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Lin,
    Hamming,
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Lin => Measure::InformationTheoretic,
            MeasureArg::Hamming => Measure::SimpleMatching,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    Display,
    Full,
}

impl From<PrecisionArg> for Precision {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::Display => Precision::Display,
            PrecisionArg::Full => Precision::Full,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Kscc,
    KsccPlus,
    Kmodes,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Kscc => Algorithm::Kscc,
            AlgorithmArg::KsccPlus => Algorithm::KsccPlus,
            AlgorithmArg::Kmodes => Algorithm::Kmodes,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SelectionArg {
    Objective,
    Silhouette,
}

impl From<SelectionArg> for RestartSelection {
    fn from(s: SelectionArg) -> Self {
        match s {
            SelectionArg::Objective => RestartSelection::Objective,
            SelectionArg::Silhouette => RestartSelection::Silhouette,
        }
    }
}

#[derive(Args)]
struct MatrixArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "lin")]
    measure: MeasureArg,
    #[arg(long, value_enum, default_value = "display")]
    precision: PrecisionArg,
    /// Output CSV; defaults to matrix.csv in a fresh run directory.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value = "kscc")]
    algorithm: AlgorithmArg,
    #[arg(long, default_value_t = ClusteringConfig::DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = ClusteringConfig::DEFAULT_MAX_ITERS)]
    max_iters: usize,
    /// Output directory; defaults to <command>-<unix time>.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ClusterArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    kmin: Option<usize>,
    #[arg(long)]
    kmax: Option<usize>,
    /// Sweep k over [2, n - 1] instead of [2, min(10, n - 1)].
    #[arg(long, conflicts_with = "kmax")]
    full_range: bool,
    /// How the representative restart of each k is chosen.
    #[arg(long, value_enum, default_value = "objective")]
    selection: SelectionArg,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    /// Categories per attribute (defaults to k).
    #[arg(long)]
    cats: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Dataset CSV to write.
    #[arg(long, short)]
    output: PathBuf,
    /// True labels, one integer per line; defaults to <output>.labels.
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Args)]
struct DiscretizeArgs {
    /// Numeric CSV file.
    input: PathBuf,
    #[arg(long)]
    header: bool,
    #[arg(long, default_value_t = 5)]
    bins: usize,
    /// Name the five grades "very low" .. "very high" instead of grade_1 .. grade_5.
    #[arg(long)]
    linguistic: bool,
    #[arg(long, short)]
    output: PathBuf,
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_usage() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn run_dir(requested: Option<PathBuf>, command: &str) -> Result<PathBuf, Failure> {
    let dir = requested.unwrap_or_else(|| {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        PathBuf::from(format!("{command}-{secs}"))
    });
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    let file = File::create(path)
        .map_err(|e| Failure::from(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    Ok(BufWriter::new(file))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), Failure> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(Error::from)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

fn cmd_matrix(args: MatrixArgs, started: Instant) -> Result<(), Failure> {
    let ds = args.input.load()?;
    let measure: Measure = args.measure.into();
    let precision: Precision = args.precision.into();
    let output = match args.output {
        Some(p) => p,
        None => run_dir(None, "matrix")?.join("matrix.csv"),
    };
    let matrix = pairwise_matrix(&ds, measure);
    let mut out = create(&output)?;
    matrix.write_csv(&mut out, precision)?;

    let mut manifest = RunManifest::new(
        "matrix",
        json!({ "measure": measure, "precision": precision, "header": args.input.header,
                "id_column": args.input.id_column }),
        None,
    );
    manifest.inputs.push(args.input.input.clone());
    manifest.outputs.push(output.clone());
    manifest.finish(started.elapsed());
    manifest.write(&sidecar(&output, ".manifest.json"))?;
    Ok(())
}

fn cmd_cluster(args: ClusterArgs, started: Instant) -> Result<(), Failure> {
    if args.k < 2 {
        return Err(usage("k must be at least 2"));
    }
    let ds = args.input.load()?;
    if args.k + 1 > ds.n() {
        return Err(usage(format!(
            "k must be at most n - 1 = {} for this dataset",
            ds.n() as i64 - 1
        )));
    }
    let cfg = ClusteringConfig {
        algorithm: args.run.algorithm.into(),
        k: args.k,
        max_iters: args.run.max_iters,
        restarts: args.run.restarts,
        seed: args.run.seed,
    };
    cfg.validate(ds.n())?;
    let result = cluster_best_of(&ds, &cfg)?;
    let matrix = pairwise_matrix(&ds, cfg.algorithm.silhouette_measure());
    let report = silhouette_values(&matrix, result.labels(), cfg.k)?;

    let dir = run_dir(args.run.out_dir, "cluster")?;
    let labels_path = dir.join("labels.csv");
    let mut out = create(&labels_path)?;
    writeln!(out, "object_id,cluster")?;
    for (i, l) in result.labels().iter().enumerate() {
        writeln!(out, "{},{l}", ds.object_label(i))?;
    }
    out.flush()?;

    let centers_path = dir.join("centers.json");
    let centers: Vec<_> = result.centers.iter().map(|c| c.to_json(&ds)).collect();
    write_json(&centers_path, &json!(centers))?;

    let result_path = dir.join("result.json");
    write_json(
        &result_path,
        &json!({
            "algorithm": cfg.algorithm,
            "k": cfg.k,
            "labels": result.labels(),
            "objective": result.objective,
            "iterations": result.iterations,
            "converged": result.converged,
            "seed": result.seed_used,
            "avg_silhouette": report.average,
            "silhouette_measure": matrix.measure(),
        }),
    )?;

    let sil_path = dir.join("silhouette.csv");
    let mut out = create(&sil_path)?;
    report.write_csv(&mut out, Some(&ds), Precision::Full)?;

    let mut manifest = RunManifest::new("cluster", json!(cfg), Some(cfg.seed));
    manifest.inputs.push(args.input.input.clone());
    manifest.outputs = vec![labels_path, centers_path, result_path, sil_path];
    manifest.finish(started.elapsed());
    manifest.write(&dir.join("manifest.json"))?;
    println!("objective={} avg_silhouette={}", result.objective, report.average);
    Ok(())
}

fn cmd_sweep(args: SweepArgs, started: Instant) -> Result<(), Failure> {
    let ds = args.input.load()?;
    let mut cfg = SweepConfig::for_objects(args.run.algorithm.into(), ds.n());
    if args.full_range {
        cfg.k_max = ds.n().saturating_sub(1);
    }
    if let Some(k) = args.kmin {
        cfg.k_min = k;
    }
    if let Some(k) = args.kmax {
        cfg.k_max = k;
    }
    cfg.max_iters = args.run.max_iters;
    cfg.restarts = args.run.restarts;
    cfg.seed = args.run.seed;
    cfg.selection = args.selection.into();
    cfg.validate(ds.n())?;
    let result = sweep(&ds, &cfg)?;

    let dir = run_dir(args.run.out_dir, "sweep")?;
    let summary_path = dir.join("sweep.json");
    write_json(&summary_path, &serde_json::to_value(&result).map_err(Error::from)?)?;
    let curve_path = dir.join("silhouette_curve.csv");
    result.write_curve_csv(create(&curve_path)?)?;

    let mut outputs = vec![summary_path, curve_path];
    for e in &result.entries {
        let path = dir.join(format!("silhouette_k{}.csv", e.k));
        e.silhouette.write_csv(create(&path)?, Some(&ds), Precision::Full)?;
        outputs.push(path);
    }

    let mut manifest = RunManifest::new("sweep", json!(cfg), Some(cfg.seed));
    manifest.inputs.push(args.input.input.clone());
    manifest.outputs = outputs;
    manifest.finish(started.elapsed());
    manifest.write(&dir.join("manifest.json"))?;
    println!("k_opt={}", result.k_opt);
    Ok(())
}

fn cmd_generate(args: GenerateArgs, started: Instant) -> Result<(), Failure> {
    let params = SyntheticParams {
        n: args.n,
        m: args.m,
        k_true: args.k,
        cats_per_attr: args.cats.unwrap_or(args.k),
        noise_rate: args.noise,
        seed: args.seed,
    };
    let (ds, labels) = generate_synthetic(&params)?;
    let mut out = create(&args.output)?;
    ds.write_csv(&mut out)?;
    let labels_path = args.labels.unwrap_or_else(|| sidecar(&args.output, ".labels"));
    let mut out = create(&labels_path)?;
    for l in &labels {
        writeln!(out, "{l}")?;
    }
    out.flush()?;

    let mut manifest = RunManifest::new("generate", json!(params), Some(params.seed));
    manifest.outputs = vec![args.output.clone(), labels_path];
    manifest.finish(started.elapsed());
    manifest.write(&sidecar(&args.output, ".manifest.json"))?;
    Ok(())
}

fn cmd_discretize(args: DiscretizeArgs, started: Instant) -> Result<(), Failure> {
    let file = File::open(&args.input)
        .map_err(|e| Failure::from(std::io::Error::new(e.kind(), format!("{}: {e}", args.input.display()))))?;
    let table = load_numeric_csv(BufReader::new(file), args.header)?;
    let labels = if args.linguistic {
        GradeLabels::Linguistic
    } else {
        GradeLabels::Numbered
    };
    let result = discretize_numeric(&table, args.bins, labels)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    let mut out = create(&args.output)?;
    if let Some(header) = &table.header {
        writeln!(out, "{}", header.join(","))?;
    }
    result.dataset.write_csv(&mut out)?;

    let mut manifest = RunManifest::new(
        "discretize",
        json!({ "bins": args.bins, "header": args.header, "linguistic": args.linguistic,
                "warnings": result.warnings }),
        None,
    );
    manifest.inputs.push(args.input.clone());
    manifest.outputs.push(args.output.clone());
    manifest.finish(started.elapsed());
    manifest.write(&sidecar(&args.output, ".manifest.json"))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let started = Instant::now();
    let outcome = match cli.command {
        Command::Matrix(a) => cmd_matrix(a, started),
        Command::Cluster(a) => cmd_cluster(a, started),
        Command::Sweep(a) => cmd_sweep(a, started),
        Command::Generate(a) => cmd_generate(a, started),
        Command::Discretize(a) => cmd_discretize(a, started),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
