use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use invroot::convergence::{DEFAULT_GRID_STEP, DEFAULT_P_CAP, DEFAULT_Q_CAP};
use invroot::harness::{
    emit_error_history, emit_residual_map_grid, fmt_float, parse_criterion, parse_init, parse_u32_list,
    read_config, read_matrix_market, residual_map_grid, run_experiment, write_aggregate_rows, write_bench_rows,
    write_matrix_market, ExperimentConfig,
};
use invroot::{
    generate_spd, matrix_invroot, measure, optimal_q_search, scalar_invroot, InitPolicy, MatrixSpec, Params, QTarget,
    StabilityTable, StopCriterion, SymMat,
};

#[derive(Parser)]
#[command(name = "invroot", version, about = "Inverse p-th roots of SPD matrices by the (p,q) residual-power iteration")]
struct Cli {
    /// Print tables as CSV instead of aligned text.
    #[arg(long, global = true)]
    csv: bool,
    /// Worker threads for ensemble runs; output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute A^(-1/p) for a Matrix Market file.
    Invroot(InvrootArgs),
    /// Scalar iteration over a range of q.
    Scalar(ScalarArgs),
    /// Ensemble benchmark from a config file or flags.
    Bench(BenchArgs),
    /// Find the q with the fewest products for one matrix or a seeded ensemble.
    Qscan(QscanArgs),
    /// Largest stable q per p and p per q.
    StabilityTable(StabilityArgs),
    /// One-step residual map |r1| over a grid of r0.
    ResidualMap(ResidualMapArgs),
    /// Generate a random SPD matrix.
    Gen(GenArgs),
}

#[derive(Args)]
struct IterArgs {
    #[arg(long)]
    p: u32,
    /// Stop threshold.
    #[arg(long, default_value_t = 1e-4)]
    eps: f64,
    /// identity, scaled-identity:ALPHA, scaled-a:ALPHA or pan-reif.
    #[arg(long, default_value = "identity", value_parser = parse_init_arg)]
    init: InitPolicy<f64>,
    /// residual or error.
    #[arg(long, default_value = "residual", value_parser = parse_criterion_arg)]
    criterion: StopCriterion,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
}

impl IterArgs {
    fn params(&self, q: u32) -> Params {
        Params::matrix(self.p, q)
            .with_epsilon(self.eps)
            .with_init(self.init)
            .with_criterion(self.criterion)
            .with_max_iter(self.max_iter)
    }
}

#[derive(Args)]
struct InvrootArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    q: u32,
    #[command(flatten)]
    iter: IterArgs,
    /// Write the final iterate as Matrix Market.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write a one-row CSV run summary.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write per-step error and residual norms as CSV.
    #[arg(long)]
    history: Option<PathBuf>,
}

#[derive(Args)]
struct ScalarArgs {
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    p: u32,
    #[arg(long, default_value = "2..8", value_parser = parse_list_arg)]
    q_range: List,
    #[arg(long, default_value_t = 1e-8)]
    eps: f64,
    #[arg(long, default_value = "error", value_parser = parse_criterion_arg)]
    criterion: StopCriterion,
    #[arg(long, default_value_t = 1.0)]
    b0: f64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// key = value experiment file; conflicts with the grid flags.
    #[arg(long, conflicts_with_all = ["spec", "p", "q"])]
    config: Option<PathBuf>,
    /// Cell template n,density,cond,rho,seed; repeatable.
    #[arg(long, value_parser = parse_spec_arg)]
    spec: Vec<MatrixSpec>,
    #[arg(long, value_parser = parse_list_arg)]
    p: Option<List>,
    #[arg(long, value_parser = parse_list_arg)]
    q: Option<List>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, value_parser = parse_criterion_arg)]
    criterion: Option<StopCriterion>,
    #[arg(long, value_parser = parse_init_arg)]
    init: Option<InitPolicy<f64>>,
    /// Seeds per cell.
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Run to attainable precision and stop on stagnation.
    #[arg(long)]
    precision: bool,
    #[arg(long)]
    track_error: bool,
    /// Per-run rows.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-cell aggregates.
    #[arg(long)]
    aggregate: Option<PathBuf>,
}

#[derive(Args)]
struct QscanArgs {
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    input: Option<PathBuf>,
    /// n,density,cond,rho,seed
    #[arg(long, value_parser = parse_spec_arg)]
    spec: Option<MatrixSpec>,
    /// Members generated from --spec with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1, requires = "spec")]
    seeds: u64,
    #[arg(long, default_value = "2..6", value_parser = parse_list_arg)]
    q_range: List,
    #[command(flatten)]
    iter: IterArgs,
}

#[derive(Args)]
struct StabilityArgs {
    #[arg(long, default_value = "2..10", value_parser = parse_list_arg)]
    p_range: List,
    #[arg(long, default_value = "3..10", value_parser = parse_list_arg)]
    q_range: List,
    #[arg(long, default_value_t = DEFAULT_GRID_STEP)]
    grid: f64,
    #[arg(long, default_value_t = DEFAULT_Q_CAP)]
    q_cap: u32,
    #[arg(long, default_value_t = DEFAULT_P_CAP)]
    p_cap: u32,
}

#[derive(Args)]
struct ResidualMapArgs {
    #[arg(long, default_value = "1,2,3", value_parser = parse_list_arg)]
    p_list: List,
    #[arg(long, default_value = "2,4,6", value_parser = parse_list_arg)]
    q_list: List,
    #[arg(long, default_value_t = 1e-3)]
    grid: f64,
    /// Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// n,density,cond,rho,seed
    #[arg(long, value_parser = parse_spec_arg)]
    spec: MatrixSpec,
    #[arg(long)]
    out: PathBuf,
}

fn parse_init_arg(s: &str) -> Result<InitPolicy<f64>, String> {
    parse_init(s).map_err(|e| e.to_string())
}

fn parse_criterion_arg(s: &str) -> Result<StopCriterion, String> {
    parse_criterion(s).map_err(|e| e.to_string())
}

/// `a,b,c` or an inclusive range `a..b`.
#[derive(Debug, Clone)]
struct List(Vec<u32>);

fn parse_list_arg(s: &str) -> Result<List, String> {
    parse_u32_list(s).map(List).map_err(|e| e.to_string())
}

fn parse_spec_arg(s: &str) -> Result<MatrixSpec, String> {
    s.parse::<MatrixSpec>().map_err(|e| e.to_string())
}

/// Runs that finished without converging.
#[derive(Debug)]
struct NotConverged(String);

impl Display for NotConverged {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for NotConverged {}

/// Argument combinations clap cannot check.
#[derive(Debug)]
struct Usage(String);

impl Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn print(&self, out: &mut impl Write, csv: bool) -> io::Result<()> {
        if csv {
            writeln!(out, "{}", self.header.join(","))?;
            for r in &self.rows {
                writeln!(out, "{}", r.join(","))?;
            }
            return Ok(());
        }
        let widths: Vec<usize> = (0..self.header.len())
            .map(|c| self.rows.iter().map(|r| r[c].len()).chain([self.header[c].len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: Vec<&str>| {
            cells.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect::<Vec<_>>().join("  ")
        };
        writeln!(out, "{}", line(self.header.clone()))?;
        for r in &self.rows {
            writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
        }
        Ok(())
    }
}

fn num(x: f64, csv: bool) -> String {
    if csv {
        fmt_float(x)
    } else if x.is_nan() {
        "-".into()
    } else {
        format!("{x:.6e}")
    }
}

fn mean(x: f64, csv: bool) -> String {
    if csv {
        fmt_float(x)
    } else if x.is_nan() {
        "-".into()
    } else {
        format!("{x:.2}")
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?))
}

fn read_matrix(path: &Path) -> Result<SymMat> {
    read_matrix_market(path).with_context(|| format!("cannot read {}", path.display()))
}

fn invroot_cmd(args: &InvrootArgs, csv: bool, out: &mut impl Write) -> Result<()> {
    let a = read_matrix(&args.input)?;
    let params = args.iter.params(args.q).with_error_tracking(args.history.is_some());
    let rep = matrix_invroot(&a, &params)?;

    let mut table = Table::new(vec!["n", "p", "q", "iterations", "mults", "final_residual", "final_error", "outcome"]);
    let row = |csv: bool| {
        vec![
            a.n().to_string(),
            params.p.to_string(),
            params.q.to_string(),
            rep.iterations.to_string(),
            rep.mults.to_string(),
            num(rep.final_residual(), csv),
            rep.final_error().map(|e| num(e, csv)).unwrap_or_default(),
            rep.outcome.to_string(),
        ]
    };
    table.push(row(csv));
    table.print(out, csv)?;

    if let Some(path) = &args.report {
        let mut file = Table::new(table.header.clone());
        file.push(row(true));
        let mut w = create(path)?;
        file.print(&mut w, true)?;
        w.flush()?;
    }
    if let Some(path) = &args.history {
        emit_error_history(create(path)?, &rep)?;
    }
    if let Some(path) = &args.output {
        write_matrix_market(path, &rep.final_iterate).with_context(|| format!("cannot write {}", path.display()))?;
    }
    if !rep.converged() {
        return Err(NotConverged(format!("iteration {} after {} steps", rep.outcome, rep.iterations)).into());
    }
    Ok(())
}

fn scalar_cmd(args: &ScalarArgs, csv: bool, out: &mut impl Write) -> Result<()> {
    let mut table = Table::new(vec!["q", "iterations", "mults", "value", "error", "outcome"]);
    let mut failed = Vec::new();
    for &q in &args.q_range.0 {
        let params = Params::scalar(args.p, q)
            .with_epsilon(args.eps)
            .with_criterion(args.criterion)
            .with_max_iter(args.max_iter);
        let rep = scalar_invroot(args.lambda, &params, args.b0)?;
        let err = *rep.error_history.last().expect("non-empty history");
        table.push(vec![
            q.to_string(),
            rep.iterations.to_string(),
            rep.mults.to_string(),
            num(rep.value(), csv),
            num(err.abs(), csv),
            rep.outcome.to_string(),
        ]);
        if !rep.converged() {
            failed.push(format!("q={q}: {}", rep.outcome));
        }
    }
    table.print(out, csv)?;
    if !failed.is_empty() {
        return Err(NotConverged(failed.join(", ")).into());
    }
    Ok(())
}

fn bench_config(args: &BenchArgs, jobs: usize) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => read_config(path).with_context(|| format!("in {}", path.display()))?,
        None => {
            let (Some(p), Some(q)) = (&args.p, &args.q) else {
                return Err(Usage("bench needs --config or --spec, --p and --q".into()).into());
            };
            if args.spec.is_empty() {
                return Err(Usage("bench needs at least one --spec".into()).into());
            }
            ExperimentConfig { specs: args.spec.clone(), ps: p.0.clone(), qs: q.0.clone(), ..ExperimentConfig::default() }
        }
    };
    if let Some(v) = args.eps {
        cfg.epsilon = v;
    }
    if let Some(v) = args.criterion {
        cfg.stop_criterion = v;
    }
    if let Some(v) = args.init {
        cfg.init_policy = v;
    }
    if let Some(v) = args.seeds {
        cfg.seeds_per_cell = v;
    }
    if let Some(v) = args.max_iter {
        cfg.max_iter = v;
    }
    cfg.precision |= args.precision;
    cfg.track_error |= args.track_error;
    cfg.jobs = jobs;
    if args.out.is_some() {
        cfg.output = args.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn bench_cmd(args: &BenchArgs, csv: bool, jobs: usize, out: &mut impl Write) -> Result<()> {
    let cfg = bench_config(args, jobs)?;
    let res = run_experiment(&cfg)?;
    if let Some(path) = &cfg.output {
        let mut w = create(path)?;
        write_bench_rows(&mut w, &res.rows)?;
        w.flush()?;
    }
    if let Some(path) = &args.aggregate {
        let mut w = create(path)?;
        write_aggregate_rows(&mut w, &res.aggregates)?;
        w.flush()?;
    }
    if csv {
        return Ok(write_aggregate_rows(out, &res.aggregates)?);
    }
    let mut table =
        Table::new(vec!["n", "density", "cond", "rho", "seeds", "p", "q", "runs", "converged", "iterations", "mults"]);
    let per_cell = cfg.ps.len() * cfg.qs.len();
    for (i, agg) in res.aggregates.iter().enumerate() {
        let spec = &cfg.specs[i / per_cell];
        table.push(vec![
            agg.n.to_string(),
            agg.density.to_string(),
            agg.cond.to_string(),
            agg.rho.to_string(),
            format!("{}-{}", spec.seed, spec.seed + cfg.seeds_per_cell as u64 - 1),
            agg.p.to_string(),
            agg.q.to_string(),
            agg.runs.to_string(),
            agg.converged.to_string(),
            mean(agg.mean_iterations, false),
            mean(agg.mean_mults, false),
        ]);
    }
    table.print(out, false)?;
    Ok(())
}

fn qscan_cmd(args: &QscanArgs, csv: bool, out: &mut impl Write) -> Result<()> {
    let (lo, hi) = match (args.q_range.0.first(), args.q_range.0.last()) {
        (Some(&lo), Some(&hi)) if args.q_range.0.windows(2).all(|w| w[1] == w[0] + 1) => (lo, hi),
        _ => return Err(Usage("--q-range must be contiguous, e.g. 2..6".into()).into()),
    };
    let members: Vec<SymMat> = match (&args.input, &args.spec) {
        (Some(path), _) => vec![read_matrix(path)?],
        (None, Some(spec)) => (0..args.seeds)
            .map(|k| generate_spd(&spec.with_seed(spec.seed + k)))
            .collect::<invroot::Result<_>>()?,
        (None, None) => unreachable!("clap requires one of --input and --spec"),
    };
    let search = optimal_q_search(QTarget::Ensemble(&members), args.iter.p, lo..=hi, &args.iter.params(lo))?;
    let mut table = Table::new(vec!["q", "runs", "converged", "iterations", "mults"]);
    for r in &search.rows {
        table.push(vec![
            r.q.to_string(),
            r.runs.to_string(),
            r.converged.to_string(),
            mean(r.mean_iterations, csv),
            mean(r.mean_mults, csv),
        ]);
    }
    table.print(out, csv)?;
    if !csv {
        writeln!(out, "q_best: {}", search.q_best)?;
    }
    Ok(())
}

fn stability_cmd(args: &StabilityArgs, csv: bool, out: &mut impl Write) -> Result<()> {
    if !(args.grid > 0.0 && args.grid < 1.0) {
        return Err(Usage(format!("--grid must lie in (0, 1), got {}", args.grid)).into());
    }
    let table = StabilityTable::compute(
        args.p_range.0.iter().copied(),
        args.q_range.0.iter().copied(),
        args.grid,
        args.q_cap,
        args.p_cap,
    );
    if !csv {
        write!(out, "{table}")?;
        return Ok(());
    }
    writeln!(out, "scan,fixed,largest,at_cap")?;
    for (name, entries) in [("q_max", &table.rows), ("p_max", &table.cols)] {
        for (k, b) in entries {
            let at_cap = matches!(b, invroot::ScanBound::AtCap(_));
            writeln!(out, "{name},{k},{},{at_cap}", b.value())?;
        }
    }
    Ok(())
}

fn residual_map_cmd(args: &ResidualMapArgs, out: &mut impl Write) -> Result<()> {
    let samples = residual_map_grid(&args.p_list.0, &args.q_list.0, args.grid)?;
    match &args.out {
        Some(path) => emit_residual_map_grid(create(path)?, &samples)?,
        None => emit_residual_map_grid(out, &samples)?,
    }
    Ok(())
}

fn gen_cmd(args: &GenArgs, csv: bool, out: &mut impl Write) -> Result<()> {
    let a = generate_spd(&args.spec)?;
    write_matrix_market(&args.out, a.as_matrix()).with_context(|| format!("cannot write {}", args.out.display()))?;
    let m = measure(&a)?;
    let mut table = Table::new(vec!["n", "seed", "density", "cond", "rho"]);
    table.push(vec![
        a.n().to_string(),
        args.spec.seed.to_string(),
        num(m.density, csv),
        num(m.cond, csv),
        num(m.rho, csv),
    ]);
    table.print(out, csv)?;
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match &cli.command {
        Command::Invroot(a) => invroot_cmd(a, cli.csv, &mut out),
        Command::Scalar(a) => scalar_cmd(a, cli.csv, &mut out),
        Command::Bench(a) => bench_cmd(a, cli.csv, cli.jobs, &mut out),
        Command::Qscan(a) => qscan_cmd(a, cli.csv, &mut out),
        Command::StabilityTable(a) => stability_cmd(a, cli.csv, &mut out),
        Command::ResidualMap(a) => residual_map_cmd(a, &mut out),
        Command::Gen(a) => gen_cmd(a, cli.csv, &mut out),
    }?;
    out.flush()?;
    Ok(())
}

fn is_usage(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.is::<Usage>()
            || matches!(
                c.downcast_ref::<invroot::Error>(),
                Some(invroot::Error::InvalidParameter(_) | invroot::Error::Config { .. })
            )
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage(&e) { 2 } else { 1 })
        }
    }
}
