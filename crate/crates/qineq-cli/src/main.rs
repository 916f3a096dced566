//! Command-line interface for quantile-based inequality analysis.

mod data;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};

use qineq::asymptotics::{sigma2_d, sigma2_z, VarianceResult};
use qineq::curves::{midpoint_grid, tabulate, CurveKind, CurveTable, QuantileSource};
use qineq::indices::{index_estimate_closed_form, index_exact, IndexEstimate, IndexKind};
use qineq::simulation::{parse_config_file, report_to_tables, run_experiment, SimulationReport};
use qineq::{
    Error, ParametricDistribution, QuadratureSpec, QuantileEstimate, QuantileScheme, Result,
};

use data::{load, DataColumnSpec};

#[derive(Parser)]
#[command(
    name = "qineq",
    version,
    about = "Quantile-based inequality curves and indices",
    long_about = "Computes quantile-based inequality curves (qZ, qD, qB, quantile Lorenz \
                  variants) and indices (qZI, qDI, quantile Gini family) from data samples \
                  and from Dagum/Pareto distributions; evaluates asymptotic variances of the \
                  index estimators; runs deterministic Monte Carlo benchmark experiments.\n\n\
                  Estimator schemes E, H, WG and HF correspond to the sample-quantile \
                  types 1, 5, 6 and 8 of standard statistical software.\n\n\
                  Exit codes: 0 success, 2 input or validation error, 3 numerical failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate inequality indices from a column of a delimited text file.
    Index(IndexArgs),
    /// Tabulate an inequality curve from data or from a distribution.
    Curve(CurveArgs),
    /// Exact index values of a parametric distribution.
    Exact(ExactArgs),
    /// Asymptotic variances of the empirical qZI/qDI estimators.
    Variance(VarianceArgs),
    /// Run Monte Carlo experiments described by a config file.
    Simulate(SimulateArgs),
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Data file (delimited text).
    #[arg(long)]
    data: PathBuf,
    /// Value column: a header name or a 1-based position.
    #[arg(long)]
    column: String,
    /// Field delimiter.
    #[arg(long, default_value = ",")]
    delimiter: char,
    /// Treat the first row as data, not as a header.
    #[arg(long, action = ArgAction::SetTrue)]
    no_header: bool,
    /// Skip rows that fail to parse instead of aborting.
    #[arg(long, action = ArgAction::SetTrue)]
    skip_bad: bool,
}

impl InputArgs {
    fn spec(&self, group_by: Option<String>) -> Result<DataColumnSpec> {
        if !self.delimiter.is_ascii() {
            return Err(Error::Parse(
                "delimiter must be a single ASCII character".into(),
            ));
        }
        Ok(DataColumnSpec {
            path: self.data.clone(),
            column: self.column.clone(),
            delimiter: self.delimiter as u8,
            has_header: !self.no_header,
            group_by,
            skip_bad: self.skip_bad,
        })
    }
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
    /// Print numbers with full precision instead of 6 significant digits.
    #[arg(long, action = ArgAction::SetTrue)]
    full_precision: bool,
}

#[derive(Args)]
struct IndexArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Group rows by this column and report each group plus `All`.
    #[arg(long)]
    group_by: Option<String>,
    /// Estimator scheme(s).
    #[arg(long, default_values = ["HF"])]
    scheme: Vec<QuantileScheme>,
    /// Index kind(s).
    #[arg(long, default_values = ["qZI", "qDI"])]
    kind: Vec<IndexKind>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CurveArgs {
    /// Distribution spec, e.g. `dagum:sigma=1,a=2,b=1` (exact curve).
    #[arg(long, conflicts_with = "data")]
    dist: Option<ParametricDistribution>,
    /// Data file (delimited text).
    #[arg(long, requires = "column", requires = "scheme")]
    data: Option<PathBuf>,
    /// Value column: a header name or a 1-based position.
    #[arg(long)]
    column: Option<String>,
    /// Field delimiter.
    #[arg(long, default_value = ",")]
    delimiter: char,
    /// Treat the first row as data, not as a header.
    #[arg(long, action = ArgAction::SetTrue)]
    no_header: bool,
    /// Skip rows that fail to parse instead of aborting.
    #[arg(long, action = ArgAction::SetTrue)]
    skip_bad: bool,
    /// Estimator scheme (data source only).
    #[arg(long)]
    scheme: Option<QuantileScheme>,
    /// Curve kind.
    #[arg(long, default_value = "qZ")]
    kind: CurveKind,
    /// Number of grid points (midpoints of uniform subintervals).
    #[arg(long, default_value_t = 199)]
    grid_size: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ExactArgs {
    /// Distribution spec, e.g. `pareto:xm=1,alpha=2`.
    #[arg(long)]
    dist: ParametricDistribution,
    /// Index kind(s); classical kinds require a finite mean.
    #[arg(long, default_values = ["qZI", "qDI"])]
    kind: Vec<IndexKind>,
    /// Absolute quadrature tolerance.
    #[arg(long, default_value_t = 1e-9)]
    quad_tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VarianceArgs {
    /// Distribution spec.
    #[arg(long)]
    dist: ParametricDistribution,
    /// Variance kind(s): Z (for qZI) and/or D (for qDI).
    #[arg(long, default_values = ["Z", "D"], value_parser = ["Z", "D"])]
    kind: Vec<String>,
    /// Sweep the Dagum shape `a` over `lo:hi:count` instead of a single value.
    #[arg(long)]
    sweep_a: Option<String>,
    /// Absolute quadrature tolerance.
    #[arg(long, default_value_t = 1e-9)]
    quad_tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SimulateArgs {
    /// Experiment config file (`[name]` sections of `key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Master seed for experiments that do not set one.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for report files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

/// Round to 6 significant digits unless full precision is requested;
/// either way the shortest representation that round-trips is printed.
fn fmt_num(v: f64, full: bool) -> String {
    if full || v == 0.0 {
        format!("{v}")
    } else {
        format!("{:.5e}", v).parse::<f64>().unwrap().to_string()
    }
}

// Distribution specs contain commas; CSV fields that need it get quoted.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn cmd_index(args: &IndexArgs) -> Result<()> {
    let spec = args.input.spec(args.group_by.clone())?;
    let loaded = load(&spec)?;

    let mut rows: Vec<(String, usize, usize, IndexEstimate)> = Vec::new();
    for group in &loaded.groups {
        if args.group_by.is_none() && group.name != "All" {
            continue;
        }
        for &kind in &args.kind {
            for &scheme in &args.scheme {
                let estimate = index_estimate_closed_form(&group.sample, scheme, kind)?;
                rows.push((
                    group.name.clone(),
                    group.sample.len(),
                    group.sample.zero_count(),
                    estimate,
                ));
            }
        }
    }

    let content = if args.output.format == "json" {
        let groups: Vec<serde_json::Value> = rows
            .iter()
            .map(|(name, n, zeros, est)| {
                serde_json::json!({
                    "group": name,
                    "n": n,
                    "zero_count": zeros,
                    "estimate": est,
                })
            })
            .collect();
        let doc = serde_json::json!({
            "rows": groups,
            "skipped_rows": loaded.skipped_rows,
        });
        format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
    } else {
        let mut csv = String::from("group,kind,scheme,method,n,zero_count,value\n");
        for (name, n, zeros, est) in &rows {
            csv.push_str(&format!(
                "{},{},{},closed_form,{},{},{}\n",
                name,
                est.kind,
                est.scheme.map(|s| s.name()).unwrap_or("exact"),
                n,
                zeros,
                fmt_num(est.value, args.output.full_precision)
            ));
        }
        csv
    };
    emit(&args.output.out, &content)
}

fn curve_table(args: &CurveArgs) -> Result<CurveTable> {
    if args.grid_size == 0 {
        return Err(Error::invalid("grid_size", "must be at least 1"));
    }
    let grid = midpoint_grid(args.grid_size);
    let quad = QuadratureSpec::default();
    match (&args.dist, &args.data) {
        (Some(dist), None) => tabulate(QuantileSource::Distribution(dist), args.kind, &grid, &quad),
        (None, Some(data)) => {
            let scheme = args.scheme.ok_or_else(|| {
                Error::invalid("scheme", "required when tabulating a curve from data")
            })?;
            if args.kind.is_classical() {
                return Err(Error::invalid(
                    "kind",
                    format!("{} requires a distribution source", args.kind),
                ));
            }
            if !args.delimiter.is_ascii() {
                return Err(Error::Parse(
                    "delimiter must be a single ASCII character".into(),
                ));
            }
            let spec = DataColumnSpec {
                path: data.clone(),
                column: args.column.clone().expect("clap enforces --column"),
                delimiter: args.delimiter as u8,
                has_header: !args.no_header,
                group_by: None,
                skip_bad: args.skip_bad,
            };
            let loaded = load(&spec)?;
            let sample = &loaded
                .groups
                .last()
                .expect("`All` group always present")
                .sample;
            let estimate = QuantileEstimate::new(sample.clone(), scheme);
            tabulate(QuantileSource::Estimate(&estimate), args.kind, &grid, &quad)
        }
        (Some(_), Some(_)) => unreachable!("clap conflict rule"),
        (None, None) => Err(Error::invalid(
            "dist",
            "a curve needs --dist or --data/--column",
        )),
    }
}

fn cmd_curve(args: &CurveArgs) -> Result<()> {
    let table = curve_table(args)?;
    let content = if args.output.format == "json" {
        format!("{}\n", table.to_json())
    } else {
        let mut csv = String::from("p,value\n");
        for (p, v) in table.pairs() {
            csv.push_str(&format!(
                "{},{}\n",
                fmt_num(p, args.output.full_precision),
                fmt_num(v, args.output.full_precision)
            ));
        }
        csv
    };
    emit(&args.output.out, &content)
}

fn cmd_exact(args: &ExactArgs) -> Result<()> {
    let quad = QuadratureSpec::new(args.quad_tol, 2000)?;
    let estimates: Vec<IndexEstimate> = args
        .kind
        .iter()
        .map(|&kind| index_exact(&args.dist, kind, &quad))
        .collect::<Result<_>>()?;
    let content = if args.output.format == "json" {
        format!("{}\n", serde_json::to_string_pretty(&estimates).unwrap())
    } else {
        let mut csv = String::from("dist,kind,method,value\n");
        for est in &estimates {
            csv.push_str(&format!(
                "{},{},quadrature,{}\n",
                csv_field(&args.dist.to_string()),
                est.kind,
                fmt_num(est.value, args.output.full_precision)
            ));
        }
        csv
    };
    emit(&args.output.out, &content)
}

fn parse_sweep(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!(
            "sweep must be `lo:hi:count`, got `{spec}`"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| Error::Parse(format!("`{}` is not a number", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| Error::Parse(format!("`{}` is not a number", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| Error::Parse(format!("`{}` is not a count", parts[2])))?;
    if !(lo > 0.0 && hi > lo && count >= 2) {
        return Err(Error::Parse(
            "sweep needs 0 < lo < hi and at least 2 points".into(),
        ));
    }
    let step = (hi - lo) / (count - 1) as f64;
    Ok((0..count).map(|i| lo + step * i as f64).collect())
}

fn cmd_variance(args: &VarianceArgs) -> Result<()> {
    let quad = QuadratureSpec::new(args.quad_tol, 2000)?;
    let dists: Vec<ParametricDistribution> = match &args.sweep_a {
        None => vec![args.dist],
        Some(spec) => {
            let (sigma, b) = match args.dist {
                ParametricDistribution::Dagum { sigma, b, .. } => (sigma, b),
                ParametricDistribution::Pareto { .. } => {
                    return Err(Error::invalid(
                        "sweep_a",
                        "shape sweeps apply to the Dagum family",
                    ))
                }
            };
            parse_sweep(spec)?
                .into_iter()
                .map(|a| ParametricDistribution::dagum(sigma, a, b))
                .collect::<Result<_>>()?
        }
    };

    let mut results: Vec<VarianceResult> = Vec::new();
    for dist in &dists {
        for kind in &args.kind {
            results.push(match kind.as_str() {
                "Z" => sigma2_z(dist, &quad)?,
                _ => sigma2_d(dist, &quad)?,
            });
        }
    }
    let content = if args.output.format == "json" {
        format!("{}\n", serde_json::to_string_pretty(&results).unwrap())
    } else {
        let mut csv = String::from("kind,dist,value\n");
        for r in &results {
            csv.push_str(&format!(
                "{},{},{}\n",
                r.kind,
                csv_field(&r.dist.to_string()),
                fmt_num(r.value, args.output.full_precision)
            ));
        }
        csv
    };
    emit(&args.output.out, &content)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| Error::Parse(format!("{}: {e}", args.config.display())))?;
    let configs = parse_config_file(&text, args.seed)?;
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| Error::Parse(format!("{}: {e}", args.out_dir.display())))?;

    let write = |path: &Path, content: &str| -> Result<()> {
        std::fs::write(path, content).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    };

    let mut reports: Vec<SimulationReport> = Vec::new();
    for (name, config) in &configs {
        eprintln!(
            "running `{name}`: {} x {} replications",
            config.dist, config.replications
        );
        let report = run_experiment(config)?;
        write(
            &args.out_dir.join(format!("{name}_summary.json")),
            &format!("{}\n", report.to_json()),
        )?;
        write(
            &args.out_dir.join(format!("{name}_cells.csv")),
            &report.to_csv(),
        )?;
        write(
            &args.out_dir.join(format!("{name}_estimates.csv")),
            &report.estimates_csv(),
        )?;
        println!("{name}: {} cells", report.cells.len());
        reports.push(report);
    }
    let tables = report_to_tables(&reports)?;
    write(&args.out_dir.join("mise_tables.csv"), &tables.csv)?;
    write(&args.out_dir.join("mise_tables.txt"), &tables.text)?;
    println!(
        "mise tables: {}",
        args.out_dir.join("mise_tables.csv").display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Index(args) => cmd_index(args),
        Command::Curve(args) => cmd_curve(args),
        Command::Exact(args) => cmd_exact(args),
        Command::Variance(args) => cmd_variance(args),
        Command::Simulate(args) => cmd_simulate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 3 })
        }
    }
}
