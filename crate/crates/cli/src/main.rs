mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::config::JobConfig;
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "singlab", version, about = "Singularities of maximal surfaces, CMC-1 faces and frontals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for parallel stages.
    #[arg(long, global = true, env = "SINGLAB_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify singular points and write a summary.
    Classify(JobArgs),
    /// Write a triangle mesh of the surface.
    Mesh(JobArgs),
    /// Trace the singular curve and write it as CSV.
    SingularCurve(JobArgs),
    /// Compare tags of the data and its conjugate point by point.
    DualityCheck(JobArgs),
    /// Randomized perturbation probe for degenerate singular points.
    GenericityProbe(JobArgs),
    /// Taylor coefficients of an expression, with jet-space diagnostics.
    JetCheck(JetArgs),
    /// List the frontal presets.
    Presets,
}

/// Config file plus overrides; flag names mirror JSON paths.
#[derive(Args, Debug, Default)]
struct JobArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    omega: Option<String>,
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    preset: Option<String>,
    /// Curve for the tangent developable, as three comma-separated expressions.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    curve: Option<Vec<String>>,
    /// `re,im`
    #[arg(long = "base-point", value_delimiter = ',', allow_hyphen_values = true)]
    base_point: Option<Vec<f64>>,
    #[arg(long = "domain.u-min", allow_negative_numbers = true)]
    u_min: Option<f64>,
    #[arg(long = "domain.u-max", allow_negative_numbers = true)]
    u_max: Option<f64>,
    #[arg(long = "domain.v-min", allow_negative_numbers = true)]
    v_min: Option<f64>,
    #[arg(long = "domain.v-max", allow_negative_numbers = true)]
    v_max: Option<f64>,
    #[arg(long = "grid.nu")]
    grid_nu: Option<usize>,
    #[arg(long = "grid.nv")]
    grid_nv: Option<usize>,
    #[arg(long = "mesh-grid.nu")]
    mesh_nu: Option<usize>,
    #[arg(long = "mesh-grid.nv")]
    mesh_nv: Option<usize>,
    #[arg(long = "tolerances.eps-zero")]
    eps_zero: Option<f64>,
    #[arg(long = "tolerances.eps-curve")]
    eps_curve: Option<f64>,
    #[arg(long = "tolerances.eps-int")]
    eps_int: Option<f64>,
    #[arg(long = "tolerances.eps-ode")]
    eps_ode: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    magnitude: Option<f64>,
    /// Frontal points to classify, `u,v` pairs separated by `;`.
    #[arg(long, allow_hyphen_values = true)]
    points: Option<String>,
    #[arg(long = "output.dir")]
    output_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct JetArgs {
    #[arg(long)]
    expr: String,
    /// `re,im`
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.0, 0.0])]
    at: Vec<f64>,
    #[arg(long, default_value_t = 3)]
    order: usize,
}

fn parse_points(s: &str) -> Result<Value, CliError> {
    let mut out = Vec::new();
    for pair in s.split(';').filter(|p| !p.trim().is_empty()) {
        let xs: Vec<f64> = pair
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Usage(format!("--points {pair:?}: {e}")))?;
        if xs.len() != 2 {
            return Err(CliError::Usage(format!("--points {pair:?}: expected u,v")));
        }
        out.push(json!(xs));
    }
    Ok(Value::Array(out))
}

/// Applies flag overrides to the config document, then validates it.
fn job_config(a: &JobArgs) -> Result<JobConfig, CliError> {
    let mut doc = config::load(a.config.as_deref())?;
    let mut set = |path: &str, v: Value| config::set_path(&mut doc, path, v);
    let strings = [("kind", &a.kind), ("g", &a.g), ("omega", &a.omega), ("h", &a.h), ("preset", &a.preset)];
    for (path, v) in strings {
        if let Some(v) = v {
            set(path, json!(v))?;
        }
    }
    if let Some(c) = &a.curve {
        set("curve", json!(c))?;
    }
    if let Some(b) = &a.base_point {
        set("base_point", json!(b))?;
    }
    for (path, v) in [("seed", a.seed.map(|x| json!(x))), ("trials", a.trials.map(|x| json!(x))), ("magnitude", a.magnitude.map(|x| json!(x)))] {
        if let Some(v) = v {
            set(path, v)?;
        }
    }
    for (path, v) in [
        ("tolerances.eps_zero", a.eps_zero),
        ("tolerances.eps_curve", a.eps_curve),
        ("tolerances.eps_int", a.eps_int),
        ("tolerances.eps_ode", a.eps_ode),
    ] {
        if let Some(v) = v {
            set(path, json!(v))?;
        }
    }
    if let Some(p) = &a.points {
        set("points", parse_points(p)?)?;
    }
    if let Some(d) = &a.output_dir {
        set("output.dir", json!(d))?;
    }
    // partial overrides of nested records start from the kind's defaults
    let domain = [("u_min", a.u_min), ("u_max", a.u_max), ("v_min", a.v_min), ("v_max", a.v_max)];
    let grids = [("grid", [("nu", a.grid_nu), ("nv", a.grid_nv)]), ("mesh_grid", [("nu", a.mesh_nu), ("nv", a.mesh_nv)])];
    let nested = domain.iter().any(|d| d.1.is_some()) || grids.iter().any(|g| g.1.iter().any(|x| x.1.is_some()));
    if nested {
        let base = config::finish_unvalidated(doc.clone())?;
        if domain.iter().any(|d| d.1.is_some()) && doc.get("domain").is_none_or(Value::is_null) {
            config::set_path(&mut doc, "domain", json!(base.domain()))?;
        }
        for (name, fields) in grids {
            if fields.iter().any(|x| x.1.is_some()) && doc.get(name).is_none_or(Value::is_null) {
                let g = if name == "grid" { base.grid() } else { base.mesh_grid() };
                config::set_path(&mut doc, name, json!(g))?;
            }
            for (f, v) in fields {
                if let Some(v) = v {
                    config::set_path(&mut doc, &format!("{name}.{f}"), json!(v))?;
                }
            }
        }
        for (f, v) in domain {
            if let Some(v) = v {
                config::set_path(&mut doc, &format!("domain.{f}"), json!(v))?;
            }
        }
    }
    config::finish(doc)
}

fn run(cli: Cli) -> Result<Option<Value>, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Classify(a) => commands::classify(&job_config(&a)?),
        Command::Mesh(a) => commands::mesh(&job_config(&a)?),
        Command::SingularCurve(a) => commands::singular_curve(&job_config(&a)?),
        Command::DualityCheck(a) => commands::duality_check(&job_config(&a)?),
        Command::GenericityProbe(a) => commands::genericity_probe(&job_config(&a)?),
        Command::JetCheck(a) => {
            let [re, im] = a.at[..] else {
                return Err(CliError::Usage(format!("--at expects `re,im`, got {} values", a.at.len())));
            };
            commands::jet_check(&a.expr, [re, im], a.order).map(Some)
        }
        Command::Presets => Ok(Some(commands::presets())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.render().to_string());
            eprintln!("{}", output::to_json(&err.to_json()));
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(Some(summary)) => {
            println!("{}", output::to_json(&summary));
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            if let CliError::Check { summary, .. } = &e {
                println!("{}", output::to_json(summary));
            }
            eprintln!("{}", output::to_json(&e.to_json()));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
