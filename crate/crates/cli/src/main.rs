use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fqeuclid_cli::commands;
use fqeuclid_cli::config::{ColorSelection, CommandSpec, FormSpec, LambdaMode, OutputFormat, RunConfig};
use fqeuclid_cli::error::{CliError, Result};
use fqeuclid_cli::format::{read_json, FormFile, PatternFile, SampleSpec, SubsetSpec};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "fqeuclid", version, about = "Finite Euclidean graphs over F_q^d")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 3)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Monic modulus as a JSON coefficient list `[c0, ..., 1]`.
    #[arg(long)]
    modulus: Option<String>,
    /// Comma-separated field orders, e.g. `5,7,9`.
    #[arg(long, value_delimiter = ',')]
    q_grid: Option<Vec<u32>>,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// `identity`, `twisted`, inline JSON `{"dim":..,"gram":..}` or a path to such a file.
    #[arg(long, default_value = "identity")]
    form: String,
    /// Color as JSON (`2` or `[1,0]`); repeatable. All nonzero colors if omitted.
    #[arg(long = "color")]
    colors: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    #[arg(long, default_value_t = 1000)]
    oracle_cap: usize,
    #[arg(long = "constant-C", default_value_t = 1.0)]
    constant_c: f64,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Include wall-clock timings; output is then no longer reproducible.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Sphere sizes and distance pair counts for every t.
    Sphere {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        points: bool,
    },
    /// Character-sum spectra of the selected color classes.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Use the fast transform instead of per-character sums.
        #[arg(long)]
        fast: bool,
        /// Cross-check against a dense eigensolver when q^d <= oracle cap.
        #[arg(long)]
        dense_check: bool,
    },
    /// Regularity and spectral gap certificate for all color classes.
    Certify {
        #[command(flatten)]
        common: Common,
    },
    /// Expander mixing check on random vertex-set pairs.
    Mixing {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long = "lambda", value_enum, default_value_t = LambdaMode::Spectral)]
        lambda_mode: LambdaMode,
        #[arg(long, default_value_t = 1.0)]
        lambda_scale: f64,
    },
    /// Color balance, completeness and threshold sizes over a q grid.
    Kaleido {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        n_edges: usize,
        /// Pattern file to look for in a threshold-size random subset; repeatable.
        #[arg(long = "pattern")]
        patterns: Vec<PathBuf>,
    },
    /// Count colored embeddings of a pattern in a vertex subset.
    Count {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        pattern: PathBuf,
        /// JSON list of vertex indices.
        #[arg(long, conflicts_with = "subset_size")]
        subset_file: Option<PathBuf>,
        /// Random subset of this size drawn with `--seed`.
        #[arg(long)]
        subset_size: Option<usize>,
    },
    /// Spectrum of a distance defined by an arbitrary function F.
    Fdist {
        #[command(flatten)]
        common: Common,
        /// JSON file `{"table": [...]}` listing F in vertex-index order.
        #[arg(long, conflicts_with = "expr")]
        table: Option<String>,
        /// Built-in F: `quadratic` or `cubic-sum`.
        #[arg(long)]
        expr: Option<String>,
        #[arg(long, default_value = "1")]
        j: String,
    },
    /// Repeat a run from a config object (as embedded in any report).
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn json_arg(what: &str, text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| CliError::Config(format!("--{} {:?}: {}", what, text, e)))
}

fn build(common: &Common, command: CommandSpec) -> Result<RunConfig> {
    let modulus = match &common.modulus {
        None => None,
        Some(m) => Some(
            serde_json::from_str::<Vec<u32>>(m)
                .map_err(|e| CliError::Config(format!("--modulus {:?}: {}", m, e)))?,
        ),
    };
    let form = match common.form.as_str() {
        "identity" | "twisted" => FormSpec::Named(common.form.clone()),
        s if s.trim_start().starts_with('{') => FormSpec::Explicit(
            serde_json::from_str::<FormFile>(s).map_err(|e| CliError::Config(format!("--form: {}", e)))?,
        ),
        path => FormSpec::Explicit(read_json(path.as_ref())?),
    };
    let colors = if common.colors.is_empty() {
        ColorSelection::All("all".into())
    } else {
        ColorSelection::List(common.colors.iter().map(|c| json_arg("color", c)).collect::<Result<_>>()?)
    };
    Ok(RunConfig {
        p: common.p,
        r: common.r,
        modulus,
        q_grid: common.q_grid.clone(),
        d: common.d,
        form,
        colors,
        seed: common.seed,
        format: common.format,
        oracle_cap: common.oracle_cap,
        constant_c: common.constant_c,
        timing: common.timing,
        command,
    })
}

fn resolve(cli: Cli) -> Result<(RunConfig, Option<PathBuf>)> {
    let (common, spec) = match cli.command {
        Command::Run { config, output } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| CliError::Config(format!("{}: {}", config.display(), e)))?;
            return Ok((RunConfig::from_json(&text)?, output));
        }
        Command::Sphere { common, points } => (common, CommandSpec::Sphere { points }),
        Command::Spectrum {
            common,
            fast,
            dense_check,
        } => (common, CommandSpec::Spectrum { fast, dense_check }),
        Command::Certify { common } => (common, CommandSpec::Certify),
        Command::Mixing {
            common,
            samples,
            lambda_mode,
            lambda_scale,
        } => (
            common,
            CommandSpec::Mixing {
                samples,
                lambda_mode,
                lambda_scale,
            },
        ),
        Command::Kaleido {
            common,
            k,
            n_edges,
            patterns,
        } => {
            let patterns = patterns
                .iter()
                .map(|p| read_json::<PatternFile>(p))
                .collect::<Result<_>>()?;
            (common, CommandSpec::Kaleido { k, n_edges, patterns })
        }
        Command::Count {
            common,
            pattern,
            subset_file,
            subset_size,
        } => {
            let pattern: PatternFile = read_json(&pattern)?;
            let subset = match (subset_file, subset_size) {
                (Some(path), _) => Some(SubsetSpec::List(read_json(&path)?)),
                (None, Some(size)) => Some(SubsetSpec::Sample {
                    sample: SampleSpec {
                        size,
                        seed: common.seed,
                    },
                }),
                (None, None) => None,
            };
            (common, CommandSpec::Count { pattern, subset })
        }
        Command::Fdist { common, table, expr, j } => {
            let j = json_arg("j", &j)?;
            (common, CommandSpec::Fdist { table, expr, j })
        }
    };
    let output = common.output.clone();
    Ok((build(&common, spec)?, output))
}

fn execute(cli: Cli) -> Result<i32> {
    let (config, output) = resolve(cli)?;
    let report = commands::run(&config)?;
    let text = report.render(config.format)?;
    match output {
        Some(path) => fs::write(path, text)?,
        None => print!("{}", text),
    }
    if report.failures.is_empty() {
        Ok(0)
    } else {
        for f in &report.failures {
            eprintln!("{}", CliError::Verification(f.clone()).to_json());
        }
        Ok(3)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = execute(cli).unwrap_or_else(|e| {
        eprintln!("{}", e.to_json());
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
