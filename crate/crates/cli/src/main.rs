mod cache;
mod commands;
mod render;

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use connexp::models::{builtin, custom_from_file, ModelError, ModelSpec, Params};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use cache::Cache;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Core(#[from] connexp::Error),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_)
            | CliError::Model(ModelError::UnknownModel(_))
            | CliError::Model(ModelError::InvalidParams { .. })
            | CliError::Core(connexp::Error::Model(ModelError::UnknownModel(_)))
            | CliError::Core(connexp::Error::Model(ModelError::InvalidParams { .. })) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

/// Exact connectivity asymptotics for labeled combinatorial classes.
#[derive(Debug, Parser)]
#[command(name = "connexp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Cache directory (default: the platform user-cache directory).
    #[arg(long, global = true, value_name = "PATH")]
    cache_dir: Option<PathBuf>,
    /// Compute everything afresh and write nothing to disk.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Also show rationals rounded to K decimal digits (display only).
    #[arg(long, global = true, value_name = "K")]
    decimal: Option<usize>,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Builtin model, e.g. `graph`, `ogem` or `ogem(D=3)`.
    #[arg(long)]
    model: Option<String>,
    /// Model parameter, repeatable: `--param d=2`.
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    params: Vec<(String, i64)>,
    /// Custom sequence file: {"label": .., "period": .., "terms": [..]}.
    #[arg(long, value_name = "PATH", conflicts_with = "model")]
    custom: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Sizes {
    /// A single size n.
    #[arg(long, value_name = "N")]
    at: Option<usize>,
    /// Inclusive size range `A..B`; sizes off the model's lattice are skipped.
    #[arg(long, value_name = "A..B", value_parser = parse_range, conflicts_with = "at")]
    range: Option<RangeInclusive<usize>>,
}

impl Sizes {
    fn list(&self, period: usize) -> Vec<usize> {
        match (&self.at, &self.range) {
            (Some(n), _) => vec![*n],
            (None, Some(r)) => r.clone().filter(|n| n % period == 0).collect(),
            (None, None) => Vec::new(),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List builtin models.
    Models,
    /// Counting sequence a_0..a_N.
    Coeffs {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'r', long = "order", default_value_t = 12)]
        order: usize,
    },
    /// Connected counts c_0..c_N.
    Connected {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'r', long = "order", default_value_t = 12)]
        order: usize,
    },
    /// Derivative numbers d_0..d_N.
    Derivative {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'r', long = "order", default_value_t = 12)]
        order: usize,
        /// Print δ_n = d_n/n! instead of d_n.
        #[arg(long)]
        no_interpretation: bool,
    },
    /// Term list of the expansion, optionally evaluated.
    Expand {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'r', long = "order", default_value_t = 4)]
        r: usize,
        #[command(flatten)]
        sizes: Sizes,
    },
    /// Coefficients of the 1/n series.
    Series {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'r', long = "order", default_value_t = 4)]
        r: usize,
    },
    /// Exact probability c_n/a_n.
    Exact {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        sizes: Sizes,
    },
    /// Compare with exhaustive enumeration.
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
    /// Finite-window gargantuan diagnostics.
    Diagnose {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_name = "A..B", value_parser = parse_range, default_value = "5..24")]
        window: RangeInclusive<usize>,
        #[arg(long, default_value_t = 3)]
        r_max: usize,
        /// Use a_n itself rather than a_n/n!.
        #[arg(long)]
        raw: bool,
    },
}

fn parse_param(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got `{s}`"))?;
    let v = v.trim().parse().map_err(|_| format!("`{v}` is not an integer"))?;
    Ok((k.trim().to_string(), v))
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got `{s}`"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a.trim().parse().map_err(|_| format!("`{a}` is not a size"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("`{b}` is not a size"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

/// The model and the key under which its results are cached.
fn resolve(args: &ModelArgs) -> Result<(ModelSpec, String), CliError> {
    if let Some(path) = &args.custom {
        if !args.params.is_empty() {
            return Err(CliError::Usage("--param does not apply to --custom".into()));
        }
        let model = custom_from_file(path)?;
        let bytes = std::fs::read(path).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
        let digest = Sha256::digest(&bytes);
        let short: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
        let key = format!("{}@{short}", model.id());
        return Ok((model, key));
    }
    let name = args
        .model
        .as_deref()
        .ok_or_else(|| CliError::Usage("one of --model or --custom is required".into()))?;
    let mut params: Params = args.params.iter().cloned().collect();
    let base = match name.split_once('(') {
        Some((base, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| CliError::Usage(format!("malformed model `{name}`")))?;
            for part in inner.split(',').filter(|p| !p.trim().is_empty()) {
                let (k, v) = parse_param(part).map_err(CliError::Usage)?;
                params.insert(k, v);
            }
            base
        }
        None => name,
    };
    let model = builtin(base, &params)?;
    let key = model.id().to_string();
    Ok((model, key))
}

struct Runner {
    cache: Option<Cache>,
}

impl Runner {
    fn cached(&self, key: String, compute: impl FnOnce() -> Result<Value, CliError>) -> Result<Value, CliError> {
        match &self.cache {
            Some(c) => c.get_or_compute(&key, compute),
            None => compute(),
        }
    }
}

fn sizes_key(sizes: &[usize]) -> String {
    match (sizes.first(), sizes.last()) {
        (Some(a), Some(b)) => format!("{a}..{b}"),
        _ => "none".into(),
    }
}

fn run(cli: &Cli) -> Result<(String, Value, bool), CliError> {
    let runner = Runner {
        cache: if cli.no_cache {
            None
        } else {
            cli.cache_dir.clone().or_else(Cache::default_dir).map(Cache::new)
        },
    };
    let (name, payload, ok) = match &cli.command {
        Command::Models => ("models", commands::models(), true),
        Command::Coeffs { model, order } => {
            let (m, key) = resolve(model)?;
            let v = runner.cached(format!("coeffs|{key}|{order}"), || commands::coeffs(&m, *order))?;
            ("coeffs", v, true)
        }
        Command::Connected { model, order } => {
            let (m, key) = resolve(model)?;
            let v = runner.cached(format!("connected|{key}|{order}"), || commands::connected(&m, *order))?;
            ("connected", v, true)
        }
        Command::Derivative { model, order, no_interpretation } => {
            let (m, key) = resolve(model)?;
            let v = runner.cached(format!("derivative|{key}|{order}|{no_interpretation}"), || {
                commands::derivative(&m, *order, *no_interpretation)
            })?;
            ("derivative", v, true)
        }
        Command::Expand { model, r, sizes } => {
            let (m, key) = resolve(model)?;
            let ns = sizes.list(m.period());
            let v = runner.cached(format!("expand|{key}|{r}|{}", sizes_key(&ns)), || commands::expand(&m, *r, &ns))?;
            ("expand", v, true)
        }
        Command::Series { model, r } => {
            let (m, key) = resolve(model)?;
            let v = runner.cached(format!("series|{key}|{r}"), || commands::series(&m, *r))?;
            ("series", v, true)
        }
        Command::Exact { model, sizes } => {
            let (m, key) = resolve(model)?;
            let ns = sizes.list(m.period());
            if ns.is_empty() {
                return Err(CliError::Usage("exact needs --at N or --range A..B".into()));
            }
            let v = runner.cached(format!("exact|{key}|{}", sizes_key(&ns)), || commands::exact(&m, &ns))?;
            ("exact", v, true)
        }
        Command::Verify { model, max_n } => {
            let m = match (&model.model, &model.custom) {
                (None, None) => None,
                _ => Some(resolve(model)?.0),
            };
            let (v, pass) = commands::verify(m.as_ref(), *max_n)?;
            ("verify", v, pass)
        }
        Command::Diagnose { model, window, r_max, raw } => {
            let (m, key) = resolve(model)?;
            let v = runner.cached(
                format!("diagnose|{key}|{}..{}|{r_max}|{raw}", window.start(), window.end()),
                || commands::diagnose(&m, window.clone(), *r_max, *raw),
            )?;
            ("diagnose", v, true)
        }
    };
    Ok((name.to_string(), payload, ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((name, mut payload, ok)) => {
            let text = match cli.format {
                Format::Json => {
                    if let Some(k) = cli.decimal {
                        render::annotate_decimals(&mut payload, k);
                    }
                    serde_json::to_string_pretty(&payload).expect("payload serializes") + "\n"
                }
                Format::Table => commands::render_table(&name, &payload, cli.decimal),
            };
            // a closed pipe downstream is not an error
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: verification found a mismatch");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
