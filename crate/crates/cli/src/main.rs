//! `horokit`: runs one experiment per invocation from flags and/or a JSON config.

mod commands;
mod config;
mod output;
mod parse;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use horokit_core::enveloping::Limits;
use serde_json::{json, Map, Value};

use config::{merge, CommandName, ExperimentConfig};
use output::{sha256_hex, write_atomic, ArtifactRecord, Manifest};

pub const EXIT_INVARIANT: u8 = 1;
pub const EXIT_SCHEMA: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn schema(message: String) -> Self {
        Failure {
            code: EXIT_SCHEMA,
            message,
        }
    }
}

impl From<horokit_core::Error> for Failure {
    fn from(e: horokit_core::Error) -> Self {
        use horokit_core::Error::*;
        let code = match &e {
            Config(_) | Argument(_) | Domain(_) => EXIT_SCHEMA,
            Resource(_) => EXIT_RESOURCE,
            Invariant(_) | Resolution(_) | FitRejected(_) => EXIT_INVARIANT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "horokit",
    version,
    about = "Lie identities, Burger kernels and modular-surface experiments"
)]
struct Cli {
    /// JSON config; its values override flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out_dir: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    max_degree: Option<usize>,
    #[arg(long, global = true)]
    max_grid: Option<usize>,
    #[arg(long, global = true)]
    max_n: Option<usize>,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Certificate P = sum Z_i H^i for H in the closed chamber of sl(n).
    LieIdent {
        #[arg(long)]
        algebra: Option<String>,
        /// "h/2", "2h1 - h2/3" or diagonal entries "1,0,-1".
        #[arg(long = "H", allow_hyphen_values = true)]
        h: Option<String>,
    },
    /// Burger kernels and their bound checks.
    Kernels {
        /// Repeatable; complex values such as 0.5+2i.
        #[arg(long = "lambda", allow_hyphen_values = true)]
        lambdas: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        eta: Option<String>,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        #[arg(long, allow_hyphen_values = true)]
        grid_lo: Option<f64>,
        #[arg(long)]
        grid_n: Option<usize>,
    },
    /// Incomplete Eisenstein averages along translated horocycles, with a decay fit.
    Horocycle {
        #[arg(long)]
        closed: bool,
        /// "re,im"
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        /// "start:end:step" or a comma list.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Profile support "a,b".
        #[arg(long)]
        psi: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        amplitude: Option<f64>,
        #[arg(long)]
        points_per_scale: Option<f64>,
    },
    /// Averages of the invariant height along translated horocycle pieces.
    Height {
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(long)]
        points_per_scale: Option<f64>,
    },
    /// Unipotent lattice points in a box scaled by H.
    Count {
        #[arg(long)]
        n: Option<usize>,
        /// Diagonal entries "1,0,-1".
        #[arg(long = "H", allow_hyphen_values = true)]
        h: Option<String>,
    },
    /// Decay fit of a horocycle CSV.
    Fit {
        #[arg(long)]
        input: Option<String>,
    },
    /// Re-checks an exported certificate from scratch.
    Verify {
        #[arg(long)]
        certificate: Option<String>,
    },
}

fn pair(s: &str) -> Result<Value, Failure> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::schema(format!("expected two numbers \"a,b\", got {s:?}")))?;
    if v.len() != 2 {
        return Err(Failure::schema(format!(
            "expected two numbers \"a,b\", got {s:?}"
        )));
    }
    Ok(json!(v))
}

fn put(m: &mut Map<String, Value>, key: &str, v: Option<Value>) {
    if let Some(v) = v {
        m.insert(key.into(), v);
    }
}

/// The command name and parameter block given by flags.
fn flag_params(cmd: &Cmd) -> Result<(CommandName, Value), Failure> {
    let mut m = Map::new();
    let name = match cmd {
        Cmd::LieIdent { algebra, h } => {
            put(&mut m, "algebra", algebra.clone().map(Value::from));
            put(&mut m, "H", h.clone().map(Value::from));
            CommandName::LieIdent
        }
        Cmd::Kernels {
            lambdas,
            beta,
            alpha,
            eta,
            weights,
            grid_lo,
            grid_n,
        } => {
            put(
                &mut m,
                "lambdas",
                (!lambdas.is_empty()).then(|| json!(lambdas)),
            );
            put(&mut m, "beta", beta.map(Value::from));
            put(&mut m, "alpha", alpha.clone().map(Value::from));
            put(&mut m, "eta", eta.clone().map(Value::from));
            put(&mut m, "weights", weights.as_ref().map(|w| json!(w)));
            put(&mut m, "grid_lo", grid_lo.map(Value::from));
            put(&mut m, "grid_n", grid_n.map(Value::from));
            CommandName::Kernels
        }
        Cmd::Horocycle {
            closed,
            x0,
            t,
            psi,
            amplitude,
            points_per_scale,
        } => {
            put(&mut m, "closed", closed.then_some(Value::Bool(true)));
            put(&mut m, "x0", x0.as_deref().map(pair).transpose()?);
            put(&mut m, "t", t.clone().map(Value::from));
            put(&mut m, "psi", psi.as_deref().map(pair).transpose()?);
            put(&mut m, "amplitude", amplitude.map(Value::from));
            put(
                &mut m,
                "points_per_scale",
                points_per_scale.map(Value::from),
            );
            CommandName::Horocycle
        }
        Cmd::Height {
            x0,
            t,
            points_per_scale,
        } => {
            put(&mut m, "x0", x0.as_deref().map(pair).transpose()?);
            put(&mut m, "t", t.clone().map(Value::from));
            put(
                &mut m,
                "points_per_scale",
                points_per_scale.map(Value::from),
            );
            CommandName::Height
        }
        Cmd::Count { n, h } => {
            put(&mut m, "n", n.map(Value::from));
            if let Some(h) = h {
                let v: Vec<f64> = h
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| {
                        Failure::schema(format!("H must be a comma list of numbers, got {h:?}"))
                    })?;
                m.insert("H".into(), json!(v));
            }
            CommandName::Count
        }
        Cmd::Fit { input } => {
            put(&mut m, "input", input.clone().map(Value::from));
            CommandName::Fit
        }
        Cmd::Verify { certificate } => {
            put(&mut m, "certificate", certificate.clone().map(Value::from));
            CommandName::Verify
        }
    };
    Ok((name, Value::Object(m)))
}

fn build_config(cli: &Cli) -> Result<(ExperimentConfig, Value), Failure> {
    let mut doc = json!({});
    if let Some(cmd) = &cli.command {
        let (name, params) = flag_params(cmd)?;
        doc = json!({ "command": name, "params": params });
    }
    let mut limits = Map::new();
    put(&mut limits, "max_degree", cli.max_degree.map(Value::from));
    put(&mut limits, "max_grid", cli.max_grid.map(Value::from));
    put(&mut limits, "max_n", cli.max_n.map(Value::from));
    if !limits.is_empty() {
        doc["limits"] = Value::Object(limits);
    }
    if let Some(dir) = &cli.out_dir {
        doc["out_dir"] = json!(dir);
    }
    if let Some(seed) = cli.seed {
        doc["seed"] = json!(seed);
    }
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::schema(format!("cannot read config {}: {e}", path.display())))?;
        let file: Value = serde_json::from_str(&text)
            .map_err(|e| Failure::schema(format!("config is not valid JSON: {e}")))?;
        // the file alone must already be a well-formed config
        serde_json::from_value::<ExperimentConfig>(file.clone())
            .map_err(|e| Failure::schema(format!("config schema: {e}")))?;
        if let (Some(a), Some(b)) = (doc.get("command"), file.get("command")) {
            if a != b {
                return Err(Failure::schema(format!(
                    "subcommand {a} conflicts with config command {b}"
                )));
            }
        }
        merge(&mut doc, &file);
    }
    if doc.get("command").is_none() {
        return Err(Failure::schema(
            "no subcommand and no --config given".into(),
        ));
    }
    let cfg: ExperimentConfig = serde_json::from_value(doc.clone())
        .map_err(|e| Failure::schema(format!("config schema: {e}")))?;
    let canonical = serde_json::to_value(&cfg).expect("serializable");
    Ok((cfg, canonical))
}

/// HOROKIT_MAX_MEM in bytes, with optional K, M or G suffix.
fn memory_limit() -> Result<Option<u64>, Failure> {
    let Ok(raw) = std::env::var("HOROKIT_MAX_MEM") else {
        return Ok(None);
    };
    let s = raw.trim();
    let (num, mult) = match s.chars().last().map(|c| c.to_ascii_uppercase()) {
        Some('K') => (&s[..s.len() - 1], 1u64 << 10),
        Some('M') => (&s[..s.len() - 1], 1 << 20),
        Some('G') => (&s[..s.len() - 1], 1 << 30),
        _ => (s, 1),
    };
    num.trim()
        .parse::<u64>()
        .ok()
        .and_then(|n| n.checked_mul(mult))
        .map(Some)
        .ok_or_else(|| Failure::schema(format!("HOROKIT_MAX_MEM={raw:?} is not a byte count")))
}

fn solver_limits(cfg: &ExperimentConfig) -> Result<Limits, Failure> {
    let mut limits = match memory_limit()? {
        Some(bytes) => Limits::from_memory_bytes(bytes),
        None => Limits::default(),
    };
    if let Some(d) = cfg.limits.max_degree {
        limits.max_degree = d;
    }
    Ok(limits)
}

fn execute(cli: &Cli) -> Result<u8, Failure> {
    let (cfg, canonical) = build_config(cli)?;
    let limits = solver_limits(&cfg)?;
    let start = Instant::now();
    let result = commands::run(&cfg, limits);
    let out_dir = Path::new(&cfg.out_dir);
    let (artifacts, summary, failure) = match result {
        Ok(r) => {
            let failure = r.invariant_failure.map(|m| Failure {
                code: EXIT_INVARIANT,
                message: format!("invariant failed: {m}"),
            });
            (r.artifacts, Some(r.summary), failure)
        }
        Err(f) if f.code == EXIT_SCHEMA => return Err(f),
        Err(f) => (Vec::new(), None, Some(f)),
    };
    let io = |e: std::io::Error| Failure {
        code: EXIT_SCHEMA,
        message: format!("cannot write to {}: {e}", out_dir.display()),
    };
    std::fs::create_dir_all(out_dir).map_err(io)?;
    let mut records = Vec::new();
    for a in &artifacts {
        write_atomic(out_dir, &a.name, &a.contents).map_err(io)?;
        records.push(ArtifactRecord {
            name: a.name.clone(),
            sha256: sha256_hex(&a.contents),
            bytes: a.contents.len(),
        });
    }
    let code = failure.as_ref().map_or(0, |f| f.code);
    let manifest = Manifest {
        tool: "horokit",
        version: env!("CARGO_PKG_VERSION"),
        core_version: horokit_core::VERSION,
        command: cfg.command.as_str().into(),
        config_sha256: sha256_hex(&serde_json::to_vec(&canonical).expect("serializable")),
        config: canonical,
        seed: cfg.seed,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        exit_code: code,
        failure: failure.as_ref().map(|f| f.message.clone()),
        artifacts: records,
    };
    write_atomic(
        out_dir,
        "manifest.json",
        serde_json::to_string_pretty(&manifest)
            .expect("serializable")
            .as_bytes(),
    )
    .map_err(io)?;
    if let Some(s) = summary {
        println!(
            "{}",
            serde_json::to_string_pretty(&s).expect("serializable")
        );
    }
    match failure {
        Some(f) => Err(f),
        None => Ok(0),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("horokit: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
