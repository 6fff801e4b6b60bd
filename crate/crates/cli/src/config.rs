//! Flags, optional TOML config, and the merged experiment configuration.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "cubesff", version, about = "Exact experiments on sums of three cubes over F_q[t]")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Cubic Gauss and Jacobi sums with their identities.
    Gauss,
    /// Density certificate showing S_A has density < 1.
    Certificate,
    /// rho(N, k) for every residue k modulo N.
    Localdensity,
    /// sigma_{inf,A}(k) for given or sampled k.
    Sigma,
    /// Fraction of k of each degree lying in S_A.
    Scan,
    /// Variance sums and their identities.
    Variance,
    /// Main term, linear-space term and residual of the weighted count.
    Manin,
    /// Runs every exact-identity suite for one field.
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long = "q-p", global = true)]
    pub q_p: Option<u32>,
    #[arg(long = "q-e", global = true)]
    pub q_e: Option<u32>,
    /// Field size as a prime power, instead of --q-p/--q-e.
    #[arg(long, global = true)]
    pub q: Option<u64>,
    #[arg(long = "A", global = true)]
    pub a: Option<f64>,
    #[arg(long, global = true)]
    pub alpha: Option<u32>,
    #[arg(long, global = true)]
    pub d: Option<u32>,
    #[arg(long = "M", global = true)]
    pub m: Option<u32>,
    #[arg(long = "d-max", global = true)]
    pub d_max: Option<u32>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// A polynomial as comma-separated coefficient indices, low degree first.
    #[arg(long, global = true)]
    pub k: Option<String>,
    /// Modulus for localdensity, same encoding as --k (default N(M)).
    #[arg(long, global = true)]
    pub modulus: Option<String>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long = "b-min", global = true)]
    pub b_min: Option<u32>,
    #[arg(long = "b-max", global = true)]
    pub b_max: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    q_p: Option<u32>,
    q_e: Option<u32>,
    q: Option<u64>,
    #[serde(rename = "A")]
    a: Option<f64>,
    alpha: Option<u32>,
    d: Option<u32>,
    #[serde(rename = "M")]
    m: Option<u32>,
    d_max: Option<u32>,
    threads: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    k: Option<String>,
    modulus: Option<String>,
    samples: Option<usize>,
    b_min: Option<u32>,
    b_max: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// `(p, e)` when a field was given.
    pub field: Option<(u32, u32)>,
    pub a: f64,
    pub alpha: u32,
    pub d: Option<u32>,
    pub m: Option<u32>,
    pub d_max: u32,
    pub threads: Option<usize>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub k: Option<String>,
    pub modulus: Option<String>,
    pub samples: usize,
    pub b_min: Option<u32>,
    pub b_max: Option<u32>,
}

fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("reading {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("parsing {}: {e}", path.display())))
}

fn resolve_field(q: Option<u64>, q_p: Option<u32>, q_e: Option<u32>) -> Result<Option<(u32, u32)>, CliError> {
    let from_q = match q {
        None => None,
        Some(q) => {
            let f = cubesff::gf::factor_u64(q);
            if f.len() != 1 {
                return Err(CliError::Config(format!("--q {q} is not a prime power")));
            }
            Some((f[0].0 as u32, f[0].1))
        }
    };
    let from_pe = q_p.map(|p| (p, q_e.unwrap_or(1)));
    let field = match (from_q, from_pe) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError::Config(format!("--q gives p^e = {}^{} but --q-p/--q-e give {}^{}", a.0, a.1, b.0, b.1)))
        }
        (a, b) => a.or(b),
    };
    if q_e.is_some() && q_p.is_none() && q.is_none() {
        return Err(CliError::Config("--q-e needs --q-p".into()));
    }
    if let Some((p, e)) = field {
        if !cubesff::gf::is_prime_u64(p as u64) {
            return Err(CliError::Config(format!("p = {p} is not prime")));
        }
        if p == 3 {
            return Err(CliError::Config("characteristic 3 is not supported".into()));
        }
        if e == 0 {
            return Err(CliError::Config("e must be >= 1".into()));
        }
    }
    Ok(field)
}

impl ExperimentConfig {
    pub fn from_flags(flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => load_file(p)?,
            None => FileConfig::default(),
        };
        // Flags win field by field; q and q_p/q_e are resolved as a group.
        let (q, q_p, q_e) = if flags.q.is_some() || flags.q_p.is_some() || flags.q_e.is_some() {
            (flags.q, flags.q_p, flags.q_e)
        } else {
            (file.q, file.q_p, file.q_e)
        };
        let a = flags.a.or(file.a).unwrap_or(0.0);
        if !a.is_finite() || a < 0.0 {
            return Err(CliError::Config(format!("A must be a finite real >= 0, got {a}")));
        }
        Ok(ExperimentConfig {
            field: resolve_field(q, q_p, q_e)?,
            a,
            alpha: flags.alpha.or(file.alpha).unwrap_or(0),
            d: flags.d.or(file.d),
            m: flags.m.or(file.m),
            d_max: flags.d_max.or(file.d_max).unwrap_or(12),
            threads: flags.threads.or(file.threads),
            seed: flags.seed.or(file.seed).unwrap_or(0),
            out: flags.out.clone().or(file.out),
            format: flags.format.or(file.format).unwrap_or(Format::Json),
            k: flags.k.clone().or(file.k),
            modulus: flags.modulus.clone().or(file.modulus),
            samples: flags.samples.or(file.samples).unwrap_or(5),
            b_min: flags.b_min.or(file.b_min),
            b_max: flags.b_max.or(file.b_max),
        })
    }

    pub fn field(&self) -> Result<(u32, u32), CliError> {
        self.field.ok_or_else(|| CliError::Config("a field is required (--q or --q-p/--q-e)".into()))
    }

    pub fn d(&self) -> Result<u32, CliError> {
        self.d.ok_or_else(|| CliError::Config("--d is required".into()))
    }
}
