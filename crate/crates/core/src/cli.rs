//! Command-line front end. [`run`] is the whole program minus process I/O,
//! so it can be tested directly.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::{
    graded_json, matrix_json, module_json, parse_matrix, parse_module_file, subspace_json, to_canonical_json,
    verdict_json, ModuleJson, ParsedModule, PfaffianJson,
};
use crate::gitdecide::{enumerate_totally_isotropic, graded, s_equivalent, SearchConfig};
use crate::hilbertmumford::{limit_at_zero, mu, Limit, OneParamSubgroup};
use crate::linalg::{ExactField, Matrix};
use crate::parahoric::{fiber_structure_check, pfaffian, FiberCase, TypeVector};
use crate::registry::StrategyRegistry;
use crate::sigmamod::IsoOutcome;

#[derive(Debug, Parser)]
#[command(
    name = "sigmagit",
    version,
    about = "Semistability, graded modules and S-equivalence for σ-quadratic modules"
)]
struct Cli {
    /// Field for reading entries: `rational` or `fp:<p>`; overrides the file.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Primes for reduction of rational modules, comma separated.
    #[arg(long = "prime-list", global = true, value_delimiter = ',')]
    prime_list: Option<Vec<u64>>,
    /// Largest dimension enumerated exhaustively.
    #[arg(long = "enum-bound", global = true)]
    enum_bound: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Strategy name: semistability for `check`, isomorphism for `sequiv`.
    #[arg(long, global = true, default_value = "auto")]
    strategy: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Semistability verdict with certificate.
    Check { file: PathBuf },
    /// Hilbert–Mumford weight of the file's `lambda` (or `--weights`).
    Weight {
        file: PathBuf,
        /// Diagonal weights on the standard basis, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Option<Vec<i64>>,
    },
    /// Limit of `λ(t)·q` as `t → 0`.
    Limit {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Option<Vec<i64>>,
    },
    /// Filtration and graded module.
    Gr { file: PathBuf },
    /// S-equivalence of two modules.
    Sequiv { first: PathBuf, second: PathBuf },
    /// Fixed-point fiber report over a prime field.
    Fiber {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// `plus`, `alternating` or `unramified`.
        #[arg(long, default_value = "plus")]
        case: String,
    },
    /// Pfaffian of `matrix`, or Pfaffians and type vector of `matrices`.
    Pfaffian { file: PathBuf },
    /// Nonzero totally isotropic subspaces over a prime field.
    Enumerate { file: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match execute(&cli) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// 2 for internal invariant failures, 1 for everything caused by the input.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) => 2,
        _ => 1,
    }
}

fn config(cli: &Cli) -> SearchConfig {
    let mut c = SearchConfig::default();
    if let Some(p) = &cli.prime_list {
        c.primes = p.clone();
    }
    if let Some(b) = cli.enum_bound {
        c.enum_bound = b;
    }
    c
}

fn field_flag(cli: &Cli) -> Result<Option<ExactField>> {
    cli.field.as_deref().map(str::parse).transpose()
}

fn read_module(cli: &Cli, path: &Path) -> Result<ParsedModule> {
    let bytes = std::fs::read(path)?;
    parse_module_file(&bytes, field_flag(cli)?)
}

fn lambda_for(parsed: &ParsedModule, weights: &Option<Vec<i64>>) -> Result<OneParamSubgroup> {
    match weights {
        Some(w) => {
            if w.len() != parsed.module.dim_h() {
                return Err(Error::shape(format!(
                    "{} weights for a {}-dimensional module",
                    w.len(),
                    parsed.module.dim_h()
                )));
            }
            OneParamSubgroup::diagonal(parsed.module.field(), w)
        }
        None => parsed
            .lambda
            .clone()
            .ok_or_else(|| Error::Malformed("no \"lambda\" in the file and no --weights given".into())),
    }
}

#[derive(Serialize)]
struct WeightOut {
    mu: String,
}

#[derive(Serialize)]
#[serde(untagged)]
enum LimitValue {
    Module(ModuleJson),
    Diverges(&'static str),
}

#[derive(Serialize)]
struct LimitOut {
    limit: LimitValue,
}

#[derive(Serialize)]
struct SequivOut {
    s_equivalent: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<Vec<String>>>,
}

#[derive(Serialize)]
struct PfaffianOut {
    pfaffian: String,
}

#[derive(Serialize)]
struct TypeOut {
    pfaffians: Vec<String>,
    type_vector: Vec<i8>,
}

#[derive(Serialize)]
struct EnumerateOut {
    count: usize,
    subspaces: Vec<Vec<Vec<String>>>,
}

fn execute(cli: &Cli) -> Result<String> {
    let registry = StrategyRegistry::with_defaults();
    let cfg = config(cli);
    match &cli.command {
        Command::Check { file } => {
            let p = read_module(cli, file)?;
            let strategy = registry.semistability(&cli.strategy)?;
            to_canonical_json(&verdict_json(&strategy.decide(&p.module, &cfg)?))
        }
        Command::Weight { file, weights } => {
            let p = read_module(cli, file)?;
            let lambda = lambda_for(&p, weights)?;
            to_canonical_json(&WeightOut {
                mu: mu(&lambda, &p.module)?.to_string(),
            })
        }
        Command::Limit { file, weights } => {
            let p = read_module(cli, file)?;
            let lambda = lambda_for(&p, weights)?;
            let limit = match limit_at_zero(&lambda, &p.module)? {
                Limit::Exists(m) => LimitValue::Module(module_json(&m)),
                Limit::Diverges => LimitValue::Diverges("diverges"),
            };
            to_canonical_json(&LimitOut { limit })
        }
        Command::Gr { file } => {
            let p = read_module(cli, file)?;
            to_canonical_json(&graded_json(&graded(&p.module, &cfg)?))
        }
        Command::Sequiv { first, second } => {
            let a = read_module(cli, first)?;
            let b = read_module(cli, second)?;
            let strategy = registry.isomorphism(&cli.strategy)?;
            let out = match s_equivalent(&a.module, &b.module, strategy, &cfg)? {
                IsoOutcome::Yes(f) => SequivOut {
                    s_equivalent: "yes",
                    witness: Some(matrix_json(&f)),
                },
                IsoOutcome::No => SequivOut {
                    s_equivalent: "no",
                    witness: None,
                },
                IsoOutcome::Unknown => SequivOut {
                    s_equivalent: "unknown",
                    witness: None,
                },
            };
            to_canonical_json(&out)
        }
        Command::Fiber { rank, case } => {
            let field = field_flag(cli)?.ok_or_else(|| Error::InvalidField("fiber needs --field fp:<p>".into()))?;
            let case = match case.as_str() {
                "plus" => FiberCase::Plus,
                "unramified" => FiberCase::Unramified,
                "alternating" => FiberCase::Alternating(standard_symplectic(field, *rank)?),
                other => return Err(Error::Malformed(format!("unknown fiber case {other:?}"))),
            };
            to_canonical_json(&fiber_structure_check(field, *rank, &case, cli.seed)?)
        }
        Command::Pfaffian { file } => {
            let bytes = std::fs::read(file)?;
            let raw: PfaffianJson = serde_json::from_slice(&bytes)?;
            let field = match field_flag(cli)? {
                Some(f) => f,
                None => raw.field.parse()?,
            };
            match (&raw.matrix, &raw.matrices) {
                (Some(m), None) => {
                    let a = parse_matrix(field, m, None, "matrix")?;
                    to_canonical_json(&PfaffianOut {
                        pfaffian: pfaffian(&a)?.to_string(),
                    })
                }
                (None, Some(ms)) => {
                    let mats = ms
                        .iter()
                        .enumerate()
                        .map(|(i, m)| parse_matrix(field, m, None, &format!("matrix {i}")))
                        .collect::<Result<Vec<Matrix>>>()?;
                    let pfaffians = mats
                        .iter()
                        .map(|m| pfaffian(m).map(|x| x.to_string()))
                        .collect::<Result<Vec<_>>>()?;
                    let t = TypeVector::from_forms(&mats)?;
                    to_canonical_json(&TypeOut {
                        pfaffians,
                        type_vector: t.taus().to_vec(),
                    })
                }
                _ => Err(Error::Malformed(
                    "give exactly one of \"matrix\" or \"matrices\"".into(),
                )),
            }
        }
        Command::Enumerate { file } => {
            let p = read_module(cli, file)?;
            let subs = enumerate_totally_isotropic(&p.module, cfg.enum_bound)?;
            to_canonical_json(&EnumerateOut {
                count: subs.len(),
                subspaces: subs.iter().map(subspace_json).collect(),
            })
        }
    }
}

/// `J_r = [[0, I], [−I, 0]]`.
fn standard_symplectic(field: ExactField, r: usize) -> Result<Matrix> {
    if r % 2 == 1 {
        return Err(Error::OddSize);
    }
    let h = r / 2;
    let mut j = Matrix::zeros(field, r, r);
    j.set_block(0, h, &Matrix::identity(field, h));
    j.set_block(h, 0, &Matrix::scalar_identity(field, h, &field.from_i64(-1)));
    Ok(j)
}
