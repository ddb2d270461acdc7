//! The `momix` command line: run configuration, subcommands and verification suites.

pub mod artifact;
pub mod suites;

use crate::bmp::{bruhat_graph, build_bmp, BmpCategory, Normalization, WindowPolicy};
use crate::coxeter::{CoxeterGroup, CoxeterSystem, Realization};
use crate::error::{Error, Result};
use crate::homotopy::khom::khom_series;
use crate::homotopy::rouquier::describe;
use crate::homotopy::{
    costandard, delta, nabla, rouquier, standard, BmpComplex, BmpCtx, LetterKind,
};
use crate::polyalg::Field;
use artifact::{Artifact, ComplexJson, HomRow, Payload};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::sync::Arc;

/// Everything that determines a run; echoed into every artifact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(rename = "type")]
    pub type_spec: String,
    pub matrix: Option<String>,
    pub field: Option<Field>,
    pub normalization: Normalization,
    pub window: WindowPolicy,
    pub max_degree: i32,
    pub max_length: Option<usize>,
    pub jobs: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            type_spec: "A1".into(),
            matrix: None,
            field: None,
            normalization: Normalization::Perverse,
            window: WindowPolicy::default(),
            max_degree: 8,
            max_length: None,
            jobs: 1,
            seed: 0,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn for_type(t: &str) -> RunConfig {
        RunConfig {
            type_spec: t.into(),
            ..RunConfig::default()
        }
    }

    /// The Coxeter group: geometric realization unless `matrix` gives an explicit one.
    pub fn group(&self) -> Result<CoxeterGroup> {
        let system = CoxeterSystem::parse(&self.type_spec)?;
        let mut real = match &self.matrix {
            Some(m) => Realization::from_json(&read_inline(m)?)?,
            None => Realization::geometric(&system)?,
        };
        if let Some(f) = self.field {
            if f.join(real.field)? != f {
                return Err(Error::FieldMismatch(format!(
                    "realization needs {:?}, field spec is {f:?}",
                    real.field
                )));
            }
            real.field = f;
        }
        CoxeterGroup::new(system, real)
    }
}

/// Inline JSON or the path of a file holding it.
fn read_inline(s: &str) -> Result<String> {
    if s.trim_start().starts_with('{') {
        Ok(s.to_string())
    } else {
        Ok(std::fs::read_to_string(s)?)
    }
}

/// A configured run: the config and the category of BMP sheaves it describes.
pub struct Env {
    pub config: RunConfig,
    pub cat: BmpCategory,
}

impl Env {
    pub fn new(config: RunConfig) -> Result<Env> {
        let cat = BmpCategory::with_policy(config.group()?, config.window)?;
        Ok(Env { config, cat })
    }

    pub fn element(&self, w: &str) -> Result<usize> {
        self.cat.group().parse_element(w)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "momix",
    version,
    about = "Moment graph sheaves, BMP sheaves and Rouquier complexes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Coxeter type: A1, A2, B2, A3, ... or JSON {"gens":[...],"m":[[...]]}
    #[arg(long = "type", default_value = "A1")]
    pub type_spec: String,
    /// Explicit realization (JSON or file path)
    #[arg(long)]
    pub matrix: Option<String>,
    /// rational, quadratic, or JSON {"kind":"quadratic","d":2}
    #[arg(long)]
    pub field: Option<String>,
    /// Discriminant for --field quadratic
    #[arg(long)]
    pub d: Option<i64>,
    #[arg(long, default_value = "perverse")]
    pub normalization: String,
    /// Internal degrees checked are [-max, max]
    #[arg(long, default_value_t = 8)]
    pub max_degree: i32,
    /// Only elements of at most this length
    #[arg(long)]
    pub max_length: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    pub fn config(&self) -> Result<RunConfig> {
        let field = match (self.field.as_deref(), self.d) {
            (None, None) => None,
            (None, Some(d)) | (Some("quadratic"), Some(d)) => Some(Field::quadratic(d)?),
            (Some("quadratic"), None) => {
                return Err(Error::Validation("--field quadratic needs --d".into()))
            }
            (Some(f), None) => Some(Field::parse(f)?),
            (Some(_), Some(_)) => {
                return Err(Error::Validation(
                    "--d only goes with --field quadratic".into(),
                ))
            }
        };
        Ok(RunConfig {
            type_spec: self.type_spec.clone(),
            matrix: self.matrix.clone(),
            field,
            normalization: Normalization::parse(&self.normalization)?,
            window: WindowPolicy::default(),
            max_degree: self.max_degree,
            max_length: self.max_length,
            jobs: self.jobs,
            seed: self.seed,
            out: self.out.clone(),
        })
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bruhat moment graphs
    Graph {
        #[command(subcommand)]
        action: Build,
    },
    /// Indecomposable BMP sheaves
    Bmp {
        #[command(subcommand)]
        action: Compute,
    },
    /// Rouquier complexes of reduced words
    Rouquier {
        #[command(subcommand)]
        action: Build,
    },
    /// Standard objects
    Delta {
        #[command(subcommand)]
        action: Build,
    },
    /// Costandard objects
    Nabla {
        #[command(subcommand)]
        action: Build,
    },
    /// Graded Hom dimensions between standard and costandard objects
    Hom {
        #[command(subcommand)]
        action: Compute,
    },
    /// Run verification suites
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suite name, or "all"
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Convert an artifact to CSV or text
    Export {
        input: PathBuf,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Build {
    Build(Target),
}

#[derive(Subcommand, Debug)]
pub enum Compute {
    Compute(Target),
}

#[derive(Args, Debug)]
pub struct Target {
    #[command(flatten)]
    pub common: Common,
    /// Group element (top vertex), e.g. sts
    #[arg(long)]
    pub top: Option<String>,
    /// Word, e.g. s,t,s
    #[arg(long)]
    pub word: Option<String>,
    /// F or E
    #[arg(long, default_value = "F")]
    pub kind: String,
    /// Source element for hom (defaults to --top)
    #[arg(long)]
    pub source: Option<String>,
}

fn write(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(p, text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn sibling(p: &Path, ext: &str) -> PathBuf {
    p.with_extension(ext)
}

fn top(env: &Env, t: &Target) -> Result<usize> {
    match (&t.top, &t.word) {
        (Some(w), _) | (None, Some(w)) => env.element(w),
        (None, None) => Ok(env.cat.group().longest()),
    }
}

fn table(ctx: &BmpCtx, c: &BmpComplex) -> String {
    describe(ctx, c)
        .into_iter()
        .map(|(i, t)| format!("{i:>3}: {}\n", t.join(" + ")))
        .collect()
}

fn complex_artifact(env: &Env, ctx: &BmpCtx, name: String, c: &BmpComplex) -> Result<()> {
    let a = Artifact::new(
        &env.config,
        Payload::Complex {
            name,
            complex: ComplexJson::from_complex(ctx, c),
        },
    );
    match &env.config.out {
        Some(p) => {
            write(Some(p), &a.to_json())?;
            print!("{}", table(ctx, c));
        }
        None => print!("{}", a.to_json()),
    }
    Ok(())
}

/// Runs suites and writes `<suite>.json` (deterministic) and `<suite>.timing.json` under `dir`.
pub fn verify(env: &Env, suite: &str, dir: Option<&Path>) -> Result<Vec<suites::SuiteResult>> {
    let names: Vec<&str> = if suite == "all" {
        suites::SUITES.to_vec()
    } else {
        vec![suite]
    };
    let mut out = Vec::new();
    for s in names {
        let r = suites::run_suite(env, s)?;
        if let Some(dir) = dir {
            std::fs::create_dir_all(dir)?;
            let a = Artifact::new(
                &env.config,
                Payload::Report {
                    suite: s.into(),
                    passed: r.passed(),
                    cases: r.cases.clone(),
                },
            );
            std::fs::write(dir.join(format!("{s}.json")), a.to_json())?;
            let timing = serde_json::json!({ "version": artifact::VERSION, "config": env.config, "suite": s, "timing": r.timing });
            std::fs::write(
                dir.join(format!("{s}.timing.json")),
                serde_json::to_string_pretty(&timing)? + "\n",
            )?;
        }
        out.push(r);
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Graph {
            action: Build::Build(t),
        } => {
            let env = Env::new(t.common.config()?)?;
            let g = bruhat_graph(&Arc::new(env.config.group()?))?.graph;
            let a = Artifact::new(
                &env.config,
                Payload::Graph {
                    graph: serde_json::from_str(&g.to_json())?,
                },
            );
            write(env.config.out.as_deref(), &a.to_json())?;
        }
        Command::Bmp {
            action: Compute::Compute(t),
        } => {
            let env = Env::new(t.common.config()?)?;
            let w = top(&env, &t)?;
            let f = build_bmp(
                env.cat.graph(),
                w,
                env.config.normalization,
                &env.cat.policy,
            )?;
            let a = Artifact::new(
                &env.config,
                Payload::Sheaf {
                    top: env.cat.group().name(w),
                    sheaf: serde_json::from_str(&f.sheaf.to_json())?,
                },
            );
            match &env.config.out {
                Some(p) => {
                    write(Some(p), &a.to_json())?;
                    write(
                        Some(&sibling(p, "stalks.csv")),
                        &artifact::stalk_csv(&f.sheaf),
                    )?;
                    print!("{}", artifact::stalk_csv(&f.sheaf));
                }
                None => print!("{}", a.to_json()),
            }
        }
        Command::Rouquier {
            action: Build::Build(t),
        } => {
            let env = Env::new(t.common.config()?)?;
            let ctx = BmpCtx::new(&env.cat)?;
            let wtext = t
                .word
                .clone()
                .or(t.top.clone())
                .ok_or_else(|| Error::Validation("rouquier build needs --word".into()))?;
            let word = env.cat.group().system.parse_word(&wtext)?;
            let kind = LetterKind::parse(&t.kind)?;
            let c = rouquier(&ctx, &word, kind)?;
            complex_artifact(
                &env,
                &ctx,
                format!("{kind:?}_{}", env.cat.group().system.word_string(&word)),
                &c,
            )?;
        }
        Command::Delta {
            action: Build::Build(t),
        } => {
            let env = Env::new(t.common.config()?)?;
            let ctx = BmpCtx::new(&env.cat)?;
            let w = top(&env, &t)?;
            let c = if t.kind == "letters" {
                delta(&ctx, w)?
            } else {
                standard(&ctx, w)?
            };
            complex_artifact(&env, &ctx, format!("Delta_{}", env.cat.group().name(w)), &c)?;
        }
        Command::Nabla {
            action: Build::Build(t),
        } => {
            let env = Env::new(t.common.config()?)?;
            let ctx = BmpCtx::new(&env.cat)?;
            let w = top(&env, &t)?;
            let c = if t.kind == "letters" {
                nabla(&ctx, w)?
            } else {
                costandard(&ctx, w)?
            };
            complex_artifact(&env, &ctx, format!("Nabla_{}", env.cat.group().name(w)), &c)?;
        }
        Command::Hom {
            action: Compute::Compute(t),
        } => {
            let env = Env::new(t.common.config()?)?;
            let ctx = BmpCtx::new(&env.cat)?;
            let w = top(&env, &t)?;
            let x = match &t.source {
                Some(s) => env.element(s)?,
                None => w,
            };
            let (a, b) = (standard(&ctx, x)?, costandard(&ctx, w)?);
            let m = env.config.max_degree;
            let mut rows = Vec::new();
            for j in -4..=4 {
                for (degree, dim) in khom_series(&ctx, &a, &b, j, -m, m)? {
                    if dim > 0 {
                        rows.push(HomRow {
                            shift: j,
                            degree,
                            dim,
                        });
                    }
                }
            }
            let g = env.cat.group();
            let art = Artifact::new(
                &env.config,
                Payload::Hom {
                    source: format!("Delta_{}", g.name(x)),
                    target: format!("Nabla_{}", g.name(w)),
                    rows,
                },
            );
            write(env.config.out.as_deref(), &art.to_json())?;
        }
        Command::Verify { common, suite } => {
            let env = Env::new(common.config()?)?;
            let results = verify(&env, &suite, env.config.out.as_deref())?;
            let mut failed = 0;
            for r in &results {
                for (c, t) in r.cases.iter().zip(&r.timing) {
                    println!(
                        "{} {}/{} ({} ms): {}",
                        if c.passed { "pass" } else { "FAIL" },
                        r.suite,
                        c.name,
                        t.millis,
                        c.detail
                    );
                    failed += usize::from(!c.passed);
                }
            }
            return Ok(i32::from(failed > 0));
        }
        Command::Export { input, format, out } => {
            let a = Artifact::from_json(&std::fs::read_to_string(&input)?)?;
            let text = match format.as_str() {
                "csv" => artifact::to_csv(&a)?,
                "text" | "pretty" => artifact::to_text(&a)?,
                f => return Err(Error::Validation(format!("unknown export format {f:?}"))),
            };
            write(out.as_deref(), &text)?;
        }
    }
    Ok(0)
}

/// Entry point for the binary; returns the process exit code.
pub fn main() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MOMIX_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("momix: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_json_round_trip() {
        let env = Env::new(RunConfig::for_type("A2")).unwrap();
        let ctx = BmpCtx::new(&env.cat).unwrap();
        for w in 0..env.cat.len() {
            let c = delta(&ctx, w).unwrap();
            let j = ComplexJson::from_complex(&ctx, &c);
            let text = serde_json::to_string(&j).unwrap();
            let back: ComplexJson = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_complex(&ctx).unwrap(), c);
        }
    }

    #[test]
    fn field_flags() {
        let mut c = Cli::try_parse_from([
            "momix",
            "verify",
            "--type",
            "B2",
            "--field",
            "quadratic",
            "--d",
            "2",
        ])
        .unwrap();
        let Command::Verify { common, .. } = &mut c.command else {
            panic!()
        };
        assert_eq!(
            common.config().unwrap().field,
            Some(Field::Quadratic { d: 2 })
        );
        common.d = Some(4);
        assert!(common.config().is_err());
        common.field = Some("{\"kind\":\"rational\"}".into());
        common.d = None;
        assert!(common.config().unwrap().group().is_err());
    }

    #[test]
    fn hilbert_text() {
        assert_eq!(artifact::hilbert_numerator(&[0, 2]), "1 + v^2");
        assert_eq!(artifact::hilbert_numerator(&[-1, -1]), "2v^-1");
        assert_eq!(artifact::hilbert_numerator(&[]), "0");
    }
}
