//! The `schubert` command-line tool.

pub mod cache;
pub mod config;
pub mod explore;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use schubert_core::divided::skew_partial;
use schubert_core::grothendieck::{double_grothendieck, expand_product_k};
use schubert_core::positivity::{certify_schubert, CertifyOutcome};
use schubert_core::schubert::{billey, double_schubert, expand_product, localize, y_to_t};
use schubert_core::selftest::{run_all, DEFAULT_SEED};
use schubert_core::{Error, Permutation, Polynomial, ReducedWord};

use cache::Cache;
use config::Settings;
use explore::{explore, BoundsPolicy, Mode};

pub mod exit {
    pub const OK: i32 = 0;
    pub const INCONCLUSIVE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const VIOLATION: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: exit::USAGE, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { code: exit::IO, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotAPermutation(_)
            | Error::InvalidCode(_)
            | Error::NotReduced { .. }
            | Error::Syntax { .. }
            | Error::AmbientTooSmall { .. }
            | Error::NotHomogeneous(_)
            | Error::TooManyWords { .. } => exit::USAGE,
            Error::SearchSpaceTooLarge { .. } | Error::BudgetExceeded { .. } => exit::INCONCLUSIVE,
            Error::NotDivisible
            | Error::ResidualNonzero { .. }
            | Error::InternalMismatch(_)
            | Error::DenominatorShapeViolation => exit::VIOLATION,
        };
        Self { code, message: e.to_string() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "schubert", version, about = "Triple Schubert calculus: polynomials, structure constants, positivity certificates")]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Settings file with `key = value` lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Result cache directory.
    #[arg(long, global = true, env = "SCHUBERT_CACHE")]
    pub cache: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Vars {
    Xy,
    Xt,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Double Schubert polynomial S_w(x;y).
    Poly {
        #[arg(long)]
        perm: Permutation,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "xy")]
        vars: Vars,
    },
    /// Double Grothendieck polynomial G_w(x;y).
    Groth {
        #[arg(long)]
        perm: Permutation,
        #[arg(long)]
        n: usize,
    },
    /// Structure constant c_{u,v}^w(y,t).
    Coeff {
        #[arg(long)]
        u: Permutation,
        #[arg(long)]
        v: Permutation,
        #[arg(long)]
        w: Permutation,
        #[arg(long)]
        groth: bool,
    },
    /// Skew divided difference of an expression in x, y, t, b.
    Skewdd {
        #[arg(long)]
        w: Permutation,
        #[arg(long)]
        v: Permutation,
        #[arg(long, allow_hyphen_values = true)]
        input: Polynomial,
    },
    /// Localization of u at w by the subword formula.
    Billey {
        #[arg(long)]
        u: Permutation,
        #[arg(long)]
        w: Permutation,
        /// Reduced word of w; defaults to the canonical one.
        #[arg(long)]
        word: Option<ReducedWord>,
    },
    /// Localization of u at w by substitution.
    Localize {
        #[arg(long)]
        u: Permutation,
        #[arg(long)]
        w: Permutation,
    },
    /// Positivity certificate for one structure constant (JSON).
    Certify {
        #[arg(long)]
        u: Permutation,
        #[arg(long)]
        v: Permutation,
        #[arg(long)]
        w: Permutation,
        #[arg(long)]
        groth: bool,
        #[arg(long)]
        zdeg_max: Option<u32>,
        #[arg(long)]
        bdeg_max: Option<u32>,
    },
    /// Certify every structure constant for pairs in S_n x S_n.
    Explore {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        groth: bool,
        #[arg(long, env = "SCHUBERT_JOBS")]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suites.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// What a command produced: the text and JSON renderings and the exit code.
struct Output {
    text: String,
    json: serde_json::Value,
    code: i32,
}

impl Output {
    fn ok(text: String, json: serde_json::Value) -> Self {
        Self { text, json, code: exit::OK }
    }
}

struct Context {
    json: bool,
    settings: Settings,
    cache: Option<Cache>,
}

impl Context {
    /// Looks `request` up in the cache, computing and storing it on a miss.
    fn cached<T: Serialize + DeserializeOwned>(
        &self,
        request: &str,
        compute: impl FnOnce() -> Result<T, CliError>,
    ) -> Result<T, CliError> {
        if let Some(hit) = self.cache.as_ref().and_then(|c| c.get(request)) {
            if let Ok(value) = serde_json::from_str(&hit) {
                return Ok(value);
            }
        }
        let value = compute()?;
        if let Some(cache) = &self.cache {
            let text = serde_json::to_string(&value).expect("cached values serialize");
            cache.put(request, &text).map_err(|e| CliError::io(format!("cache write failed: {e}")))?;
        }
        Ok(value)
    }
}

fn ambient_of(perms: &[&Permutation]) -> usize {
    perms.iter().map(|p| p.size()).max().unwrap_or(1).max(1)
}

fn outcome_code(outcome: &CertifyOutcome) -> i32 {
    match outcome {
        CertifyOutcome::Certified(_) => exit::OK,
        CertifyOutcome::InconclusiveAtBounds(_) => exit::INCONCLUSIVE,
        CertifyOutcome::InfeasibleComplete | CertifyOutcome::DenominatorShapeViolation => exit::VIOLATION,
    }
}

fn certify(
    ctx: &Context,
    u: &Permutation,
    v: &Permutation,
    w: &Permutation,
    groth: bool,
    policy: BoundsPolicy,
) -> Result<CertifyOutcome, CliError> {
    let request = format!(
        "certify u={u} v={v} w={w} groth={groth} zdeg={:?} bdeg={:?}",
        policy.max_z_degree, policy.max_beta_power
    );
    let outcome = ctx.cached(&request, || {
        let outcome = if groth {
            let e = expand_product_k(u, v)?;
            policy.certify(&e.coefficient(w), e.ambient)?
        } else {
            let e = expand_product(u, v)?;
            certify_schubert(&e.coefficient(w), e.ambient)?
        };
        Ok(outcome)
    })?;
    Ok(match outcome {
        CertifyOutcome::Certified(cert) => CertifyOutcome::Certified(cert.for_triple(u, v, w)),
        other => other,
    })
}

fn run(cli: Cli, ctx: &Context) -> Result<Output, CliError> {
    match cli.command {
        Command::Poly { perm, n, vars } => {
            let mut p = double_schubert(&perm, n)?;
            if vars == Vars::Xt {
                p = y_to_t(&p);
            }
            let text = p.render();
            Ok(Output::ok(text.clone(), json!({"command": "poly", "perm": perm.to_string(), "n": n, "result": text})))
        }
        Command::Groth { perm, n } => {
            let text = double_grothendieck(&perm, n)?.render();
            Ok(Output::ok(text.clone(), json!({"command": "groth", "perm": perm.to_string(), "n": n, "result": text})))
        }
        Command::Coeff { u, v, w, groth } => {
            let request = format!("coeff u={u} v={v} w={w} groth={groth}");
            let text: String = ctx.cached(&request, || {
                Ok(if groth {
                    expand_product_k(&u, &v)?.coefficient(&w).render()
                } else {
                    expand_product(&u, &v)?.coefficient(&w).render()
                })
            })?;
            let j = json!({"command": "coeff", "u": u.to_string(), "v": v.to_string(), "w": w.to_string(), "groth": groth, "result": text});
            Ok(Output::ok(text, j))
        }
        Command::Skewdd { w, v, input } => {
            let text = skew_partial(&w, &v, &input).render();
            let j = json!({"command": "skewdd", "w": w.to_string(), "v": v.to_string(), "input": input.render(), "result": text});
            Ok(Output::ok(text, j))
        }
        Command::Billey { u, w, word } => {
            let word = word.unwrap_or_else(|| w.canonical_reduced_word());
            let text = billey(&u, &w, &word)?.render();
            let j = json!({"command": "billey", "u": u.to_string(), "w": w.to_string(), "word": word.to_string(), "result": text});
            Ok(Output::ok(text, j))
        }
        Command::Localize { u, w } => {
            let text = localize(&u, &w, ambient_of(&[&u, &w]))?.render();
            let j = json!({"command": "localize", "u": u.to_string(), "w": w.to_string(), "result": text});
            Ok(Output::ok(text, j))
        }
        Command::Certify { u, v, w, groth, zdeg_max, bdeg_max } => {
            let policy = BoundsPolicy {
                max_z_degree: zdeg_max.or(ctx.settings.zdeg_max),
                max_beta_power: bdeg_max.or(ctx.settings.bdeg_max),
            };
            let outcome = certify(ctx, &u, &v, &w, groth, policy)?;
            let j = serde_json::to_value(&outcome).expect("outcomes serialize");
            let text = serde_json::to_string_pretty(&j).expect("json renders");
            Ok(Output { text, json: j, code: outcome_code(&outcome) })
        }
        Command::Explore { n, groth, jobs, out } => {
            let (mode, cap) = if groth {
                (Mode::Grothendieck, ctx.settings.max_n_groth)
            } else {
                (Mode::Schubert, ctx.settings.max_n)
            };
            if n > cap {
                return Err(CliError::usage(format!("explore is capped at n = {cap} in this mode, got {n}")));
            }
            let jobs = jobs.or(ctx.settings.jobs).unwrap_or(1);
            let policy = if groth {
                BoundsPolicy { max_z_degree: ctx.settings.zdeg_max, max_beta_power: ctx.settings.bdeg_max }
            } else {
                BoundsPolicy::default()
            };
            let report = explore(n, mode, jobs, policy, ctx.cache.as_ref());
            let code = report.exit_code();
            let body = report.to_json();
            match out {
                Some(path) => {
                    cache::atomic_write(&path, body.as_bytes())
                        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
                    let s = &report.summary;
                    let text = format!(
                        "{} pairs, {} coefficients: {} certified, {} inconclusive, {} infeasible, {} shape violations, {} failures; report at {}",
                        s.pairs,
                        s.coefficients,
                        s.certified,
                        s.inconclusive,
                        s.infeasible_complete,
                        s.denominator_shape_violations,
                        s.failures,
                        path.display()
                    );
                    let j = json!({"command": "explore", "out": path.display().to_string(), "summary": s});
                    Ok(Output { text, json: j, code })
                }
                None => {
                    let j = serde_json::to_value(&report).expect("reports serialize");
                    Ok(Output { text: body.trim_end().to_string(), json: j, code })
                }
            }
        }
        Command::Selftest { seed } => {
            let checks = run_all(seed);
            let failed = checks.iter().filter(|c| !c.passed()).count();
            let mut lines: Vec<String> = Vec::new();
            for c in &checks {
                let status = if c.passed() { "PASS" } else { "FAIL" };
                lines.push(format!("{status} {}: {} ({} cases)", c.module, c.name, c.cases));
                lines.extend(c.failures.iter().map(|f| format!("    {f}")));
            }
            lines.push(format!("{} checks, {failed} failed", checks.len()));
            let j = json!({
                "command": "selftest",
                "seed": seed,
                "checks": checks.iter().map(|c| json!({
                    "module": c.module, "name": c.name, "cases": c.cases, "passed": c.passed(), "failures": c.failures,
                })).collect::<Vec<_>>(),
                "failed": failed,
            });
            let code = if failed == 0 { exit::OK } else { exit::VIOLATION };
            Ok(Output { text: lines.join("\n"), json: j, code })
        }
    }
}

/// Parses `args` (program name first), runs the command and writes its
/// output; returns the process exit code.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            let sink: &mut dyn Write = if informational { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return if informational { exit::OK } else { exit::USAGE };
        }
    };
    match execute(cli) {
        Ok((json, output)) => {
            let body = if json {
                serde_json::to_string_pretty(&output.json).expect("json renders")
            } else {
                output.text
            };
            match writeln!(out, "{body}") {
                Ok(()) => output.code,
                Err(_) => exit::IO,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn execute(cli: Cli) -> Result<(bool, Output), CliError> {
    let mut settings = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    if cli.cache.is_some() {
        settings.cache.clone_from(&cli.cache);
    }
    let cache = match &settings.cache {
        Some(dir) => Some(
            Cache::open(dir).map_err(|e| CliError::io(format!("cannot open cache {}: {e}", dir.display())))?,
        ),
        None => None,
    };
    let json = cli.json;
    let ctx = Context { json, settings, cache };
    let output = run(cli, &ctx)?;
    Ok((ctx.json, output))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = dispatch(std::iter::once("schubert").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn poly_base_case() {
        assert_eq!(call(&["poly", "--perm", "2,1", "--n", "2"]), (0, "x1 - y1\n".into(), String::new()));
        assert_eq!(call(&["poly", "--perm", "2,1", "--n", "2", "--vars", "xt"]).1, "x1 - t1\n");
    }

    #[test]
    fn coeff_worked_triple() {
        assert_eq!(call(&["coeff", "--u", "2,1,3", "--v", "2,1,3", "--w", "2,1,3"]).1, "t2 - y1\n");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["poly", "--perm", "2,2", "--n", "2"]).0, exit::USAGE);
        assert_eq!(call(&["frobnicate"]).0, exit::USAGE);
        assert_eq!(call(&["poly", "--perm", "3,1,2", "--n", "2"]).0, exit::USAGE);
        assert_eq!(call(&["explore", "--n", "5"]).0, exit::USAGE);
        assert_eq!(call(&["--help"]).0, exit::OK);
    }

    #[test]
    fn missing_config_is_io() {
        assert_eq!(call(&["--config", "/nonexistent/schubert.conf", "selftest"]).0, exit::IO);
    }
}
