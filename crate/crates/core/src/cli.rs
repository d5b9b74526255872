//! Command-line front end. Every report embeds the run configuration and
//! crate version; analysis verdicts never change the exit status.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::battery::run_battery;
use crate::config::RunConfig;
use crate::elastic::{acoustic_matrix, rank_one_convexity, FormInput, StiffnessTensor};
use crate::error::{Error, Result};
use crate::extremal::{extremality_audit, form_extremality, poly_extremality};
use crate::poly::{nonneg_check, perfect_square_check_seeded, HomoPoly, PolyJson};
use crate::translation::{fourier_quasiconvexity_check, translation_gap, PeriodicField, TwoPhaseSetup};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "elastica", version, about = "Acoustic determinants, rank-one convexity and extremality checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Base seed for every sampler.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides the primary tolerance of the subcommand.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Sphere samples for minimum searches.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Outer starts for the form extremality search.
    #[arg(long, global = true)]
    pub starts: Option<usize>,
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full hypothesis audit of an orthotropic tensor.
    Analyze { tensor: PathBuf },
    /// Acoustic determinant of a tensor or form.
    DetPoly { input: PathBuf },
    /// Extremality of a nonnegative polynomial (text or JSON).
    CheckPoly {
        input: PathBuf,
        /// Number of variables for text input (default: highest index used).
        #[arg(long)]
        nvars: Option<usize>,
    },
    /// Perfect-square test for a polynomial (text or JSON).
    PerfectSquare {
        input: PathBuf,
        #[arg(long)]
        nvars: Option<usize>,
    },
    /// Rank-one convexity and extremality of a tensor or form.
    CheckForm { input: PathBuf },
    /// Phase gaps for a translation, and optionally the Fourier energy of a field.
    Translation {
        setup: PathBuf,
        #[arg(long)]
        field: Option<PathBuf>,
    },
    /// Runs the fixed fixture battery.
    VerifyFixtures,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::DetPoly { .. } => "det-poly",
            Command::CheckPoly { .. } => "check-poly",
            Command::PerfectSquare { .. } => "perfect-square",
            Command::CheckForm { .. } => "check-form",
            Command::Translation { .. } => "translation",
            Command::VerifyFixtures => "verify-fixtures",
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a RunConfig,
    result: Value,
}

struct Outcome {
    result: Value,
    summary: Vec<String>,
    status: i32,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports are serializable")
}

/// Highest `yK` index appearing in `s`.
fn infer_nvars(s: &str) -> usize {
    let b = s.as_bytes();
    let mut best = 1;
    let mut i = 0;
    while i < b.len() {
        if b[i] == b'y' {
            let digits: String = s[i + 1..].chars().take_while(char::is_ascii_digit).collect();
            if let Ok(k) = digits.parse::<usize>() {
                best = best.max(k);
            }
            i += 1 + digits.len();
        } else {
            i += 1;
        }
    }
    best
}

pub fn load_poly(path: &Path, nvars: Option<usize>) -> Result<HomoPoly> {
    let s = read(path)?;
    if s.trim_start().starts_with('{') {
        HomoPoly::from_json_str(&s)
    } else {
        HomoPoly::parse_text(s.trim(), nvars.unwrap_or_else(|| infer_nvars(&s)))
    }
}

/// Applies the config file and flags on top of the defaults.
pub fn build_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => serde_json::from_str(&read(p)?)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(n) = cli.samples {
        cfg.budget.sphere_samples = n;
    }
    if let Some(n) = cli.starts {
        cfg.budget.form_starts = n;
    }
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Contract(format!("--tol must be positive, got {t}")));
        }
        match cli.command {
            Command::Analyze { .. } | Command::CheckPoly { .. } | Command::VerifyFixtures => cfg.tol.poly_extremality = t,
            Command::PerfectSquare { .. } => cfg.tol.perfect_square = t,
            Command::CheckForm { .. } => cfg.tol.form_extremality = t,
            Command::Translation { .. } => {
                cfg.tol.gap = t;
                cfg.tol.fourier = t;
            }
            Command::DetPoly { .. } => {}
        }
    }
    Ok(cfg)
}

fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Outcome> {
    let ok = |result: Value, summary: Vec<String>| Outcome {
        result,
        summary,
        status: EXIT_OK,
    };
    match cmd {
        Command::Analyze { tensor } => {
            let t = StiffnessTensor::from_json_str(&read(tensor)?)?;
            let r = extremality_audit(&t, cfg)?;
            let mut summary = vec![
                format!("det: {}", r.det),
                format!("hypotheses hold: {}", r.hypotheses_hold),
                format!("consistency: {}", to_value(&r.consistency).as_str().unwrap_or("")),
            ];
            if let Some(f) = &r.form_extremality {
                summary.push(format!("form: {} (max t {:e})", verdict_name(&f.verdict), f.max_t));
            }
            summary.extend(r.notes.iter().map(|n| format!("note: {n}")));
            Ok(ok(to_value(&r), summary))
        }
        Command::DetPoly { input } => {
            let f = FormInput::from_json_str(&read(input)?)?.form();
            let det = acoustic_matrix(&f).det();
            Ok(ok(
                json!({ "text": det.to_text(), "polynomial": PolyJson::from(&det) }),
                vec![det.to_text()],
            ))
        }
        Command::CheckPoly { input, nvars } => {
            let p = load_poly(input, *nvars)?;
            let nn = nonneg_check(&p, cfg.tol.nonneg * p.coefficient_norm(), &cfg.sphere_budget())?;
            if !nn.is_nonnegative() {
                return Ok(ok(
                    json!({ "polynomial": p.to_text(), "nonnegativity": nn, "extremality": null }),
                    vec!["not nonnegative; extremality not tested".into()],
                ));
            }
            let r = poly_extremality(&p, cfg)?;
            let mut summary = vec![
                format!("verdict: {}", verdict_name(&r.verdict)),
                format!("max deviation: {:e}", r.max_deviation),
            ];
            if let Some(w) = &r.witness {
                summary.push(format!("witness: {w}"));
            }
            Ok(ok(json!({ "polynomial": p.to_text(), "nonnegativity": nn, "extremality": r }), summary))
        }
        Command::PerfectSquare { input, nvars } => {
            let p = load_poly(input, *nvars)?;
            let r = perfect_square_check_seeded(&p, cfg.tol.perfect_square, cfg.seed, cfg.budget.square_starts)?;
            let line = match &r.verdict {
                crate::poly::SquareVerdict::Square { root, .. } => format!("square: ({root})^2"),
                crate::poly::SquareVerdict::NotSquare => "not a square".into(),
            };
            Ok(ok(json!({ "polynomial": p.to_text(), "report": r }), vec![line]))
        }
        Command::CheckForm { input } => {
            let f = FormInput::from_json_str(&read(input)?)?.form();
            let r1c = rank_one_convexity(&f.numeric(), cfg.tol.rank_one, &cfg.sphere_budget());
            if !r1c.is_rank_one_convex() {
                return Ok(ok(
                    json!({ "rank_one_convexity": r1c, "form_extremality": null }),
                    vec!["not rank-one convex; extremality not tested".into()],
                ));
            }
            let r = form_extremality(&f, cfg)?;
            let summary = vec![
                format!("rank-one convex, observed minimum {:e}", r1c.min_eigenvalue),
                format!("verdict: {}", verdict_name(&r.verdict)),
                format!("max t: {:e} over {} starts", r.max_t, r.starts),
            ];
            Ok(ok(json!({ "rank_one_convexity": r1c, "form_extremality": r }), summary))
        }
        Command::Translation { setup, field } => {
            let s = TwoPhaseSetup::from_json_str(&read(setup)?)?;
            let gap = translation_gap(&s, cfg.tol.gap);
            let mut summary: Vec<String> = gap
                .phases
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    format!(
                        "phase {}: psd {}, min eigenvalue {:e}, {} degenerate directions",
                        i + 1,
                        p.psd,
                        p.eigenvalues[0],
                        p.degenerate_directions.len()
                    )
                })
                .collect();
            let fourier = match field {
                Some(path) => {
                    let bytes = fs::read(path)?;
                    let u = PeriodicField::read_from(&bytes[..])?;
                    let r = fourier_quasiconvexity_check(&s.translation.form(), &u, cfg)?;
                    summary.push(format!("fourier total {:e}, special {}", r.total, r.special));
                    to_value(&r)
                }
                None => Value::Null,
            };
            Ok(ok(json!({ "gap": gap, "fourier": fourier }), summary))
        }
        Command::VerifyFixtures => {
            let r = run_battery(cfg);
            let summary = r
                .items
                .iter()
                .map(|i| {
                    let margin = i.margin.map(|m| format!(" [margin {m:e}]")).unwrap_or_default();
                    format!("{} {}{}: {}", if i.passed { "PASS" } else { "FAIL" }, i.name, margin, i.detail)
                })
                .chain(std::iter::once(format!("{} passed, {} failed", r.passed, r.failed)))
                .collect();
            Ok(Outcome {
                status: if r.all_passed() { EXIT_OK } else { EXIT_CHECK_FAILED },
                result: to_value(&r),
                summary,
            })
        }
    }
}

fn verdict_name<T: Serialize>(v: &T) -> String {
    to_value(v).as_str().unwrap_or("").to_string()
}

/// Report bytes for a parsed command line.
pub fn render(cli: &Cli) -> Result<(Vec<u8>, i32)> {
    let cfg = build_config(cli)?;
    let outcome = execute(&cli.command, &cfg)?;
    let bytes = match cli.format {
        Format::Json => {
            let env = Envelope {
                tool: "elastica",
                version: env!("CARGO_PKG_VERSION"),
                command: cli.command.name(),
                config: &cfg,
                result: outcome.result,
            };
            let mut s = serde_json::to_string_pretty(&env).expect("reports are serializable");
            s.push('\n');
            s.into_bytes()
        }
        Format::Text => {
            let mut s = format!(
                "elastica {} {} (seed {})\n",
                env!("CARGO_PKG_VERSION"),
                cli.command.name(),
                cfg.seed
            );
            for line in outcome.summary {
                s.push_str(&line);
                s.push('\n');
            }
            s.into_bytes()
        }
    };
    Ok((bytes, outcome.status))
}

/// Parses `args`, runs the command and writes the report; returns the exit
/// status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match render(&cli) {
        Ok((bytes, status)) => {
            let written = match &cli.out {
                Some(p) => fs::write(p, &bytes),
                None => std::io::stdout().write_all(&bytes),
            };
            if let Err(e) = written {
                eprintln!("elastica: cannot write report: {e}");
                return EXIT_INPUT;
            }
            status
        }
        Err(e) => {
            eprintln!("elastica: {e}");
            EXIT_INPUT
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nvars_inference() {
        assert_eq!(infer_nvars("y1^2*y12 + 3"), 12);
        assert_eq!(infer_nvars("4"), 1);
    }

    #[test]
    fn tol_targets_the_primary_tolerance() {
        let cli = Cli::try_parse_from(["elastica", "--tol", "0.5", "check-form", "f.json"]).unwrap();
        let cfg = build_config(&cli).unwrap();
        assert_eq!(cfg.tol.form_extremality, 0.5);
        assert_eq!(cfg.tol.poly_extremality, RunConfig::default().tol.poly_extremality);
        let cli = Cli::try_parse_from(["elastica", "check-form", "f.json", "--tol", "-1"]).unwrap();
        assert!(build_config(&cli).is_err());
    }
}
