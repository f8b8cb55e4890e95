//! Batch front-end: every subcommand reads a JSON input file, prints a
//! deterministic report, and exits 0 (pass/valid), 1 (fail/invalid) or
//! 2 (malformed input).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::annulus::{
    check_alternative_a, extract_m_d, log_differential, make_cover, AnnulusElement,
};
use crate::cover_skeleton::{
    check_admissible, classify, hurwitz_inequality, target_genus_check, CoverSkeleton, Kind,
};
use crate::deformation::{emit_presentation, singularity_report, smooth_lift};
use crate::hurwitz_graph::{is_good, level_function, reduce, validate, HurwitzGraph};
use crate::power_series::{is_pr_earnest, DifferentialForm, Series};
use crate::testgen;
use crate::valuation_ring::{lcm, Rational, RingElement, RingSpec};

#[derive(Parser, Debug)]
#[command(name = "wildhurwitz", about = "Exact arithmetic for wild degree-p covers", version)]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized suites (falls back to WILDHURWITZ_SEED, then 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Series truncation override for randomized suites.
    #[arg(long = "T", global = true)]
    pub truncation: Option<usize>,
    /// Digit precision override for randomized suites.
    #[arg(long = "M", global = true)]
    pub precision: Option<u32>,
    /// Ramification override (unused by the current suites; accepted
    /// for interface stability).
    #[arg(long = "N", global = true)]
    pub ramification: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the six Hurwitz-graph axioms, reduce, and report goodness.
    ValidateGraph { input: PathBuf },
    /// Contract the m = 0 edges and print the reduced graph.
    ReduceGraph { input: PathBuf },
    /// Print the level function of the reduced graph.
    Level { input: PathBuf },
    /// Check p^r-earnestness of (f, delta, r).
    CheckEarnest { input: PathBuf },
    /// Run the degree-p cover pipeline on one annulus datum.
    AnnulusAnalyze { input: PathBuf },
    /// Check skeleton admissibility plus the global numeric checks.
    SkeletonAdmissible { input: PathBuf },
    /// Classify a skeleton as Finite, Infinite, or Invalid.
    SkeletonClassify { input: PathBuf },
    /// Print the versal deformation-ring presentation.
    Defring { input: PathBuf },
    /// Print the smoothing exponent assignment.
    SmoothLift { input: PathBuf },
    /// Run the property suites at desk scale and print a summary.
    Selftest,
}

pub fn run(cli: &Cli) -> (String, i32) {
    let result = match &cli.command {
        Command::ValidateGraph { input } => validate_graph(cli, input),
        Command::ReduceGraph { input } => reduce_graph(cli, input),
        Command::Level { input } => level(cli, input),
        Command::CheckEarnest { input } => check_earnest(cli, input),
        Command::AnnulusAnalyze { input } => annulus_analyze(cli, input),
        Command::SkeletonAdmissible { input } => skeleton_admissible(cli, input),
        Command::SkeletonClassify { input } => skeleton_classify(cli, input),
        Command::Defring { input } => defring(cli, input),
        Command::SmoothLift { input } => smooth_lift_cmd(cli, input),
        Command::Selftest => Ok(selftest(cli)),
    };
    match result {
        Ok(out) => out,
        Err(diag) => (format!("input error: {diag}"), 2),
    }
}

pub fn effective_seed(cli: &Cli) -> u64 {
    cli.seed
        .or_else(|| {
            std::env::var("WILDHURWITZ_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(0)
}

fn read_input<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn level_display(levels: &BTreeMap<String, u64>) -> String {
    let inner: Vec<String> = levels.iter().map(|(v, l)| format!("{v}:{l}")).collect();
    format!("{{{}}}", inner.join(","))
}

fn validate_graph(cli: &Cli, input: &Path) -> Result<(String, i32), String> {
    let g: HurwitzGraph = read_input(input)?;
    let violations = validate(&g);
    if !violations.is_empty() {
        let out = match cli.format {
            Format::Text => {
                let mut lines = vec!["invalid:".to_string()];
                lines.extend(violations.iter().map(|v| {
                    format!("axiom {} [{}]: {}", v.axiom, v.subject, v.detail)
                }));
                lines.join("\n")
            }
            Format::Json => pretty(&json!({ "valid": false, "violations": violations })),
        };
        return Ok((out, 1));
    }
    let (red, _) = reduce(&g);
    let good = is_good(&red).map_err(|e| e.to_string())?;
    let levels = if good {
        Some(level_function(&red).map_err(|e| e.to_string())?.levels)
    } else {
        None
    };
    let out = match cli.format {
        Format::Text => match &levels {
            Some(l) => format!("valid; reduced graph good; \u{2113} = {}", level_display(l)),
            None => "valid; reduced graph not good".to_string(),
        },
        Format::Json => pretty(&json!({
            "valid": true,
            "violations": [],
            "good": good,
            "levels": levels,
        })),
    };
    Ok((out, 0))
}

fn reduce_graph(cli: &Cli, input: &Path) -> Result<(String, i32), String> {
    let g: HurwitzGraph = read_input(input)?;
    let (red, merge) = reduce(&g);
    let out = match cli.format {
        Format::Text => {
            let mut lines: Vec<String> = merge
                .iter()
                .filter(|(a, b)| a != b)
                .map(|(a, b)| format!("merged: {a} -> {b}"))
                .collect();
            lines.push(format!(
                "reduced graph: {} vertices, {} edges",
                red.vertices.len(),
                red.edges.len()
            ));
            lines.join("\n")
        }
        Format::Json => pretty(&json!({ "graph": red, "merge": merge })),
    };
    Ok((out, 0))
}

fn level(cli: &Cli, input: &Path) -> Result<(String, i32), String> {
    let g: HurwitzGraph = read_input(input)?;
    let (red, _) = reduce(&g);
    match level_function(&red) {
        Ok(lf) => {
            let out = match cli.format {
                Format::Text => format!("\u{2113} = {}", level_display(&lf.levels)),
                Format::Json => pretty(&json!({ "levels": lf.levels })),
            };
            Ok((out, 0))
        }
        Err(e) => Ok((format!("no level function: {e}"), 1)),
    }
}

#[derive(Deserialize)]
struct EarnestInput {
    f: Series,
    delta: Series,
    r: Rational,
}

fn check_earnest(cli: &Cli, input: &Path) -> Result<(String, i32), String> {
    let data: EarnestInput = read_input(input)?;
    let delta = DifferentialForm::new(data.delta);
    let verdict = is_pr_earnest(&data.f, &delta, &data.r).map_err(|e| e.to_string())?;
    let out = match cli.format {
        Format::Text => match &verdict.first_failure {
            None => "earnest".to_string(),
            Some(fail) => format!("branch-{} failure at i={}", fail.branch, fail.index),
        },
        Format::Json => pretty(&verdict),
    };
    Ok((out, if verdict.ok { 0 } else { 1 }))
}

#[derive(Deserialize)]
struct AlphaCoeffs {
    #[serde(rename = "T")]
    truncation: usize,
    #[serde(default)]
    u_coeffs: Vec<Vec<i64>>,
    #[serde(default)]
    v_coeffs: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct AnnulusInput {
    n: u64,
    spec: RingSpec,
    c: Vec<i64>,
    alpha: AlphaCoeffs,
}

fn annulus_analyze(cli: &Cli, input: &Path) -> Result<(String, i32), String> {
    let data: AnnulusInput = read_input(input)?;
    data.spec.validate().map_err(|e| e.to_string())?;
    let t = data.alpha.truncation;
    if t < 2 {
        return Err("alpha truncation must be at least 2".into());
    }
    if data.alpha.u_coeffs.len() > t || data.alpha.v_coeffs.len() > t - 1 {
        return Err("more alpha coefficients than the truncation admits".into());
    }
    let c = RingElement::make(data.spec, &data.c);
    let mut alpha = AnnulusElement::zero(data.spec, c, t);
    for (i, digits) in data.alpha.u_coeffs.iter().enumerate() {
        alpha.set_u_coeff(i, RingElement::make(data.spec, digits));
    }
    for (j, digits) in data.alpha.v_coeffs.iter().enumerate() {
        alpha.set_v_coeff(j + 1, RingElement::make(data.spec, digits));
    }
    let report = (|| {
        let cover = make_cover(data.n, &alpha)?;
        let h = log_differential(&cover)?;
        let inv = extract_m_d(&h)?;
        let alternative = if data.n % data.spec.p == 0 {
            Some(check_alternative_a(&inv, data.n, &data.spec).map(|_| ()))
        } else {
            None
        };
        Ok::<_, crate::annulus::AnnulusError>((inv, alternative))
    })();
    match report {
        Ok((inv, alternative)) => {
            let (alt_text, code) = match &alternative {
                None => ("n/a".to_string(), 0),
                Some(Ok(())) => ("pass".to_string(), 0),
                Some(Err(_)) => ("fail".to_string(), 1),
            };
            let out = match cli.format {
                Format::Text => format!(
                    "m={} side={} val_d={} alternativeA={}",
                    inv.m, inv.side, inv.val_d, alt_text
                ),
                Format::Json => pretty(&json!({
                    "m": inv.m,
                    "side": inv.side,
                    "val_d": inv.val_d,
                    "alternative_A": alt_text,
                    "detail": alternative.and_then(|a| a.err().map(|e| e.to_string())),
                })),
            };
            Ok((out, code))
        }
        Err(e) => Ok((format!("analysis failed: {e}"), 1)),
    }
}

fn skeleton_admissible(cli: &Cli, input: &Path) -> Result<(String, i32), String> {
    let sk: CoverSkeleton = read_input(input)?;
    sk.well_formed().map_err(|e| e.to_string())?;
    let mut failures = check_admissible(&sk).failures;
    match target_genus_check(&sk) {
        Ok(rep) => failures.extend(rep.failures),
        Err(e) => failures.push(e.to_string()),
    }
    match hurwitz_inequality(&sk) {
        Ok(rep) => failures.extend(rep.failures),
        Err(e) => failures.push(e.to_string()),
    }
    let pass = failures.is_empty();
    let out = match cli.format {
        Format::Text => {
            if pass {
                "admissible".to_string()
            } else {
                let mut lines = vec!["not admissible:".to_string()];
                lines.extend(failures.iter().cloned());
                lines.join("\n")
            }
        }
        Format::Json => pretty(&json!({ "pass": pass, "failures": failures })),
    };
    Ok((out, if pass { 0 } else { 1 }))
}

fn skeleton_classify(cli: &Cli, input: &Path) -> Result<(String, i32), String> {
    let sk: CoverSkeleton = read_input(input)?;
    sk.well_formed().map_err(|e| e.to_string())?;
    let c = classify(&sk);
    let code = if c.kind == Kind::Invalid { 1 } else { 0 };
    let out = match cli.format {
        Format::Text => {
            let mut lines = vec![format!("{:?}", c.kind)];
            lines.extend(
                c.witnesses
                    .iter()
                    .map(|(subject, detail)| format!("{subject}: {detail}")),
            );
            lines.join("\n")
        }
        Format::Json => pretty(&c),
    };
    Ok((out, code))
}

/// The finest degree compatible with the skeleton: `1/L` for `L` the
/// lcm of the denominators of the finite `r` values.
fn default_r0(sk: &CoverSkeleton) -> Rational {
    let mut l = 1i64;
    for v in &sk.graph.vertices {
        if let Some((_, den)) = v.r.parts() {
            l = lcm(l, den);
        }
    }
    Rational::new(1, l)
}

fn defring(cli: &Cli, input: &Path) -> Result<(String, i32), String> {
    let sk: CoverSkeleton = read_input(input)?;
    sk.well_formed().map_err(|e| e.to_string())?;
    let r0 = default_r0(&sk);
    match emit_presentation(&sk, &r0) {
        Ok(pres) => {
            let out = match cli.format {
                Format::Text => pres
                    .relations
                    .iter()
                    .map(|r| r.to_string())
                    .collect::<Vec<_>>()
                    .join("\n"),
                Format::Json => pretty(&json!({
                    "presentation": pres,
                    "singularity": singularity_report(&pres),
                })),
            };
            Ok((out, 0))
        }
        Err(e) => Ok((format!("presentation failed: {e}"), 1)),
    }
}

fn smooth_lift_cmd(cli: &Cli, input: &Path) -> Result<(String, i32), String> {
    let sk: CoverSkeleton = read_input(input)?;
    sk.well_formed().map_err(|e| e.to_string())?;
    match smooth_lift(&sk) {
        Ok(asg) => {
            let out = match cli.format {
                Format::Text => {
                    let mut lines: Vec<String> = asg
                        .eps
                        .iter()
                        .map(|(e, eps)| format!("{e}: {eps}"))
                        .collect();
                    lines.push(format!("N = {}", asg.ram));
                    lines.join("\n")
                }
                Format::Json => pretty(&asg),
            };
            Ok((out, 0))
        }
        Err(e) => Ok((format!("smooth lift failed: {e}"), 1)),
    }
}

#[derive(Serialize)]
struct SuiteLine {
    suite: &'static str,
    cases: u64,
    pass: bool,
    failures: Vec<String>,
}

fn selftest(cli: &Cli) -> (String, i32) {
    let seed = effective_seed(cli);
    let t = cli.truncation.unwrap_or(16);
    let m = cli.precision.unwrap_or(8);
    let outcomes = [
        testgen::earnest_roundtrip_suite(seed, 10, t, m),
        testgen::degeneracy_suite(4),
        testgen::alternative_a_suite(seed, 5, 8, 6),
        testgen::goodness_suite(3, 3),
        testgen::smooth_lift_suite(seed, 50),
        testgen::exactness_suite(32),
        testgen::classification_suite(),
    ];
    let all_pass = outcomes.iter().all(|o| o.pass());
    let out = match cli.format {
        Format::Text => {
            let mut lines = vec![format!("{:<28} {:>6}  result", "suite", "cases")];
            for o in &outcomes {
                lines.push(format!(
                    "{:<28} {:>6}  {}",
                    o.name,
                    o.cases,
                    if o.pass() { "pass" } else { "FAIL" }
                ));
                for f in &o.failures {
                    lines.push(format!("  {f}"));
                }
            }
            lines.push(format!(
                "selftest: {} (seed {seed})",
                if all_pass { "PASS" } else { "FAIL" }
            ));
            lines.join("\n")
        }
        Format::Json => {
            let lines: Vec<SuiteLine> = outcomes
                .iter()
                .map(|o| SuiteLine {
                    suite: o.name,
                    cases: o.cases,
                    pass: o.pass(),
                    failures: o.failures.clone(),
                })
                .collect();
            pretty(&json!({ "seed": seed, "pass": all_pass, "suites": lines }))
        }
    };
    (out, if all_pass { 0 } else { 1 })
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization cannot fail")
}
