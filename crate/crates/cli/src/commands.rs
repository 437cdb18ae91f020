use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use symdyn_core::arith::{parse_rational, RealPoint};
use symdyn_core::measures::{
    convergence_diagnostic, first_blocks, is_good, parse_oracle, Oracle,
};
use symdyn_core::numeration::System;
use symdyn_core::reduction::{
    pi_safe_symbol, verify_reduction, window_gaps, BaireInput, DichotomyReport, FeebleReduction,
    ReductionTrace, SafeTrace,
};
use symdyn_core::synthesis::{synthesize_generic, GoodBlockSampler, Schedule};
use symdyn_core::{DigitStream, Error};

use crate::specs::{parse_gluer, parse_stream, read_symbols, write_digits, write_json, write_symbols};
use crate::Global;

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Report envelope: every report carries the tool version, the command's
/// configuration, the seed and the mode.
fn envelope(g: &Global, command: &str, config: &impl Serialize, body: Value) -> Result<Value> {
    let mut v = json!({
        "tool": "symdyn",
        "version": VERSION,
        "command": command,
        "seed": g.seed,
        "mode": g.mode.to_string(),
        "precision": g.precision,
        "config": serde_json::to_value(config)?,
    });
    if let (Value::Object(m), Value::Object(b)) = (&mut v, body) {
        m.extend(b);
    }
    Ok(v)
}

fn header(g: &Global, command: &str, config: &impl Serialize) -> Result<Vec<String>> {
    Ok(vec![
        format!("symdyn {VERSION} {command}"),
        format!("seed {} mode {} precision {}", g.seed, g.mode, g.precision),
        format!("config {}", serde_json::to_string(config)?),
    ])
}

fn emit_report(g: &Global, report: &Value) -> Result<()> {
    if let Some(p) = &g.report {
        write_json(p, report)?;
    }
    Ok(())
}

fn eps_arg(s: &str) -> Result<BigRational> {
    let e = parse_rational(s)?;
    if e <= BigRational::from_integer(0.into()) {
        bail!(Error::OutOfDomain(format!("ε = {e} must be positive")));
    }
    Ok(e)
}

// --------------------------------------------------------------------------- expand

#[derive(Debug, Args, Serialize)]
pub struct ExpandArgs {
    /// `tent`, `luroth`, `cf`, `base:<r>`, `beta:<β>`, or `@<file>` for a spec file.
    #[arg(long)]
    pub system: String,
    /// `p/q`, a decimal, `sqrt<n>[±<q>]`-style surds, … (exact).
    #[arg(long)]
    pub point: String,
    #[arg(long)]
    pub k: usize,
    /// Output stream file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn expand(g: &Global, a: ExpandArgs) -> Result<()> {
    let system = match a.system.strip_prefix('@') {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            let name = Path::new(path).file_stem().and_then(|s| s.to_str()).unwrap_or("custom");
            System::from_spec_text(name, &text)?
        }
        None => System::parse(&a.system, g.precision)?,
    };
    let x = RealPoint::parse(&a.point)?;
    let e = system.expand(&x, a.k)?;
    if e.terminated {
        eprintln!("note: orbit reached 0 after {} digits", e.digits.len());
    }
    let mut head = header(g, "expand", &a)?;
    head.push(format!("system {system}"));
    match &a.out {
        Some(p) => write_digits(p, &head, &e.digits)?,
        None => symdyn_core::symbolic::write_stream_text(std::io::stdout().lock(), &head, &e.digits)?,
    }
    let report = envelope(
        g,
        "expand",
        &a,
        json!({ "system": system.to_string(), "digits": e.digits, "terminated": e.terminated }),
    )?;
    emit_report(g, &report)
}

// --------------------------------------------------------------------------- normality

#[derive(Debug, Args, Serialize)]
pub struct NormalityArgs {
    /// Digit-stream text file.
    #[arg(long)]
    pub stream: PathBuf,
    /// Oracle spec, e.g. `bernoulli 1/2 1/2`, `gauss`, `parry golden density`.
    #[arg(long)]
    pub oracle: String,
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value = "1/100")]
    pub eps: String,
    /// Comma-separated prefix lengths; defaults to the longest fully
    /// observable prefix.
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Vec<usize>,
}

pub fn normality(g: &Global, a: NormalityArgs) -> Result<()> {
    let oracle = parse_oracle(&a.oracle)?;
    let eps = eps_arg(&a.eps)?;
    if eps > BigRational::from_integer(1.into()) {
        eprintln!("warning: ε = {eps} > 1, every block is vacuously good");
    }
    let data = read_symbols(&a.stream)?;
    let overhang = first_blocks(oracle.as_ref(), a.m)?.iter().map(|w| w.len()).max().unwrap_or(1) - 1;
    let checkpoints = if a.checkpoints.is_empty() {
        vec![data.len().saturating_sub(overhang)]
    } else {
        a.checkpoints.clone()
    };
    let mut x = DigitStream::from_vec(data);
    let d = convergence_diagnostic(&mut x, oracle.as_ref(), a.m, &eps, &checkpoints)?;
    println!("oracle {}  m = {}  ε = {eps}", d.oracle, a.m);
    for c in &d.checkpoints {
        let worst = c.report.blocks.iter().map(|b| b.deviation.abs()).fold(0.0, f64::max);
        println!(
            "N = {:>10}  good = {:<5}  verdict = {:?}  max |freq − mass| = {worst:.6}",
            c.n,
            c.report.is_good(),
            c.report.overall
        );
    }
    for b in &d.blocks {
        println!("block {:>8}  range [{:.6}, {:.6}]  gap {:.6}", b.block.to_string(), b.min, b.max, b.gap);
    }
    println!("all good: {}", d.all_good());
    let report = envelope(
        g,
        "normality",
        &a,
        json!({ "all_good": d.all_good(), "max_gap": d.max_gap(), "diagnostic": d }),
    )?;
    emit_report(g, &report)
}

// --------------------------------------------------------------------------- synthesize

#[derive(Debug, Args, Serialize)]
pub struct SynthesizeArgs {
    #[arg(long)]
    pub oracle: String,
    /// `full`, `full:<r>` or `beta:<β>`.
    #[arg(long, default_value = "full")]
    pub gluer: String,
    #[arg(long)]
    pub len: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Goodness check of the finished prefix.
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value = "1/100")]
    pub eps: String,
}

pub fn synthesize(g: &Global, a: SynthesizeArgs) -> Result<()> {
    let oracle = parse_oracle(&a.oracle)?;
    let gluer = parse_gluer(&a.gluer, oracle.alphabet(), g.precision)?;
    let eps = eps_arg(&a.eps)?;
    let src = Box::new(GoodBlockSampler::new(oracle.clone(), g.seed));
    let (x, log) = synthesize_generic(src, gluer.clone(), Schedule::default(), a.len)?;
    let admissible = gluer.in_language(&x)?;
    let check = is_good(&x, oracle.as_ref(), a.m, &eps)?;
    println!(
        "{} symbols, {} blocks, {} corrections; in language: {admissible}; ({}, {eps})-good: {:?}",
        x.len(),
        log.blocks.len(),
        log.corrections(),
        a.m,
        check.overall
    );
    if let Some(p) = &a.out {
        write_symbols(p, &header(g, "synthesize", &a)?, &x)?;
    }
    let report = envelope(
        g,
        "synthesize",
        &a,
        json!({ "admissible": admissible, "goodness": check, "log": log }),
    )?;
    emit_report(g, &report)
}

// --------------------------------------------------------------------------- reduce

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// Repeated generic prefixes glued under right feeble specification.
    Feeble,
    /// Overwriting by the safe symbol 0.
    Safe,
}

#[derive(Debug, Args, Serialize)]
pub struct ReduceArgs {
    #[arg(long, value_enum, default_value = "feeble")]
    pub kind: Kind,
    /// `const:K`, `identity`, `file:<path>`, or a list such as `3,1,4`.
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub mu: String,
    /// Second measure (feeble: the measure of z; safe: the measure of x when μ = δ₀).
    #[arg(long)]
    pub nu: Option<String>,
    #[arg(long, default_value = "full")]
    pub gluer: String,
    /// Stream spec for x: `sample`, `synth`, `file:<path>`, `periodic:<w>`.
    #[arg(long, default_value = "sample")]
    pub x: String,
    /// Stream spec for z (feeble only).
    #[arg(long, default_value = "sample")]
    pub z: String,
    /// Observed symbol (safe only).
    #[arg(long, default_value_t = 1)]
    pub gamma: u64,
    #[arg(long)]
    pub len: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Trace sidecar (JSON).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Verification: number of tested blocks.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value = "1/20")]
    pub eps: String,
}

fn print_dichotomy(r: &DichotomyReport) {
    for b in &r.boundaries {
        let mix = b.deviation_mix.map_or(String::new(), |d| format!("  dev(mix) = {d:.4}"));
        println!(
            "stage {:>2} {} at {:>10}: dev(μ) = {:.4}{mix}  corrections {:.2e}",
            b.n, b.kind, b.pos, b.deviation_mu, b.correction_density
        );
    }
    for (n, gap) in &r.gaps {
        println!("gap U′/U″ stage {n}: {gap:.4}");
    }
    println!("verdict: {}", r.verdict.as_str());
    if let Some(m) = r.label_match {
        println!("matches label: {m}");
    }
}

pub fn reduce(g: &Global, a: ReduceArgs) -> Result<()> {
    let alpha = BaireInput::parse(&a.alpha)?;
    let mu = parse_oracle(&a.mu)?;
    let nu = a.nu.as_deref().map(parse_oracle).transpose()?;
    let eps = eps_arg(&a.eps)?;
    let gluer = parse_gluer(&a.gluer, mu.alphabet(), g.precision)?;
    match a.kind {
        Kind::Feeble => {
            let nu = nu.context("--nu is required for the feeble reduction")?;
            let x = parse_stream(&a.x, &mu, &gluer, g.seed)?;
            let z = parse_stream(&a.z, &nu, &gluer, g.seed.wrapping_add(1))?;
            let mut red = FeebleReduction::new(x, mu.clone(), z, nu.clone(), gluer, g.mode);
            let (y, trace) = red.run(&alpha, a.len)?;
            let report = verify_reduction(&trace, &y, mu.as_ref(), nu.as_ref(), a.m, &eps)?;
            println!(
                "{} symbols, {} stages, depends on α(1..{})",
                y.len(),
                trace.stages.len(),
                trace.alpha_depth
            );
            print_dichotomy(&report);
            if let Some(p) = &a.out {
                write_symbols(p, &header(g, "reduce", &a)?, &y)?;
            }
            let body = json!({ "kind": "feeble", "trace": trace, "report": report });
            finish_reduce(g, &a, body)
        }
        Kind::Safe => {
            let reference: Oracle = match (&nu, is_dirac(&mu)?) {
                (Some(nu), true) => nu.clone(),
                _ => mu.clone(),
            };
            let mut x = parse_stream(&a.x, &reference, &gluer, g.seed)?;
            let (y, trace) = pi_safe_symbol(&alpha, &mut x, a.gamma, mu.as_ref(), nu.as_deref(), a.len)?;
            let gaps = window_gaps(&y, &trace);
            println!("{} symbols, {} windows, depends on α(1..{})", y.len(), trace.windows.len(), trace.alpha_depth);
            for (n, gap) in &gaps.gaps {
                println!("window pair {n}: gap {gap:.4}");
            }
            if let Some(p) = &a.out {
                write_symbols(p, &header(g, "reduce", &a)?, &y)?;
            }
            let body = json!({ "kind": "safe", "trace": trace, "gaps": gaps });
            finish_reduce(g, &a, body)
        }
    }
}

fn is_dirac(o: &Oracle) -> Result<bool> {
    Ok(o.mass(&[0])?.as_exact().map_or(false, |q| *q == BigRational::from_integer(1.into())))
}

fn finish_reduce(g: &Global, a: &ReduceArgs, body: Value) -> Result<()> {
    let report = envelope(g, "reduce", a, body)?;
    if let Some(p) = &a.trace {
        write_json(p, &report)?;
    }
    emit_report(g, &report)
}

// --------------------------------------------------------------------------- verify

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Output stream of `reduce`.
    #[arg(long)]
    pub stream: PathBuf,
    /// Trace sidecar written by `reduce --trace`.
    #[arg(long)]
    pub trace: PathBuf,
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long)]
    pub nu: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value = "1/20")]
    pub eps: String,
}

pub fn verify(g: &Global, a: VerifyArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.trace).with_context(|| format!("reading {}", a.trace.display()))?;
    let sidecar: Value = serde_json::from_str(&text).context("trace sidecar is not JSON")?;
    let y = read_symbols(&a.stream)?;
    let kind = sidecar.get("kind").and_then(Value::as_str).unwrap_or("feeble");
    let trace_value = sidecar
        .get("trace")
        .cloned()
        .ok_or_else(|| Error::TruncatedTrace("sidecar has no trace".into()))?;
    let body = if kind == "safe" {
        let trace: SafeTrace = serde_json::from_value(trace_value)
            .map_err(|e| Error::TruncatedTrace(format!("unreadable safe-symbol trace: {e}")))?;
        if y.len() as u64 != trace.emitted || trace.emitted < trace.requested {
            bail!(Error::TruncatedTrace(format!(
                "trace records {} of {} symbols, stream has {}",
                trace.emitted,
                trace.requested,
                y.len()
            )));
        }
        let gaps = window_gaps(&y, &trace);
        for (n, gap) in &gaps.gaps {
            println!("window pair {n}: gap {gap:.4}");
        }
        json!({ "kind": "safe", "gaps": gaps })
    } else {
        let trace: ReductionTrace = serde_json::from_value(trace_value)
            .map_err(|e| Error::TruncatedTrace(format!("unreadable reduction trace: {e}")))?;
        let (mu_spec, nu_spec) = match (&a.mu, &a.nu) {
            (Some(m), Some(n)) => (m.clone(), n.clone()),
            _ => {
                let cfg = sidecar.get("config");
                let get = |k: &str| cfg.and_then(|c| c.get(k)).and_then(Value::as_str).map(str::to_string);
                (
                    a.mu.clone().or_else(|| get("mu")).context("--mu is required")?,
                    a.nu.clone().or_else(|| get("nu")).context("--nu is required")?,
                )
            }
        };
        let (mu, nu) = (parse_oracle(&mu_spec)?, parse_oracle(&nu_spec)?);
        let eps = eps_arg(&a.eps)?;
        let report = verify_reduction(&trace, &y, mu.as_ref(), nu.as_ref(), a.m, &eps)?;
        print_dichotomy(&report);
        println!("final correction density {:.3e}", report.final_correction_density);
        json!({ "kind": "feeble", "report": report })
    };
    let report = envelope(g, "verify", &a, body)?;
    emit_report(g, &report)
}
