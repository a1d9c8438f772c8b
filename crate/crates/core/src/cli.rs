//! Command-line driver. Every command prints one JSON document with sorted
//! keys and `"schema": 1`, except `export-dot`.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::conjugation::iso_witness;
use crate::coordring::DEFAULT_BUDGET;
use crate::curve::{CaseKind, CurvePoint, FiberCase, LineLabel, WeierstrassCurve};
use crate::domain::{build_domain_with, cusps, DomainContext, DomainTag, DEFAULT_DEPTH};
use crate::error::Error;
use crate::field::FiniteField;
use crate::homology::{format_decomposition, h1_decomposition, h1_pgl2, main_theorem_report};
use crate::laurent::DEFAULT_PRECISION;
use crate::stabilizers::{expected_descriptor, m2_family, m4_family, stabilizer};
use crate::verify::run_all;

pub const SCHEMA: u32 = 1;

/// Cusp levels reported by `stabilizers`; `c(p,n)` has order `(q-1)q^n`.
pub const STABILIZER_CUSP_LEVELS: u32 = 2;

#[derive(Debug, Parser)]
#[command(name = "btquot", version, about = "Fundamental domains, stabilizers and conjugation certificates for GL2 of a Weierstrass cubic over a finite field")]
pub struct Cli {
    /// Field: `p`, `p^2` or `q`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Coefficients `a1,a2,a3,a4,a6`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub curve: Option<String>,
    /// Cusp truncation depth.
    #[arg(long, global = true, default_value_t = DEFAULT_DEPTH)]
    pub depth: u32,
    /// Laurent precision N.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    pub precision: usize,
    /// Override the certified pole bound for stabilizer enumeration.
    #[arg(long, global = true)]
    pub pole_bound: Option<u32>,
    /// Ceiling on enumerated candidates.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Point count, smoothness and the fiber case of every line.
    Classify,
    /// The fundamental domain as JSON.
    Domain,
    /// Stabilizers of the domain vertices with isomorphism witnesses.
    Stabilizers,
    /// Conjugation certificates and the per-summand ledger.
    Certify,
    /// Degree-one homology decomposition.
    Homology,
    /// Run the acceptance suite.
    Verify,
    /// The fundamental domain in Graphviz DOT.
    ExportDot,
}

/// Exit status plus the document to write, or a diagnostic for stderr.
pub struct Outcome {
    pub code: i32,
    pub output: String,
    pub error: Option<String>,
}

pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotPrime(_)
        | Error::UnsupportedDegree(_)
        | Error::InvalidInput(_)
        | Error::PointNotOnCurve { .. }
        | Error::FieldTooSmall(_)
        | Error::NotInE1(_)
        | Error::SingularPoint(_) => EXIT_INVALID,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::IdentityFailure(_) | Error::WitnessFailure(_) | Error::ContainmentFailure(_) | Error::BoundTooSmall(_) => EXIT_VERIFY,
        _ => 1,
    }
}

fn setup(cli: &Cli) -> Result<WeierstrassCurve, Error> {
    let field = cli.field.as_deref().ok_or_else(|| Error::InvalidInput("--field is required".into()))?;
    let curve = cli.curve.as_deref().ok_or_else(|| Error::InvalidInput("--curve is required".into()))?;
    if cli.depth == 0 {
        return Err(Error::InvalidInput("--depth must be positive".into()));
    }
    if cli.precision < 16 {
        return Err(Error::InvalidInput("--precision must be at least 16".into()));
    }
    let k = FiniteField::parse(field)?;
    WeierstrassCurve::parse(&k, curve)
}

fn context(cli: &Cli, curve: &WeierstrassCurve) -> Result<DomainContext, Error> {
    DomainContext::new(curve, cli.precision.max(cli.depth as usize + 16))
}

fn envelope(cli: &Cli, curve: Option<&WeierstrassCurve>, result: Value) -> Value {
    let command = match cli.command {
        Command::ExportDot => "export-dot".to_string(),
        c => format!("{c:?}").to_lowercase(),
    };
    let mut v = json!({
        "schema": SCHEMA,
        "command": command,
        "seed": cli.seed,
        "result": result,
    });
    if let Some(c) = curve {
        v["field"] = json!(c.field().spec());
        v["curve"] = json!(c.coefficients().map(|a| c.field().format(a)));
    }
    v
}

fn case_json(curve: &WeierstrassCurve, line: LineLabel) -> Value {
    let case = curve.classify_fiber(line);
    let k = curve.field();
    let mut v = json!({
        "l": curve.format_line(line),
        "case": case.number(),
        "kind": case.kind(),
        "points": case.points().iter().map(|&p| curve.format_point(p)).collect::<Vec<_>>(),
    });
    if let FiberCase::NoSolution { b, c } = case {
        v["quadratic"] = json!(format!("w^2 + ({})w + ({})", k.format(b), k.format(c)));
    }
    v
}

pub fn cmd_classify(curve: &WeierstrassCurve) -> Value {
    let lines: Vec<LineLabel> = curve.lines();
    let count = |kind| lines.iter().filter(|&&l| curve.classify_fiber(l).kind() == kind).count();
    json!({
        "description": curve.describe(),
        "points": curve.points().len(),
        "smooth": curve.is_smooth(),
        "singular_point": curve.singular_point().map(|p| curve.format_point(p)),
        "lines": lines.iter().map(|&l| case_json(curve, l)).collect::<Vec<_>>(),
        "case_counts": {
            "no_solution": count(CaseKind::NoSolution),
            "unique": count(CaseKind::Unique),
            "two": count(CaseKind::Two),
        },
    })
}

pub fn cmd_domain(ctx: &DomainContext, depth: u32) -> Result<Value, Error> {
    let d = build_domain_with(ctx, depth)?;
    let mut v = d.to_json();
    v["truncation"] = json!(format!("cusps truncated at depth {depth}"));
    v["cusps"] = json!(cusps(&d).into_iter().map(|(id, _)| id).collect::<Vec<_>>());
    v["point_count"] = json!(ctx.curve().points().len());
    Ok(v)
}

pub fn cmd_stabilizers(ctx: &DomainContext, depth: u32, pole_bound: Option<u32>, budget: u128) -> Result<Value, Error> {
    let curve = ctx.curve();
    let ring = ctx.ring();
    let d = build_domain_with(ctx, depth.min(STABILIZER_CUSP_LEVELS))?;
    let mut out = Vec::new();
    for dv in &d.vertices {
        let g = stabilizer(ctx, dv, pole_bound, budget)?;
        let q = curve.field().order();
        let expected = expected_descriptor(curve, dv.tag);
        let family = match dv.tag {
            DomainTag::V(LineLabel::Finite(l)) => Some(m2_family(curve, l)?),
            DomainTag::E(p @ CurvePoint::Affine { .. }) => Some(m4_family(curve, p)?),
            _ => None,
        };
        let family_agrees = family.map(|f| {
            let f: std::collections::BTreeSet<_> = f.iter().map(|m| m.projective(ring)).collect();
            f.len() == g.order() && f.iter().all(|m| g.contains(ring, m))
        });
        let witness = iso_witness(ctx, &g).map_err(|e| e.to_string());
        out.push(json!({
            "vertex": dv.tag.label(curve),
            "tree": dv.vertex,
            "order": g.order(),
            "expected_order": expected.order(q),
            "iso": expected,
            "iso_description": expected.describe(),
            "pole_bound": g.pole_bound,
            "family_agrees": family_agrees,
            "witness": match witness {
                Ok(w) => json!(w),
                Err(e) => json!({ "error": e }),
            },
            "sample": g.reps.iter().take(4).map(|m| m.format(ring)).collect::<Vec<_>>(),
        }));
    }
    Ok(json!({
        "cusp_levels": depth.min(STABILIZER_CUSP_LEVELS),
        "stabilizers": out,
    }))
}

pub fn cmd_homology(ctx: &DomainContext) -> Result<Value, Error> {
    let curve = ctx.curve();
    let s = h1_decomposition(curve)?;
    Ok(json!({
        "degree": 1,
        "h1_pgl2": h1_pgl2(curve.field())?,
        "summands": s,
        "decomposition": format_decomposition(&s),
        "scope": "degree-one instance over a finite field; degree two is reported as a shape only",
    }))
}

fn emit(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

pub fn run(cli: &Cli) -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.workers.max(1)).build();
    let run = || -> Result<Outcome, Error> {
        if let Command::Verify = cli.command {
            let results = run_all(cli.seed);
            let pass = results.iter().all(|r| r.pass);
            let lines: Vec<String> = results.iter().map(|r| r.line()).collect();
            let v = envelope(cli, None, json!({ "criteria": results, "summary": lines, "pass": pass }));
            return Ok(Outcome { code: if pass { 0 } else { EXIT_VERIFY }, output: emit(&v), error: None });
        }
        let curve = setup(cli)?;
        let out = |v: Value| Ok(Outcome { code: 0, output: emit(&envelope(cli, Some(&curve), v)), error: None });
        match cli.command {
            Command::Classify => out(cmd_classify(&curve)),
            Command::Domain => out(cmd_domain(&context(cli, &curve)?, cli.depth)?),
            Command::ExportDot => Ok(Outcome { code: 0, output: build_domain_with(&context(cli, &curve)?, cli.depth)?.to_dot(), error: None }),
            Command::Stabilizers => out(cmd_stabilizers(&context(cli, &curve)?, cli.depth, cli.pole_bound, cli.budget)?),
            Command::Homology => out(cmd_homology(&context(cli, &curve)?)?),
            Command::Certify => {
                let ctx = context(cli, &curve)?;
                let report = main_theorem_report(&ctx, cli.budget)?;
                let code = if report.pass() { 0 } else { EXIT_VERIFY };
                Ok(Outcome { code, output: emit(&envelope(cli, Some(&curve), report.to_json(&ctx))), error: None })
            }
            Command::Verify => unreachable!(),
        }
    };
    let result = match pool {
        Ok(p) => p.install(run),
        Err(e) => Err(Error::InvalidInput(format!("--workers: {e}"))),
    };
    match result {
        Ok(o) => o,
        Err(e) => Outcome { code: exit_code(&e), output: String::new(), error: Some(e.to_string()) },
    }
}
