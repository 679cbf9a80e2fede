//! Command-line front end: argument parsing, input loading and JSON reports.
//!
//! Exit codes: 0 success, 1 malformed input, 2 violated precondition,
//! 3 internal invariant breach.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::corpus::run_corpus;
use crate::curves::{ne_cone, Wall};
use crate::divisor::{pullback, sections_basis, InvariantDivisor};
use crate::error::{Error, Result};
use crate::exactlin::{IntVector, Rat};
use crate::fan::{qfactorialize, resolve, validate_fan, Fan, FanMap};
use crate::io::{divisor_to_json, fan_to_json, rat_to_json, read_divisor, read_exponents, read_fan, read_map, to_text};
use crate::mmp::{run_mmp, MmpStep, MmpTrace, Outcome};
use crate::newton::{model, ExponentSet, ModelReport, ModelType};
use crate::sections::{algebra_generators, default_m_max, verify_ckm, zariski_decompose, CkmFailure};
use crate::singularities::classify_pair;

#[derive(Debug, Clone, PartialEq, Eq, Parser)]
#[command(name = "toric-mmp", version, about = "Exact toric minimal model program")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Fan checks and surgery.
    #[command(subcommand)]
    Fan(FanCommand),
    /// Relative Mori cone: wall classes, extremal rays and ρ.
    NeCone(MapInput),
    /// Run the MMP for a divisor.
    Mmp {
        #[command(flatten)]
        input: DivisorInput,
        /// Also write the trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Zariski decomposition with the section-equality check.
    Zariski {
        #[command(flatten)]
        input: DivisorInput,
        /// Multiples checked; defaults to four times the Cartier index of P.
        #[arg(long)]
        m_max: Option<usize>,
    },
    /// Lattice points of the section polytope.
    Sections {
        #[command(flatten)]
        input: DivisorInput,
        /// Restrict to coordinates in [-bound, bound].
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Generators of the graded section algebra.
    Hilbert(DivisorInput),
    /// Singularities of toric pairs.
    #[command(subcommand)]
    Sing(SingCommand),
    /// Models of a non-degenerate hypersurface from its exponents.
    Newton {
        /// JSON file with a list of exponent vectors, or `2,0,0;0,2,0;0,0,2`.
        #[arg(long)]
        exponents: String,
        /// minimal, canonical, dlt or lc.
        #[arg(long, default_value = "minimal")]
        model: String,
    },
    /// Random-instance property harness.
    Corpus {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum FanCommand {
    Validate { fan: PathBuf },
    Resolve { fan: PathBuf },
    Qfactorialize { fan: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum SingCommand {
    Classify {
        #[arg(long)]
        fan: PathBuf,
        /// Boundary divisor; zero when omitted.
        #[arg(long, allow_hyphen_values = true)]
        divisor: Option<String>,
    },
}

/// A map file, or a fan over a point (or over `--target` by the identity).
#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct MapInput {
    #[arg(long, conflicts_with_all = ["fan", "target"], required_unless_present = "fan")]
    pub map: Option<PathBuf>,
    #[arg(long)]
    pub fan: Option<PathBuf>,
    #[arg(long, requires = "fan")]
    pub target: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct DivisorInput {
    #[command(flatten)]
    pub map: MapInput,
    /// `K`, a divisor file, or coefficients such as `1,-1/2,0`.
    #[arg(long, allow_hyphen_values = true)]
    pub divisor: String,
}

/// Exit code and the report printed on stdout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub code: i32,
    pub text: String,
}

impl MapInput {
    fn load(&self) -> Result<FanMap> {
        match (&self.map, &self.fan, &self.target) {
            (Some(p), _, _) => read_map(p),
            (None, Some(f), None) => Ok(FanMap::to_point(read_fan(f)?)),
            (None, Some(f), Some(t)) => FanMap::identity(read_fan(f)?, read_fan(t)?),
            _ => Err(Error::Malformed("give --map or --fan".into())),
        }
    }
}

impl DivisorInput {
    fn load(&self) -> Result<(FanMap, InvariantDivisor)> {
        let m = self.map.load()?;
        let d = read_divisor(&self.divisor, &m.source)?;
        Ok((m, d))
    }
}

fn kind_name(e: &Error) -> &'static str {
    match e.exit_code() {
        1 => "malformed",
        2 => "precondition",
        _ => "invariant-breach",
    }
}

fn error_report(e: &Error, extra: Option<Value>) -> Value {
    let mut v = json!({ "status": "error", "kind": kind_name(e), "reason": e.to_string() });
    if let Error::NotQCartier { cone } = e {
        v["cone"] = json!(cone);
    }
    if let Some(x) = extra {
        v["witness"] = x;
    }
    v
}

fn rats(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_to_json).collect())
}

fn wall_json(w: &Wall) -> Value {
    json!({ "rays": w.rays, "cones": w.cones })
}

fn step_json(s: &MmpStep) -> Value {
    let flip = s.flip.as_ref().map(|f| {
        json!({
            "new_walls": f.new_walls.iter().map(|(c, v)| json!({ "class": c, "value": rat_to_json(v) })).collect::<Vec<_>>(),
            "negativity": divisor_to_json(&f.negativity),
        })
    });
    json!({
        "kind": s.kind.name(),
        "class": s.class,
        "value": rat_to_json(&s.value),
        "rho_before": s.rho_before,
        "rho_after": s.rho_after,
        "removed_ray": s.removed_ray,
        "flip": flip,
        "fan": fan_to_json(&s.fan),
        "divisor": s.divisor.as_ref().map(divisor_to_json),
    })
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::Minimal => "nef",
        Outcome::FiberType => "fano",
    }
}

pub fn trace_json(t: &MmpTrace) -> Value {
    json!({
        "steps": t.steps.iter().map(step_json).collect::<Vec<_>>(),
        "outcome": outcome_name(t.outcome),
        "model": fan_to_json(&t.model.source),
        "divisor": divisor_to_json(&t.divisor),
    })
}

fn ok(command: &str, body: Value) -> Value {
    let mut v = json!({ "status": "ok", "command": command });
    if let (Value::Object(o), Value::Object(b)) = (&mut v, body) {
        o.extend(b);
    }
    v
}

fn surgery(command: &str, old: &Fan, new: &Fan) -> Value {
    let added: Vec<&IntVector> = new.rays().iter().filter(|r| old.ray_index(r).is_none()).collect();
    ok(command, json!({ "fan": fan_to_json(new), "added_rays": added }))
}

fn fan_command(c: &FanCommand) -> Result<(i32, Value)> {
    match c {
        FanCommand::Validate { fan } => {
            let f = read_fan(fan)?;
            let v = validate_fan(&f);
            let list: Vec<Value> = v.iter().map(|x| json!({ "cones": x.cones, "message": x.to_string() })).collect();
            if v.is_empty() {
                Ok((0, ok("fan validate", json!({ "valid": true, "simplicial": f.is_simplicial(), "smooth": f.is_smooth() }))))
            } else {
                let mut r = error_report(&Error::InvalidFan(v[0].to_string()), None);
                r["violations"] = Value::Array(list);
                Ok((1, r))
            }
        }
        FanCommand::Resolve { fan } => {
            let f = read_fan(fan)?;
            let (r, _) = resolve(&f)?;
            Ok((0, surgery("fan resolve", &f, &r)))
        }
        FanCommand::Qfactorialize { fan } => {
            let f = read_fan(fan)?;
            let (r, _) = qfactorialize(&f)?;
            Ok((0, surgery("fan qfactorialize", &f, &r)))
        }
    }
}

fn newton_json(r: &ModelReport) -> Value {
    json!({
        "model_type": r.model_type.name(),
        "ambient": fan_to_json(&r.ambient.source),
        "divisor": divisor_to_json(&r.divisor),
        "wall_values": r.wall_values.iter().map(|(c, v)| json!({ "class": c, "value": rat_to_json(v) })).collect::<Vec<_>>(),
        "trace": trace_json(&r.trace),
        "model": fan_to_json(&r.model.source),
        "model_divisor": divisor_to_json(&r.model_divisor),
        "contracted": r.contracted.as_ref().map(fan_to_json),
        "discrepancies": r.discrepancies.iter().map(|(v, a)| json!({ "ray": v, "discrepancy": a })).collect::<Vec<_>>(),
    })
}

fn ckm_json(r: &crate::sections::ZariskiResult, d: &InvariantDivisor, m_max: Option<usize>) -> Result<Value> {
    let m_max = match m_max {
        Some(m) => m,
        None => default_m_max(r)?,
    };
    Ok(match verify_ckm(r, d, m_max) {
        Ok(v) => {
            let failure = v.failure.map(|f| match f {
                CkmFailure::NotNef { wall, class, value } => {
                    json!({ "condition": "nef", "wall": wall_json(&wall), "class": class, "value": rat_to_json(&value) })
                }
                CkmFailure::NotEffective { ray, coeff } => {
                    json!({ "condition": "effective", "ray": ray, "coeff": rat_to_json(&coeff) })
                }
                CkmFailure::Sections { m, witness } => json!({ "condition": "sections", "m": m, "witness": witness }),
            });
            json!({ "passed": failure.is_none(), "checked": v.checked, "m_max": m_max, "failure": failure })
        }
        Err(Error::Precondition(s)) => json!({ "skipped": s }),
        Err(e) => return Err(e),
    })
}

/// MMP trace for `D` pulled back to a resolution, the certificate of
/// failed pseudo-effectivity.
fn psef_witness(m: &FanMap, d: &InvariantDivisor) -> Option<Value> {
    let (xr, mu) = resolve(&m.source).ok()?;
    let dr = pullback(&mu, d).ok()?;
    let mr = FanMap::new(m.matrix.clone(), xr, m.target.clone()).ok()?;
    run_mmp(&mr, &dr).ok().map(|t| trace_json(&t))
}

fn run(cfg: &RunConfig) -> Result<(i32, Value)> {
    match &cfg.command {
        Command::Fan(c) => fan_command(c),
        Command::NeCone(input) => {
            let m = input.load()?;
            let ne = ne_cone(&m)?;
            let walls: Vec<Value> =
                ne.walls.iter().map(|(w, c)| json!({ "wall": wall_json(w), "class": c })).collect();
            Ok((
                0,
                ok(
                    "ne-cone",
                    json!({ "walls": walls, "generators": ne.generators(), "extremal_rays": ne.extremal_rays, "rho": ne.rho }),
                ),
            ))
        }
        Command::Mmp { input, trace } => {
            let (m, d) = input.load()?;
            let t = trace_json(&run_mmp(&m, &d)?);
            if let Some(p) = trace {
                fs::write(p, to_text(&t)).map_err(|e| Error::Malformed(format!("cannot write {}: {e}", p.display())))?;
            }
            Ok((0, ok("mmp", json!({ "trace": t }))))
        }
        Command::Zariski { input, m_max } => {
            let (m, d) = input.load()?;
            let r = match zariski_decompose(&m, &d) {
                Ok(r) => r,
                Err(e @ Error::Precondition(_)) => {
                    let w = e.to_string().contains("pseudo-effectivity failed").then(|| psef_witness(&m, &d)).flatten();
                    return Ok((2, error_report(&e, w)));
                }
                Err(e) => return Err(e),
            };
            let ckm = ckm_json(&r, &d, *m_max)?;
            Ok((
                0,
                ok(
                    "zariski",
                    json!({
                        "model": fan_to_json(&r.model.source),
                        "p": rats(&r.p.coeffs),
                        "n": rats(&r.n.coeffs),
                        "cartier_index": r.cartier_index.to_string(),
                        "ample_model": fan_to_json(&r.ample_model),
                        "trace": trace_json(&r.trace),
                        "ckm": ckm,
                    }),
                ),
            ))
        }
        Command::Sections { input, bound } => {
            let (m, d) = input.load()?;
            Ok((0, ok("sections", json!({ "sections": sections_basis(&m, &d, *bound)?, "bound": bound }))))
        }
        Command::Hilbert(input) => {
            let (m, d) = input.load()?;
            let g = algebra_generators(&m, &d)?;
            let gens: Vec<Value> =
                g.iter().map(|x| json!({ "degree": x[x.len() - 1], "u": &x[..x.len() - 1] })).collect();
            Ok((0, ok("hilbert", json!({ "generators": gens }))))
        }
        Command::Sing(SingCommand::Classify { fan, divisor }) => {
            let f = read_fan(fan)?;
            let d = match divisor {
                Some(s) => read_divisor(s, &f)?,
                None => InvariantDivisor::zero(f.rays().len()),
            };
            let c = classify_pair(&f, &d)?;
            Ok((
                0,
                ok(
                    "sing classify",
                    json!({
                        "verdict": c.verdict.name(),
                        "witness": c.witness,
                        "witness_cone": c.witness_cone,
                        "min_discrepancy": c.min_discrepancy.as_ref().map(rat_to_json),
                        "crepant_points": c.crepant_points,
                    }),
                ),
            ))
        }
        Command::Newton { exponents, model: ty } => {
            let e = ExponentSet::new(read_exponents(exponents)?)?;
            let ty: ModelType = ty.parse()?;
            Ok((0, ok("newton", newton_json(&model(&e, ty)?))))
        }
        Command::Corpus { seed, count } => {
            let rep = run_corpus(*seed, *count)?;
            let failures: Vec<Value> =
                rep.failures.iter().map(|(i, s)| json!({ "instance": i, "reason": s })).collect();
            let code = if failures.is_empty() { 0 } else { 3 };
            Ok((
                code,
                ok(
                    "corpus",
                    json!({
                        "seed": seed,
                        "instances": rep.total(),
                        "flips": rep.flips(),
                        "divisorial": rep.divisorial(),
                        "nef": rep.count(Outcome::Minimal),
                        "fano": rep.count(Outcome::FiberType),
                        "psef_disagreements": rep.psef_disagreements(),
                        "freeness_checked": rep.freeness_checked(),
                        "failures": failures,
                    }),
                ),
            ))
        }
    }
}

/// Runs one command. The report is deterministic in the inputs.
pub fn execute(cfg: &RunConfig) -> Report {
    let (code, v) = match run(cfg) {
        Ok(r) => r,
        Err(e) => (e.exit_code(), error_report(&e, None)),
    };
    Report { code, text: to_text(&v) }
}

/// Parses `args` (program name first) and runs; argument errors exit with 1.
pub fn main_with<I, T>(args: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => execute(&cfg),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            Report { code, text: e.render().to_string() }
        }
    }
}
