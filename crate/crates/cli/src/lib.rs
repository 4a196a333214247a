//! Command-line front end for `pglcones`.
//!
//! Every verb produces a [`Report`]; `--json` prints it as JSON, otherwise a
//! plain-text rendering of the payload. Exit codes: 0 ok, 1 precondition
//! violation, 2 usage error, 3 failed internal check.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use pglcones::cycles::{
    self, boundary_class, boundary_classes, canonical_class, curve_cone, decompose, dual_cone,
    nef_cone, pair, CurveClass, DivisorClass, SimplicialCone,
};
use pglcones::embedding::{
    are_isomorphic, count_points_ff, embedding_from_form, membership, minors_system,
    verify_equations, BinaryForm, Embedding, EmbeddingRecord, Membership,
};
use pglcones::projline::parse_points;
use pglcones::torus::{self, fixed_points, strata_summary, Direction, OneParamWeight, PointTuple};

#[derive(Debug, Parser)]
#[command(name = "pglcones", version, about = "Cones, strata and equations of PGL(2)-orbit closures in (P^1)^r")]
pub struct Cli {
    #[command(flatten)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PointsArg {
    /// Comma-separated points of P^1, e.g. inf,0,1,2.
    #[arg(long, allow_hyphen_values = true)]
    points: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirArg {
    #[value(alias = "positive")]
    Pos,
    #[value(alias = "negative")]
    Neg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConeKind {
    Nef,
    Curve,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normalization, fixed points and canonical class of X(p).
    Info(PointsArg),
    /// Torus-fixed points of X(p) with their strata.
    FixedPoints(PointsArg),
    /// Limit of a point of X(p) under the one-parameter subgroup.
    Limit {
        #[command(flatten)]
        points: PointsArg,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, value_enum)]
        dir: DirArg,
        /// Exponent k of the composite one-parameter subgroup.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        k: i64,
    },
    /// Membership test for a point of (P^1)^r.
    Member {
        #[command(flatten)]
        points: PointsArg,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// The determinantal equations of the affine slice.
    Equations(PointsArg),
    /// Symbolic and finite-field verification of the equations.
    Verify {
        #[command(flatten)]
        points: PointsArg,
        /// Comma-separated primes for point counting.
        #[arg(long, value_delimiter = ',')]
        ff: Vec<u32>,
    },
    /// Divisor class algebra.
    Class {
        #[arg(long)]
        r: usize,
        /// Boundary divisor index (1-based).
        #[arg(long, group = "which")]
        boundary: Option<usize>,
        #[arg(long, group = "which")]
        canonical: bool,
        /// Coefficients in the D basis.
        #[arg(long, group = "which", allow_hyphen_values = true)]
        divisor: Option<String>,
        /// Curve class (C basis) to pair with.
        #[arg(long, allow_hyphen_values = true)]
        curve: Option<String>,
    },
    /// A simplicial cone and its dual.
    Cone {
        #[arg(long, conflicts_with = "generators", requires = "kind")]
        r: Option<usize>,
        #[arg(long, value_enum)]
        kind: Option<ConeKind>,
        /// Generators separated by ';', coordinates by ','.
        #[arg(long, allow_hyphen_values = true)]
        generators: Option<String>,
    },
    /// Decompose a vector in a simplicial cone.
    Decompose {
        /// Use the cone of curves of X(p) with this r.
        #[arg(long, conflicts_with = "generators")]
        r: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        generators: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Isomorphism test between two orbit closures.
    Isomorphic {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Orbit closure attached to a factored binary form.
    Form {
        /// Linear factors a:b:m (the form (a x + b y)^m), comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        factors: String,
    },
}

/// Result of a verb.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

/// Captured process output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

enum Failure {
    Usage(String),
    Precondition(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Precondition(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Precondition(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<pglcones::Error> for Failure {
    fn from(e: pglcones::Error) -> Self {
        Failure::Precondition(e.to_string())
    }
}

fn usage<T>(r: pglcones::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Usage(e.to_string()))
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

fn classify_json(d: &torus::StratumDescriptor) -> Value {
    json!({ "description": d.tag.to_string(), "dimension": d.dimension })
}

fn embedding_json(x: &Embedding) -> Value {
    serde_json::to_value(EmbeddingRecord::from(x.clone())).expect("serializable")
}

fn execute(cmd: &Command) -> Result<(Value, Vec<String>), Failure> {
    let mut diagnostics = Vec::new();
    let payload = match cmd {
        Command::Info(p) => {
            let x = usage(parse_points(&p.points))?;
            let x = Embedding::new(x)?;
            let r = x.r();
            let k = canonical_class(r)?;
            let multiple = k.scale_int(2 - r as i64);
            json!({
                "r": r,
                "points": strings(x.points()),
                "normalized": strings(x.normalized()),
                "normalizer": x.normalizer().to_string(),
                "fixed_points": fixed_points(&x)?.len(),
                "canonical_class": k,
                "anticanonical_multiple": multiple,
                "boundary_classes": boundary_classes(r)?,
                "singular_along_diagonal": r >= 4,
            })
        }
        Command::FixedPoints(p) => {
            let x = Embedding::new(usage(parse_points(&p.points))?)?;
            let points = fixed_points(&x)?;
            let rows = strata_summary(&x)?;
            let items: Vec<Value> = points
                .iter()
                .zip(&rows)
                .map(|((label, q), row)| {
                    json!({
                        "label": label.to_string(),
                        "point": strings(q.coords()),
                        "positive": classify_json(&row.positive),
                        "negative": classify_json(&row.negative),
                    })
                })
                .collect();
            if let Some(row) = rows.iter().find(|r| !r.satisfies_inequality()) {
                return Err(Failure::Internal(format!("dimension inequality fails at {}", row.label)));
            }
            diagnostics.push("A-strata dimensions are computed from point counts over F_q".into());
            json!({ "r": x.r(), "count": points.len(), "fixed_points": items })
        }
        Command::Limit { points, at, dir, k } => {
            let x = Embedding::new(usage(parse_points(&points.points))?)?;
            let q = usage(PointTuple::parse(at))?;
            let w = usage(OneParamWeight::new(*k))?;
            let direction = match dir {
                DirArg::Pos => Direction::Positive,
                DirArg::Neg => Direction::Negative,
            };
            if !membership(&x, q.coords())?.is_member() {
                return Err(Failure::Precondition("point not in X".into()));
            }
            let lim = torus::limit(w, &q, direction);
            // λ^k with k < 0 flows the opposite way
            let flow = if *k > 0 { direction } else { flip(direction) };
            let stratum = torus::stratum_of(&x, &q, flow)?;
            json!({
                "at": strings(q.coords()),
                "direction": direction.to_string(),
                "k": k,
                "limit": strings(lim.coords()),
                "label": stratum.label.to_string(),
                "stratum": classify_json(&stratum),
            })
        }
        Command::Member { points, at } => {
            let x = Embedding::new(usage(parse_points(&points.points))?)?;
            let q = usage(parse_points(at))?;
            let m = membership(&x, &q)?;
            let (branch, witness) = match &m {
                Membership::Diagonal => ("diagonal".to_string(), Value::Null),
                Membership::Boundary(i) => (format!("boundary {i}"), Value::Null),
                Membership::Orbit(g) => ("orbit".to_string(), json!(g.to_string())),
                Membership::Outside => ("outside".to_string(), Value::Null),
            };
            json!({
                "at": strings(&q),
                "member": m.is_member(),
                "branch": branch,
                "witness": witness,
            })
        }
        Command::Equations(p) => {
            let x = Embedding::new(usage(parse_points(&p.points))?)?;
            let sys = minors_system(&x)?;
            let names = sys.variable_names();
            let row = |k: usize| -> Vec<String> {
                sys.matrix().iter().map(|c| c[k].render(&names)).collect()
            };
            json!({
                "r": x.r(),
                "normalized": strings(x.normalized()),
                "matrix": [row(0), row(1)],
                "minors": sys.render(),
            })
        }
        Command::Verify { points, ff } => {
            let x = Embedding::new(usage(parse_points(&points.points))?)?;
            let report = verify_equations(&x)?;
            let mut counts = Vec::new();
            for &q in ff {
                let c = count_points_ff(&x, q)?;
                counts.push(json!({
                    "q": c.q,
                    "variety": c.variety,
                    "constructive": c.constructive,
                    "agree": c.agree(),
                }));
                if !c.agree() {
                    diagnostics.push(format!("point counts differ at q = {q}"));
                }
            }
            if !report.holds() {
                diagnostics.push("nonzero residual in the minors".into());
            }
            if !diagnostics.is_empty() {
                return Err(Failure::Internal(diagnostics.join("; ")));
            }
            json!({
                "r": x.r(),
                "minors": report.minor_count,
                "equations_verified": report.holds(),
                "point_counts": counts,
            })
        }
        Command::Class {
            r,
            boundary,
            canonical,
            divisor,
            curve,
        } => {
            let r = *r;
            let d = match (boundary, canonical, divisor) {
                (Some(i), _, _) => boundary_class(r, *i)?,
                (_, true, _) => canonical_class(r)?,
                (_, _, Some(v)) => DivisorClass::new(usage(cycles::parse_vector(v))?),
                _ => return Err(Failure::Usage("one of --boundary, --canonical, --divisor is required".into())),
            };
            if d.r() != r {
                return Err(Failure::Usage(format!("divisor has {} coefficients, expected {r}", d.r())));
            }
            let mut out = json!({
                "r": r,
                "class": d,
                "nef": d.is_nef(),
                "ample": d.is_ample(),
                "integral": d.is_integral(),
            });
            if let Some(c) = curve {
                let c = CurveClass::new(usage(cycles::parse_vector(c))?);
                out["curve"] = json!(c);
                out["pairing"] = json!(pair(&d, &c)?.to_string());
            }
            out
        }
        Command::Cone { r, kind, generators } => {
            let cone = match (r, kind, generators) {
                (Some(r), Some(ConeKind::Nef), _) => nef_cone(*r)?,
                (Some(r), Some(ConeKind::Curve), _) => curve_cone(*r)?,
                (None, _, Some(g)) => usage(SimplicialCone::parse(g))?,
                _ => return Err(Failure::Usage("give --r with --kind, or --generators".into())),
            };
            let dual = dual_cone(&cone)?;
            json!({ "cone": cone, "dual": dual })
        }
        Command::Decompose { r, generators, vector } => {
            let cone = match (r, generators) {
                (Some(r), _) => curve_cone(*r)?,
                (None, Some(g)) => usage(SimplicialCone::parse(g))?,
                _ => return Err(Failure::Usage("give --r or --generators".into())),
            };
            let v = usage(cycles::parse_vector(vector))?;
            let d = decompose(&cone, &v)?;
            json!({
                "vector": strings(&v),
                "coefficients": strings(&d.coefficients),
                "inside": d.inside,
            })
        }
        Command::Isomorphic { a, b } => {
            let xa = Embedding::new(usage(parse_points(a))?)?;
            let xb = Embedding::new(usage(parse_points(b))?)?;
            match are_isomorphic(&xa, &xb)? {
                Some(w) => {
                    if !w.verify(&xa, &xb)? {
                        return Err(Failure::Internal("witness does not verify".into()));
                    }
                    json!({
                        "isomorphic": true,
                        "permutation": w.permutation.iter().map(|i| i + 1).collect::<Vec<_>>(),
                        "moebius": w.moebius.to_string(),
                    })
                }
                None => json!({ "isomorphic": false }),
            }
        }
        Command::Form { factors } => {
            let f = usage(BinaryForm::parse(factors))?;
            let x = embedding_from_form(&f)?;
            json!({
                "degree": f.degree(),
                "distinct_factors": f.factors().len(),
                "embedding": embedding_json(&x),
            })
        }
    };
    Ok((payload, diagnostics))
}

fn flip(d: Direction) -> Direction {
    match d {
        Direction::Positive => Direction::Negative,
        Direction::Negative => Direction::Positive,
    }
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            format!("({})", items.iter().map(render_value).collect::<Vec<_>>().join(", "))
        }
        other => other.to_string(),
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, item) in map.iter().filter(|(_, v)| !v.is_null()) {
                match item {
                    Value::Object(_) => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        render_text(item, indent + 1, out);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        for i in items {
                            render_list_item(i, indent + 1, out);
                        }
                    }
                    _ => writeln!(out, "{pad}{k}: {}", render_value(item)).unwrap(),
                }
            }
        }
        other => writeln!(out, "{pad}{}", render_value(other)).unwrap(),
    }
}

fn render_list_item(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(_) => {
            let mut inner = String::new();
            render_text(v, indent + 1, &mut inner);
            let trimmed = inner.trim_start();
            writeln!(out, "{pad}- {}", trimmed.trim_end()).unwrap();
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            writeln!(out, "{pad}-").unwrap();
            for i in items {
                render_list_item(i, indent + 1, out);
            }
        }
        other => writeln!(out, "{pad}- {}", render_value(other)).unwrap(),
    }
}

/// Runs the CLI on `args` (including the program name) and captures its output.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let inv = match Cli::try_parse_from(args) {
        Ok(inv) => inv,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    let (report, code, message) = match execute(&inv.command) {
        Ok((payload, diagnostics)) => (
            Report {
                status: Status::Ok,
                payload,
                diagnostics,
            },
            0,
            None,
        ),
        Err(f) => (
            Report {
                status: Status::Error,
                payload: Value::Null,
                diagnostics: vec![f.message().to_string()],
            },
            f.code(),
            Some(f.message().to_string()),
        ),
    };
    let json_text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    let mut stderr = String::new();
    if let Some(path) = &inv.output.out {
        if let Err(e) = std::fs::write(path, &json_text) {
            stderr.push_str(&format!("error: cannot write {}: {e}\n", path.display()));
            return Outcome { stdout: String::new(), stderr, code: 1 };
        }
    }
    let stdout = if inv.output.json {
        json_text
    } else if let Some(m) = &message {
        stderr.push_str(&format!("error: {m}\n"));
        String::new()
    } else {
        let mut text = String::new();
        render_text(&report.payload, 0, &mut text);
        for d in &report.diagnostics {
            writeln!(text, "note: {d}").unwrap();
        }
        text
    };
    Outcome { stdout, stderr, code }
}
