use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use cornerlab::examples::{not_closed_sequence, pure_integer_example, NOT_CLOSED_CAP};
use cornerlab::exactlp::DEFAULT_NODE_CAP;
use cornerlab::gjfun::{check_liftable, check_minimal_pure, extract_theta, slope_lift, ShiftedFunction};
use cornerlab::hull::{CornerPolyhedron, EnumCaps, Inequality};
use cornerlab::io::{parse_function, parse_lift_data, parse_point, parse_pure_instance, parse_rational_point};
use cornerlab::lift::{facet_dominate, separate_from_closure, validity_oracle, Separation};
use cornerlab::numctx::Tag;
use cornerlab::par::Exec;
use cornerlab::rational::{fmt_q, parse_q};
use cornerlab::selftest::{run_all, run_criterion};
use cornerlab::{Error, Q};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cornerlab", version, about = "Exact corner polyhedra and cut-generating function checks")]
struct Cli {
    /// Emit JSON (default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit indented plain text.
    #[arg(long, global = true)]
    text: bool,
    /// Omit timing so reports are byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Corner polyhedron of a pure instance.
    #[command(subcommand)]
    Corner(CornerCmd),
    /// One-dimensional piecewise-linear functions.
    #[command(subcommand, name = "fn")]
    Function(FnCmd),
    /// Trivial lifting, validity and separation.
    #[command(subcommand)]
    Lift(LiftCmd),
    /// Worked pathologies.
    #[command(subcommand)]
    Examples(ExampleCmd),
    /// Run the acceptance checks.
    Selftest {
        /// Run a single criterion (1-12).
        #[arg(long)]
        only: Option<usize>,
    },
}

#[derive(Args)]
struct Caps {
    /// Degree cap for the enumeration.
    #[arg(long, env = "CORNERLAB_CAP", default_value_t = EnumCaps::default().max_degree)]
    cap: u64,
    /// Node cap for branch and bound.
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    node_cap: u64,
}

impl Caps {
    fn enum_caps(&self) -> EnumCaps {
        EnumCaps { max_degree: self.cap, ..EnumCaps::default() }
    }
}

#[derive(Subcommand)]
enum CornerCmd {
    Compute {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        caps: Caps,
        /// Also enumerate facets.
        #[arg(long)]
        facets: bool,
    },
}

#[derive(Subcommand)]
enum FnCmd {
    /// Minimality and liftability for right-hand side `b`.
    Check {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        b: String,
    },
    /// The slope lift ψ.
    LiftSlope {
        #[arg(long)]
        function: PathBuf,
    },
    /// Recover the additive shift by scanning π(ka)/k.
    ExtractTheta {
        #[arg(long)]
        function: PathBuf,
        #[arg(long = "K", default_value_t = 1000)]
        k: u64,
    },
}

#[derive(Subcommand)]
enum LiftCmd {
    /// ψ and π at a point.
    Eval {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        point: String,
        #[command(flatten)]
        caps: Caps,
    },
    /// Validity of (h, d, α) over the finite face.
    Validate {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "1")]
        alpha: String,
        #[command(flatten)]
        caps: Caps,
    },
    /// Lift a facet `d·y ≥ rhs` to a dominating valid tuple.
    FacetDominate {
        #[arg(long)]
        instance: PathBuf,
        /// Coefficients `d`, e.g. "[1/2, 1]".
        #[arg(long)]
        facet: String,
        #[arg(long, default_value = "1")]
        rhs: String,
        #[command(flatten)]
        caps: Caps,
    },
    /// Separate a point from the closed convex hull.
    Separate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        point: String,
        #[command(flatten)]
        caps: Caps,
    },
}

#[derive(Subcommand)]
enum ExampleCmd {
    NotClosed {
        #[arg(long, default_value = "sqrt2")]
        omega: String,
        #[arg(long, default_value = "1/10")]
        eps: String,
        #[arg(long, default_value = "1/2")]
        b: String,
        #[arg(long, default_value_t = NOT_CLOSED_CAP)]
        cap: u64,
    },
    PureInteger {
        #[arg(long, default_value = "1/2")]
        b: String,
        #[arg(long, default_value = "sqrt2")]
        omega: String,
    },
}

/// A report and the exit code it implies.
struct Outcome {
    code: u8,
    body: Value,
}

fn ok(body: Value) -> Outcome {
    Outcome { code: 0, body }
}

fn verdict(good: bool, body: Value) -> Outcome {
    Outcome { code: if good { 0 } else { 1 }, body }
}

fn read(path: &Path) -> cornerlab::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

fn qs(v: &[Q]) -> Value {
    json!(v.iter().map(fmt_q).collect::<Vec<_>>())
}

fn corner_report(cp: &CornerPolyhedron, facets: bool) -> cornerlab::Result<Value> {
    let mut body = json!({
        "E": cp.points.iter().map(|p| &p.0).collect::<Vec<_>>(),
        "rays": cp.rays.iter().map(|p| &p.0).collect::<Vec<_>>(),
        "aff": {"Theta": to_json(&cp.aff)["theta"], "d": to_json(&cp.aff)["d"]},
        "complete": cp.is_complete(),
        "completeness": to_json(&cp.completeness),
    });
    if cp.is_complete() && !cp.is_empty() {
        let rec = cp.recession_cone()?;
        body["rec"] = json!({
            "equations": rec.equations.iter().map(|r| qs(r)).collect::<Vec<_>>(),
            "generators": rec.generators.iter().map(|g| &g.0).collect::<Vec<_>>(),
        });
        body["rationality"] = to_json(&cp.rationality_report()?);
        if facets {
            body["facets"] = to_json(&cp.facets()?);
        }
    }
    Ok(body)
}

fn function_of(path: &Path) -> cornerlab::Result<(ShiftedFunction, cornerlab::numctx::NumberContext)> {
    parse_function(&read(path)?)
}

fn run(cmd: &Command, exec: Exec, timing: bool) -> cornerlab::Result<Outcome> {
    match cmd {
        Command::Corner(CornerCmd::Compute { instance, caps, facets }) => {
            let inst = parse_pure_instance(&read(instance)?)?;
            let cp = CornerPolyhedron::compute(&inst, caps.enum_caps(), exec)?;
            let body = corner_report(&cp, *facets)?;
            Ok(Outcome { code: if cp.is_complete() { 0 } else { 3 }, body })
        }
        Command::Function(FnCmd::Check { function, b }) => {
            let (f, _) = function_of(function)?;
            let b = parse_q(b)?;
            let minimal = check_minimal_pure(&f.base, &b)?;
            let liftable = if minimal.minimal { Some(check_liftable(&f.base, &b)?) } else { None };
            Ok(verdict(
                minimal.minimal,
                json!({
                    "minimal": minimal.minimal,
                    "report": to_json(&minimal),
                    "liftable": liftable.as_ref().map(|l| l.liftable),
                    "psi": liftable.as_ref().and_then(|l| l.psi.as_ref()).map(to_json),
                }),
            ))
        }
        Command::Function(FnCmd::LiftSlope { function }) => {
            let (f, _) = function_of(function)?;
            let psi = slope_lift(&f.base);
            Ok(ok(json!({"psi": to_json(&psi), "sublinear": psi.is_sublinear(), "lipschitz": fmt_q(&psi.lipschitz())})))
        }
        Command::Function(FnCmd::ExtractTheta { function, k }) => {
            let (f, ctx) = function_of(function)?;
            let f = ShiftedFunction::new(f.base, f.shift)?;
            let r = extract_theta(&ctx, &f, *k)?;
            Ok(verdict(r.ok(), to_json(&r)))
        }
        Command::Lift(LiftCmd::Eval { data, point, caps }) => {
            let ld = parse_lift_data(&read(data)?)?;
            let x = parse_point(point)?;
            let psi = ld.psi(&x).map(|v| fmt_q(&v)).ok();
            let pi = ld.pi(&x, caps.node_cap)?;
            Ok(ok(json!({"point": x.to_string(), "psi": psi, "pi": fmt_q(&pi)})))
        }
        Command::Lift(LiftCmd::Validate { data, alpha, caps }) => {
            let ld = parse_lift_data(&read(data)?)?;
            let v = validity_oracle(&ld, &parse_q(alpha)?, caps.node_cap)?;
            Ok(verdict(v.valid, to_json(&v)))
        }
        Command::Lift(LiftCmd::FacetDominate { instance, facet, rhs, caps }) => {
            let inst = parse_pure_instance(&read(instance)?)?;
            let cp = CornerPolyhedron::compute(&inst, caps.enum_caps(), exec)?;
            let ineq = Inequality { a: parse_rational_point(facet)?, a0: parse_q(rhs)? };
            let fd = facet_dominate(&cp, &ineq, None, caps.node_cap)?;
            Ok(verdict(fd.validity.valid && fd.dominated, to_json(&fd)))
        }
        Command::Lift(LiftCmd::Separate { instance, point, caps }) => {
            let inst = parse_pure_instance(&read(instance)?)?;
            let cp = CornerPolyhedron::compute(&inst, caps.enum_caps(), exec)?;
            let y = parse_rational_point(point)?;
            let s = separate_from_closure(&cp, &y)?;
            Ok(verdict(matches!(s, Separation::Member { .. }), to_json(&s)))
        }
        Command::Examples(ExampleCmd::NotClosed { omega, eps, b, cap }) => {
            let w = not_closed_sequence(&Tag::from_symbol(omega)?, &parse_q(b)?, &parse_q(eps)?, *cap)?;
            Ok(verdict(w.verified, to_json(&w)))
        }
        Command::Examples(ExampleCmd::PureInteger { b, omega }) => {
            let r = pure_integer_example(&parse_q(b)?, &Tag::from_symbol(omega)?, EnumCaps::default(), exec)?;
            Ok(verdict(r.verified, to_json(&r)))
        }
        Command::Selftest { only } => {
            let results = match only {
                Some(id) if (1..=cornerlab::selftest::CRITERIA).contains(id) => vec![run_criterion(*id, exec, timing)],
                Some(id) => return Err(Error::Invalid(format!("no criterion {id}"))),
                None => run_all(exec, timing),
            };
            let all = results.iter().all(|r| r.passed);
            Ok(verdict(all, json!({"passed": all, "criteria": to_json(&results)})))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_cap() {
        3
    } else if matches!(e, Error::Certificate(_)) {
        1
    } else {
        2
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                    Value::Array(a) if a.iter().any(|e| e.is_object()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                out.push_str(&format!("{pad}-\n"));
                render_text(x, indent + 1, out);
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn command_name(argv: &[String]) -> String {
    argv.iter().skip(1).filter(|a| !a.starts_with('-')).take(2).cloned().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let timing = !cli.no_timing;
    let start = Instant::now();
    let (code, mut report) = match run(&cli.command, exec, timing) {
        Ok(o) => (o.code, json!({"status": if o.code == 0 { "ok" } else if o.code == 3 { "cap-exceeded" } else { "negative" }, "result": o.body})),
        Err(e) => {
            let status = if e.is_cap() { "cap-exceeded" } else { "error" };
            (exit_code(&e), json!({"status": status, "error": e.to_string()}))
        }
    };
    report["command"] = json!(command_name(&argv));
    if timing {
        report["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    if cli.text {
        let mut out = String::new();
        render_text(&report, 0, &mut out);
        let _ = write!(std::io::stdout(), "{out}");
    } else {
        let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&report).expect("json"));
    }
    ExitCode::from(code)
}
