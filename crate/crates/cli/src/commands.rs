use num_rational::BigRational;
use serde_json::{json, Value};

use sdgqm::lie::{LieError, PhysicalConstants};
use sdgqm::linalg::{JetVector, SmoothComplex};
use sdgqm::logic::{check_axioms, check_validity, make_algebra, parse_formula, AlgebraKind, HeytingAlgebra, LogicError};
use sdgqm::quantum::{born, eigentable, evolve, is_physical, is_zero, QuantumError, StateVector};
use sdgqm::scalar::{parse_rational, render, Scalar};
use sdgqm::syntax::SyntaxError;
use sdgqm::weil::{
    apart, decimal_expand, derivative, eq, integrate, kl_decompose, less_than, parse_expr, AlgebraSpec, Generator,
    Jet, WeilError,
};

use crate::args::{BackendArg, Command, ConstantsArgs, Demo, Format, Logic};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain { name: &'static str, message: String },
}

impl From<WeilError> for CliError {
    fn from(e: WeilError) -> Self {
        let root = e.root();
        CliError::Domain { name: root.name(), message: root.to_string() }
    }
}

impl From<SyntaxError> for CliError {
    fn from(e: SyntaxError) -> Self {
        CliError::Domain { name: "SyntaxError", message: e.to_string() }
    }
}

impl From<LogicError> for CliError {
    fn from(e: LogicError) -> Self {
        CliError::Domain { name: e.name(), message: e.to_string() }
    }
}

impl From<QuantumError> for CliError {
    fn from(e: QuantumError) -> Self {
        CliError::Domain { name: e.name(), message: e.to_string() }
    }
}

impl From<LieError> for CliError {
    fn from(e: LieError) -> Self {
        CliError::Domain { name: e.name(), message: e.to_string() }
    }
}

type Outcome = Result<String, CliError>;

pub fn run(command: &Command, backend: Option<BackendArg>, format: Format) -> Outcome {
    match command {
        Command::Demo(Demo::Eigen { constants }) => {
            dispatch(backend, || demo_eigen::<BigRational>(constants, format), || demo_eigen::<f64>(constants, format))
        }
        Command::Demo(Demo::Evolve { constants, state, t, steps }) => {
            if backend == Some(BackendArg::Exact) {
                return Err(CliError::Domain {
                    name: "UnsupportedExact",
                    message: "finite-time evolution needs the approx backend".into(),
                });
            }
            demo_evolve(constants, state, t, *steps, format)
        }
        Command::Demo(Demo::Infinitesimal) => {
            dispatch(backend, || demo_infinitesimal::<BigRational>(format), || demo_infinitesimal::<f64>(format))
        }
        Command::Diff { expr, at, order } => {
            dispatch(backend, || diff::<BigRational>(expr, at, *order, format), || diff::<f64>(expr, at, *order, format))
        }
        Command::Integrate { expr, to } => {
            dispatch(backend, || antiderivative::<BigRational>(expr, to, format), || antiderivative::<f64>(expr, to, format))
        }
        Command::Kl { expr } => dispatch(backend, || kl::<BigRational>(expr, format), || kl::<f64>(expr, format)),
        Command::Decimal { expr, places } => {
            dispatch(backend, || decimal::<BigRational>(expr, *places, format), || decimal::<f64>(expr, *places, format))
        }
        Command::Logic(Logic::Check { algebra, formula }) => logic_check(algebra, formula, format),
        Command::Logic(Logic::Axioms { algebra }) => logic_axioms(algebra, format),
    }
}

/// Runs on the requested backend; without one, tries exact arithmetic and
/// falls back to floating point when the exact backend cannot represent a
/// result.
fn dispatch(backend: Option<BackendArg>, exact: impl FnOnce() -> Outcome, approx: impl FnOnce() -> Outcome) -> Outcome {
    match backend {
        Some(BackendArg::Exact) => exact(),
        Some(BackendArg::Approx) => approx(),
        None => match exact() {
            Err(CliError::Domain { name: "UnsupportedExact", .. }) => approx(),
            other => other,
        },
    }
}

fn number<S: Scalar>(text: &str, flag: &str) -> Result<S, CliError> {
    parse_rational(text)
        .map(|q| S::from_rational(&q))
        .ok_or_else(|| CliError::Usage(format!("--{flag}: `{text}` is not a number")))
}

fn unsupported(format: Format, what: &str) -> CliError {
    let name = match format {
        Format::Text => "text",
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Md => "md",
    };
    CliError::Usage(format!("--format {name} is not available for {what}"))
}

fn scalar_output(format: Format, what: &str, text: String, doc: Value) -> Outcome {
    match format {
        Format::Text => Ok(text),
        Format::Json => Ok(pretty(&doc)),
        _ => Err(unsupported(format, what)),
    }
}

fn pretty(doc: &Value) -> String {
    serde_json::to_string_pretty(doc).expect("serializable")
}

fn diff<S: Scalar>(expr: &str, at: &str, order: u32, format: Format) -> Outcome {
    let f = parse_expr(expr)?;
    let x0: S = number(at, "at")?;
    let value = render(derivative(&f, &x0, order)?.value());
    scalar_output(format, "diff", value.clone(), json!({ "expr": expr, "at": render(&x0), "order": order, "value": value }))
}

fn antiderivative<S: Scalar>(expr: &str, to: &str, format: Format) -> Outcome {
    let f = parse_expr(expr)?;
    let upper: S = number(to, "to")?;
    let reals = AlgebraSpec::reals(S::BACKEND);
    let value = render(integrate(&f, &Jet::constant(&reals, upper.clone()))?.std_part());
    scalar_output(format, "integrate", value.clone(), json!({ "expr": expr, "to": render(&upper), "value": value }))
}

fn kl<S: Scalar>(expr: &str, format: Format) -> Outcome {
    let f = parse_expr(expr)?;
    let reals = AlgebraSpec::reals(S::BACKEND);
    let (a, b) = kl_decompose::<S>(&reals, &f)?;
    let (a, b) = (render(a.std_part()), render(b.std_part()));
    scalar_output(format, "kl", format!("({a}, {b})"), json!({ "expr": expr, "f0": a, "b": b }))
}

fn decimal<S: Scalar>(expr: &str, places: usize, format: Format) -> Outcome {
    let f = parse_expr(expr)?;
    let generators: Vec<Generator> = f.free_variables().into_iter().map(|v| Generator::new(v, 2)).collect();
    let alg = if generators.is_empty() {
        AlgebraSpec::reals(S::BACKEND)
    } else {
        AlgebraSpec::new(generators, &[], S::BACKEND)?
    };
    let value = f.eval::<S>(&alg, &|name| Jet::generator(&alg, name).ok())?;
    let digits = decimal_expand(&value, places)?;
    scalar_output(format, "decimal", digits.clone(), json!({ "expr": expr, "places": places, "value": digits }))
}

fn constants<S: Scalar>(args: &ConstantsArgs) -> Result<PhysicalConstants<S>, CliError> {
    Ok(PhysicalConstants::new(
        number(&args.hbar, "hbar")?,
        number(&args.alpha, "alpha")?,
        number(&args.e1, "e1")?,
        number(&args.e2, "e2")?,
    )?)
}

fn demo_eigen<S: Scalar>(args: &ConstantsArgs, format: Format) -> Outcome {
    let table = eigentable(&constants::<S>(args)?)?;
    Ok(match format {
        Format::Text | Format::Md => table.to_markdown(),
        Format::Json => table.to_json(),
        Format::Csv => table.to_csv(),
    })
}

const PRODUCT_LABELS: [&str; 4] = ["uu", "ud", "du", "dd"];

fn initial_state(name: &str) -> Result<[i64; 4], CliError> {
    Ok(match name {
        "uu" => [1, 0, 0, 0],
        "ud" => [0, 1, 0, 0],
        "du" => [0, 0, 1, 0],
        "dd" => [0, 0, 0, 1],
        "singlet" => [0, 1, -1, 0],
        "triplet" => [0, 1, 1, 0],
        other => {
            return Err(CliError::Usage(format!(
                "--state: `{other}` is not one of uu, ud, du, dd, singlet, triplet"
            )))
        }
    })
}

fn demo_evolve(args: &ConstantsArgs, state: &str, t: &str, steps: usize, format: Format) -> Outcome {
    let c = constants::<f64>(args)?;
    let t_end: f64 = number(t, "t")?;
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let alg = AlgebraSpec::reals(sdgqm::Backend::Approx);
    let psi0 = StateVector::new(JetVector::from_i64s(&alg, &initial_state(state)?));
    let basis: Vec<_> = (0..4).map(|k| StateVector::new(JetVector::unit(&alg, 4, k))).collect();
    let mut rows = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = t_end * k as f64 / steps as f64;
        let psi = evolve(&psi0, &c, &Jet::constant(&alg, t))?;
        let p: Vec<f64> = born(&psi, &basis)?.iter().map(|x| x.to_f64()).collect();
        rows.push((t, p));
    }
    let fixed = |x: f64| format!("{x:.10}");
    match format {
        Format::Json => {
            let doc: Vec<Value> = rows
                .iter()
                .map(|(t, p)| {
                    let probs: serde_json::Map<String, Value> =
                        PRODUCT_LABELS.iter().zip(p).map(|(l, x)| (l.to_string(), json!(x))).collect();
                    json!({ "t": t, "probabilities": probs })
                })
                .collect();
            Ok(pretty(&Value::Array(doc)))
        }
        Format::Csv => {
            let mut out = String::from("t,p_uu,p_ud,p_du,p_dd\n");
            for (t, p) in &rows {
                let cells: Vec<String> = std::iter::once(*t).chain(p.iter().copied()).map(fixed).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            Ok(out)
        }
        Format::Text | Format::Md => {
            let header = ["t", "P(uu)", "P(ud)", "P(du)", "P(dd)"].map(String::from).to_vec();
            let body = rows
                .iter()
                .map(|(t, p)| std::iter::once(*t).chain(p.iter().copied()).map(fixed).collect())
                .collect::<Vec<Vec<String>>>();
            Ok(markdown_table(&header, &body))
        }
    }
}

fn markdown_table(header: &[String], body: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|i| body.iter().map(|r| r[i].chars().count()).chain([header[i].chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |cells: &[String]| {
        let padded: Vec<String> =
            cells.iter().zip(&widths).map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        format!("| {} |\n", padded.join(" | "))
    };
    let mut out = line(header);
    out.push_str(&line(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>()));
    for row in body {
        out.push_str(&line(row));
    }
    out
}

fn demo_infinitesimal<S: Scalar>(format: Format) -> Outcome {
    let alg = AlgebraSpec::square_zero("e", S::BACKEND)?;
    let e = Jet::<S>::generator(&alg, "e")?;
    let zero = Jet::zero(&alg);
    let bound = |n: i64, d: i64| Jet::constant(&alg, S::from_ratio(n, d));
    let small_up = StateVector::new(JetVector::unit(&alg, 2, 0).scale(&SmoothComplex::new(e.clone(), zero.clone())?));
    let verdicts = [
        ("eq(e, 0)", eq(&e, &zero)?),
        ("apart(e, 0)", apart(&e, &zero)?),
        ("eq(e^2, 0)", eq(&(&e * &e), &zero)?),
        ("less_than(e, 1/10)", less_than(&e, &bound(1, 10))?),
        ("less_than(e, 1/1000)", less_than(&e, &bound(1, 1000))?),
        ("less_than(-e, 1/1000)", less_than(&(-&e), &bound(1, 1000))?),
        ("less_than(0, e)", less_than(&zero, &e)?),
        ("is_physical(e|up>)", is_physical(&small_up)?),
        ("is_zero(e|up>)", is_zero(&small_up)),
    ];
    match format {
        Format::Text => {
            let width = verdicts.iter().map(|(s, _)| s.len()).max().unwrap_or(0);
            Ok(verdicts.iter().map(|(s, v)| format!("{s:<width$}  {v}\n")).collect())
        }
        Format::Json => Ok(pretty(&Value::Array(
            verdicts.iter().map(|(s, v)| json!({ "statement": s, "verdict": v.to_string() })).collect(),
        ))),
        _ => Err(unsupported(format, "demo infinitesimal")),
    }
}

fn algebra(spec: &str) -> Result<HeytingAlgebra, CliError> {
    let kind = match spec {
        "bool" | "boolean" => AlgebraKind::Boolean,
        _ => match spec.strip_prefix("chain").map(str::parse::<usize>) {
            Some(Ok(n)) => AlgebraKind::Chain(n),
            _ => {
                let text = std::fs::read_to_string(spec).map_err(|e| {
                    CliError::Usage(format!("--algebra: `{spec}` is neither chainN, bool, nor a readable file ({e})"))
                })?;
                AlgebraKind::Custom(text)
            }
        },
    };
    Ok(make_algebra(&kind)?)
}

fn logic_check(algebra_spec: &str, formula: &str, format: Format) -> Outcome {
    let h = algebra(algebra_spec)?;
    let phi = parse_formula(formula)?;
    let counterexample = check_validity(&phi, &h);
    let text = match &counterexample {
        None => "valid".to_string(),
        Some(ce) => format!("not valid; counterexample {ce}"),
    };
    let ce_doc = counterexample.map(|ce| {
        Value::Object(ce.0.into_iter().map(|(var, value)| (var, Value::String(value))).collect())
    });
    scalar_output(
        format,
        "logic check",
        text,
        json!({ "formula": phi.to_string(), "valid": ce_doc.is_none(), "counterexample": ce_doc }),
    )
}

fn logic_axioms(algebra_spec: &str, format: Format) -> Outcome {
    let report = check_axioms(&algebra(algebra_spec)?);
    scalar_output(
        format,
        "logic axioms",
        report.to_string(),
        serde_json::to_value(&report).expect("serializable"),
    )
}
