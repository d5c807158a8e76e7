//! Propositional intuitionistic logic over finite Heyting algebras.

mod formula;
mod heyting;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use formula::{parse_formula, Formula};
pub use heyting::{make_algebra, AlgebraKind, HeytingAlgebra, LatticeJson};

use crate::syntax::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("variable `{0}` has no assigned value")]
    UnboundVariable(String),
    #[error("element `{0}` is not in the algebra")]
    UnknownElement(String),
    #[error("meet does not distribute over join at a={a}, b={b}, c={c}")]
    NotDistributive { a: String, b: String, c: String },
    #[error("no relative pseudo-complement for {a} -> {b}")]
    NoImplication { a: String, b: String },
    #[error("{0}")]
    MalformedInput(String),
}

impl LogicError {
    pub fn name(&self) -> &'static str {
        match self {
            LogicError::Syntax(_) => "SyntaxError",
            LogicError::UnboundVariable(_) => "UnboundVariable",
            LogicError::UnknownElement(_) => "UnknownElement",
            LogicError::NotDistributive { .. } => "NotDistributive",
            LogicError::NoImplication { .. } => "NoImplication",
            LogicError::MalformedInput(_) => "MalformedInput",
        }
    }
}

/// Element assigned to each variable, by index into the algebra.
pub type Assignment = HashMap<String, usize>;

pub fn evaluate(phi: &Formula, h: &HeytingAlgebra, assignment: &Assignment) -> Result<usize, LogicError> {
    Ok(match phi {
        Formula::Top => h.top(),
        Formula::Bottom => h.bottom(),
        Formula::Var(v) => *assignment
            .get(v)
            .ok_or_else(|| LogicError::UnboundVariable(v.clone()))?,
        Formula::Not(a) => h.not(evaluate(a, h, assignment)?),
        Formula::And(a, b) => h.meet(evaluate(a, h, assignment)?, evaluate(b, h, assignment)?),
        Formula::Or(a, b) => h.join(evaluate(a, h, assignment)?, evaluate(b, h, assignment)?),
        Formula::Implies(a, b) => h.implies(evaluate(a, h, assignment)?, evaluate(b, h, assignment)?),
    })
}

/// Like [`evaluate`], with the assignment given by element names.
pub fn evaluate_named(
    phi: &Formula,
    h: &HeytingAlgebra,
    assignment: &[(&str, &str)],
) -> Result<usize, LogicError> {
    let mut map = Assignment::new();
    for (var, elem) in assignment {
        let idx = h.element(elem).ok_or_else(|| LogicError::UnknownElement(elem.to_string()))?;
        map.insert(var.to_string(), idx);
    }
    evaluate(phi, h, &map)
}

/// Variable/element pairs, in variable order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterExample(pub Vec<(String, String)>);

impl fmt::Display for CounterExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(v, e)| format!("{v}={e}")).collect();
        f.write_str(&parts.join(", "))
    }
}

/// Searches every assignment of `phi`'s variables in lexicographic order and
/// returns the first one not evaluating to top, or `None` if `phi` is valid.
pub fn check_validity(phi: &Formula, h: &HeytingAlgebra) -> Option<CounterExample> {
    let vars = phi.variables();
    let n = h.len();
    let mut values = vec![0usize; vars.len()];
    loop {
        let assignment: Assignment = vars.iter().cloned().zip(values.iter().copied()).collect();
        let value = evaluate(phi, h, &assignment).expect("all variables assigned");
        if value != h.top() {
            return Some(CounterExample(
                vars.iter().zip(&values).map(|(v, &x)| (v.clone(), h.name(x).to_string())).collect(),
            ));
        }
        // odometer, last variable fastest
        let mut k = vars.len();
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            values[k] += 1;
            if values[k] < n {
                break;
            }
            values[k] = 0;
        }
    }
}

/// The eleven intuitionistic axiom schemas, with `a`, `b`, `c` as the
/// schematic letters.
pub const AXIOM_SCHEMAS: [&str; 11] = [
    "a -> (a & a)",
    "(a & b) -> (b & a)",
    "(a -> b) -> ((a & c) -> (b & c))",
    "((a -> b) & (b -> c)) -> (a -> c)",
    "b -> (a -> b)",
    "(a & (a -> b)) -> b",
    "a -> (a | b)",
    "(a | b) -> (b | a)",
    "((a -> c) & (b -> c)) -> ((a | b) -> c)",
    "~a -> (a -> b)",
    "((a -> b) & (a -> ~b)) -> ~a",
];

pub const EXCLUDED_MIDDLE: &str = "a | ~a";
pub const DOUBLE_NEGATION_ELIMINATION: &str = "~~a -> a";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemaCheck {
    pub name: String,
    pub formula: String,
    pub counterexample: Option<CounterExample>,
}

impl SchemaCheck {
    pub fn is_valid(&self) -> bool {
        self.counterexample.is_none()
    }

    fn run(name: String, text: &str, h: &HeytingAlgebra) -> Self {
        let phi = parse_formula(text).expect("built-in schema parses");
        SchemaCheck { name, formula: phi.to_string(), counterexample: check_validity(&phi, h) }
    }
}

impl fmt::Display for SchemaCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "{:<6} {:<44} valid", self.name, self.formula),
            Some(ce) => write!(f, "{:<6} {:<44} not valid; counterexample {ce}", self.name, self.formula),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub algebra: Vec<String>,
    pub schemas: Vec<SchemaCheck>,
    pub excluded_middle: SchemaCheck,
    pub double_negation: SchemaCheck,
}

impl AxiomReport {
    pub fn all_schemas_valid(&self) -> bool {
        self.schemas.iter().all(SchemaCheck::is_valid)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algebra {{{}}}", self.algebra.join(", "))?;
        for s in &self.schemas {
            writeln!(f, "{s}")?;
        }
        writeln!(f, "{}", self.excluded_middle)?;
        write!(f, "{}", self.double_negation)
    }
}

/// Exhaustively checks the eleven schemas, excluded middle and double
/// negation elimination on `h`.
pub fn check_axioms(h: &HeytingAlgebra) -> AxiomReport {
    AxiomReport {
        algebra: h.elements().to_vec(),
        schemas: AXIOM_SCHEMAS
            .iter()
            .enumerate()
            .map(|(i, s)| SchemaCheck::run(format!("IL{}", i + 1), s, h))
            .collect(),
        excluded_middle: SchemaCheck::run("LEM".into(), EXCLUDED_MIDDLE, h),
        double_negation: SchemaCheck::run("DNE".into(), DOUBLE_NEGATION_ELIMINATION, h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> HeytingAlgebra {
        HeytingAlgebra::chain(n).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let h = chain(3);
        let m = h.element("m").unwrap();
        let lem = parse_formula("p | ~p").unwrap();
        assert_eq!(evaluate_named(&lem, &h, &[("p", "m")]).unwrap(), m);
        let dne = parse_formula("~~p -> p").unwrap();
        assert_eq!(evaluate_named(&dne, &h, &[("p", "m")]).unwrap(), m);
    }

    #[test]
    fn unbound_variable() {
        let h = chain(3);
        let phi = parse_formula("p & q").unwrap();
        assert_eq!(
            evaluate_named(&phi, &h, &[("p", "1")]),
            Err(LogicError::UnboundVariable("q".into()))
        );
        assert_eq!(
            evaluate_named(&phi, &h, &[("p", "z")]),
            Err(LogicError::UnknownElement("z".into()))
        );
    }

    #[test]
    fn chain3_report() {
        let report = check_axioms(&chain(3));
        assert!(report.all_schemas_valid());
        let at_m = Some(CounterExample(vec![("a".into(), "m".into())]));
        assert_eq!(report.excluded_middle.counterexample, at_m);
        assert_eq!(report.double_negation.counterexample, at_m);
    }

    #[test]
    fn boolean_report() {
        let report = check_axioms(&HeytingAlgebra::boolean());
        assert!(report.all_schemas_valid());
        assert!(report.excluded_middle.is_valid());
        assert!(report.double_negation.is_valid());
    }

    #[test]
    fn chain4_report() {
        let report = check_axioms(&chain(4));
        assert!(report.all_schemas_valid());
        assert!(!report.excluded_middle.is_valid());
    }

    #[test]
    fn validity_counterexample_text() {
        let h = chain(3);
        let ce = check_validity(&parse_formula("p | ~p").unwrap(), &h).unwrap();
        assert_eq!(ce.to_string(), "p=m");
        assert!(check_validity(&parse_formula("p -> (q -> p)").unwrap(), &h).is_none());
        assert!(check_validity(&parse_formula("1").unwrap(), &h).is_none());
        assert_eq!(check_validity(&parse_formula("0").unwrap(), &h), Some(CounterExample(vec![])));
    }
}
