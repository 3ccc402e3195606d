//! Term triples `(r, s, t)` and the two conditions that force a finite
//! groupoid to have an idempotent:
//!
//! ```text
//! s(x,y) = s(x,z) = r(x)  ->  s(x, y·z) = r(x)
//! s(x,y) · s(x,z)  =  s(x, t(x,y,z))
//! ```
//!
//! where `y` has a right-most occurrence in `s`. Both are checked by
//! enumerating assignments; when they hold, an idempotent is read off a
//! minimal subuniverse of the product operation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Assignment, Satisfaction};
use crate::subalgebra::minimal_subuniverses;
use crate::term::{
    parse_term, Identity, OpSymbol, ParseError, QuasiIdentity, Signature, Term, Var,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EllisSchema {
    /// One-parameter term in `x`.
    pub r: Term,
    /// Two-parameter term in `x, y`, right-most in `y`.
    pub s: Term,
    /// Three-parameter term in `x, y, z`; `None` when no second condition is claimed.
    pub t: Option<Term>,
    pub product: OpSymbol,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SchemaViolation {
    /// `r` must use exactly the variable `x`.
    RVariables(String),
    /// `s` may only use `x` and `y`.
    SVariables(String),
    /// `t` may only use `x`, `y` and `z`.
    TVariables(String),
    /// `y` does not occur right-most in `s`.
    NotRightmost(String),
}

impl fmt::Display for SchemaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemaViolation::RVariables(r) => write!(f, "r = {r} must use exactly the variable x"),
            SchemaViolation::SVariables(s) => write!(f, "s = {s} may only use x and y"),
            SchemaViolation::TVariables(t) => write!(f, "t = {t} may only use x, y and z"),
            SchemaViolation::NotRightmost(s) => write!(f, "y does not occur right-most in s = {s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("invalid schema: {}", join(.0))]
    Invalid(Vec<SchemaViolation>),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("hypothesis fails: condition {condition} is falsified at {witness}")]
    HypothesisFails { condition: u8, witness: Assignment },
    #[error("hypothesis not established: the schema claims no second condition")]
    ConditionTwoNotClaimed,
    #[error("both conditions hold but no minimal subuniverse contains an idempotent")]
    NoIdempotent,
    #[error("bad schema text: {0}")]
    Syntax(String),
    #[error("unknown builtin schema `{0}`")]
    UnknownBuiltin(String),
}

fn join(vs: &[SchemaViolation]) -> String {
    vs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Outcome of checking the second condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConditionStatus {
    Holds,
    Fails(Assignment),
    /// The schema has no `t`.
    NotClaimed,
}

impl ConditionStatus {
    pub fn holds(&self) -> bool {
        matches!(self, ConditionStatus::Holds)
    }
}

impl From<Satisfaction> for ConditionStatus {
    fn from(s: Satisfaction) -> Self {
        match s {
            Satisfaction::Holds => ConditionStatus::Holds,
            Satisfaction::Fails(w) => ConditionStatus::Fails(w),
        }
    }
}

fn x() -> Var {
    crate::term::var('x')
}
fn y() -> Var {
    crate::term::var('y')
}
fn z() -> Var {
    crate::term::var('z')
}

fn render_vars(vs: &BTreeSet<Var>) -> String {
    vs.iter().map(|v| v.name()).collect()
}

impl EllisSchema {
    pub fn new(r: Term, s: Term, t: Option<Term>) -> Self {
        EllisSchema {
            r,
            s,
            t,
            product: OpSymbol::Mul,
        }
    }

    pub fn validate(&self) -> Result<(), Vec<SchemaViolation>> {
        let mut violations = Vec::new();
        if self.r.variables() != BTreeSet::from([x()]) {
            violations.push(SchemaViolation::RVariables(self.r.to_string()));
        }
        let s_vars = self.s.variables();
        if !s_vars.is_subset(&BTreeSet::from([x(), y()])) {
            violations.push(SchemaViolation::SVariables(format!(
                "{} (uses {})",
                self.s,
                render_vars(&s_vars)
            )));
        }
        if !self.s.is_rightmost(y()) {
            violations.push(SchemaViolation::NotRightmost(self.s.to_string()));
        }
        if let Some(t) = &self.t {
            let t_vars = t.variables();
            if !t_vars.is_subset(&BTreeSet::from([x(), y(), z()])) {
                violations.push(SchemaViolation::TVariables(format!(
                    "{t} (uses {})",
                    render_vars(&t_vars)
                )));
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    fn s_with(&self, second: Term) -> Term {
        self.s.substitute(&BTreeMap::from([(y(), second)]))
    }

    /// `s(x,y) = r(x) & s(x,z) = r(x) -> s(x, y·z) = r(x)`
    pub fn condition_one(&self) -> QuasiIdentity {
        let yz = Term::app(self.product, Term::Var(y()), Term::Var(z()));
        QuasiIdentity::new(
            vec![
                Identity::new(self.s.clone(), self.r.clone()),
                Identity::new(self.s_with(Term::Var(z())), self.r.clone()),
            ],
            Identity::new(self.s_with(yz), self.r.clone()),
        )
    }

    /// `s(x,y) · s(x,z) = s(x, t(x,y,z))`, if `t` is given.
    pub fn condition_two(&self) -> Option<Identity> {
        let t = self.t.as_ref()?;
        Some(Identity::new(
            Term::app(self.product, self.s.clone(), self.s_with(Term::Var(z()))),
            self.s_with(t.clone()),
        ))
    }

    fn require_valid(&self) -> Result<(), SchemaError> {
        self.validate().map_err(SchemaError::Invalid)
    }

    pub fn check_condition_one(&self, algebra: &Algebra) -> Result<Satisfaction, SchemaError> {
        self.require_valid()?;
        Ok(algebra.check_quasi_identity(&self.condition_one())?)
    }

    pub fn check_condition_two(&self, algebra: &Algebra) -> Result<ConditionStatus, SchemaError> {
        self.require_valid()?;
        match self.condition_two() {
            None => Ok(ConditionStatus::NotClaimed),
            Some(id) => Ok(algebra.check_identity(&id)?.into()),
        }
    }

    /// An idempotent of the product operation, taken from a minimal
    /// subuniverse of that operation. Errors when the conditions are not
    /// both established.
    pub fn predict_idempotent(&self, algebra: &Algebra) -> Result<usize, SchemaError> {
        if let Satisfaction::Fails(witness) = self.check_condition_one(algebra)? {
            return Err(SchemaError::HypothesisFails {
                condition: 1,
                witness,
            });
        }
        match self.check_condition_two(algebra)? {
            ConditionStatus::Holds => {}
            ConditionStatus::Fails(witness) => {
                return Err(SchemaError::HypothesisFails {
                    condition: 2,
                    witness,
                })
            }
            ConditionStatus::NotClaimed => return Err(SchemaError::ConditionTwoNotClaimed),
        }
        let groupoid = algebra.reduct(self.product)?;
        let table = groupoid.try_table(self.product)?;
        minimal_subuniverses(&groupoid)
            .iter()
            .flat_map(|m| m.members().to_vec())
            .find(|&e| table.get(e, e) == e)
            .ok_or(SchemaError::NoIdempotent)
    }
}

/// Free-function forms mirroring the methods.
pub fn validate_schema(schema: &EllisSchema) -> Result<(), Vec<SchemaViolation>> {
    schema.validate()
}

pub fn check_condition_one(
    algebra: &Algebra,
    schema: &EllisSchema,
) -> Result<Satisfaction, SchemaError> {
    schema.check_condition_one(algebra)
}

pub fn check_condition_two(
    algebra: &Algebra,
    schema: &EllisSchema,
) -> Result<ConditionStatus, SchemaError> {
    schema.check_condition_two(algebra)
}

pub fn predict_idempotent(algebra: &Algebra, schema: &EllisSchema) -> Result<usize, SchemaError> {
    schema.predict_idempotent(algebra)
}

impl fmt::Display for EllisSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r = {}; s = {}; t = ", self.r, self.s)?;
        match &self.t {
            Some(t) => write!(f, "{t}")?,
            None => write!(f, "none")?,
        }
        write!(f, "; product = {}", self.product)
    }
}

impl FromStr for EllisSchema {
    type Err = SchemaError;

    /// `r = <term>; s = <term>; t = <term>|none; product = <symbol>`; the
    /// product defaults to `*`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let syntax = |e: ParseError, key: &str| SchemaError::Syntax(format!("{key}: {e}"));
        let mut fields: BTreeMap<String, String> = BTreeMap::new();
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| {
                SchemaError::Syntax(format!("expected `key = value`, got `{part}`"))
            })?;
            let key = key.trim().to_string();
            if !matches!(key.as_str(), "r" | "s" | "t" | "product") {
                return Err(SchemaError::Syntax(format!("unknown key `{key}`")));
            }
            if fields
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                return Err(SchemaError::Syntax(format!("duplicate key `{key}`")));
            }
        }
        let product = match fields.get("product") {
            Some(p) => p.parse::<OpSymbol>().map_err(SchemaError::Syntax)?,
            None => OpSymbol::Mul,
        };
        let sig = Signature::default();
        let term = |key: &str| -> Result<Term, SchemaError> {
            let text = fields
                .get(key)
                .ok_or_else(|| SchemaError::Syntax(format!("missing `{key}`")))?;
            parse_term(text, &sig).map_err(|e| syntax(e, key))
        };
        let t = match fields.get("t").map(String::as_str) {
            None | Some("none") => None,
            Some(_) => Some(term("t")?),
        };
        Ok(EllisSchema {
            r: term("r")?,
            s: term("s")?,
            t,
            product,
        })
    }
}

fn parsed(s: &str) -> Term {
    s.parse().expect("builtin term")
}

/// Named schemas. `associative` reads `yxz` as `y(xz)`, `associative-alt`
/// as `(yx)z`. `twisted` pairs `x(yz) = (xz)y` with `t = (xz)y`.
///
/// `moufang4` is `(x, (xx)y)` with no `t`. The identity `(xx)(yz) = ((xx)y)z`
/// does not force its first condition (the order-2 table with rows `0 1`,
/// `0 0` is a model where it fails at `x = y = z = 1`); `moufang4-xx` takes
/// `r = xx` instead, which it does force.
pub fn builtin_schemas() -> Vec<(&'static str, EllisSchema)> {
    vec![
        (
            "associative",
            EllisSchema::new(parsed("x"), parsed("xy"), Some(parsed("y(xz)"))),
        ),
        (
            "associative-alt",
            EllisSchema::new(parsed("x"), parsed("xy"), Some(parsed("(yx)z"))),
        ),
        (
            "moufang4",
            EllisSchema::new(parsed("x"), parsed("(xx)y"), None),
        ),
        (
            "moufang4-xx",
            EllisSchema::new(parsed("xx"), parsed("(xx)y"), None),
        ),
        (
            "selfdist",
            EllisSchema::new(parsed("x(xx)"), parsed("xy"), Some(parsed("yz"))),
        ),
        (
            "twisted",
            EllisSchema::new(parsed("x"), parsed("xy"), Some(parsed("(xz)y"))),
        ),
    ]
}

pub fn builtin_schema(name: &str) -> Result<EllisSchema, SchemaError> {
    builtin_schemas()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| s)
        .ok_or_else(|| SchemaError::UnknownBuiltin(name.to_string()))
}

/// Single-operation identities weaker than or incomparable with
/// associativity that imply one or both conditions.
pub fn named_identities() -> Vec<(&'static str, Identity)> {
    [
        ("associativity", "(xy)z = x(yz)"),
        ("moufang-left-pair", "(xy)(yz) = ((xy)y)z"),
        ("moufang-right-pair", "(xz)(yz) = ((xz)y)z"),
        ("moufang-nested", "(xy)(xz) = x(y(xz))"),
        ("moufang-square", "(xx)(yz) = ((xx)y)z"),
        ("twisted-associativity", "x(yz) = (xz)y"),
        ("left-self-distributivity", "x(yz) = (xy)(xz)"),
        ("cube-flexibility", "x(xx) = (xx)x"),
    ]
    .into_iter()
    .map(|(name, text)| (name, text.parse().expect("builtin identity")))
    .collect()
}

pub fn named_identity(name: &str) -> Option<Identity> {
    named_identities()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, id)| id)
}
