//! Named predicates on finite algebras and a small expression language over them.
//!
//! ```text
//! prop := imp
//! imp  := or ("->" imp)?
//! or   := and ("|" and)*
//! and  := not ("&" not)*
//! not  := "!" not | atom
//! atom := name | "satisfies[" quasi-identity "]" | "(" prop ")"
//! ```

use std::fmt;
use std::str::FromStr;

use crate::algebra::{Algebra, AlgebraError};
use crate::subalgebra::{is_minimal, minimal_subuniverses};
use crate::term::{OpSymbol, QuasiIdentity};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    /// The product `*` (or the only operation) has an idempotent.
    HasIdempotent,
    HasCommonIdempotent,
    IsMinimal,
    /// Carrier of size one.
    Trivial,
    IsLeftSemiring,
    /// Every idempotent of `+` is an idempotent of `*`.
    AddIdemSubsetMulIdem,
    /// Every idempotent of `*` is an idempotent of `+`.
    MulIdemSubsetAddIdem,
    /// Every minimal subuniverse is `{e}` for a common idempotent `e`.
    MinimalSubuniversesAreIdempotentPoints,
    Satisfies(QuasiIdentity),
    Not(Box<Property>),
    And(Box<Property>, Box<Property>),
    Or(Box<Property>, Box<Property>),
    Implies(Box<Property>, Box<Property>),
}

const NAMES: [(&str, Property); 8] = [
    ("has-idempotent", Property::HasIdempotent),
    ("has-common-idempotent", Property::HasCommonIdempotent),
    ("is-minimal", Property::IsMinimal),
    ("trivial", Property::Trivial),
    ("is-left-semiring", Property::IsLeftSemiring),
    (
        "additive-idem-subset-of-mult-idem",
        Property::AddIdemSubsetMulIdem,
    ),
    (
        "mult-idem-subset-of-additive-idem",
        Property::MulIdemSubsetAddIdem,
    ),
    (
        "minimal-subuniverses-are-idempotent-points",
        Property::MinimalSubuniversesAreIdempotentPoints,
    ),
];

impl Property {
    pub fn implies(self, then: Property) -> Property {
        Property::Implies(Box::new(self), Box::new(then))
    }

    pub fn or(self, other: Property) -> Property {
        Property::Or(Box::new(self), Box::new(other))
    }

    pub fn and(self, other: Property) -> Property {
        Property::And(Box::new(self), Box::new(other))
    }

    pub fn negate(self) -> Property {
        Property::Not(Box::new(self))
    }

    /// Operation symbols the property needs beyond `*`-or-only-op.
    pub fn required_symbols(&self) -> Vec<OpSymbol> {
        match self {
            Property::HasIdempotent
            | Property::HasCommonIdempotent
            | Property::IsMinimal
            | Property::Trivial
            | Property::MinimalSubuniversesAreIdempotentPoints => vec![],
            Property::IsLeftSemiring
            | Property::AddIdemSubsetMulIdem
            | Property::MulIdemSubsetAddIdem => {
                vec![OpSymbol::Mul, OpSymbol::Add]
            }
            Property::Satisfies(q) => q.symbols().into_iter().collect(),
            Property::Not(p) => p.required_symbols(),
            Property::And(a, b) | Property::Or(a, b) | Property::Implies(a, b) => {
                let mut v = a.required_symbols();
                v.extend(b.required_symbols());
                v.sort();
                v.dedup();
                v
            }
        }
    }

    pub fn holds(&self, a: &Algebra) -> Result<bool, AlgebraError> {
        let idems = |op| a.idempotents(op);
        Ok(match self {
            Property::HasIdempotent => {
                let op = if a.table(OpSymbol::Mul).is_some() {
                    OpSymbol::Mul
                } else {
                    OpSymbol::Add
                };
                !idems(op)?.is_empty()
            }
            Property::HasCommonIdempotent => !a.common_idempotents().is_empty(),
            Property::IsMinimal => is_minimal(a),
            Property::Trivial => a.order() == 1,
            Property::IsLeftSemiring => a.is_left_semiring()?,
            Property::AddIdemSubsetMulIdem => {
                let mul = idems(OpSymbol::Mul)?;
                idems(OpSymbol::Add)?.iter().all(|e| mul.contains(e))
            }
            Property::MulIdemSubsetAddIdem => {
                let add = idems(OpSymbol::Add)?;
                idems(OpSymbol::Mul)?.iter().all(|e| add.contains(e))
            }
            Property::MinimalSubuniversesAreIdempotentPoints => {
                let common = a.common_idempotents();
                minimal_subuniverses(a)
                    .iter()
                    .all(|m| m.len() == 1 && common.contains(&m.members()[0]))
            }
            Property::Satisfies(q) => a.satisfies_quasi_identity(q)?,
            Property::Not(p) => !p.holds(a)?,
            Property::And(p, q) => p.holds(a)? && q.holds(a)?,
            Property::Or(p, q) => p.holds(a)? || q.holds(a)?,
            Property::Implies(p, q) => !p.holds(a)? || q.holds(a)?,
        })
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, outer: u8) -> fmt::Result {
        let prec = match self {
            Property::Implies(..) => 1,
            Property::Or(..) => 2,
            Property::And(..) => 3,
            Property::Not(_) => 4,
            _ => 5,
        };
        if prec < outer {
            write!(f, "(")?;
        }
        match self {
            Property::Implies(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, 1)?;
            }
            Property::Or(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 3)?;
            }
            Property::And(a, b) => {
                a.fmt_prec(f, 3)?;
                write!(f, " & ")?;
                b.fmt_prec(f, 4)?;
            }
            Property::Not(p) => {
                write!(f, "!")?;
                p.fmt_prec(f, 4)?;
            }
            Property::Satisfies(q) => write!(f, "satisfies[{q}]")?,
            atom => {
                let name = NAMES
                    .iter()
                    .find(|(_, p)| p == atom)
                    .map_or("?", |(n, _)| *n);
                write!(f, "{name}")?;
            }
        }
        if prec < outer {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = PropParser { text: s, at: 0 };
        let prop = p.implication()?;
        p.skip_ws();
        if p.at != s.len() {
            return Err(format!("unexpected `{}` at position {}", &s[p.at..], p.at));
        }
        Ok(prop)
    }
}

struct PropParser<'a> {
    text: &'a str,
    at: usize,
}

impl PropParser<'_> {
    fn rest(&self) -> &str {
        &self.text[self.at..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.at = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.at += token.len();
            true
        } else {
            false
        }
    }

    fn implication(&mut self) -> Result<Property, String> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            Ok(lhs.implies(self.implication()?))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Property, String> {
        let mut lhs = self.conjunction()?;
        while self.eat("|") {
            lhs = lhs.or(self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Property, String> {
        let mut lhs = self.negation()?;
        while self.eat("&") {
            lhs = lhs.and(self.negation()?);
        }
        Ok(lhs)
    }

    fn negation(&mut self) -> Result<Property, String> {
        if self.eat("!") {
            Ok(self.negation()?.negate())
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<Property, String> {
        if self.eat("(") {
            let inner = self.implication()?;
            if !self.eat(")") {
                return Err(format!("expected `)` at position {}", self.at));
            }
            return Ok(inner);
        }
        if self.eat("satisfies[") {
            let close = self.rest().find(']').ok_or("unterminated `satisfies[`")?;
            let body = &self.rest()[..close];
            let q: QuasiIdentity = body
                .parse()
                .map_err(|e| format!("in satisfies[...]: {e}"))?;
            self.at += close + 1;
            return Ok(Property::Satisfies(q));
        }
        self.skip_ws();
        let rest = self.rest().as_bytes();
        let len = (0..rest.len())
            .find(|&i| {
                !(rest[i].is_ascii_lowercase()
                    || (rest[i] == b'-' && rest.get(i + 1) != Some(&b'>')))
            })
            .unwrap_or(rest.len());
        let word = &self.rest()[..len];
        let prop = NAMES
            .iter()
            .find(|(n, _)| *n == word)
            .map(|(_, p)| p.clone())
            .ok_or_else(|| format!("unknown property `{word}` at position {}", self.at))?;
        self.at += len;
        Ok(prop)
    }
}
