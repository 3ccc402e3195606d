//! Terms over binary operation symbols, equations between them, and the
//! concrete syntax used everywhere else in the workbench.
//!
//! Syntax:
//! - variables are single lowercase letters
//! - `+` is explicit; multiplication is juxtaposition or an explicit `*`
//! - juxtaposition binds tighter than the infix operators, so `xy+xz` is
//!   `(xy)+(xz)`
//! - at most two operands per level: `xyz`, `x+y+z` and `x*y+z` are rejected
//!   because no silent association is correct for a non-associative operation
//! - identities are `L = R`, quasi-identities `P1 & P2 & ... -> C`
//!
//! Rendering is fully parenthesized (`(x(vx))`, `(x+x)`) and reparses to the
//! same tree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Algebra;

/// A binary operation symbol. The concrete syntax knows two of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OpSymbol {
    /// Multiplication, written `*`, `·` or by juxtaposition.
    #[serde(rename = "*")]
    Mul,
    /// Addition, written `+`.
    #[serde(rename = "+")]
    Add,
}

impl OpSymbol {
    pub const ALL: [OpSymbol; 2] = [OpSymbol::Mul, OpSymbol::Add];

    pub fn index(self) -> usize {
        match self {
            OpSymbol::Mul => 0,
            OpSymbol::Add => 1,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            OpSymbol::Mul => '*',
            OpSymbol::Add => '+',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '*' | '·' => Some(OpSymbol::Mul),
            '+' => Some(OpSymbol::Add),
            _ => None,
        }
    }
}

impl fmt::Display for OpSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for OpSymbol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => {
                OpSymbol::from_char(c).ok_or_else(|| format!("unknown operation symbol `{s}`"))
            }
            _ => Err(format!("unknown operation symbol `{s}`")),
        }
    }
}

/// The set of operation symbols a term may use.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature(BTreeSet<OpSymbol>);

impl Signature {
    pub fn new(symbols: impl IntoIterator<Item = OpSymbol>) -> Self {
        Signature(symbols.into_iter().collect())
    }

    pub fn single(symbol: OpSymbol) -> Self {
        Signature::new([symbol])
    }

    pub fn contains(&self, symbol: OpSymbol) -> bool {
        self.0.contains(&symbol)
    }

    pub fn symbols(&self) -> impl Iterator<Item = OpSymbol> + '_ {
        self.0.iter().copied()
    }
}

impl Default for Signature {
    fn default() -> Self {
        Signature::new(OpSymbol::ALL)
    }
}

/// A variable: one lowercase ASCII letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Var(char);

impl Var {
    pub fn new(name: char) -> Option<Var> {
        name.is_ascii_lowercase().then_some(Var(name))
    }

    pub fn name(self) -> char {
        self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shorthand for tests and builtin catalogs. Panics on a non-lowercase name.
pub fn var(name: char) -> Var {
    Var::new(name).unwrap_or_else(|| panic!("`{name}` is not a variable name"))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(OpSymbol, Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: char) -> Term {
        Term::Var(var(name))
    }

    pub fn app(op: OpSymbol, left: Term, right: Term) -> Term {
        Term::App(op, Box::new(left), Box::new(right))
    }

    pub fn product(left: Term, right: Term) -> Term {
        Term::app(OpSymbol::Mul, left, right)
    }

    pub fn sum(left: Term, right: Term) -> Term {
        Term::app(OpSymbol::Add, left, right)
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::App(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn symbols(&self) -> BTreeSet<OpSymbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<OpSymbol>) {
        if let Term::App(op, l, r) = self {
            out.insert(*op);
            l.collect_symbols(out);
            r.collect_symbols(out);
        }
    }

    pub fn contains(&self, v: Var) -> bool {
        self.occurrences(v) > 0
    }

    pub fn occurrences(&self, v: Var) -> usize {
        match self {
            Term::Var(w) => usize::from(*w == v),
            Term::App(_, l, r) => l.occurrences(v) + r.occurrences(v),
        }
    }

    /// True iff `v` occurs in the term, and for every product `t1 · t2` on
    /// the path to it the occurrence lies in `t2` while `t1` is free of `v`.
    /// Such a variable necessarily occurs exactly once.
    pub fn is_rightmost(&self, v: Var) -> bool {
        match self {
            Term::Var(w) => *w == v,
            Term::App(_, l, r) => !l.contains(v) && r.is_rightmost(v),
        }
    }

    /// Simultaneous substitution of variables by terms.
    pub fn substitute(&self, map: &BTreeMap<Var, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or(Term::Var(*v)),
            Term::App(op, l, r) => Term::app(*op, l.substitute(map), r.substitute(map)),
        }
    }

    /// Evaluate bottom-up in `algebra`.
    pub fn evaluate(
        &self,
        algebra: &Algebra,
        assignment: &BTreeMap<Var, usize>,
    ) -> Result<usize, EvalError> {
        match self {
            Term::Var(v) => {
                let value = *assignment.get(v).ok_or(EvalError::Unassigned(*v))?;
                if value >= algebra.order() {
                    return Err(EvalError::OutOfRange {
                        var: *v,
                        value,
                        order: algebra.order(),
                    });
                }
                Ok(value)
            }
            Term::App(op, l, r) => {
                let table = algebra.table(*op).ok_or(EvalError::MissingOperation(*op))?;
                let a = l.evaluate(algebra, assignment)?;
                let b = r.evaluate(algebra, assignment)?;
                Ok(table.get(a, b))
            }
        }
    }
}

/// Free-function form of [`Term::is_rightmost`].
pub fn is_rightmost(t: &Term, v: Var) -> bool {
    t.is_rightmost(v)
}

/// Free-function form of [`Term::evaluate`].
pub fn evaluate(
    t: &Term,
    algebra: &Algebra,
    assignment: &BTreeMap<Var, usize>,
) -> Result<usize, EvalError> {
    t.evaluate(algebra, assignment)
}

/// Canonical fully parenthesized text.
pub fn render_term(t: &Term) -> String {
    t.to_string()
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(OpSymbol::Mul, l, r) => write!(f, "({l}{r})"),
            Term::App(op, l, r) => write!(f, "({l}{op}{r})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity { lhs, rhs }
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        let mut vars = self.lhs.variables();
        vars.extend(self.rhs.variables());
        vars
    }

    pub fn symbols(&self) -> BTreeSet<OpSymbol> {
        let mut syms = self.lhs.symbols();
        syms.extend(self.rhs.symbols());
        syms
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl FromStr for Identity {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_identity(s, &Signature::default())
    }
}

/// `premises -> conclusion`, universally quantified over all variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiIdentity {
    pub premises: Vec<Identity>,
    pub conclusion: Identity,
}

impl QuasiIdentity {
    pub fn new(premises: Vec<Identity>, conclusion: Identity) -> Self {
        QuasiIdentity {
            premises,
            conclusion,
        }
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        let mut vars = self.conclusion.variables();
        for p in &self.premises {
            vars.extend(p.variables());
        }
        vars
    }

    pub fn symbols(&self) -> BTreeSet<OpSymbol> {
        let mut syms = self.conclusion.symbols();
        for p in &self.premises {
            syms.extend(p.symbols());
        }
        syms
    }
}

impl From<Identity> for QuasiIdentity {
    fn from(id: Identity) -> Self {
        QuasiIdentity::new(Vec::new(), id)
    }
}

impl fmt::Display for QuasiIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{p}")?;
        }
        if !self.premises.is_empty() {
            write!(f, " -> ")?;
        }
        write!(f, "{}", self.conclusion)
    }
}

impl FromStr for QuasiIdentity {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_quasi_identity(s, &Signature::default())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected {found}, expected {expected}")]
    UnexpectedToken {
        found: String,
        expected: &'static str,
    },
    #[error("unexpected end of input, expected {0}")]
    UnexpectedEnd(&'static str),
    #[error("ambiguous: more than two operands without parentheses")]
    Ambiguous,
    #[error("operation symbol `{0}` is not in the signature")]
    UnknownSymbol(OpSymbol),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at position {pos}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the parsed text.
    pub pos: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` is not assigned")]
    Unassigned(Var),
    #[error("variable `{var}` assigned {value}, outside a carrier of size {order}")]
    OutOfRange {
        var: Var,
        value: usize,
        order: usize,
    },
    #[error("operation `{0}` has no table in the algebra")]
    MissingOperation(OpSymbol),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Var(Var),
    LParen,
    RParen,
    Op(OpSymbol),
    Eq,
    Amp,
    Arrow,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Var(v) => write!(f, "variable `{v}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Op(op) => write!(f, "`{op}`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Amp => write!(f, "`&`"),
            Tok::Arrow => write!(f, "`->`"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((pos, c)) = chars.next() {
        let tok = match c {
            c if c.is_whitespace() => continue,
            c if c.is_ascii_lowercase() => Tok::Var(Var(c)),
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '=' => Tok::Eq,
            '&' => Tok::Amp,
            '-' => match chars.next() {
                Some((_, '>')) => Tok::Arrow,
                _ => {
                    return Err(ParseError {
                        kind: ParseErrorKind::UnexpectedChar('-'),
                        pos,
                    })
                }
            },
            c => match OpSymbol::from_char(c) {
                Some(op) => Tok::Op(op),
                None => {
                    return Err(ParseError {
                        kind: ParseErrorKind::UnexpectedChar(c),
                        pos,
                    })
                }
            },
        };
        toks.push((tok, pos));
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    signature: &'a Signature,
}

impl<'a> Parser<'a> {
    fn new(text: &str, signature: &'a Signature) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(text)?,
            at: 0,
            end: text.len(),
            signature,
        })
    }

    fn peek(&self) -> Option<(Tok, usize)> {
        self.toks.get(self.at).copied()
    }

    fn pos(&self) -> usize {
        self.peek().map_or(self.end, |(_, p)| p)
    }

    fn error(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some((tok, pos)) => ParseError {
                kind: ParseErrorKind::UnexpectedToken {
                    found: tok.to_string(),
                    expected,
                },
                pos,
            },
            None => ParseError {
                kind: ParseErrorKind::UnexpectedEnd(expected),
                pos: self.end,
            },
        }
    }

    fn expect(&mut self, want: Tok, expected: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Some((tok, _)) if tok == want => {
                self.at += 1;
                Ok(())
            }
            _ => Err(self.error(expected)),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("end of input")),
        }
    }

    fn check_symbol(&self, op: OpSymbol, pos: usize) -> Result<(), ParseError> {
        if self.signature.contains(op) {
            Ok(())
        } else {
            Err(ParseError {
                kind: ParseErrorKind::UnknownSymbol(op),
                pos,
            })
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some((Tok::Var(_) | Tok::LParen, _)))
    }

    // expr := juxt (op juxt)?
    fn expr(&mut self) -> Result<Term, ParseError> {
        let left = self.juxt()?;
        let Some((Tok::Op(op), pos)) = self.peek() else {
            return Ok(left);
        };
        self.check_symbol(op, pos)?;
        self.at += 1;
        let right = self.juxt()?;
        if let Some((Tok::Op(_), pos)) = self.peek() {
            return Err(ParseError {
                kind: ParseErrorKind::Ambiguous,
                pos,
            });
        }
        Ok(Term::app(op, left, right))
    }

    // juxt := atom atom?
    fn juxt(&mut self) -> Result<Term, ParseError> {
        let left = self.atom()?;
        if !self.starts_atom() {
            return Ok(left);
        }
        let pos = self.pos();
        self.check_symbol(OpSymbol::Mul, pos)?;
        let right = self.atom()?;
        if self.starts_atom() {
            return Err(ParseError {
                kind: ParseErrorKind::Ambiguous,
                pos: self.pos(),
            });
        }
        Ok(Term::product(left, right))
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some((Tok::Var(v), _)) => {
                self.at += 1;
                Ok(Term::Var(v))
            }
            Some((Tok::LParen, _)) => {
                self.at += 1;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.error("a variable or `(`")),
        }
    }

    fn identity(&mut self) -> Result<Identity, ParseError> {
        let lhs = self.expr()?;
        self.expect(Tok::Eq, "`=`")?;
        let rhs = self.expr()?;
        Ok(Identity { lhs, rhs })
    }

    fn quasi_identity(&mut self) -> Result<QuasiIdentity, ParseError> {
        let mut ids = vec![self.identity()?];
        loop {
            match self.peek() {
                Some((Tok::Amp, _)) => {
                    self.at += 1;
                    ids.push(self.identity()?);
                }
                Some((Tok::Arrow, _)) => {
                    self.at += 1;
                    let conclusion = self.identity()?;
                    return Ok(QuasiIdentity {
                        premises: ids,
                        conclusion,
                    });
                }
                None if ids.len() == 1 => {
                    return Ok(QuasiIdentity {
                        premises: Vec::new(),
                        conclusion: ids.remove(0),
                    });
                }
                _ => return Err(self.error("`&` or `->`")),
            }
        }
    }
}

pub fn parse_term(text: &str, signature: &Signature) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, signature)?;
    let t = p.expr()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_identity(text: &str, signature: &Signature) -> Result<Identity, ParseError> {
    let mut p = Parser::new(text, signature)?;
    let id = p.identity()?;
    p.finish()?;
    Ok(id)
}

pub fn parse_quasi_identity(
    text: &str,
    signature: &Signature,
) -> Result<QuasiIdentity, ParseError> {
    let mut p = Parser::new(text, signature)?;
    let q = p.quasi_identity()?;
    p.finish()?;
    Ok(q)
}

impl FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s, &Signature::default())
    }
}

/// Marks a cell of a partially filled table.
pub(crate) const UNKNOWN: u8 = u8::MAX;

#[derive(Clone, Copy, Debug)]
enum Instr {
    Load(u8),
    Apply(u8),
}

/// A term flattened to postfix code over variable slots and table indices,
/// for the hot loops of satisfaction checking and model search.
#[derive(Clone, Debug)]
pub(crate) struct Program {
    code: Vec<Instr>,
}

impl Program {
    /// `slots` maps each variable of `t` to its slot in the value vector.
    pub(crate) fn compile(t: &Term, slots: &BTreeMap<Var, usize>) -> Program {
        let mut code = Vec::with_capacity(t.size());
        Self::emit(t, slots, &mut code);
        Program { code }
    }

    fn emit(t: &Term, slots: &BTreeMap<Var, usize>, code: &mut Vec<Instr>) {
        match t {
            Term::Var(v) => code.push(Instr::Load(slots[v] as u8)),
            Term::App(op, l, r) => {
                Self::emit(l, slots, code);
                Self::emit(r, slots, code);
                code.push(Instr::Apply(op.index() as u8));
            }
        }
    }

    /// Evaluates against row-major tables indexed by [`OpSymbol::index`].
    /// Returns `None` when a needed cell is still [`UNKNOWN`].
    #[inline]
    pub(crate) fn eval(
        &self,
        tables: &[&[u8]; 2],
        n: usize,
        values: &[u8],
        stack: &mut Vec<u8>,
    ) -> Option<u8> {
        stack.clear();
        for instr in &self.code {
            match *instr {
                Instr::Load(slot) => stack.push(values[slot as usize]),
                Instr::Apply(op) => {
                    let b = stack.pop().unwrap_or_default();
                    let a = stack.pop().unwrap_or_default();
                    let cell = tables[op as usize][a as usize * n + b as usize];
                    if cell == UNKNOWN {
                        return None;
                    }
                    stack.push(cell);
                }
            }
        }
        stack.pop()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    fn x() -> Term {
        Term::var('x')
    }

    #[test]
    fn parses_left_distributivity_lhs() {
        assert_eq!(
            t("x(y+z)"),
            Term::product(x(), Term::sum(Term::var('y'), Term::var('z')))
        );
    }

    #[test]
    fn parses_leaf_and_product_of_products() {
        assert_eq!(t("x"), x());
        let (u, v, w) = (Term::var('u'), Term::var('v'), Term::var('w'));
        assert_eq!(
            t("(uv)(wx)"),
            Term::product(Term::product(u, v), Term::product(w, x()))
        );
    }

    #[test]
    fn juxtaposition_binds_tighter_than_plus() {
        let xy = Term::product(x(), Term::var('y'));
        let xz = Term::product(x(), Term::var('z'));
        assert_eq!(t("xy+xz"), Term::sum(xy.clone(), xz));
        assert_eq!(t("xy+z"), Term::sum(xy, Term::var('z')));
        assert_eq!(t("x * y"), t("xy"));
    }

    #[test]
    fn rejects_unparenthesized_triples() {
        for text in ["xyz", "x+y+z", "x*y+z", "(xy)zx"] {
            let err = parse_term(text, &Signature::default()).unwrap_err();
            assert_eq!(err.kind, ParseErrorKind::Ambiguous, "{text}");
        }
        assert_eq!(parse_term("xyz", &Signature::default()).unwrap_err().pos, 2);
    }

    #[test]
    fn reports_syntax_errors_with_position() {
        let err = parse_term("x(y", &Signature::default()).unwrap_err();
        assert_eq!(err.pos, 3);
        assert!(matches!(err.kind, ParseErrorKind::UnexpectedEnd(_)));
        let err = parse_term("x)", &Signature::default()).unwrap_err();
        assert_eq!(err.pos, 1);
        let err = parse_term("xX", &Signature::default()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnexpectedChar('X'));
        assert!(parse_term("", &Signature::default()).is_err());
    }

    #[test]
    fn rejects_symbols_outside_signature() {
        let sig = Signature::single(OpSymbol::Mul);
        let err = parse_term("x+y", &sig).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownSymbol(OpSymbol::Add));
        assert_eq!(err.pos, 1);
        let sig = Signature::single(OpSymbol::Add);
        let err = parse_term("x+yz", &sig).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownSymbol(OpSymbol::Mul));
    }

    #[test]
    fn renders_fully_parenthesized() {
        let xvx = Term::product(x(), Term::product(Term::var('v'), x()));
        assert_eq!(render_term(&xvx), "(x(vx))");
        assert_eq!(render_term(&x()), "x");
        assert_eq!(render_term(&Term::sum(x(), x())), "(x+x)");
        assert_eq!(t(&render_term(&xvx)), xvx);
    }

    #[test]
    fn rightmost_examples() {
        let x = var('x');
        for s in ["x", "vx", "(vv)x", "v(vx)", "(uv)(wx)"] {
            assert!(t(s).is_rightmost(x), "{s} should be right-most in x");
        }
        for s in ["v", "uv", "xv", "xx", "x(vx)", "(ux)(vx)"] {
            assert!(!t(s).is_rightmost(x), "{s} should not be right-most in x");
        }
    }

    #[test]
    fn rightmost_through_addition() {
        assert!(t("v+x").is_rightmost(var('x')));
        assert!(!t("x+v").is_rightmost(var('x')));
    }

    #[test]
    fn parses_identities_and_quasi_identities() {
        let id: Identity = "x(y+z) = xy + xz".parse().unwrap();
        assert_eq!(id.to_string(), "(x(y+z)) = ((xy)+(xz))");
        let q: QuasiIdentity = "xy = x & xz = x -> x(yz) = x".parse().unwrap();
        assert_eq!(q.premises.len(), 2);
        assert_eq!(q.to_string(), "(xy) = x & (xz) = x -> (x(yz)) = x");
        let q: QuasiIdentity = "(xy)z = x(yz)".parse().unwrap();
        assert!(q.premises.is_empty());
        assert!("x = y &".parse::<QuasiIdentity>().is_err());
        assert!("x = y & y = z".parse::<QuasiIdentity>().is_err());
        assert!("x - y".parse::<Identity>().is_err());
    }

    #[test]
    fn quasi_identity_roundtrips_through_display() {
        let q: QuasiIdentity = "xy=x&xz=x->x(yz)=x".parse().unwrap();
        assert_eq!(q.to_string().parse::<QuasiIdentity>().unwrap(), q);
    }

    #[test]
    fn substitution_is_simultaneous() {
        let map = BTreeMap::from([(var('x'), t("y")), (var('y'), t("x"))]);
        assert_eq!(t("x(yx)").substitute(&map), t("y(xy)"));
    }

    #[test]
    fn depth_and_size() {
        let term = t("(uv)(wx)");
        assert_eq!(term.depth(), 3);
        assert_eq!(term.size(), 7);
    }
}
