//! Finite algebras given by operation tables.
//!
//! Elements of a carrier of size `n` are `0..n`. Tables are row-major with
//! the row index as the LEFT argument, so `table.get(a, b)` is `a · b`.
//!
//! Text format (also what [`Algebra`]'s `Display` writes):
//!
//! ```text
//! carrier 2
//! op *
//! 0 1
//! 1 0
//! op +
//! 0 0
//! 1 1
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::term::{Identity, OpSymbol, Program, QuasiIdentity, Var};

/// Largest carrier the table representation supports.
pub const MAX_CARRIER: usize = (u8::MAX - 1) as usize;

/// Default cap on carrier size for brute-force canonicalization (n! relabelings).
pub const DEFAULT_CANONICAL_CAP: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("carrier size must be between 1 and {MAX_CARRIER}, got {0}")]
    BadCarrier(usize),
    #[error("an algebra needs at least one operation")]
    NoOperations,
    #[error("operation `{0}` declared twice")]
    DuplicateOperation(OpSymbol),
    #[error("table for `{op}` has {len} cells, expected {expected}")]
    BadTableSize {
        op: OpSymbol,
        len: usize,
        expected: usize,
    },
    #[error("entry {value} in table `{op}` is outside the carrier of size {order}")]
    EntryOutOfRange {
        op: OpSymbol,
        value: usize,
        order: usize,
    },
    #[error("operation `{0}` is not present in the algebra")]
    UnknownSymbol(OpSymbol),
    #[error("element {element} is outside the carrier of size {order}")]
    ElementOutOfRange { element: usize, order: usize },
    #[error("operation `{0}` is not associative, so powers are not well defined")]
    NotAssociative(OpSymbol),
    #[error("carrier size {order} exceeds the canonicalization cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("line {line}, column {col}: {msg}")]
    Malformed {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("line {line}, column {col}: entry {value} is outside the carrier of size {order}")]
    FileEntryOutOfRange {
        line: usize,
        col: usize,
        value: usize,
        order: usize,
    },
}

/// An `n × n` operation table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Table {
    n: usize,
    cells: Vec<u8>,
}

impl Table {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Table {
        let mut cells = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let v = f(a, b);
                assert!(v < n, "table entry {v} out of range for order {n}");
                cells.push(v as u8);
            }
        }
        Table { n, cells }
    }

    /// Builds a table from its rows. Panics on ragged rows or bad entries;
    /// use [`Algebra::from_str`] for untrusted input.
    pub fn from_rows(rows: &[&[usize]]) -> Table {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "table must be square");
        Table::from_fn(n, |a, b| rows[a][b])
    }

    pub(crate) fn from_cells(n: usize, cells: Vec<u8>) -> Table {
        debug_assert_eq!(cells.len(), n * n);
        Table { n, cells }
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> usize {
        self.cells[a * self.n + b] as usize
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn row(&self, a: usize) -> &[u8] {
        &self.cells[a * self.n..(a + 1) * self.n]
    }

    pub fn is_associative(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| {
            (0..n).all(|y| {
                let xy = self.get(x, y);
                (0..n).all(|z| self.get(xy, z) == self.get(x, self.get(y, z)))
            })
        })
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.get(a, b) == self.get(b, a)))
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.n).filter(|&e| self.get(e, e) == e).collect()
    }
}

/// A finite algebra: carrier `0..n` and one table per operation symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Algebra {
    n: usize,
    // Indexed by `OpSymbol::index`.
    tables: [Option<Table>; 2],
}

impl Algebra {
    pub fn new(
        n: usize,
        ops: impl IntoIterator<Item = (OpSymbol, Table)>,
    ) -> Result<Algebra, AlgebraError> {
        if n == 0 || n > MAX_CARRIER {
            return Err(AlgebraError::BadCarrier(n));
        }
        let mut tables: [Option<Table>; 2] = [None, None];
        for (op, table) in ops {
            if tables[op.index()].is_some() {
                return Err(AlgebraError::DuplicateOperation(op));
            }
            if table.cells.len() != n * n || table.n != n {
                return Err(AlgebraError::BadTableSize {
                    op,
                    len: table.cells.len(),
                    expected: n * n,
                });
            }
            if let Some(&bad) = table.cells.iter().find(|&&v| v as usize >= n) {
                return Err(AlgebraError::EntryOutOfRange {
                    op,
                    value: bad as usize,
                    order: n,
                });
            }
            tables[op.index()] = Some(table);
        }
        if tables.iter().all(Option::is_none) {
            return Err(AlgebraError::NoOperations);
        }
        Ok(Algebra { n, tables })
    }

    /// A groupoid with the single operation `*`.
    pub fn groupoid(table: Table) -> Algebra {
        let n = table.order();
        Algebra::new(n, [(OpSymbol::Mul, table)]).expect("valid groupoid table")
    }

    /// An algebra `(X, +, ·)`.
    pub fn bi(add: Table, mul: Table) -> Algebra {
        let n = add.order();
        Algebra::new(n, [(OpSymbol::Add, add), (OpSymbol::Mul, mul)]).expect("valid tables")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn table(&self, op: OpSymbol) -> Option<&Table> {
        self.tables[op.index()].as_ref()
    }

    pub fn try_table(&self, op: OpSymbol) -> Result<&Table, AlgebraError> {
        self.table(op).ok_or(AlgebraError::UnknownSymbol(op))
    }

    pub fn symbols(&self) -> impl Iterator<Item = OpSymbol> + '_ {
        OpSymbol::ALL
            .into_iter()
            .filter(|op| self.tables[op.index()].is_some())
    }

    pub fn tables(&self) -> impl Iterator<Item = (OpSymbol, &Table)> {
        OpSymbol::ALL
            .into_iter()
            .zip(self.tables.iter())
            .filter_map(|(op, t)| t.as_ref().map(|t| (op, t)))
    }

    pub(crate) fn raw_tables(&self) -> [&[u8]; 2] {
        [0, 1].map(|i| {
            self.tables[i]
                .as_ref()
                .map_or(&[][..], |t| t.cells.as_slice())
        })
    }

    /// Concatenation of all tables in symbol order: the key compared by
    /// [`Algebra::canonicalize`].
    pub fn flattened(&self) -> Vec<u8> {
        self.tables()
            .flat_map(|(_, t)| t.cells.iter().copied())
            .collect()
    }

    /// The reduct keeping only `op`.
    pub fn reduct(&self, op: OpSymbol) -> Result<Algebra, AlgebraError> {
        let t = self.try_table(op)?.clone();
        Algebra::new(self.n, [(op, t)])
    }

    fn check_element(&self, element: usize) -> Result<(), AlgebraError> {
        if element < self.n {
            Ok(())
        } else {
            Err(AlgebraError::ElementOutOfRange {
                element,
                order: self.n,
            })
        }
    }

    fn check_symbols(&self, symbols: BTreeSet<OpSymbol>) -> Result<(), AlgebraError> {
        match symbols.into_iter().find(|op| self.table(*op).is_none()) {
            Some(op) => Err(AlgebraError::UnknownSymbol(op)),
            None => Ok(()),
        }
    }

    /// `{ e : e·e = e }` in ascending order.
    pub fn idempotents(&self, op: OpSymbol) -> Result<Vec<usize>, AlgebraError> {
        Ok(self.try_table(op)?.idempotents())
    }

    /// Elements idempotent for every operation, i.e. the `e` with `{e}` a subalgebra.
    pub fn common_idempotents(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&e| self.tables().all(|(_, t)| t.get(e, e) == e))
            .collect()
    }

    pub fn idempotent_report(&self) -> IdempotentReport {
        IdempotentReport {
            per_symbol: self.tables().map(|(op, t)| (op, t.idempotents())).collect(),
            common: self.common_idempotents(),
        }
    }

    pub fn satisfies_identity(&self, id: &Identity) -> Result<bool, AlgebraError> {
        Ok(self.check_identity(id)?.holds())
    }

    pub fn check_identity(&self, id: &Identity) -> Result<Satisfaction, AlgebraError> {
        self.check_quasi_identity(&QuasiIdentity::from(id.clone()))
    }

    pub fn satisfies_quasi_identity(&self, q: &QuasiIdentity) -> Result<bool, AlgebraError> {
        Ok(self.check_quasi_identity(q)?.holds())
    }

    /// Scans all `n^k` assignments in lexicographic order (variables sorted
    /// by name, the first most significant) and reports the first one where
    /// every premise holds and the conclusion fails.
    pub fn check_quasi_identity(&self, q: &QuasiIdentity) -> Result<Satisfaction, AlgebraError> {
        self.check_symbols(q.symbols())?;
        let checker = Checker::new(q);
        Ok(match checker.first_violation(self.n, &self.raw_tables()) {
            None => Satisfaction::Holds,
            Some(values) => Satisfaction::Fails(checker.witness(&values)),
        })
    }

    pub fn is_associative(&self, op: OpSymbol) -> Result<bool, AlgebraError> {
        Ok(self.try_table(op)?.is_associative())
    }

    /// The cycle of powers `a, a², a³, …` under an associative operation.
    pub fn power_cycle(&self, op: OpSymbol, a: usize) -> Result<PowerCycle, AlgebraError> {
        let table = self.try_table(op)?;
        self.check_element(a)?;
        if !table.is_associative() {
            return Err(AlgebraError::NotAssociative(op));
        }
        // powers[k - 1] = a^k
        let mut powers = Vec::with_capacity(self.n + 1);
        let mut first_seen = vec![0usize; self.n];
        let mut x = a;
        let (index, period) = loop {
            let k = powers.len() + 1;
            if first_seen[x] != 0 {
                break (first_seen[x], k - first_seen[x]);
            }
            first_seen[x] = k;
            powers.push(x);
            x = table.get(x, a);
        };
        let exponent = index.div_ceil(period) * period;
        Ok(PowerCycle {
            index,
            period,
            exponent,
            idempotent: powers[exponent - 1],
        })
    }

    /// The idempotent power `a^m` of `a`, `m` the least multiple of the
    /// period not below the index.
    pub fn find_idempotent_power(&self, op: OpSymbol, a: usize) -> Result<usize, AlgebraError> {
        Ok(self.power_cycle(op, a)?.idempotent)
    }

    pub fn is_left_distributive(&self) -> Result<bool, AlgebraError> {
        let add = self.try_table(OpSymbol::Add)?;
        let mul = self.try_table(OpSymbol::Mul)?;
        Ok(is_left_distributive(self.n, add, mul))
    }

    /// Both operations associative and `x(y+z) = xy + xz`.
    pub fn is_left_semiring(&self) -> Result<bool, AlgebraError> {
        let add = self.try_table(OpSymbol::Add)?;
        let mul = self.try_table(OpSymbol::Mul)?;
        Ok(add.is_associative() && mul.is_associative() && is_left_distributive(self.n, add, mul))
    }

    /// The image under a relabeling `sigma` of the carrier, applied to all
    /// tables at once: `σ(a) ·' σ(b) = σ(a · b)`.
    pub fn permuted(&self, sigma: &[usize]) -> Algebra {
        let n = self.n;
        assert_eq!(sigma.len(), n);
        let tables = [0, 1].map(|i| {
            self.tables[i].as_ref().map(|t| {
                let mut cells = vec![0u8; n * n];
                for a in 0..n {
                    for b in 0..n {
                        cells[sigma[a] * n + sigma[b]] = sigma[t.get(a, b)] as u8;
                    }
                }
                Table { n, cells }
            })
        });
        Algebra { n, tables }
    }

    /// Canonical representative of the isomorphism class, with the default cap.
    pub fn canonicalize(&self) -> Result<Algebra, AlgebraError> {
        self.canonicalize_with_cap(DEFAULT_CANONICAL_CAP)
    }

    /// Minimum of [`Algebra::flattened`] over all `n!` relabelings.
    pub fn canonicalize_with_cap(&self, cap: usize) -> Result<Algebra, AlgebraError> {
        if self.n > cap {
            return Err(AlgebraError::CapExceeded { order: self.n, cap });
        }
        let mut best: Option<Algebra> = None;
        for sigma in permutations(self.n) {
            let image = self.permuted(&sigma);
            if best
                .as_ref()
                .is_none_or(|b| image.flattened() < b.flattened())
            {
                best = Some(image);
            }
        }
        Ok(best.expect("at least the identity permutation"))
    }

    pub fn is_isomorphic(&self, other: &Algebra) -> Result<bool, AlgebraError> {
        if self.n != other.n || self.symbols().ne(other.symbols()) {
            return Ok(false);
        }
        Ok(self.canonicalize()? == other.canonicalize()?)
    }

    /// Number of relabelings fixing every table.
    pub fn automorphism_count(&self) -> usize {
        permutations(self.n)
            .filter(|s| self.permuted(s) == *self)
            .count()
    }
}

pub(crate) fn is_left_distributive(n: usize, add: &Table, mul: &Table) -> bool {
    (0..n).all(|x| {
        (0..n).all(|y| {
            (0..n).all(|z| mul.get(x, add.get(y, z)) == add.get(mul.get(x, y), mul.get(x, z)))
        })
    })
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next: Option<Vec<usize>> = Some((0..n).collect());
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut p = current.clone();
        // Standard next-permutation step.
        if let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) {
            let j = (i..p.len())
                .rev()
                .find(|&j| p[j] > p[i - 1])
                .expect("pivot successor");
            p.swap(i - 1, j);
            p[i..].reverse();
            next = Some(p);
        }
        Some(current)
    })
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "carrier {}", self.n)?;
        for (op, t) in self.tables() {
            writeln!(f, "op {op}")?;
            for a in 0..self.n {
                let row: Vec<String> = t.row(a).iter().map(u8::to_string).collect();
                writeln!(f, "{}", row.join(" "))?;
            }
        }
        Ok(())
    }
}

impl Serialize for Algebra {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Algebra {
    type Err = AlgebraError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_algebra(text)
    }
}

fn malformed(line: usize, col: usize, msg: impl Into<String>) -> AlgebraError {
    AlgebraError::Malformed {
        line,
        col,
        msg: msg.into(),
    }
}

fn parse_algebra(text: &str) -> Result<Algebra, AlgebraError> {
    // (1-based line number, line) for non-blank lines
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let last_line = text.lines().count().max(1);

    let (ln, header) = lines
        .next()
        .ok_or_else(|| malformed(1, 1, "expected `carrier <n>`"))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("carrier") {
        return Err(malformed(ln, col_of(header, 0), "expected `carrier <n>`"));
    }
    let n = match (words.next(), words.next()) {
        (Some(w), None) => w
            .parse::<usize>()
            .map_err(|_| malformed(ln, word_col(header, w), format!("bad carrier size `{w}`")))?,
        _ => return Err(malformed(ln, 1, "expected `carrier <n>`")),
    };
    if n == 0 || n > MAX_CARRIER {
        return Err(AlgebraError::BadCarrier(n));
    }

    let mut ops = Vec::new();
    while let Some((ln, line)) = lines.next() {
        let mut words = line.split_whitespace();
        if words.next() != Some("op") {
            return Err(malformed(ln, col_of(line, 0), "expected `op <symbol>`"));
        }
        let op: OpSymbol = match (words.next(), words.next()) {
            (Some(w), None) => w
                .parse()
                .map_err(|e: String| malformed(ln, word_col(line, w), e))?,
            _ => return Err(malformed(ln, 1, "expected `op <symbol>`")),
        };
        let mut cells = Vec::with_capacity(n * n);
        for row in 0..n {
            let (ln, line) = lines.next().ok_or_else(|| {
                malformed(
                    last_line,
                    1,
                    format!("table `{op}` ends after {row} of {n} rows"),
                )
            })?;
            let mut count = 0;
            for w in line.split_whitespace() {
                let col = word_col(line, w);
                let value: usize = w
                    .parse()
                    .map_err(|_| malformed(ln, col, format!("bad entry `{w}`")))?;
                if value >= n {
                    return Err(AlgebraError::FileEntryOutOfRange {
                        line: ln,
                        col,
                        value,
                        order: n,
                    });
                }
                count += 1;
                if count > n {
                    return Err(malformed(ln, col, format!("row has more than {n} entries")));
                }
                cells.push(value as u8);
            }
            if count < n {
                return Err(malformed(
                    ln,
                    line.len() + 1,
                    format!("row has {count} entries, expected {n}"),
                ));
            }
        }
        ops.push((op, Table::from_cells(n, cells)));
    }
    Algebra::new(n, ops)
}

fn col_of(line: &str, skip: usize) -> usize {
    line.len() - line.trim_start().len() + skip + 1
}

// Column of a word borrowed from `line` by `split_whitespace`.
fn word_col(line: &str, word: &str) -> usize {
    word.as_ptr() as usize - line.as_ptr() as usize + 1
}

/// Idempotents per operation and their intersection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotentReport {
    pub per_symbol: BTreeMap<OpSymbol, Vec<usize>>,
    pub common: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PowerCycle {
    /// Exponent of the first repeated power.
    pub index: usize,
    pub period: usize,
    /// Least multiple of `period` that is at least `index`.
    pub exponent: usize,
    pub idempotent: usize,
}

/// A variable assignment, ordered by variable name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Assignment(pub Vec<(Var, usize)>);

impl Assignment {
    pub fn get(&self, v: Var) -> Option<usize> {
        self.0.iter().find(|(w, _)| *w == v).map(|(_, e)| *e)
    }

    pub fn to_map(&self) -> BTreeMap<Var, usize> {
        self.0.iter().copied().collect()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}={e}")?;
        }
        Ok(())
    }
}

impl Serialize for Assignment {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (v, e) in &self.0 {
            map.serialize_entry(&v.name().to_string(), e)?;
        }
        map.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Satisfaction {
    Holds,
    /// The lexicographically least falsifying assignment.
    Fails(Assignment),
}

impl Satisfaction {
    pub fn holds(&self) -> bool {
        matches!(self, Satisfaction::Holds)
    }

    pub fn witness(&self) -> Option<&Assignment> {
        match self {
            Satisfaction::Holds => None,
            Satisfaction::Fails(w) => Some(w),
        }
    }
}

/// A quasi-identity compiled against variable slots.
#[derive(Clone, Debug)]
pub(crate) struct Checker {
    vars: Vec<Var>,
    premises: Vec<(Program, Program)>,
    conclusion: (Program, Program),
}

impl Checker {
    pub(crate) fn new(q: &QuasiIdentity) -> Checker {
        let vars: Vec<Var> = q.variables().into_iter().collect();
        let slots: BTreeMap<Var, usize> = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let compile = |id: &Identity| {
            (
                Program::compile(&id.lhs, &slots),
                Program::compile(&id.rhs, &slots),
            )
        };
        Checker {
            premises: q.premises.iter().map(compile).collect(),
            conclusion: compile(&q.conclusion),
            vars,
        }
    }

    pub(crate) fn witness(&self, values: &[u8]) -> Assignment {
        Assignment(
            self.vars
                .iter()
                .zip(values)
                .map(|(v, e)| (*v, *e as usize))
                .collect(),
        )
    }

    /// First assignment (lexicographic) that definitely violates the
    /// quasi-identity. Cells equal to `UNKNOWN` make an assignment
    /// undetermined, never a violation, so this also serves partial tables.
    pub(crate) fn first_violation(&self, n: usize, tables: &[&[u8]; 2]) -> Option<Vec<u8>> {
        let k = self.vars.len();
        let mut values = vec![0u8; k];
        let mut stack = Vec::with_capacity(16);
        loop {
            if self.violated_at(n, tables, &values, &mut stack) {
                return Some(values);
            }
            // odometer, last variable fastest
            let mut i = k;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                values[i] += 1;
                if (values[i] as usize) < n {
                    break;
                }
                values[i] = 0;
            }
        }
    }

    #[inline]
    fn violated_at(
        &self,
        n: usize,
        tables: &[&[u8]; 2],
        values: &[u8],
        stack: &mut Vec<u8>,
    ) -> bool {
        for (l, r) in &self.premises {
            match (
                l.eval(tables, n, values, stack),
                r.eval(tables, n, values, stack),
            ) {
                (Some(a), Some(b)) if a == b => {}
                _ => return false,
            }
        }
        let (l, r) = &self.conclusion;
        matches!(
            (l.eval(tables, n, values, stack), r.eval(tables, n, values, stack)),
            (Some(a), Some(b)) if a != b
        )
    }
}
