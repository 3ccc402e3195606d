//! Isomorphism-pruned enumeration of finite algebras, universal sweeps, and
//! the canned counterexample campaigns.
//!
//! Tables are filled depth-first in flattened order (`*` table first, then
//! `+`, both row-major). A branch dies as soon as a constraint instance with
//! all cells known fails, or when the partial table is lexicographically
//! larger than its image under some relabeling. The surviving complete
//! tables are the canonical representatives, each met exactly once.
//!
//! Work is split by the admissible fillings of the first row; each prefix is
//! explored independently and results are merged in prefix order, so reports
//! do not depend on the worker count.

mod campaign;
mod engine;
mod property;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{is_left_distributive, Algebra, AlgebraError, Table};
use crate::term::{OpSymbol, QuasiIdentity};
use engine::Engine;

pub use campaign::{
    run_campaign, write_campaign_report, CampaignCheck, CampaignReport, Expectation, CAMPAIGNS,
};
pub use property::Property;

/// Size caps. Exceeding any of them is an error, never a silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Largest order for pruned enumeration.
    pub max_order: usize,
    /// Largest order for unpruned (labeled, generate-then-filter) scans.
    pub max_unpruned_order: usize,
    /// How many violating classes a report lists at the failing order.
    pub witness_limit: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: 4,
            max_unpruned_order: 3,
            witness_limit: 16,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub limits: Limits,
    /// Threads exploring prefixes; 1 runs inline.
    pub workers: usize,
    /// Record elapsed wall time in reports (makes them non-reproducible).
    pub timing: bool,
    /// Largest order the campaigns scan.
    pub campaign_order: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            limits: Limits::default(),
            workers: 1,
            timing: false,
            campaign_order: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("order {order} exceeds the configured cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("empty order range {min}..={max}")]
    EmptyRange { min: usize, max: usize },
    #[error("a search signature has one or two distinct operations")]
    BadSignature,
    #[error("`{0}` is used but not in the search signature")]
    SymbolOutsideSignature(OpSymbol),
    #[error("unknown campaign `{0}`")]
    UnknownCampaign(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// Pass iff every model has the property.
    Verify,
    /// Look for a model without the property.
    FindCounterexample,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub min_order: usize,
    pub max_order: usize,
    /// Sorted, one or two symbols.
    pub signature: Vec<OpSymbol>,
    pub constraints: Vec<QuasiIdentity>,
    pub property: Property,
    pub target: Target,
}

fn parsed(text: &str) -> QuasiIdentity {
    text.parse().expect("builtin constraint")
}

pub fn associativity(op: OpSymbol) -> QuasiIdentity {
    parsed(&format!("(x{op}y){op}z = x{op}(y{op}z)").replace('*', ""))
}

/// Associativity of both operations and `x(y+z) = xy + xz`.
pub fn left_semiring_constraints() -> Vec<QuasiIdentity> {
    vec![
        associativity(OpSymbol::Mul),
        associativity(OpSymbol::Add),
        parsed("x(y+z) = xy+xz"),
    ]
}

impl SearchSpec {
    /// One-operation models of `constraints` on `*`.
    pub fn groupoids(
        orders: std::ops::RangeInclusive<usize>,
        constraints: Vec<QuasiIdentity>,
        property: Property,
    ) -> Self {
        SearchSpec {
            min_order: *orders.start(),
            max_order: *orders.end(),
            signature: vec![OpSymbol::Mul],
            constraints,
            property,
            target: Target::Verify,
        }
    }

    pub fn left_semirings(orders: std::ops::RangeInclusive<usize>, property: Property) -> Self {
        SearchSpec {
            min_order: *orders.start(),
            max_order: *orders.end(),
            signature: vec![OpSymbol::Mul, OpSymbol::Add],
            constraints: left_semiring_constraints(),
            property,
            target: Target::Verify,
        }
    }

    pub fn with_target(mut self, target: Target) -> Self {
        self.target = target;
        self
    }

    pub fn validate(&self, limits: &Limits) -> Result<(), SearchError> {
        if self.min_order == 0 || self.min_order > self.max_order {
            return Err(SearchError::EmptyRange {
                min: self.min_order,
                max: self.max_order,
            });
        }
        if self.max_order > limits.max_order {
            return Err(SearchError::CapExceeded {
                order: self.max_order,
                cap: limits.max_order,
            });
        }
        let mut sig = self.signature.clone();
        sig.sort();
        sig.dedup();
        if sig.is_empty() || sig.len() != self.signature.len() || sig != self.signature {
            return Err(SearchError::BadSignature);
        }
        let used = self
            .constraints
            .iter()
            .flat_map(|q| q.symbols())
            .chain(self.property.required_symbols());
        for op in used {
            if !sig.contains(&op) {
                return Err(SearchError::SymbolOutsideSignature(op));
            }
        }
        Ok(())
    }

    pub fn echo(&self) -> SpecEcho {
        SpecEcho {
            orders: [self.min_order, self.max_order],
            signature: self.signature.clone(),
            constraints: self.constraints.iter().map(|q| q.to_string()).collect(),
            property: self.property.to_string(),
            target: self.target,
        }
    }
}

/// The search spec as it appears in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecEcho {
    pub orders: [usize; 2],
    pub signature: Vec<OpSymbol>,
    pub constraints: Vec<String>,
    pub property: String,
    pub target: Target,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderCount {
    pub order: usize,
    /// Labeled tables (all relabelings) satisfying the constraints.
    pub labeled: u64,
    /// Isomorphism classes satisfying the constraints.
    pub classes: u64,
    /// Classes without the property.
    pub violations: u64,
    /// Cells assigned during the search.
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub spec: SpecEcho,
    pub counts: Vec<OrderCount>,
    pub labeled: u64,
    pub classes: u64,
    /// Every order in range was scanned completely (or up to the first failing order).
    pub exhaustive: bool,
    pub pass: bool,
    /// Canonically least violator at the least failing order.
    pub witness: Option<Algebra>,
    /// Violators at that order, canonical order, at most `witness_limit` of them.
    pub witnesses: Vec<Algebra>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl SearchReport {
    /// Under `find-counterexample` the interesting outcome is a witness.
    pub fn found(&self) -> bool {
        self.witness.is_some()
    }
}

/// Runs `f` over `items` on up to `workers` threads; results keep input order.
pub(crate) fn parallel_map<I: Sync, T: Send>(
    items: &[I],
    workers: usize,
    f: impl Fn(&I) -> T + Sync,
) -> Vec<T> {
    if workers <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers.min(items.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let value = f(&items[i]);
                slots.lock().expect("no worker panicked")[i] = Some(value);
            });
        }
    });
    slots
        .into_inner()
        .expect("no worker panicked")
        .into_iter()
        .map(|v| v.expect("every slot filled"))
        .collect()
}

struct Chunk {
    labeled: u64,
    classes: u64,
    violations: u64,
    nodes: u64,
    violators: Vec<Algebra>,
    error: Option<AlgebraError>,
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn scan_order(
    spec: &SearchSpec,
    n: usize,
    opts: &SearchOptions,
) -> Result<(OrderCount, Vec<Algebra>), SearchError> {
    let engine = Engine::new(n, &spec.signature, &spec.constraints, true);
    let mut nodes = 0;
    let prefixes = engine.prefixes(n.min(engine.cells()), &mut nodes);
    let limit = opts.limits.witness_limit.max(1);
    let chunks = parallel_map(&prefixes, opts.workers, |prefix| {
        let mut scratch = engine.scratch();
        let mut chunk = Chunk {
            labeled: 0,
            classes: 0,
            violations: 0,
            nodes: 0,
            violators: Vec::new(),
            error: None,
        };
        engine.explore(prefix, &mut scratch, &mut |leaf| {
            chunk.classes += 1;
            chunk.labeled += factorial(n) / leaf.automorphisms as u64;
            let algebra = leaf.algebra();
            match spec.property.holds(&algebra) {
                Ok(true) => {}
                Ok(false) => {
                    chunk.violations += 1;
                    if chunk.violators.len() < limit {
                        chunk.violators.push(algebra);
                    }
                }
                Err(e) => {
                    chunk.error.get_or_insert(e);
                }
            }
        });
        chunk.nodes = scratch.nodes;
        chunk
    });
    let mut count = OrderCount {
        order: n,
        labeled: 0,
        classes: 0,
        violations: 0,
        nodes,
    };
    let mut violators = Vec::new();
    for chunk in chunks {
        if let Some(e) = chunk.error {
            return Err(e.into());
        }
        count.labeled += chunk.labeled;
        count.classes += chunk.classes;
        count.violations += chunk.violations;
        count.nodes += chunk.nodes;
        violators.extend(chunk.violators);
    }
    violators.truncate(limit);
    Ok((count, violators))
}

/// Scans orders upward, stopping after the first order with a violator.
pub fn verify_universally(
    spec: &SearchSpec,
    opts: &SearchOptions,
) -> Result<SearchReport, SearchError> {
    spec.validate(&opts.limits)?;
    let start = Instant::now();
    let mut counts = Vec::new();
    let mut witnesses = Vec::new();
    for n in spec.min_order..=spec.max_order {
        let (count, violators) = scan_order(spec, n, opts)?;
        counts.push(count);
        if !violators.is_empty() {
            witnesses = violators;
            break;
        }
    }
    Ok(SearchReport {
        spec: spec.echo(),
        labeled: counts.iter().map(|c| c.labeled).sum(),
        classes: counts.iter().map(|c| c.classes).sum(),
        counts,
        exhaustive: true,
        pass: witnesses.is_empty(),
        witness: witnesses.first().cloned(),
        witnesses,
        elapsed_ms: opts.timing.then(|| start.elapsed().as_millis() as u64),
    })
}

/// Least-order, canonically least model of the constraints lacking the property.
pub fn find_counterexample(
    spec: &SearchSpec,
    opts: &SearchOptions,
) -> Result<Option<Algebra>, SearchError> {
    Ok(verify_universally(spec, opts)?.witness)
}

/// Canonical representatives of every class satisfying the constraints,
/// ordered by order and then canonical form. The property is ignored.
pub fn enumerate_algebras(spec: &SearchSpec, limits: &Limits) -> Result<Vec<Algebra>, SearchError> {
    spec.validate(limits)?;
    let mut out = Vec::new();
    for n in spec.min_order..=spec.max_order {
        let engine = Engine::new(n, &spec.signature, &spec.constraints, true);
        let mut scratch = engine.scratch();
        engine.explore(&[], &mut scratch, &mut |leaf| out.push(leaf.algebra()));
    }
    Ok(out)
}

/// Every labeled model of `constraints` on `signature` at order `n`, by
/// constraint-pruned DFS without symmetry breaking.
pub fn labeled_models(
    n: usize,
    signature: &[OpSymbol],
    constraints: &[QuasiIdentity],
    limits: &Limits,
) -> Result<Vec<Algebra>, SearchError> {
    let spec = SearchSpec {
        min_order: n,
        max_order: n,
        signature: signature.to_vec(),
        constraints: constraints.to_vec(),
        property: Property::Trivial,
        target: Target::Verify,
    };
    spec.validate(limits)?;
    let engine = Engine::new(n, signature, constraints, false);
    let mut scratch = engine.scratch();
    let mut out = Vec::new();
    engine.explore(&[], &mut scratch, &mut |leaf| out.push(leaf.algebra()));
    Ok(out)
}

/// All `n^(n²)` single-operation tables in lexicographic order of cells.
pub fn all_tables(n: usize, limits: &Limits) -> Result<impl Iterator<Item = Table>, SearchError> {
    if n == 0 {
        return Err(SearchError::EmptyRange { min: 0, max: 0 });
    }
    if n > limits.max_unpruned_order {
        return Err(SearchError::CapExceeded {
            order: n,
            cap: limits.max_unpruned_order,
        });
    }
    let mut next = Some(vec![0u8; n * n]);
    Ok(std::iter::from_fn(move || {
        let current = next.take()?;
        let mut cells = current.clone();
        if let Some(i) = (0..cells.len())
            .rev()
            .find(|&i| (cells[i] as usize) < n - 1)
        {
            cells[i] += 1;
            cells[i + 1..].iter_mut().for_each(|c| *c = 0);
            next = Some(cells);
        }
        Some(Table::from_cells(n, current))
    }))
}

/// Labeled left semirings of order `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiringSweep {
    pub order: usize,
    /// Associative labeled tables (the same set serves `+` and `*`).
    pub associative_tables: usize,
    /// `(+, *)` pairs tested for left distributivity.
    pub pairs_scanned: u64,
    pub semirings: Vec<Algebra>,
}

/// Associative `+` tables first, then associative `*` tables, then the pairs
/// filtered by left distributivity.
pub fn left_semirings_labeled(n: usize, limits: &Limits) -> Result<SemiringSweep, SearchError> {
    let assoc = labeled_models(n, &[OpSymbol::Mul], &[associativity(OpSymbol::Mul)], limits)?;
    let tables: Vec<&Table> = assoc
        .iter()
        .map(|a| a.table(OpSymbol::Mul).expect("groupoid"))
        .collect();
    let mut semirings = Vec::new();
    for add in &tables {
        for mul in &tables {
            if is_left_distributive(n, add, mul) {
                semirings.push(Algebra::bi((*add).clone(), (*mul).clone()));
            }
        }
    }
    Ok(SemiringSweep {
        order: n,
        associative_tables: tables.len(),
        pairs_scanned: (tables.len() * tables.len()) as u64,
        semirings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    #[test]
    fn enumeration_counts() {
        let limits = Limits::default();
        let count = |n, cs: Vec<QuasiIdentity>| {
            enumerate_algebras(
                &SearchSpec::groupoids(n..=n, cs, Property::Trivial),
                &limits,
            )
            .unwrap()
            .len()
        };
        assert_eq!(count(1, vec![]), 1);
        assert_eq!(count(2, vec![]), 10);
        assert_eq!(count(2, vec![associativity(OpSymbol::Mul)]), 5);
    }

    #[test]
    fn semigroups_have_idempotents() {
        let spec = SearchSpec::groupoids(
            1..=3,
            vec![associativity(OpSymbol::Mul)],
            Property::HasIdempotent,
        );
        let r = verify_universally(&spec, &opts()).unwrap();
        assert!(r.pass);
        assert_eq!(
            r.counts.iter().map(|c| c.classes).collect::<Vec<_>>(),
            vec![1, 5, 24]
        );
        assert_eq!(
            r.counts.iter().map(|c| c.labeled).collect::<Vec<_>>(),
            vec![1, 8, 113]
        );
    }

    #[test]
    fn left_self_distributivity_alone_is_not_enough() {
        let lsd = parsed("x(yz) = (xy)(xz)");
        let spec = SearchSpec::groupoids(1..=3, vec![lsd], Property::HasIdempotent);
        let r = verify_universally(&spec, &opts()).unwrap();
        assert!(!r.pass);
        assert_eq!(r.counts.len(), 2);
        let w = r.witness.unwrap();
        assert_eq!(
            w.table(OpSymbol::Mul).unwrap(),
            &Table::from_rows(&[&[1, 0], &[1, 0]])
        );
    }

    #[test]
    fn left_semirings_have_common_idempotents() {
        let spec = SearchSpec::left_semirings(1..=2, Property::HasCommonIdempotent);
        assert!(verify_universally(&spec, &opts()).unwrap().pass);
    }

    #[test]
    fn workers_do_not_change_reports() {
        let spec = SearchSpec::groupoids(1..=3, vec![], Property::HasIdempotent);
        let one = verify_universally(&spec, &opts()).unwrap();
        let four = verify_universally(
            &spec,
            &SearchOptions {
                workers: 4,
                ..opts()
            },
        )
        .unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn caps_and_validation() {
        let spec = SearchSpec::groupoids(1..=5, vec![], Property::Trivial);
        assert_eq!(
            verify_universally(&spec, &opts()),
            Err(SearchError::CapExceeded { order: 5, cap: 4 })
        );
        let spec = SearchSpec::groupoids(1..=2, vec![], Property::IsLeftSemiring);
        assert_eq!(
            verify_universally(&spec, &opts()),
            Err(SearchError::SymbolOutsideSignature(OpSymbol::Add))
        );
        assert!(all_tables(4, &Limits::default()).is_err());
        assert_eq!(all_tables(2, &Limits::default()).unwrap().count(), 16);
    }

    #[test]
    fn labeled_sweeps() {
        let limits = Limits::default();
        assert_eq!(
            labeled_models(2, &[OpSymbol::Mul], &[], &limits)
                .unwrap()
                .len(),
            16
        );
        let sweep = left_semirings_labeled(2, &limits).unwrap();
        assert_eq!(sweep.associative_tables, 8);
        assert_eq!(sweep.pairs_scanned, 64);
        assert!(sweep
            .semirings
            .iter()
            .all(|a| a.is_left_semiring().unwrap()));
    }
}
