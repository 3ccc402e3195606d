//! The ultrafilter extension of a binary operation, evaluated set by set on a
//! finite carrier. Every ultrafilter on a finite set is principal, so the
//! extension must reproduce the original table; this module computes it the
//! long way round as a check on the nesting of the defining formula.
//!
//! For ultrafilters `u`, `v` the product is the family
//!
//! ```text
//! u·v = { S : { b : { a : a·b ∈ S } ∈ u } ∈ v }
//! ```
//!
//! The first argument is fixed by `u` inside, the second by `v` outside.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Table};
use crate::term::OpSymbol;

/// Largest carrier for which families of subsets are enumerated.
pub const ULTRAFILTER_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum UltrafilterError {
    #[error("ultrafilter extension is limited to carriers of size {cap}, got {order}")]
    CapExceeded { order: usize, cap: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("product of u{u} and u{v} is not a principal ultrafilter")]
    NotPrincipal { u: usize, v: usize },
}

/// A subset of the carrier as a bitmask, bit `i` for element `i`.
pub type Subset = u32;

/// The principal ultrafilter at `point`: `S ∈ u` iff `point ∈ S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteUltrafilter {
    pub n: usize,
    pub point: usize,
}

impl FiniteUltrafilter {
    pub fn principal(n: usize, point: usize) -> FiniteUltrafilter {
        assert!(point < n);
        FiniteUltrafilter { n, point }
    }

    pub fn contains(&self, s: Subset) -> bool {
        s >> self.point & 1 == 1
    }

    /// Membership for every subset, indexed by mask.
    pub fn family(&self) -> Vec<bool> {
        (0..1u32 << self.n).map(|s| self.contains(s)).collect()
    }

    pub fn check_invariants(&self) -> FamilyCheck {
        check_family(self.n, &self.family())
    }
}

/// Which ultrafilter axioms a family of subsets satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyCheck {
    pub proper: bool,
    pub upward_closed: bool,
    pub closed_under_intersection: bool,
    /// Contains every set or its complement.
    pub prime: bool,
}

impl FamilyCheck {
    pub fn is_ultrafilter(&self) -> bool {
        self.proper && self.upward_closed && self.closed_under_intersection && self.prime
    }
}

/// Checks the ultrafilter axioms by direct scan over all pairs of subsets.
pub fn check_family(n: usize, family: &[bool]) -> FamilyCheck {
    let full: Subset = (1u32 << n) - 1;
    let members: Vec<Subset> = (0..=full).filter(|&s| family[s as usize]).collect();
    FamilyCheck {
        proper: !family[0] && family[full as usize],
        upward_closed: members.iter().all(|&s| {
            (0..=full)
                .filter(|t| t & s == s)
                .all(|t| family[t as usize])
        }),
        closed_under_intersection: members
            .iter()
            .all(|&s| members.iter().all(|&t| family[(s & t) as usize])),
        prime: (0..=full).all(|s| family[s as usize] || family[(full & !s) as usize]),
    }
}

/// How the two membership tests are nested in the product formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Nesting {
    /// `{S : {b : {a : ab ∈ S} ∈ u} ∈ v}`.
    Canonical,
    /// `{S : {b : {a : ab ∈ S} ∈ v} ∈ u}`: `u` and `v` exchanged.
    Swapped,
    /// `{S : {a : {b : ab ∈ S} ∈ u} ∈ v}`: the letters read in print order.
    AsTypeset,
}

fn product_family(
    t: &Table,
    u: &FiniteUltrafilter,
    v: &FiniteUltrafilter,
    nesting: Nesting,
) -> Vec<bool> {
    let n = t.order();
    let (inner, outer) = match nesting {
        Nesting::Canonical | Nesting::AsTypeset => (u, v),
        Nesting::Swapped => (v, u),
    };
    // Inner set: all x with x·c ∈ S, or c·x ∈ S as typeset.
    let inner_is_left = nesting != Nesting::AsTypeset;
    (0..1u32 << n)
        .map(|s| {
            let outer_set: Subset = (0..n)
                .filter(|&c| {
                    let inner_set: Subset = (0..n)
                        .filter(|&x| {
                            let product = if inner_is_left {
                                t.get(x, c)
                            } else {
                                t.get(c, x)
                            };
                            s >> product & 1 == 1
                        })
                        .fold(0, |m, x| m | 1 << x);
                    inner.contains(inner_set)
                })
                .fold(0, |m, c| m | 1 << c);
            outer.contains(outer_set)
        })
        .collect()
}

fn principal_point(n: usize, family: &[bool]) -> Option<usize> {
    let p = (0..n).find(|&p| family[1 << p])?;
    let u = FiniteUltrafilter::principal(n, p);
    (family == u.family().as_slice()).then_some(p)
}

fn check_cap(n: usize) -> Result<(), UltrafilterError> {
    if n > ULTRAFILTER_CAP {
        Err(UltrafilterError::CapExceeded {
            order: n,
            cap: ULTRAFILTER_CAP,
        })
    } else {
        Ok(())
    }
}

/// The extended operation on principal ultrafilters, as a table on their points.
pub fn extend_operation_with(
    algebra: &Algebra,
    op: OpSymbol,
    nesting: Nesting,
) -> Result<Table, UltrafilterError> {
    let t = algebra.try_table(op)?;
    let n = t.order();
    check_cap(n)?;
    let mut rows = vec![vec![0usize; n]; n];
    for (p, row) in rows.iter_mut().enumerate() {
        for (q, cell) in row.iter_mut().enumerate() {
            let family = product_family(
                t,
                &FiniteUltrafilter::principal(n, p),
                &FiniteUltrafilter::principal(n, q),
                nesting,
            );
            *cell =
                principal_point(n, &family).ok_or(UltrafilterError::NotPrincipal { u: p, v: q })?;
        }
    }
    let rows: Vec<&[usize]> = rows.iter().map(|r| r.as_slice()).collect();
    Ok(Table::from_rows(&rows))
}

pub fn extend_operation(algebra: &Algebra, op: OpSymbol) -> Result<Table, UltrafilterError> {
    extend_operation_with(algebra, op, Nesting::Canonical)
}

/// Every operation replaced by its extension.
pub fn extended_algebra(algebra: &Algebra) -> Result<Algebra, UltrafilterError> {
    let ops = algebra
        .symbols()
        .map(|op| Ok((op, extend_operation(algebra, op)?)))
        .collect::<Result<Vec<_>, UltrafilterError>>()?;
    Ok(Algebra::new(algebra.order(), ops)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub u: usize,
    pub v: usize,
    pub original: usize,
    pub extended: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub order: usize,
    pub op: OpSymbol,
    pub nesting: Nesting,
    pub extended_rows: Vec<Vec<usize>>,
    /// The extended table agrees with the original under `u_p ↔ p`.
    pub equals_original: bool,
    pub first_mismatch: Option<Mismatch>,
    pub original_associative: bool,
    pub extended_associative: bool,
    /// Associative input gives associative extension.
    pub associativity_preserved: bool,
    pub note: &'static str,
}

const NOTE: &str = "all ultrafilters on a finite carrier are principal; agreement here \
says nothing about stability of identities on infinite carriers";

pub fn check_extension_laws(
    algebra: &Algebra,
    op: OpSymbol,
) -> Result<ExtensionReport, UltrafilterError> {
    check_extension_laws_with(algebra, op, Nesting::Canonical)
}

pub fn check_extension_laws_with(
    algebra: &Algebra,
    op: OpSymbol,
    nesting: Nesting,
) -> Result<ExtensionReport, UltrafilterError> {
    let original = algebra.try_table(op)?;
    let extended = extend_operation_with(algebra, op, nesting)?;
    let n = original.order();
    let first_mismatch = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .find(|&(u, v)| original.get(u, v) != extended.get(u, v))
        .map(|(u, v)| Mismatch {
            u,
            v,
            original: original.get(u, v),
            extended: extended.get(u, v),
        });
    let original_associative = original.is_associative();
    let extended_associative = extended.is_associative();
    Ok(ExtensionReport {
        order: n,
        op,
        nesting,
        extended_rows: (0..n)
            .map(|a| extended.row(a).iter().map(|&c| c as usize).collect())
            .collect(),
        equals_original: first_mismatch.is_none(),
        first_mismatch,
        original_associative,
        extended_associative,
        associativity_preserved: !original_associative || extended_associative,
        note: NOTE,
    })
}
