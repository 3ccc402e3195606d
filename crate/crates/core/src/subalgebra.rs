//! Subuniverses: nonempty subsets of the carrier closed under every operation.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError};
use crate::term::OpSymbol;

/// Largest carrier for which [`all_subuniverses`] enumerates subsets.
pub const ALL_SUBUNIVERSES_CAP: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SubalgebraError {
    #[error("closure of the empty set: subuniverses are nonempty")]
    EmptySeed,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("listing all subuniverses is limited to carriers of size {cap}, got {order}")]
    CapExceeded { order: usize, cap: usize },
}

/// A nonempty closed subset of `parent`'s carrier, members ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubUniverse<'a> {
    parent: &'a Algebra,
    members: Vec<usize>,
}

impl<'a> SubUniverse<'a> {
    pub fn parent(&self) -> &'a Algebra {
        self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.members.binary_search(&e).is_ok()
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.parent.order()
    }

    pub fn is_subset_of(&self, other: &SubUniverse<'_>) -> bool {
        self.members.iter().all(|&e| other.contains(e))
    }
}

/// `members` closed under every operation of `algebra` (vacuously for the empty set).
pub fn is_closed(algebra: &Algebra, members: &[usize]) -> bool {
    let mut inside = vec![false; algebra.order()];
    for &m in members {
        inside[m] = true;
    }
    algebra.tables().all(|(_, t)| {
        members
            .iter()
            .all(|&a| members.iter().all(|&b| inside[t.get(a, b)]))
    })
}

/// Least closed superset of `seed`.
pub fn closure<'a>(
    algebra: &'a Algebra,
    seed: &[usize],
) -> Result<SubUniverse<'a>, SubalgebraError> {
    if seed.is_empty() {
        return Err(SubalgebraError::EmptySeed);
    }
    let n = algebra.order();
    if let Some(&bad) = seed.iter().find(|&&e| e >= n) {
        return Err(AlgebraError::ElementOutOfRange {
            element: bad,
            order: n,
        }
        .into());
    }
    let mut inside = vec![false; n];
    let mut members = Vec::with_capacity(n);
    for &e in seed {
        if !inside[e] {
            inside[e] = true;
            members.push(e);
        }
    }
    // Worklist: every pair (x, y) with x at or before the cursor has been multiplied both ways.
    let mut cursor = 0;
    while cursor < members.len() {
        let x = members[cursor];
        let mut i = 0;
        while i <= cursor {
            let y = members[i];
            for (_, t) in algebra.tables() {
                for product in [t.get(x, y), t.get(y, x)] {
                    if !inside[product] {
                        inside[product] = true;
                        members.push(product);
                    }
                }
            }
            i += 1;
        }
        cursor += 1;
    }
    members.sort_unstable();
    Ok(SubUniverse {
        parent: algebra,
        members,
    })
}

/// The inclusion-minimal subuniverses, deduplicated and ordered by least member.
pub fn minimal_subuniverses(algebra: &Algebra) -> Vec<SubUniverse<'_>> {
    let mut closures: Vec<SubUniverse<'_>> = (0..algebra.order())
        .map(|a| closure(algebra, &[a]).expect("singleton seed in range"))
        .collect();
    closures.sort_by(|a, b| a.members.cmp(&b.members));
    closures.dedup();
    let mut minimal: Vec<SubUniverse<'_>> = closures
        .iter()
        .filter(|c| {
            !closures
                .iter()
                .any(|d| d.len() < c.len() && d.is_subset_of(c))
        })
        .cloned()
        .collect();
    minimal.sort_by_key(|s| s.members[0]);
    minimal
}

/// True iff the only subuniverse is the whole carrier.
pub fn is_minimal(algebra: &Algebra) -> bool {
    (0..algebra.order()).all(|a| {
        closure(algebra, &[a])
            .expect("singleton seed in range")
            .is_full()
    })
}

/// Every subuniverse, ordered by member list. Only for tiny carriers.
pub fn all_subuniverses(algebra: &Algebra) -> Result<Vec<SubUniverse<'_>>, SubalgebraError> {
    let n = algebra.order();
    if n > ALL_SUBUNIVERSES_CAP {
        return Err(SubalgebraError::CapExceeded {
            order: n,
            cap: ALL_SUBUNIVERSES_CAP,
        });
    }
    let mut out: Vec<SubUniverse<'_>> = (1u32..(1 << n))
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect::<Vec<_>>())
        .filter(|members| is_closed(algebra, members))
        .map(|members| SubUniverse {
            parent: algebra,
            members,
        })
        .collect();
    out.sort_by(|a, b| a.members.cmp(&b.members));
    Ok(out)
}

/// A set of elements together with whether it is closed under all operations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlaggedSet {
    pub members: Vec<usize>,
    pub closed: bool,
}

impl FlaggedSet {
    fn new(algebra: &Algebra, mut members: Vec<usize>) -> FlaggedSet {
        members.sort_unstable();
        members.dedup();
        let closed = is_closed(algebra, &members);
        FlaggedSet { members, closed }
    }
}

/// `aX = { a·x : x ∈ X }` for the operation `op`.
pub fn left_image(algebra: &Algebra, op: OpSymbol, a: usize) -> Result<FlaggedSet, AlgebraError> {
    let t = algebra.try_table(op)?;
    check_element(algebra, a)?;
    Ok(FlaggedSet::new(
        algebra,
        (0..algebra.order()).map(|x| t.get(a, x)).collect(),
    ))
}

/// `{ x : a·x = a }` for the operation `op`; may be empty.
pub fn left_stabilizer(
    algebra: &Algebra,
    op: OpSymbol,
    a: usize,
) -> Result<FlaggedSet, AlgebraError> {
    let t = algebra.try_table(op)?;
    check_element(algebra, a)?;
    Ok(FlaggedSet::new(
        algebra,
        (0..algebra.order()).filter(|&x| t.get(a, x) == a).collect(),
    ))
}

fn check_element(algebra: &Algebra, a: usize) -> Result<(), AlgebraError> {
    if a < algebra.order() {
        Ok(())
    } else {
        Err(AlgebraError::ElementOutOfRange {
            element: a,
            order: algebra.order(),
        })
    }
}
