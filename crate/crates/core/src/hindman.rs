//! Finite sums and products of distinct elements, monochromatic witnesses in
//! colorings of `{1..n}`, and the least `n` at which every coloring has one.
//!
//! Summands are always distinct: `FS([a, b]) = {a, b, a+b}`, never `2a`.
//! Under this convention two colors force a length-2 witness from `n = 9`.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::search::parallel_map;

/// Longest instance whose subset sums or products are listed.
pub const FS_CAP: usize = 20;
/// Largest finite product computed.
pub const PRODUCT_CAP: u64 = 1 << 48;

pub const CONVENTION: &str = "finite sums of distinct elements";

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HindmanError {
    #[error("instance of length {len} exceeds the cap {cap}")]
    TooLong { len: usize, cap: usize },
    #[error("instance must be strictly increasing positive integers")]
    NotAnInstance,
    #[error("a product exceeds {cap}")]
    ProductTooLarge { cap: u64 },
    #[error("{0} is not colored")]
    Uncolored(u64),
    #[error("{0} is colored twice")]
    ColoredTwice(u64),
    #[error("0 cannot be colored; colorings cover 1..n")]
    ZeroColored,
    #[error("no color classes")]
    NoClasses,
    #[error("forcing search needs at least one color and length")]
    DegenerateForcing,
    #[error("no forcing n up to {max_n}")]
    NotForcedWithin { max_n: u64 },
}

/// Strictly increasing positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FsInstance(Vec<u64>);

impl FsInstance {
    pub fn new(elements: Vec<u64>) -> Result<FsInstance, HindmanError> {
        if elements.first() == Some(&0) || elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HindmanError::NotAnInstance);
        }
        Ok(FsInstance(elements))
    }

    pub fn elements(&self) -> &[u64] {
        &self.0
    }
}

fn check_len(xs: &FsInstance) -> Result<(), HindmanError> {
    if xs.0.len() > FS_CAP {
        Err(HindmanError::TooLong {
            len: xs.0.len(),
            cap: FS_CAP,
        })
    } else {
        Ok(())
    }
}

/// Sums of all nonempty subsets.
pub fn finite_sums(xs: &FsInstance) -> Result<BTreeSet<u64>, HindmanError> {
    check_len(xs)?;
    let mut sums = BTreeSet::new();
    let mut partial = vec![0u64];
    for &x in &xs.0 {
        let extended: Vec<u64> = partial.iter().map(|s| s + x).collect();
        sums.extend(&extended);
        partial.extend(extended);
    }
    Ok(sums)
}

/// Products of all nonempty subsets.
pub fn finite_products(xs: &FsInstance) -> Result<BTreeSet<u64>, HindmanError> {
    check_len(xs)?;
    let mut products = BTreeSet::new();
    let mut partial = vec![1u64];
    for &x in &xs.0 {
        let extended = partial
            .iter()
            .map(|p| p.checked_mul(x).filter(|&v| v <= PRODUCT_CAP))
            .collect::<Option<Vec<u64>>>()
            .ok_or(HindmanError::ProductTooLarge { cap: PRODUCT_CAP })?;
        products.extend(&extended);
        partial.extend(extended);
    }
    Ok(products)
}

#[derive(Clone, Copy)]
enum Combine {
    Sum,
    Product,
}

impl Combine {
    fn apply(self, a: u64, b: u64) -> Option<u64> {
        match self {
            Combine::Sum => a.checked_add(b),
            Combine::Product => a.checked_mul(b),
        }
    }
}

/// Depth-first search for an increasing sequence drawn from `candidates` whose
/// subset combinations all lie in `part`. `partial` holds the combinations of
/// the chosen prefix, empty subset excluded.
fn extend_witness(
    part: &BTreeSet<u64>,
    candidates: &[u64],
    k: usize,
    combine: Combine,
    chosen: &mut Vec<u64>,
    partial: &mut Vec<u64>,
) -> bool {
    if chosen.len() == k {
        return true;
    }
    for (i, &x) in candidates.iter().enumerate() {
        let mut fresh = vec![x];
        let fits = partial.iter().all(|&p| match combine.apply(p, x) {
            Some(v) if part.contains(&v) => {
                fresh.push(v);
                true
            }
            _ => false,
        });
        if !fits {
            continue;
        }
        let mark = partial.len();
        partial.extend(fresh);
        chosen.push(x);
        if extend_witness(part, &candidates[i + 1..], k, combine, chosen, partial) {
            return true;
        }
        chosen.pop();
        partial.truncate(mark);
    }
    false
}

fn find_witness(
    part: &BTreeSet<u64>,
    k: usize,
    bound: u64,
    combine: Combine,
) -> Option<FsInstance> {
    let candidates: Vec<u64> = part.range(1..=bound).copied().collect();
    let mut chosen = Vec::with_capacity(k);
    let mut partial = Vec::new();
    extend_witness(part, &candidates, k, combine, &mut chosen, &mut partial)
        .then_some(FsInstance(chosen))
}

/// Lexicographically least length-`k` instance in `part ∩ [1, bound]` whose
/// finite sums all lie in `part`.
pub fn find_fs_witness(part: &BTreeSet<u64>, k: usize, bound: u64) -> Option<FsInstance> {
    find_witness(part, k, bound, Combine::Sum)
}

/// As [`find_fs_witness`] with products in place of sums.
pub fn find_fp_witness(part: &BTreeSet<u64>, k: usize, bound: u64) -> Option<FsInstance> {
    find_witness(part, k, bound, Combine::Product)
}

/// A coloring of `{1..n}`; `colors[i]` is the color of `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Coloring {
    pub n: u64,
    pub colors: Vec<usize>,
}

impl Coloring {
    /// Classes must partition `{1..n}` with `n` the largest listed element.
    pub fn from_classes(classes: &[Vec<u64>]) -> Result<Coloring, HindmanError> {
        if classes.is_empty() {
            return Err(HindmanError::NoClasses);
        }
        let n = classes.iter().flatten().copied().max().unwrap_or(0);
        let mut colors = vec![None; n as usize];
        for (c, class) in classes.iter().enumerate() {
            for &x in class {
                if x == 0 {
                    return Err(HindmanError::ZeroColored);
                }
                if colors[x as usize - 1].replace(c).is_some() {
                    return Err(HindmanError::ColoredTwice(x));
                }
            }
        }
        let colors = colors
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or(HindmanError::Uncolored(i as u64 + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Coloring { n, colors })
    }

    pub fn color_count(&self) -> usize {
        self.colors.iter().max().map_or(0, |&c| c + 1)
    }

    pub fn class(&self, color: usize) -> BTreeSet<u64> {
        (1..=self.n)
            .filter(|&x| self.colors[x as usize - 1] == color)
            .collect()
    }

    pub fn classes(&self) -> Vec<BTreeSet<u64>> {
        (0..self.color_count()).map(|c| self.class(c)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassWitness {
    pub color: usize,
    pub members: Vec<u64>,
    pub witness: Option<FsInstance>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub n: u64,
    pub length: usize,
    pub convention: &'static str,
    pub classes: Vec<ClassWitness>,
    pub monochromatic: bool,
}

pub fn check_partition(c: &Coloring, k: usize) -> PartitionReport {
    let classes: Vec<ClassWitness> = c
        .classes()
        .into_iter()
        .enumerate()
        .map(|(color, members)| ClassWitness {
            color,
            witness: find_fs_witness(&members, k, c.n),
            members: members.into_iter().collect(),
        })
        .collect();
    PartitionReport {
        n: c.n,
        length: k,
        convention: CONVENTION,
        monochromatic: classes.iter().any(|w| w.witness.is_some()),
        classes,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ForcingOptions {
    /// Give up above this `n`.
    pub max_n: u64,
    pub workers: usize,
}

impl Default for ForcingOptions {
    fn default() -> Self {
        ForcingOptions {
            max_n: 24,
            workers: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForcingReport {
    pub colors: usize,
    pub length: usize,
    pub convention: &'static str,
    /// Least `n` at which every coloring of `{1..n}` has a witness.
    pub forcing_n: u64,
    /// Lexicographically least coloring of `{1..forcing_n - 1}` without one.
    pub avoider: Option<Coloring>,
}

/// Is there a length-`len` instance, every finite sum colored like `m`,
/// whose total is `m`? Each witness is first complete when its total gets colored.
fn witness_totalling(len: usize, m: u64, in_class: &dyn Fn(u64) -> bool) -> bool {
    fn go(
        start: u64,
        need: u64,
        m: u64,
        total: u64,
        sums: &mut Vec<u64>,
        in_class: &dyn Fn(u64) -> bool,
    ) -> bool {
        if need == 1 {
            let x = m - total;
            return x >= start && in_class(x) && sums.iter().all(|&s| in_class(s + x));
        }
        let mut x = start;
        // the remaining need - 1 elements all exceed x
        while total + x + (need - 1) * (x + 1) <= m {
            if in_class(x) && sums.iter().all(|&s| in_class(s + x)) {
                let mark = sums.len();
                let fresh: Vec<u64> = sums.iter().map(|&s| s + x).chain([x]).collect();
                sums.extend(fresh);
                if go(x + 1, need - 1, m, total + x, sums, in_class) {
                    return true;
                }
                sums.truncate(mark);
            }
            x += 1;
        }
        false
    }
    go(1, len as u64, m, 0, &mut Vec::new(), in_class)
}

/// Colors `next..=n` extending `colors`, avoiding monochromatic witnesses;
/// returns the first complete avoider in lexicographic order.
fn find_avoider(colors: &mut Vec<usize>, n: u64, k_colors: usize, len: usize) -> bool {
    let m = colors.len() as u64 + 1;
    if m > n {
        return true;
    }
    // New colors are introduced in order, so classes are never relabelings of each other.
    let fresh_allowed = colors.iter().max().map_or(0, |&c| c + 1).min(k_colors - 1);
    for c in 0..=fresh_allowed {
        colors.push(c);
        let in_class = |v: u64| colors[v as usize - 1] == c;
        if !witness_totalling(len, m, &in_class) && find_avoider(colors, n, k_colors, len) {
            return true;
        }
        colors.pop();
    }
    false
}

fn avoider_for(n: u64, k_colors: usize, len: usize, workers: usize) -> Option<Coloring> {
    // Split the search by the colors of the first few integers.
    let depth = n.min(6);
    let mut prefixes = vec![Vec::new()];
    for _ in 0..depth {
        prefixes = prefixes
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                let fresh = p.iter().max().map_or(0, |&c| c + 1).min(k_colors - 1);
                (0..=fresh).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    let results = parallel_map(&prefixes, workers, |prefix| {
        let mut colors = Vec::with_capacity(n as usize);
        for &c in prefix {
            let m = colors.len() as u64 + 1;
            colors.push(c);
            let in_class = |v: u64| colors[v as usize - 1] == c;
            if witness_totalling(len, m, &in_class) {
                return None;
            }
        }
        find_avoider(&mut colors, n, k_colors, len).then_some(colors)
    });
    results
        .into_iter()
        .flatten()
        .next()
        .map(|colors| Coloring { n, colors })
}

/// Least `n` such that every `k_colors`-coloring of `{1..n}` has a
/// monochromatic length-`len` instance, with the avoider just below it.
pub fn forcing_report(
    k_colors: usize,
    len: usize,
    opts: &ForcingOptions,
) -> Result<ForcingReport, HindmanError> {
    if k_colors == 0 || len == 0 {
        return Err(HindmanError::DegenerateForcing);
    }
    let mut avoider = None;
    for n in 1..=opts.max_n {
        match avoider_for(n, k_colors, len, opts.workers) {
            Some(c) => avoider = Some(c),
            None => {
                return Ok(ForcingReport {
                    colors: k_colors,
                    length: len,
                    convention: CONVENTION,
                    forcing_n: n,
                    avoider,
                })
            }
        }
    }
    Err(HindmanError::NotForcedWithin { max_n: opts.max_n })
}

pub fn min_n_forcing(k_colors: usize, len: usize) -> Result<u64, HindmanError> {
    Ok(forcing_report(k_colors, len, &ForcingOptions::default())?.forcing_n)
}
