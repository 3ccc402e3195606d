//! Depth-first filling of operation tables, cell by cell in the order of
//! [`Algebra::flattened`], with two prunes applied after every assignment:
//!
//! - a constraint instance whose cells are all known and that fails kills the branch;
//! - with symmetry breaking on, the partial table must stay lexicographically
//!   `<=` its image under every relabeling, as far as both are known.
//!
//! With symmetry breaking the complete tables that survive are exactly the
//! canonical forms produced by [`Algebra::canonicalize`].

use crate::algebra::{permutations, Algebra, Checker, Table};
use crate::term::{OpSymbol, QuasiIdentity, UNKNOWN};

struct Relabeling {
    forward: Vec<u8>,
    inverse: Vec<u8>,
}

enum Lex {
    Smaller,
    Larger,
    Undecided,
}

pub(crate) struct Engine {
    n: usize,
    slots: Vec<OpSymbol>,
    checkers: Vec<Checker>,
    relabelings: Vec<Relabeling>,
}

/// A complete table set reached by the search.
pub(crate) struct Leaf<'a> {
    tables: &'a [Vec<u8>; 2],
    engine: &'a Engine,
    /// Relabelings fixing the tables, identity included (1 when not breaking symmetry).
    pub automorphisms: usize,
}

impl Leaf<'_> {
    pub fn algebra(&self) -> Algebra {
        let n = self.engine.n;
        Algebra::new(
            n,
            self.engine
                .slots
                .iter()
                .map(|op| (*op, Table::from_cells(n, self.tables[op.index()].clone()))),
        )
        .expect("engine produces valid tables")
    }
}

pub(crate) struct Scratch {
    tables: [Vec<u8>; 2],
    pub nodes: u64,
}

impl Engine {
    /// `signature` must be sorted and free of duplicates.
    pub fn new(
        n: usize,
        signature: &[OpSymbol],
        constraints: &[QuasiIdentity],
        break_symmetry: bool,
    ) -> Engine {
        let relabelings = if break_symmetry {
            permutations(n)
                .skip(1)
                .map(|p| {
                    let mut inverse = vec![0u8; n];
                    for (i, &j) in p.iter().enumerate() {
                        inverse[j] = i as u8;
                    }
                    Relabeling {
                        forward: p.iter().map(|&j| j as u8).collect(),
                        inverse,
                    }
                })
                .collect()
        } else {
            Vec::new()
        };
        Engine {
            n,
            slots: signature.to_vec(),
            checkers: constraints.iter().map(Checker::new).collect(),
            relabelings,
        }
    }

    pub fn cells(&self) -> usize {
        self.slots.len() * self.n * self.n
    }

    pub fn scratch(&self) -> Scratch {
        let nn = self.n * self.n;
        let tables = [OpSymbol::Mul, OpSymbol::Add].map(|op| {
            if self.slots.contains(&op) {
                vec![UNKNOWN; nn]
            } else {
                Vec::new()
            }
        });
        Scratch { tables, nodes: 0 }
    }

    #[inline]
    fn locate(&self, pos: usize) -> (usize, usize) {
        let nn = self.n * self.n;
        (self.slots[pos / nn].index(), pos % nn)
    }

    fn set(&self, s: &mut Scratch, pos: usize, value: u8) {
        let (t, cell) = self.locate(pos);
        s.tables[t][cell] = value;
    }

    fn compare(&self, s: &Scratch, sigma: &Relabeling, filled: usize) -> Lex {
        let n = self.n;
        let nn = n * n;
        for pos in 0..filled {
            let slot = pos / nn;
            let t = self.slots[slot].index();
            let (a, b) = ((pos % nn) / n, pos % n);
            let src = sigma.inverse[a] as usize * n + sigma.inverse[b] as usize;
            if slot * nn + src >= filled {
                return Lex::Undecided;
            }
            let mine = s.tables[t][pos % nn];
            let image = sigma.forward[s.tables[t][src] as usize];
            if mine < image {
                return Lex::Smaller;
            }
            if mine > image {
                return Lex::Larger;
            }
        }
        Lex::Undecided
    }

    fn admissible(&self, s: &Scratch, filled: usize) -> bool {
        if self
            .relabelings
            .iter()
            .any(|sigma| matches!(self.compare(s, sigma, filled), Lex::Larger))
        {
            return false;
        }
        let tables = [s.tables[0].as_slice(), s.tables[1].as_slice()];
        self.checkers
            .iter()
            .all(|c| c.first_violation(self.n, &tables).is_none())
    }

    /// All admissible fillings of the first `depth` cells, in lexicographic order.
    pub fn prefixes(&self, depth: usize, nodes: &mut u64) -> Vec<Vec<u8>> {
        let mut s = self.scratch();
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(depth);
        self.collect_prefixes(&mut s, 0, depth, &mut current, &mut out);
        *nodes += s.nodes;
        out
    }

    fn collect_prefixes(
        &self,
        s: &mut Scratch,
        pos: usize,
        depth: usize,
        current: &mut Vec<u8>,
        out: &mut Vec<Vec<u8>>,
    ) {
        if pos == depth {
            out.push(current.clone());
            return;
        }
        for v in 0..self.n as u8 {
            self.set(s, pos, v);
            s.nodes += 1;
            if self.admissible(s, pos + 1) {
                current.push(v);
                self.collect_prefixes(s, pos + 1, depth, current, out);
                current.pop();
            }
        }
        self.set(s, pos, UNKNOWN);
    }

    /// Visits every admissible completion of `prefix` in lexicographic order.
    pub fn explore(&self, prefix: &[u8], s: &mut Scratch, visit: &mut dyn FnMut(&Leaf<'_>)) {
        for (pos, &v) in prefix.iter().enumerate() {
            self.set(s, pos, v);
        }
        self.descend(s, prefix.len(), visit);
        for pos in 0..prefix.len() {
            self.set(s, pos, UNKNOWN);
        }
    }

    fn descend(&self, s: &mut Scratch, pos: usize, visit: &mut dyn FnMut(&Leaf<'_>)) {
        if pos == self.cells() {
            let fixed = self
                .relabelings
                .iter()
                .filter(|sigma| matches!(self.compare(s, sigma, pos), Lex::Undecided))
                .count();
            visit(&Leaf {
                tables: &s.tables,
                engine: self,
                automorphisms: fixed + 1,
            });
            return;
        }
        for v in 0..self.n as u8 {
            self.set(s, pos, v);
            s.nodes += 1;
            if self.admissible(s, pos + 1) {
                self.descend(s, pos + 1, visit);
            }
        }
        self.set(s, pos, UNKNOWN);
    }
}
