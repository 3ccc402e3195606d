//! A workbench for idempotent-existence results on finite algebras.
//!
//! - [`term`]: terms, identities, quasi-identities and their syntax
//! - [`algebra`]: operation tables, idempotents, satisfaction, canonical forms
//! - [`subalgebra`]: closures, minimal subuniverses, left images and stabilizers
//! - [`schema`]: the two conditions on `(r, s, t)` term triples that force an idempotent
//! - [`search`]: isomorphism-pruned model enumeration, sweeps and campaigns
//! - [`ultrafilter`]: the ultrafilter extension of an operation on a finite carrier
//! - [`hindman`]: finite sums and products, partition witnesses, forcing numbers

pub mod algebra;
pub mod hindman;
pub mod schema;
pub mod search;
pub mod subalgebra;
pub mod term;
pub mod ultrafilter;

pub use algebra::{Algebra, AlgebraError, Assignment, Satisfaction, Table};
pub use term::{Identity, OpSymbol, QuasiIdentity, Signature, Term, Var};
