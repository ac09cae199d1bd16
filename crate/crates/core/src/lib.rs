//! Regular resolution refutations for CNFs with bounded-treewidth structure.
//!
//! The crate has three jobs:
//!
//! * build refutations for unsatisfiable CNFs whose *incidence* graph has a
//!   one-sided tree decomposition of small width (`onesided`),
//! * build refutations for CNFs that become small-primal-treewidth after
//!   removing a handful of designated "long" clauses (`longclauses`),
//! * check any claimed refutation against the definition of regular
//!   resolution, independently of how it was produced (`proof`).
//!
//! `cnf` and `decomp` hold the shared formula / decomposition machinery, and
//! `oracle` holds the brute-force deciders and instance generators the test
//! suite uses to cross-examine the constructions.

pub mod cnf;
pub mod decomp;
pub mod longclauses;
pub mod onesided;
pub mod oracle;
pub mod proof;
pub mod report;
