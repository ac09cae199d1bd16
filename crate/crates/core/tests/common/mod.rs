//! Corpus builders and brute-force references shared by the integration
//! tests. Everything is seeded, so a failing case reproduces by seed alone.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use rrtw::cnf::{ClauseId, Cnf, Literal, LiteralSet, Variable};
use rrtw::decomp::{primal_to_one_sided, validate, TreeDecomposition};
use rrtw::longclauses::LongClauseSpec;
use rrtw::oracle::{gen_instances, GenError, InstanceRecipe};
use rrtw::proof::{DagBuilder, RrDag};

/// Unsatisfiable instances with one-sided incidence decompositions, obtained
/// by converting generated primal decompositions of width ≤ `max_primal_width`
/// (so the one-sided width exceeds it by at most one). Seeds that fail the
/// resampling filter are skipped, keeping the corpus deterministic.
pub fn onesided_corpus(
    count: usize,
    min_vars: u32,
    max_vars: u32,
    max_primal_width: u32,
) -> Vec<(Cnf, TreeDecomposition)> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        seed += 1;
        let recipe = InstanceRecipe {
            seed,
            num_vars: min_vars + (seed as u32 % (max_vars - min_vars + 1)),
            width: 1 + (seed as u32 % max_primal_width),
            long_clauses: 0,
            density: 2.0 + (seed % 5) as f64 * 0.25,
        };
        match gen_instances(&recipe) {
            Ok((cnf, spec)) => {
                let td = primal_to_one_sided(&spec.short_td, &cnf)
                    .expect("generated decompositions are primal");
                validate(&cnf, &td, true).expect("conversion preserves validity");
                out.push((cnf, td));
            }
            Err(GenError::ResamplingExhausted(_)) => continue,
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
    out
}

/// Unsatisfiable instances whose contradiction runs through `1..=max_p`
/// designated long clauses, with short primal width ≤ `max_k`.
pub fn long_corpus(
    count: usize,
    min_vars: u32,
    max_vars: u32,
    max_k: u32,
    max_p: u32,
) -> Vec<(Cnf, LongClauseSpec)> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        seed += 1;
        let recipe = InstanceRecipe {
            seed,
            num_vars: min_vars + (seed as u32 % (max_vars - min_vars + 1)),
            width: 1 + (seed as u32 % max_k),
            long_clauses: 1 + (seed as u32 % max_p),
            density: 1.2 + (seed % 4) as f64 * 0.2,
        };
        match gen_instances(&recipe) {
            Ok((cnf, spec)) => out.push((cnf, spec)),
            Err(GenError::ResamplingExhausted(_)) => continue,
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
    out
}

/// Ground truth by exhaustive evaluation; usable up to ~20 variables.
pub fn truth_table_unsat(cnf: &Cnf) -> bool {
    assert!(cnf.num_vars <= 20, "truth table too large");
    !(0u64..(1 << cnf.num_vars)).any(|mask| {
        cnf.clauses.iter().all(|c| {
            c.lits
                .iter()
                .any(|l| ((mask >> (l.var.0 - 1)) & 1 == 1) == l.positive)
        })
    })
}

/// Well-formed random clause set over variables `1..=n`.
pub fn random_cnf(rng: &mut ChaCha8Rng, n: u32, num_clauses: usize, max_width: u32) -> Cnf {
    let clauses = (0..num_clauses).map(|_| {
        let width = rng.gen_range(0..=max_width.min(n));
        let vars = rand::seq::index::sample(rng, n as usize, width as usize);
        LiteralSet::new(vars.iter().map(|v| Literal {
            var: Variable(v as u32 + 1),
            positive: rng.gen_bool(0.5),
        }))
        .expect("sampled variables are distinct")
    });
    Cnf::from_literal_sets(n, clauses.collect::<Vec<_>>())
}

/// Random partial assignment: each variable unassigned, positive, or
/// negative with equal probability.
pub fn random_literal_set(rng: &mut ChaCha8Rng, max_var: u32) -> LiteralSet {
    LiteralSet::new((1..=max_var).filter_map(|v| match rng.gen_range(0..3) {
        0 => None,
        d => Some(Literal {
            var: Variable(v),
            positive: d == 1,
        }),
    }))
    .expect("one literal per variable")
}

/// Arbitrary labeled DAG-shaped data for serializer round-trips; makes no
/// attempt to be a valid proof.
pub fn random_dag(rng: &mut ChaCha8Rng) -> RrDag {
    let mut b = DagBuilder::new();
    let n = rng.gen_range(1..=12usize);
    let ids: Vec<_> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.5) {
                b.add_decision(Variable(rng.gen_range(1..=9)))
            } else {
                b.add_sink(ClauseId(rng.gen_range(1..=9)))
            }
        })
        .collect();
    for _ in 0..rng.gen_range(0..=20usize) {
        let from = ids[rng.gen_range(0..n)];
        let to = ids[rng.gen_range(0..n)];
        let lit = Literal {
            var: Variable(rng.gen_range(1..=9)),
            positive: rng.gen_bool(0.5),
        };
        b.add_edge(from, to, lit);
    }
    let root = ids[rng.gen_range(0..n)];
    b.finish(root)
}

/// Variables of every residual clause, for induced-decomposition checks.
pub fn cnf_var_union(cnf: &Cnf) -> BTreeSet<Variable> {
    cnf.clauses.iter().flat_map(|c| c.lits.vars()).collect()
}
