//! Property tests: randomized algebra laws with shrinking, parser fuzzing,
//! and certificate checks for the internal solver.

use proptest::prelude::*;

use rrtw::cnf::{
    build_graph, parse_dimacs, serialize_dimacs, Cnf, GraphFlavor, IllFormed, Literal, LiteralSet,
    Restricted, Variable,
};
use rrtw::decomp::format::parse_decomposition;
use rrtw::decomp::{heuristic_td, primal_to_one_sided, validate};
use rrtw::oracle::{dpll_unsat, OracleVerdict};
use rrtw::proof::check::check_proof;
use rrtw::proof::{full_decision_tree_rr, parse_proof};

fn arb_literal_set(max_var: u32) -> impl Strategy<Value = LiteralSet> {
    proptest::collection::btree_map(1..=max_var, any::<bool>(), 0..=(max_var as usize)).prop_map(
        |signs| {
            LiteralSet::new(signs.into_iter().map(|(v, positive)| Literal {
                var: Variable(v),
                positive,
            }))
            .expect("map keys are distinct variables")
        },
    )
}

fn arb_cnf() -> impl Strategy<Value = Cnf> {
    (1..=6u32).prop_flat_map(|nv| {
        proptest::collection::vec(arb_literal_set(nv), 0..=10)
            .prop_map(move |sets| Cnf::from_literal_sets(nv, sets))
    })
}

proptest! {
    #[test]
    fn dimacs_round_trip(cnf in arb_cnf()) {
        let back = parse_dimacs(&serialize_dimacs(&cnf)).expect("serializer output parses");
        prop_assert_eq!(back, cnf);
    }

    #[test]
    fn parsers_reject_or_accept_but_never_panic(text in "\\PC*") {
        let _ = parse_proof(&text);
        let _ = parse_dimacs(&text);
        let _ = parse_decomposition(&text, &Cnf::from_literal_sets(1, []));
    }

    /// Corrupting one byte of a valid proof file must still parse cleanly or
    /// fail cleanly — and if it parses, the checker must not crash on it.
    #[test]
    fn proof_files_tolerate_single_byte_damage(
        cnf in arb_cnf(),
        pos_frac in 0.0f64..1.0,
        byte in 0u8..=127,
    ) {
        let dag = match full_decision_tree_rr(&cnf) {
            Ok(dag) => dag,
            Err(_) => return Ok(()), // satisfiable draw: nothing to corrupt
        };
        let mut text = rrtw::proof::serialize_proof(&dag).into_bytes();
        let pos = ((text.len() as f64 - 1.0) * pos_frac) as usize;
        text[pos] = byte;
        if let Ok(text) = String::from_utf8(text) {
            if let Ok(damaged) = parse_proof(&text) {
                let _ = check_proof(&cnf, &damaged);
            }
        }
    }

    #[test]
    fn union_is_symmetric(a in arb_literal_set(8), b in arb_literal_set(8)) {
        match (a.union(&b), b.union(&a)) {
            (Ok(x), Ok(y)) => {
                prop_assert_eq!(&x, &y);
                prop_assert!(a.iter().all(|l| x.contains(l)));
                prop_assert!(b.iter().all(|l| x.contains(l)));
                prop_assert!(x.iter().all(|l| a.contains(l) || b.contains(l)));
            }
            (Err(IllFormed(v1)), Err(IllFormed(v2))) => prop_assert_eq!(v1, v2),
            _ => prop_assert!(false, "union succeeded in one order only"),
        }
    }

    #[test]
    fn restriction_matches_its_semantics(
        clause in arb_literal_set(8),
        s in arb_literal_set(8),
    ) {
        match clause.restrict(&s) {
            Restricted::Satisfied => {
                prop_assert!(clause.iter().any(|l| s.contains(l)));
            }
            Restricted::Residual(r) => {
                prop_assert!(clause.iter().all(|l| !s.contains(l)));
                prop_assert!(r.iter().all(|l| clause.contains(l) && !s.has_var(l.var)));
                prop_assert!(clause.iter().all(|l| s.has_var(l.var) || r.contains(l)));
            }
        }
    }

    #[test]
    fn projection_never_invents(set in arb_literal_set(8), keep in arb_literal_set(8)) {
        let keep_vars = keep.var_set();
        let p = set.project(&keep_vars);
        prop_assert!(p.iter().all(|l| set.contains(l) && keep_vars.contains(&l.var)));
        prop_assert!(set.iter().all(|l| !keep_vars.contains(&l.var) || p.contains(l)));
    }

    /// Every solver verdict carries a checkable certificate: a satisfying
    /// total assignment, or a complete decision tree the checker accepts.
    #[test]
    fn solver_verdicts_are_certified(cnf in arb_cnf()) {
        match dpll_unsat(&cnf) {
            OracleVerdict::Sat(w) => {
                prop_assert!(w.len() as u32 == cnf.num_vars, "witness must be total");
                prop_assert!(cnf.is_satisfied_by(&w));
            }
            OracleVerdict::Unsat => {
                let dag = full_decision_tree_rr(&cnf)
                    .map_err(|_| TestCaseError::fail("tree found a model after unsat"))?;
                prop_assert!(check_proof(&cnf, &dag).is_ok());
            }
        }
    }

    /// The bundled heuristic must always hand the builders a usable
    /// decomposition, whatever the formula's shape.
    #[test]
    fn heuristic_decompositions_validate(cnf in arb_cnf()) {
        let td = heuristic_td(&build_graph(&cnf, GraphFlavor::Primal));
        let report = validate(&cnf, &td, false)
            .map_err(|v| TestCaseError::fail(format!("primal: {}", v.len())))?;
        prop_assert!(report.width <= cnf.num_vars);
        let os = primal_to_one_sided(&td, &cnf)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        validate(&cnf, &os, true)
            .map_err(|v| TestCaseError::fail(format!("one-sided: {}", v.len())))?;
    }
}
