//! The independent proof checker. It trusts nothing about how a DAG was
//! produced: every acceptance re-derives the defining properties from the
//! edges, and every rejection carries a concrete witness (an offending node,
//! a node pair, or an explicit root-to-sink path).

use std::collections::VecDeque;
use std::fmt;

use crate::cnf::{ClauseId, Cnf, Literal, Variable};
use crate::proof::{NodeLabel, ProofStats, RrDag, RrNodeId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Shape violations: degrees, labels, sources, cycles, reachability.
    Structure {
        node: Option<RrNodeId>,
        detail: String,
    },
    /// `second` is reachable from `first` and both decide `var`.
    NotReadOnce {
        var: Variable,
        first: RrNodeId,
        second: RrNodeId,
    },
    /// Sink names a clause the formula does not have.
    SinkClauseUnknown { node: RrNodeId, clause: ClauseId },
    /// The root-to-sink `path` never sets `literal` false, so it does not
    /// falsify the sink's clause.
    SinkNotFalsified {
        node: RrNodeId,
        clause: ClauseId,
        literal: Literal,
        path: Vec<RrNodeId>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Structure {
                node: Some(n),
                detail,
            } => {
                write!(f, "STRUCTURE at node {n}: {detail}")
            }
            Violation::Structure { node: None, detail } => write!(f, "STRUCTURE: {detail}"),
            Violation::NotReadOnce { var, first, second } => {
                write!(
                    f,
                    "READ_ONCE: {var} decided at {first} and again at reachable {second}"
                )
            }
            Violation::SinkClauseUnknown { node, clause } => {
                write!(f, "SINK_CLAUSE_UNKNOWN at node {node}: no clause {clause}")
            }
            Violation::SinkNotFalsified {
                node,
                clause,
                literal,
                path,
            } => {
                let path: Vec<String> = path.iter().map(ToString::to_string).collect();
                write!(
                    f,
                    "SINK_NOT_FALSIFIED at node {node}: path {} reaches {clause} \
                     without setting {literal} false",
                    path.join("->")
                )
            }
        }
    }
}

/// Verifies that `dag` is a regular resolution refutation of `cnf`. Either
/// every defining property holds and the proof's statistics come back, or the
/// full list of witnessed violations does.
pub fn check_proof(cnf: &Cnf, dag: &RrDag) -> Result<ProofStats, Vec<Violation>> {
    let mut violations = Vec::new();
    let n = dag.num_nodes();
    let adj = dag.out_adjacency();

    // Local discipline: sinks emit nothing; a decision on x emits exactly one
    // x-edge and one ¬x-edge (possibly to the same node).
    for id in (1..=n as u32).map(RrNodeId) {
        let out = &adj[id.index()];
        match dag.label(id) {
            NodeLabel::Sink(_) => {
                if !out.is_empty() {
                    violations.push(Violation::Structure {
                        node: Some(id),
                        detail: format!("sink has {} outgoing edges", out.len()),
                    });
                }
            }
            NodeLabel::Decision(v) => {
                let mut pos = 0;
                let mut neg = 0;
                for &ei in out {
                    let lit = dag.edges[ei].lit;
                    if lit.var != v {
                        violations.push(Violation::Structure {
                            node: Some(id),
                            detail: format!("edge labeled {lit} leaves a decision on {v}"),
                        });
                    } else if lit.positive {
                        pos += 1;
                    } else {
                        neg += 1;
                    }
                }
                if (pos, neg) != (1, 1) {
                    violations.push(Violation::Structure {
                        node: Some(id),
                        detail: format!(
                            "decision on {v} has {pos} positive / {neg} negative out-edges, \
                             wanted one of each"
                        ),
                    });
                }
            }
        }
    }

    // Single source, and it is the root.
    let indeg = dag.in_degrees();
    for id in (1..=n as u32).map(RrNodeId) {
        if id != dag.root && indeg[id.index()] == 0 {
            violations.push(Violation::Structure {
                node: Some(id),
                detail: "second source besides the root".into(),
            });
        }
    }
    if indeg[dag.root.index()] != 0 {
        violations.push(Violation::Structure {
            node: Some(dag.root),
            detail: "root has incoming edges".into(),
        });
    }

    // Acyclicity. Everything after this point walks the graph, so a cycle
    // ends the analysis here.
    let mut deg = indeg.clone();
    let mut seen = 0;
    let mut ready: VecDeque<RrNodeId> = (1..=n as u32)
        .map(RrNodeId)
        .filter(|id| deg[id.index()] == 0)
        .collect();
    while let Some(id) = ready.pop_front() {
        seen += 1;
        for &ei in &adj[id.index()] {
            let t = dag.edges[ei].to;
            deg[t.index()] -= 1;
            if deg[t.index()] == 0 {
                ready.push_back(t);
            }
        }
    }
    if seen != n {
        let on_cycle = (1..=n as u32).map(RrNodeId).find(|id| deg[id.index()] > 0);
        violations.push(Violation::Structure {
            node: on_cycle,
            detail: "graph contains a cycle".into(),
        });
        return Err(violations);
    }

    // Reachability from the root.
    let reachable_from =
        |start: RrNodeId, skip: &dyn Fn(&Literal) -> bool| -> Vec<Option<RrNodeId>> {
            // parent pointer per reached node, start's parent is itself
            let mut parent: Vec<Option<RrNodeId>> = vec![None; n];
            parent[start.index()] = Some(start);
            let mut queue = VecDeque::from([start]);
            while let Some(id) = queue.pop_front() {
                for &ei in &adj[id.index()] {
                    let e = &dag.edges[ei];
                    if skip(&e.lit) || parent[e.to.index()].is_some() {
                        continue;
                    }
                    parent[e.to.index()] = Some(id);
                    queue.push_back(e.to);
                }
            }
            parent
        };
    let from_root = reachable_from(dag.root, &|_| false);
    for id in (1..=n as u32).map(RrNodeId) {
        if from_root[id.index()].is_none() {
            violations.push(Violation::Structure {
                node: Some(id),
                detail: "unreachable from the root".into(),
            });
        }
    }

    // Read-once: no decision on x may reach another decision on x.
    for first in (1..=n as u32).map(RrNodeId) {
        let NodeLabel::Decision(var) = dag.label(first) else {
            continue;
        };
        let reach = reachable_from(first, &|_| false);
        for second in (1..=n as u32).map(RrNodeId) {
            if second != first
                && reach[second.index()].is_some()
                && dag.label(second) == NodeLabel::Decision(var)
            {
                violations.push(Violation::NotReadOnce { var, first, second });
            }
        }
    }

    // Sinks: known clause, falsified along *every* arriving path. The clause
    // literal ℓ is set false on every path iff the sink is unreachable once
    // edges labeled ¬ℓ are removed.
    let unwind = |parent: &[Option<RrNodeId>], end: RrNodeId| -> Vec<RrNodeId> {
        let mut path = vec![end];
        let mut cur = end;
        while let Some(p) = parent[cur.index()] {
            if p == cur {
                break;
            }
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    };
    for id in (1..=n as u32).map(RrNodeId) {
        let NodeLabel::Sink(clause_id) = dag.label(id) else {
            continue;
        };
        if from_root[id.index()].is_none() {
            continue; // already reported unreachable
        }
        let Some(clause) = cnf.clause(clause_id) else {
            violations.push(Violation::SinkClauseUnknown {
                node: id,
                clause: clause_id,
            });
            continue;
        };
        for lit in clause.lits.iter() {
            let neg = lit.negated();
            let avoiding = reachable_from(dag.root, &|l| *l == neg);
            if avoiding[id.index()].is_some() {
                violations.push(Violation::SinkNotFalsified {
                    node: id,
                    clause: clause_id,
                    literal: lit,
                    path: unwind(&avoiding, id),
                });
            }
        }
    }

    if violations.is_empty() {
        Ok(super::stats(dag).expect("acyclicity was just established"))
    } else {
        Err(violations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::parse_dimacs;
    use crate::cnf::tests::lit;
    use crate::proof::tests::toy1_proof;
    use crate::proof::{full_decision_tree_rr, DagBuilder, RrEdge};

    fn toy1() -> Cnf {
        parse_dimacs("p cnf 2 3\n1 0\n-1 2 0\n-2 0\n").unwrap()
    }

    #[test]
    fn accepts_toy1_proof() {
        let stats = check_proof(&toy1(), &toy1_proof()).unwrap();
        assert_eq!(stats.num_nodes, 5);
        assert_eq!(stats.depth, 2);
    }

    #[test]
    fn accepts_full_decision_tree() {
        let cnf = toy1();
        let dag = full_decision_tree_rr(&cnf).unwrap();
        check_proof(&cnf, &dag).unwrap();
    }

    #[test]
    fn accepts_parallel_edges() {
        // For (x1)(¬x1) the variable x2 is irrelevant: both branches of a
        // node deciding it falsify the same clause, giving a legitimate
        // parallel pair (two edges, one target) that the checker must accept.
        let cnf = parse_dimacs("p cnf 2 2\n1 0\n-1 0\n").unwrap();
        let mut b = DagBuilder::new();
        let root = b.add_decision(Variable(1));
        let mid = b.add_decision(Variable(2));
        let s1 = b.add_sink(ClauseId(1));
        let s2 = b.add_sink(ClauseId(2));
        b.add_edge(root, s1, lit(-1));
        b.add_edge(root, mid, lit(1));
        b.add_edge(mid, s2, lit(2));
        b.add_edge(mid, s2, lit(-2));
        let dag = b.finish(root);
        check_proof(&cnf, &dag).unwrap();
    }

    #[test]
    fn rejects_unknown_sink_clause() {
        let mut dag = toy1_proof();
        dag.nodes[4] = NodeLabel::Sink(ClauseId(9));
        let vs = check_proof(&toy1(), &dag).unwrap_err();
        assert_eq!(
            vs,
            vec![Violation::SinkClauseUnknown {
                node: RrNodeId(5),
                clause: ClauseId(9)
            }]
        );
    }

    #[test]
    fn rejects_unfalsified_sink_with_path_witness() {
        let mut dag = toy1_proof();
        // sink 4 claims clause 3 = (¬x2), but it hangs off the ¬x2 branch of
        // node 2 — swap it to clause 1 = (x1), which the path x1,¬x2 leaves
        // satisfied, not falsified.
        dag.nodes[3] = NodeLabel::Sink(ClauseId(1));
        let vs = check_proof(&toy1(), &dag).unwrap_err();
        assert_eq!(
            vs,
            vec![Violation::SinkNotFalsified {
                node: RrNodeId(4),
                clause: ClauseId(1),
                literal: lit(1),
                path: vec![RrNodeId(1), RrNodeId(2), RrNodeId(4)],
            }]
        );
    }

    #[test]
    fn rejects_repeated_decision_on_a_path() {
        // root decides x1, child decides x1 again
        let cnf = toy1();
        let mut b = DagBuilder::new();
        let root = b.add_decision(Variable(1));
        let again = b.add_decision(Variable(1));
        let s1 = b.add_sink(ClauseId(1));
        b.add_edge(root, s1, lit(-1));
        b.add_edge(root, again, lit(1));
        b.add_edge(again, s1, lit(-1));
        b.add_edge(again, s1, lit(1));
        let dag = b.finish(root);
        let vs = check_proof(&cnf, &dag).unwrap_err();
        assert!(vs.contains(&Violation::NotReadOnce {
            var: Variable(1),
            first: RrNodeId(1),
            second: RrNodeId(2),
        }));
    }

    #[test]
    fn rejects_degree_and_label_breakage() {
        let cnf = toy1();
        // decision with two same-sign edges
        let mut b = DagBuilder::new();
        let root = b.add_decision(Variable(1));
        let s1 = b.add_sink(ClauseId(1));
        b.add_edge(root, s1, lit(-1));
        b.add_edge(root, s1, lit(-1));
        let dag = b.finish(root);
        let vs = check_proof(&cnf, &dag).unwrap_err();
        assert!(vs.iter().any(|v| matches!(
            v,
            Violation::Structure { node: Some(RrNodeId(1)), detail } if detail.contains("0 positive")
        )));

        // edge labeled with a foreign variable
        let mut dag = toy1_proof();
        dag.edges[2].lit = lit(1);
        let vs = check_proof(&cnf, &dag).unwrap_err();
        assert!(vs.iter().any(|v| matches!(
            v,
            Violation::Structure {
                node: Some(RrNodeId(2)),
                ..
            }
        )));

        // sink with an out-edge
        let mut dag = toy1_proof();
        dag.edges.push(RrEdge {
            from: RrNodeId(3),
            to: RrNodeId(4),
            lit: lit(2),
        });
        let vs = check_proof(&cnf, &dag).unwrap_err();
        assert!(vs.iter().any(|v| matches!(
            v,
            Violation::Structure {
                node: Some(RrNodeId(3)),
                ..
            }
        )));
    }

    #[test]
    fn rejects_cycles_and_extra_sources() {
        let cnf = toy1();
        let mut dag = toy1_proof();
        // orphan decision node (second source) that also breaks read-once? no
        // — give it a fresh variable so only the source violation fires; but
        // num_vars is 2, so reuse x2 in an unreachable spot: both the source
        // and the read-once scan flag it... keep it simple and assert the
        // source violation is present.
        dag.nodes.push(NodeLabel::Sink(ClauseId(1)));
        let vs = check_proof(&cnf, &dag).unwrap_err();
        assert!(vs.contains(&Violation::Structure {
            node: Some(RrNodeId(6)),
            detail: "second source besides the root".into(),
        }));
        assert!(vs.contains(&Violation::Structure {
            node: Some(RrNodeId(6)),
            detail: "unreachable from the root".into(),
        }));

        let mut dag = toy1_proof();
        dag.edges.push(RrEdge {
            from: RrNodeId(4),
            to: RrNodeId(1),
            lit: lit(2),
        });
        let vs = check_proof(&cnf, &dag).unwrap_err();
        assert!(vs
            .iter()
            .any(|v| matches!(v, Violation::Structure { detail, .. } if detail.contains("cycle"))));
    }

    #[test]
    fn empty_clause_sink_is_vacuously_falsified() {
        let cnf = parse_dimacs("p cnf 1 2\n1 0\n0\n").unwrap();
        let mut b = DagBuilder::new();
        let root = b.add_sink(ClauseId(2));
        let dag = b.finish(root);
        let stats = check_proof(&cnf, &dag).unwrap();
        assert_eq!(stats.depth, 0);
        assert_eq!(stats.num_nodes, 1);
    }
}
