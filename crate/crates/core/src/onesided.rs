//! Refutation construction for CNFs with a one-sided incidence decomposition
//! of bounded width.
//!
//! The construction explores *principal CNFs*: residual formulas attached to
//! decomposition nodes after excluding a clause set and restricting by an
//! assignment of the parent separator. Each reachable unsatisfiable principal
//! CNF becomes one proof node; below it hangs a complete decision tree over
//! the node's fresh bag variables, whose leaves either close with a falsified
//! input clause or jump to the next principal node. Memoization over
//! principal keys is what keeps the result at O(4^k · n) nodes instead of a
//! full decision tree.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::cnf::{Clause, ClauseId, Cnf, Literal, LiteralSet, Restricted, Variable};
use crate::decomp::{validate, NodeId, TdViolation, TreeDecomposition};
use crate::oracle::{dpll_unsat, OracleVerdict, UnsatOracle};
use crate::proof::check::check_proof;
use crate::proof::{DagBuilder, RrDag, RrNodeId};
use crate::report::OnesidedReport;

/// Identity of a principal CNF: decomposition node, excluded clauses, and the
/// separator assignment. Two equal keys denote the same residual formula, so
/// this is the memoization key of the whole build.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrincipalKey {
    pub node: NodeId,
    /// CL′ — excluded clause ids, a subset of the node's clause bag.
    pub excluded: BTreeSet<ClauseId>,
    /// S — assignment over Var(parent) ∩ Var(node).
    pub sep_assign: LiteralSet,
}

/// A principal CNF: residual clauses paired with the input clause they came
/// from, ascending by originating id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalCnf {
    pub key: PrincipalKey,
    pub clauses: Vec<(ClauseId, LiteralSet)>,
}

impl PrincipalCnf {
    pub fn residuals(&self) -> impl Iterator<Item = &LiteralSet> {
        self.clauses.iter().map(|(_, r)| r)
    }

    /// Smallest originating id whose residual is the empty clause.
    pub fn empty_residual(&self) -> Option<ClauseId> {
        self.clauses
            .iter()
            .find(|(_, r)| r.is_empty())
            .map(|(id, _)| *id)
    }
}

/// One step from a principal CNF through a branch assignment into the chosen
/// child's principal CNF.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLink {
    pub parent: PrincipalKey,
    pub branch: LiteralSet,
    pub child: PrincipalKey,
}

/// What a branch assignment leads to: a clause emptied by the branch, or the
/// first unsatisfiable child component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SuccessorOutcome {
    EmptyClauseWitness(ClauseId),
    Component(ComponentLink),
}

/// `firm_successor` resolves the transient chain behind a successor, so its
/// key (if any) always denotes a node the build will materialize.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FirmStep {
    Witness(ClauseId),
    Key(PrincipalKey),
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("input formula is satisfiable; witness {0}")]
    Satisfiable(LiteralSet),
    #[error("decomposition rejected with {} violation(s): {}", .0.len(), format_violations(.0))]
    InvalidDecomposition(Vec<TdViolation>),
    #[error("internal bug: {0}")]
    InternalBug(String),
}

fn format_violations(vs: &[TdViolation]) -> String {
    let lines: Vec<String> = vs.iter().take(5).map(ToString::to_string).collect();
    lines.join("; ")
}

/// Build context plus the state shared across one construction: the
/// decomposition pre-computations and the unsatisfiability oracle.
pub struct Onesided<'a> {
    cnf: &'a Cnf,
    td: &'a TreeDecomposition,
    oracle: &'a mut UnsatOracle,
    /// Var(T_x) per node.
    subtree_vars: Vec<BTreeSet<Variable>>,
    /// Var(T_x) ∖ Var(parent(x)) — the membership filter set.
    below_vars: Vec<BTreeSet<Variable>>,
    /// Var(x) ∖ Var(parent(x)), ascending — the decision-tree variables.
    branch_vars: Vec<Vec<Variable>>,
}

impl<'a> Onesided<'a> {
    /// Validates `td` as a one-sided incidence decomposition of `cnf` and
    /// precomputes the per-node variable sets.
    pub fn new(
        cnf: &'a Cnf,
        td: &'a TreeDecomposition,
        oracle: &'a mut UnsatOracle,
    ) -> Result<Self, BuildError> {
        validate(cnf, td, true).map_err(BuildError::InvalidDecomposition)?;
        let subtree_vars = td.subtree_var_sets();
        let mut below_vars = vec![BTreeSet::new(); td.len()];
        let mut branch_vars = vec![Vec::new(); td.len()];
        for id in td.node_ids() {
            let pv: BTreeSet<Variable> = match td.parent(id) {
                Some(p) => td.node(p).var_bag.clone(),
                None => BTreeSet::new(),
            };
            below_vars[id.index()] = subtree_vars[id.index()].difference(&pv).copied().collect();
            branch_vars[id.index()] = td.node(id).var_bag.difference(&pv).copied().collect();
        }
        Ok(Onesided {
            cnf,
            td,
            oracle,
            subtree_vars,
            below_vars,
            branch_vars,
        })
    }

    /// Φ(x, CL′, S): clauses outside CL′, unsatisfied by S, with a variable
    /// strictly below the parent separator, projected to Var(T_x) and
    /// restricted by S.
    pub fn principal_cnf(&self, key: &PrincipalKey) -> PrincipalCnf {
        let x = key.node.index();
        let mut clauses = Vec::new();
        for c in &self.cnf.clauses {
            if key.excluded.contains(&c.id) {
                continue;
            }
            if !c.lits.vars().any(|v| self.below_vars[x].contains(&v)) {
                continue;
            }
            let proj = c.lits.project(&self.subtree_vars[x]);
            if let Restricted::Residual(r) = proj.restrict(&key.sep_assign) {
                clauses.push((c.id, r));
            }
        }
        PrincipalCnf {
            key: key.clone(),
            clauses,
        }
    }

    /// The y-component of Φ(key) through the branch assignment: excluded
    /// clauses are inherited where y still sees them, plus everything the
    /// combined assignment satisfies; the separator assignment is projected
    /// onto Var(x) ∩ Var(y).
    pub fn child_component(
        &self,
        key: &PrincipalKey,
        branch: &LiteralSet,
        y: NodeId,
    ) -> ComponentLink {
        debug_assert!(self.td.children(key.node).contains(&y));
        let combined = key
            .sep_assign
            .union(branch)
            .expect("separator assignment and branch cover disjoint variables");
        let x_bag = &self.td.node(key.node).var_bag;
        let y_bag = &self.td.node(y).var_bag;
        let separator: BTreeSet<Variable> = x_bag.intersection(y_bag).copied().collect();
        let mut excluded: BTreeSet<ClauseId> = BTreeSet::new();
        for &c in &self.td.node(y).clause_bag {
            let inherited = key.excluded.contains(&c);
            let satisfied = self
                .cnf
                .clause(c)
                .is_some_and(|cl| cl.lits.iter().any(|l| combined.contains(l)));
            if inherited || satisfied {
                excluded.insert(c);
            }
        }
        ComponentLink {
            parent: key.clone(),
            branch: branch.clone(),
            child: PrincipalKey {
                node: y,
                excluded,
                sep_assign: combined.project(&separator),
            },
        }
    }

    /// Resolves a total branch assignment: an emptied residual wins (smallest
    /// originating id), otherwise the smallest-id child with an unsatisfiable
    /// component. Requires Φ(key) unsatisfiable; if neither case holds the
    /// unsatisfiability dichotomy is broken and that is a bug, never a
    /// silently wrong proof.
    pub fn successor(
        &mut self,
        key: &PrincipalKey,
        branch: &LiteralSet,
    ) -> Result<SuccessorOutcome, BuildError> {
        debug_assert_eq!(
            branch.vars().collect::<Vec<_>>(),
            self.branch_vars[key.node.index()],
            "branch assignment must be total on Var(x) ∖ Var(parent)"
        );
        let pcnf = self.principal_cnf(key);
        let mut restricted = Vec::new();
        for (id, r) in &pcnf.clauses {
            if let Restricted::Residual(rr) = r.restrict(branch) {
                if rr.is_empty() {
                    return Ok(SuccessorOutcome::EmptyClauseWitness(*id));
                }
                restricted.push((*id, rr));
            }
        }
        for &y in self.td.children(key.node) {
            let link = self.child_component(key, branch, y);
            let comp = self.principal_cnf(&link.child);
            if self.oracle.is_unsat(comp.residuals()) {
                return Ok(SuccessorOutcome::Component(link));
            }
        }
        Err(BuildError::InternalBug(format!(
            "no empty residual and no unsatisfiable child component at {:?} through {}",
            key.node, branch
        )))
    }

    /// A node is firm when its bag introduces variables its parent lacks.
    pub fn is_firm(&self, node: NodeId) -> bool {
        !self.branch_vars[node.index()].is_empty()
    }

    /// Follows successor(·, ∅) through transient non-leaf nodes. Stops early
    /// at a principal CNF with an emptied residual — that key becomes a sink,
    /// so the chain has nowhere further to go.
    pub fn representative(&mut self, key: PrincipalKey) -> Result<PrincipalKey, BuildError> {
        let mut cur = key;
        loop {
            if self.is_firm(cur.node) || self.td.is_leaf(cur.node) {
                return Ok(cur);
            }
            if self.principal_cnf(&cur).empty_residual().is_some() {
                return Ok(cur);
            }
            match self.successor(&cur, &LiteralSet::empty())? {
                SuccessorOutcome::Component(link) => cur = link.child,
                SuccessorOutcome::EmptyClauseWitness(_) => {
                    unreachable!("empty residual was ruled out above")
                }
            }
        }
    }

    /// Successor followed by representative collapse.
    pub fn firm_successor(
        &mut self,
        key: &PrincipalKey,
        branch: &LiteralSet,
    ) -> Result<FirmStep, BuildError> {
        match self.successor(key, branch)? {
            SuccessorOutcome::EmptyClauseWitness(id) => Ok(FirmStep::Witness(id)),
            SuccessorOutcome::Component(link) => {
                Ok(FirmStep::Key(self.representative(link.child)?))
            }
        }
    }

    /// The key the whole construction starts from: (root, ∅, ∅), collapsed to
    /// its representative when the root is transient.
    pub fn firm_root(&mut self) -> Result<PrincipalKey, BuildError> {
        let key = PrincipalKey {
            node: self.td.root,
            excluded: BTreeSet::new(),
            sep_assign: LiteralSet::empty(),
        };
        if self.td.is_leaf(self.td.root) || self.is_firm(self.td.root) {
            Ok(key)
        } else {
            self.representative(key)
        }
    }

    /// Smallest input clause that yields `residual` inside Φ(key): not
    /// excluded, unsatisfied by the separator assignment, passing the
    /// membership filter, and projecting-then-restricting to exactly
    /// `residual`.
    pub fn initial_clause(
        &self,
        key: &PrincipalKey,
        residual: &LiteralSet,
    ) -> Result<ClauseId, BuildError> {
        let x = key.node.index();
        let candidate = |c: &Clause| -> bool {
            if key.excluded.contains(&c.id) {
                return false;
            }
            if !c.lits.vars().any(|v| self.below_vars[x].contains(&v)) {
                return false;
            }
            let proj = c.lits.project(&self.subtree_vars[x]);
            matches!(proj.restrict(&key.sep_assign), Restricted::Residual(r) if r == *residual)
        };
        self.cnf
            .clauses
            .iter()
            .find(|c| candidate(c))
            .map(|c| c.id)
            .ok_or_else(|| {
                BuildError::InternalBug(format!(
                    "no initial clause for residual {residual} at {:?}",
                    key.node
                ))
            })
    }

    /// Runs the whole construction and self-checks the result before
    /// returning it.
    pub fn build(&mut self) -> Result<(RrDag, OnesidedReport), BuildError> {
        let calls_before = self.oracle.calls;

        // An input empty clause is its own refutation.
        if let Some(c) = self.cnf.empty_clause() {
            let mut b = DagBuilder::new();
            let root = b.add_sink(c);
            let dag = b.finish(root);
            return self.finish_build(dag, 0, calls_before);
        }
        if !self
            .oracle
            .is_unsat(self.cnf.clauses.iter().map(|c| &c.lits))
        {
            let OracleVerdict::Sat(witness) = dpll_unsat(self.cnf) else {
                return Err(BuildError::InternalBug(
                    "oracle and solver disagree on satisfiability".into(),
                ));
            };
            return Err(BuildError::Satisfiable(witness));
        }

        let root_key = self.firm_root()?;
        let mut state = BuildState {
            dag: DagBuilder::new(),
            memo: BTreeMap::new(),
            sinks: BTreeMap::new(),
        };
        let root_node = self.materialize(&mut state, root_key)?;
        let dag = state.dag.finish(root_node);
        self.finish_build(dag, state.memo.len(), calls_before)
    }

    fn finish_build(
        &mut self,
        dag: RrDag,
        principal_keys: usize,
        calls_before: u64,
    ) -> Result<(RrDag, OnesidedReport), BuildError> {
        let k = self.td.width();
        let principal_budget = (self.td.len() as u128) << (2 * (k + 1));
        let node_budget = principal_budget << (k + 2);
        if principal_keys as u128 > principal_budget {
            return Err(BuildError::InternalBug(format!(
                "principal keys {principal_keys} exceed budget {principal_budget}"
            )));
        }
        if dag.num_nodes() as u128 > node_budget {
            return Err(BuildError::InternalBug(format!(
                "{} nodes exceed budget {node_budget}",
                dag.num_nodes()
            )));
        }
        if let Err(violations) = check_proof(self.cnf, &dag) {
            return Err(BuildError::InternalBug(format!(
                "self-check rejected the built proof: {}",
                violations[0]
            )));
        }
        let report = OnesidedReport {
            principal_keys,
            oracle_calls: self.oracle.calls - calls_before,
            nodes: dag.num_nodes(),
            edges: dag.num_edges(),
            node_budget,
        };
        Ok((dag, report))
    }

    /// Returns the proof node for `key`, creating it (and everything it can
    /// reach) on first sight.
    fn materialize(
        &mut self,
        state: &mut BuildState,
        key: PrincipalKey,
    ) -> Result<RrNodeId, BuildError> {
        if let Some(&id) = state.memo.get(&key) {
            return Ok(id);
        }
        let pcnf = self.principal_cnf(&key);
        if let Some(cid) = pcnf.empty_residual() {
            let id = state.sink_for(cid);
            state.memo.insert(key, id);
            return Ok(id);
        }
        let vars = self.branch_vars[key.node.index()].clone();
        if vars.is_empty() {
            return Err(BuildError::InternalBug(format!(
                "reached a transient key without empty residual at {:?}",
                key.node
            )));
        }
        let id = self.decision_tree(state, &key, &vars, &mut Vec::new())?;
        state.memo.insert(key, id);
        Ok(id)
    }

    /// Complete decision tree over `vars` (ascending); each total branch is
    /// resolved through the firm successor.
    fn decision_tree(
        &mut self,
        state: &mut BuildState,
        key: &PrincipalKey,
        vars: &[Variable],
        branch: &mut Vec<Literal>,
    ) -> Result<RrNodeId, BuildError> {
        let Some((&v, rest)) = vars.split_first() else {
            let assignment = LiteralSet::new(branch.clone()).expect("distinct variables");
            return match self.firm_successor(key, &assignment)? {
                FirmStep::Witness(cid) => Ok(state.sink_for(cid)),
                FirmStep::Key(next) => self.materialize(state, next),
            };
        };
        let node = state.dag.add_decision(v);
        for positive in [true, false] {
            let lit = Literal { var: v, positive };
            branch.push(lit);
            let child = self.decision_tree(state, key, rest, branch)?;
            branch.pop();
            state.dag.add_edge(node, child, lit);
        }
        Ok(node)
    }
}

struct BuildState {
    dag: DagBuilder,
    memo: BTreeMap<PrincipalKey, RrNodeId>,
    sinks: BTreeMap<ClauseId, RrNodeId>,
}

impl BuildState {
    fn sink_for(&mut self, clause: ClauseId) -> RrNodeId {
        if let Some(&id) = self.sinks.get(&clause) {
            return id;
        }
        let id = self.dag.add_sink(clause);
        self.sinks.insert(clause, id);
        id
    }
}

/// One-shot entry point: validate, build, self-check, report.
pub fn build_onesided_rr(
    cnf: &Cnf,
    td: &TreeDecomposition,
    oracle: &mut UnsatOracle,
) -> Result<(RrDag, OnesidedReport), BuildError> {
    Onesided::new(cnf, td, oracle)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::tests::lits;
    use crate::cnf::{parse_dimacs, GraphFlavor};
    use crate::decomp::primal_to_one_sided;
    use crate::decomp::tests::toy3;
    use crate::proof::stats;

    fn key(node: u32, excluded: &[u32], sep: &[i64]) -> PrincipalKey {
        PrincipalKey {
            node: NodeId(node),
            excluded: excluded.iter().map(|&i| ClauseId(i)).collect(),
            sep_assign: lits(sep),
        }
    }

    fn ctx<'a>(
        cnf: &'a Cnf,
        td: &'a TreeDecomposition,
        oracle: &'a mut UnsatOracle,
    ) -> Onesided<'a> {
        Onesided::new(cnf, td, oracle).unwrap()
    }

    #[test]
    fn toy3_principal_cnfs() {
        let (cnf, td) = toy3();
        let mut oracle = UnsatOracle::new();
        let os = ctx(&cnf, &td, &mut oracle);
        // Φ(r,∅,∅) is the whole formula
        let root = os.principal_cnf(&key(3, &[], &[]));
        assert_eq!(
            root.clauses,
            vec![
                (ClauseId(1), lits(&[1, 2])),
                (ClauseId(2), lits(&[1, -2])),
                (ClauseId(3), lits(&[-1, 3])),
                (ClauseId(4), lits(&[-1, -3])),
            ]
        );
        // Φ(b,∅,{x1}) = {(x3), (¬x3)}
        let b = os.principal_cnf(&key(2, &[], &[1]));
        assert_eq!(
            b.clauses,
            vec![(ClauseId(3), lits(&[3])), (ClauseId(4), lits(&[-3]))]
        );
        // Φ(a,{d1,d2},{x1}) is empty: nothing left mentions x2
        let a = os.principal_cnf(&key(1, &[1, 2], &[1]));
        assert!(a.clauses.is_empty());
    }

    #[test]
    fn toy3_components_and_successor() {
        let (cnf, td) = toy3();
        let mut oracle = UnsatOracle::new();
        let mut os = ctx(&cnf, &td, &mut oracle);
        let root = key(3, &[], &[]);

        let to_b = os.child_component(&root, &lits(&[1]), NodeId(2));
        assert_eq!(to_b.child, key(2, &[], &[1]));
        let to_a = os.child_component(&root, &lits(&[1]), NodeId(1));
        assert_eq!(to_a.child, key(1, &[1, 2], &[1]));
        let to_a_neg = os.child_component(&root, &lits(&[-1]), NodeId(1));
        assert_eq!(to_a_neg.child, key(1, &[], &[-1]));
        assert_eq!(
            os.principal_cnf(&to_a_neg.child).clauses,
            vec![(ClauseId(1), lits(&[2])), (ClauseId(2), lits(&[-2]))]
        );

        // through {x1} the a-component is satisfiable, so b is chosen
        match os.successor(&root, &lits(&[1])).unwrap() {
            SuccessorOutcome::Component(link) => assert_eq!(link.child, key(2, &[], &[1])),
            other => panic!("expected component, got {other:?}"),
        }
    }

    #[test]
    fn toy1_successor_hits_empty_clause() {
        let cnf = parse_dimacs("p cnf 2 3\n1 0\n-1 2 0\n-2 0\n").unwrap();
        let td = TreeDecomposition::from_bags(
            GraphFlavor::Primal,
            vec![(None, [Variable(1), Variable(2)].into(), BTreeSet::new())],
        )
        .unwrap();
        let one = primal_to_one_sided(&td, &cnf).unwrap();
        let mut oracle = UnsatOracle::new();
        let mut os = ctx(&cnf, &one, &mut oracle);
        let root = key(1, &[], &[]);
        assert_eq!(
            os.successor(&root, &lits(&[1, -2])).unwrap(),
            SuccessorOutcome::EmptyClauseWitness(ClauseId(2))
        );
    }

    #[test]
    fn toy3_initial_clauses() {
        let (cnf, td) = toy3();
        let mut oracle = UnsatOracle::new();
        let os = ctx(&cnf, &td, &mut oracle);
        let b = key(2, &[], &[1]);
        assert_eq!(os.initial_clause(&b, &lits(&[3])).unwrap(), ClauseId(3));
        assert_eq!(os.initial_clause(&b, &lits(&[-3])).unwrap(), ClauseId(4));
    }

    /// Two stacked duplicate bags between the root and the variable-bearing
    /// bag: the representative walks straight through them.
    #[test]
    fn transient_chain_collapses() {
        let cnf = parse_dimacs("p cnf 2 3\n-1 2 0\n-1 -2 0\n1 0\n").unwrap();
        let v = |ids: &[u32]| ids.iter().map(|&i| Variable(i)).collect::<BTreeSet<_>>();
        let c = |ids: &[u32]| ids.iter().map(|&i| ClauseId(i)).collect::<BTreeSet<_>>();
        let td = TreeDecomposition::from_bags(
            GraphFlavor::Incidence,
            vec![
                (None, v(&[1]), c(&[])),                // 1: root {x1}
                (Some(NodeId(1)), v(&[1]), c(&[])),     // 2: transient copy
                (Some(NodeId(1)), v(&[1]), c(&[3])),    // 3: bag of (x1)
                (Some(NodeId(2)), v(&[1, 2]), c(&[])),  // 4: firm {x1,x2}
                (Some(NodeId(4)), v(&[1, 2]), c(&[1])), // 5: bag of (¬x1∨x2)
                (Some(NodeId(4)), v(&[1, 2]), c(&[2])), // 6: bag of (¬x1∨¬x2)
            ],
        )
        .unwrap();
        let mut oracle = UnsatOracle::new();
        let mut os = ctx(&cnf, &td, &mut oracle);
        assert!(!os.is_firm(NodeId(2)));
        assert!(os.is_firm(NodeId(4)));
        assert_eq!(
            os.representative(key(2, &[], &[1])).unwrap(),
            key(4, &[], &[1])
        );
        assert_eq!(
            os.firm_successor(&key(1, &[], &[]), &lits(&[1])).unwrap(),
            FirmStep::Key(key(4, &[], &[1]))
        );
        let (dag, report) = os.build().unwrap();
        assert_eq!(report.principal_keys, 2);
        assert_eq!(stats(&dag).unwrap().num_sinks, 3);
    }

    #[test]
    fn builds_toy3_proof() {
        let (cnf, td) = toy3();
        let mut oracle = UnsatOracle::new();
        let (dag, report) = build_onesided_rr(&cnf, &td, &mut oracle).unwrap();
        assert_eq!(dag.num_nodes(), 7); // 3 decisions + 4 sinks
        assert_eq!(report.principal_keys, 3);
        assert!(report.nodes as u128 <= report.node_budget);
    }

    #[test]
    fn builds_toy1_proof_via_conversion() {
        let cnf = parse_dimacs("p cnf 2 3\n1 0\n-1 2 0\n-2 0\n").unwrap();
        let td = TreeDecomposition::from_bags(
            GraphFlavor::Primal,
            vec![(None, [Variable(1), Variable(2)].into(), BTreeSet::new())],
        )
        .unwrap();
        let one = primal_to_one_sided(&td, &cnf).unwrap();
        let mut oracle = UnsatOracle::new();
        let (dag, _) = build_onesided_rr(&cnf, &one, &mut oracle).unwrap();
        assert!(check_proof(&cnf, &dag).is_ok());
    }

    #[test]
    fn rejects_satisfiable_input() {
        let cnf = parse_dimacs("p cnf 1 1\n1 0\n").unwrap();
        let td = TreeDecomposition::from_bags(
            GraphFlavor::Primal,
            vec![(None, [Variable(1)].into(), BTreeSet::new())],
        )
        .unwrap();
        let one = primal_to_one_sided(&td, &cnf).unwrap();
        let mut oracle = UnsatOracle::new();
        match build_onesided_rr(&cnf, &one, &mut oracle) {
            Err(BuildError::Satisfiable(w)) => assert_eq!(w, lits(&[1])),
            other => panic!("expected satisfiable error, got {other:?}"),
        }
    }

    #[test]
    fn empty_clause_input_is_a_single_sink() {
        let cnf = parse_dimacs("p cnf 1 2\n1 0\n0\n").unwrap();
        let td = TreeDecomposition::from_bags(
            GraphFlavor::Primal,
            vec![(None, [Variable(1)].into(), BTreeSet::new())],
        )
        .unwrap();
        let one = primal_to_one_sided(&td, &cnf).unwrap();
        let mut oracle = UnsatOracle::new();
        let (dag, _) = build_onesided_rr(&cnf, &one, &mut oracle).unwrap();
        assert_eq!(dag.num_nodes(), 1);
    }
}
